//! Multiplicity sequences and Zariski equisingularity of surface germs in
//! 3-space, computed with exact rational arithmetic.

pub mod corpus;
pub mod disc;
pub mod equising;
pub mod error;
pub mod isolated;
pub mod linalg;
pub mod par;
pub mod parse;
pub mod poly;
pub mod weier;

pub use error::{Error, Result};
pub use par::Exec;
pub use poly::{MPoly, Rat, TruncSeries};
