//! Local discriminants, nested transversality, the multiplicity sequence and
//! the family equisingularity deciders.
//!
//! Variables are laid out as `x, y, z` followed by the declared parameters.
//! Projections forget `z`, then `y`.

mod coords;
mod family;
mod kernel;
mod nustar;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::poly::{fmt_rat, squarefree_part, vars_of, MPoly, Rat};

pub use coords::{
    check_nu_transverse, generic_change, search_nu_transverse, CondStatus, Condition, CoordChange, NuTransverseReport,
};
pub use family::{
    family_zariski_equisingular, family_ze_generic, nu_transverse_ze, theorem1_harness, DropWitness, EquisingReport,
    HarnessReport, SeedRun,
};
pub use kernel::{
    chain_head, equimultiple_along_params, local_discriminant, plane_family_ze, ChainHead, Equimult, ParamMode,
    PlaneVerdict, Route, Scope,
};
pub use nustar::{
    coordinate_invariance_test, multiplicity_sequence, nu_star_constant, nu_star_in, semicontinuity_sample,
    MultiplicitySequence, MusqReport, NuStarReport, PartialSeq, SemicontinuityPoint, SemicontinuityReport,
};

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const GEO: [&str; 3] = ["x", "y", "z"];

/// Knobs shared by the deciders.
#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub max_trials: u32,
    /// Overrides the default maximal precision of the controller.
    pub max_precision: Option<u32>,
    pub exec: Exec,
    /// Replace `f` by its squarefree part before deciding.
    pub reduce: bool,
    /// Try the identity before random changes in the coordinate search.
    pub identity_first: bool,
    /// Refute equisingularity early from a multiplicity drop of the
    /// discriminant, a necessary condition.
    pub early_exit: bool,
    /// Largest degree in the distinguished variable for which discriminants
    /// of whole polynomials are formed; beyond it, Weierstrass preparation
    /// at finite precision is used.
    pub exact_route_max_degree: u32,
    /// Condition (3) of nested transversality is not evaluated when the
    /// discriminant curve has a Weierstrass polynomial of larger degree.
    pub cond3_max_degree: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 1,
            max_trials: 32,
            max_precision: None,
            exec: Exec::default(),
            reduce: true,
            identity_first: true,
            early_exit: true,
            exact_route_max_degree: 10,
            cond3_max_degree: 12,
        }
    }
}

impl Options {
    pub fn with_seed(&self, seed: u64) -> Options {
        Options { seed, ..self.clone() }
    }
}

/// A value known exactly or only bounded on one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Exact(u32),
    AtLeast(u32),
    AtMost(u32),
}

impl Bound {
    pub fn exact(self) -> Option<u32> {
        match self {
            Bound::Exact(v) => Some(v),
            _ => None,
        }
    }

    fn interval(self) -> (u32, u32) {
        match self {
            Bound::Exact(v) => (v, v),
            Bound::AtLeast(v) => (v, u32::MAX),
            Bound::AtMost(v) => (0, v),
        }
    }

    /// Strict comparison when the bounds separate the values.
    pub fn cmp_known(self, other: Bound) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        let (a0, a1) = self.interval();
        let (b0, b1) = other.interval();
        if a1 < b0 {
            Some(Less)
        } else if b1 < a0 {
            Some(Greater)
        } else if a0 == a1 && b0 == b1 {
            Some(Equal)
        } else {
            None
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(v) => write!(f, "{v}"),
            Bound::AtLeast(v) => write!(f, ">={v}"),
            Bound::AtMost(v) => write!(f, "<={v}"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Exact(v) => s.serialize_u32(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// A surface germ at the origin of `(x, y, z)`, possibly a family over
/// parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceGerm {
    f: MPoly,
    original: MPoly,
    reduced: bool,
    params: Vec<String>,
}

impl SurfaceGerm {
    /// `f` may use any subset of `x, y, z` and the given parameters.
    pub fn new(f: MPoly, params: &[&str]) -> Result<Self> {
        for p in params {
            if GEO.contains(p) {
                return Err(Error::Invalid(format!("parameter `{p}` clashes with a coordinate")));
            }
        }
        let mut names: Vec<&str> = GEO.to_vec();
        names.extend_from_slice(params);
        let f = f.with_vars(vars_of(&names))?;
        if f.is_zero() {
            return Err(Error::ZeroInput("surface germ"));
        }
        let geo_free = f.terms().any(|(m, _)| m.exps()[..3].iter().all(|&e| e == 0));
        if geo_free {
            return Err(Error::Invalid("germ must vanish at the origin for every parameter value".into()));
        }
        Ok(SurfaceGerm {
            original: f.clone(),
            f,
            reduced: false,
            params: params.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn f(&self) -> &MPoly {
        &self.f
    }

    pub fn original(&self) -> &MPoly {
        &self.original
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn param_indices(&self) -> Vec<usize> {
        (3..3 + self.params.len()).collect()
    }

    /// Replace `f` by its squarefree part.
    pub fn reduce(&self) -> Result<Self> {
        if self.reduced {
            return Ok(self.clone());
        }
        let f = squarefree_part(&self.f)?;
        Ok(SurfaceGerm { f, reduced: true, ..self.clone() })
    }

    /// The fiber over the parameter value `values` as a germ without
    /// parameters.
    pub fn fiber(&self, values: &[Rat]) -> Result<SurfaceGerm> {
        if values.len() != self.params.len() {
            return Err(Error::Invalid(format!("expected {} parameter values", self.params.len())));
        }
        let mut g = self.original.clone();
        for (k, v) in values.iter().enumerate() {
            g = g.eval_var(3 + k, v);
        }
        let g = g.with_vars(vars_of(&GEO))?;
        SurfaceGerm::new(g, &[])
    }

    pub fn special_fiber(&self) -> Result<SurfaceGerm> {
        let zeros = vec![Rat::from_integer(0.into()); self.params.len()];
        self.fiber(&zeros)
    }
}

pub(crate) fn rat_string(r: &Rat) -> String {
    fmt_rat(r)
}

pub(crate) fn rats_string(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_string).collect()
}
