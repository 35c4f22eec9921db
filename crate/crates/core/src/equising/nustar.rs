//! The multiplicity sequence, its constancy in families and its upper
//! semicontinuity.

use std::cmp::Ordering;

use serde::Serialize;

use crate::equising::coords::{search_nu_transverse, CoordChange, NuTransverseReport};
use crate::equising::family::{disc_order, discriminant_drop};
use crate::equising::kernel::{chain_head, Scope};
use crate::equising::{rats_string, Bound, Options, SurfaceGerm, GEO, Y, Z};
use crate::error::{Error, Result};
use crate::poly::{squarefree_part, vars_of, MPoly, Order, Rat, TruncSeries};
use crate::weier::{retry_on_exhaustion, PrecisionBudget};

/// `(m_V, m_Delta, i0, m_D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicitySequence {
    pub m_v: u32,
    pub m_delta: u32,
    pub i0: u32,
    pub m_d: u32,
    /// The discriminant is a unit and the tail is the convention `(0, 1, 0)`.
    pub smooth_discriminant: bool,
}

impl MultiplicitySequence {
    pub fn smooth(m_v: u32) -> Self {
        MultiplicitySequence { m_v, m_delta: 0, i0: 1, m_d: 0, smooth_discriminant: true }
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.m_v, self.m_delta, self.i0, self.m_d]
    }

    fn partial(&self) -> PartialSeq {
        self.as_array().map(|v| Some(Bound::Exact(v)))
    }
}

/// A multiplicity sequence known only in part; `None` entries were not
/// needed to decide the comparison they come from.
pub type PartialSeq = [Option<Bound>; 4];

#[derive(Clone, Debug, Serialize)]
pub struct MusqReport {
    pub mu_seq: [u32; 4],
    pub smooth: bool,
    pub unit_discriminant: bool,
    pub reduced: bool,
    pub input_squarefree: bool,
    pub coord_change: CoordChange,
    pub precision_used: u32,
    pub transversality: NuTransverseReport,
}

fn order_value(s: &TruncSeries, what: &str) -> Result<u32> {
    match s.order() {
        Order::Value(k) => Ok(k),
        Order::ZeroToPrecision(p) => Err(Error::PrecisionExhausted { quantity: what.into(), precision: p }),
    }
}

/// The multiplicity sequence of the reduced germ `f` in `x, y, z`, in its
/// given (nested transverse) coordinates.
pub fn nu_star_in(f: &MPoly, opts: &Options) -> Result<(MultiplicitySequence, u32)> {
    let m_v = f.order_at_origin().ok_or(Error::ZeroInput("multiplicity sequence"))?;
    let scope = Scope::plain();
    let budget = PrecisionBudget::for_poly(f, Z, opts.max_precision);
    retry_on_exhaustion(budget, |n| {
        let hz = chain_head(&TruncSeries::exact(f.clone()), Z, scope, true, n, opts)?;
        if hz.is_unit(scope) {
            return Ok(MultiplicitySequence::smooth(m_v));
        }
        let m_delta = order_value(&hz.entry, "discriminant order")?;
        let hy = chain_head(&hz.entry, Y, scope, false, n, opts)?;
        let m_d = order_value(&hy.entry, "order of the first nonvanishing generalized discriminant")?;
        Ok(MultiplicitySequence { m_v, m_delta, i0: hy.index as u32, m_d, smooth_discriminant: false })
    })
}

fn plain(g: &SurfaceGerm) -> Result<MPoly> {
    if !g.params().is_empty() {
        return Err(Error::Invalid("the multiplicity sequence is defined for a single germ; take a fiber".into()));
    }
    g.f().with_vars(vars_of(&GEO))
}

/// Multiplicity sequence of a germ without parameters: reduce, search for
/// nested transverse coordinates, compute.
pub fn multiplicity_sequence(g: &SurfaceGerm, opts: &Options) -> Result<MusqReport> {
    let input = plain(g)?;
    let f = squarefree_part(&input)?;
    let input_squarefree = f.total_degree() == input.total_degree();
    let (change, rep, h) = search_nu_transverse(&f, opts)?;
    let (seq, n) = nu_star_in(&h, opts)?;
    Ok(MusqReport {
        mu_seq: seq.as_array(),
        smooth: seq.m_v == 1,
        unit_discriminant: seq.smooth_discriminant,
        reduced: true,
        input_squarefree,
        coord_change: change,
        precision_used: n,
        transversality: rep,
    })
}

/// Multiplicity sequences for several seeds, the identity excluded so that
/// every seed works in its own random coordinates. Returns whether all agree.
pub fn coordinate_invariance_test(g: &SurfaceGerm, seeds: &[u64], opts: &Options) -> Result<(bool, Vec<MusqReport>)> {
    let reports: Vec<MusqReport> = seeds
        .iter()
        .map(|&s| {
            let o = Options { seed: s, identity_first: false, ..opts.clone() };
            multiplicity_sequence(g, &o)
        })
        .collect::<Result<_>>()?;
    let same = reports.windows(2).all(|w| w[0].mu_seq == w[1].mu_seq);
    Ok((same, reports))
}

#[derive(Clone, Debug, Serialize)]
pub struct NuStarReport {
    pub constant: bool,
    pub generic: PartialSeq,
    pub special: PartialSeq,
    pub coord_change: CoordChange,
    pub transversality: NuTransverseReport,
    pub witness: Option<String>,
}

fn specialize_zero(f: &MPoly, params: &[usize]) -> Result<MPoly> {
    let zero = Rat::from_integer(0.into());
    let mut g = f.clone();
    for &i in params {
        g = g.eval_var(i, &zero);
    }
    g.with_vars(vars_of(&GEO))
}

/// Constancy of the multiplicity sequence along the parameters: the special
/// fiber against the fiber over generic parameter values.
pub fn nu_star_constant(g: &SurfaceGerm, opts: &Options) -> Result<NuStarReport> {
    let g = g.reduce()?;
    let fiber = g.special_fiber()?.reduce()?;
    let (change, rep, _) = search_nu_transverse(fiber.f(), opts)?;
    nu_star_constant_with(&g, &change, &rep, opts)
}

/// [`nu_star_constant`] in coordinates already found for the special fiber.
pub(crate) fn nu_star_constant_with(
    g: &SurfaceGerm,
    change: &CoordChange,
    rep: &NuTransverseReport,
    opts: &Options,
) -> Result<NuStarReport> {
    let params = g.param_indices();
    let f = squarefree_part(&change.apply(g.f())?)?;
    let f0 = squarefree_part(&specialize_zero(&f, &params)?)?;
    let field = Scope::field(&params);
    let mut out = NuStarReport {
        constant: false,
        generic: [None; 4],
        special: [None; 4],
        coord_change: change.clone(),
        transversality: rep.clone(),
        witness: None,
    };
    let gen_mv = field.order(&f).ok_or(Error::ZeroInput("nu_star_constant"))?;
    let spec_mv = f0.order_at_origin().ok_or(Error::ZeroInput("nu_star_constant"))?;
    out.generic[0] = Some(Bound::Exact(gen_mv));
    out.special[0] = Some(Bound::Exact(spec_mv));
    if gen_mv != spec_mv {
        out.witness = Some("multiplicity changes along the parameters".into());
        return Ok(out);
    }
    if opts.early_exit {
        if let Some(w) = discriminant_drop(&f, &params, opts)? {
            out.generic[1] = Some(Bound::AtMost(w.at_sample));
            out.special[1] = Some(w.at_origin);
            out.witness = Some(w.describe());
            return Ok(out);
        }
    }
    let generic = generic_sequence(&f, &params, gen_mv, opts)?;
    let (special, _) = nu_star_in(&f0, opts)?;
    out.generic = generic.partial();
    out.special = special.partial();
    out.constant = generic.as_array() == special.as_array();
    Ok(out)
}

/// The sequence of the fiber over generic parameter values, computed with
/// parameters as indeterminate constants.
fn generic_sequence(f: &MPoly, params: &[usize], m_v: u32, opts: &Options) -> Result<MultiplicitySequence> {
    let field = Scope::field(params);
    let hz = chain_head(&TruncSeries::exact(f.clone()), Z, field, true, 0, opts)?;
    if hz.is_unit(field) {
        return Ok(MultiplicitySequence::smooth(m_v));
    }
    let m_delta = field.order(hz.entry.body()).ok_or(Error::ZeroInput("generic discriminant"))?;
    let hy = chain_head(&hz.entry, Y, field, false, 0, opts)?;
    let m_d = field.order(hy.entry.body()).ok_or(Error::ZeroInput("generic discriminant chain"))?;
    Ok(MultiplicitySequence { m_v, m_delta, i0: hy.index as u32, m_d, smooth_discriminant: false })
}

#[derive(Clone, Debug, Serialize)]
pub struct SemicontinuityPoint {
    pub sample: Vec<String>,
    pub at_sample: PartialSeq,
    pub at_origin: PartialSeq,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SemicontinuityReport {
    pub holds: bool,
    pub points: Vec<SemicontinuityPoint>,
}

/// A germ in nested transverse coordinates with its sequence filled in
/// lazily.
struct Probe {
    f: MPoly,
    seq: PartialSeq,
    full: Option<MultiplicitySequence>,
}

impl Probe {
    fn new(g: &SurfaceGerm, opts: &Options) -> Result<Self> {
        let f = squarefree_part(&plain(g)?)?;
        let (_, _, h) = search_nu_transverse(&f, opts)?;
        let m_v = h.order_at_origin().ok_or(Error::ZeroInput("fiber"))?;
        let mut seq = [None; 4];
        seq[0] = Some(Bound::Exact(m_v));
        Ok(Probe { f: h, seq, full: None })
    }

    fn m_delta(&mut self, cap: Option<u32>, opts: &Options) -> Result<Bound> {
        if let Some(b) = self.seq[1] {
            if b.exact().is_some() || cap.is_none() {
                return Ok(b);
            }
        }
        let b = disc_order(&self.f, cap, opts)?;
        self.seq[1] = Some(b);
        Ok(b)
    }

    fn complete(&mut self, opts: &Options) -> Result<MultiplicitySequence> {
        if let Some(s) = self.full {
            return Ok(s);
        }
        let (s, _) = nu_star_in(&self.f, opts)?;
        self.seq = s.partial();
        self.full = Some(s);
        Ok(s)
    }
}

/// Lexicographic comparison computing only as much of both sequences as
/// the answer needs.
fn lazy_cmp(a: &mut Probe, b: &mut Probe, opts: &Options) -> Result<Ordering> {
    let (ma, mb) = (a.seq[0].unwrap(), b.seq[0].unwrap());
    if let Some(o) = ma.cmp_known(mb).filter(|o| o.is_ne()) {
        return Ok(o);
    }
    let da = a.m_delta(None, opts)?;
    let db = b.m_delta(da.exact(), opts)?;
    if let Some(o) = da.cmp_known(db).filter(|o| o.is_ne()) {
        return Ok(o);
    }
    let sa = a.complete(opts)?;
    let sb = b.complete(opts)?;
    Ok(sa.as_array().cmp(&sb.as_array()))
}

/// `nu*(V_s) <= nu*(V_0)` lexicographically at each sample `s`.
pub fn semicontinuity_sample(g: &SurfaceGerm, samples: &[Vec<Rat>], opts: &Options) -> Result<SemicontinuityReport> {
    let mut origin = Probe::new(&g.special_fiber()?, opts)?;
    let mut points = Vec::new();
    for s in samples {
        let mut at = Probe::new(&g.fiber(s)?, opts)?;
        let ord = lazy_cmp(&mut at, &mut origin, opts)?;
        points.push(SemicontinuityPoint {
            sample: rats_string(s),
            at_sample: at.seq,
            at_origin: origin.seq,
            holds: ord != Ordering::Greater,
        });
    }
    Ok(SemicontinuityReport { holds: points.iter().all(|p| p.holds), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use crate::poly::testing::poly;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn musq(terms: &[(&[u32], i64)]) -> [u32; 4] {
        let g = SurfaceGerm::new(poly(&XYZ, terms), &[]).unwrap();
        multiplicity_sequence(&g, &Options::default()).unwrap().mu_seq
    }

    #[test]
    fn hand_computed_sequences() {
        assert_eq!(musq(&[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]), [2, 2, 1, 2]);
        assert_eq!(musq(&[(&[0, 0, 2], 1), (&[3, 0, 0], -1)]), [2, 3, 3, 0]);
        assert_eq!(musq(&[(&[0, 0, 2], 1), (&[1, 2, 0], -1)]), [2, 3, 2, 2]);
        assert_eq!(musq(&[(&[0, 0, 1], 1)]), [1, 0, 1, 0]);
    }

    #[test]
    fn non_reduced_input_is_reduced_first() {
        // (z^2 - x y)^2
        let a1 = poly(&XYZ, &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]);
        let g = SurfaceGerm::new(a1.pow(2), &[]).unwrap();
        let r = multiplicity_sequence(&g, &Options::default()).unwrap();
        assert_eq!(r.mu_seq, [2, 2, 1, 2]);
        assert!(!r.input_squarefree);
    }

    #[test]
    fn invariance_over_seeds() {
        let g = SurfaceGerm::new(poly(&XYZ, &[(&[0, 0, 2], 1), (&[1, 2, 0], -1)]), &[]).unwrap();
        let (same, reps) = coordinate_invariance_test(&g, &[1, 2, 3], &Options::default()).unwrap();
        assert!(same);
        assert!(reps.iter().all(|r| !r.coord_change.is_identity()));
    }

    #[test]
    fn a1_family_is_constant_and_smoothing_is_not() {
        let v = ["x", "y", "z", "t"];
        let a1 = SurfaceGerm::new(poly(&v, &[(&[0, 0, 2, 0], 1), (&[1, 1, 0, 0], -1), (&[2, 0, 0, 1], -1)]), &["t"])
            .unwrap();
        let r = nu_star_constant(&a1, &Options::default()).unwrap();
        assert!(r.constant, "{r:?}");
        assert_eq!(r.special, [2, 2, 1, 2].map(|v| Some(Bound::Exact(v))));
        let smoothing =
            SurfaceGerm::new(poly(&v, &[(&[0, 0, 2, 0], 1), (&[1, 1, 0, 0], -1), (&[1, 0, 0, 1], -1)]), &["t"])
                .unwrap();
        assert!(!nu_star_constant(&smoothing, &Options::default()).unwrap().constant);
        let samples: Vec<Vec<Rat>> = [ratio(1, 2), ratio(1, 3), ratio(-1, 5)].into_iter().map(|r| vec![r]).collect();
        let s = semicontinuity_sample(&smoothing, &samples, &Options::default()).unwrap();
        assert!(s.holds);
        assert_eq!(s.points[0].at_sample[0], Some(Bound::Exact(1)));
    }
}
