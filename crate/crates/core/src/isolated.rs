//! Isolated surface singularities: Milnor numbers of plane curves through
//! resultants of the partials, generic sections, and the identities relating
//! them to the multiplicity sequence.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::disc::{discriminant_poly, resultant_poly};
use crate::equising::{multiplicity_sequence, search_nu_transverse, CoordChange, Options, SurfaceGerm, Z};
use crate::error::{Error, Result};
use crate::poly::{gcd, identity_matrix, mat_det, squarefree_part, vars_of, MPoly, Rat, RatMatrix};
use crate::weier::{retry_on_exhaustion, weierstrass, PrecisionBudget};
use crate::TruncSeries;

const XY: [&str; 2] = ["x", "y"];

/// Default number of seeded coordinate trials for Milnor numbers.
pub const MILNOR_TRIALS: u32 = 3;

/// A reduced plane curve germ `g(x, y)` at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurveGerm {
    g: MPoly,
}

impl PlaneCurveGerm {
    pub fn new(g: MPoly) -> Result<Self> {
        let g = g.with_vars(vars_of(&XY))?;
        if g.is_zero() {
            return Err(Error::ZeroInput("plane curve germ"));
        }
        if !g.constant_term().is_zero() {
            return Err(Error::Invalid("curve does not pass through the origin".into()));
        }
        Ok(PlaneCurveGerm { g: squarefree_part(&g)? })
    }

    pub fn g(&self) -> &MPoly {
        &self.g
    }

    pub fn multiplicity(&self) -> u32 {
        self.g.order_at_origin().unwrap_or(0)
    }
}

/// Seeded invertible `k x k` matrix `I + N / (trial + 1)`.
fn draw_matrix(k: usize, seed: u64, trial: u32) -> RatMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1505_1a7e);
    rng.set_stream(trial as u64);
    let den = Rat::from_integer((trial as i64 + 1).into());
    loop {
        let mut m = identity_matrix(k);
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e += Rat::from_integer(rng.gen_range(-3i64..=3).into()) / &den;
            }
        }
        if !mat_det(&m).is_zero() {
            return m;
        }
    }
}

fn vanishes_at_origin(p: &MPoly) -> bool {
    p.constant_term().is_zero()
}

/// Intersection multiplicity at the origin of `p` and `q` in `x, y` bounded
/// above by `ord_x Res_y(p, q)`, with equality in generic coordinates.
fn resultant_order(p: &MPoly, q: &MPoly, opts: &Options) -> Result<u32> {
    let r = resultant_poly(p, q, "y", opts.exec)?;
    r.order_at_origin().ok_or_else(|| Error::NonIsolated("partials share a component".into()))
}

/// Milnor number of a plane curve germ: the least `ord_x Res_y(g_x, g_y)`
/// over `trials` seeded linear changes.
pub fn milnor_plane_curve(c: &PlaneCurveGerm, seed: u64, trials: u32, opts: &Options) -> Result<u32> {
    let g = c.g();
    let gx = g.derivative_at(0);
    let gy = g.derivative_at(1);
    if !vanishes_at_origin(&gx) || !vanishes_at_origin(&gy) {
        return Ok(0);
    }
    // A common factor of the partials through the origin is a curve of
    // critical points; one that is a unit there does not change the count.
    let h = gcd(&gx, &gy);
    if !h.is_constant() && vanishes_at_origin(&h) {
        return Err(Error::NonIsolated(format!("partials share the factor {h}")));
    }
    let mut best: Option<u32> = None;
    for trial in 0..trials.max(1) {
        let m = draw_matrix(2, seed, trial + 1);
        let gt = g.substitute_linear(&XY, &m)?;
        let (p, q) = (gt.derivative_at(0), gt.derivative_at(1));
        let (p, q) = if h.is_constant() {
            (p, q)
        } else {
            let ht = gcd(&p, &q);
            (p.div_exact(&ht).expect("gcd divides"), q.div_exact(&ht).expect("gcd divides"))
        };
        let o = resultant_order(&p, &q, opts)?;
        best = Some(best.map_or(o, |b| b.min(o)));
    }
    Ok(best.expect("at least one trial"))
}

/// Guard against a curve of singular points through the origin: in seeded
/// generic coordinates such a curve projects into the common zeros of
/// `Res_z(f_z, f_x)`, `Res_z(f_z, f_y)` and `Res_z(f_z, f)`.
fn ensure_isolated(f: &MPoly, seed: u64, opts: &Options) -> Result<()> {
    let fc = CoordChange::draw_dense(seed, 1).apply(f)?;
    let fz = fc.derivative_at(Z);
    if fz.degree_in(Z).unwrap_or(0) == 0 {
        return Ok(());
    }
    let mut g = MPoly::zero(fc.vars().clone());
    for other in [fc.derivative_at(0), fc.derivative_at(1), fc.clone()] {
        g = gcd(&g, &resultant_poly(&fz, &other, "z", opts.exec)?);
        if g.is_constant() || !vanishes_at_origin(&g) {
            return Ok(());
        }
    }
    if g.is_zero() {
        return Err(Error::NonIsolated("partials share a component".into()));
    }
    Err(Error::NonIsolated(format!("singular points project onto {g} = 0")))
}

/// The section of the plain germ `f` by the plane `z = a x + b y`, as a
/// curve in `x, y`.
fn plane_section(f: &MPoly, a: &Rat, b: &Rat) -> Result<MPoly> {
    let vars = f.vars().clone();
    let image = &MPoly::var_at(vars.clone(), 0).scale(a) + &MPoly::var_at(vars, 1).scale(b);
    f.substitute(Z, &image).with_vars(vars_of(&XY))
}

/// Milnor numbers of generic sections: `mu2` of the plane section, `mu1`
/// of the line section (`mult - 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SectionNumbers {
    pub mu2: u32,
    pub mu1: u32,
}

/// `(mu2, mu1)` of an isolated surface singularity; `mu2` is minimized over
/// seeded planes `z = a x + b y`.
pub fn mu2_mu1(g: &SurfaceGerm, seed: u64, opts: &Options) -> Result<SectionNumbers> {
    if !g.params().is_empty() {
        return Err(Error::Invalid("sections are taken of a single germ".into()));
    }
    let f = squarefree_part(g.f())?;
    let m = f.order_at_origin().ok_or(Error::ZeroInput("mu2_mu1"))?;
    if m <= 1 {
        return Ok(SectionNumbers { mu2: 0, mu1: 0 });
    }
    ensure_isolated(&f, seed, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ec7_1011);
    let mut best: Option<u32> = None;
    for _ in 0..MILNOR_TRIALS {
        let mut coef = || Rat::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into());
        let (a, b) = (coef(), coef());
        let s = plane_section(&f, &a, &b)?;
        if s.is_zero() || squarefree_part(&s)?.total_degree() != s.total_degree() {
            continue;
        }
        let c = PlaneCurveGerm::new(s)?;
        match milnor_plane_curve(&c, seed, MILNOR_TRIALS, opts) {
            Ok(mu) => best = Some(best.map_or(mu, |b| b.min(mu))),
            Err(Error::NonIsolated(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let mu2 = best.ok_or_else(|| Error::NonIsolated("no plane section with an isolated singularity".into()))?;
    Ok(SectionNumbers { mu2, mu1: m - 1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaA {
    pub m_delta: u32,
    pub mu2: u32,
    pub mu1: u32,
    pub holds: bool,
}

/// Discriminant multiplicity in nested transverse coordinates against
/// `mu2 + mu1`.
pub fn check_formula_a(g: &SurfaceGerm, seed: u64, opts: &Options) -> Result<FormulaA> {
    let o = opts.with_seed(seed);
    let m_delta = multiplicity_sequence(g, &o)?.mu_seq[1];
    let SectionNumbers { mu2, mu1 } = mu2_mu1(g, seed, &o)?;
    Ok(FormulaA { m_delta, mu2, mu1, holds: m_delta == mu2 + mu1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Formula43 {
    pub disc_order: u32,
    pub mu: u32,
    pub mult: u32,
    pub holds: bool,
}

/// Seeded coordinates in which the `y`-axis is not tangent to the curve.
fn transverse_curve(c: &PlaneCurveGerm, seed: u64, opts: &Options) -> Result<MPoly> {
    let m = c.multiplicity();
    for trial in 1..=opts.max_trials {
        let g = c.g().substitute_linear(&XY, &draw_matrix(2, seed, trial))?;
        if !g.lowest_form()?.coeff(&[0, m]).is_zero() {
            return Ok(g);
        }
    }
    Err(Error::TrialsExhausted { trials: opts.max_trials, failures: "y-axis tangent to the curve".into() })
}

/// Order of the discriminant of the Weierstrass polynomial of `g` in `y`.
fn curve_disc_order(g: &MPoly, opts: &Options) -> Result<u32> {
    let budget = PrecisionBudget::for_poly(g, 1, opts.max_precision);
    let (o, _) = retry_on_exhaustion(budget, |n| {
        let (w, _) = weierstrass(&TruncSeries::exact(g.clone()), 1, n)?;
        if w.degree == 1 {
            return Ok(0);
        }
        let d = crate::disc::discriminant(&w.to_series(), "y", opts.exec)?;
        match d.order() {
            crate::poly::Order::Value(k) => Ok(k),
            crate::poly::Order::ZeroToPrecision(p) => {
                Err(Error::PrecisionExhausted { quantity: "curve discriminant order".into(), precision: p })
            }
        }
    })?;
    Ok(o)
}

/// Discriminant order of a curve against `mu + mult - 1`.
pub fn check_formula_43(c: &PlaneCurveGerm, seed: u64, opts: &Options) -> Result<Formula43> {
    let mult = c.multiplicity();
    let g = transverse_curve(c, seed, opts)?;
    let disc_order = if g.degree_in(1) == Some(mult) {
        // y-degree equals the multiplicity: the curve is its own Weierstrass
        // polynomial up to a constant.
        discriminant_poly(&g, "y", opts.exec)?.order_at_origin().ok_or(Error::ZeroInput("curve discriminant"))?
    } else {
        curve_disc_order(&g, opts)?
    };
    let mu = milnor_plane_curve(c, seed, MILNOR_TRIALS, opts)?;
    Ok(Formula43 { disc_order, mu, mult, holds: disc_order + 1 == mu + mult })
}

/// The discriminant curve of the projection forgetting `z`, in nested
/// transverse coordinates found with `opts.seed`; `None` when it is a unit.
pub fn discriminant_curve(g: &SurfaceGerm, opts: &Options) -> Result<Option<PlaneCurveGerm>> {
    if !g.params().is_empty() {
        return Err(Error::Invalid("discriminant curve of a single germ expected".into()));
    }
    let f = squarefree_part(g.f())?;
    let (_, _, h) = search_nu_transverse(&f, opts)?;
    // Far roots only contribute a unit factor near the origin.
    let d = discriminant_poly(&h, "z", opts.exec)?;
    if !vanishes_at_origin(&d) {
        return Ok(None);
    }
    Ok(Some(PlaneCurveGerm::new(d.with_vars(vars_of(&XY))?)?))
}

/// `mu3`, `k` and `phi` are supplied, never computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteratureData {
    pub mu3: u32,
    pub k: u32,
    pub phi: u32,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop44 {
    pub computed: [u32; 4],
    pub predicted: [u32; 4],
    pub holds: bool,
}

/// The multiplicity sequence against
/// `(mu1 + 1, mu2 + mu1, 1, mu3 + mu2 + 2k + 3 phi)`.
pub fn prop44_check(g: &SurfaceGerm, lit: &LiteratureData, seed: u64, opts: &Options) -> Result<Prop44> {
    let o = opts.with_seed(seed);
    let computed = multiplicity_sequence(g, &o)?.mu_seq;
    let SectionNumbers { mu2, mu1 } = mu2_mu1(g, seed, &o)?;
    let predicted = [mu1 + 1, mu2 + mu1, 1, lit.mu3 + mu2 + 2 * lit.k + 3 * lit.phi];
    Ok(Prop44 { computed, predicted, holds: computed == predicted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn curve(s: &str) -> PlaneCurveGerm {
        PlaneCurveGerm::new(parse_poly(s, &XY, &[]).unwrap()).unwrap()
    }

    fn surface(s: &str) -> SurfaceGerm {
        SurfaceGerm::new(parse_poly(s, &["x", "y", "z"], &[]).unwrap(), &[]).unwrap()
    }

    #[test]
    fn milnor_numbers_of_curves() {
        let o = Options::default();
        assert_eq!(milnor_plane_curve(&curve("y^2 - x^3"), 1, 3, &o).unwrap(), 2);
        assert_eq!(milnor_plane_curve(&curve("x*y"), 1, 3, &o).unwrap(), 1);
        assert_eq!(milnor_plane_curve(&curve("y - x^2"), 1, 3, &o).unwrap(), 0);
        assert_eq!(milnor_plane_curve(&curve("y^3 - x^5"), 1, 3, &o).unwrap(), 8);
        // Invariant under a second seed.
        assert_eq!(milnor_plane_curve(&curve("y^3 - x^5"), 7, 3, &o).unwrap(), 8);
    }

    #[test]
    fn squares_are_reduced_away() {
        assert_eq!(curve("(y^2 - x^3)^2").g(), curve("y^2 - x^3").g());
    }

    #[test]
    fn section_numbers() {
        let o = Options::default();
        assert_eq!(mu2_mu1(&surface("x^2 + y^2 + z^2"), 1, &o).unwrap(), SectionNumbers { mu2: 1, mu1: 1 });
        assert_eq!(mu2_mu1(&surface("x^2 + y^2 + z^3"), 1, &o).unwrap(), SectionNumbers { mu2: 1, mu1: 1 });
        assert_eq!(mu2_mu1(&surface("z"), 1, &o).unwrap(), SectionNumbers { mu2: 0, mu1: 0 });
        assert!(matches!(mu2_mu1(&surface("z^2 - x^3"), 1, &o), Err(Error::NonIsolated(_))));
        assert!(matches!(mu2_mu1(&surface("x^2 - y^2*z"), 1, &o), Err(Error::NonIsolated(_))));
    }

    #[test]
    fn formulas_on_small_germs() {
        let o = Options::default();
        for s in ["x^2 + y^2 + z^2", "x^2 + y^2 + z^3", "z^2 - x*y"] {
            let a = check_formula_a(&surface(s), 1, &o).unwrap();
            assert!(a.holds, "{s}: {a:?}");
        }
        let delta = discriminant_curve(&surface("x^2 + y^2 + z^3"), &o).unwrap().unwrap();
        let r = check_formula_43(&delta, 1, &o).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!((r.mult, r.mu), (2, 2));
        assert!(discriminant_curve(&surface("z - x^2"), &o).unwrap().is_none());
        for (s, disc) in [("y^2 - x^3", 3), ("x*y", 2), ("y - x^2", 0)] {
            let r = check_formula_43(&curve(s), 1, &o).unwrap();
            assert!(r.holds, "{s}: {r:?}");
            assert_eq!(r.disc_order, disc);
        }
    }

    #[test]
    fn prop44_for_a1_and_smooth() {
        let o = Options::default();
        let lit = LiteratureData { mu3: 1, k: 0, phi: 0, source: "classical".into() };
        let r = prop44_check(&surface("x^2 + y^2 + z^2"), &lit, 1, &o).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.computed, [2, 2, 1, 2]);
        let zero = LiteratureData { mu3: 0, k: 0, phi: 0, source: "smooth".into() };
        assert!(prop44_check(&surface("z"), &zero, 1, &o).unwrap().holds);
    }
}
