//! Family deciders: Zariski equisingularity along the parameters, its
//! nested-transverse variant with the shear parameter adjoined, and the
//! harness comparing them with constancy of the multiplicity sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::disc::discriminant_poly;
use crate::equising::coords::{generic_change, search_nu_transverse, shear_by_b, CoordChange, NuTransverseReport};
use crate::equising::kernel::{
    chain_head, far_unit, local_discriminant, plane_family_ze, Equimult, PlaneVerdict, Scope,
};
use crate::equising::nustar::{nu_star_constant_with, NuStarReport};
use crate::equising::{rats_string, Bound, Options, SurfaceGerm, GEO, Y, Z};
use crate::error::Result;
use crate::poly::{squarefree_part, vars_of, MPoly, Order, Rat, TruncSeries};
use crate::weier::{retry_on_exhaustion, PrecisionBudget};

pub(crate) fn yes_no<S: Serializer>(b: &bool, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(if *b { "yes" } else { "no" })
}

pub(crate) fn opt_yes_no<S: Serializer>(b: &Option<bool>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match b {
        Some(b) => yes_no(b, s),
        None => s.serialize_none(),
    }
}

/// The discriminant's multiplicity drops from the parameter origin to a
/// sample point: the generic multiplicity is at most `at_sample`, the
/// special one is `at_origin`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DropWitness {
    pub sample: Vec<String>,
    pub at_sample: u32,
    pub at_origin: Bound,
}

impl DropWitness {
    pub fn describe(&self) -> String {
        format!(
            "discriminant multiplicity <={} at parameters ({}) against {} at 0",
            self.at_sample,
            self.sample.join(", "),
            self.at_origin
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquisingReport {
    #[serde(serialize_with = "yes_no")]
    pub decision: bool,
    pub j0: Option<usize>,
    pub i0: Option<usize>,
    pub generic_mult: Option<Bound>,
    pub special_mult: Option<Bound>,
    pub unit_discriminant: bool,
    pub coord_change: CoordChange,
    pub precision_used: u32,
    pub witness: Option<String>,
    pub transversality: Option<NuTransverseReport>,
}

impl EquisingReport {
    fn new(change: &CoordChange) -> Self {
        EquisingReport {
            decision: true,
            j0: None,
            i0: None,
            generic_mult: None,
            special_mult: None,
            unit_discriminant: false,
            coord_change: change.clone(),
            precision_used: 0,
            witness: None,
            transversality: None,
        }
    }

    fn absorb(&mut self, v: &PlaneVerdict) {
        self.decision = v.decision;
        let em: Option<Equimult> = v.curve_mult.or(v.mult);
        self.i0 = v.index;
        if let Some(em) = em {
            self.generic_mult = Some(Bound::Exact(em.generic));
            self.special_mult = em.special.map(Bound::Exact);
        }
        if v.unit {
            self.unit_discriminant = true;
        } else if v.curve_mult.is_some() {
            self.witness = Some("discriminant curve is not equimultiple along the parameters".into());
        }
    }
}

fn budget(f: &MPoly, opts: &Options) -> PrecisionBudget {
    PrecisionBudget::for_poly(f, Z, opts.max_precision)
}

/// Seeded nonzero rational parameter values.
fn sample_point(seed: u64, k: usize, attempt: u32) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a_5a5a);
    rng.set_stream(attempt as u64);
    (0..k)
        .map(|_| {
            let num: i64 = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let den: i64 = rng.gen_range(2..=7);
            Rat::new(num.into(), den.into())
        })
        .collect()
}

fn specialize(f: &MPoly, params: &[usize], values: &[Rat]) -> Result<MPoly> {
    let mut g = f.clone();
    for (&i, v) in params.iter().zip(values) {
        g = g.eval_var(i, v);
    }
    let geo: Vec<String> = GEO.iter().map(|s| s.to_string()).collect();
    g.with_vars(vars_of(&geo))
}

/// Restriction of the plain germ `g` to the plane `x = a s, y = b s` in the
/// variables `s, z`.
fn on_line(g: &MPoly, a: &Rat, b: &Rat) -> MPoly {
    let terms = g.terms().map(|(m, c)| {
        let e = m.exps();
        let c = c * num_traits::pow(a.clone(), e[0] as usize) * num_traits::pow(b.clone(), e[1] as usize);
        (vec![e[0] + e[1], e[2]], c)
    });
    MPoly::from_terms(vars_of(&["s", "z"]), terms.collect::<Vec<_>>())
}

/// Order in `s` of the Weierstrass discriminant of `g` restricted to the line
/// with slope `b`, or a lower bound above `cap`.
fn order_on_line(g: &MPoly, b: &Rat, cap: Option<u32>, opts: &Options) -> Result<Bound> {
    let h = on_line(g, &Rat::from_integer(1.into()), b);
    let d = h.restrict_zero(&[0]).order_in_var(1).ok_or_else(|| crate::Error::NotRegular { var: "z".into() })?;
    let max = PrecisionBudget::for_poly(&h, 1, opts.max_precision).max;
    // The discriminant of a Weierstrass polynomial of degree `d` prepared at
    // precision `n` is certified to about `n - 2d`; step additively from there.
    let mut n = cap.map_or(2 * d + 2, |c| c + 2 * d + 2).min(max);
    loop {
        let disc = local_discriminant(&h, 1, n, opts)?;
        match disc.order() {
            Order::Value(k) => return Ok(Bound::Exact(k)),
            Order::ZeroToPrecision(p) if cap.is_some_and(|c| p > c) => return Ok(Bound::AtLeast(p)),
            Order::ZeroToPrecision(p) if n >= max => {
                return Err(crate::Error::PrecisionExhausted { quantity: "discriminant order".into(), precision: p })
            }
            Order::ZeroToPrecision(p) => n = (n + (n - p.min(n)).max(d + 2)).min(max),
        }
    }
}

/// Order at the origin of the discriminant of the Weierstrass polynomial of
/// the plain germ `g`. With a `cap`, vanishing beyond the cap is reported as
/// a lower bound.
///
/// Without the exact route, orders along lines through the origin are used:
/// each is at least the multiplicity `m`, with equality off the at most `m`
/// tangent lines. The least order `o` over `L >= o` lines is therefore `m`,
/// and `L = cap + 1` lines all above the cap prove `m > cap`.
pub(crate) fn disc_order(g: &MPoly, cap: Option<u32>, opts: &Options) -> Result<Bound> {
    if g.degree_in(Z).unwrap_or(0) <= opts.exact_route_max_degree && far_unit(g, Z) {
        let d = discriminant_poly(g, "z", opts.exec)?;
        return Ok(d.order_at_origin().map_or(Bound::AtLeast(u32::MAX), Bound::Exact));
    }
    let mut best: Option<u32> = None;
    for lines in 1u32.. {
        let k = lines - 1;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let slope = Rat::new((sign * i64::from(k / 2 + 1)).into(), 3.into());
        let limit = [best.map(|o| o.saturating_sub(1)), cap].into_iter().flatten().min();
        if let Bound::Exact(v) = order_on_line(g, &slope, limit, opts)? {
            best = Some(best.map_or(v, |o| o.min(v)));
        }
        match (best, cap) {
            (Some(m), _) if cap.is_none_or(|c| m <= c) && lines >= m => return Ok(Bound::Exact(m)),
            (_, Some(c)) if lines > c => return Ok(Bound::AtLeast(c + 1)),
            _ => {}
        }
    }
    unreachable!("the line loop returns")
}

/// An upper bound for [`disc_order`]: the exact value on the exact route,
/// otherwise the order along one line.
fn disc_order_upper(g: &MPoly, opts: &Options) -> Result<u32> {
    let b = if g.degree_in(Z).unwrap_or(0) <= opts.exact_route_max_degree && far_unit(g, Z) {
        disc_order(g, None, opts)?
    } else {
        order_on_line(g, &Rat::new(1.into(), 3.into()), None, opts)?
    };
    b.exact().ok_or(crate::Error::PrecisionExhausted { quantity: "discriminant order".into(), precision: 0 })
}

/// Look for a certified drop of the discriminant multiplicity between the
/// parameter origin and a seeded sample point. `f` uses `x, y, z` and the
/// parameters `params`, and is reduced.
pub(crate) fn discriminant_drop(f: &MPoly, params: &[usize], opts: &Options) -> Result<Option<DropWitness>> {
    if params.is_empty() {
        return Ok(None);
    }
    let zeros = vec![Rat::from_integer(0.into()); params.len()];
    let f0 = specialize(f, params, &zeros)?;
    let deg = f.degree_in(Z);
    if f0.degree_in(Z) != deg || !far_unit(&f0, Z) {
        return Ok(None);
    }
    for attempt in 0..2 {
        let s = sample_point(opts.seed, params.len(), attempt);
        let fs = specialize(f, params, &s)?;
        if fs.degree_in(Z) != deg || !far_unit(&fs, Z) {
            continue;
        }
        let at_sample = match disc_order_upper(&fs, opts) {
            Ok(k) => k,
            Err(e) if e.is_exhaustion() => continue,
            Err(e) => return Err(e),
        };
        let at_origin = match disc_order(&f0, Some(at_sample), opts) {
            Ok(b) => b,
            Err(e) if e.is_exhaustion() => return Ok(None),
            Err(e) => return Err(e),
        };
        let drop = match at_origin {
            Bound::Exact(k) | Bound::AtLeast(k) => k > at_sample,
            Bound::AtMost(_) => false,
        };
        return Ok(drop.then(|| DropWitness { sample: rats_string(&s), at_sample, at_origin }));
    }
    Ok(None)
}

fn early_report(change: &CoordChange, w: &DropWitness) -> EquisingReport {
    let mut r = EquisingReport::new(change);
    r.decision = false;
    r.generic_mult = Some(Bound::AtMost(w.at_sample));
    r.special_mult = Some(w.at_origin);
    r.witness = Some(w.describe());
    r
}

/// Definition of Zariski equisingularity along the parameters, in the
/// coordinates of `f` (variables `x, y, z` then `params`).
pub(crate) fn decide_ze(f: &MPoly, params: &[usize], change: &CoordChange, opts: &Options) -> Result<EquisingReport> {
    let f = if opts.reduce { squarefree_part(f)? } else { f.clone() };
    if opts.early_exit {
        if let Some(w) = discriminant_drop(&f, params, opts)? {
            return Ok(early_report(change, &w));
        }
    }
    let scope = Scope::base(params);
    let ((j0, verdict), n) = retry_on_exhaustion(budget(&f, opts), |n| {
        let head = chain_head(&TruncSeries::exact(f.clone()), Z, scope, opts.reduce, n, opts)?;
        let v = plane_family_ze(&head.entry, Y, params, n, opts)?;
        Ok((head.index, v))
    })?;
    let mut r = EquisingReport::new(change);
    r.j0 = Some(j0);
    r.precision_used = n;
    r.absorb(&verdict);
    Ok(r)
}

/// Zariski equisingularity of the family in its given coordinates.
pub fn family_zariski_equisingular(g: &SurfaceGerm, opts: &Options) -> Result<EquisingReport> {
    decide_ze(g.f(), &g.param_indices(), &CoordChange::identity(opts.seed), opts)
}

/// Zariski equisingularity after a seeded dense change of coordinates.
pub fn family_ze_generic(g: &SurfaceGerm, opts: &Options) -> Result<EquisingReport> {
    let fiber = g.special_fiber()?.reduce()?;
    let change = generic_change(fiber.f(), opts)?;
    let f = change.apply(g.f())?;
    decide_ze(&f, &g.param_indices(), &change, opts)
}

/// The nested-transverse decision in given coordinates: the discriminant
/// curves of `f(x, y + b z, z, t)` form an equisingular family along `(b, t)`.
pub(crate) fn decide_nu_transverse_ze(
    f: &MPoly,
    params: &[usize],
    change: &CoordChange,
    opts: &Options,
) -> Result<EquisingReport> {
    let f = if opts.reduce { squarefree_part(f)? } else { f.clone() };
    // At b = 0 the curves are the discriminant curves of f itself.
    if opts.early_exit {
        if let Some(w) = discriminant_drop(&f, params, opts)? {
            return Ok(early_report(change, &w));
        }
    }
    let (fb, b) = shear_by_b(&f)?;
    let mut all: Vec<usize> = params.to_vec();
    all.push(b);
    let scope = Scope::base(&all);
    let ((j0, verdict), n) = retry_on_exhaustion(budget(&f, opts), |n| {
        let head = chain_head(&TruncSeries::exact(fb.clone()), Z, scope, opts.reduce, n, opts)?;
        let v = plane_family_ze(&head.entry, Y, &all, n, opts)?;
        Ok((head.index, v))
    })?;
    let mut r = EquisingReport::new(change);
    r.j0 = Some(j0);
    r.precision_used = n;
    r.absorb(&verdict);
    Ok(r)
}

/// Nested-transverse decision after a seeded search for nested transverse
/// coordinates of the special fiber.
pub fn nu_transverse_ze(g: &SurfaceGerm, opts: &Options) -> Result<EquisingReport> {
    let fiber = g.special_fiber()?.reduce()?;
    let (change, rep, _) = search_nu_transverse(fiber.f(), opts)?;
    let f = change.apply(g.f())?;
    let mut r = decide_nu_transverse_ze(&f, &g.param_indices(), &change, opts)?;
    r.transversality = Some(rep);
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedRun {
    pub seed: u64,
    pub nu_transverse_ze: EquisingReport,
    pub zariski_equisingular: EquisingReport,
    pub nu_star: NuStarReport,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    #[serde(serialize_with = "opt_yes_no")]
    pub decision: Option<bool>,
    pub consistent: bool,
    pub runs: Vec<SeedRun>,
}

/// Run the three deciders for every seed and check that they agree.
pub fn theorem1_harness(g: &SurfaceGerm, seeds: &[u64], opts: &Options) -> Result<HarnessReport> {
    let g = g.reduce()?;
    let fiber = g.special_fiber()?.reduce()?;
    let params = g.param_indices();
    let mut runs = Vec::new();
    for &seed in seeds {
        let o = opts.with_seed(seed);
        let (change, rep, _) = search_nu_transverse(fiber.f(), &o)?;
        let f = change.apply(g.f())?;
        let mut first = decide_nu_transverse_ze(&f, &params, &change, &o)?;
        first.transversality = Some(rep.clone());
        let second = family_ze_generic(&g, &o)?;
        let third = nu_star_constant_with(&g, &change, &rep, &o)?;
        let agree = first.decision == second.decision && second.decision == third.constant;
        runs.push(SeedRun { seed, nu_transverse_ze: first, zariski_equisingular: second, nu_star: third, agree });
    }
    let decisions: Vec<bool> = runs
        .iter()
        .flat_map(|r| [r.nu_transverse_ze.decision, r.zariski_equisingular.decision, r.nu_star.constant])
        .collect();
    let consistent = decisions.windows(2).all(|w| w[0] == w[1]);
    let decision = if consistent { decisions.first().copied() } else { None };
    Ok(HarnessReport { decision, consistent, runs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::poly;

    const XYZT: [&str; 4] = ["x", "y", "z", "t"];

    fn germ(terms: &[(&[u32], i64)]) -> SurfaceGerm {
        SurfaceGerm::new(poly(&XYZT, terms), &["t"]).unwrap()
    }

    fn trivial() -> SurfaceGerm {
        germ(&[(&[0, 0, 2, 0], 1), (&[1, 1, 0, 0], -1), (&[0, 2, 0, 0], -2)])
    }

    fn a1_family() -> SurfaceGerm {
        germ(&[(&[0, 0, 2, 0], 1), (&[1, 1, 0, 0], -1), (&[2, 0, 0, 1], -1)])
    }

    fn smoothing() -> SurfaceGerm {
        // z^2 - (x + 2y) y - t z
        germ(&[(&[0, 0, 2, 0], 1), (&[1, 1, 0, 0], -1), (&[0, 2, 0, 0], -2), (&[0, 0, 1, 1], -1)])
    }

    #[test]
    fn line_route_matches_exact_route() {
        use crate::parse::parse_poly;
        let exact = Options::default();
        let lines = Options { exact_route_max_degree: 0, ..Options::default() };
        for s in ["z^2 - x*y", "z^2 - x^3", "z^3 - x*y^2 + x^4", "z^2 - x^2 - y^5", "z - x*y"] {
            let g = parse_poly(s, &GEO, &[]).unwrap();
            let want = disc_order(&g, None, &exact).unwrap();
            assert_eq!(disc_order(&g, None, &lines).unwrap(), want, "{s}");
            let k = want.exact().unwrap();
            if k > 0 {
                assert_eq!(disc_order(&g, Some(k - 1), &lines).unwrap(), Bound::AtLeast(k), "{s}");
            }
            assert!(disc_order_upper(&g, &lines).unwrap() >= k);
        }
    }

    #[test]
    fn trivial_family_is_equisingular() {
        let o = Options::default();
        assert!(family_zariski_equisingular(&trivial(), &o).unwrap().decision);
        assert!(family_ze_generic(&trivial(), &o).unwrap().decision);
        assert!(nu_transverse_ze(&trivial(), &o).unwrap().decision);
    }

    #[test]
    fn smoothing_is_not_equisingular() {
        let o = Options::default();
        let r = family_zariski_equisingular(&smoothing(), &o).unwrap();
        assert!(!r.decision, "{r:?}");
        assert!(!nu_transverse_ze(&smoothing(), &o).unwrap().decision);
    }

    #[test]
    fn early_exit_does_not_change_decisions() {
        for g in [trivial(), a1_family(), smoothing()] {
            let mut o = Options::default();
            let with = (family_ze_generic(&g, &o).unwrap().decision, nu_transverse_ze(&g, &o).unwrap().decision);
            o.early_exit = false;
            let without = (family_ze_generic(&g, &o).unwrap().decision, nu_transverse_ze(&g, &o).unwrap().decision);
            assert_eq!(with, without);
        }
    }

    #[test]
    fn harness_on_a1_family() {
        let r = theorem1_harness(&a1_family(), &[1, 2, 3], &Options::default()).unwrap();
        assert!(r.consistent, "{r:#?}");
        assert_eq!(r.decision, Some(true));
    }

    #[test]
    fn sample_points_are_nonzero() {
        for a in 0..5 {
            assert!(sample_point(3, 2, a).iter().all(|v| *v != Rat::from_integer(0.into())));
        }
    }
}
