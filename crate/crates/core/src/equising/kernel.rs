//! The decision kernel shared by every level of the recursion.
//!
//! Chain entries only matter up to a unit. When `p` is a polynomial whose
//! leading coefficient in `v` is a unit and whose roots on the `v`-axis away
//! from the origin are simple, the factor of `p` not passing through the
//! origin contributes a unit, so the first nonvanishing generalized
//! discriminant of the Weierstrass polynomial of `p` equals, up to a unit,
//! `Disc_v(p_red)` at index `d - s + 1` (`d`, `s` the orders of `p` and of
//! its squarefree part along the axis). Otherwise `p` is prepared at finite
//! precision and the chain is scanned.

use num_traits::{One, Zero};

use crate::disc::{discriminant, discriminant_poly, generalized_discriminants, idiscr};
use crate::equising::Options;
use crate::error::{Error, Result};
use crate::poly::{gcd, squarefree_part, MPoly, Monomial, Rat, TruncSeries};
use crate::weier::weierstrass;

/// How parameters enter orders and regularity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamMode {
    /// Parameters are base variables of the germ at the origin.
    Base,
    /// Parameters are generic constants: only geometric degrees count and
    /// coefficients are nonzero polynomials in the parameters.
    Field,
}

#[derive(Clone, Copy, Debug)]
pub struct Scope<'a> {
    pub params: &'a [usize],
    pub mode: ParamMode,
}

impl<'a> Scope<'a> {
    pub fn base(params: &'a [usize]) -> Self {
        Scope { params, mode: ParamMode::Base }
    }

    pub fn field(params: &'a [usize]) -> Self {
        Scope { params, mode: ParamMode::Field }
    }

    pub fn plain() -> Scope<'static> {
        Scope { params: &[], mode: ParamMode::Base }
    }

    fn param_degree(&self, m: &Monomial) -> u32 {
        self.params.iter().map(|&i| m.exp(i)).sum()
    }

    pub fn geo_degree(&self, m: &Monomial) -> u32 {
        m.degree() - self.param_degree(m)
    }

    /// Whether the term lies on the `v`-axis (other coordinates zero).
    fn on_axis(&self, m: &Monomial, v: usize) -> bool {
        match self.mode {
            ParamMode::Base => m.degree() == m.exp(v),
            ParamMode::Field => self.geo_degree(m) == m.exp(v),
        }
    }

    pub fn order_in_var(&self, p: &MPoly, v: usize) -> Option<u32> {
        p.terms().filter(|(m, _)| self.on_axis(m, v)).map(|(m, _)| m.exp(v)).min()
    }

    pub fn nonzero_at_origin(&self, p: &MPoly) -> bool {
        match self.mode {
            ParamMode::Base => !p.constant_term().is_zero(),
            ParamMode::Field => p.terms().any(|(m, _)| self.geo_degree(m) == 0),
        }
    }

    /// Order in the geometric variables (generic order in `Field` mode).
    pub fn order(&self, p: &MPoly) -> Option<u32> {
        match self.mode {
            ParamMode::Base => p.order_at_origin(),
            ParamMode::Field => p.terms().map(|(m, _)| self.geo_degree(m)).min(),
        }
    }

    fn axis_part(&self, p: &MPoly, v: usize, shift: u32) -> MPoly {
        let terms = p
            .terms()
            .filter(|(m, _)| self.on_axis(m, v))
            .map(|(m, c)| (m.with_exp(v, m.exp(v) - shift), c.clone()))
            .collect();
        MPoly::from_map(p.vars().clone(), terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Exact,
    Series,
}

/// Degree of the Weierstrass polynomial, index of its first nonvanishing
/// generalized discriminant, and that entry up to a unit.
#[derive(Clone, Debug)]
pub struct ChainHead {
    pub degree: u32,
    pub index: usize,
    pub entry: TruncSeries,
    pub route: Route,
}

impl ChainHead {
    pub fn is_unit(&self, scope: Scope) -> bool {
        scope.nonzero_at_origin(self.entry.body())
    }
}

fn order_in_var_series(p: &TruncSeries, v: usize, scope: Scope) -> Result<u32> {
    let vars = p.vars();
    match scope.order_in_var(p.body(), v) {
        Some(d) => Ok(d),
        None if p.is_exact() => Err(Error::NotRegular { var: vars[v].clone() }),
        None => {
            Err(Error::PrecisionExhausted { quantity: format!("regularity in {}", vars[v]), precision: p.precision() })
        }
    }
}

/// `p` has a unit leading coefficient in `v` and simple nonzero roots on
/// the `v`-axis; returns the order `s` along the axis.
fn far_part_is_unit(p: &MPoly, v: usize, scope: Scope) -> Option<u32> {
    let s = scope.order_in_var(p, v)?;
    let coeffs = p.coeffs_in(v);
    let lc = coeffs.last()?;
    if !scope.nonzero_at_origin(lc) {
        return None;
    }
    let g = scope.axis_part(p, v, s);
    if g.degree_in(v).unwrap_or(0) == 0 {
        return Some(s);
    }
    let common = gcd(&g, &g.derivative_at(v));
    (common.degree_in(v).unwrap_or(0) == 0).then_some(s)
}

/// [`far_part_is_unit`] for a germ without parameters.
pub(crate) fn far_unit(p: &MPoly, v: usize) -> bool {
    far_part_is_unit(p, v, Scope::plain()).is_some()
}

fn exact_head(
    p: &MPoly,
    v: usize,
    d: u32,
    scope: Scope,
    known_reduced: bool,
    opts: &Options,
) -> Result<Option<ChainHead>> {
    let deg = p.degree_in(v).unwrap_or(0);
    if deg > opts.exact_route_max_degree {
        if scope.mode == ParamMode::Field {
            return Err(Error::PrecisionExhausted {
                quantity: format!("generic-parameter discriminant of degree {deg}"),
                precision: 0,
            });
        }
        return Ok(None);
    }
    // Far roots inflate the global discriminant; the local series is cheaper.
    if deg > d && scope.mode != ParamMode::Field {
        return Ok(None);
    }
    let red = if known_reduced { p.clone() } else { squarefree_part(p)? };
    let Some(s) = far_part_is_unit(&red, v, scope) else {
        return Ok(None);
    };
    let vars = p.vars().clone();
    let entry = if s == 1 { MPoly::one(vars) } else { discriminant_poly(&red, &vars[v], opts.exec)? };
    Ok(Some(ChainHead {
        degree: d,
        index: (d - s + 1) as usize,
        entry: TruncSeries::exact(entry),
        route: Route::Exact,
    }))
}

fn series_head(p: &TruncSeries, v: usize, n: u32, known_reduced: bool, opts: &Options) -> Result<ChainHead> {
    let (w, _) = weierstrass(p, v, n)?;
    let vars = p.vars().clone();
    if w.degree == 1 {
        return Ok(ChainHead {
            degree: 1,
            index: 1,
            entry: TruncSeries::constant(vars, Rat::one()),
            route: Route::Series,
        });
    }
    let coeffs = w.coeff_list();
    let (index, entry) = if known_reduced {
        let disc = crate::disc::discriminant_coeffs(&coeffs, opts.exec)?;
        if disc.body().is_zero() {
            return Err(Error::PrecisionExhausted {
                quantity: "discriminant order".into(),
                precision: disc.precision(),
            });
        }
        (1, disc)
    } else {
        let chain = generalized_discriminants(&coeffs, opts.exec)?;
        let i = idiscr(&chain)?;
        (i, chain.entry(i).clone())
    };
    Ok(ChainHead { degree: w.degree, index, entry, route: Route::Series })
}

/// First nonvanishing generalized discriminant of the germ of `p` in `v`,
/// up to a unit. `known_reduced` asserts that `p` is squarefree, which fixes
/// the index to 1. `n` is the working precision of the series route.
pub fn chain_head(
    p: &TruncSeries,
    v: usize,
    scope: Scope,
    known_reduced: bool,
    n: u32,
    opts: &Options,
) -> Result<ChainHead> {
    let d = order_in_var_series(p, v, scope)?;
    if d == 0 {
        return Err(Error::Invalid(format!("germ is a unit; no chain in {}", p.vars()[v])));
    }
    if p.is_exact() {
        if let Some(h) = exact_head(p.body(), v, d, scope, known_reduced, opts)? {
            return Ok(h);
        }
    }
    if scope.mode == ParamMode::Field {
        return Err(Error::Invalid(
            "generic-parameter computation needs a unit leading coefficient and simple far roots".into(),
        ));
    }
    series_head(p, v, n, known_reduced, opts)
}

/// Discriminant of the Weierstrass polynomial of `f` in `v` at precision
/// `n` (no unit factor, no far roots).
pub fn local_discriminant(f: &MPoly, v: usize, n: u32, opts: &Options) -> Result<TruncSeries> {
    let (w, _) = weierstrass(&TruncSeries::exact(f.clone()), v, n)?;
    let vars = f.vars().clone();
    if w.degree == 1 {
        return Ok(TruncSeries::constant(vars, Rat::one()));
    }
    let s = w.to_series();
    let name = vars[v].clone();
    discriminant(&s, &name, opts.exec)
}

/// Multiplicities of a series along the parameter germ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Equimult {
    /// Least geometric degree with a coefficient not identically zero in the
    /// parameters.
    pub generic: u32,
    /// Order at parameter value 0; `None` when the series vanishes there.
    pub special: Option<u32>,
    pub equal: bool,
}

/// Generic and special multiplicity of `s` with respect to the geometric
/// variables, `params` being the parameters.
pub fn equimultiple_along_params(s: &TruncSeries, params: &[usize]) -> Result<Equimult> {
    let scope = Scope::base(params);
    let body = s.body();
    let Some(generic) = body.terms().map(|(m, _)| scope.geo_degree(m)).min() else {
        return Err(if s.is_exact() {
            Error::ZeroInput("equimultiple_along_params")
        } else {
            Error::PrecisionExhausted { quantity: "multiplicity along parameters".into(), precision: s.precision() }
        });
    };
    let special = body.terms().filter(|(m, _)| scope.param_degree(m) == 0).map(|(m, _)| scope.geo_degree(m)).min();
    Ok(Equimult { generic, special, equal: special == Some(generic) })
}

/// Outcome of the plane-curve instance of the family decision.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PlaneVerdict {
    pub decision: bool,
    pub unit: bool,
    pub degree: Option<u32>,
    pub index: Option<usize>,
    /// Multiplicities of the decisive entry.
    pub mult: Option<Equimult>,
    /// Set when the decision came from the multiplicity of the curve itself.
    pub curve_mult: Option<Equimult>,
    pub route: Option<Route>,
}

/// Zariski equisingularity of the family of plane curves `d(x, y, params)`:
/// unit, or first nonvanishing generalized discriminant in `y` equimultiple
/// in `x` along the parameters.
pub fn plane_family_ze(d: &TruncSeries, y: usize, params: &[usize], n: u32, opts: &Options) -> Result<PlaneVerdict> {
    let scope = Scope::base(params);
    let mut verdict = PlaneVerdict {
        decision: true,
        unit: false,
        degree: None,
        index: None,
        mult: None,
        curve_mult: None,
        route: None,
    };
    if scope.nonzero_at_origin(d.body()) {
        verdict.unit = true;
        return Ok(verdict);
    }
    if opts.early_exit && !params.is_empty() {
        let em = equimultiple_along_params(d, params)?;
        if !em.equal {
            verdict.decision = false;
            verdict.curve_mult = Some(em);
            return Ok(verdict);
        }
    }
    let head = chain_head(d, y, scope, false, n, opts)?;
    let em = equimultiple_along_params(&head.entry, params)?;
    verdict.decision = em.equal;
    verdict.degree = Some(head.degree);
    verdict.index = Some(head.index);
    verdict.mult = Some(em);
    verdict.route = Some(head.route);
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::poly;
    use crate::poly::Order;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn opts() -> Options {
        Options::default()
    }

    #[test]
    fn local_discriminant_examples() {
        let a1 = poly(&XYZ, &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]);
        assert_eq!(local_discriminant(&a1, 2, 8, &opts()).unwrap().body(), &poly(&XYZ, &[(&[1, 1, 0], 4)]));
        let cusp = poly(&XYZ, &[(&[0, 0, 2], 1), (&[3, 0, 0], -1)]);
        assert_eq!(local_discriminant(&cusp, 2, 8, &opts()).unwrap().body(), &poly(&XYZ, &[(&[3, 0, 0], 4)]));
        let smooth = poly(&XYZ, &[(&[0, 0, 1], 1)]);
        assert_eq!(local_discriminant(&smooth, 2, 8, &opts()).unwrap().constant_term(), Rat::one());
    }

    #[test]
    fn exact_and_series_heads_agree() {
        // z^2 (1 - z) - x y^2 + x^3 has a far root at z = 1
        let f = poly(&XYZ, &[(&[0, 0, 2], 1), (&[0, 0, 3], -1), (&[1, 2, 0], -1), (&[3, 0, 0], 1)]);
        let s = TruncSeries::exact(f.clone());
        // base mode prepares locally; field mode keeps the global discriminant
        let e = chain_head(&s, 2, Scope::field(&[]), false, 12, &opts()).unwrap();
        assert_eq!(e.route, Route::Exact);
        let r = chain_head(&s, 2, Scope::plain(), false, 12, &opts()).unwrap();
        assert_eq!(r.route, Route::Series);
        assert_eq!((e.degree, e.index), (r.degree, r.index));
        assert_eq!(e.entry.order(), r.entry.order());
    }

    #[test]
    fn repeated_roots_give_higher_index() {
        // y^3 (x + y)^2 in y: d = 5, s = 2
        let p = poly(&["x", "y"], &[(&[0, 5], 1), (&[1, 4], 2), (&[2, 3], 1)]);
        let h = chain_head(&TruncSeries::exact(p), 1, Scope::plain(), false, 12, &opts()).unwrap();
        assert_eq!((h.degree, h.index), (5, 4));
        assert_eq!(h.entry.order(), Order::Value(2));
    }

    #[test]
    fn equimultiplicity_examples() {
        let v = ["x", "y", "t"];
        let s1 = TruncSeries::exact(poly(&v, &[(&[2, 0, 0], 1), (&[1, 0, 1], 1)]));
        assert_eq!(
            equimultiple_along_params(&s1, &[2]).unwrap(),
            Equimult { generic: 1, special: Some(2), equal: false }
        );
        let s2 = TruncSeries::exact(poly(&v, &[(&[2, 0, 0], 1), (&[2, 0, 1], 1)]));
        assert_eq!(
            equimultiple_along_params(&s2, &[2]).unwrap(),
            Equimult { generic: 2, special: Some(2), equal: true }
        );
        let s3 = TruncSeries::exact(poly(&v, &[(&[3, 0, 0], 1), (&[1, 2, 2], 1)]));
        assert_eq!(
            equimultiple_along_params(&s3, &[2]).unwrap(),
            Equimult { generic: 3, special: Some(3), equal: true }
        );
    }

    #[test]
    fn plane_families() {
        let v = ["x", "y", "t"];
        // two transverse lines moving with t: equisingular
        let lines = poly(&v, &[(&[0, 2, 0], 1), (&[2, 0, 0], -1), (&[1, 1, 1], 1)]);
        let r = plane_family_ze(&TruncSeries::exact(lines), 1, &[2], 8, &opts()).unwrap();
        assert!(r.decision);
        // y^2 - t x - x^3: smooth for t != 0, singular at t = 0
        let bad = poly(&v, &[(&[0, 2, 0], 1), (&[1, 0, 1], -1), (&[3, 0, 0], -1)]);
        let mut o = opts();
        for early in [true, false] {
            o.early_exit = early;
            let r = plane_family_ze(&TruncSeries::exact(bad.clone()), 1, &[2], 8, &o).unwrap();
            assert!(!r.decision);
        }
    }

    #[test]
    fn field_mode_ignores_parameter_degrees() {
        // D = t*y^2 - x^2 has generic y-order 2, but is not regular at t = 0
        let v = ["x", "y", "t"];
        let d = poly(&v, &[(&[0, 2, 1], 1), (&[2, 0, 0], -1)]);
        assert_eq!(Scope::field(&[2]).order_in_var(&d, 1), Some(2));
        assert_eq!(Scope::base(&[2]).order_in_var(&d, 1), None);
        let h = chain_head(&TruncSeries::exact(d), 1, Scope::field(&[2]), false, 8, &opts()).unwrap();
        assert_eq!(h.index, 1);
        assert_eq!(Scope::field(&[2]).order(h.entry.body()), Some(2));
    }
}
