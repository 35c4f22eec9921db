//! Weierstrass preparation at finite precision and the precision controller.
//!
//! `f = u * W` is lifted one homogeneous base degree at a time. Writing
//! `f_k`, `W_k`, `U_k` for the parts of base-variable degree `k`,
//! `f_0 = v^d * u_0` and `sigma = u_0^{-1} mod v^d`:
//!
//! ```text
//! e_k = f_k - sum_{0<i<k} W_i U_{k-i}
//! W_k = (e_k * sigma) mod v^d
//! U_k = (e_k - W_k u_0) / v^d
//! ```
//!
//! Truncated input is treated as exact on its known part. With
//! `rho = min b/(d - j)` over known terms `v^j * (base degree b)`, `j < d`,
//! every unknown term has weight at least `min(1, rho) * N` when `v` gets
//! weight `rho`, so `W` is certified up to base degree
//! `ceil(min(1, rho) * (N - d + 1))`.

use num_traits::One;

use crate::disc::Coeffs;
use crate::error::{Error, Result};
use crate::poly::{MPoly, Monomial, Rat, TruncSeries, EXACT};

/// Monic polynomial `v^d + a_1 v^{d-1} + ... + a_d` with `a_i(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WPoly {
    /// Index of the distinguished variable in the shared variable list.
    pub var: usize,
    pub degree: u32,
    /// `a_1, ..., a_d`, free of the distinguished variable.
    pub coeffs: Vec<TruncSeries>,
}

impl WPoly {
    pub fn precision(&self) -> u32 {
        self.coeffs.iter().map(TruncSeries::precision).min().unwrap_or(EXACT)
    }

    /// Coefficients by increasing power of the distinguished variable.
    pub fn coeff_list(&self) -> Coeffs {
        let vars = self.vars();
        let mut c: Coeffs = self.coeffs.iter().rev().cloned().collect();
        c.push(TruncSeries::constant(vars, Rat::one()));
        c
    }

    fn vars(&self) -> crate::poly::Vars {
        self.coeffs.first().map(|c| c.vars().clone()).expect("degree >= 1 polynomial has coefficients")
    }

    pub fn to_series(&self) -> TruncSeries {
        let vars = self.vars();
        let mut body = MPoly::var_at(vars.clone(), self.var).pow(self.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            body = &body + &a.body().shift_var(self.var, self.degree - 1 - i as u32);
        }
        TruncSeries::new(body, self.precision())
    }
}

/// Order of `f` along the axis of `v`, or `NotRegular`.
pub fn regularity(f: &MPoly, v: usize) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroInput("regularity"));
    }
    f.order_in_var(v).ok_or_else(|| Error::NotRegular { var: f.vars()[v].clone() })
}

fn base_degree(m: &Monomial, v: usize) -> u32 {
    m.degree() - m.exp(v)
}

/// Split into parts by base-variable degree.
fn base_components(f: &MPoly, v: usize) -> Vec<MPoly> {
    let mut parts: Vec<MPoly> = Vec::new();
    for (m, c) in f.terms() {
        let b = base_degree(m, v) as usize;
        if parts.len() <= b {
            parts.resize_with(b + 1, || MPoly::zero(f.vars().clone()));
        }
        parts[b].add_term(m.clone(), c.clone());
    }
    parts
}

/// Keep the terms of `v`-degree `< d`.
fn mod_v(p: &MPoly, v: usize, d: u32) -> MPoly {
    let terms = p.terms().filter(|(m, _)| m.exp(v) < d).map(|(m, c)| (m.clone(), c.clone())).collect();
    MPoly::from_map(p.vars().clone(), terms)
}

/// Divide by `v^d`, dropping terms of lower `v`-degree.
fn div_v(p: &MPoly, v: usize, d: u32) -> MPoly {
    let terms =
        p.terms().filter(|(m, _)| m.exp(v) >= d).map(|(m, c)| (m.with_exp(v, m.exp(v) - d), c.clone())).collect();
    MPoly::from_map(p.vars().clone(), terms)
}

/// Certified output precision for truncated input of precision `n`.
pub fn certified_precision(f: &TruncSeries, v: usize, d: u32) -> u32 {
    let n = f.precision();
    if n == EXACT {
        return EXACT;
    }
    // rho as a reduced fraction num/den, capped at 1
    let (mut num, mut den) = (1u64, 1u64);
    for (m, _) in f.body().terms() {
        let j = m.exp(v);
        if j < d {
            let b = base_degree(m, v) as u64;
            let dd = (d - j) as u64;
            if b * den < num * dd {
                num = b;
                den = dd;
            }
        }
    }
    let span = (n + 1).saturating_sub(d) as u64;
    (num * span).div_ceil(den) as u32
}

/// Weierstrass preparation of `f` in variable `v`, certified modulo base
/// degree `n` (further limited by the precision of a truncated `f`).
/// Returns `W` and the unit `u` (truncated to total degree `n`).
pub fn weierstrass(f: &TruncSeries, v: usize, n: u32) -> Result<(WPoly, TruncSeries)> {
    let body = f.body();
    let vars = body.vars().clone();
    let d = match body.order_in_var(v) {
        Some(d) => d,
        None if f.is_exact() => return Err(Error::NotRegular { var: vars[v].clone() }),
        None => {
            return Err(Error::PrecisionExhausted {
                quantity: format!("regularity in {}", vars[v]),
                precision: f.precision(),
            })
        }
    };
    if d == 0 {
        return Err(Error::Invalid("unit germ has no Weierstrass polynomial".into()));
    }
    let n_out = n.min(certified_precision(f, v, d));
    if f.is_exact() && body.degree_in(v) == Some(d) {
        let coeffs = body.coeffs_in(v);
        let lc = &coeffs[d as usize];
        if lc.is_constant() {
            let inv = lc.constant_term().recip();
            let a = (0..d).rev().map(|k| TruncSeries::exact(coeffs[k as usize].scale(&inv))).collect();
            let w = WPoly { var: v, degree: d, coeffs: a };
            return Ok((w, TruncSeries::constant(vars, lc.constant_term())));
        }
    }
    if n_out == 0 || n_out == EXACT {
        return Err(Error::PrecisionExhausted { quantity: "Weierstrass preparation".into(), precision: n_out });
    }

    let parts = base_components(body, v);
    let u0 = div_v(&parts[0], v, d);
    let sigma = TruncSeries::new(u0.clone(), EXACT).invert_unit_to(d)?.into_body();
    let zero = || MPoly::zero(vars.clone());
    let mut ws: Vec<MPoly> = vec![zero()];
    let mut us: Vec<MPoly> = vec![u0.clone()];
    for k in 1..n_out as usize {
        let mut e = parts.get(k).cloned().unwrap_or_else(zero);
        for i in 1..k {
            if !ws[i].is_zero() && !us[k - i].is_zero() {
                e = &e - &(&ws[i] * &us[k - i]);
            }
        }
        let wk = mod_v(&(&e * &sigma), v, d);
        let rem = &e - &(&wk * &u0);
        debug_assert!(mod_v(&rem, v, d).is_zero());
        us.push(div_v(&rem, v, d));
        ws.push(wk);
    }
    let wsum = ws.iter().fold(zero(), |acc, w| &acc + w).coeffs_in(v);
    let a: Vec<TruncSeries> =
        (1..=d).map(|i| TruncSeries::new(wsum.get((d - i) as usize).cloned().unwrap_or_else(zero), n_out)).collect();
    let usum = us.iter().fold(zero(), |acc, u| &acc + u);
    Ok((WPoly { var: v, degree: d, coeffs: a }, TruncSeries::new(usum, n_out)))
}

/// Current and maximal precision of an adaptive computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionBudget {
    pub current: u32,
    pub max: u32,
}

impl PrecisionBudget {
    pub fn new(current: u32, max: u32) -> Self {
        PrecisionBudget { current: current.min(max).max(1), max: max.max(1) }
    }

    /// Defaults `N0 = 2 deg f + 2` and `N_max = 4 deg f (deg_v f)^2`, the
    /// maximum optionally overridden.
    pub fn for_poly(f: &MPoly, v: usize, max_override: Option<u32>) -> Self {
        let deg = f.total_degree().unwrap_or(1).max(1);
        let dv = f.degree_in(v).unwrap_or(1).max(1);
        let max = max_override.unwrap_or(4 * deg * dv * dv);
        PrecisionBudget::new(2 * deg + 2, max)
    }
}

/// Outcome of one attempt at a fixed precision.
pub enum Attempt<T> {
    Done(T),
    /// More precision is needed to decide the named quantity.
    Retry(String),
}

/// Run `task` at doubling precision until it decides, or report exhaustion
/// at `budget.max`. Returns the value and the precision that sufficed.
pub fn with_adequate_precision<T, F>(budget: PrecisionBudget, mut task: F) -> Result<(T, u32)>
where
    F: FnMut(u32) -> Result<Attempt<T>>,
{
    let mut n = budget.current;
    loop {
        match task(n)? {
            Attempt::Done(t) => return Ok((t, n)),
            Attempt::Retry(quantity) => {
                if n >= budget.max {
                    return Err(Error::PrecisionExhausted { quantity, precision: budget.max });
                }
                n = n.saturating_mul(2).min(budget.max);
            }
        }
    }
}

/// [`with_adequate_precision`] for tasks that signal missing precision by
/// returning `PrecisionExhausted`.
pub fn retry_on_exhaustion<T, F>(budget: PrecisionBudget, mut task: F) -> Result<(T, u32)>
where
    F: FnMut(u32) -> Result<T>,
{
    with_adequate_precision(budget, |n| match task(n) {
        Ok(t) => Ok(Attempt::Done(t)),
        Err(Error::PrecisionExhausted { quantity, .. }) => Ok(Attempt::Retry(quantity)),
        Err(e) => Err(e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::poly;
    use crate::poly::{vars_of, Order};

    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn check_product(f: &MPoly, w: &WPoly, u: &TruncSeries) {
        let n = w.precision();
        let diff = &(u.body() * w.to_series().body()) - f;
        assert!(diff.truncate(n).is_zero(), "u*W - f has low terms: {}", diff.truncate(n));
    }

    #[test]
    fn regularity_examples() {
        let f = poly(&XYZ, &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]);
        assert_eq!(regularity(&f, 2).unwrap(), 2);
        let g = poly(&XYZ, &[(&[1, 1, 0], 1)]);
        assert_eq!(regularity(&g, 2), Err(Error::NotRegular { var: "z".into() }));
        let bs = poly(
            &["x", "y", "z", "t"],
            &[(&[0, 0, 5, 0], 1), (&[0, 6, 1, 1], 1), (&[1, 7, 0, 0], 1), (&[15, 0, 0, 0], 1)],
        );
        assert_eq!(regularity(&bs, 2).unwrap(), 5);
    }

    #[test]
    fn already_prepared_is_fixed_point() {
        let f = poly(&XYZ, &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]);
        let (w, u) = weierstrass(&TruncSeries::exact(f.clone()), 2, 8).unwrap();
        assert_eq!(w.to_series().body(), &f);
        assert!(w.to_series().is_exact());
        assert_eq!(u.constant_term(), Rat::one());
    }

    #[test]
    fn unit_factor_is_split_off() {
        // (1 + x)(z - x) = z - x + xz - x^2
        let f = poly(&["x", "z"], &[(&[0, 1], 1), (&[1, 0], -1), (&[1, 1], 1), (&[2, 0], -1)]);
        for n in [2, 3, 6] {
            let (w, u) = weierstrass(&TruncSeries::exact(f.clone()), 1, n).unwrap();
            assert_eq!(w.degree, 1);
            assert_eq!(w.coeffs[0].body(), &poly(&["x", "z"], &[(&[1, 0], -1)]).truncate(n));
            assert_eq!(u.body(), &poly(&["x", "z"], &[(&[0, 0], 1), (&[1, 0], 1)]).truncate(n));
            check_product(&f, &w, &u);
        }
    }

    #[test]
    fn linear_factor_of_z2_plus_z() {
        let f = poly(&["x", "z"], &[(&[0, 2], 1), (&[0, 1], 1)]);
        let (w, u) = weierstrass(&TruncSeries::exact(f.clone()), 1, 4).unwrap();
        assert_eq!(w.degree, 1);
        assert!(w.coeffs[0].body().is_zero());
        assert_eq!(u.body(), &poly(&["x", "z"], &[(&[0, 0], 1), (&[0, 1], 1)]));
    }

    #[test]
    fn far_root_is_removed() {
        // z^2 (1 - z) - x y : W has degree 2
        let f = poly(&XYZ, &[(&[0, 0, 2], 1), (&[0, 0, 3], -1), (&[1, 1, 0], -1)]);
        let (w, u) = weierstrass(&TruncSeries::exact(f.clone()), 2, 7).unwrap();
        assert_eq!(w.degree, 2);
        assert_eq!(w.precision(), 7);
        check_product(&f, &w, &u);
        let (w2, _) = weierstrass(&TruncSeries::exact(f.clone()), 2, 11).unwrap();
        for (a, b) in w.coeffs.iter().zip(&w2.coeffs) {
            assert_eq!(a.body(), &b.body().truncate(7));
        }
    }

    #[test]
    fn truncated_input_limits_precision() {
        // y^2 - x^3 known modulo degree 9: rho = 3/2 -> capped at 1, N - d + 1 = 8
        let f = poly(&["x", "y"], &[(&[0, 2], 1), (&[3, 0], -1), (&[1, 3], 1)]);
        let s = TruncSeries::new(f, 9);
        assert_eq!(certified_precision(&s, 1, 2), 8);
        // y^2 - x y known modulo 6: rho = 1/1 ... with x*y: b = 1, j = 1 -> rho 1
        let g = TruncSeries::new(poly(&["x", "y"], &[(&[0, 2], 1), (&[1, 1], -1), (&[4, 0], 1)]), 6);
        assert_eq!(certified_precision(&g, 1, 2), 5);
        // y^3 - x: b = 1, j = 0 -> rho 1/3
        let h = TruncSeries::new(poly(&["x", "y"], &[(&[0, 3], 1), (&[1, 0], -1)]), 10);
        assert_eq!(certified_precision(&h, 1, 3), 3);
    }

    #[test]
    fn controller_doubles_then_gives_up() {
        let x3 = poly(&["x"], &[(&[3], 1)]);
        let mut seen = Vec::new();
        let (ord, n) = with_adequate_precision(PrecisionBudget::new(2, 64), |n| {
            seen.push(n);
            Ok(match TruncSeries::new(x3.clone(), n).order() {
                Order::Value(k) => Attempt::Done(k),
                Order::ZeroToPrecision(_) => Attempt::Retry("order of x^3".into()),
            })
        })
        .unwrap();
        assert_eq!((ord, n), (3, 4));
        assert_eq!(seen, vec![2, 4]);

        let x10 = poly(&["x"], &[(&[10], 1)]);
        let err = with_adequate_precision(PrecisionBudget::new(2, 8), |n| {
            Ok(match TruncSeries::new(x10.clone(), n).order() {
                Order::Value(k) => Attempt::Done(k),
                Order::ZeroToPrecision(_) => Attempt::Retry("order".into()),
            })
        })
        .unwrap_err();
        assert_eq!(err, Error::PrecisionExhausted { quantity: "order".into(), precision: 8 });
        let _ = vars_of(&["x"]);
    }
}
