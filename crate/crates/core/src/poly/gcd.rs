//! Multivariate gcd by recursion on the main variable: content/primitive-part
//! splitting plus a primitive pseudo-remainder sequence in that variable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MPoly, Rat};
use crate::error::{Error, Result};

/// Largest variable index occurring in `p` or `q`.
fn main_var(p: &MPoly, q: &MPoly) -> Option<usize> {
    (0..p.nvars()).rev().find(|&i| p.degree_in(i).unwrap_or(0) > 0 || q.degree_in(i).unwrap_or(0) > 0)
}

/// Greatest common divisor, normalized to leading coefficient 1 in the
/// degree-lexicographic order. `gcd(0, 0) = 0`.
pub fn gcd(p: &MPoly, q: &MPoly) -> MPoly {
    let (p, q) = p.aligned(q);
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return MPoly::one(p.vars().clone());
    }
    if let Some(g) = monomial_gcd(&p, &q) {
        return g;
    }
    if let Some(g) = verified_heuristic_gcd(&p, &q) {
        return g;
    }
    let v = main_var(&p, &q).expect("nonconstant input has a variable");
    let dp = p.degree_in(v).unwrap_or(0);
    let dq = q.degree_in(v).unwrap_or(0);
    if dp == 0 {
        return gcd_with_coeffs(&p, &q, v);
    }
    if dq == 0 {
        return gcd_with_coeffs(&q, &p, v);
    }
    let cp = content_in(&p, v);
    let cq = content_in(&q, v);
    let pp = p.div_exact(&cp).expect("content divides");
    let pq = q.div_exact(&cq).expect("content divides");
    let c = gcd(&cp, &cq);
    if coprime_in_by_specialization(&pp, &pq, v) {
        return c.monic();
    }
    let g = primitive_prs(pp, pq, v);
    (&c * &g).monic()
}

/// `p` scaled to integer coefficients with no common factor.
fn integer_primitive(p: &MPoly) -> MPoly {
    let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let content = p.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(&(c.numer() * (&den / c.denom()))));
    if content.is_zero() {
        return p.clone();
    }
    p.scale(&Rat::new(den, content))
}

fn max_norm(p: &MPoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// Symmetric `xi`-adic expansion of the integer coefficients of `gamma`
/// into powers of variable `v`.
fn xi_adic(gamma: &MPoly, xi: &BigInt, v: usize) -> MPoly {
    let mut terms = Vec::new();
    for (m, c) in gamma.terms() {
        let mut c = c.numer().clone();
        let mut e = 0;
        while !c.is_zero() {
            let mut d = c.mod_floor(xi);
            if &d * 2 > *xi {
                d -= xi;
            }
            let mut exps = m.exps().to_vec();
            exps[v] += e;
            terms.push((exps, Rat::from_integer(d.clone())));
            c = (c - d) / xi;
            e += 1;
        }
    }
    MPoly::from_terms(gamma.vars().clone(), terms)
}

/// Heuristic gcd of integer polynomials by evaluation at a large integer and
/// `xi`-adic reconstruction; every candidate is checked by exact division.
fn heuristic_gcd(p: &MPoly, q: &MPoly) -> Option<MPoly> {
    let vars = p.vars().clone();
    if p.is_zero() || q.is_zero() {
        return Some(if p.is_zero() { q.clone() } else { p.clone() });
    }
    let Some(v) = main_var(p, q) else {
        let g = p.constant_term().numer().gcd(q.constant_term().numer());
        return Some(MPoly::constant(vars, Rat::from_integer(g)));
    };
    let (cp, cq) = (integer_primitive(p), integer_primitive(q));
    let content = (p.leading()?.1 / cp.leading()?.1).numer().gcd((q.leading()?.1 / cq.leading()?.1).numer());
    let mut xi: BigInt = max_norm(&cp).min(max_norm(&cq)) * 2 + 29;
    for _ in 0..6 {
        if xi.bits() > 20_000 {
            return None;
        }
        let at = Rat::from_integer(xi.clone());
        let gamma = heuristic_gcd(&cp.eval_var(v, &at), &cq.eval_var(v, &at))?;
        let g = integer_primitive(&xi_adic(&gamma, &xi, v));
        if !g.is_zero() && cp.div_exact(&g).is_some() && cq.div_exact(&g).is_some() {
            return Some(g.scale(&Rat::from_integer(content)));
        }
        xi = xi * 73_794 / 27_011;
    }
    None
}

/// [`heuristic_gcd`] accepted only when the cofactors are certified coprime
/// in every variable.
fn verified_heuristic_gcd(p: &MPoly, q: &MPoly) -> Option<MPoly> {
    let g = heuristic_gcd(&integer_primitive(p), &integer_primitive(q))?;
    let a = p.div_exact(&g)?;
    let b = q.div_exact(&g)?;
    let certified = (0..p.nvars())
        .filter(|&v| a.degree_in(v).unwrap_or(0) > 0 || b.degree_in(v).unwrap_or(0) > 0)
        .all(|v| coprime_in_by_specialization(&a, &b, v));
    certified.then(|| g.monic())
}

/// Shortcut when one side is a single term.
fn monomial_gcd(p: &MPoly, q: &MPoly) -> Option<MPoly> {
    let single = |a: &MPoly, b: &MPoly| -> Option<MPoly> {
        if a.nterms() != 1 {
            return None;
        }
        let (m, _) = a.leading()?;
        let mut exps: Vec<u32> = m.exps().to_vec();
        for (mb, _) in b.terms() {
            for (e, f) in exps.iter_mut().zip(mb.exps()) {
                *e = (*e).min(*f);
            }
        }
        Some(MPoly::from_terms(a.vars().clone(), [(exps, super::rat(1))]))
    };
    single(p, q).or_else(|| single(q, p))
}

/// gcd of `a` (free of variable `v`) with every `v`-coefficient of `b`.
fn gcd_with_coeffs(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let mut g = a.clone();
    for c in b.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g.monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in variable `v`.
pub fn content_in(p: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero(p.vars().clone());
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

fn lc_in(p: &MPoly, v: usize) -> MPoly {
    p.coeffs_in(v).pop().unwrap_or_else(|| MPoly::zero(p.vars().clone()))
}

/// Pseudo-remainder of `a` by `b` in variable `v` (up to a power of `lc_v(b)`).
fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let db = b.degree_in(v).unwrap_or(0);
    let lb = lc_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v).unwrap_or(0);
        if dr < db {
            break;
        }
        let lr = lc_in(&r, v);
        r = &(&lb * &r) - &(&lr * &b.shift_var(v, dr - db));
    }
    r
}

fn primitive_part(p: &MPoly, v: usize) -> MPoly {
    let c = content_in(p, v);
    // rational scalars are units; dropping them stops coefficient growth
    p.div_exact(&c).expect("content divides").monic()
}

/// gcd of two polynomials primitive in `v`.
fn primitive_prs(mut a: MPoly, mut b: MPoly, v: usize) -> MPoly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v).unwrap_or(0) == 0 {
            return MPoly::one(a.vars().clone());
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

/// Dense univariate polynomial over the rationals, ascending powers.
fn uni_trim(mut a: Vec<Rat>) -> Vec<Rat> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn uni_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let q = r.last().unwrap() / lb;
        let shift = r.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= &q * c;
        }
        r.pop();
        r = uni_trim(r);
    }
    r
}

fn uni_gcd_degree(mut a: Vec<Rat>, mut b: Vec<Rat>) -> usize {
    while !b.is_empty() {
        let r = uni_rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// Dense coefficients of `p` in `w` after fixing every other variable to a
/// small integer chosen by `attempt`; `None` if the degree in `w` drops.
fn specialize(p: &MPoly, w: usize, attempt: i64) -> Option<Vec<Rat>> {
    let d = p.degree_in(w).unwrap_or(0) as usize;
    let mut u = p.clone();
    for i in (0..p.nvars()).filter(|&i| i != w) {
        let val = ((i as i64 * 7 + attempt * 5 + 3) % 11) - 5;
        u = u.eval_var(i, &Rat::from_integer(val.into()));
    }
    let coeffs = uni_trim(u.coeffs_in(w).iter().map(|c| c.constant_term()).collect());
    (coeffs.len() == d + 1).then_some(coeffs)
}

/// Certifies that `p` is squarefree from univariate specializations: when
/// `p(a, w)` keeps its degree in `w` and is coprime to its derivative, no
/// repeated factor of `p` involves `w`. `false` means "not certified".
fn squarefree_by_specialization(p: &MPoly) -> bool {
    (0..p.nvars()).filter(|&w| p.degree_in(w).unwrap_or(0) > 0).all(|w| {
        (0..3i64).any(|attempt| {
            let Some(coeffs) = specialize(p, w, attempt) else {
                return false;
            };
            let deriv: Vec<Rat> =
                coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Rat::from_integer((k as i64).into())).collect();
            uni_gcd_degree(coeffs, uni_trim(deriv)) == 0
        })
    })
}

/// Certifies that `p` and `q` share no factor involving `v` the same way.
fn coprime_in_by_specialization(p: &MPoly, q: &MPoly, v: usize) -> bool {
    (0..3i64).any(|attempt| match (specialize(p, v, attempt), specialize(q, v, attempt)) {
        (Some(a), Some(b)) => uni_gcd_degree(a, b) == 0,
        _ => false,
    })
}

/// Product of the distinct irreducible factors: `p / gcd(p, ∂p/∂v_1, ..., ∂p/∂v_n)`,
/// normalized to leading coefficient 1.
pub fn squarefree_part(p: &MPoly) -> Result<MPoly> {
    if p.is_zero() {
        return Err(Error::ZeroInput("squarefree_part"));
    }
    if squarefree_by_specialization(p) {
        return Ok(p.monic());
    }
    let mut g = p.clone();
    for i in 0..p.nvars() {
        let d = p.derivative_at(i);
        if d.is_zero() {
            continue;
        }
        g = gcd(&g, &d);
        if g.is_constant() {
            break;
        }
    }
    if g.is_zero() || g.is_constant() {
        return Ok(p.monic());
    }
    Ok(p.div_exact(&g).expect("gcd divides").monic())
}

/// True when `p` has no repeated factor.
pub fn is_squarefree(p: &MPoly) -> bool {
    match squarefree_part(p) {
        Ok(s) => s.total_degree() == p.total_degree(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::poly;

    const XY: [&str; 2] = ["x", "y"];

    #[test]
    fn gcd_examples() {
        let a = poly(&XY, &[(&[2, 1], 1)]);
        let b = poly(&XY, &[(&[1, 2], 1)]);
        assert_eq!(gcd(&a, &b), poly(&XY, &[(&[1, 1], 1)]));

        let p = poly(&XY, &[(&[1, 0], 2), (&[0, 1], 4)]);
        assert_eq!(gcd(&p, &MPoly::zero(p.vars().clone())), p.monic());
        assert!(gcd(&MPoly::zero(p.vars().clone()), &MPoly::zero(p.vars().clone())).is_zero());

        let s = poly(&XY, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let d = poly(&XY, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let f = &(&s * &s) * &d;
        let g = &(&d * &d) * &s;
        assert_eq!(gcd(&f, &g), poly(&XY, &[(&[2, 0], 1), (&[0, 2], -1)]));
    }

    #[test]
    fn gcd_with_nontrivial_content() {
        let xyz = ["x", "y", "z"];
        let a = poly(&xyz, &[(&[1, 0, 2], 1), (&[1, 1, 0], -1)]);
        let b = poly(&xyz, &[(&[1, 0, 1], 1), (&[1, 0, 0], 3)]);
        // x(z^2 - y) and x(z + 3): gcd x
        assert_eq!(gcd(&a, &b), poly(&xyz, &[(&[1, 0, 0], 1)]));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&poly(&["x"], &[(&[3], 1)])).unwrap(), poly(&["x"], &[(&[1], 1)]));
        assert_eq!(squarefree_part(&poly(&XY, &[(&[1, 2], 1)])).unwrap(), poly(&XY, &[(&[1, 1], 1)]));
        let a1 = poly(&["x", "y", "z"], &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]);
        // normalized: leading coefficient 1 in deglex, where x*y > z^2
        assert_eq!(squarefree_part(&a1).unwrap(), a1.monic());
        assert_eq!(squarefree_part(&a1).unwrap(), -a1.clone());
        assert!(squarefree_part(&MPoly::zero(a1.vars().clone())).is_err());
    }

    #[test]
    fn dense_common_square_factor() {
        let xyz = ["x", "y", "z"];
        let a = crate::parse::parse_poly("-5*x^2*y*z^2 - 5*x^2*y^2 - 3*x*y^2", &xyz, &[]).unwrap();
        let b = crate::parse::parse_poly("-2*x^2*y^2*z^2 - 2*x + 3*z", &xyz, &[]).unwrap();
        let p = &(&a * &a) * &b;
        for v in 0..3 {
            let dp = p.derivative_at(v);
            let g = gcd(&p, &dp);
            assert!(p.div_exact(&g).is_some() && dp.div_exact(&g).is_some() && g.div_exact(&a).is_some(), "{v}: {g}");
        }
        assert_eq!(squarefree_part(&p).unwrap(), (&a * &b).monic());
    }
}
