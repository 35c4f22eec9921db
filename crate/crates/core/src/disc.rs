//! Resultants, discriminants and generalized discriminants.
//!
//! Polynomials in a distinguished variable `v` are handled as coefficient
//! lists (`coeffs[k]` multiplies `v^k`) of [`TruncSeries`], so the same code
//! serves exact polynomials and truncated Weierstrass data.
//!
//! Conventions:
//! - The Sylvester matrix of `(p, q)` lists the `q`-many shifts of `p` first,
//!   coefficients by decreasing power. With this layout
//!   `Res_z(z^2 - x, 2z) = -4x`.
//! - `Disc(p) = (-1)^{d(d-1)/2} Res(p, p') / lc(p)`; degree one gives 1.
//! - `D^i = (-1)^{m(m-1)/2} psc_{i-1}(p, p')` with `m = d - i + 1`, where
//!   `psc_k` is the determinant of the first `deg p + deg q - 2k` columns of
//!   the `k`-th Sylvester submatrix. For monic `p`, `D^1` is the discriminant,
//!   `D^d = d`, and `D^{d-j+1}` sums `prod (r_a - r_b)^2` over all `j`-subsets
//!   of the roots.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{det_series, SeriesMatrix};
use crate::par::Exec;
use crate::poly::{rat, MPoly, Rat, TruncSeries, Vars};

/// Coefficient list of a polynomial in one distinguished variable.
pub type Coeffs = Vec<TruncSeries>;

/// Coefficients of `p` in variable `v`, trailing zeros removed.
pub fn coeffs_of(p: &TruncSeries, v: usize) -> Coeffs {
    let mut c = p.coeffs_in(v);
    while c.last().is_some_and(|x| x.body().is_zero()) {
        c.pop();
    }
    c
}

pub fn coeffs_of_poly(p: &MPoly, v: usize) -> Coeffs {
    coeffs_of(&TruncSeries::exact(p.clone()), v)
}

/// Formal derivative of a coefficient list.
pub fn derivative(c: &[TruncSeries]) -> Coeffs {
    c.iter().enumerate().skip(1).map(|(k, a)| a.scale(&rat(k as i64))).collect()
}

fn sign_for(m: usize) -> bool {
    (m * m.saturating_sub(1) / 2) % 2 == 1
}

fn zero_like(vars: &Vars) -> TruncSeries {
    TruncSeries::exact(MPoly::zero(vars.clone()))
}

/// The `k`-th Sylvester submatrix of `(p, q)` restricted to its first
/// `deg p + deg q - 2k` columns.
pub fn sylvester_submatrix(p: &[TruncSeries], q: &[TruncSeries], k: usize) -> SeriesMatrix {
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    let n = dp + dq - 2 * k;
    let vars = p[0].vars().clone();
    let entry = |c: &[TruncSeries], idx: isize| -> TruncSeries {
        if idx < 0 || idx as usize >= c.len() {
            zero_like(&vars)
        } else {
            c[idx as usize].clone()
        }
    };
    let mut rows = Vec::with_capacity(n);
    for i in 0..dq - k {
        rows.push((0..n).map(|c| entry(p, dp as isize - c as isize + i as isize)).collect());
    }
    for j in 0..dp - k {
        rows.push((0..n).map(|c| entry(q, dq as isize - c as isize + j as isize)).collect());
    }
    rows
}

/// Principal subresultant coefficient `psc_k(p, q)`.
pub fn psc(p: &[TruncSeries], q: &[TruncSeries], k: usize, exec: Exec) -> TruncSeries {
    let vars = p[0].vars().clone();
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    if dp + dq == 2 * k {
        return TruncSeries::constant(vars, Rat::one());
    }
    det_series(sylvester_submatrix(p, q, k), exec)
}

/// Resultant of two coefficient lists.
pub fn resultant_coeffs(p: &[TruncSeries], q: &[TruncSeries], exec: Exec) -> Result<TruncSeries> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::ZeroInput("resultant"));
    }
    Ok(psc(p, q, 0, exec))
}

/// `Res_v(p, q)` of series or polynomials.
pub fn resultant(p: &TruncSeries, q: &TruncSeries, v: &str, exec: Exec) -> Result<TruncSeries> {
    let (pb, qb) = p.body().aligned(q.body());
    let i = pb.var_index(v)?;
    let p = TruncSeries::new(pb, p.precision());
    let q = TruncSeries::new(qb, q.precision());
    resultant_coeffs(&coeffs_of(&p, i), &coeffs_of(&q, i), exec)
}

/// `Res_v(p, q)` of exact polynomials.
pub fn resultant_poly(p: &MPoly, q: &MPoly, v: &str, exec: Exec) -> Result<MPoly> {
    Ok(resultant(&TruncSeries::exact(p.clone()), &TruncSeries::exact(q.clone()), v, exec)?.into_body())
}

/// Discriminant of a coefficient list of degree `d >= 1`.
pub fn discriminant_coeffs(c: &[TruncSeries], exec: Exec) -> Result<TruncSeries> {
    if c.is_empty() {
        return Err(Error::ZeroInput("discriminant"));
    }
    let d = c.len() - 1;
    let vars = c[0].vars().clone();
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    if d == 1 {
        return Ok(TruncSeries::constant(vars, Rat::one()));
    }
    let r = psc(c, &derivative(c), 0, exec);
    let r = if sign_for(d) { r.neg() } else { r };
    let lc = &c[d];
    if lc.is_exact() && lc.body().is_constant() {
        return Ok(r.scale(&lc.constant_term().recip()));
    }
    r.div(lc).ok_or_else(|| Error::Invalid("leading coefficient does not divide the resultant".into()))
}

/// `Disc_v(p)`.
pub fn discriminant(p: &TruncSeries, v: &str, exec: Exec) -> Result<TruncSeries> {
    let i = p.body().var_index(v)?;
    if p.body().is_zero() {
        return Err(Error::ZeroInput("discriminant"));
    }
    discriminant_coeffs(&coeffs_of(p, i), exec)
}

pub fn discriminant_poly(p: &MPoly, v: &str, exec: Exec) -> Result<MPoly> {
    Ok(discriminant(&TruncSeries::exact(p.clone()), v, exec)?.into_body())
}

/// The single entry `D^i` (1-based) of the chain of `c`.
pub fn generalized_discriminant(c: &[TruncSeries], i: usize, exec: Exec) -> TruncSeries {
    let d = c.len() - 1;
    assert!((1..=d).contains(&i), "index {i} outside 1..={d}");
    let vars = c[0].vars().clone();
    if d == 1 {
        return TruncSeries::constant(vars, Rat::one());
    }
    let m = d - i + 1;
    let s = psc(c, &derivative(c), i - 1, exec);
    if sign_for(m) {
        s.neg()
    } else {
        s
    }
}

/// The generalized discriminants `D^1..D^d` of a polynomial of degree `d`.
#[derive(Clone, Debug)]
pub struct DiscChain {
    pub degree: usize,
    /// `entries[i - 1]` is `D^i`.
    pub entries: Vec<TruncSeries>,
    /// Smallest `i` with `D^i` not identically zero, once decided.
    pub first_nonzero: Option<usize>,
    /// For truncated chains: the entry whose vanishing could not be
    /// certified at the current precision.
    pub undecided: Option<usize>,
}

impl DiscChain {
    pub fn entry(&self, i: usize) -> &TruncSeries {
        &self.entries[i - 1]
    }
}

/// Zero-detection margin for truncated chains: an entry below the first
/// nonzero one (of order `r`) counts as identically zero once it vanishes to
/// precision at least `2r + 2`.
pub fn zero_margin(r: u32) -> u32 {
    2 * r + 2
}

/// All generalized discriminants of `c`, entries computed concurrently.
pub fn generalized_discriminants(c: &[TruncSeries], exec: Exec) -> Result<DiscChain> {
    if c.is_empty() {
        return Err(Error::ZeroInput("generalized_discriminants"));
    }
    let d = c.len() - 1;
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    let entries: Vec<TruncSeries> = exec.map_range(1..d + 1, |i| generalized_discriminant(c, i, Exec::Sequential));
    let mut chain = DiscChain { degree: d, entries, first_nonzero: None, undecided: None };
    scan(&mut chain);
    Ok(chain)
}

/// Decide the first nonzero entry, certifying vanishing below it.
fn scan(chain: &mut DiscChain) {
    let Some(pos) = chain.entries.iter().position(|e| !e.body().is_zero()) else {
        return;
    };
    let r = chain.entries[pos].order_bound();
    let need = zero_margin(r);
    match chain.entries[..pos].iter().position(|e| !e.is_exact() && e.precision() < need) {
        Some(bad) => chain.undecided = Some(bad + 1),
        None => chain.first_nonzero = Some(pos + 1),
    }
}

/// `idiscr`: index of the first nonzero generalized discriminant.
pub fn idiscr(chain: &DiscChain) -> Result<usize> {
    chain.first_nonzero.ok_or_else(|| Error::PrecisionExhausted {
        quantity: format!("vanishing of D^{}", chain.undecided.unwrap_or(1)),
        precision: chain.entries.iter().map(TruncSeries::precision).min().unwrap_or(0),
    })
}

/// `D^1..D^d` straight from the roots: `D^{d-j+1}` is the sum over
/// `j`-subsets of the product of squared root differences.
pub fn root_formula_oracle(roots: &[Rat]) -> Vec<Rat> {
    let d = roots.len();
    let mut out = vec![Rat::zero(); d];
    for mask in 1u64..(1u64 << d) {
        let idx: Vec<usize> = (0..d).filter(|&b| mask >> b & 1 == 1).collect();
        let j = idx.len();
        let mut prod = Rat::one();
        'pairs: for a in 0..j {
            for b in a + 1..j {
                let diff = &roots[idx[a]] - &roots[idx[b]];
                if diff.is_zero() {
                    prod = Rat::zero();
                    break 'pairs;
                }
                prod *= &diff * &diff;
            }
        }
        out[d - j] += prod;
    }
    out
}

/// Monic univariate polynomial with the given roots, repeated by multiplicity.
pub fn poly_from_roots(vars: Vars, v: usize, roots: &[Rat]) -> MPoly {
    let x = MPoly::var_at(vars.clone(), v);
    roots.iter().fold(MPoly::one(vars.clone()), |acc, r| &acc * &(&x - &MPoly::constant(vars.clone(), r.clone())))
}

fn lemma_ratio(pattern: &[u32], roots: &[Rat], exec: Exec) -> Result<Rat> {
    let vars = crate::poly::vars_of(&["v"]);
    let full: Vec<Rat> =
        roots.iter().zip(pattern).flat_map(|(r, &m)| std::iter::repeat_n(r.clone(), m as usize)).collect();
    let f = poly_from_roots(vars.clone(), 0, &full);
    let red = poly_from_roots(vars, 0, roots);
    let d = full.len();
    let s = roots.len();
    let top = generalized_discriminant(&coeffs_of_poly(&f, 0), d - s + 1, exec).constant_term();
    let bottom = if s == 1 { Rat::one() } else { discriminant_coeffs(&coeffs_of_poly(&red, 0), exec)?.constant_term() };
    Ok(top / bottom)
}

/// Constant `C` with `D^{d-s+1}(F) = C * Disc(F_red)` for
/// `F = prod (v - r_i)^{m_i}` with distinct `r_i`. The value is recomputed
/// after shifting the roots (same pattern) and must agree and be positive.
pub fn lemma_a1_constant(pattern: &[u32], roots: &[Rat], exec: Exec) -> Result<Rat> {
    if pattern.len() != roots.len() || pattern.is_empty() || pattern.contains(&0) {
        return Err(Error::Invalid("pattern and roots must be nonempty, equal length, multiplicities >= 1".into()));
    }
    for a in 0..roots.len() {
        for b in a + 1..roots.len() {
            if roots[a] == roots[b] {
                return Err(Error::Invalid("roots must be distinct".into()));
            }
        }
    }
    let c = lemma_ratio(pattern, roots, exec)?;
    let moved: Vec<Rat> =
        roots.iter().enumerate().map(|(i, r)| r * rat(3) + Rat::new((i as i64 + 1).into(), 7.into())).collect();
    let c2 = lemma_ratio(pattern, &moved, exec)?;
    if c != c2 {
        return Err(Error::Invalid(format!("constant changed under perturbation: {c} vs {c2}")));
    }
    if !c.is_positive() {
        return Err(Error::Invalid(format!("constant {c} is not positive")));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::poly;
    use crate::poly::vars_of;

    const EX: Exec = Exec::Sequential;

    fn chain_of_roots(roots: &[i64]) -> DiscChain {
        let rs: Vec<Rat> = roots.iter().map(|&r| rat(r)).collect();
        let p = poly_from_roots(vars_of(&["y"]), 0, &rs);
        generalized_discriminants(&coeffs_of_poly(&p, 0), EX).unwrap()
    }

    fn consts(c: &DiscChain) -> Vec<Rat> {
        c.entries.iter().map(TruncSeries::constant_term).collect()
    }

    #[test]
    fn resultant_examples() {
        let xz = ["x", "z"];
        let p = poly(&xz, &[(&[0, 2], 1), (&[1, 0], -1)]);
        let q = poly(&xz, &[(&[0, 1], 2)]);
        assert_eq!(resultant_poly(&p, &q, "z", EX).unwrap(), poly(&xz, &[(&[1, 0], -4)]));

        let aby = ["a", "b", "y"];
        let p = poly(&aby, &[(&[0, 0, 1], 1), (&[1, 0, 0], -1)]);
        let q = poly(&aby, &[(&[0, 0, 1], 1), (&[0, 1, 0], -1)]);
        assert_eq!(resultant_poly(&p, &q, "y", EX).unwrap(), poly(&aby, &[(&[1, 0, 0], 1), (&[0, 1, 0], -1)]));

        let z2 = poly(&["z"], &[(&[2], 1)]);
        let dz = poly(&["z"], &[(&[1], 2)]);
        assert!(resultant_poly(&z2, &dz, "z", EX).unwrap().is_zero());
    }

    #[test]
    fn discriminant_examples() {
        let xyz = ["x", "y", "z"];
        let f = poly(&xyz, &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]);
        assert_eq!(discriminant_poly(&f, "z", EX).unwrap(), poly(&xyz, &[(&[1, 1, 0], 4)]));
        let g = poly(&["x", "y"], &[(&[0, 2], 1), (&[3, 0], -1)]);
        assert_eq!(discriminant_poly(&g, "y", EX).unwrap(), poly(&["x", "y"], &[(&[3, 0], 4)]));
        let lin = poly(&["x", "y"], &[(&[0, 1], 1), (&[1, 0], 5)]);
        assert_eq!(discriminant_poly(&lin, "y", EX).unwrap(), MPoly::one(lin.vars().clone()));
        let c = poly(&["x", "y"], &[(&[1, 0], 1)]);
        assert_eq!(discriminant_poly(&c, "y", EX), Err(Error::DegreeZero));
    }

    #[test]
    fn chain_examples() {
        let c = chain_of_roots(&[1, 2, 3]);
        assert_eq!(c.first_nonzero, Some(1));
        assert_eq!(c.entry(1).constant_term(), rat(4));

        let c = chain_of_roots(&[0, 0, 0]);
        assert_eq!(consts(&c), vec![rat(0), rat(0), rat(3)]);
        assert_eq!(idiscr(&c).unwrap(), 3);

        let c = chain_of_roots(&[0, 0, 1]);
        assert_eq!(c.entry(1).constant_term(), rat(0));
        assert_eq!(c.entry(2).constant_term(), rat(2));
        assert_eq!(idiscr(&c).unwrap(), 2);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(root_formula_oracle(&[rat(0), rat(0)]), vec![rat(0), rat(2)]);
        assert_eq!(root_formula_oracle(&[rat(0), rat(1)]), vec![rat(1), rat(2)]);
        assert_eq!(root_formula_oracle(&[rat(0), rat(0), rat(0)]), vec![rat(0), rat(0), rat(3)]);
    }

    #[test]
    fn lemma_a1_examples() {
        assert_eq!(lemma_a1_constant(&[2], &[rat(0)], EX).unwrap(), rat(2));
        assert_eq!(lemma_a1_constant(&[2, 1], &[rat(0), rat(1)], EX).unwrap(), rat(2));
        assert_eq!(lemma_a1_constant(&[1, 1, 1], &[rat(0), rat(1), rat(5)], EX).unwrap(), rat(1));
    }

    #[test]
    fn truncated_chain_needs_margin() {
        // W = y^2 - x^2 known to low precision: D^1 = 4x^2.
        let xy = ["x", "y"];
        let w = poly(&xy, &[(&[0, 2], 1), (&[2, 0], -1)]);
        let c: Coeffs = coeffs_of_poly(&w, 1).into_iter().map(|s| s.truncate(5)).collect();
        let chain = generalized_discriminants(&c, EX).unwrap();
        assert_eq!(idiscr(&chain).unwrap(), 1);
        assert_eq!(chain.entry(1).order().value(), Some(2));
    }
}
