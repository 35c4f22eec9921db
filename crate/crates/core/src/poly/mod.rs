//! Exact multivariate polynomials over the rationals.
//!
//! An [`MPoly`] stores its nonzero terms in a `BTreeMap` keyed by
//! [`Monomial`], which orders exponent vectors degree-lexicographically
//! (total degree first, then lexicographic with the first variable most
//! significant). The leading term is therefore the last entry of the map and
//! iteration visits terms by increasing total degree, which the truncated
//! series kernels rely on.
//!
//! Binary operations on polynomials over different variable lists first embed
//! both operands into the union of the lists (keeping the left operand's
//! order), so callers may mix `x`-only and `(x, y, z)` data freely.

mod gcd;
mod linear;
mod series;

pub use gcd::{content_in, gcd, is_squarefree, squarefree_part};
pub use linear::{identity_matrix, mat_det, mat_inverse, mat_mul, RatMatrix};
pub use series::{Order, TruncSeries, EXACT};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exact rational coefficient, always kept in lowest terms with a positive
/// denominator by `num-rational`.
pub type Rat = num_rational::BigRational;

pub(crate) type Exps = SmallVec<[u32; 6]>;

/// Shared, ordered list of variable names.
pub type Vars = Arc<Vec<String>>;

pub fn vars_of<S: AsRef<str>>(names: &[S]) -> Vars {
    Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector with its cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Exps,
}

impl Monomial {
    pub fn new(exps: Exps) -> Self {
        let deg = exps.iter().sum();
        Monomial { deg, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { deg: 0, exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    /// Total degree restricted to the variables selected by `mask`.
    pub fn degree_in(&self, mask: &[bool]) -> u32 {
        self.exps.iter().zip(mask).filter(|(_, m)| **m).map(|(e, _)| *e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { deg: self.deg + other.deg, exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: Exps = other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        Monomial { deg: other.deg - self.deg, exps }
    }

    pub(crate) fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] = e;
        Monomial::new(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.deg.cmp(&other.deg).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact multivariate polynomial with rational coefficients.
#[derive(Clone, Debug)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rat>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for MPoly {}

impl MPoly {
    pub fn zero(vars: Vars) -> Self {
        MPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, c: Rat) -> Self {
        let mut p = MPoly::zero(vars);
        if !c.is_zero() {
            let n = p.nvars();
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn one(vars: Vars) -> Self {
        MPoly::constant(vars, Rat::one())
    }

    /// The variable at position `i`.
    pub fn var_at(vars: Vars, i: usize) -> Self {
        let mut exps: Exps = SmallVec::from_elem(0, vars.len());
        exps[i] = 1;
        let mut p = MPoly::zero(vars);
        p.terms.insert(Monomial::new(exps), Rat::one());
        p
    }

    pub fn var(vars: Vars, name: &str) -> Result<Self> {
        let i = vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(MPoly::var_at(vars, i))
    }

    /// Build from `(exponents, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I>(vars: Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut p = MPoly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.nvars(), "exponent length must match variable count");
            p.add_term(Monomial::new(e.into_iter().collect()), c);
        }
        p
    }

    pub(crate) fn from_map(vars: Vars, terms: BTreeMap<Monomial, Rat>) -> Self {
        MPoly { vars, terms }
    }

    pub(crate) fn from_hash(vars: Vars, acc: HashMap<Monomial, Rat>) -> Self {
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MPoly { vars, terms }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.deg == 0)
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing degree-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(&Monomial::new(exps.iter().copied().collect())).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.first_key_value().filter(|(m, _)| m.deg == 0).map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.last_key_value().map(|(m, _)| m.deg)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps[i]).max()
    }

    /// Leading monomial and coefficient under the degree-lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.last_key_value()
    }

    /// Minimal total degree of a term; `None` for the zero polynomial.
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.first_key_value().map(|(m, _)| m.deg)
    }

    /// Sum of the terms of minimal total degree (the tangent-cone form).
    pub fn lowest_form(&self) -> Result<MPoly> {
        let k = self.order_at_origin().ok_or(Error::ZeroInput("lowest_form"))?;
        Ok(self.homogeneous_part(k))
    }

    pub fn homogeneous_part(&self, k: u32) -> MPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.deg == k).map(|(m, c)| (m.clone(), c.clone())).collect();
        MPoly::from_map(self.vars.clone(), terms)
    }

    /// Order at the origin of the restriction to the axis of variable `i`
    /// (every other variable set to zero); `None` if that restriction vanishes.
    pub fn order_in_var(&self, i: usize) -> Option<u32> {
        self.terms.keys().filter(|m| m.deg == m.exps[i]).map(|m| m.exps[i]).min()
    }

    /// Drop every term of total degree `>= n`.
    pub fn truncate(&self, n: u32) -> MPoly {
        let terms = self.terms.iter().take_while(|(m, _)| m.deg < n).map(|(m, c)| (m.clone(), c.clone())).collect();
        MPoly::from_map(self.vars.clone(), terms)
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.vars.clone());
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        MPoly::from_map(self.vars.clone(), terms)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.vars.clone());
        }
        let terms = self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect();
        MPoly::from_map(self.vars.clone(), terms)
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one(self.vars.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Make the leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, lc)) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    pub fn derivative(&self, name: &str) -> Result<MPoly> {
        let i = self.var_index(name)?;
        Ok(self.derivative_at(i))
    }

    pub fn derivative_at(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e > 0 {
                out.add_term(m.with_exp(i, e - 1), c * Rat::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Substitute the constant `value` for variable `i` (the variable stays in
    /// the list with exponent zero everywhere).
    pub fn eval_var(&self, i: usize, value: &Rat) -> MPoly {
        let mut out = MPoly::zero(self.vars.clone());
        if value.is_zero() {
            for (m, c) in &self.terms {
                if m.exps[i] == 0 {
                    out.terms.insert(m.clone(), c.clone());
                }
            }
            return out;
        }
        for (m, c) in &self.terms {
            let e = m.exps[i];
            let k = c * num_traits::pow(value.clone(), e as usize);
            out.add_term(m.with_exp(i, 0), k);
        }
        out
    }

    /// Set every variable in `idx` to zero.
    pub fn restrict_zero(&self, idx: &[usize]) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| idx.iter().all(|&i| m.exps[i] == 0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MPoly::from_map(self.vars.clone(), terms)
    }

    /// Coefficients of `self` as a polynomial in variable `i`: entry `k` is the
    /// coefficient of `v^k`, itself free of `v`.
    pub fn coeffs_in(&self, i: usize) -> Vec<MPoly> {
        let n = self.degree_in(i).map_or(0, |d| d as usize + 1);
        let mut out = vec![MPoly::zero(self.vars.clone()); n];
        for (m, c) in &self.terms {
            let e = m.exps[i] as usize;
            out[e].terms.insert(m.with_exp(i, 0), c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(vars: Vars, i: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                out.add_term(m.with_exp(i, m.exps[i] + k as u32), a.clone());
            }
        }
        out
    }

    /// Multiply by `v_i^k`.
    pub fn shift_var(&self, i: usize, k: u32) -> MPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.with_exp(i, m.exps[i] + k), c.clone())).collect();
        MPoly::from_map(self.vars.clone(), terms)
    }

    /// Re-express over another variable list. Fails if a variable that occurs
    /// in `self` is missing from `vars`.
    pub fn with_vars(&self, vars: Vars) -> Result<MPoly> {
        if vars == self.vars {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = MPoly::zero(vars.clone());
        for (m, c) in &self.terms {
            let mut exps: Exps = SmallVec::from_elem(0, vars.len());
            for (j, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[j] {
                    Some(k) => exps[k] = e,
                    None => return Err(Error::UnknownVariable(self.vars[j].clone())),
                }
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Both operands over the union of their variable lists.
    pub fn aligned(&self, other: &MPoly) -> (MPoly, MPoly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let mut names: Vec<String> = self.vars.as_ref().clone();
        for v in other.vars.iter() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        let vars = Arc::new(names);
        (
            self.with_vars(vars.clone()).expect("union contains all variables"),
            other.with_vars(vars).expect("union contains all variables"),
        )
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (num, den) = self.aligned(d);
        let (lm, lc) = den.leading()?;
        let (lm, lc_inv) = (lm.clone(), lc.recip());
        let mut rem = num;
        let mut q = MPoly::zero(rem.vars.clone());
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient_of(m);
            let qc = c * &lc_inv;
            // The leading term cancels exactly; drop it instead of summing.
            let top = m.clone();
            rem.terms.remove(&top);
            for (md, cd) in den.terms.iter().rev().skip(1) {
                rem.add_term(qm.mul(md), -(cd * &qc));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Evaluate at a full point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.exps.iter().zip(point) {
                if *e > 0 {
                    t *= num_traits::pow(x.clone(), *e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    fn add_impl(&self, other: &MPoly, negate: bool) -> MPoly {
        if self.vars != other.vars {
            let (a, b) = self.aligned(other);
            return a.add_impl(&b, negate);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), if negate { -c.clone() } else { c.clone() });
        }
        out
    }

    fn mul_impl(&self, other: &MPoly) -> MPoly {
        if self.vars != other.vars {
            let (a, b) = self.aligned(other);
            return a.mul_impl(&b);
        }
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(self.vars.clone());
        }
        let mut acc: HashMap<Monomial, Rat> = HashMap::with_capacity(self.nterms() * other.nterms());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += prod,
                }
            }
        }
        MPoly::from_hash(self.vars.clone(), acc)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b MPoly> for &'a MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &'b MPoly) -> MPoly {
                $body(self, rhs)
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                $body(&self, &rhs)
            }
        }
        impl<'b> $tr<&'b MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &'b MPoly) -> MPoly {
                $body(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &MPoly, b: &MPoly| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &MPoly, b: &MPoly| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &MPoly, b: &MPoly| a.mul_impl(b));

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        MPoly::from_map(self.vars.clone(), terms)
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// `p + q`, `p - q` or `p * q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn arith(p: &MPoly, q: &MPoly, op: ArithOp) -> MPoly {
    match op {
        ArithOp::Add => p + q,
        ArithOp::Sub => p - q,
        ArithOp::Mul => p * q,
    }
}

pub(crate) fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MPoly {
    /// Highest terms first, in the grammar accepted by the expression parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if m.deg == 0 || !a.is_one() {
                factors.push(fmt_rat(&a));
            }
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Tiny polynomial builder for unit tests: `poly(&["x","y"], &[(&[1,0], 2), ...])`.
    pub fn poly(vars: &[&str], terms: &[(&[u32], i64)]) -> MPoly {
        MPoly::from_terms(vars_of(vars), terms.iter().map(|(e, c)| (e.to_vec(), rat(*c))))
    }
}

#[cfg(test)]
mod tests {
    use super::testing::poly;
    use super::*;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn cancellation_and_identity() {
        let a = poly(&XYZ, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1)]);
        let b = poly(&XYZ, &[(&[1, 0, 0], 1), (&[0, 1, 0], -1)]);
        assert_eq!(arith(&a, &b, ArithOp::Add), poly(&XYZ, &[(&[1, 0, 0], 2)]));
        let f = poly(&XYZ, &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]);
        assert_eq!(arith(&f, &MPoly::one(f.vars().clone()), ArithOp::Mul), f);
        let s = poly(&XYZ, &[(&[0, 1, 0], 1), (&[1, 0, 0], 1)]);
        let d = poly(&XYZ, &[(&[0, 1, 0], 1), (&[1, 0, 0], -1)]);
        assert_eq!(&s * &d, poly(&XYZ, &[(&[0, 2, 0], 1), (&[2, 0, 0], -1)]));
    }

    #[test]
    fn derivatives() {
        let f = poly(&XYZ, &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]);
        assert_eq!(f.derivative("z").unwrap(), poly(&XYZ, &[(&[0, 0, 1], 2)]));
        assert_eq!(f.derivative("y").unwrap(), poly(&XYZ, &[(&[1, 0, 0], -1)]));
        let c = poly(&XYZ, &[(&[3, 0, 0], 1)]);
        assert!(c.derivative("z").unwrap().is_zero());
        assert_eq!(f.derivative("w"), Err(Error::UnknownVariable("w".into())));
    }

    #[test]
    fn orders_and_forms() {
        let f = poly(&XYZ, &[(&[0, 0, 2], 1), (&[1, 1, 0], -1)]);
        assert_eq!(f.order_at_origin(), Some(2));
        assert_eq!(poly(&XYZ, &[(&[0, 0, 0], 5)]).order_at_origin(), Some(0));

        let cusp = poly(&XYZ, &[(&[0, 0, 2], 1), (&[3, 0, 0], -1)]);
        assert_eq!(cusp.lowest_form().unwrap(), poly(&XYZ, &[(&[0, 0, 2], 1)]));
        assert_eq!(f.lowest_form().unwrap(), f);
        let g = poly(&XYZ, &[(&[1, 0, 0], 1), (&[2, 0, 0], 1)]);
        assert_eq!(g.lowest_form().unwrap(), poly(&XYZ, &[(&[1, 0, 0], 1)]));
        assert!(MPoly::zero(vars_of(&XYZ)).lowest_form().is_err());

        assert_eq!(f.order_in_var(2), Some(2));
        assert_eq!(poly(&XYZ, &[(&[1, 1, 0], 4)]).order_in_var(1), None);
        // 4y(x + 3y) = 4xy + 12y^2
        let h = poly(&XYZ, &[(&[1, 1, 0], 4), (&[0, 2, 0], 12)]);
        assert_eq!(h.order_in_var(1), Some(2));
    }

    #[test]
    fn mixed_variable_lists_are_aligned() {
        let a = poly(&["x"], &[(&[1], 1)]);
        let b = poly(&["y"], &[(&[1], 1)]);
        let s = &a + &b;
        assert_eq!(s.vars().as_slice(), &["x".to_string(), "y".to_string()]);
        assert_eq!(s, poly(&["x", "y"], &[(&[1, 0], 1), (&[0, 1], 1)]));
    }

    #[test]
    fn exact_division() {
        let a = poly(&["x", "y"], &[(&[2, 0], 1), (&[0, 2], -1)]);
        let b = poly(&["x", "y"], &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(a.div_exact(&b).unwrap(), poly(&["x", "y"], &[(&[1, 0], 1), (&[0, 1], -1)]));
        assert!(a.div_exact(&poly(&["x", "y"], &[(&[1, 0], 1)])).is_none());
    }

    #[test]
    fn display_is_readable() {
        let f = MPoly::from_terms(
            vars_of(&XYZ),
            vec![(vec![0, 0, 2], rat(1)), (vec![1, 1, 0], rat(-1)), (vec![2, 0, 0], ratio(1, 2))],
        );
        assert_eq!(f.to_string(), "1/2*x^2 - x*y + z^2");
        assert_eq!(MPoly::constant(vars_of(&XYZ), rat(-3)).to_string(), "-3");
    }
}
