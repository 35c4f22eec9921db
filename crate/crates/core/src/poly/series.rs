//! Truncated power series: a polynomial body plus a total-degree precision.
//!
//! `TruncSeries { body, prec }` stands for every series that agrees with
//! `body` on all monomials of total degree `< prec`; terms of degree `>= prec`
//! are unknown. `prec == EXACT` marks a polynomial known exactly, and exact
//! operands stay exact under ring operations.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{MPoly, Monomial, Rat, Vars};
use crate::error::{Error, Result};

/// Precision of an exactly known series.
pub const EXACT: u32 = u32::MAX;

/// Order of a series at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// Minimal total degree of a nonzero term.
    Value(u32),
    /// No known term: the series vanishes to the given precision
    /// (`ZeroToPrecision(EXACT)` is the zero polynomial).
    ZeroToPrecision(u32),
}

impl Order {
    pub fn value(self) -> Option<u32> {
        match self {
            Order::Value(v) => Some(v),
            Order::ZeroToPrecision(_) => None,
        }
    }
}

fn sat_add(a: u32, b: u32) -> u32 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a.saturating_add(b).min(EXACT - 1)
    }
}

/// Product of two polynomials keeping only terms of total degree `< n`.
pub(crate) fn mul_trunc(a: &MPoly, b: &MPoly, n: u32) -> MPoly {
    if n == EXACT {
        return a * b;
    }
    let (a, b) = a.aligned(b);
    let vars = a.vars().clone();
    if a.is_zero() || b.is_zero() || n == 0 {
        return MPoly::zero(vars);
    }
    let bt: Vec<(&Monomial, &Rat)> = b.terms().collect();
    let mut acc: HashMap<Monomial, Rat> = HashMap::new();
    for (ma, ca) in a.terms() {
        if ma.degree() >= n {
            break;
        }
        let room = n - ma.degree();
        for (mb, cb) in &bt {
            if mb.degree() >= room {
                break;
            }
            let prod = ca * *cb;
            match acc.entry(ma.mul(mb)) {
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(prod);
                }
                std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += prod,
            }
        }
    }
    MPoly::from_hash(vars, acc)
}

/// Truncated multivariate power series over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    body: MPoly,
    prec: u32,
}

impl TruncSeries {
    /// Series known modulo total degree `prec`; `body` is truncated accordingly.
    pub fn new(body: MPoly, prec: u32) -> Self {
        let body = if prec == EXACT { body } else { body.truncate(prec) };
        TruncSeries { body, prec }
    }

    pub fn exact(body: MPoly) -> Self {
        TruncSeries { body, prec: EXACT }
    }

    pub fn zero(vars: Vars, prec: u32) -> Self {
        TruncSeries { body: MPoly::zero(vars), prec }
    }

    pub fn constant(vars: Vars, c: Rat) -> Self {
        TruncSeries::exact(MPoly::constant(vars, c))
    }

    pub fn body(&self) -> &MPoly {
        &self.body
    }

    pub fn into_body(self) -> MPoly {
        self.body
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn vars(&self) -> &Vars {
        self.body.vars()
    }

    pub fn order(&self) -> Order {
        match self.body.order_at_origin() {
            Some(k) => Order::Value(k),
            None => Order::ZeroToPrecision(self.prec),
        }
    }

    /// Known lower bound for the order: the body's order, or the precision.
    pub fn order_bound(&self) -> u32 {
        self.body.order_at_origin().unwrap_or(self.prec)
    }

    /// Exactly zero (not merely zero to precision).
    pub fn is_zero(&self) -> bool {
        self.prec == EXACT && self.body.is_zero()
    }

    pub fn constant_term(&self) -> Rat {
        self.body.constant_term()
    }

    /// A unit germ: nonzero constant term.
    pub fn is_unit(&self) -> bool {
        self.prec > 0 && !self.body.constant_term().is_zero()
    }

    pub fn truncate(&self, n: u32) -> TruncSeries {
        TruncSeries::new(self.body.clone(), self.prec.min(n))
    }

    pub fn scale(&self, c: &Rat) -> TruncSeries {
        if c.is_zero() {
            return TruncSeries::exact(MPoly::zero(self.vars().clone()));
        }
        TruncSeries { body: self.body.scale(c), prec: self.prec }
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        TruncSeries::new(&self.body + &other.body, self.prec.min(other.prec))
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        TruncSeries::new(&self.body - &other.body, self.prec.min(other.prec))
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries { body: -&self.body, prec: self.prec }
    }

    /// Product; its precision is `min(p_a + ord_b, p_b + ord_a)`.
    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        if self.is_zero() || other.is_zero() {
            let (a, _) = self.body.aligned(&other.body);
            return TruncSeries::exact(MPoly::zero(a.vars().clone()));
        }
        let prec = sat_add(self.prec, other.order_bound()).min(sat_add(other.prec, self.order_bound()));
        TruncSeries { body: mul_trunc(&self.body, &other.body, prec), prec }
    }

    pub fn pow(&self, mut e: u32) -> TruncSeries {
        let mut acc = TruncSeries::constant(self.vars().clone(), Rat::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Inverse of a unit to the series' own precision.
    pub fn invert_unit(&self) -> Result<TruncSeries> {
        self.invert_unit_to(self.prec)
    }

    /// Inverse of a unit modulo total degree `n` (`n` may not exceed the
    /// series' precision; an exact nonconstant unit needs a finite `n`).
    pub fn invert_unit_to(&self, n: u32) -> Result<TruncSeries> {
        let c0 = self.body.constant_term();
        if c0.is_zero() || self.prec == 0 {
            return Err(Error::NonUnit);
        }
        let vars = self.vars().clone();
        let inv0 = c0.recip();
        if self.body.is_constant() && self.prec == EXACT {
            return Ok(TruncSeries::constant(vars, inv0));
        }
        let n = n.min(self.prec);
        if n == EXACT {
            return Err(Error::Invalid("inverse of a nonconstant polynomial needs a finite precision".into()));
        }
        let two = MPoly::constant(vars.clone(), Rat::from_integer(2.into()));
        let mut g = MPoly::constant(vars, inv0);
        let mut cur = 1u32;
        while cur < n {
            cur = (cur * 2).min(n);
            let sg = mul_trunc(&self.body, &g, cur);
            g = mul_trunc(&g, &(&two - &sg), cur);
        }
        Ok(TruncSeries::new(g, n))
    }

    /// Exact quotient by `d`, degree by degree through the lowest form of `d`.
    /// Returns `None` when `d` is zero to precision or a homogeneous division
    /// fails (then `d` does not divide `self`).
    pub fn div(&self, d: &TruncSeries) -> Option<TruncSeries> {
        if self.is_exact() && d.is_exact() {
            return self.body.div_exact(&d.body).map(TruncSeries::exact);
        }
        let r = d.body.order_at_origin()?;
        let prec = self.prec.saturating_sub(r).min(d.prec.saturating_sub(r));
        if d.is_unit() {
            let inv = d.invert_unit_to(prec.min(self.prec)).ok()?;
            return Some(self.mul(&inv).truncate(prec));
        }
        let (num, den) = self.body.aligned(&d.body);
        let lead = den.homogeneous_part(r);
        let mut rem = num.truncate(prec.saturating_add(r));
        let mut q = MPoly::zero(rem.vars().clone());
        for k in 0..prec {
            let part = rem.homogeneous_part(k + r);
            if part.is_zero() {
                continue;
            }
            let qk = part.div_exact(&lead)?;
            rem = &rem - &mul_trunc(&qk, &den, prec + r);
            q = &q + &qk;
        }
        Some(TruncSeries::new(q, prec))
    }

    pub fn derivative_at(&self, i: usize) -> TruncSeries {
        let prec = if self.prec == EXACT { EXACT } else { self.prec.saturating_sub(1) };
        TruncSeries::new(self.body.derivative_at(i), prec)
    }

    /// Set the variables in `idx` to zero; the precision is unchanged.
    pub fn restrict_zero(&self, idx: &[usize]) -> TruncSeries {
        TruncSeries { body: self.body.restrict_zero(idx), prec: self.prec }
    }

    /// Coefficients as a polynomial in variable `i`; the coefficient of `v^k`
    /// is known to precision `prec - k`.
    pub fn coeffs_in(&self, i: usize) -> Vec<TruncSeries> {
        self.body
            .coeffs_in(i)
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                let p = if self.prec == EXACT { EXACT } else { self.prec.saturating_sub(k as u32) };
                TruncSeries::new(c, p)
            })
            .collect()
    }

    pub fn with_vars(&self, vars: Vars) -> Result<TruncSeries> {
        Ok(TruncSeries { body: self.body.with_vars(vars)?, prec: self.prec })
    }
}
