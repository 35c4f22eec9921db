//! Rational matrices and linear changes of the geometric variables.

use num_traits::{One, Zero};

use super::{MPoly, Rat};
use crate::error::{Error, Result};

pub type RatMatrix = Vec<Vec<Rat>>;

pub fn identity_matrix(n: usize) -> RatMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect()
}

pub fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| (0..m).map(|j| a[i].iter().zip(b).fold(Rat::zero(), |acc, (x, row)| acc + x * &row[j])).collect())
        .collect()
}

/// Determinant by Gaussian elimination over the rationals.
pub fn mat_det(a: &RatMatrix) -> Rat {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let piv = m[k][k].clone();
        det *= &piv;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &piv;
            let (top, rest) = m.split_at_mut(i);
            for (dst, src) in rest[0][k..].iter_mut().zip(&top[k][k..]) {
                *dst -= &f * src;
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination.
pub fn mat_inverse(a: &RatMatrix) -> Result<RatMatrix> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity_matrix(n);
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(p, k);
        inv.swap(p, k);
        let piv = m[k][k].recip();
        for j in 0..n {
            m[k][j] *= &piv;
            inv[k][j] *= &piv;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..n {
                let (t1, t2) = (&f * &m[k][j], &f * &inv[k][j]);
                m[i][j] -= t1;
                inv[i][j] -= t2;
            }
        }
    }
    Ok(inv)
}

impl MPoly {
    /// Compose with a linear change of the variables named in `geo`: each old
    /// variable `geo[i]` is replaced by `sum_j m[i][j] * geo[j]` (the new
    /// coordinates reuse the old names). Other variables pass through.
    pub fn substitute_linear(&self, geo: &[&str], m: &RatMatrix) -> Result<MPoly> {
        let k = geo.len();
        if m.len() != k || m.iter().any(|r| r.len() != k) {
            return Err(Error::Invalid(format!("expected a {k}x{k} matrix")));
        }
        if mat_det(m).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let idx: Vec<usize> = geo.iter().map(|g| self.var_index(g)).collect::<Result<_>>()?;
        let vars = self.vars().clone();
        let forms: Vec<MPoly> = (0..k)
            .map(|i| {
                let mut l = MPoly::zero(vars.clone());
                for j in 0..k {
                    l = &l + &MPoly::var_at(vars.clone(), idx[j]).scale(&m[i][j]);
                }
                l
            })
            .collect();
        let mut powers: Vec<Vec<MPoly>> = forms.iter().map(|l| vec![MPoly::one(vars.clone()), l.clone()]).collect();
        let mut out = MPoly::zero(vars.clone());
        for (mono, c) in self.terms() {
            let mut rest: Vec<u32> = mono.exps().to_vec();
            let mut t = MPoly::one(vars.clone());
            for (i, &vi) in idx.iter().enumerate() {
                let e = mono.exp(vi) as usize;
                rest[vi] = 0;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &forms[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e];
            }
            let passthrough = MPoly::from_terms(vars.clone(), [(rest, c.clone())]);
            out = &out + &(&t * &passthrough);
        }
        Ok(out)
    }

    /// Replace variable `i` by `image` (which must use the same variables).
    pub fn substitute(&self, i: usize, image: &MPoly) -> MPoly {
        let coeffs = self.coeffs_in(i);
        let mut out = MPoly::zero(self.vars().clone());
        for c in coeffs.iter().rev() {
            out = &(&out * image) + c;
        }
        out
    }
}
