//! Determinants over polynomial and truncated-series entries.
//!
//! Exact entries go through fraction-free Bareiss elimination. Truncated
//! entries are first reduced by elimination on unit pivots (entries with a
//! nonzero constant term); the block left over, whose entries all vanish at
//! the origin, is finished with the division-free Berkowitz recurrence.

use num_traits::One;

use crate::par::Exec;
use crate::poly::{MPoly, Rat, TruncSeries, EXACT};

pub type PolyMatrix = Vec<Vec<MPoly>>;
pub type SeriesMatrix = Vec<Vec<TruncSeries>>;

/// Fraction-free determinant of a square matrix of exact polynomials.
pub fn det_bareiss(mut m: PolyMatrix, exec: Exec) -> MPoly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let vars = m[0][0].vars().clone();
    let mut negate = false;
    let mut prev = MPoly::one(vars.clone());
    for k in 0..n.saturating_sub(1) {
        let piv = (k..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].nterms());
        let Some(p) = piv else {
            return MPoly::zero(vars);
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let pivot_row = m[k].clone();
        let prev_ref = &prev;
        let rows: Vec<Vec<MPoly>> = m.drain(k + 1..).collect();
        let updated = exec.map(rows, |mut row| {
            let a = row[k].clone();
            for j in k + 1..n {
                let t = if a.is_zero() {
                    &pivot_row[k] * &row[j]
                } else {
                    &(&pivot_row[k] * &row[j]) - &(&a * &pivot_row[j])
                };
                row[j] = if prev_ref.is_constant() {
                    t.scale(&prev_ref.constant_term().recip())
                } else {
                    t.div_exact(prev_ref).expect("Bareiss division is exact")
                };
            }
            row[k] = MPoly::zero(a.vars().clone());
            row
        });
        m.extend(updated);
        prev = pivot_row[k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Division-free determinant (Berkowitz) over truncated series.
pub fn det_berkowitz(a: &SeriesMatrix) -> TruncSeries {
    let n = a.len();
    let vars = a[0][0].vars().clone();
    let zero = || TruncSeries::exact(MPoly::zero(vars.clone()));
    let one = || TruncSeries::constant(vars.clone(), Rat::one());
    // coefficients of det(lambda*I - A_r), highest degree first
    let mut vect: Vec<TruncSeries> = vec![one(), a[0][0].neg()];
    for r in 1..n {
        let row: Vec<&TruncSeries> = (0..r).map(|j| &a[r][j]).collect();
        let mut s: Vec<TruncSeries> = (0..r).map(|i| a[i][r].clone()).collect();
        let mut col = vec![one(), a[r][r].neg()];
        for k in 0..r {
            let rs = row.iter().zip(&s).fold(zero(), |acc, (x, y)| acc.add(&x.mul(y)));
            col.push(rs.neg());
            if k + 1 < r {
                s = (0..r).map(|i| (0..r).fold(zero(), |acc, j| acc.add(&a[i][j].mul(&s[j])))).collect();
            }
        }
        let next: Vec<TruncSeries> = (0..r + 2)
            .map(|i| {
                let mut acc = zero();
                for j in 0..=i.min(r) {
                    if i - j < col.len() {
                        acc = acc.add(&col[i - j].mul(&vect[j]));
                    }
                }
                acc
            })
            .collect();
        vect = next;
    }
    let c = vect.pop().expect("nonempty");
    if n % 2 == 1 {
        c.neg()
    } else {
        c
    }
}

/// Determinant of a matrix of truncated series; exact when all entries are.
pub fn det_series(m: SeriesMatrix, exec: Exec) -> TruncSeries {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "matrix must be square and nonempty");
    if m.iter().flatten().all(TruncSeries::is_exact) {
        let pm: PolyMatrix = m.into_iter().map(|r| r.into_iter().map(TruncSeries::into_body).collect()).collect();
        return TruncSeries::exact(det_bareiss(pm, exec));
    }
    let vars = m[0][0].vars().clone();
    let inv_prec = m.iter().flatten().map(TruncSeries::precision).filter(|&p| p != EXACT).max().unwrap_or(EXACT);
    let mut m = m;
    let mut acc = TruncSeries::constant(vars.clone(), Rat::one());
    let mut negate = false;
    loop {
        let size = m.len();
        if size == 0 {
            break;
        }
        let unit = (0..size)
            .flat_map(|i| (0..size).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j].is_unit())
            .min_by_key(|&(i, j)| (m[i][j].body().nterms(), i, j));
        let Some((pi, pj)) = unit else {
            break;
        };
        if pi != 0 {
            m.swap(pi, 0);
            negate = !negate;
        }
        if pj != 0 {
            for row in m.iter_mut() {
                row.swap(pj, 0);
            }
            negate = !negate;
        }
        let piv = m[0][0].clone();
        let inv = piv.invert_unit_to(inv_prec).expect("pivot is a unit");
        acc = acc.mul(&piv);
        let top: Vec<TruncSeries> = m[0][1..].iter().map(|e| e.mul(&inv)).collect();
        let rest: Vec<Vec<TruncSeries>> = m.drain(1..).collect();
        let top_ref = &top;
        m = exec.map(rest, |row| {
            let f = row[0].clone();
            row[1..].iter().zip(top_ref).map(|(e, t)| if f.is_zero() { e.clone() } else { e.sub(&f.mul(t)) }).collect()
        });
    }
    if !m.is_empty() {
        acc = acc.mul(&det_berkowitz(&m));
    }
    if negate {
        acc.neg()
    } else {
        acc
    }
}

/// Determinant of a rational matrix through the polynomial kernel.
pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    crate::poly::mat_det(&m.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testing::poly;
    use crate::poly::{rat, vars_of};

    fn c(v: i64) -> MPoly {
        MPoly::constant(vars_of(&["x", "y"]), rat(v))
    }

    #[test]
    fn bareiss_matches_rational_det() {
        let rows = [[2, -1, 0, 3], [1, 0, 4, 1], [0, 5, 1, -2], [3, 3, 0, 1]];
        let pm: PolyMatrix = rows.iter().map(|r| r.iter().map(|&v| c(v)).collect()).collect();
        let rm: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        let d = det_bareiss(pm.clone(), Exec::Sequential);
        assert_eq!(d.constant_term(), det_rat(&rm));
        assert_eq!(det_bareiss(pm, Exec::Parallel), d);
    }

    #[test]
    fn sylvester_resultant_by_hand() {
        // Res_z(z^2 - x, 2z): rows (1, 0, -x), (2, 0, 0), (0, 2, 0)
        let x = poly(&["x", "y"], &[(&[1, 0], 1)]);
        let m = vec![vec![c(1), c(0), -x.clone()], vec![c(2), c(0), c(0)], vec![c(0), c(2), c(0)]];
        assert_eq!(det_bareiss(m, Exec::Sequential), x.scale(&rat(-4)));
    }

    #[test]
    fn series_route_agrees_with_exact() {
        let x = poly(&["x", "y"], &[(&[1, 0], 1)]);
        let y = poly(&["x", "y"], &[(&[0, 1], 1)]);
        let one_x = &c(1) + &x;
        let entries = vec![
            vec![one_x.clone(), y.clone(), &x * &y],
            vec![x.clone(), &y * &y, c(3)],
            vec![c(2), &x + &y, x.clone()],
        ];
        let exact = det_bareiss(entries.clone(), Exec::Sequential);
        let sm: SeriesMatrix =
            entries.into_iter().map(|r| r.into_iter().map(|e| TruncSeries::new(e, 9)).collect()).collect();
        let d = det_series(sm.clone(), Exec::Sequential);
        assert!(d.precision() >= 6);
        assert_eq!(d.body(), &exact.truncate(d.precision()));
        let b = det_berkowitz(&sm);
        assert_eq!(b.body(), &exact.truncate(b.precision()));
    }
}
