//! Dense square matrices over the rational-function field.
//!
//! Small matrices use cofactor expansion, which keeps polynomial entries polynomial until
//! the single final division. Larger determinants go through Bareiss elimination and larger
//! inverses through Gauss-Jordan elimination.

use crate::expr::{gcd, Polynomial, RationalExpr, Vars};

const COFACTOR_LIMIT: usize = 4;

fn minor(m: &[Vec<RationalExpr>], row: usize, col: usize) -> Vec<Vec<RationalExpr>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

fn laplace(m: &[Vec<RationalExpr>], vars: &Vars) -> RationalExpr {
    match m.len() {
        0 => RationalExpr::one(vars.clone()),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        n => {
            let mut acc = RationalExpr::zero(vars.clone());
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let term = &m[0][j] * laplace(&minor(m, 0, j), vars);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Row-reduces `m` alongside `aug`; returns the determinant of `m` (zero if singular).
fn eliminate(
    m: &mut [Vec<RationalExpr>],
    aug: &mut [Vec<RationalExpr>],
    vars: &Vars,
) -> RationalExpr {
    let n = m.len();
    let mut det = RationalExpr::one(vars.clone());
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return RationalExpr::zero(vars.clone());
        };
        if p != col {
            m.swap(p, col);
            aug.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * &pivot;
        let inv = pivot.recip().expect("nonzero pivot");
        for e in m[col].iter_mut() {
            *e = &*e * &inv;
        }
        for e in aug[col].iter_mut() {
            *e = &*e * &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..n {
                m[r][c] = &m[r][c] - &f * &m[col][c];
            }
            for c in 0..aug[r].len() {
                aug[r][c] = &aug[r][c] - &f * &aug[col][c];
            }
        }
    }
    det
}

/// Fraction-free (Bareiss) determinant of a polynomial matrix.
fn bareiss(mut m: Vec<Vec<Polynomial>>, vars: &Vars) -> Polynomial {
    let n = m.len();
    let mut sign = false;
    let mut prev = Polynomial::one(vars.clone());
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Polynomial::zero(vars.clone());
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    if sign {
        prev.neg()
    } else {
        prev
    }
}

pub fn determinant(m: &[Vec<RationalExpr>], vars: &Vars) -> RationalExpr {
    if m.len() <= COFACTOR_LIMIT {
        return laplace(m, vars);
    }
    // scale each row to polynomial entries, then divide the scale back out
    let mut scale = Polynomial::one(vars.clone());
    let rows = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(Polynomial::one(vars.clone()), |acc, e| {
                let d = e.denominator();
                let g = gcd(&acc, d);
                acc.mul(&d.exact_div(&g).expect("gcd divides"))
            });
            scale = scale.mul(&l);
            row.iter()
                .map(|e| {
                    let f = l.exact_div(e.denominator()).expect("lcm is a multiple");
                    e.numerator().mul(&f)
                })
                .collect()
        })
        .collect();
    RationalExpr::from_parts(bareiss(rows, vars), scale).expect("nonzero scale")
}

/// Exact inverse, or `None` when the determinant is the zero expression.
pub fn inverse(m: &[Vec<RationalExpr>], vars: &Vars) -> Option<Vec<Vec<RationalExpr>>> {
    let n = m.len();
    if n <= COFACTOR_LIMIT {
        let det = laplace(m, vars);
        if det.is_zero() {
            return None;
        }
        let inv_det = det.recip().ok()?;
        let mut out = vec![vec![RationalExpr::zero(vars.clone()); n]; n];
        for (i, row) in m.iter().enumerate() {
            for j in 0..row.len() {
                let cof = laplace(&minor(m, i, j), vars);
                let cof = if (i + j) % 2 == 0 { cof } else { -cof };
                out[j][i] = cof * &inv_det;
            }
        }
        return Some(out);
    }
    let mut work = m.to_vec();
    let mut aug: Vec<Vec<RationalExpr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        RationalExpr::one(vars.clone())
                    } else {
                        RationalExpr::zero(vars.clone())
                    }
                })
                .collect()
        })
        .collect();
    let det = eliminate(&mut work, &mut aug, vars);
    (!det.is_zero()).then_some(aug)
}
