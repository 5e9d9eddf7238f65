//! Small exact linear algebra over the rationals, for changes of basis
//! into simple-root coordinates.

use num::{BigInt, BigRational, One, Zero};

/// Invert a square matrix by Gauss-Jordan elimination. Returns None when
/// singular.
pub(crate) fn invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= p.clone();
            inv[col][j] /= p.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let av = a[col][j].clone();
                    let iv = inv[col][j].clone();
                    a[r][j] -= f.clone() * av;
                    inv[r][j] -= f.clone() * iv;
                }
            }
        }
    }
    Some(inv)
}

/// Solve `A x = b` exactly for a full-column-rank A (n rows, k columns).
/// Returns None when the system is inconsistent.
pub(crate) fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(r) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, r);
        let p = m[pivot_row][col].clone();
        for j in col..=cols {
            m[pivot_row][j] /= p.clone();
        }
        for r2 in 0..rows {
            if r2 != pivot_row && !m[r2][col].is_zero() {
                let f = m[r2][col].clone();
                for j in col..=cols {
                    let v = m[pivot_row][j].clone();
                    m[r2][j] -= f.clone() * v;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    // inconsistent rows
    for r in pivot_row..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i][cols].clone();
    }
    Some(x)
}

pub(crate) fn rational(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}
