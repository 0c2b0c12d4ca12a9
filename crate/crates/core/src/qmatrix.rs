//! Small exact rational matrix helpers (dense, desk scale).

use num::{One, Zero};

use crate::Q;

pub(crate) type QMat = Vec<Vec<Q>>;

pub(crate) fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub(crate) fn mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let m = if n == 0 { 0 } else { b[0].len() };
    let k = b.len();
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += a[i][l].clone() * &b[l][j];
                }
            }
        }
    }
    out
}

/// Gauss-Jordan inverse; `None` when singular.
pub(crate) fn invert(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let mj = m[col][j].clone() * &f;
                m[r][j] -= mj;
                let ij = inv[col][j].clone() * &f;
                inv[r][j] -= ij;
            }
        }
    }
    Some(inv)
}

/// Solve `A x = b` for square invertible `A` by elimination.
pub(crate) fn solve(a: &QMat, b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..n {
            m[col][j] /= &p;
        }
        rhs[col] /= &p;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in col..n {
                let mj = m[col][j].clone() * &f;
                m[r][j] -= mj;
            }
            let bj = rhs[col].clone() * &f;
            rhs[r] -= bj;
        }
    }
    Some(rhs)
}
