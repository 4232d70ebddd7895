//! Dense exact linear algebra for the tiny symmetric systems the engine solves.

use num_traits::{One, Zero};

use super::Rational;

/// Row-major square or rectangular matrix of rationals.
pub type QMatrix = Vec<Vec<Rational>>;

/// Solves `a x = b` by Gauss-Jordan elimination. `None` when `a` is singular.
pub fn solve(a: &QMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut().skip(col) {
            *x *= &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn determinant(a: &QMatrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Determinants of the top-left `i x i` blocks, `i = 1..=n`.
///
/// Computed by elimination without row exchanges; once a pivot vanishes the
/// remaining minors are evaluated directly.
pub fn leading_principal_minors(a: &QMatrix) -> Vec<Rational> {
    let n = a.len();
    let mut m = a.clone();
    let mut minors = Vec::with_capacity(n);
    let mut acc = Rational::one();
    for col in 0..n {
        if m[col][col].is_zero() {
            minors.extend((col + 1..=n).map(|k| determinant(&block(a, k))));
            return minors;
        }
        acc *= &m[col][col];
        minors.push(acc.clone());
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    minors
}

fn block(a: &QMatrix, k: usize) -> QMatrix {
    a.iter().take(k).map(|r| r[..k].to_vec()).collect()
}

/// Coefficients `[c_0, c_1, ..., c_n]` of `det(x I - a)` (so `c_n = 1`),
/// by the Faddeev-LeVerrier recursion.
pub fn charpoly(a: &QMatrix) -> Vec<Rational> {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m: QMatrix = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = matmul(a, &m);
        let trace: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -trace / Rational::from_integer((k as i64).into());
    }
    coeffs
}

fn matmul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rational::zero(); p]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += aik * &b[k][j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;

    fn m(rows: &[&[i64]]) -> QMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect()
    }

    #[test]
    fn solve_small_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[q(3), q(5)]).unwrap();
        assert_eq!(
            x,
            vec![crate::exactnum::qf(4, 5), crate::exactnum::qf(7, 5)]
        );
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[q(1), q(2)]).is_none());
    }

    #[test]
    fn charpoly_of_dp7_gram() {
        // det(xI - G) for G = [[0,1,0],[1,0,0],[0,0,-1]] is (x^2 - 1)(x + 1)
        let g = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]);
        assert_eq!(charpoly(&g), vec![q(-1), q(-1), q(1), q(1)]);
        assert_eq!(determinant(&g), q(1));
    }

    #[test]
    fn minors_with_zero_pivot() {
        let g = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(leading_principal_minors(&g), vec![q(0), q(-1)]);
        let nd = m(&[&[-2, 1], &[1, -2]]);
        assert_eq!(leading_principal_minors(&nd), vec![q(-2), q(3)]);
    }
}
