//! Eigenpairs of the non-symmetric matrix `A = S⁻¹H`.
//!
//! `A` is self-adjoint in the S-inner product, so eigenvectors found so far
//! can be deflated by S-orthogonal projection. Each new pair comes from a few
//! power steps followed by Rayleigh-quotient-shifted inverse iteration
//! `x ← (A − σI)⁻¹x`, solved by partial-pivot elimination on `A − σI`.

use super::{tol, EigenError};
use crate::matrix::{LdltFactors, Matrix, SymMatrix};
use crate::scalars::{PFloat, Rational};

const POWER_STEPS: usize = 3;
const MAX_INVERSE_STEPS: usize = 60;

pub(super) fn solve(
    h: &SymMatrix<Rational>,
    s: &SymMatrix<Rational>,
    factors: &LdltFactors,
    p: u32,
) -> Result<(Vec<PFloat>, Matrix<PFloat>), EigenError> {
    let n = h.dim();
    let a = s_inverse_times(h, factors)?.to_float(p);
    let s_f = s.to_float(p).to_dense();
    let h_f = h.to_float(p).to_dense();
    let target = &tol(p) * &a.max_abs();

    let mut pairs: Vec<(PFloat, Vec<PFloat>)> = Vec::with_capacity(n);
    for k in 0..n {
        let found: Vec<&Vec<PFloat>> = pairs.iter().map(|(_, v)| v).collect();
        let mut x = start_vector(n, k, &found, &s_f, p)?;
        for _ in 0..POWER_STEPS {
            let y = a.matvec(&x)?;
            match deflate_normalize(y, &found, &s_f, p)? {
                Some(y) => x = y,
                None => break,
            }
        }

        let mut converged = false;
        let mut sigma = rayleigh(&h_f, &s_f, &x, p)?;
        for _ in 0..MAX_INVERSE_STEPS {
            sigma = rayleigh(&h_f, &s_f, &x, p)?;
            let residual = residual_norm(&a, &x, &sigma)?;
            if residual <= target {
                if converged {
                    break;
                }
                converged = true;
            }
            let shifted = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    &a[(i, j)] - &sigma
                } else {
                    a[(i, j)].clone()
                }
            });
            // exactly singular: x is already an eigenvector
            let Some(y) = solve_linear(shifted, x.clone()) else {
                converged = true;
                break;
            };
            match deflate_normalize(y, &found, &s_f, p)? {
                Some(y) => x = y,
                None => break,
            }
        }
        if !converged {
            return Err(EigenError::NoConvergence {
                iterations: MAX_INVERSE_STEPS,
            });
        }
        pairs.push((sigma, x));
    }

    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let values = pairs.iter().map(|(w, _)| w.clone()).collect();
    let c = Matrix::from_fn(n, n, |i, j| pairs[j].1[i].clone());
    Ok((values, c))
}

/// Exact `S⁻¹H = L⁻ᵀ·D⁻¹·L⁻¹·H`.
fn s_inverse_times(h: &SymMatrix<Rational>, factors: &LdltFactors) -> Result<Matrix<Rational>, EigenError> {
    let l_inv = factors.lower_inverse();
    let mut y = l_inv.matmul(&h.to_dense())?;
    for i in 0..y.rows() {
        for j in 0..y.cols() {
            y[(i, j)] = &y[(i, j)] / &factors.diag[i];
        }
    }
    Ok(l_inv.transpose().matmul(&y)?)
}

fn start_vector(
    n: usize,
    k: usize,
    found: &[&Vec<PFloat>],
    s: &Matrix<PFloat>,
    p: u32,
) -> Result<Vec<PFloat>, EigenError> {
    let generic: Vec<PFloat> = (0..n)
        .map(|i| {
            let base = PFloat::one(p) / PFloat::from_i64(i as i64 + 1, p);
            if i == k {
                &base + &PFloat::one(p)
            } else {
                base
            }
        })
        .collect();
    let units = (0..n).map(|j| (0..n).map(|i| PFloat::from_i64((i == j) as i64, p)).collect());
    for candidate in std::iter::once(generic).chain(units) {
        if let Some(x) = deflate_normalize(candidate, found, s, p)? {
            return Ok(x);
        }
    }
    Err(EigenError::NoConvergence { iterations: 0 })
}

/// Removes S-projections onto `found` and scales to unit S-norm. `None` when
/// nothing resolvable is left.
fn deflate_normalize(
    mut x: Vec<PFloat>,
    found: &[&Vec<PFloat>],
    s: &Matrix<PFloat>,
    p: u32,
) -> Result<Option<Vec<PFloat>>, EigenError> {
    let before = s_norm_sq(s, &x, p)?;
    for _ in 0..2 {
        for c in found {
            let sx = s.matvec(&x)?;
            let proj = PFloat::dot(c.iter().zip(&sx), p);
            x = x.iter().zip(c.iter()).map(|(xi, ci)| xi - &(&proj * ci)).collect();
        }
    }
    let after = s_norm_sq(s, &x, p)?;
    // lost all but a rounding-level remnant of the original vector
    if !after.is_positive() || after <= before.mul_pow2(-(p as i64) / 2) {
        return Ok(None);
    }
    let norm = after.sqrt().expect("positive");
    Ok(Some(x.iter().map(|xi| xi / &norm).collect()))
}

fn s_norm_sq(s: &Matrix<PFloat>, x: &[PFloat], p: u32) -> Result<PFloat, EigenError> {
    let sx = s.matvec(x)?;
    Ok(PFloat::dot(x.iter().zip(&sx), p))
}

fn rayleigh(h: &Matrix<PFloat>, s: &Matrix<PFloat>, x: &[PFloat], p: u32) -> Result<PFloat, EigenError> {
    let hx = h.matvec(x)?;
    let num = PFloat::dot(x.iter().zip(&hx), p);
    Ok(num / s_norm_sq(s, x, p)?)
}

fn residual_norm(a: &Matrix<PFloat>, x: &[PFloat], sigma: &PFloat) -> Result<PFloat, EigenError> {
    let ax = a.matvec(x)?;
    let r = ax.iter().zip(x).map(|(u, v)| u - &(sigma * v)).collect::<Vec<_>>();
    let max = |v: &[PFloat]| v.iter().map(PFloat::abs).max().expect("non-empty");
    Ok(max(&r) / max(x))
}

/// Gaussian elimination with partial pivoting; `None` if a pivot is exactly zero.
fn solve_linear(mut m: Matrix<PFloat>, mut b: Vec<PFloat>) -> Option<Vec<PFloat>> {
    let n = m.rows();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| m[(i, col)].abs().cmp(&m[(j, col)].abs()))?;
        if m[(pivot_row, col)].is_zero() {
            return None;
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = m[(col, j)].clone();
                m[(col, j)] = m[(pivot_row, j)].clone();
                m[(pivot_row, j)] = tmp;
            }
            b.swap(col, pivot_row);
        }
        for r in col + 1..n {
            let factor = &m[(r, col)] / &m[(col, col)];
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let delta = &factor * &m[(col, j)];
                m[(r, j)] = &m[(r, j)] - &delta;
            }
            b[r] = &b[r] - &(&factor * &b[col]);
        }
    }
    let mut x = vec![PFloat::zero(b[0].precision()); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for j in i + 1..n {
            acc = &acc - &(&m[(i, j)] * &x[j]);
        }
        x[i] = &acc / &m[(i, i)];
    }
    Some(x)
}
