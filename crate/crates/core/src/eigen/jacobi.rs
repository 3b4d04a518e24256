//! Cyclic-by-row Jacobi for real symmetric matrices at any precision.

use super::EigenError;
use crate::matrix::{Matrix, SymMatrix};
use crate::scalars::PFloat;

/// Sweep cap; quadratic convergence makes hitting it a sign of a bad input.
pub const MAX_SWEEPS: usize = 30;

// Sweeps that skip rotations whose off-diagonal entry is small relative to the
// current off-norm.
const THRESHOLD_SWEEPS: usize = 3;

/// Eigenvalues in ascending order with unit eigenvectors as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub values: Vec<PFloat>,
    pub vectors: Matrix<PFloat>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Diagonalizes `a` until the off-diagonal Frobenius norm is at most
/// `tol · ‖a‖_F`, then runs one more sweep to push the remaining
/// off-diagonal mass down to rounding level.
///
/// Eigenvector columns are sign-fixed so their largest-magnitude entry is
/// positive (lowest index on ties).
pub fn jacobi_eigensym(a: &SymMatrix<PFloat>, tol: &PFloat) -> Result<Spectrum, EigenError> {
    let n = a.dim();
    let p = a.precision().max(tol.precision());
    let mut w = a.map(|x| x.with_precision(p)).to_dense();
    let mut v = Matrix::identity(n, &PFloat::zero(p));

    let entries: Vec<&PFloat> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|ij| &w[ij]).collect();
    let norm = PFloat::dot(entries.iter().copied().zip(entries.iter().copied()), p)
        .sqrt()
        .expect("sum of squares is non-negative");
    let target = tol * &norm;

    let mut converged_at = None;
    for sweep in 0..=MAX_SWEEPS {
        let off = off_norm(&w, p);
        if converged_at.is_none() && off <= target {
            converged_at = Some(sweep);
        }
        if off.is_zero() || converged_at.is_some_and(|s| sweep > s) {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(EigenError::NoConvergence {
                iterations: MAX_SWEEPS,
            });
        }
        let threshold = if sweep < THRESHOLD_SWEEPS {
            // 0.2 · off / n²
            &off * &PFloat::from_f64(0.2 / (n * n) as f64, p)
        } else {
            PFloat::zero(p)
        };
        for row in 0..n {
            for col in row + 1..n {
                rotate(&mut w, &mut v, row, col, &threshold, p);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].cmp(&w[(j, j)]));
    let values = order.iter().map(|&k| w[(k, k)].clone()).collect();
    let mut vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])].clone());
    for j in 0..n {
        let mut column = vectors.column(j);
        fix_sign(&mut column);
        vectors.set_column(j, &column);
    }
    Ok(Spectrum { values, vectors })
}

fn off_norm(w: &Matrix<PFloat>, p: u32) -> PFloat {
    let n = w.rows();
    let off: Vec<&PFloat> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|ij| &w[ij])
        .collect();
    PFloat::dot(off.iter().copied().zip(off.iter().copied()), p)
        .sqrt()
        .expect("sum of squares is non-negative")
}

fn rotate(
    w: &mut Matrix<PFloat>,
    v: &mut Matrix<PFloat>,
    p: usize,
    q: usize,
    threshold: &PFloat,
    prec: u32,
) {
    let apq = w[(p, q)].clone();
    if apq.is_zero() || apq.abs() < *threshold {
        return;
    }
    let one = PFloat::one(prec);
    let app = w[(p, p)].clone();
    let aqq = w[(q, q)].clone();

    // entry already negligible against both diagonal elements
    let scaled = apq.abs().mul_pow2(prec as i64 + 2);
    if scaled <= app.abs() && scaled <= aqq.abs() {
        w[(p, q)] = PFloat::zero(prec);
        w[(q, p)] = PFloat::zero(prec);
        return;
    }

    let theta = (&aqq - &app) / apq.mul_pow2(1);
    let root = (&theta * &theta + &one).sqrt().expect("positive");
    let t = {
        let denom = &theta.abs() + &root;
        let t = &one / &denom;
        if theta.is_negative() {
            -t
        } else {
            t
        }
    };
    let c = &one / (&t * &t + &one).sqrt().expect("positive");
    let s = &t * &c;
    let tau = &s / (&one + &c);
    let shift = &t * &apq;

    w[(p, p)] = &app - &shift;
    w[(q, q)] = &aqq + &shift;
    w[(p, q)] = PFloat::zero(prec);
    w[(q, p)] = PFloat::zero(prec);
    let n = w.rows();
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let g = w[(r, p)].clone();
        let h = w[(r, q)].clone();
        let new_rp = &g - &s * (&h + &g * &tau);
        let new_rq = &h + &s * (&g - &h * &tau);
        w[(p, r)] = new_rp.clone();
        w[(r, p)] = new_rp;
        w[(q, r)] = new_rq.clone();
        w[(r, q)] = new_rq;
    }
    for r in 0..n {
        let g = v[(r, p)].clone();
        let h = v[(r, q)].clone();
        v[(r, p)] = &g - &s * (&h + &g * &tau);
        v[(r, q)] = &h + &s * (&g - &h * &tau);
    }
}

/// Flips `column` so its largest-magnitude entry (first on ties) is positive.
pub(crate) fn fix_sign(column: &mut [PFloat]) {
    let mut best = 0;
    for (i, x) in column.iter().enumerate() {
        if x.abs() > column[best].abs() {
            best = i;
        }
    }
    if column[best].is_negative() {
        for x in column.iter_mut() {
            *x = -x.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::tol;
    use crate::scalars::{int, ratio, Rational};
    use rand::{Rng, SeedableRng};

    fn float_sym(n: usize, p: u32, f: impl Fn(usize, usize) -> Rational) -> SymMatrix<PFloat> {
        SymMatrix::from_upper_fn(n, |i, j| PFloat::from_rational(&f(i, j), p)).unwrap()
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let a = float_sym(3, 53, |i, j| if i == j { int([3, 1, 2][i]) } else { int(0) });
        let spec = jacobi_eigensym(&a, &tol(53)).unwrap();
        let values: Vec<f64> = spec.values.iter().map(PFloat::to_f64).collect();
        assert_eq!(values, vec![1.0, 2.0, 3.0]);
        let perm = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        for (i, row) in perm.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(spec.vectors[(i, j)].to_f64(), x);
            }
        }
    }

    #[test]
    fn overlap_two_by_two_closed_form() {
        // S = (1/60)[[2,1],[1,4/7]] has eigenvalues (9 ± √74)/420
        let p = 256;
        let s = float_sym(2, p, |i, j| [[ratio(1, 30), ratio(1, 60)], [ratio(1, 60), ratio(1, 105)]][i][j].clone());
        let spec = jacobi_eigensym(&s, &tol(p)).unwrap();
        let r74 = PFloat::from_i64(74, p).sqrt().unwrap();
        let nine = PFloat::from_i64(9, p);
        let d = PFloat::from_i64(420, p);
        let expected = [(&nine - &r74) / &d, (&nine + &r74) / &d];
        for (got, want) in spec.values.iter().zip(&expected) {
            let rel = ((got - want) / want).abs();
            assert!(rel < PFloat::one(p).mul_pow2(-200), "{got} vs {want}");
        }
    }

    #[test]
    fn hamiltonian_two_by_two_closed_form() {
        // trace 14/60 and determinant 3/(5·3600) give (7 ± √34)/60
        let p = 128;
        let h = float_sym(2, p, |i, j| [[ratio(1, 6), ratio(1, 12)], [ratio(1, 12), ratio(1, 15)]][i][j].clone());
        let spec = jacobi_eigensym(&h, &tol(p)).unwrap();
        let r34 = PFloat::from_i64(34, p).sqrt().unwrap();
        let seven = PFloat::from_i64(7, p);
        let sixty = PFloat::from_i64(60, p);
        let expected = [(&seven - &r34) / &sixty, (&seven + &r34) / &sixty];
        for (got, want) in spec.values.iter().zip(&expected) {
            assert!(((got - want) / want).abs() < PFloat::one(p).mul_pow2(-100));
        }
    }

    #[test]
    fn random_matrices_are_diagonalized() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for &(n, p) in &[(1usize, 53u32), (4, 53), (7, 128), (12, 256)] {
            let entries: Vec<Rational> = (0..n * n).map(|_| ratio(rng.gen_range(-50..=50), rng.gen_range(1..=9))).collect();
            let a = float_sym(n, p, |i, j| entries[i * n + j].clone());
            let spec = jacobi_eigensym(&a, &tol(p)).unwrap();
            let v = &spec.vectors;
            // AV = VΛ and VᵀV = I
            let av = a.to_dense().matmul(v).unwrap();
            let vl = v.matmul(&Matrix::diagonal(&spec.values)).unwrap();
            let scale = a.max_abs().mul_pow2(4);
            let bound = &scale * &PFloat::one(p).mul_pow2(-(p as i64) / 2);
            assert!(av.max_abs_diff(&vl).unwrap() <= bound);
            let vtv = v.transpose().matmul(v).unwrap();
            let id = Matrix::identity(n, &PFloat::zero(p));
            assert!(vtv.max_abs_diff(&id).unwrap() <= PFloat::one(p).mul_pow2(-(p as i64) / 2));
            assert!(spec.values.windows(2).all(|w| w[0] <= w[1]));
            for j in 0..n {
                let col = v.column(j);
                let largest = col.iter().max_by(|a, b| a.abs().cmp(&b.abs())).unwrap();
                assert!(!largest.is_negative() || col.iter().any(|x| x.abs() == largest.abs() && x.is_positive()));
            }
        }
    }

    #[test]
    fn zero_matrix() {
        let z = float_sym(3, 64, |_, _| int(0));
        let spec = jacobi_eigensym(&z, &tol(64)).unwrap();
        assert!(spec.values.iter().all(PFloat::is_zero));
    }
}
