//! Spectral square roots of symmetric positive definite matrices.

use super::{jacobi_eigensym, tol, EigenError, Spectrum};
use crate::matrix::{Matrix, SymMatrix};
use crate::scalars::PFloat;

/// `A^(1/2) = V·Λ^(1/2)·Vᵀ`.
pub fn matrix_sqrt(a: &SymMatrix<PFloat>) -> Result<SymMatrix<PFloat>, EigenError> {
    spectral_function(a, |x| x.sqrt().expect("positive eigenvalue"))
}

/// `A^(-1/2) = V·Λ^(-1/2)·Vᵀ`.
pub fn matrix_inv_sqrt(a: &SymMatrix<PFloat>) -> Result<SymMatrix<PFloat>, EigenError> {
    spectral_function(a, |x| {
        let root = x.sqrt().expect("positive eigenvalue");
        &PFloat::one(x.precision()) / &root
    })
}

fn spectral_function(
    a: &SymMatrix<PFloat>,
    f: impl Fn(&PFloat) -> PFloat,
) -> Result<SymMatrix<PFloat>, EigenError> {
    let p = a.precision();
    let spectrum = jacobi_eigensym(a, &tol(p))?;
    check_positive(&spectrum, p)?;
    let n = spectrum.dim();
    let mapped: Vec<PFloat> = spectrum.values.iter().map(f).collect();
    let v = &spectrum.vectors;
    let scaled = Matrix::from_fn(n, n, |i, j| &v[(i, j)] * &mapped[j]);
    let full = scaled.matmul(&v.transpose())?;
    Ok(SymMatrix::from_upper_of(&full)?)
}

/// Rejects spectra whose smallest eigenvalue is not resolvable from zero at
/// this precision: `λ_min <= n · 2^(1-p) · λ_max`.
fn check_positive(spectrum: &Spectrum, p: u32) -> Result<(), EigenError> {
    let smallest = &spectrum.values[0];
    let largest = spectrum.values.last().expect("non-empty spectrum");
    let floor = largest
        .abs()
        .mul_pow2(1 - p as i64)
        * PFloat::from_i64(spectrum.dim() as i64, p);
    if !smallest.is_positive() || *smallest <= floor {
        return Err(EigenError::NotPositiveDefinite);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, ratio, Rational};

    fn float_sym(n: usize, p: u32, f: impl Fn(usize, usize) -> Rational) -> SymMatrix<PFloat> {
        SymMatrix::from_upper_fn(n, |i, j| PFloat::from_rational(&f(i, j), p)).unwrap()
    }

    fn assert_close(a: &SymMatrix<PFloat>, b: &SymMatrix<PFloat>, log2_tol: i64) {
        let diff = a.to_dense().max_abs_diff(&b.to_dense()).unwrap();
        assert!(diff <= PFloat::one(53).mul_pow2(log2_tol), "diff {diff}");
    }

    #[test]
    fn identity_and_diagonal() {
        let id = float_sym(3, 64, |i, j| int((i == j) as i64));
        assert_close(&matrix_sqrt(&id).unwrap(), &id, -60);
        assert_close(&matrix_inv_sqrt(&id).unwrap(), &id, -60);
        let d = float_sym(2, 64, |i, j| if i == j { int([4, 25][i]) } else { int(0) });
        let want = float_sym(2, 64, |i, j| if i == j { int([2, 5][i]) } else { int(0) });
        assert_close(&matrix_sqrt(&d).unwrap(), &want, -58);
    }

    #[test]
    fn two_by_two_overlap_root() {
        // closed form: sqrt(M) = (M + sqrt(det M)·I) / sqrt(tr M + 2·sqrt(det M))
        let p = 200;
        let m = [[ratio(1, 30), ratio(1, 60)], [ratio(1, 60), ratio(1, 105)]];
        let s = float_sym(2, p, |i, j| m[i][j].clone());
        let root_det = PFloat::from_rational(&ratio(1, 25200), p).sqrt().unwrap();
        let trace = PFloat::from_rational(&ratio(3, 70), p);
        let denom = (&trace + &root_det.mul_pow2(1)).sqrt().unwrap();
        let want = SymMatrix::from_upper_fn(2, |i, j| {
            let mut x = PFloat::from_rational(&m[i][j], p);
            if i == j {
                x = &x + &root_det;
            }
            &x / &denom
        })
        .unwrap();
        let got = matrix_sqrt(&s).unwrap();
        assert_close(&got, &want, -190);
        let printed = [[0.168299, 0.070774], [0.070774, 0.067193]];
        for (i, row) in printed.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert!((got.get(i, j).to_f64() - x).abs() < 1e-6);
            }
        }
        // S^(1/2) · S^(1/2) = S and S^(-1/2) · S^(1/2) = I
        let sq = got.to_dense().matmul(&got.to_dense()).unwrap();
        assert!(sq.max_abs_diff(&s.to_dense()).unwrap() <= PFloat::one(p).mul_pow2(-190));
        let inv = matrix_inv_sqrt(&s).unwrap().to_dense();
        let id = Matrix::identity(2, &PFloat::zero(p));
        assert!(inv.matmul(&got.to_dense()).unwrap().max_abs_diff(&id).unwrap() <= PFloat::one(p).mul_pow2(-180));
    }

    #[test]
    fn rejects_indefinite_and_singular() {
        let indefinite = float_sym(2, 64, |i, j| if i == j { int(1) } else { int(2) });
        assert_eq!(matrix_sqrt(&indefinite), Err(EigenError::NotPositiveDefinite));
        let singular = float_sym(2, 64, |_, _| int(1));
        assert_eq!(matrix_inv_sqrt(&singular), Err(EigenError::NotPositiveDefinite));
    }
}
