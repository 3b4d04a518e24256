//! Residual norms of the identities a Ritz solution must satisfy.

use serde::Serialize;

use super::{float_matrix, matrix_sqrt, EigenError, PencilEntry, RitzSolution};
use crate::matrix::{Matrix, SymMatrix};
use crate::scalars::PFloat;

/// Max-norms of `HC − SC·diag(W)`, `CᵀSC − I` and `CᵀHC − diag(W)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Residuals {
    pub secular: PFloat,
    pub overlap: PFloat,
    pub hamiltonian: PFloat,
}

impl Residuals {
    pub fn max(&self) -> PFloat {
        [&self.secular, &self.overlap, &self.hamiltonian]
            .into_iter()
            .max()
            .cloned()
            .expect("three entries")
    }

    pub fn to_f64s(&self) -> ResidualsF64 {
        ResidualsF64 {
            secular: self.secular.to_f64(),
            overlap: self.overlap.to_f64(),
            hamiltonian: self.hamiltonian.to_f64(),
        }
    }
}

/// Plain-number view for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualsF64 {
    pub secular: f64,
    pub overlap: f64,
    pub hamiltonian: f64,
}

pub fn residuals<T: PencilEntry>(
    h: &SymMatrix<T>,
    s: &SymMatrix<T>,
    sol: &RitzSolution,
) -> Result<Residuals, EigenError> {
    let p = sol.precision;
    let h = float_matrix(h, p).to_dense();
    let s = float_matrix(s, p).to_dense();
    let c = &sol.coefficients;
    let w = Matrix::diagonal(&sol.ritz_values);
    let id = Matrix::identity(c.cols(), &PFloat::zero(p));

    let hc = h.matmul(c)?;
    let scw = s.matmul(c)?.matmul(&w)?;
    Ok(Residuals {
        secular: hc.max_abs_diff(&scw)?,
        overlap: c.congruence(&s)?.max_abs_diff(&id)?,
        hamiltonian: c.congruence(&h)?.max_abs_diff(&w)?,
    })
}

/// `‖UᵀU − I‖_max` for `U = S^(1/2)·C`.
pub fn unitarity_check<T: PencilEntry>(s: &SymMatrix<T>, c: &Matrix<PFloat>) -> Result<PFloat, EigenError> {
    let p = c.precision();
    let root = matrix_sqrt(&float_matrix(s, p))?.to_dense();
    let u = root.matmul(c)?;
    let id = Matrix::identity(c.cols(), &PFloat::zero(p));
    Ok(u.transpose().matmul(&u)?.max_abs_diff(&id)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{matrix_inv_sqrt, tol, Route};
    use crate::scalars::{int, ratio, Rational};

    fn overlap2() -> SymMatrix<Rational> {
        SymMatrix::from_upper_fn(2, |i, j| [[ratio(1, 30), ratio(1, 60)], [ratio(1, 60), ratio(1, 105)]][i][j].clone()).unwrap()
    }

    fn hamiltonian2() -> SymMatrix<Rational> {
        SymMatrix::from_upper_fn(2, |i, j| [[ratio(1, 6), ratio(1, 12)], [ratio(1, 12), ratio(1, 15)]][i][j].clone()).unwrap()
    }

    fn printed_solution(p: u32) -> RitzSolution {
        let r30 = PFloat::from_i64(30, p).sqrt().unwrap();
        let r210 = PFloat::from_i64(210, p).sqrt().unwrap();
        RitzSolution {
            ritz_values: vec![PFloat::from_i64(5, p), PFloat::from_i64(21, p)],
            coefficients: Matrix::from_rows(vec![
                vec![r30, r210.clone()],
                vec![PFloat::zero(p), -r210.mul_pow2(1)],
            ])
            .unwrap(),
            route: Route::Ldlt,
            precision: p,
        }
    }

    #[test]
    fn printed_two_by_two_solution_is_exact() {
        // C = R·diag(√30, √210) with rational R; every identity reduces to a
        // rational one once the column scales are factored out.
        let r = Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(-2)]]).unwrap();
        let scales_sq = [int(30), int(210)];
        let w = Matrix::diagonal(&[int(5), int(21)]);
        let (h, s) = (hamiltonian2().to_dense(), overlap2().to_dense());

        let secular = h.matmul(&r).unwrap();
        let rhs = s.matmul(&r).unwrap().matmul(&w).unwrap();
        assert_eq!(secular, rhs);

        let gram = r.congruence(&s).unwrap();
        let proj = r.congruence(&h).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    assert_eq!(&gram[(i, i)] * &scales_sq[i], int(1));
                    assert_eq!(&proj[(i, i)] * &scales_sq[i], w[(i, i)]);
                } else {
                    assert_eq!(gram[(i, j)], int(0));
                    assert_eq!(proj[(i, j)], int(0));
                }
            }
        }
    }

    #[test]
    fn printed_solution_in_floating_point() {
        let p = 256;
        let sol = printed_solution(p);
        let r = residuals(&hamiltonian2(), &overlap2(), &sol).unwrap();
        assert!(r.max() <= PFloat::one(p).mul_pow2(-240), "{r:?}");
        let u = unitarity_check(&overlap2(), &sol.coefficients).unwrap();
        assert!(u <= tol(p));
    }

    #[test]
    fn perturbed_coefficient_shows_in_overlap_residual() {
        let p = 128;
        let mut sol = printed_solution(p);
        sol.coefficients[(0, 0)] = &sol.coefficients[(0, 0)] + &PFloat::from_rational(&ratio(1, 1000), p);
        let r = residuals(&hamiltonian2(), &overlap2(), &sol).unwrap();
        // (c + δ)ᵀS(c + δ) − 1 ≈ 2δ·√30·S₁₁ ≈ 3.65e-4
        assert!(r.overlap.to_f64() >= 1e-4, "{r:?}");
    }

    #[test]
    fn orthonormal_basis_has_zero_residuals() {
        let p = 64;
        let s = SymMatrix::from_upper_fn(3, |i, j| int((i == j) as i64)).unwrap();
        let h = SymMatrix::from_upper_fn(3, |i, j| if i == j { int(i as i64 + 1) } else { int(0) }).unwrap();
        let sol = RitzSolution {
            ritz_values: (1..=3).map(|k| PFloat::from_i64(k, p)).collect(),
            coefficients: Matrix::identity(3, &PFloat::zero(p)),
            route: Route::Ldlt,
            precision: p,
        };
        let r = residuals(&h, &s, &sol).unwrap();
        assert!(r.max().is_zero());
    }

    #[test]
    fn unitarity_of_inverse_root_and_doubled_column() {
        let p = 128;
        let s_f = overlap2().to_float(p);
        let c = matrix_inv_sqrt(&s_f).unwrap().to_dense();
        assert!(unitarity_check(&overlap2(), &c).unwrap() <= tol(p));

        let mut doubled = printed_solution(p).coefficients;
        for i in 0..2 {
            doubled[(i, 1)] = doubled[(i, 1)].mul_pow2(1);
        }
        // diagonal entry of UᵀU becomes 4
        assert!(unitarity_check(&overlap2(), &doubled).unwrap().to_f64() >= 1.0);
    }
}
