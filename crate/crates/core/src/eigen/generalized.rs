//! `HC = SCW` through the three reduction routes.

use num_traits::Signed;

use super::jacobi::fix_sign;
use super::{
    cluster_width, exact_matrix, float_matrix, jacobi_eigensym, matrix_inv_sqrt, nonsym, tol,
    EigenError, PencilEntry, Route,
};
use crate::matrix::{ldlt, LdltFactors, Matrix, MatrixError, SymMatrix};
use crate::scalars::{PFloat, Rational};

/// Ritz values `W₁ <= … <= W_N` and coefficient columns with `CᵀSC = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct RitzSolution {
    pub ritz_values: Vec<PFloat>,
    /// Column `k` holds the expansion coefficients of the `k`-th Ritz function.
    pub coefficients: Matrix<PFloat>,
    pub route: Route,
    pub precision: u32,
}

impl RitzSolution {
    pub fn dim(&self) -> usize {
        self.ritz_values.len()
    }
}

/// Solves the generalized symmetric-definite problem `HC = SCW`.
///
/// `S` is certified positive definite by an exact LDLᵀ before any floating
/// point work, whatever the route.
pub fn solve_generalized<T: PencilEntry>(
    h: &SymMatrix<T>,
    s: &SymMatrix<T>,
    route: Route,
    precision: u32,
) -> Result<RitzSolution, EigenError> {
    if h.dim() != s.dim() {
        return Err(EigenError::DimensionMismatch {
            h: h.dim(),
            s: s.dim(),
        });
    }
    let s_exact = exact_matrix(s);
    let factors = certify_overlap(&s_exact)?;

    let (values, coefficients) = match route {
        Route::Invsqrt => reduce_invsqrt(&float_matrix(h, precision), &float_matrix(s, precision))?,
        Route::Ldlt => reduce_ldlt(&exact_matrix(h), &factors, precision)?,
        Route::Nonsym => nonsym::solve(&exact_matrix(h), &s_exact, &factors, precision)?,
    };

    // with S = I the symmetric routes already return orthonormal vectors;
    // renormalizing would only re-round them
    let orthonormal_basis = route != Route::Nonsym && is_identity(&s_exact);
    let mut coefficients = if orthonormal_basis {
        coefficients
    } else {
        normalize_s(&coefficients, &s_exact.to_float(precision), Some(&values))?
    };
    for j in 0..coefficients.cols() {
        let mut column = coefficients.column(j);
        fix_sign(&mut column);
        coefficients.set_column(j, &column);
    }
    Ok(RitzSolution {
        ritz_values: values,
        coefficients,
        route,
        precision,
    })
}

fn is_identity(s: &SymMatrix<Rational>) -> bool {
    let n = s.dim();
    (0..n).all(|i| (i..n).all(|j| *s.get(i, j) == Rational::from_integer(((i == j) as i64).into())))
}

fn certify_overlap(s: &SymMatrix<Rational>) -> Result<LdltFactors, EigenError> {
    let factors = ldlt(s).map_err(|e| match e {
        MatrixError::ZeroPivot(pivot) => EigenError::SingularOverlap { pivot },
        other => EigenError::Matrix(other),
    })?;
    if let Some(k) = factors.diag.iter().position(|d| !d.is_positive()) {
        return Err(EigenError::SingularOverlap { pivot: k + 1 });
    }
    Ok(factors)
}

/// Diagonalizes `S^(-1/2)·H·S^(-1/2)` and maps back with `C = S^(-1/2)·U`.
fn reduce_invsqrt(
    h: &SymMatrix<PFloat>,
    s: &SymMatrix<PFloat>,
) -> Result<(Vec<PFloat>, Matrix<PFloat>), EigenError> {
    let p = s.precision().max(h.precision());
    let x = matrix_inv_sqrt(s)?.to_dense();
    let g = x.matmul(&h.to_dense())?.matmul(&x)?;
    let spectrum = jacobi_eigensym(&SymMatrix::from_upper_of(&g)?, &tol(p))?;
    let c = x.matmul(&spectrum.vectors)?;
    Ok((spectrum.values, c))
}

/// With `S = L·D·Lᵀ`, the matrix `K = L⁻¹·H·L⁻ᵀ` is formed exactly and
/// `G = D^(-1/2)·K·D^(-1/2)` is the only floating-point input to the
/// eigensolve. `C = L⁻ᵀ·D^(-1/2)·U`.
fn reduce_ldlt(
    h: &SymMatrix<Rational>,
    factors: &LdltFactors,
    p: u32,
) -> Result<(Vec<PFloat>, Matrix<PFloat>), EigenError> {
    let n = factors.dim();
    let l_inv = factors.lower_inverse();
    let k = l_inv.matmul(&h.to_dense())?.matmul(&l_inv.transpose())?;
    let root_pivots: Vec<PFloat> = factors
        .diag
        .iter()
        .map(|d| PFloat::from_rational(d, p).sqrt().expect("certified positive pivot"))
        .collect();
    let g = SymMatrix::from_upper_fn(n, |i, j| {
        let scale = PFloat::from_rational(&(&factors.diag[i] * &factors.diag[j]), p)
            .sqrt()
            .expect("certified positive pivots");
        &PFloat::from_rational(&k[(i, j)], p) / &scale
    })?;
    let spectrum = jacobi_eigensym(&g, &tol(p))?;
    let back = Matrix::from_fn(n, n, |i, j| &PFloat::from_rational(&l_inv[(j, i)], p) / &root_pivots[j]);
    let c = back.matmul(&spectrum.vectors)?;
    Ok((spectrum.values, c))
}

/// Scales each column of `c` to unit S-norm.
///
/// With `ritz_values`, columns whose values lie within a relative
/// `2^(-p/3)` of each other form a cluster and are S-orthogonalized in index
/// order first. Without them, all columns are treated as one cluster, i.e.
/// a full S-Gram-Schmidt pass.
pub fn normalize_s(
    c: &Matrix<PFloat>,
    s: &SymMatrix<PFloat>,
    ritz_values: Option<&[PFloat]>,
) -> Result<Matrix<PFloat>, EigenError> {
    let n = c.cols();
    if s.dim() != c.rows() {
        return Err(EigenError::DimensionMismatch {
            h: c.rows(),
            s: s.dim(),
        });
    }
    let p = c.precision().max(s.precision());
    let cluster_start = cluster_starts(n, ritz_values, p);
    let s_dense = s.to_dense();
    let s_scale = s.max_abs();
    let mut out = c.map(|x| x.with_precision(p));
    for (j, &start) in cluster_start.iter().enumerate() {
        let mut col = out.column(j);
        let col_sq = PFloat::dot(col.iter().zip(&col), p);
        for i in start..j {
            let prev = out.column(i);
            let proj = s_inner(&s_dense, &prev, &col, p)?;
            col = col.iter().zip(&prev).map(|(x, y)| x - &(&proj * y)).collect();
        }
        let norm_sq = s_inner(&s_dense, &col, &col, p)?;
        let floor = (&s_scale * &col_sq).mul_pow2(-(p as i64)) * PFloat::from_i64(n as i64, p);
        if !norm_sq.is_positive() || norm_sq <= floor {
            return Err(EigenError::ZeroNorm { column: j + 1 });
        }
        let norm = norm_sq.sqrt().expect("positive");
        let col: Vec<PFloat> = col.iter().map(|x| x / &norm).collect();
        out.set_column(j, &col);
    }
    Ok(out)
}

fn cluster_starts(n: usize, ritz_values: Option<&[PFloat]>, p: u32) -> Vec<usize> {
    let Some(values) = ritz_values else {
        return vec![0; n];
    };
    let width = cluster_width(p);
    let mut starts = vec![0; n];
    for k in 1..n {
        let gap = (&values[k] - &values[k - 1]).abs();
        let scale = values[k].abs().max(values[k - 1].abs());
        starts[k] = if gap <= &width * &scale {
            starts[k - 1]
        } else {
            k
        };
    }
    starts
}

fn s_inner(s: &Matrix<PFloat>, x: &[PFloat], y: &[PFloat], p: u32) -> Result<PFloat, EigenError> {
    let sy = s.matvec(y)?;
    Ok(PFloat::dot(x.iter().zip(&sy), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::residuals;
    use crate::scalars::{int, ratio};

    fn overlap2() -> SymMatrix<Rational> {
        SymMatrix::from_upper_fn(2, |i, j| [[ratio(1, 30), ratio(1, 60)], [ratio(1, 60), ratio(1, 105)]][i][j].clone()).unwrap()
    }

    fn hamiltonian2() -> SymMatrix<Rational> {
        SymMatrix::from_upper_fn(2, |i, j| [[ratio(1, 6), ratio(1, 12)], [ratio(1, 12), ratio(1, 15)]][i][j].clone()).unwrap()
    }

    #[test]
    fn two_by_two_example_all_routes() {
        for route in Route::ALL {
            for p in [53, 128, 256] {
                let sol = solve_generalized(&hamiltonian2(), &overlap2(), route, p).unwrap();
                let want = [5.0, 21.0];
                for (w, e) in sol.ritz_values.iter().zip(want) {
                    assert!((w.to_f64() - e).abs() / e < 1e-13, "{route} p={p}: {w}");
                }
                let r = residuals(&hamiltonian2(), &overlap2(), &sol).unwrap();
                assert!(r.max().to_f64() < 1e-12, "{route}: {r:?}");
            }
        }
    }

    #[test]
    fn orthonormal_basis_is_plain_diagonalization() {
        let p = 64;
        let (a, b) = (ratio(-3, 2), ratio(7, 3));
        let h = SymMatrix::from_upper_fn(2, |i, j| match (i, j) {
            (0, 0) => b.clone(),
            (1, 1) => a.clone(),
            _ => int(0),
        })
        .unwrap();
        let s = SymMatrix::from_upper_fn(2, |i, j| int((i == j) as i64)).unwrap();
        let sol = solve_generalized(&h, &s, Route::Ldlt, p).unwrap();
        assert_eq!(sol.ritz_values[0], PFloat::from_rational(&a, p));
        assert_eq!(sol.ritz_values[1], PFloat::from_rational(&b, p));
        let c = &sol.coefficients;
        assert!(c[(0, 0)].is_zero() && c[(1, 1)].is_zero());
        assert_eq!(c[(1, 0)], PFloat::one(p));
        assert_eq!(c[(0, 1)], PFloat::one(p));
    }

    #[test]
    fn rejects_bad_overlaps() {
        let indefinite = SymMatrix::from_upper_fn(2, |i, j| if i == j { int(1) } else { int(2) }).unwrap();
        assert_eq!(
            solve_generalized(&hamiltonian2(), &indefinite, Route::Ldlt, 64),
            Err(EigenError::SingularOverlap { pivot: 2 })
        );
        let zero = SymMatrix::from_upper_fn(2, |_, _| int(0)).unwrap();
        assert_eq!(
            solve_generalized(&hamiltonian2(), &zero, Route::Invsqrt, 64),
            Err(EigenError::SingularOverlap { pivot: 1 })
        );
        let small = SymMatrix::from_upper_fn(1, |_, _| int(1)).unwrap();
        assert_eq!(
            solve_generalized(&hamiltonian2(), &small, Route::Nonsym, 64),
            Err(EigenError::DimensionMismatch { h: 2, s: 1 })
        );
    }

    #[test]
    fn degenerate_values_get_orthogonal_columns() {
        // H = 2S has a single eigenvalue 2 of multiplicity 3
        let p = 128;
        let s = SymMatrix::from_upper_fn(3, |i, j| ratio(1, (i + j + 1) as i64)).unwrap();
        let h = s.map(|x| x * int(2));
        for route in Route::ALL {
            let sol = solve_generalized(&h, &s, route, p).unwrap();
            let r = residuals(&h, &s, &sol).unwrap();
            assert!(r.max() <= tol(p), "{route}: {r:?}");
        }
    }

    #[test]
    fn normalize_rescales_and_orthogonalizes() {
        let p = 128;
        let s = overlap2().to_float(p);
        // printed C: √30·[[1, √7], [0, −2√7]]
        let r30 = PFloat::from_i64(30, p).sqrt().unwrap();
        let r210 = PFloat::from_i64(210, p).sqrt().unwrap();
        let c = Matrix::from_rows(vec![
            vec![r30.clone(), r210.clone()],
            vec![PFloat::zero(p), -r210.mul_pow2(1)],
        ])
        .unwrap();
        let same = normalize_s(&c, &s, None).unwrap();
        assert!(same.max_abs_diff(&c).unwrap() <= PFloat::one(p).mul_pow2(-120));

        let doubled = c.map(|x| x.mul_pow2(1));
        let back = normalize_s(&doubled, &s, Some(&[PFloat::from_i64(5, p), PFloat::from_i64(21, p)])).unwrap();
        assert!(back.max_abs_diff(&c).unwrap() <= PFloat::one(p).mul_pow2(-120));

        let dependent = Matrix::from_rows(vec![
            vec![PFloat::one(p), PFloat::one(p)],
            vec![PFloat::one(p), PFloat::one(p)],
        ])
        .unwrap();
        assert_eq!(normalize_s(&dependent, &s, None), Err(EigenError::ZeroNorm { column: 2 }));
    }

    #[test]
    fn random_full_rank_columns_become_s_orthonormal() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let p = 128;
        let s = SymMatrix::from_upper_fn(3, |i, j| ratio(2, ((i + j + 3) * (i + j + 4) * (i + j + 5)) as i64))
            .unwrap()
            .to_float(p);
        let c = Matrix::from_fn(3, 3, |_, _| PFloat::from_f64(rng.gen_range(-1.0..1.0), p));
        let q = normalize_s(&c, &s, None).unwrap();
        let gram = q.congruence(&s.to_dense()).unwrap();
        let id = Matrix::identity(3, &PFloat::zero(p));
        assert!(gram.max_abs_diff(&id).unwrap() <= tol(p));
    }
}
