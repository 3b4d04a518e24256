use num_traits::Zero;

use crate::scalars::{PFloat, Rational};

/// Dense polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// `xⁱ − xⁱ⁺¹`.
    pub fn dirichlet_monomial(i: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); i + 2];
        coeffs[i] = Rational::from_integer(1.into());
        coeffs[i + 1] = Rational::from_integer((-1).into());
        Polynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// `x · self`.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial::new(coeffs)
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::new(Vec::new());
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in other.coeffs.iter().enumerate() {
                coeffs[a + b] += ca * cb;
            }
        }
        Polynomial::new(coeffs)
    }

    /// Exact `∫₀¹ p(x) dx`.
    pub fn integrate_unit(&self) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c / Rational::from_integer((k + 1).into()))
            .sum()
    }

    /// Horner evaluation at the precision of `x`.
    pub fn eval(&self, x: &PFloat) -> PFloat {
        let p = x.precision();
        self.coeffs.iter().rev().fold(PFloat::zero(p), |acc, c| {
            &(&acc * x) + &PFloat::from_rational(c, p)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, ratio};

    #[test]
    fn basis_function_vanishes_at_both_ends() {
        for i in 1..6 {
            let f = Polynomial::dirichlet_monomial(i);
            assert_eq!(f.degree(), Some(i + 1));
            assert!(f.eval(&PFloat::zero(64)).is_zero());
            assert!(f.eval(&PFloat::one(64)).is_zero());
        }
    }

    #[test]
    fn calculus() {
        // p = 1 + 2x + 3x²
        let p = Polynomial::new(vec![int(1), int(2), int(3)]);
        assert_eq!(p.derivative(), Polynomial::new(vec![int(2), int(6)]));
        assert_eq!(p.integrate_unit(), int(3));
        assert_eq!(p.shift_up().integrate_unit(), ratio(1, 2) + ratio(2, 3) + ratio(3, 4));
        let q = Polynomial::new(vec![int(-1), int(1)]);
        assert_eq!(p.mul(&q), Polynomial::new(vec![int(-1), int(-1), int(-1), int(3)]));
        assert_eq!(p.add(&p.scale(&int(-1))).degree(), None);
        assert_eq!(p.eval(&PFloat::from_i64(2, 53)).to_f64(), 17.0);
    }
}
