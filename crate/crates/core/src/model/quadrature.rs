//! Gauss-Legendre quadrature used as an independent check on the closed-form
//! matrix elements.
//!
//! The kinetic part integrates `f_i · (−½ f_j'')` directly, with no
//! integration by parts, so it does not share the symmetrized form the
//! closed-form element is written in.

use super::{ModelError, Polynomial};
use crate::scalars::{ratio, PFloat, Rational};

const NEWTON_ITERATIONS: usize = 100;

/// Nodes and weights of the `n`-point rule on `[0, 1]`, ascending nodes.
pub fn gauss_legendre(n: usize, precision: u32) -> Vec<(PFloat, PFloat)> {
    assert!(n >= 1);
    let p = precision;
    let one = PFloat::one(p);
    let two = PFloat::from_i64(2, p);
    let mut rule = Vec::with_capacity(n);
    for k in 1..=n {
        let guess = (std::f64::consts::PI * (k as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = PFloat::from_f64(guess, p);
        let mut derivative = legendre(n, &x).1;
        for _ in 0..NEWTON_ITERATIONS {
            let (value, slope) = legendre(n, &x);
            let step = &value / &slope;
            x = &x - &step;
            derivative = slope;
            if step.is_zero() || step.abs().ilog2() < x.abs().ilog2().map(|e| e - p as i64 + 2) {
                derivative = legendre(n, &x).1;
                break;
            }
        }
        // weight on [-1, 1]: 2 / ((1 − x²) P_n'(x)²), halved for [0, 1]
        let weight = &one / &((&one - &(&x * &x)) * (&derivative * &derivative));
        let node = (&x + &one) / &two;
        rule.push((node, weight));
    }
    rule.sort_by(|a, b| a.0.cmp(&b.0));
    rule
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &PFloat) -> (PFloat, PFloat) {
    let p = x.precision();
    let one = PFloat::one(p);
    let mut prev = one.clone();
    let mut cur = x.clone();
    for m in 1..n {
        let m_f = PFloat::from_i64(m as i64, p);
        let next = (&(&PFloat::from_i64(2 * m as i64 + 1, p) * &(x * &cur)) - &(&m_f * &prev))
            / PFloat::from_i64(m as i64 + 1, p);
        prev = cur;
        cur = next;
    }
    if n == 0 {
        return (one, PFloat::zero(p));
    }
    let slope = &PFloat::from_i64(n as i64, p) * &(&(x * &cur) - &prev) / (&(x * x) - &one);
    (cur, slope)
}

/// Numerically integrated `⟨f_i|f_j⟩` and `⟨f_i|H|f_j⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureElements {
    pub overlap: PFloat,
    pub hamiltonian: PFloat,
}

/// Integrates `f_i·f_j` and `f_i·(−½ f_j'' + λx f_j)` over `[0, 1]` with an
/// `nodes`-point Gauss-Legendre rule. Indices are 1-based.
pub fn quadrature_element(
    i: usize,
    j: usize,
    lambda: &Rational,
    nodes: usize,
    precision: u32,
) -> Result<QuadratureElements, ModelError> {
    assert!(i >= 1 && j >= 1, "basis indices are 1-based");
    let required = (i + j + 4) / 2 + 1;
    if nodes < required {
        return Err(ModelError::InsufficientNodes {
            given: nodes,
            required,
        });
    }
    let fi = Polynomial::dirichlet_monomial(i);
    let fj = Polynomial::dirichlet_monomial(j);
    let h_fj = fj
        .derivative()
        .derivative()
        .scale(&ratio(-1, 2))
        .add(&fj.shift_up().scale(lambda));

    let rule = gauss_legendre(nodes, precision);
    let mut overlap_terms = Vec::with_capacity(nodes);
    let mut hamiltonian_terms = Vec::with_capacity(nodes);
    for (x, w) in &rule {
        let fi_x = fi.eval(x);
        overlap_terms.push(&(&fi_x * &fj.eval(x)) * w);
        hamiltonian_terms.push(&(&fi_x * &h_fj.eval(x)) * w);
    }
    Ok(QuadratureElements {
        overlap: PFloat::sum(&overlap_terms, precision),
        hamiltonian: PFloat::sum(&hamiltonian_terms, precision),
    })
}
