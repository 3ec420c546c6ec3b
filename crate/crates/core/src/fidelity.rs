//! Gate counts and circuit fidelity under the digital error model, where
//! every gate is followed by an error channel and
//! `alpha ~ exp(-eps1 g1 - eps2 g2 - eps_init N - eps_mes N)`.

use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::generator::count_gates;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRates {
    pub eps1: f64,
    pub eps2: f64,
    pub eps_init: f64,
    pub eps_mes: f64,
}

impl ErrorRates {
    /// `eps` for two-qubit gates, initialization and measurement; a tenth
    /// of it for single-qubit gates.
    pub fn from_eps(eps: f64) -> Self {
        ErrorRates { eps1: eps / 10.0, eps2: eps, eps_init: eps, eps_mes: eps }
    }

    pub fn is_valid(&self) -> bool {
        [self.eps1, self.eps2, self.eps_init, self.eps_mes].iter().all(|e| (0.0..1.0).contains(e))
    }
}

pub fn g2_formula(m: usize, n: usize, d: usize) -> f64 {
    d as f64 / 8.0 * (((m - 1) * n + m * (n - 1)) as f64)
}

/// Approximate count of the gates after the Hadamard layer; negative for
/// very shallow circuits.
pub fn g1_formula(m: usize, n: usize, d: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    d as f64 / 8.0 * (3.0 * m * n - (m + n + 1.0)) - m * n / 4.0
}

/// `g1_formula` plus the `mn` initial Hadamards.
pub fn g1_formula_with_hadamards(m: usize, n: usize, d: usize) -> f64 {
    g1_formula(m, n, d) + (m * n) as f64
}

pub fn alpha_general(g1: f64, g2: f64, n: usize, r: &ErrorRates) -> f64 {
    let n = n as f64;
    libm::exp(-r.eps1 * g1 - r.eps2 * g2 - r.eps_init * n - r.eps_mes * n)
}

/// Exponent of `alpha_square` per unit `eps`.
pub fn square_exponent(n: usize, d: usize) -> f64 {
    let (nf, d) = (n as f64, d as f64);
    let s = libm::sqrt(nf);
    d / 4.0 * (nf - s) + 2.0 * nf + d / 80.0 * (3.0 * nf - 2.0 * s - 1.0) + 3.0 * nf / 40.0
}

/// Closed form for an `sqrt(N) x sqrt(N)` grid with `eps1 = eps/10`.
/// Non-square `N` is accepted with a real square root; see
/// [`is_perfect_square`].
pub fn alpha_square(n: usize, d: usize, eps: f64) -> f64 {
    libm::exp(-square_exponent(n, d) * eps)
}

pub fn is_perfect_square(n: usize) -> bool {
    let r = libm::sqrt(n as f64) as usize;
    (r.saturating_sub(1)..=r + 1).any(|k| k * k == n)
}

/// Two-qubit error rate at which a square circuit reaches `target` fidelity.
pub fn required_eps(n: usize, d: usize, target: f64) -> f64 {
    -libm::log(target) / square_exponent(n, d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FidelityReport {
    pub rows: usize,
    pub cols: usize,
    pub depth: usize,
    pub eps: f64,
    pub g1: f64,
    pub g2: f64,
    /// Exact counts of a concrete circuit; `g1_exact` includes the Hadamards.
    pub g1_exact: Option<usize>,
    pub g2_exact: Option<usize>,
    pub alpha_general: f64,
    /// `None` when the grid is not square.
    pub alpha_square: Option<f64>,
    pub alpha_exact: Option<f64>,
}

/// Formula-based report; exact counts are filled from `circuit` if given.
pub fn fidelity_report(m: usize, n: usize, d: usize, eps: f64, circuit: Option<&Circuit>) -> FidelityReport {
    let r = ErrorRates::from_eps(eps);
    let q = m * n;
    let g1 = g1_formula(m, n, d);
    let g2 = g2_formula(m, n, d);
    let exact = circuit.map(count_gates);
    FidelityReport {
        rows: m,
        cols: n,
        depth: d,
        eps,
        g1,
        g2,
        g1_exact: exact.map(|c| c.single),
        g2_exact: exact.map(|c| c.two),
        alpha_general: alpha_general(g1 + q as f64, g2, q, &r),
        alpha_square: (m == n).then(|| alpha_square(q, d, eps)),
        alpha_exact: exact.map(|c| alpha_general(c.single as f64, c.two as f64, q, &r)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourPoint {
    pub side: usize,
    pub depth: usize,
    pub eps: f64,
    /// `1 - eps`, the two-qubit gate fidelity needed.
    pub gate_fidelity: f64,
}

/// Required two-qubit fidelity over square grids for a target circuit
/// fidelity, one point per (side, depth).
pub fn fidelity_contour(sides: &[usize], depths: &[usize], target: f64) -> Vec<ContourPoint> {
    let mut out = Vec::with_capacity(sides.len() * depths.len());
    for &side in sides {
        for &depth in depths {
            let eps = required_eps(side * side, depth, target);
            out.push(ContourPoint { side, depth, eps, gate_fidelity: 1.0 - eps });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{cz_layer, generate, CzConfig, GenParams};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn formula_values() {
        assert_eq!(g2_formula(8, 8, 40), 560.0);
        assert_eq!(g2_formula(8, 8, 0), 0.0);
        assert_eq!(g1_formula(8, 8, 40), 859.0);
        assert_eq!(g1_formula(3, 5, 0), -3.75);
    }

    #[test]
    fn g2_exact_when_depth_multiple_of_eight() {
        for (m, n) in [(8, 8), (4, 6), (7, 7), (2, 3)] {
            for d in [8, 16, 40] {
                let c = generate(&GenParams::new(m, n, d, 1));
                assert_eq!(count_gates(&c).two as f64, g2_formula(m, n, d), "{m}x{n}x{d}");
            }
        }
    }

    #[test]
    fn g2_deviation_bounded_by_one_layer() {
        for (m, n) in [(5, 5), (4, 7)] {
            let widest = (1..=8).map(|k| cz_layer(CzConfig::new(k).unwrap(), m, n).len()).max().unwrap();
            for d in 1..30 {
                let c = generate(&GenParams::new(m, n, d, 0));
                assert!((count_gates(&c).two as f64 - g2_formula(m, n, d)).abs() <= widest as f64);
            }
        }
    }

    #[test]
    fn g1_formula_tracks_generated_counts() {
        for seed in 0..3 {
            let c = generate(&GenParams::new(7, 7, 32, seed));
            let exact = count_gates(&c).single as f64;
            assert!(rel(g1_formula_with_hadamards(7, 7, 32), exact) < 0.1);
        }
    }

    #[test]
    fn alpha_general_values() {
        assert_eq!(alpha_general(100.0, 50.0, 9, &ErrorRates::from_eps(0.0)), 1.0);
        let a = alpha_general(0.0, 0.0, 1, &ErrorRates::from_eps(0.005));
        assert!((a - libm::exp(-0.01)).abs() < 1e-15);
        assert!((a - 0.99005).abs() < 1e-5);
    }

    #[test]
    fn alpha_square_reference_point() {
        assert!((square_exponent(49, 40) - 587.675).abs() < 1e-9);
        let a = alpha_square(49, 40, 0.005);
        assert!((a - libm::exp(-2.938375)).abs() < 1e-9);
        assert!((a - 0.0529).abs() < 1e-3);
        assert_eq!(alpha_square(49, 40, 0.0), 1.0);
    }

    #[test]
    fn square_form_is_general_form_with_hadamards() {
        for side in [6, 7, 8] {
            for d in [8, 16, 24, 32, 40] {
                let n = side * side;
                let g = alpha_general(g1_formula_with_hadamards(side, side, d), g2_formula(side, side, d), n, &ErrorRates::from_eps(0.005));
                assert!(rel(g, alpha_square(n, d, 0.005)) < 1e-6);
            }
        }
    }

    #[test]
    fn alphas_decrease_in_each_argument() {
        let r = ErrorRates::from_eps(0.005);
        for &x in &[0.0, 10.0, 100.0] {
            assert!(alpha_general(x + 1.0, 5.0, 4, &r) < alpha_general(x, 5.0, 4, &r));
            assert!(alpha_general(5.0, x + 1.0, 4, &r) < alpha_general(5.0, x, 4, &r));
        }
        assert!(alpha_general(5.0, 5.0, 5, &r) < alpha_general(5.0, 5.0, 4, &r));
        for n in [4, 9, 16, 49] {
            for d in [0, 8, 20] {
                for e in [0.001, 0.005, 0.01] {
                    let a = alpha_square(n, d, e);
                    assert!(a > 0.0 && a <= 1.0);
                    assert!(alpha_square(n, d, e * 1.5) < a);
                    assert!(alpha_square(n, d + 1, e) < a);
                    assert!(alpha_square(n + 1, d, e) < a);
                }
            }
        }
    }

    #[test]
    fn perfect_squares() {
        assert!(is_perfect_square(49) && is_perfect_square(0) && is_perfect_square(1));
        assert!(!is_perfect_square(50) && !is_perfect_square(2));
    }

    #[test]
    fn report_and_contour() {
        let c = generate(&GenParams::new(7, 7, 40, 0));
        let rep = fidelity_report(7, 7, 40, 0.005, Some(&c));
        assert_eq!(rep.g2_exact, Some(g2_formula(7, 7, 40) as usize));
        assert!(rel(rep.alpha_general, rep.alpha_square.unwrap()) < 1e-6);
        assert!(fidelity_report(3, 4, 8, 0.005, None).alpha_square.is_none());

        let pts = fidelity_contour(&[7], &[40], 0.05);
        assert!((alpha_square(49, 40, pts[0].eps) - 0.05).abs() < 1e-12);
        assert!(pts[0].gate_fidelity > 0.99 && pts[0].gate_fidelity < 0.999);
    }

    #[test]
    fn rates_validity() {
        assert!(ErrorRates::from_eps(0.005).is_valid());
        assert!(!ErrorRates::from_eps(1.0).is_valid());
        assert!(!ErrorRates { eps1: -0.1, ..ErrorRates::from_eps(0.0) }.is_valid());
    }
}
