//! Approximation factors as finite-`ε` expressions.
//!
//! Each formula is the closed form before the `O(ε)` terms are absorbed, so
//! that it can be compared against measured ratios at the `ε` actually used.
//! `beta` is the approximation factor of the Phase II solver.

use crate::summary::Mode;

/// `e/(e−1)`, the best known factor for monotone objectives under a matroid.
pub const MONOTONE_BETA: f64 = std::f64::consts::E / (std::f64::consts::E - 1.0);

/// `1/0.385 ≈ 2.597`, the best known factor for non-monotone objectives
/// under a matroid.
pub const NON_MONOTONE_BETA: f64 = 1.0 / 0.385;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub value: f64,
    /// Reasons the parameters fall outside the range the factor is proven for.
    pub warnings: Vec<String>,
}

impl BoundReport {
    pub fn in_range(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Offline algorithm, general objectives:
/// `(2+ε)(1+ε) / ((1−2ε)(1−ε)) + β/(1−2ε)`.
pub fn centralized_general(beta: f64, epsilon: f64) -> f64 {
    let e = epsilon;
    (2.0 + e) * (1.0 + e) / ((1.0 - 2.0 * e) * (1.0 - e)) + beta / (1.0 - 2.0 * e)
}

/// Offline algorithm, monotone objectives with the `⌈d/ε⌉` bucket rule:
/// `β/(1−ε) + (2+ε)(1+ε)/(1−ε)²`.
pub fn centralized_monotone(beta: f64, epsilon: f64) -> f64 {
    let e = epsilon;
    beta / (1.0 - e) + (2.0 + e) * (1.0 + e) / ((1.0 - e) * (1.0 - e))
}

/// Streaming, general objectives with `p = 1/(γ+2)`:
/// `(2+γ)(γ² + (β+2)γ + 1) / (γ(1+γ−ε(γ+2))) · (1+ε)/(1−ε)`.
pub fn streaming_general(beta: f64, epsilon: f64, gamma: f64) -> f64 {
    let (e, g) = (epsilon, gamma);
    (2.0 + g) * (g * g + (beta + 2.0) * g + 1.0) / (g * (1.0 + g - e * (g + 2.0)))
        * (1.0 + e)
        / (1.0 - e)
}

/// Streaming, monotone objectives with `γ = 1, p = 1`:
/// `2(1+ε)/(1−ε)² + (2+β)/(1−ε)`.
///
/// With `β = e/(e−1)` the second term is `(3e−2)/((1−ε)(e−1))`.
pub fn streaming_monotone(beta: f64, epsilon: f64) -> f64 {
    let e = epsilon;
    2.0 * (1.0 + e) / ((1.0 - e) * (1.0 - e)) + (2.0 + beta) / (1.0 - e)
}

/// Approximation factor for a configuration, with range warnings.
pub fn theoretical_bound(mode: Mode, monotone: bool, beta: f64, epsilon: f64, gamma: f64) -> BoundReport {
    let mut warnings = Vec::new();
    if !(beta >= 1.0) {
        warnings.push(format!("beta = {beta} is below 1"));
    }
    let value = match (mode, monotone) {
        (Mode::Centralized, monotone) => {
            if !(epsilon > 0.0 && epsilon < 0.2) {
                warnings.push(format!("epsilon = {epsilon} outside (0, 1/5)"));
            }
            if monotone {
                centralized_monotone(beta, epsilon)
            } else {
                centralized_general(beta, epsilon)
            }
        }
        (Mode::Streaming, true) => {
            if !(epsilon > 0.0 && epsilon < 1.0) {
                warnings.push(format!("epsilon = {epsilon} outside (0, 1)"));
            }
            streaming_monotone(beta, epsilon)
        }
        (Mode::Streaming, false) => {
            if !(epsilon > 0.0 && epsilon < 1.0) {
                warnings.push(format!("epsilon = {epsilon} outside (0, 1)"));
            }
            if !(gamma > 0.0) {
                warnings.push(format!("gamma = {gamma} must be positive"));
            }
            if !(1.0 + gamma - epsilon * (gamma + 2.0) > 0.0) {
                warnings.push(format!("epsilon = {epsilon} too large for gamma = {gamma}"));
            }
            streaming_general(beta, epsilon, gamma)
        }
    };
    BoundReport { value, warnings }
}
