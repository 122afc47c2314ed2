//! Geometric threshold lattice `τ_i = (1+ε)^i` over integer exponents.
//!
//! Powers are evaluated by repeated multiplication (or division) by the
//! single base `1+ε`, so membership decisions are bit-reproducible.

/// Exponent grid with base `1+ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    base: f64,
}

impl Grid {
    pub fn new(epsilon: f64) -> Self {
        Grid { base: 1.0 + epsilon }
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn power(&self, i: i32) -> f64 {
        let mut x = 1.0;
        if i >= 0 {
            for _ in 0..i {
                x *= self.base;
            }
        } else {
            for _ in 0..i.unsigned_abs() {
                x /= self.base;
            }
        }
        x
    }

    fn estimate(&self, x: f64) -> i32 {
        let e = (x.ln() / self.base.ln()).floor();
        e.clamp(i32::MIN as f64 / 2.0, i32::MAX as f64 / 2.0) as i32
    }

    /// Largest `i` with `power(i) <= x`. Requires `x > 0`.
    pub fn floor_exponent(&self, x: f64) -> i32 {
        debug_assert!(x > 0.0);
        let mut i = self.estimate(x);
        while self.power(i) > x {
            i -= 1;
        }
        while self.power(i + 1) <= x {
            i += 1;
        }
        i
    }

    /// Smallest `i` with `power(i) > x`. Requires `x > 0`.
    pub fn first_above(&self, x: f64) -> i32 {
        self.floor_exponent(x) + 1
    }

    /// Smallest `i` with `power(i) >= x`. Requires `x > 0`.
    pub fn ceil_exponent(&self, x: f64) -> i32 {
        let i = self.floor_exponent(x);
        if self.power(i) == x {
            i
        } else {
            i + 1
        }
    }
}

/// The finite set of thresholds `{(1+ε)^i : ε·Δ/((1+ε)k) < (1+ε)^i ≤ Δ}`,
/// iterated from the largest exponent down.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdLattice {
    pub grid: Grid,
    /// Inclusive exponent range; `None` when `Δ = 0`.
    pub range: Option<(i32, i32)>,
}

impl ThresholdLattice {
    pub fn build(delta: f64, k: usize, epsilon: f64) -> Self {
        let grid = Grid::new(epsilon);
        if delta <= 0.0 || k == 0 {
            return ThresholdLattice { grid, range: None };
        }
        let lower = epsilon * delta / ((1.0 + epsilon) * k as f64);
        let hi = grid.floor_exponent(delta);
        let lo = grid.first_above(lower);
        let range = (lo <= hi).then_some((lo, hi));
        ThresholdLattice { grid, range }
    }

    pub fn len(&self) -> usize {
        self.range.map_or(0, |(lo, hi)| (hi - lo + 1) as usize)
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_none()
    }

    /// Exponents in descending order.
    pub fn exponents(&self) -> Vec<i32> {
        match self.range {
            Some((lo, hi)) => (lo..=hi).rev().collect(),
            None => Vec::new(),
        }
    }

    pub fn threshold(&self, i: i32) -> f64 {
        self.grid.power(i)
    }
}

/// `1 + ⌈2 ln(k/ε) / ε⌉`, the bound on the number of live thresholds.
pub fn lattice_size_bound(k: usize, epsilon: f64) -> usize {
    let ratio = (k.max(1) as f64 / epsilon).ln().max(0.0);
    1 + (2.0 * ratio / epsilon).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_for_zero_delta() {
        assert!(ThresholdLattice::build(0.0, 3, 0.1).is_empty());
        assert_eq!(ThresholdLattice::build(0.0, 3, 0.1).exponents(), Vec::<i32>::new());
    }

    #[test]
    fn unit_delta_k1() {
        let t = ThresholdLattice::build(1.0, 1, 0.1);
        assert_eq!(t.range, Some((-25, 0)));
        let ex = t.exponents();
        assert_eq!(ex.first(), Some(&0));
        assert_eq!(ex.last(), Some(&-25));
        assert_eq!(ex.len(), 26);
    }

    #[test]
    fn size_bound_k100() {
        assert_eq!(lattice_size_bound(100, 0.1), 140);
        let t = ThresholdLattice::build(37.5, 100, 0.1);
        assert!(t.len() <= 140);
    }

    #[test]
    fn floor_and_ceil_exponents() {
        let g = Grid::new(0.5);
        assert_eq!(g.floor_exponent(1.0), 0);
        assert_eq!(g.floor_exponent(1.49), 0);
        assert_eq!(g.floor_exponent(1.5), 1);
        assert_eq!(g.floor_exponent(0.5), -2);
        assert_eq!(g.ceil_exponent(1.5), 1);
        assert_eq!(g.ceil_exponent(1.6), 2);
        assert_eq!(g.first_above(1.5), 2);
    }
}
