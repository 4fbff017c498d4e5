use crate::error::{param, Result};

/// A closed, bounded interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return param(format!("interval endpoints must be finite, got [{a}, {b}]"));
        }
        if a >= b {
            return param(format!("interval requires a < b, got [{a}, {b}]"));
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    pub fn check_contains(&self, x: f64, what: &str) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            param(format!("{what} = {x} lies outside [{}, {}]", self.a, self.b))
        }
    }

    /// `n` equally spaced points from `a` to `b` inclusive.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "grid needs at least two points");
        let h = self.length() / (n - 1) as f64;
        (0..n)
            .map(|i| if i == n - 1 { self.b } else { self.a + i as f64 * h })
            .collect()
    }
}
