//! Absolute-plus-relative comparison tolerances.
//!
//! Every numerical check in this crate is of the form
//! `|err| <= atol + rtol * scale`, where `scale` is a magnitude that is
//! natural for the quantity being compared (the reference value itself,
//! or a matrix norm for spectral quantities). Exact inequalities from
//! real arithmetic are given only enough slack to absorb rounding.

/// An absolute-plus-relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: 1e-12,
            rtol: 1e-10,
        }
    }
}

impl Tolerance {
    pub const fn new(atol: f64, rtol: f64) -> Self {
        Self { atol, rtol }
    }

    /// `|err| <= atol + rtol * |scale|`.
    pub fn allows(&self, err: f64, scale: f64) -> bool {
        err.abs() <= self.atol + self.rtol * scale.abs()
    }

    /// Closeness of `actual` to `reference`, scaled by the reference.
    pub fn close(&self, actual: f64, reference: f64) -> bool {
        self.allows(actual - reference, reference)
    }

    /// Closeness with an explicit scale (e.g. a matrix norm).
    pub fn close_at_scale(&self, actual: f64, reference: f64, scale: f64) -> bool {
        self.allows(actual - reference, scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerance_accepts_rounding_noise() {
        let tol = Tolerance::default();
        assert!(tol.close(1.0 + 1e-13, 1.0));
        assert!(!tol.close(1.0 + 1e-8, 1.0));
        assert!(tol.close(0.0, 0.0));
    }

    #[test]
    fn scale_overrides_reference() {
        let tol = Tolerance::new(0.0, 1e-10);
        // err 1e-7 vs tiny reference fails, but passes at matrix scale 1e4
        assert!(!tol.close(1e-7, 0.0));
        assert!(tol.close_at_scale(1e-7, 0.0, 1e4));
    }
}
