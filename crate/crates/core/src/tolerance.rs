//! Numerical thresholds shared by the crate.

/// Coefficients with magnitude at or below this are dropped on canonicalization.
pub const PRUNE: f64 = 1e-14;
/// Default comparison tolerance for complex values.
pub const COMPARE: f64 = 1e-12;
/// Environment variable overriding [`COMPARE`] in the command line tool.
pub const TOL_ENV: &str = "UHFKRON_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub prune: f64,
    pub compare: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            prune: PRUNE,
            compare: COMPARE,
        }
    }
}

impl Tolerances {
    /// Defaults, with `compare` taken from `UHFKRON_TOL` when it parses as a
    /// positive finite number.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(v) = std::env::var(TOL_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
        {
            tol.compare = v;
        }
        tol
    }
}
