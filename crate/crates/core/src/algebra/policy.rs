use serde::{Deserialize, Serialize};

use super::Coeff;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Laurent polynomials over `Q(sqrt(Q))`; only for `p` in {3, 4, 6} or integer `Q`.
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericPolicy {
    pub backend: Backend,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl NumericPolicy {
    pub const DEFAULT_ABS_TOL: f64 = 1e-10;
    pub const DEFAULT_REL_TOL: f64 = 1e-9;

    pub fn exact() -> Self {
        NumericPolicy {
            backend: Backend::Exact,
            abs_tol: 0.0,
            rel_tol: 0.0,
        }
    }

    pub fn float() -> Self {
        NumericPolicy {
            backend: Backend::Float,
            abs_tol: Self::DEFAULT_ABS_TOL,
            rel_tol: Self::DEFAULT_REL_TOL,
        }
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    /// Float comparison `|u - v| <= abs_tol + rel_tol * scale`.
    pub fn within(&self, u: f64, v: f64, scale: f64) -> bool {
        (u - v).abs() <= self.abs_tol + self.rel_tol * scale
    }
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::float()
    }
}

/// Exact: `u - v` is zero. Float: `|u-v| <= abs_tol + rel_tol*max(|u|,|v|)`.
pub fn approx_equal<C: Coeff>(u: &C, v: &C, policy: &NumericPolicy) -> bool {
    match policy.backend {
        Backend::Exact => (u.clone() - v.clone()).is_zero(),
        Backend::Float => {
            let (a, b) = (u.to_f64(), v.to_f64());
            policy.within(a, b, a.abs().max(b.abs()))
        }
    }
}
