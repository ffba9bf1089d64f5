use serde::{Deserialize, Serialize};

use crate::limits::LimitConfig;
use crate::quadrature::QuadConfig;

/// Iteration budgets and tolerances shared by the dynamics pipelines.
#[derive(Debug, Clone, Copy)]
pub struct Config {
    /// Quadrature tolerances for map evaluation.
    pub eval_quad: QuadConfig,
    /// Quadrature tolerances for measure moments.
    pub moment_quad: QuadConfig,
    /// Limit-detector tolerances.
    pub limit: LimitConfig,
    /// Orbit length for hyperbolic maps (rates separate exponentially).
    pub hyperbolic_budget: usize,
    /// Orbit length for parabolic maps (rates are polynomial, slower separation).
    pub parabolic_budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            eval_quad: QuadConfig::with_rel_tol(1e-10),
            moment_quad: QuadConfig::with_rel_tol(1e-8),
            limit: LimitConfig::default(),
            hyperbolic_budget: 1_000,
            parabolic_budget: 100_000,
        }
    }
}

impl Config {
    /// Budget for a map of known class.
    pub fn budget_for(&self, hyperbolic: bool) -> usize {
        if hyperbolic {
            self.hyperbolic_budget
        } else {
            self.parabolic_budget
        }
    }
}

/// Serializable view of the tolerances, embedded in CLI reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub eval_rel_tol: f64,
    pub moment_rel_tol: f64,
    pub limit_atol: f64,
    pub limit_rtol: f64,
    pub hyperbolic_budget: usize,
    pub parabolic_budget: usize,
}

impl From<&Config> for ConfigSummary {
    fn from(c: &Config) -> Self {
        Self {
            eval_rel_tol: c.eval_quad.rel_tol,
            moment_rel_tol: c.moment_quad.rel_tol,
            limit_atol: c.limit.atol,
            limit_rtol: c.limit.rtol,
            hyperbolic_budget: c.hyperbolic_budget,
            parabolic_budget: c.parabolic_budget,
        }
    }
}
