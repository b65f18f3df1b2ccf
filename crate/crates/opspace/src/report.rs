//! Serializable reports. Field order is declaration order, so output is
//! deterministic for a fixed configuration and seed.

use serde::Serialize;

use opspace_core::matrix::ToleranceConfig;

pub const SCHEMA: &str = "opspace/1";

/// One named check: a residual against a tolerance, or a boolean verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn residual(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            pass: value <= tolerance,
            value: Some(value),
            tolerance: Some(tolerance),
            detail: None,
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            value: None,
            tolerance: None,
            detail: Some(detail.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: &'static str) -> Self {
        Self {
            suite,
            pass: true,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub structural_tol: f64,
    pub iterative_tol: f64,
    pub max_iterations: usize,
}

impl From<&ToleranceConfig> for Tolerances {
    fn from(cfg: &ToleranceConfig) -> Self {
        Self {
            structural_tol: cfg.structural_tol,
            iterative_tol: cfg.iterative_tol,
            max_iterations: cfg.max_iterations,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub n: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceRow {
    pub pair: String,
    pub a: String,
    pub b: String,
    pub n: usize,
    pub forward_lower: f64,
    pub inverse_lower: f64,
    pub product_lower: f64,
    pub closed_form: Option<f64>,
    pub diverging: bool,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub n: usize,
    pub seed: u64,
    pub levels: usize,
    pub samples: usize,
    pub tolerances: Tolerances,
    /// No lower bound exceeds its closed form.
    pub pass: bool,
    pub entries: Vec<DistanceRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub n: usize,
    pub i_r: usize,
    pub i_l: usize,
    pub components: Vec<usize>,
    pub verdict: String,
    pub tro: &'static str,
    pub warnings: Vec<String>,
}
