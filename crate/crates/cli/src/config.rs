//! Experiment configuration: one TOML file with nested key blocks. Complex
//! matrix entries are written as `[re, im]` pairs, row-major.

use std::path::Path;

use hcma_core::linalg::CMat;
use hcma_core::solver::SolverConfig;
use hcma_core::torus::{PotentialKind, TorusDomain};
use num_complex::Complex64;
use serde::Deserialize;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainBlock,
    pub boundary: BoundaryBlock,
    pub convexity: ConvexityBlock,
    pub solver: SolverBlock,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainBlock {
    pub n: usize,
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
    #[serde(default)]
    pub y_invariant: bool,
    /// n×n complex Hermitian positive definite, entries `[re, im]` row-major.
    pub metric_b: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryBlock {
    pub t0: PotentialBlock,
    pub t1: PotentialBlock,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialBlock {
    pub kind: String,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexityBlock {
    /// n×n complex symmetric section, entries `[re, im]` row-major.
    pub s: Vec<Vec<[f64; 2]>>,
    pub mu: f64,
    #[serde(default)]
    pub delta: f64,
    pub p_list: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub epsilon: f64,
    pub newton_tol: Option<f64>,
    pub max_newton: Option<usize>,
    pub sigma_step: Option<f64>,
    pub sigma_min_step: Option<f64>,
    pub damping: Option<f64>,
    pub max_backtrack: Option<usize>,
    pub ellipticity_guard: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub eps_list: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default = "default_dir")]
    pub dir: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_dir() -> String {
    "out".into()
}

fn default_formats() -> Vec<String> {
    vec!["csv".into()]
}

fn matrix_from(entries: &[Vec<[f64; 2]>], n: usize, what: &str) -> Result<CMat, ConfigError> {
    if entries.len() != n || entries.iter().any(|row| row.len() != n) {
        return Err(err(format!("{what} must be {n}x{n} of [re, im] pairs")));
    }
    Ok(CMat::from_fn(n, n, |i, j| {
        Complex64::new(entries[i][j][0], entries[i][j][1])
    }))
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|e| err(format!("cannot parse {}: {e}", path.display())))?;
        Ok(cfg)
    }

    pub fn build_domain(&self) -> Result<TorusDomain, ConfigError> {
        let d = &self.domain;
        let b = matrix_from(&d.metric_b, d.n, "metric_b")?;
        TorusDomain::new(d.n, b, d.nx, d.ny, d.nt, d.y_invariant).map_err(|e| err(e.to_string()))
    }

    pub fn build_section(&self) -> Result<CMat, ConfigError> {
        let s = matrix_from(&self.convexity.s, self.domain.n, "s")?;
        let defect = hcma_core::linalg::symmetric_defect(&s);
        if defect > 1e-12 * (1.0 + hcma_core::linalg::sup_norm(&s)) {
            return Err(err(format!("section s must be symmetric (defect {defect:.3e})")));
        }
        if !self.convexity.mu.is_finite() {
            return Err(err("mu must be finite"));
        }
        if self.convexity.delta < 0.0 || !self.convexity.delta.is_finite() {
            return Err(err("delta must be finite and nonnegative"));
        }
        if self.convexity.p_list.is_empty() || self.convexity.p_list.iter().any(|&p| p < 1) {
            return Err(err("p_list must be nonempty with entries >= 1"));
        }
        Ok(s)
    }

    pub fn potential_kind(block: &PotentialBlock) -> Result<PotentialKind, ConfigError> {
        match block.kind.as_str() {
            "cosine_x" => Ok(PotentialKind::CosineX),
            "cosine_y" => Ok(PotentialKind::CosineY),
            "cosine_mix" => Ok(PotentialKind::CosineMix),
            other => Err(err(format!(
                "unknown potential kind '{other}' (expected cosine_x, cosine_y or cosine_mix)"
            ))),
        }
    }

    pub fn build_boundary(&self, dom: &TorusDomain) -> Result<(Vec<f64>, Vec<f64>), ConfigError> {
        let mut out = Vec::with_capacity(2);
        for block in [&self.boundary.t0, &self.boundary.t1] {
            let kind = Self::potential_kind(block)?;
            if kind == PotentialKind::CosineY && dom.y_invariant() {
                return Err(err("cosine_y boundary data requires y_invariant = false"));
            }
            if !block.amplitude.is_finite() || !block.phase.is_finite() {
                return Err(err("boundary amplitude and phase must be finite"));
            }
            out.push(hcma_core::torus::sample_boundary(
                kind,
                block.amplitude,
                block.phase,
                dom,
            ));
        }
        let phi1 = out.pop().unwrap();
        let phi0 = out.pop().unwrap();
        Ok((phi0, phi1))
    }

    pub fn solver_config(&self) -> Result<SolverConfig, ConfigError> {
        let s = &self.solver;
        let mut cfg = SolverConfig::new(s.epsilon);
        if let Some(v) = s.newton_tol {
            cfg.newton_tol = v;
        }
        if let Some(v) = s.max_newton {
            cfg.max_newton = v;
        }
        if let Some(v) = s.sigma_step {
            cfg.sigma_step = v;
        }
        if let Some(v) = s.sigma_min_step {
            cfg.sigma_min_step = v;
        }
        if let Some(v) = s.damping {
            cfg.damping = v;
        }
        if let Some(v) = s.max_backtrack {
            cfg.max_backtrack = v;
        }
        if let Some(v) = s.ellipticity_guard {
            cfg.ellipticity_guard = v;
        }
        cfg.validate().map_err(|e| err(e.to_string()))?;
        Ok(cfg)
    }

    pub fn sweep_eps(&self) -> Result<Vec<f64>, ConfigError> {
        let block = self
            .sweep
            .as_ref()
            .ok_or_else(|| err("sweep block missing from config"))?;
        let eps = &block.eps_list;
        if eps.is_empty() {
            return Err(err("eps_list must be nonempty"));
        }
        if eps.iter().any(|&e| e.is_nan() || e <= 0.0) {
            return Err(err("eps_list entries must be positive"));
        }
        if eps.windows(2).any(|w| w[1].is_nan() || w[1] >= w[0]) {
            return Err(err("eps_list must be strictly descending"));
        }
        Ok(eps.clone())
    }
}
