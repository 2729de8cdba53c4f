//! Multiplicative-update NMF solvers.
//!
//! [`mcc`] is the max-correntropy solver (half-quadratic EM with an annealed
//! Gaussian bandwidth); [`l2`] and [`kl`] are the classic Frobenius and
//! generalized-KL baselines. All three share the same configuration, seeded
//! initialization and stopping rule.

pub mod kl;
pub mod l2;
pub mod mcc;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, FactorPair};

pub use mcc::McCState;

/// Loss minimized (or correntropy maximized) by a solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Mcc,
    L2,
    Kl,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::Mcc, Objective::L2, Objective::Kl];

    /// Column label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Objective::Mcc => "MCC",
            Objective::L2 => "L2",
            Objective::Kl => "KL",
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.label())
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mcc" => Ok(Objective::Mcc),
            "l2" => Ok(Objective::L2),
            "kl" => Ok(Objective::Kl),
            other => Err(Error::InvalidConfig(format!("unknown objective {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once the relative objective change drops below this.
    pub rel_tol: f64,
    pub seed: u64,
    /// Annealing factor in the bandwidth update.
    pub theta: f64,
    pub sigma_floor: f64,
    /// Added to every multiplicative-update denominator.
    pub denom_eps: f64,
    pub objective: Objective,
    /// Normalize basis columns to unit length once the run finishes.
    pub normalize: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 200,
            rel_tol: 1e-6,
            seed: 0,
            theta: 1.0,
            sigma_floor: 1e-8,
            denom_eps: 1e-12,
            objective: Objective::Mcc,
            normalize: true,
        }
    }
}

impl SolverConfig {
    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        positive("rel_tol", self.rel_tol)?;
        positive("theta", self.theta)?;
        positive("sigma_floor", self.sigma_floor)?;
        positive("denom_eps", self.denom_eps)
    }
}

/// Outcome of one factorization run.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub config: SolverConfig,
    pub factors: FactorPair,
    /// Objective after each iteration: squared Frobenius error (L2),
    /// generalized KL divergence (KL) or correntropy (MCC).
    pub objective_trace: Vec<f64>,
    pub iterations_run: usize,
    pub converged: bool,
    /// Auxiliary weights and bandwidth of the last E-step (MCC only).
    pub final_state: Option<McCState>,
}

/// JSON form of a [`FitResult`] without the factor matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub config: SolverConfig,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_sigma: Option<f64>,
}

impl FitResult {
    pub fn report(&self) -> FitReport {
        FitReport {
            config: self.config.clone(),
            rank: self.factors.rank(),
            rows: self.factors.rows(),
            cols: self.factors.cols(),
            objective_trace: self.objective_trace.clone(),
            iterations: self.iterations_run,
            converged: self.converged,
            final_sigma: self.final_state.as_ref().map(|s| s.sigma),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.report())?)
    }
}

/// Factorizes `x` at rank `k` with the objective selected in `cfg`.
pub fn factorize(x: &DataMatrix, k: usize, cfg: &SolverConfig) -> Result<FitResult> {
    match cfg.objective {
        Objective::Mcc => mcc::mcc_factorize(x, k, cfg),
        Objective::L2 => l2::l2_factorize(x, k, cfg),
        Objective::Kl => kl::kl_factorize(x, k, cfg),
    }
}

/// Like [`factorize`] but starting from the given factors instead of a
/// random draw.
pub fn factorize_from(x: &DataMatrix, init: FactorPair, cfg: &SolverConfig) -> Result<FitResult> {
    match cfg.objective {
        Objective::Mcc => mcc::mcc_factorize_from(x, init, cfg),
        Objective::L2 => l2::l2_factorize_from(x, init, cfg),
        Objective::Kl => kl::kl_factorize_from(x, init, cfg),
    }
}

/// Checks `1 <= k <= min(D, N)` and a non-empty matrix.
pub fn check_rank(x: &DataMatrix, k: usize) -> Result<()> {
    let (rows, cols) = (x.nrows(), x.ncols());
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix { rows, cols });
    }
    let max = rows.min(cols);
    if k == 0 || k > max {
        return Err(Error::InvalidRank { k, max });
    }
    Ok(())
}

/// Random factors with entries i.i.d. uniform on (0, 1]; `H` is drawn
/// first (row-major), then `W`.
pub fn random_factors(rows: usize, cols: usize, k: usize, seed: u64) -> FactorPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || 1.0 - rng.gen::<f64>();
    let h = Array2::from_shape_simple_fn((rows, k), &mut draw);
    let w = Array2::from_shape_simple_fn((k, cols), &mut draw);
    FactorPair { h, w }
}

pub(crate) fn prepare(x: &DataMatrix, init: &FactorPair, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    check_rank(x, init.rank())?;
    init.check_compatible(x)
}

/// Objective values at or below this fraction of the data's own scale count
/// as an exact fit.
pub(crate) const EXACT_FIT: f64 = 1e-20;

/// Relative change between consecutive objective values.
pub(crate) fn relative_change(prev: f64, cur: f64) -> f64 {
    if prev == cur {
        0.0
    } else {
        (cur - prev).abs() / prev.abs().max(f64::MIN_POSITIVE)
    }
}

/// `W Wᵀ` (K×K).
pub(crate) fn row_gram(w: &Array2<f64>) -> Array2<f64> {
    let k_max = w.nrows();
    let mut out = Array2::zeros((k_max, k_max));
    for i in 0..k_max {
        for j in 0..k_max {
            out[[i, j]] = w.row(i).dot(&w.row(j));
        }
    }
    out
}

/// `base * numer / (denom + eps)` elementwise.
pub(crate) fn multiplicative_step(
    base: &Array2<f64>,
    numer: &Array2<f64>,
    denom: &Array2<f64>,
    eps: f64,
) -> Array2<f64> {
    let mut out = base.clone();
    ndarray::Zip::from(&mut out)
        .and(numer)
        .and(denom)
        .for_each(|o, &n, &d| *o *= n / (d + eps));
    out
}
