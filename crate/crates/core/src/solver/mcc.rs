//! Max-correntropy NMF.
//!
//! The Gaussian-kernel correntropy `Σ_d exp(−r_d² / σ²)` between `X` and
//! `HW`, with `r_d` the residual norm of feature row `d`, is maximized by
//! alternating two steps:
//!
//! * E-step: anneal the bandwidth from the current total residual,
//!   `σ = sqrt(θ / 2D · ‖X − HW‖²)`, and set the half-quadratic auxiliary
//!   weights to their closed form `ρ_d = −exp(−r_d² / σ²)`.
//! * M-step: with `ρ` fixed, decrease the weighted squared error
//!   `Tr[(X − HW)ᵀ diag(−ρ) (X − HW)]` by one multiplicative update of `H`,
//!   then one of `W` using the new `H`.
//!
//! Rows with large residuals get weights near zero, which is what makes the
//! factorization robust to corrupted features.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{check_rank, multiplicative_step, prepare, random_factors, relative_change, row_gram};
use super::{FitResult, SolverConfig};
use crate::error::{Axis, Error, Result};
use crate::matrix::{row_residual_sq, weighted_gram, weighted_ht_x, weighted_x_wt};
use crate::matrix::{DataMatrix, FactorPair};

/// Auxiliary variables of the half-quadratic scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCState {
    /// One weight per feature row, each in `[−1, 0)`.
    pub rho: Vec<f64>,
    pub sigma: f64,
    pub theta: f64,
    pub iter: usize,
}

impl McCState {
    /// Positive row weights `−ρ`.
    pub fn weights(&self) -> Vec<f64> {
        self.rho.iter().map(|r| -r).collect()
    }

    fn check(&self, x: &DataMatrix) -> Result<()> {
        if self.rho.len() != x.nrows() {
            return Err(Error::DimensionMismatch {
                axis: Axis::Rows,
                expected: x.nrows(),
                found: self.rho.len(),
            });
        }
        if let Some(r) = self.rho.iter().find(|&&r| !(-1.0..0.0).contains(&r)) {
            return Err(Error::InvalidConfig(format!(
                "auxiliary weight {r} outside [-1, 0)"
            )));
        }
        Ok(())
    }
}

/// Gaussian-kernel correntropy `Σ_d exp(−r_d² / σ²)`, a value in `(0, D]`.
pub fn mcc_objective(x: &DataMatrix, f: &FactorPair, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidBandwidth(sigma));
    }
    f.check_compatible(x)?;
    let s2 = sigma * sigma;
    Ok(row_residual_sq(x, f)
        .iter()
        .map(|r2| (-r2 / s2).exp())
        .sum())
}

/// Weighted squared error `Σ_d (−ρ_d) r_d²` that the M-step decreases.
pub fn mcc_surrogate(x: &DataMatrix, f: &FactorPair, state: &McCState) -> Result<f64> {
    f.check_compatible(x)?;
    state.check(x)?;
    Ok(row_residual_sq(x, f)
        .iter()
        .zip(&state.rho)
        .map(|(r2, rho)| -rho * r2)
        .sum())
}

/// E-step: annealed bandwidth and closed-form auxiliary weights at the
/// current factors.
pub fn mcc_estep(x: &DataMatrix, f: &FactorPair, theta: f64, sigma_floor: f64) -> Result<McCState> {
    f.check_compatible(x)?;
    let r2 = row_residual_sq(x, f);
    let total: f64 = r2.iter().sum();
    let sigma = (theta / (2.0 * x.nrows() as f64) * total)
        .sqrt()
        .max(sigma_floor);
    let s2 = sigma * sigma;
    // exp underflows to 0 for rows far above the mean residual; keep the
    // weight strictly negative so the row stays in the half-open range.
    let rho = r2
        .iter()
        .map(|r| (-(-r / s2).exp()).min(-f64::MIN_POSITIVE))
        .collect();
    Ok(McCState {
        rho,
        sigma,
        theta,
        iter: 0,
    })
}

/// `H ← H ∘ (diag(−ρ) X Wᵀ) / (diag(−ρ) H W Wᵀ)`.
pub fn mcc_update_h(
    x: &DataMatrix,
    f: &FactorPair,
    state: &McCState,
    denom_eps: f64,
) -> Result<Array2<f64>> {
    f.check_compatible(x)?;
    state.check(x)?;
    let a = state.weights();
    let numer = weighted_x_wt(x, &f.w, Some(&a));
    let mut denom = f.h.dot(&row_gram(&f.w));
    for (mut row, &ad) in denom.rows_mut().into_iter().zip(&a) {
        row.mapv_inplace(|v| ad * v);
    }
    Ok(multiplicative_step(&f.h, &numer, &denom, denom_eps))
}

/// `W ← W ∘ (Hᵀ diag(−ρ) X) / (Hᵀ diag(−ρ) H W)`; call with the already
/// updated `H`.
pub fn mcc_update_w(
    x: &DataMatrix,
    f: &FactorPair,
    state: &McCState,
    denom_eps: f64,
) -> Result<Array2<f64>> {
    f.check_compatible(x)?;
    state.check(x)?;
    let a = state.weights();
    let numer = weighted_ht_x(&f.h, x, Some(&a));
    let denom = weighted_gram(&f.h, Some(&a)).dot(&f.w);
    Ok(multiplicative_step(&f.w, &numer, &denom, denom_eps))
}

/// One EM iteration and the correntropy before and after its M-step, both
/// evaluated at the bandwidth chosen by its E-step.
#[derive(Debug, Clone)]
pub struct McCIteration {
    pub state: McCState,
    pub factors: FactorPair,
    pub objective_before: f64,
    pub objective_after: f64,
}

pub fn mcc_iteration(x: &DataMatrix, f: &FactorPair, cfg: &SolverConfig) -> Result<McCIteration> {
    let state = mcc_estep(x, f, cfg.theta, cfg.sigma_floor)?;
    let objective_before = mcc_objective(x, f, state.sigma)?;
    let mut next = f.clone();
    next.h = mcc_update_h(x, &next, &state, cfg.denom_eps)?;
    next.w = mcc_update_w(x, &next, &state, cfg.denom_eps)?;
    let objective_after = mcc_objective(x, &next, state.sigma)?;
    Ok(McCIteration {
        state,
        factors: next,
        objective_before,
        objective_after,
    })
}

pub fn mcc_factorize(x: &DataMatrix, k: usize, cfg: &SolverConfig) -> Result<FitResult> {
    check_rank(x, k)?;
    mcc_factorize_from(x, random_factors(x.nrows(), x.ncols(), k, cfg.seed), cfg)
}

/// Runs EM from `init`. The E-steps anneal the bandwidth, but the trace
/// (and the stopping rule) use the correntropy at a fixed reference
/// bandwidth, the one chosen by the first E-step, so values from different
/// iterations are comparable.
pub fn mcc_factorize_from(
    x: &DataMatrix,
    init: FactorPair,
    cfg: &SolverConfig,
) -> Result<FitResult> {
    prepare(x, &init, cfg)?;
    let mut f = init;
    let mut trace: Vec<f64> = Vec::new();
    let mut state: Option<McCState> = None;
    let mut reference = None;
    let mut prev = 0.0;
    let mut converged = false;
    while trace.len() < cfg.max_iters {
        let step = mcc_iteration(x, &f, cfg)?;
        let sigma_ref = match reference {
            Some(s) => s,
            None => {
                prev = step.objective_before;
                *reference.insert(step.state.sigma)
            }
        };
        let cur = mcc_objective(x, &step.factors, sigma_ref)?;
        let mut s = step.state;
        s.iter = trace.len();
        state = Some(s);
        f = step.factors;
        trace.push(cur);
        if relative_change(prev, cur) < cfg.rel_tol {
            converged = true;
            break;
        }
        prev = cur;
    }
    if cfg.normalize {
        f.normalize_basis();
    }
    Ok(FitResult {
        config: cfg.clone(),
        factors: f,
        iterations_run: trace.len(),
        objective_trace: trace,
        converged,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::reconstruct;
    use crate::solver::l2::{l2_update_h, l2_update_w};
    use ndarray::array;

    fn scalar(x: f64, h: f64, w: f64) -> (DataMatrix, FactorPair) {
        (
            DataMatrix::from_dense(array![[x]]).unwrap(),
            FactorPair::new(array![[h]], array![[w]]).unwrap(),
        )
    }

    fn unit_state(d: usize) -> McCState {
        McCState {
            rho: vec![-1.0; d],
            sigma: 1.0,
            theta: 1.0,
            iter: 0,
        }
    }

    #[test]
    fn objective_examples() {
        let f = random_factors(4, 5, 2, 1);
        let x = reconstruct(&f);
        assert_eq!(mcc_objective(&x, &f, 0.3).unwrap(), 4.0);
        // single row with r = σ = 2
        let (x, f) = scalar(3.0, 1.0, 1.0);
        assert!((mcc_objective(&x, &f, 2.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert!(matches!(
            mcc_objective(&x, &f, 0.0),
            Err(Error::InvalidBandwidth(_))
        ));
        assert!(mcc_objective(&x, &f, -1.0).is_err());
    }

    #[test]
    fn estep_scalar_case() {
        let (x, f) = scalar(2.0, 1.0, 1.0);
        let s = mcc_estep(&x, &f, 2.0, 1e-8).unwrap();
        assert!((s.sigma - 1.0).abs() < 1e-15);
        assert!((s.rho[0] + (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn estep_exact_factorization_hits_floor() {
        let f = random_factors(6, 4, 2, 8);
        let x = reconstruct(&f);
        let s = mcc_estep(&x, &f, 1.0, 1e-8).unwrap();
        assert_eq!(s.sigma, 1e-8);
        assert!(s.rho.iter().all(|&r| r == -1.0));
    }

    #[test]
    fn estep_weights_follow_residual_order() {
        let x = DataMatrix::Dense(
            random_factors(12, 9, 3, 2)
                .h
                .dot(&random_factors(3, 9, 3, 4).w),
        );
        let f = random_factors(12, 9, 2, 6);
        let s = mcc_estep(&x, &f, 1.0, 1e-8).unwrap();
        let r = crate::matrix::row_residual_norms(&x, &f).unwrap();
        let mut idx: Vec<usize> = (0..12).collect();
        idx.sort_by(|&a, &b| r[a].total_cmp(&r[b]));
        for p in idx.windows(2) {
            assert!(s.rho[p[0]] <= s.rho[p[1]]);
        }
        assert!(s.rho.iter().all(|&r| (-1.0..0.0).contains(&r)));
    }

    #[test]
    fn underflowing_weights_stay_negative() {
        // one huge row among many tiny ones drives exp(-r²/σ²) to zero
        let mut dense = Array2::from_elem((2000, 2), 1e-3);
        dense[[0, 0]] = 1e6;
        let x = DataMatrix::from_dense(dense).unwrap();
        let f = FactorPair::new(Array2::from_elem((2000, 1), 1e-3), array![[1.0, 1.0]]).unwrap();
        let s = mcc_estep(&x, &f, 1.0, 1e-8).unwrap();
        assert!(s.rho[0] < 0.0 && s.rho[0] > -1e-300);
    }

    #[test]
    fn scalar_updates() {
        let (x, f) = scalar(4.0, 1.0, 2.0);
        let h = mcc_update_h(&x, &f, &unit_state(1), 1e-12).unwrap();
        assert!((h[[0, 0]] - 2.0).abs() < 1e-12);
        let (x, f) = scalar(4.0, 2.0, 1.0);
        let w = mcc_update_w(&x, &f, &unit_state(1), 1e-12).unwrap();
        assert!((w[[0, 0]] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unit_weights_reduce_to_l2_rules() {
        let x = DataMatrix::Dense(
            random_factors(7, 6, 3, 21)
                .h
                .dot(&random_factors(3, 6, 3, 22).w),
        );
        let f = random_factors(7, 6, 2, 23);
        let state = unit_state(7);
        assert_eq!(
            mcc_update_h(&x, &f, &state, 1e-12).unwrap(),
            l2_update_h(&x, &f, 1e-12).unwrap()
        );
        assert_eq!(
            mcc_update_w(&x, &f, &state, 1e-12).unwrap(),
            l2_update_w(&x, &f, 1e-12).unwrap()
        );
    }

    #[test]
    fn rejects_bad_state() {
        let (x, f) = scalar(1.0, 1.0, 1.0);
        let mut s = unit_state(1);
        s.rho[0] = 0.0;
        assert!(mcc_update_h(&x, &f, &s, 1e-12).is_err());
        assert!(mcc_update_w(&x, &f, &unit_state(2), 1e-12).is_err());
    }

    #[test]
    fn planted_init_converges_immediately() {
        let f = random_factors(5, 6, 2, 30);
        let x = reconstruct(&f);
        let cfg = SolverConfig {
            normalize: false,
            ..SolverConfig::default()
        };
        let fit = mcc_factorize_from(&x, f.clone(), &cfg).unwrap();
        assert!(fit.converged);
        assert_eq!(fit.iterations_run, 1);
        assert!((fit.objective_trace[0] - 5.0).abs() < 1e-6);
        for (a, b) in fit.factors.w.iter().zip(f.w.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
