//! Frobenius-norm NMF with the Lee–Seung multiplicative rules.

use ndarray::Array2;

use super::{check_rank, FitResult, SolverConfig, EXACT_FIT};
use super::{multiplicative_step, prepare, random_factors, relative_change, row_gram};
use crate::error::Result;
use crate::matrix::{residual_sq_norm, weighted_gram, weighted_ht_x, weighted_x_wt};
use crate::matrix::{DataMatrix, FactorPair};

/// `H ← H ∘ (X Wᵀ) / (H W Wᵀ)`.
pub fn l2_update_h(x: &DataMatrix, f: &FactorPair, denom_eps: f64) -> Result<Array2<f64>> {
    f.check_compatible(x)?;
    let numer = weighted_x_wt(x, &f.w, None);
    let denom = f.h.dot(&row_gram(&f.w));
    Ok(multiplicative_step(&f.h, &numer, &denom, denom_eps))
}

/// `W ← W ∘ (Hᵀ X) / (Hᵀ H W)`.
pub fn l2_update_w(x: &DataMatrix, f: &FactorPair, denom_eps: f64) -> Result<Array2<f64>> {
    f.check_compatible(x)?;
    let numer = weighted_ht_x(&f.h, x, None);
    let denom = weighted_gram(&f.h, None).dot(&f.w);
    Ok(multiplicative_step(&f.w, &numer, &denom, denom_eps))
}

pub fn l2_factorize(x: &DataMatrix, k: usize, cfg: &SolverConfig) -> Result<FitResult> {
    check_rank(x, k)?;
    l2_factorize_from(x, random_factors(x.nrows(), x.ncols(), k, cfg.seed), cfg)
}

pub fn l2_factorize_from(
    x: &DataMatrix,
    init: FactorPair,
    cfg: &SolverConfig,
) -> Result<FitResult> {
    prepare(x, &init, cfg)?;
    let mut f = init;
    let scale = x.squared_norm();
    let mut prev = residual_sq_norm(x, &f)?;
    let mut trace = Vec::new();
    let mut converged = false;
    while trace.len() < cfg.max_iters {
        f.h = l2_update_h(x, &f, cfg.denom_eps)?;
        f.w = l2_update_w(x, &f, cfg.denom_eps)?;
        let cur = residual_sq_norm(x, &f)?;
        trace.push(cur);
        if relative_change(prev, cur) < cfg.rel_tol || cur <= EXACT_FIT * scale {
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
        final_state: None,
    })
}
