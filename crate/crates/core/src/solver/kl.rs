//! Generalized KL-divergence NMF with the Lee–Seung multiplicative rules.

use ndarray::{Array1, Array2};

use super::{check_rank, multiplicative_step, prepare, random_factors, relative_change};
use super::{FitResult, SolverConfig, EXACT_FIT};
use crate::error::Result;
use crate::matrix::{DataMatrix, FactorPair};

/// Smallest value a reconstructed entry is allowed to take inside a ratio or
/// logarithm.
const MIN_PRODUCT: f64 = 1e-300;

fn product_entry(f: &FactorPair, d: usize, n: usize) -> f64 {
    let mut acc = 0.0;
    for k in 0..f.rank() {
        acc += f.h[[d, k]] * f.w[[k, n]];
    }
    acc
}

/// `Σ x log(x / y) − x + y` over all entries, with `y = HW` and `0 log 0 = 0`.
pub fn kl_divergence(x: &DataMatrix, f: &FactorPair) -> Result<f64> {
    f.check_compatible(x)?;
    let mut total = 0.0;
    for n in 0..x.ncols() {
        for (d, xv) in x.column_entries(n) {
            let y = product_entry(f, d, n).max(MIN_PRODUCT);
            total += xv * (xv / y).ln() - xv;
        }
    }
    // Σ_dn y_dn = Σ_k (Σ_d h_dk)(Σ_n w_kn)
    let h_sums = f.h.sum_axis(ndarray::Axis(0));
    let w_sums = f.w.sum_axis(ndarray::Axis(1));
    Ok(total + h_sums.dot(&w_sums))
}

fn x_mass(x: &DataMatrix) -> f64 {
    (0..x.ncols())
        .flat_map(|n| x.column_entries(n))
        .map(|(_, v)| v)
        .sum()
}

/// `X / HW` evaluated at the stored nonzeros of `X`, as `(row, col, ratio)`.
fn ratios(x: &DataMatrix, f: &FactorPair) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for n in 0..x.ncols() {
        for (d, xv) in x.column_entries(n) {
            out.push((d, n, xv / product_entry(f, d, n).max(MIN_PRODUCT)));
        }
    }
    out
}

/// `H ← H ∘ ((X / HW) Wᵀ) / (1 Wᵀ)`.
pub fn kl_update_h(x: &DataMatrix, f: &FactorPair, denom_eps: f64) -> Result<Array2<f64>> {
    f.check_compatible(x)?;
    let k_max = f.rank();
    let mut numer = Array2::zeros(f.h.raw_dim());
    for (d, n, q) in ratios(x, f) {
        for k in 0..k_max {
            numer[[d, k]] += q * f.w[[k, n]];
        }
    }
    let w_sums: Array1<f64> = f.w.sum_axis(ndarray::Axis(1));
    let denom = Array2::from_shape_fn(f.h.raw_dim(), |(_, k)| w_sums[k]);
    Ok(multiplicative_step(&f.h, &numer, &denom, denom_eps))
}

/// `W ← W ∘ (Hᵀ (X / HW)) / (Hᵀ 1)`.
pub fn kl_update_w(x: &DataMatrix, f: &FactorPair, denom_eps: f64) -> Result<Array2<f64>> {
    f.check_compatible(x)?;
    let k_max = f.rank();
    let mut numer = Array2::zeros(f.w.raw_dim());
    for (d, n, q) in ratios(x, f) {
        for k in 0..k_max {
            numer[[k, n]] += f.h[[d, k]] * q;
        }
    }
    let h_sums: Array1<f64> = f.h.sum_axis(ndarray::Axis(0));
    let denom = Array2::from_shape_fn(f.w.raw_dim(), |(k, _)| h_sums[k]);
    Ok(multiplicative_step(&f.w, &numer, &denom, denom_eps))
}

pub fn kl_factorize(x: &DataMatrix, k: usize, cfg: &SolverConfig) -> Result<FitResult> {
    check_rank(x, k)?;
    kl_factorize_from(x, random_factors(x.nrows(), x.ncols(), k, cfg.seed), cfg)
}

pub fn kl_factorize_from(
    x: &DataMatrix,
    init: FactorPair,
    cfg: &SolverConfig,
) -> Result<FitResult> {
    prepare(x, &init, cfg)?;
    let mut f = init;
    let scale = x_mass(x);
    let mut prev = kl_divergence(x, &f)?;
    let mut trace = Vec::new();
    let mut converged = false;
    while trace.len() < cfg.max_iters {
        f.h = kl_update_h(x, &f, cfg.denom_eps)?;
        f.w = kl_update_w(x, &f, cfg.denom_eps)?;
        let cur = kl_divergence(x, &f)?;
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
