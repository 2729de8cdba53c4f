//! Factorize a planted low-rank matrix with each objective, compare the
//! residuals and round-trip the data through the text snapshot format.
//!
//! cargo run --example factorize_matrix

use corrnmf::matrix::{reconstruct, residual_sq_norm, DataMatrix};
use corrnmf::solver::random_factors;
use corrnmf::{factorize, Objective, SolverConfig};

fn main() -> corrnmf::Result<()> {
    let planted = random_factors(40, 30, 4, 1);
    let x = reconstruct(&planted).to_sparse();
    println!(
        "X: {} x {}, {} stored entries",
        x.nrows(),
        x.ncols(),
        x.nnz()
    );

    for objective in Objective::ALL {
        let cfg = SolverConfig::default()
            .with_objective(objective)
            .with_seed(9);
        let fit = factorize(&x, 4, &cfg)?;
        let rel = residual_sq_norm(&x, &fit.factors)? / x.squared_norm();
        println!(
            "{objective:>3}: {:>3} iterations, converged {}, relative residual {rel:.2e}",
            fit.iterations_run, fit.converged
        );
    }

    let fit = factorize(&x, 4, &SolverConfig::default())?;
    let report = fit.report();
    let trace = &report.objective_trace;
    println!(
        "\nMCC correntropy {:.4} -> {:.4} of {} rows, final sigma {:.3e}",
        trace[0],
        trace[trace.len() - 1],
        report.rows,
        report.final_sigma.unwrap_or(f64::NAN)
    );

    let mut snapshot = Vec::new();
    x.write_snapshot(&mut snapshot).expect("in-memory write");
    let back = DataMatrix::read_snapshot(snapshot.as_slice(), "memory".as_ref())?;
    println!(
        "snapshot round trip equal: {}",
        back.to_dense() == x.to_dense()
    );
    Ok(())
}
