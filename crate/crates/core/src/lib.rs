//! Max-correntropy nonnegative matrix factorization for document clustering.
//!
//! The crate factorizes a nonnegative term-document matrix `X ≈ HW` under
//! three objectives: Gaussian-kernel correntropy ([`solver::mcc`]), squared
//! Frobenius error ([`solver::l2`]) and generalized KL divergence
//! ([`solver::kl`]). Around the solvers sit a tf-idf text pipeline
//! ([`text`]), K-means / Kuhn-Munkres clustering evaluation ([`eval`]) and a
//! seeded experiment harness ([`experiment`]).
//!
//! ```
//! use corrnmf::matrix::{reconstruct, DataMatrix};
//! use corrnmf::solver::{factorize, random_factors, SolverConfig};
//!
//! let planted = random_factors(20, 15, 3, 7);
//! let x: DataMatrix = reconstruct(&planted);
//! let fit = factorize(&x, 3, &SolverConfig::default()).unwrap();
//! assert_eq!(fit.factors.w.dim(), (3, 15));
//! ```

pub mod error;
pub mod eval;
pub mod experiment;
pub mod matrix;
pub mod solver;
pub mod text;

pub use error::{Error, Result};
pub use matrix::{DataMatrix, FactorPair};
pub use solver::{factorize, FitResult, Objective, SolverConfig};
