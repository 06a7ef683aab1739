//! Sparse portfolio selection toolkit.
//!
//! Builds mean-variance portfolio models with an lp quasi-norm (0 < p < 1)
//! sparsity penalty, solves them with an affine-scaling trust-region
//! interior-point method that certifies scaled second-order KKT conditions,
//! and ships the surrounding apparatus: sparsity diagnostics (projected
//! variances, marginal costs of sparsity, projected correlation/Sharpe),
//! an exact cardinality-constrained oracle at desk scale, and a
//! rolling-window backtest engine.

pub mod backtest;
pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod market;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod toy;
pub mod trust_region;

pub use error::{Error, Result};
