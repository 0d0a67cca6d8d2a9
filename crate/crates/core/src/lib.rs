//! Stochastically monotone Markov chains on finite ordered state spaces.
//!
//! A [`FiniteKernel`] is a row-stochastic matrix indexed by an
//! [`OrderedStateSpace`]. Every kernel drives its chain through the
//! generalized-inverse recursion `X_n = G(X_{n-1}, U_n)`, which keeps coupled
//! paths ordered whenever the kernel is stochastically monotone. The crate
//! provides structural checks, exact curve computations, seeded Monte Carlo
//! over that coupling, and a set of reference models.

pub mod analysis;
pub mod check;
pub mod error;
pub mod ginv;
pub mod kernel;
pub mod matrix;
pub mod sim;
pub mod space;
pub mod zoo;

pub use analysis::{
    certify_shape, covariance_curve, difference_curve, four_point_check, stationary,
    supermod_curve, three_point_check, transient_mean_curve, transient_variance_curve, Curve,
    Distribution, InequalityCheck, ShapeCertificate,
};
pub use check::{
    check_closure, check_condition1, check_ginv_monotone, check_kernel, check_stoch_monotone,
    check_supermodular, CheckReport, ClosureReport, Witness,
};
pub use error::{Error, Result};
pub use ginv::{build_ginv, GeneralizedInverseTable};
pub use kernel::{FiniteKernel, KernelSequence};
pub use matrix::Matrix;
pub use sim::{simulate_coupled, simulate_coupled_seq, CoupledPaths, Estimate, PathEnsemble};
pub use space::OrderedStateSpace;
