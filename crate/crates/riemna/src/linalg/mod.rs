//! Dense small-matrix kernels: storage, symmetric eigendecomposition,
//! positive-diagonal QR, spectral matrix functions, and linear solves.
//!
//! Everything here is pure and allocation-per-call; matrices in scope are
//! small enough (≤ ~1000²) that clarity and exact contracts win over blocking
//! or SIMD.

mod eig;
mod matrix;
mod qr;
mod solve;
mod spd;

pub use eig::{sym_eig, SymEig};
pub use matrix::DenseMatrix;
pub use qr::{qf, qr_positive};
pub use solve::{inverse, lu_solve, solve_stiefel_inverse_system};
pub use spd::{check_spd, expm_sym, inv_spd, logm, sqrtm, sqrtm_inv};
