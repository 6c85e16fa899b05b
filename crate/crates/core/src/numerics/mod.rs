//! Self-contained numeric kernels: log-Gamma, quadrature rules, dense
//! Hermitian eigensolvers and small helpers built on them.

mod eigen;
mod gamma;
mod matrix;
mod quadrature;

pub use eigen::{
    cholesky, generalized_eigen, hermitian_eigen, hermitian_eigenvalues, numerical_rank,
    symmetric_eigenvalues, trace_difference_bound_check, Eigen, TraceBound, JACOBI_MAX_SWEEPS,
    JACOBI_TOL,
};
pub use gamma::log_gamma;
pub(crate) use gamma::log_half_ratio_asymptotic;
pub use matrix::{matmul, HermitianMatrix, SymmetricMatrix};
pub use quadrature::{legendre_and_derivative, QuadratureKind, QuadratureRule};
