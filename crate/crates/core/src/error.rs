//! Error types shared across the crate.

use thiserror::Error;

/// Failures of the dense matrix kernels.
#[derive(Debug, Clone, Error)]
pub enum MatrixError {
    /// A Cholesky pivot fell at or below the positivity tolerance.
    #[error("matrix is not positive definite: pivot {pivot:.3e} at index {index} (tol {tol:.3e})")]
    NotPositiveDefinite { index: usize, pivot: f64, tol: f64 },

    /// `‖H − H*‖∞` exceeded the Hermitian tolerance.
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tol {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    /// `‖S − Sᵀ‖∞` exceeded the symmetry tolerance.
    #[error("matrix is not symmetric: defect {defect:.3e} exceeds tol {tol:.3e}")]
    NotSymmetric { defect: f64, tol: f64 },

    /// The iterative eigensolver did not converge.
    #[error("eigensolver failed to converge for a {size}x{size} matrix")]
    EigenFailed { size: usize },
}

/// Invalid domain or grid parameters.
#[derive(Debug, Clone, Error)]
pub enum DomainError {
    #[error("complex dimension must be 1 or 2, got {0}")]
    BadDimension(usize),

    #[error("metric must be a Hermitian positive definite {n}x{n} matrix: {reason}")]
    BadMetric { n: usize, reason: String },

    #[error("grid sizes must satisfy nx, ny >= 8 and even, nt >= 2 (got nx={nx}, ny={ny}, nt={nt})")]
    BadGrid { nx: usize, ny: usize, nt: usize },

    #[error("field length {got} does not match grid ({want})")]
    BadFieldLength { got: usize, want: usize },

    #[error("non-finite value in field at row {it}, spatial index {s}")]
    NonFinite { it: usize, s: usize },
}

/// Failures of the PDE solve.
#[derive(Debug, Clone, Error)]
pub enum SolverError {
    /// The metric `A = b + φ_{αβ̄}` lost its positivity guard somewhere on the grid.
    #[error("ellipticity lost: min eig(A) = {min_eig:.3e} <= guard {guard:.3e} at row {it}")]
    EllipticityLost { min_eig: f64, guard: f64, it: usize },

    /// Newton ran out of iterations or could not find an acceptable step.
    #[error("Newton did not converge after {iterations} iterations (residual {residual:.3e})")]
    NewtonDiverged { iterations: usize, residual: f64 },

    /// The boundary-scale march underflowed its minimum step.
    #[error("continuity march stalled at sigma = {sigma:.6} (step {step:.3e} below minimum)")]
    ContinuityStalled { sigma: f64, step: f64 },

    /// Boundary data failed the strict convexity precondition.
    #[error("boundary slice at t={t_end} is not strictly convex: min eig(A) = {min_eig_a:.6e}, max eig(K_S) = {max_eig_k:.6e}")]
    BoundaryNotConvex { t_end: u8, min_eig_a: f64, max_eig_k: f64 },

    /// Inner linear solve broke down beyond recovery.
    #[error("linear solve failed: relative residual {achieved:.3e} after {iters} iterations")]
    LinearSolveFailed { achieved: f64, iters: usize },

    #[error("invalid solver configuration: {0}")]
    BadConfig(String),

    #[error(transparent)]
    Matrix(#[from] MatrixError),

    #[error(transparent)]
    Domain(#[from] DomainError),
}
