//! Numerical laboratory for geodesics in the space of Kähler potentials over
//! flat complex tori.
//!
//! The strip `[0,1] × ℂⁿ/ℤ²ⁿ` carries a quasilinear elliptic perturbation of
//! the homogeneous complex Monge–Ampère equation; its solutions approximate
//! weak geodesics as the perturbation parameter ε goes to zero. The crate
//! provides, bottom to top:
//!
//! * [`linalg`] — dense complex kernels: Cholesky, Hermitian eigenvalues,
//!   Autonne–Takagi factorization, simultaneous diagonalization.
//! * [`torus`] — the strip × torus grid, finite-difference Hessians, and the
//!   conversion to complex derivative matrices `A = b + φ_{αβ̄}`, `B = φ_{αβ}`.
//! * [`convexity`] — the (S,ω₀)-convexity calculus: the matrix
//!   `K_S = (B−S)Ā⁻¹(B̄−S̄)A⁻¹`, its trace powers `Q^<p>`, modulus and degree
//!   of convexity, block-positivity equivalences, monotonicity and concavity
//!   probes.
//! * [`solver`] — damped Newton inside a boundary-continuity loop, plus an
//!   ε-sweep toward the homogeneous equation.
//! * [`verify`] — turns the convexity-preservation statements into numeric
//!   pass/fail reports on solver output.
//! * [`checks`] — seeded randomized suites for the matrix identities, shared
//!   by the CLI and the acceptance tests.

pub mod checks;
pub mod convexity;
pub mod error;
pub mod linalg;
pub mod par;
pub mod solver;
pub mod torus;
pub mod verify;

pub use error::{DomainError, MatrixError, SolverError};
pub use linalg::{CMat, CVec, RMat};
