//! Numerical laboratory for Eringen's nonlocal elasticity model in one
//! dimension.
//!
//! The crate assembles the nonlocal bilinear form
//! `a(u, v) = C ∫∫ Ã(|x - x'|) u'(x) v'(x') dx' dx` on conforming P1/P2
//! finite-element spaces over `(0, 1)` with homogeneous Dirichlet conditions,
//! for four interaction kernels:
//!
//! * the smooth cubic kernel `1 - d² + d³/3`, whose form is not coercive in
//!   any Sobolev space (the discrete Rayleigh quotient decays like `h²`),
//! * the linear kernel `1 - d`, for which the form is exactly twice the
//!   `L²` inner product,
//! * the Riesz potential `d^(α-1) / c_α`, coercive in `H^s_0` with
//!   `s = 1 - α/2`,
//! * the "half" Riesz potential of order `α/2`, used by the heterogeneous
//!   (spatially varying stiffness) form.
//!
//! Everything is dense: the nonlocal stiffness matrix couples every pair of
//! degrees of freedom. Row-parallel assembly runs on rayon when the
//! `parallel` feature is enabled (default) and falls back to plain
//! iterators otherwise; results are bit-identical either way.

pub mod assembly;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod kernels;
pub mod linalg;
pub mod mesh;
pub mod par;
pub mod profile;
pub mod quadrature;
pub mod special;

pub use assembly::{
    assemble_heterogeneous, assemble_mixture, assemble_nonlocal_stiffness, nonlocal_strain,
    OuterDomainMode,
};
pub use dense::{SymMatrix, Vector};
pub use error::{Error, Result};
pub use kernels::KernelSpec;
pub use linalg::{
    cholesky, fractional_mass, gen_eig_extremes, solve_spd, sym_eig, CholeskyFactor,
    GenEigExtremes, SymEigen,
};
pub use mesh::{
    assemble_load, assemble_mass_l2, assemble_stiffness_local, build_space, eval_fem, l2_error,
    FemSpace, Mesh1D,
};
pub use profile::StiffnessProfile;
pub use special::{gamma, riesz_constant};
