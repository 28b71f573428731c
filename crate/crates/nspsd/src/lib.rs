//! Solver for the non-symmetric positive semidefinite Procrustes problem:
//! given X, B ∈ ℝⁿˣᵐ, find A minimizing ‖AX − B‖_F subject to A + Aᵀ ⪰ 0,
//! together with the complex (non-Hermitian) analog over {A : A + A* ⪰ 0}.
//!
//! The solve pipeline reduces the problem over the singular value
//! decomposition of X to a small strongly convex subproblem, runs an
//! accelerated projected gradient method on it, and lifts the subproblem
//! minimizer back to full size — exactly when the infimum is attained, and
//! within a caller-controlled ε when it is not.

pub mod bench;
pub mod complex;
pub mod error;
pub mod io;
pub mod matrix;
pub mod project;
pub mod reduce;
pub mod solver;

pub use complex::{
    embed, hermitian_eigenvalues, nearest_r_structure, nearest_structured_hermitian,
    nearest_structured_skew, nhpsd_check, project_structured_nspsd, solve_complex,
    ComplexSolution, RealEmbedding, StructuredBlocks,
};
pub use error::{Error, Result};
pub use matrix::{svd, sym_eig, ComplexDense, DenseMatrix, SvdFactorization, SymEig};
pub use project::{is_nspsd, nspsd_project, psd_project, ConeMembershipReport};
pub use reduce::{
    lift_epsilon, lift_optimal, reduce, shortcut_negative, solve_rank_one, Attainment,
    ReducedProblem, Solution,
};
pub use solver::{
    fgm, init_block_diagonal, init_scaled_identity, solve, solve_general, InitStrategy,
    IterationTrace, SolveOptions,
};
