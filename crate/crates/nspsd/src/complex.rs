//! Complex (non-Hermitian PSD) Procrustes via real embeddings.
//!
//! A complex matrix Z = Z_r + iZ_j embeds as the real block matrix
//! R(Z) = [[Z_r, Z_j], [−Z_j, Z_r]]. The embedding is a ring homomorphism
//! (R(Z)R(W) = R(ZW)) and scales Frobenius norms by √2, so the complex
//! problem min ‖AX−B‖_F over {A : A+A* ⪰ 0} turns into real problems over
//! 2n×2n matrices. When R(X) has full column rank the unconstrained-structure
//! real solution is automatically R-structured at the optimum and the complex
//! solution is read off the blocks; otherwise the iteration runs with a
//! projection onto the R-structured cone directly.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::matrix::{skew_part, svd, sym_eig, sym_part, ComplexDense, DenseMatrix};
use crate::project::{psd_project, ConeMembershipReport};
use crate::reduce::Attainment;
use crate::solver::{fgm_with_projection, init_scaled_identity, solve, InitStrategy, SolveOptions};

/// The real 2n×2m image [[Z_r, Z_j], [−Z_j, Z_r]] of a complex n×m matrix.
#[derive(Clone, Debug)]
pub struct RealEmbedding {
    pub matrix: DenseMatrix,
}

impl RealEmbedding {
    /// Rows of the embedded complex matrix (half the real row count).
    pub fn complex_rows(&self) -> usize {
        self.matrix.rows() / 2
    }

    pub fn complex_cols(&self) -> usize {
        self.matrix.cols() / 2
    }
}

/// The four n×n blocks of a square 2n×2n real matrix.
#[derive(Clone, Debug)]
pub struct StructuredBlocks {
    pub a1: DenseMatrix,
    pub a2: DenseMatrix,
    pub a3: DenseMatrix,
    pub a4: DenseMatrix,
}

impl StructuredBlocks {
    pub fn new(
        a1: DenseMatrix,
        a2: DenseMatrix,
        a3: DenseMatrix,
        a4: DenseMatrix,
    ) -> Result<Self> {
        let shape = a1.shape();
        if shape.0 != shape.1 {
            return Err(Error::Dimension(format!(
                "blocks must be square, got {}x{}",
                shape.0, shape.1
            )));
        }
        for (name, b) in [("a2", &a2), ("a3", &a3), ("a4", &a4)] {
            if b.shape() != shape {
                return Err(Error::Dimension(format!(
                    "block {name} is {}x{} but a1 is {}x{}",
                    b.rows(),
                    b.cols(),
                    shape.0,
                    shape.1
                )));
            }
        }
        Ok(StructuredBlocks { a1, a2, a3, a4 })
    }

    /// Split a square even-dimensioned matrix into its four blocks.
    pub fn from_matrix(m: &DenseMatrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols || rows % 2 != 0 {
            return Err(Error::Dimension(format!(
                "expected a square even-dimensioned matrix, got {rows}x{cols}"
            )));
        }
        let n = rows / 2;
        Ok(StructuredBlocks {
            a1: m.block(0, 0, n, n),
            a2: m.block(0, n, n, n),
            a3: m.block(n, 0, n, n),
            a4: m.block(n, n, n, n),
        })
    }

    pub fn assemble(&self) -> DenseMatrix {
        let n = self.a1.rows();
        let mut out = DenseMatrix::zeros(2 * n, 2 * n);
        out.set_block(0, 0, &self.a1);
        out.set_block(0, n, &self.a2);
        out.set_block(n, 0, &self.a3);
        out.set_block(n, n, &self.a4);
        out
    }
}

/// Build the real embedding [[Z_r, Z_j], [−Z_j, Z_r]].
pub fn embed(z: &ComplexDense) -> RealEmbedding {
    let (n, m) = z.re.shape();
    let mut matrix = DenseMatrix::zeros(2 * n, 2 * m);
    matrix.set_block(0, 0, &z.re);
    matrix.set_block(0, m, &z.im);
    matrix.set_block(n, 0, &z.im.scale(-1.0));
    matrix.set_block(n, m, &z.re);
    RealEmbedding { matrix }
}

/// Hermitian part (A + A*)/2 of a square complex matrix.
fn hermitian_part(a: &ComplexDense) -> Result<ComplexDense> {
    Ok(a.add(&a.adjoint()).scale(0.5))
}

/// Membership of a square complex matrix in {A : A + A* ⪰ 0}, decided on the
/// real embedding (A is a member exactly when R(A) is). The reported minimum
/// eigenvalue is that of the Hermitian part A + A*; the default tolerance is
/// relative to the embedded norm √2‖A‖_F.
pub fn nhpsd_check(a: &ComplexDense, tol: Option<f64>) -> Result<ConeMembershipReport> {
    if a.re.rows() != a.re.cols() {
        return Err(Error::Dimension(format!(
            "membership requires a square matrix, got {}x{}",
            a.re.rows(),
            a.re.cols()
        )));
    }
    crate::project::is_nspsd(&embed(a).matrix, tol)
}

/// Eigenvalues (descending) of a Hermitian complex matrix, computed from the
/// real embedding: the spectrum of sym(R(H)) is that of H with every
/// eigenvalue doubled, so every other entry is kept.
pub fn hermitian_eigenvalues(h: &ComplexDense) -> Result<Vec<f64>> {
    let (n, m) = h.re.shape();
    if n != m {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {n}x{m}"
        )));
    }
    let herm = hermitian_part(h)?;
    let drift = herm.sub(h).frobenius_norm();
    if drift > 1e-10 * (1.0 + h.frobenius_norm()) {
        return Err(Error::Argument(format!(
            "matrix is not Hermitian: ‖A − (A+A*)/2‖ = {drift:.3e}"
        )));
    }
    let eig = sym_eig(&sym_part(&embed(&herm).matrix)?)?;
    Ok(eig.eigenvalues.into_iter().step_by(2).collect())
}

/// Nearest matrix of the form R(X̃) = [[X̃₁, X̃₂], [−X̃₂, X̃₁]]:
/// X̃ = (A1+A4)/2 + i(A2−A3)/2.
pub fn nearest_r_structure(blocks: &StructuredBlocks) -> Result<ComplexDense> {
    let re = (&blocks.a1 + &blocks.a4).scale(0.5);
    let im = (&blocks.a2 - &blocks.a3).scale(0.5);
    ComplexDense::new(re, im)
}

/// Nearest matrix of the form R(X̃) with X̃ Hermitian:
/// X̃ = (A1_H+A4_H)/2 + i(A2_S−A3_S)/2.
pub fn nearest_structured_hermitian(blocks: &StructuredBlocks) -> Result<ComplexDense> {
    let re = (&sym_part(&blocks.a1)? + &sym_part(&blocks.a4)?).scale(0.5);
    let im = (&skew_part(&blocks.a2)? - &skew_part(&blocks.a3)?).scale(0.5);
    ComplexDense::new(re, im)
}

/// Nearest matrix of the form R(X̃) with X̃ skew-Hermitian:
/// X̃ = (A1_S+A4_S)/2 + i(A2_H−A3_H)/2.
pub fn nearest_structured_skew(blocks: &StructuredBlocks) -> Result<ComplexDense> {
    let re = (&skew_part(&blocks.a1)? + &skew_part(&blocks.a4)?).scale(0.5);
    let im = (&sym_part(&blocks.a2)? - &sym_part(&blocks.a3)?).scale(0.5);
    ComplexDense::new(re, im)
}

/// PSD projection of a Hermitian complex matrix, realized on the real
/// embedding (whose symmetric eigendecomposition carries the complex one with
/// doubled multiplicities). The result is re-structured from the blocks so
/// the R-structure is exact even under eigenvector rounding.
fn hermitian_psd_project(h: &ComplexDense) -> Result<ComplexDense> {
    let projected = psd_project(&embed(h).matrix)?;
    nearest_r_structure(&StructuredBlocks::from_matrix(&projected)?)
}

/// Projection onto the structured cone {R(Y) : Y + Y* ⪰ 0}: first project
/// onto the R-structured subspace, then split X̃ into Hermitian + skew parts
/// and clip the Hermitian part to PSD. The composition is the exact metric
/// projection because the cone's span lies inside the subspace.
pub fn project_structured_nspsd(blocks: &StructuredBlocks) -> Result<StructuredBlocks> {
    let herm = nearest_structured_hermitian(blocks)?;
    let skew = nearest_structured_skew(blocks)?;
    let clipped = hermitian_psd_project(&herm)?;
    let y = clipped.add(&skew);
    let a2 = y.im.clone();
    StructuredBlocks::new(y.re.clone(), a2.clone(), a2.scale(-1.0), y.re)
}

fn project_structured_matrix(m: &DenseMatrix) -> Result<DenseMatrix> {
    Ok(project_structured_nspsd(&StructuredBlocks::from_matrix(m)?)?.assemble())
}

/// Result of the complex solve: the returned matrix, its true objective
/// ‖AX−B‖_F, a certified lower bound on the infimum, and run metadata.
#[derive(Clone, Debug)]
pub struct ComplexSolution {
    pub a: ComplexDense,
    pub objective: f64,
    /// Lower bound on the complex infimum (from the structure-free real
    /// relaxation). Equals the infimum itself on the full-rank path.
    pub lower_bound: f64,
    /// Attainment classification when the full-rank pipeline ran; `None` on
    /// the rank-deficient path, where no attainment claim is made.
    pub attained: Option<Attainment>,
    pub iterations: usize,
    pub diagnostics: BTreeMap<String, f64>,
}

/// Complex objective ‖AX − B‖_F computed directly.
fn complex_objective(a: &ComplexDense, x: &ComplexDense, b: &ComplexDense) -> f64 {
    a.mul(x).sub(b).frobenius_norm()
}

/// Solve min ‖AX−B‖_F over {A : A + A* ⪰ 0} for complex X, B (n×m, n ≥ m).
///
/// When the embedded R(X) has full column rank the structure-free real
/// problem is solved and the complex solution extracted from its blocks
/// (which the optimum makes R-structured up to solver tolerance, removed by
/// symmetrization). Otherwise the iteration runs on the embedded problem
/// with the structured-cone projection, and the structure-free optimum
/// provides a lower bound on the infimum.
pub fn solve_complex(
    x: &ComplexDense,
    b: &ComplexDense,
    opts: &SolveOptions,
) -> Result<ComplexSolution> {
    opts.validate()?;
    let (n, m) = x.re.shape();
    if b.re.shape() != (n, m) {
        return Err(Error::Dimension(format!(
            "x is {n}x{m} but b is {}x{}",
            b.re.rows(),
            b.re.cols()
        )));
    }
    if n < m {
        return Err(Error::Unsupported(format!(
            "complex solve requires at least as many rows as columns, got {n}x{m}"
        )));
    }
    x.check_finite()?;
    b.check_finite()?;

    let rx = embed(x);
    let rb = embed(b);
    let rank = svd(&rx.matrix, opts.rank_tolerance)?.numeric_rank;

    if rank == 2 * m {
        let sol = solve(&rx.matrix, &rb.matrix, opts)?;
        let blocks = StructuredBlocks::from_matrix(&sol.a)?;
        let asym_1 = (&blocks.a1 - &blocks.a4).frobenius_norm();
        let asym_2 = (&blocks.a2 + &blocks.a3).frobenius_norm();
        let a = nearest_r_structure(&blocks)?;
        let objective = complex_objective(&a, x, b);
        let mut diagnostics = sol.diagnostics;
        diagnostics.insert("structure_residual_1".into(), asym_1);
        diagnostics.insert("structure_residual_2".into(), asym_2);
        diagnostics.insert(
            "embedded_objective_over_sqrt2".into(),
            sol.objective / 2f64.sqrt(),
        );
        return Ok(ComplexSolution {
            a,
            objective,
            lower_bound: sol.infimum_value / 2f64.sqrt(),
            attained: Some(sol.attained),
            iterations: sol.iterations,
            diagnostics,
        });
    }

    solve_complex_structured_with_bound(x, b, &rx, &rb, opts)
}

/// The rank-deficient path: FGM on the embedded problem with the structured
/// projection, plus the structure-free solve for a lower bound.
fn solve_complex_structured_with_bound(
    x: &ComplexDense,
    b: &ComplexDense,
    rx: &RealEmbedding,
    rb: &RealEmbedding,
    opts: &SolveOptions,
) -> Result<ComplexSolution> {
    let started = Instant::now();
    let relaxed = solve(&rx.matrix, &rb.matrix, opts)?;
    let lower_bound = relaxed.objective / 2f64.sqrt();

    let (a, iterations, restarts) = solve_complex_structured(&rx.matrix, &rb.matrix, opts)?;
    let objective = complex_objective(&a, x, b);

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("restarts".into(), restarts as f64);
    diagnostics.insert("lower_bound".into(), lower_bound);
    diagnostics.insert("bound_gap".into(), objective - lower_bound);
    diagnostics.insert("runtime_seconds".into(), started.elapsed().as_secs_f64());
    Ok(ComplexSolution {
        a,
        objective,
        lower_bound,
        attained: None,
        iterations,
        diagnostics,
    })
}

/// FGM over the structured cone on the embedded data, returning the complex
/// matrix read off the (exactly structured) best iterate.
pub(crate) fn solve_complex_structured(
    rx: &DenseMatrix,
    rb: &DenseMatrix,
    opts: &SolveOptions,
) -> Result<(ComplexDense, usize, usize)> {
    let dim = rx.rows();
    let a0 = match &opts.init {
        InitStrategy::User(a) => {
            if a.shape() != (dim, dim) {
                return Err(Error::Dimension(format!(
                    "user start must be {dim}x{dim}, got {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
            a.clone()
        }
        _ => init_scaled_identity(rx, rb)?,
    };
    let (best, trace) = fgm_with_projection(rx, rb, &a0, opts, &project_structured_matrix)?;
    let a = nearest_r_structure(&StructuredBlocks::from_matrix(&best)?)?;
    Ok((a, trace.iterations(), trace.restarts))
}
