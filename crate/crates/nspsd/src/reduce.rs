//! Reduction of min ‖AX − B‖_F over {A : A + Aᵀ ⪰ 0} to a full-rank diagonal
//! subproblem, and the lifts that turn a subproblem minimizer back into a
//! full-size solution.
//!
//! With a full SVD X = UΣVᵀ of numeric rank r, writing Σ₁ = diag(σ₁..σ_r),
//! C = U₁ᵀBV₁, W = U₂ᵀBV₁:
//!
//!   ‖AX − B‖_F² = ‖Â₁₁Σ₁ − C‖_F² + ‖Â₂₁Σ₁ − W‖_F² + ‖BV₂‖_F²
//!
//! for Â = UᵀAU. The second block can always be matched exactly by choosing
//! Â₂₁ = WΣ₁⁻¹, so the problem collapses to the r×r subproblem
//! min ‖Â₁₁Σ₁ − C‖² over the same cone. Lifting back:
//!
//!   Â = [[Â₁₁, 0], [2Z, K]],   Z = ½WΣ₁⁻¹,   A = UÂUᵀ,
//!
//! which has PSD symmetric part iff K ⪰ ZĤ₁₁†Zᵀ and null(Ĥ₁₁) ⊆ null(Z)
//! (block Schur characterization, Ĥ₁₁ = sym(Â₁₁)). When the containment
//! holds, K = ZĤ₁₁†Zᵀ is the minimal-Frobenius-norm completion and the
//! infimum is attained; when it fails, no feasible A attains it under this
//! classification and [`lift_epsilon`] returns a feasible A whose squared
//! objective exceeds the squared infimum by less than a requested ε, by
//! inflating the zero eigenvalues of Ĥ₁₁ to ε/β.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{
    default_rank_tolerance, skew_part, svd, sym_eig, sym_part, DenseMatrix, SvdFactorization, SymEig,
};
use crate::project::is_nspsd;

/// The diagonal subproblem extracted from (X, B): minimize
/// ‖A₁₁Σ₁ − C‖_F² over A₁₁ + A₁₁ᵀ ⪰ 0, plus the data needed to lift a
/// minimizer back to full size.
#[derive(Clone, Debug)]
pub struct ReducedProblem {
    /// Diagonal of Σ₁: the r positive singular values, nonincreasing.
    pub sigma1: Vec<f64>,
    /// C = U₁ᵀBV₁ (r×r).
    pub c: DenseMatrix,
    /// W = U₂ᵀBV₁ ((n−r)×r).
    pub w: DenseMatrix,
    /// ‖BV₂‖_F²: the part of the objective no feasible A can influence.
    pub residual_sq: f64,
    /// Full SVD of X; `svd.numeric_rank == sigma1.len()`.
    pub svd: SvdFactorization,
}

impl ReducedProblem {
    pub fn n(&self) -> usize {
        self.svd.u.rows()
    }

    pub fn m(&self) -> usize {
        self.svd.v.rows()
    }

    pub fn rank(&self) -> usize {
        self.sigma1.len()
    }

    /// Σ₁ as a dense r×r diagonal matrix.
    pub fn sigma1_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_diagonal(&self.sigma1)
    }

    fn sigma1_inv_matrix(&self) -> DenseMatrix {
        let inv: Vec<f64> = self.sigma1.iter().map(|s| 1.0 / s).collect();
        DenseMatrix::from_diagonal(&inv)
    }

    /// Z = ½WΣ₁⁻¹, the coupling block of every lifted solution.
    pub fn z(&self) -> DenseMatrix {
        (&self.w * &self.sigma1_inv_matrix()).scale(0.5)
    }

    /// ‖A₁₁Σ₁ − C‖_F² for a candidate subproblem iterate.
    pub fn subproblem_residual_sq(&self, a11: &DenseMatrix) -> f64 {
        (&(a11 * &self.sigma1_matrix()) - &self.c)
            .frobenius_norm()
            .powi(2)
    }
}

/// How the returned matrix relates to the infimum.
#[derive(Clone, Debug, PartialEq)]
pub enum Attainment {
    /// The objective equals the infimum.
    Exact,
    /// Infimum not attained; the objective is within the stored ε of it
    /// (squared): ‖AX−B‖² < inf² + ε.
    Epsilon(f64),
    /// Closed-form branch with subproblem minimizer 0; the payload is the ε
    /// used when the coupling block forced an ε-solution, `None` when the
    /// infimum is attained.
    ShortcutZero(Option<f64>),
    /// Closed-form branch for rank-1 X; payload as in `ShortcutZero`.
    RankOne(Option<f64>),
}

impl Attainment {
    pub fn is_attained(&self) -> bool {
        matches!(
            self,
            Attainment::Exact | Attainment::ShortcutZero(None) | Attainment::RankOne(None)
        )
    }

    /// The suboptimality budget consumed, if any.
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            Attainment::Exact => None,
            Attainment::Epsilon(e) => Some(*e),
            Attainment::ShortcutZero(o) | Attainment::RankOne(o) => *o,
        }
    }
}

/// A solution to min ‖AX − B‖_F over {A : A + Aᵀ ⪰ 0}, in the original
/// coordinates.
#[derive(Clone, Debug)]
pub struct Solution {
    pub a: DenseMatrix,
    /// ‖AX − B‖_F for the returned A.
    pub objective: f64,
    /// The infimum of ‖AX − B‖_F over the cone.
    pub infimum_value: f64,
    pub attained: Attainment,
    /// Iterations spent in the first-order subproblem solver (0 for
    /// closed-form paths).
    pub iterations: usize,
    /// Named scalar diagnostics: "rank", "null_containment", "epsilon",
    /// "runtime_seconds", ...
    pub diagnostics: BTreeMap<String, f64>,
}

/// Extract the reduced subproblem from (X, B). Fails with a degenerate-problem
/// error when X has numeric rank 0 (the all-zero matrix); the top-level solver
/// handles that case directly.
pub fn reduce(x: &DenseMatrix, b: &DenseMatrix, rank_tolerance: Option<f64>) -> Result<ReducedProblem> {
    if x.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "x is {}x{} but b is {}x{}",
            x.rows(),
            x.cols(),
            b.rows(),
            b.cols()
        )));
    }
    b.check_finite()?;
    let fact = svd(x, rank_tolerance)?;
    let (n, m) = x.shape();
    let r = fact.numeric_rank;
    if r == 0 {
        return Err(Error::Degenerate(
            "x has numeric rank 0 (zero matrix); every feasible A gives the same objective".into(),
        ));
    }
    let u1 = fact.u.block(0, 0, n, r);
    let u2 = fact.u.block(0, r, n, n - r);
    let v1 = fact.v.block(0, 0, m, r);
    let v2 = fact.v.block(0, r, m, m - r);
    let c = &(&u1.transpose() * b) * &v1;
    let w = &(&u2.transpose() * b) * &v1;
    let residual_sq = (b * &v2).frobenius_norm().powi(2);
    Ok(ReducedProblem {
        sigma1: fact.singular_values[..r].to_vec(),
        c,
        w,
        residual_sq,
        svd: fact,
    })
}

// ───────────────────────── lift internals ─────────────────────────

/// Validate a subproblem iterate: r×r, finite, symmetric part PSD within the
/// default membership tolerance.
fn validate_a11(rp: &ReducedProblem, a11_hat: &DenseMatrix) -> Result<()> {
    let r = rp.rank();
    if a11_hat.shape() != (r, r) {
        return Err(Error::Dimension(format!(
            "subproblem matrix must be {}x{}, got {}x{}",
            r,
            r,
            a11_hat.rows(),
            a11_hat.cols()
        )));
    }
    let report = is_nspsd(a11_hat, None)?;
    if !report.is_member {
        return Err(Error::Argument(format!(
            "subproblem matrix is outside the cone: min eigenvalue of the symmetric part {:.3e}",
            report.min_eigenvalue_of_symmetric_part
        )));
    }
    Ok(())
}

/// Eigenvalue cutoff for rank decisions on Ĥ₁₁, defaulting to the matrix-core
/// rule r·eps·λ_max.
fn h_cutoff(eig: &SymEig, r: usize, h_rank_tolerance: Option<f64>) -> f64 {
    let lam_max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    h_rank_tolerance
        .unwrap_or_else(|| default_rank_tolerance(r, r, lam_max))
        .max(0.0)
}

/// ‖Z·N‖_F ≤ tol·max(1, ‖Z‖_F) for the null basis N of Ĥ₁₁ taken from `eig`
/// (eigenvalues ≤ `tol`). Shares the eigendecomposition with the K-block
/// construction so the rank decision cannot contradict it.
fn containment_from_eig(eig: &SymEig, tol: f64, z: &DenseMatrix) -> bool {
    let r = eig.eigenvalues.len();
    let null_idx: Vec<usize> = (0..r).filter(|&i| eig.eigenvalues[i].abs() <= tol).collect();
    if null_idx.is_empty() {
        return true;
    }
    let mut basis = DenseMatrix::zeros(r, null_idx.len());
    for (dst, &src) in null_idx.iter().enumerate() {
        for row in 0..r {
            basis.set(row, dst, eig.eigenvectors.get(row, src));
        }
    }
    (z * &basis).frobenius_norm() <= tol * z.frobenius_norm().max(1.0)
}

/// Assemble A = U·[[top, 0], [2Z, bottom]]·Uᵀ in the original coordinates.
fn assemble(rp: &ReducedProblem, top: &DenseMatrix, bottom: Option<&DenseMatrix>) -> DenseMatrix {
    let n = rp.n();
    let r = rp.rank();
    let mut a_hat = DenseMatrix::zeros(n, n);
    a_hat.set_block(0, 0, top);
    if n > r {
        a_hat.set_block(r, 0, &rp.z().scale(2.0));
        if let Some(k) = bottom {
            a_hat.set_block(r, r, k);
        }
    }
    let u = &rp.svd.u;
    &(u * &a_hat) * &u.transpose()
}

/// A member of the full solution family for tests: the bottom-right
/// completion is K + R with caller-supplied symmetric K and skew R.
#[cfg(test)]
pub(crate) fn lift_family_member(
    rp: &ReducedProblem,
    a11_hat: &DenseMatrix,
    k: &DenseMatrix,
    r_skew: &DenseMatrix,
) -> DenseMatrix {
    assemble(rp, a11_hat, Some(&(k + r_skew)))
}

fn base_diagnostics(rp: &ReducedProblem, containment: bool) -> BTreeMap<String, f64> {
    let mut d = BTreeMap::new();
    d.insert("rank".into(), rp.rank() as f64);
    d.insert("null_containment".into(), if containment { 1.0 } else { 0.0 });
    d.insert("reduced_residual_sq".into(), rp.residual_sq);
    d
}

fn solution_from_parts(
    a: DenseMatrix,
    objective_sq: f64,
    infimum_sq: f64,
    attained: Attainment,
    mut diagnostics: BTreeMap<String, f64>,
) -> Solution {
    if let Some(e) = attained.epsilon() {
        diagnostics.insert("epsilon".into(), e);
        diagnostics.insert("suboptimality_gap_sq".into(), objective_sq - infimum_sq);
    }
    Solution {
        a,
        objective: objective_sq.max(0.0).sqrt(),
        infimum_value: infimum_sq.max(0.0).sqrt(),
        attained,
        iterations: 0,
        diagnostics,
    }
}

// ───────────────────────── lift_optimal ─────────────────────────

/// Lift a subproblem minimizer to the attained full-size solution with the
/// minimal-norm completion K = ZĤ₁₁†Zᵀ. Errors when null(Ĥ₁₁) ⊄ null(Z);
/// use [`lift_epsilon`] in that case.
pub fn lift_optimal(rp: &ReducedProblem, a11_hat: &DenseMatrix) -> Result<Solution> {
    lift_optimal_with(rp, a11_hat, None)
}

pub(crate) fn lift_optimal_with(
    rp: &ReducedProblem,
    a11_hat: &DenseMatrix,
    h_rank_tolerance: Option<f64>,
) -> Result<Solution> {
    validate_a11(rp, a11_hat)?;
    let n = rp.n();
    let r = rp.rank();
    let subres_sq = rp.subproblem_residual_sq(a11_hat);
    let infimum_sq = subres_sq + rp.residual_sq;

    if n == r {
        let a = assemble(rp, a11_hat, None);
        let diag = base_diagnostics(rp, true);
        return Ok(solution_from_parts(a, infimum_sq, infimum_sq, Attainment::Exact, diag));
    }

    let h11 = sym_part(a11_hat)?;
    let eig = sym_eig(&h11)?;
    let tol = h_cutoff(&eig, r, h_rank_tolerance);
    let z = rp.z();
    if !containment_from_eig(&eig, tol, &z) {
        return Err(Error::Argument(
            "the coupling block is not supported on the range of the symmetric part; \
             the infimum is not attained here — use lift_epsilon"
                .into(),
        ));
    }
    let h_pinv = eig.apply_spectral(|l| if l > tol { 1.0 / l } else { 0.0 });
    let k = &(&z * &h_pinv) * &z.transpose();
    let a = assemble(rp, a11_hat, Some(&k));
    let diag = base_diagnostics(rp, true);
    Ok(solution_from_parts(a, infimum_sq, infimum_sq, Attainment::Exact, diag))
}

// ───────────────────────── lift_epsilon ─────────────────────────

/// Default suboptimality budget: 10⁻⁸·max(1, inf²).
pub(crate) fn default_epsilon(infimum_sq: f64) -> f64 {
    1e-8 * infimum_sq.max(1.0)
}

/// Clamp a requested ε into the open interval (0, min{1, subres²}) required
/// by the inflation construction (just (0, 1) when the subproblem residual
/// is zero). Values at or above the bound are replaced by half the bound.
pub(crate) fn effective_epsilon(requested: f64, subres_sq: f64) -> f64 {
    let bound = if subres_sq > 0.0 { subres_sq.min(1.0) } else { 1.0 };
    if requested < bound {
        requested
    } else {
        bound / 2.0
    }
}

/// Lift a subproblem minimizer when the infimum is not attained: the zero
/// eigenvalues of Ĥ₁₁ are inflated to ε/β, making the minimal-norm completion
/// K_ε = Z(Ĥ₁₁^ε)⁻¹Zᵀ feasible, at a squared-objective cost below ε.
///
/// β = 4√(r−s)·‖Σ₁‖_F·‖Â₁₁Σ₁−C‖_F (s = rank Ĥ₁₁), or 4√(r−s)·‖Σ₁‖_F when
/// that residual is zero. Delegates to [`lift_optimal`] when the containment
/// already holds (nothing to inflate).
pub fn lift_epsilon(rp: &ReducedProblem, a11_hat: &DenseMatrix, epsilon: f64) -> Result<Solution> {
    lift_epsilon_with(rp, a11_hat, epsilon, None)
}

pub(crate) fn lift_epsilon_with(
    rp: &ReducedProblem,
    a11_hat: &DenseMatrix,
    epsilon: f64,
    h_rank_tolerance: Option<f64>,
) -> Result<Solution> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::Argument(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    validate_a11(rp, a11_hat)?;
    let r = rp.rank();
    let h11 = sym_part(a11_hat)?;
    let s11 = skew_part(a11_hat)?;
    let eig = sym_eig(&h11)?;
    let tol = h_cutoff(&eig, r, h_rank_tolerance);
    let z = rp.z();
    if rp.n() == r || containment_from_eig(&eig, tol, &z) {
        return lift_optimal_with(rp, a11_hat, h_rank_tolerance);
    }

    let subres_sq = rp.subproblem_residual_sq(a11_hat);
    let eps = effective_epsilon(epsilon, subres_sq);
    let s = eig.eigenvalues.iter().filter(|&&l| l > tol).count();
    let sigma_norm = rp.sigma1_matrix().frobenius_norm();
    let beta = if subres_sq > 0.0 {
        4.0 * ((r - s) as f64).sqrt() * sigma_norm * subres_sq.sqrt()
    } else {
        4.0 * ((r - s) as f64).sqrt() * sigma_norm
    };
    let floor = eps / beta;

    let h_eps = eig.apply_spectral(|l| if l > tol { l } else { floor });
    let h_eps_inv = eig.apply_spectral(|l| if l > tol { 1.0 / l } else { 1.0 / floor });
    let a11_eps = &h_eps + &s11;
    let k_eps = &(&z * &h_eps_inv) * &z.transpose();
    let a = assemble(rp, &a11_eps, Some(&k_eps));

    let objective_sq = rp.subproblem_residual_sq(&a11_eps) + rp.residual_sq;
    let infimum_sq = subres_sq + rp.residual_sq;
    debug_assert!(
        objective_sq < infimum_sq + eps,
        "inflation exceeded its budget: gap {:.3e} vs epsilon {:.3e}",
        objective_sq - infimum_sq,
        eps
    );
    let mut diag = base_diagnostics(rp, false);
    diag.insert("h_rank".into(), s as f64);
    Ok(solution_from_parts(
        a,
        objective_sq,
        infimum_sq,
        Attainment::Epsilon(eps),
        diag,
    ))
}

// ───────────────────────── shortcut: Â₁₁ = 0 ─────────────────────────

/// Closed-form branch for r < n: Â₁₁ = 0 solves the subproblem exactly when
/// U₁ᵀ(BXᵀ+XBᵀ)U₁ ⪯ 0 **and** CΣ₁ is symmetric. Both are needed: by convex
/// optimality at 0, ⟨CΣ₁, S⟩ must vanish for every skew S (forcing CΣ₁
/// symmetric) and ⟨CΣ₁, H⟩ ≤ 0 for every PSD H (the semidefinite condition);
/// the semidefinite condition alone leaves a skew descent direction open.
/// Returns `None` when the test fails.
pub fn shortcut_negative(
    rp: &ReducedProblem,
    x: &DenseMatrix,
    b: &DenseMatrix,
) -> Result<Option<Solution>> {
    shortcut_negative_with(rp, x, b, None)
}

pub(crate) fn shortcut_negative_with(
    rp: &ReducedProblem,
    x: &DenseMatrix,
    b: &DenseMatrix,
    epsilon: Option<f64>,
) -> Result<Option<Solution>> {
    let r = rp.rank();
    let n = rp.n();
    if r >= n {
        return Ok(None);
    }
    // U₁ᵀ(BXᵀ+XBᵀ)U₁ = CΣ₁ + Σ₁Cᵀ exactly; the tolerance is scaled by the
    // full matrix it is a compression of.
    let bxt = b * &x.transpose();
    let gram = &bxt + &bxt.transpose();
    let tol = 1e-10 * gram.frobenius_norm();
    let c_sigma = &rp.c * &rp.sigma1_matrix();
    let compressed = &c_sigma + &c_sigma.transpose();
    let eig = sym_eig(&compressed)?;
    let max_eig = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if max_eig > tol {
        return Ok(None);
    }
    if skew_part(&c_sigma)?.frobenius_norm() > tol {
        return Ok(None);
    }

    let zero = DenseMatrix::zeros(r, r);
    let infimum_sq = rp.c.frobenius_norm().powi(2) + rp.residual_sq;
    if rp.w.frobenius_norm() == 0.0 {
        // Ĥ₁₁ = 0 and Z = 0: the minimal-norm attained solution is A = 0.
        let mut sol = lift_optimal_with(rp, &zero, None)?;
        sol.attained = Attainment::ShortcutZero(None);
        return Ok(Some(sol));
    }
    let eps = epsilon.unwrap_or_else(|| default_epsilon(infimum_sq));
    let mut sol = lift_epsilon_with(rp, &zero, eps, None)?;
    let used = sol.attained.epsilon().expect("coupling forces an epsilon lift");
    sol.attained = Attainment::ShortcutZero(Some(used));
    Ok(Some(sol))
}

// ───────────────────────── rank-one closed form ─────────────────────────

/// Closed-form solution for rank(X) = 1. With X = σuvᵀ and c₁ = uᵀBv:
/// c₁ > 0 attains the infimum ‖BV₂‖_F; c₁ ≤ 0 with U₂ᵀBv = 0 is attained by
/// A = 0; otherwise the infimum is approached by a one-parameter family and
/// the returned member overshoots by less than ε (default budget).
pub fn solve_rank_one(x: &DenseMatrix, b: &DenseMatrix) -> Result<Solution> {
    if x.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "x is {}x{} but b is {}x{}",
            x.rows(),
            x.cols(),
            b.rows(),
            b.cols()
        )));
    }
    b.check_finite()?;
    let fact = svd(x, None)?;
    rank_one_from_svd(b, &fact, None)
}

pub(crate) fn rank_one_from_svd(
    b: &DenseMatrix,
    fact: &SvdFactorization,
    epsilon: Option<f64>,
) -> Result<Solution> {
    if fact.numeric_rank != 1 {
        return Err(Error::Argument(format!(
            "rank-one solver needs numeric rank 1, got {}",
            fact.numeric_rank
        )));
    }
    let n = fact.u.rows();
    let m = fact.v.rows();
    let sigma = fact.singular_values[0];
    let u1 = fact.u.block(0, 0, n, 1);
    let u2 = fact.u.block(0, 1, n, n - 1);
    let v1 = fact.v.block(0, 0, m, 1);
    let v2 = fact.v.block(0, 1, m, m - 1);

    let bv = b * &v1; // n×1
    let c1 = u1.dot(&bv); // uᵀBv
    let w = &u2.transpose() * &bv; // (n−1)×1
    let w_norm = w.frobenius_norm();
    let residual_sq = (b * &v2).frobenius_norm().powi(2);

    let mut diag = BTreeMap::new();
    diag.insert("rank".into(), 1.0);
    diag.insert("reduced_residual_sq".into(), residual_sq);
    diag.insert("c1".into(), c1);

    let assemble_rank_one = |top: f64, coupling_scale: f64, k: Option<DenseMatrix>| {
        let mut a_hat = DenseMatrix::zeros(n, n);
        a_hat.set(0, 0, top);
        if n > 1 {
            a_hat.set_block(1, 0, &w.scale(coupling_scale));
            if let Some(k) = k {
                a_hat.set_block(1, 1, &k);
            }
        }
        &(&fact.u * &a_hat) * &fact.u.transpose()
    };

    if c1 > 0.0 {
        // Â₁₁ = c₁/σ zeroes the subproblem residual; K = WWᵀ/(4σc₁) is the
        // minimal-norm feasible completion.
        let k = (&w * &w.transpose()).scale(1.0 / (4.0 * sigma * c1));
        let a = assemble_rank_one(c1 / sigma, 1.0 / sigma, Some(k));
        diag.insert("null_containment".into(), 1.0);
        return Ok(Solution {
            a,
            objective: residual_sq.max(0.0).sqrt(),
            infimum_value: residual_sq.max(0.0).sqrt(),
            attained: Attainment::RankOne(None),
            iterations: 0,
            diagnostics: diag,
        });
    }

    let infimum_sq = c1 * c1 + residual_sq;
    if w_norm <= 1e-10 * (1.0 + bv.frobenius_norm()) {
        // Â₁₁ = 0 and no coupling: minimal-norm attained solution is A = 0.
        diag.insert("null_containment".into(), 1.0);
        return Ok(Solution {
            a: DenseMatrix::zeros(n, n),
            objective: infimum_sq.max(0.0).sqrt(),
            infimum_value: infimum_sq.max(0.0).sqrt(),
            attained: Attainment::RankOne(None),
            iterations: 0,
            diagnostics: diag,
        });
    }

    // Non-attained family: A_t with top entry 1/(tσ), coupling W/σ and
    // K_t = (t/(4σ))WWᵀ, t a positive integer. Its squared objective exceeds
    // the squared infimum by exactly 1/t² − 2c₁/t, so pick the smallest t
    // below the budget. (The scaled inequality σ²/t² − 2σc₁/t < ε is imposed
    // as well; for σ < 1 it is the looser of the two.)
    let eps = effective_epsilon(
        epsilon.unwrap_or_else(|| default_epsilon(infimum_sq)),
        c1 * c1,
    );
    let amag = -c1; // ≥ 0
    let gap = |t: f64| 1.0 / (t * t) - 2.0 * c1 / t;
    let scaled_gap = |t: f64| sigma * sigma / (t * t) - 2.0 * sigma * c1 / t;
    let root = (amag + (amag * amag + eps).sqrt()) / eps;
    let mut t = root.max(sigma * root).floor().max(0.0) as u64 + 1;
    while gap(t as f64) >= eps || scaled_gap(t as f64) >= eps {
        t += 1;
    }
    let tf = t as f64;
    let k = (&w * &w.transpose()).scale(tf / (4.0 * sigma));
    let a = assemble_rank_one(1.0 / (tf * sigma), 1.0 / sigma, Some(k));
    let objective_sq = infimum_sq + gap(tf);
    diag.insert("null_containment".into(), 0.0);
    diag.insert("epsilon".into(), eps);
    diag.insert("suboptimality_gap_sq".into(), gap(tf));
    diag.insert("family_index".into(), tf);
    Ok(Solution {
        a,
        objective: objective_sq.max(0.0).sqrt(),
        infimum_value: infimum_sq.max(0.0).sqrt(),
        attained: Attainment::RankOne(Some(eps)),
        iterations: 0,
        diagnostics: diag,
    })
}

// ───────────────────────── tests ─────────────────────────
