//! Projections onto the PSD cone and the cone of matrices with PSD
//! symmetric part, plus the feasibility checks used to validate
//! reconstructed solutions.
//!
//! The target cone throughout the crate is 𝒩 = {A : A + Aᵀ ⪰ 0}. Because the
//! symmetric and skew parts are Frobenius-orthogonal, the nearest member of 𝒩
//! keeps the skew part and clips the negative eigenvalues of the symmetric
//! part.

use crate::error::{Error, Result};
use crate::matrix::{skew_part, sym_eig, sym_part, DenseMatrix};

/// Outcome of a cone-membership test for {A : A + Aᵀ ⪰ 0}.
#[derive(Clone, Debug)]
pub struct ConeMembershipReport {
    pub is_member: bool,
    /// Smallest eigenvalue of A + Aᵀ.
    pub min_eigenvalue_of_symmetric_part: f64,
    /// Distance-like residual; 0 when the matrix is a member.
    pub violation: f64,
}

/// Projection onto the PSD cone: eigenvalues of the symmetric part are
/// clipped at zero. For non-symmetric input this projects the symmetric part
/// (the skew part is discarded).
pub fn psd_project(a: &DenseMatrix) -> Result<DenseMatrix> {
    let s = sym_part(a)?;
    let eig = sym_eig(&s)?;
    Ok(eig.apply_spectral(|l| l.max(0.0)))
}

/// Nearest matrix with PSD symmetric part: the skew part is preserved and
/// the symmetric part is PSD-projected.
pub fn nspsd_project(a: &DenseMatrix) -> Result<DenseMatrix> {
    let skew = skew_part(a)?;
    let clipped = psd_project(a)?;
    Ok(&skew + &clipped)
}

/// Default membership tolerance: 10⁻¹⁰ · (1 + ‖A‖_F).
pub fn default_membership_tolerance(a: &DenseMatrix) -> f64 {
    1e-10 * (1.0 + a.frobenius_norm())
}

/// Test whether A + Aᵀ ⪰ 0 within `membership_tolerance` (default
/// 10⁻¹⁰·(1+‖A‖_F) when `None`).
pub fn is_nspsd(a: &DenseMatrix, membership_tolerance: Option<f64>) -> Result<ConeMembershipReport> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "cone membership needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let tol = membership_tolerance.unwrap_or_else(|| default_membership_tolerance(a));
    let double_sym = &sym_part(a)?.scale(2.0);
    let eig = sym_eig(double_sym)?;
    let min_eig = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let is_member = min_eig >= -tol;
    Ok(ConeMembershipReport {
        is_member,
        min_eigenvalue_of_symmetric_part: min_eig,
        violation: if is_member { 0.0 } else { -min_eig },
    })
}

/// Orthonormal basis of the (numeric) null space of a symmetric matrix:
/// eigenvectors whose eigenvalues are ≤ `tol` in magnitude. Returns `None`
/// when the null space is trivial.
fn null_basis(h: &DenseMatrix, tol: f64) -> Result<Option<DenseMatrix>> {
    let eig = sym_eig(h)?;
    let null_idx: Vec<usize> = (0..h.rows())
        .filter(|&i| eig.eigenvalues[i].abs() <= tol)
        .collect();
    if null_idx.is_empty() {
        return Ok(None);
    }
    let mut basis = DenseMatrix::zeros(h.rows(), null_idx.len());
    for (dst, &src) in null_idx.iter().enumerate() {
        for row in 0..h.rows() {
            basis.set(row, dst, eig.eigenvectors.get(row, src));
        }
    }
    Ok(Some(basis))
}

/// True iff null(H) ⊆ null(Z), i.e. ‖Z·N‖_F ≤ tol·max(1, ‖Z‖_F) for an
/// orthonormal null-space basis N of H (eigenvalues of magnitude ≤ tol are
/// classified as zero — the same `tol` serves as eigenvalue cutoff and
/// residual tolerance so the rank decision and the containment decision
/// cannot contradict each other).
pub fn null_containment(h: &DenseMatrix, z: &DenseMatrix, tol: f64) -> Result<bool> {
    if z.cols() != h.rows() {
        return Err(Error::Dimension(format!(
            "null containment: h is {}x{} but z is {}x{}",
            h.rows(),
            h.cols(),
            z.rows(),
            z.cols()
        )));
    }
    match null_basis(h, tol)? {
        None => Ok(true),
        Some(basis) => {
            let zn = z * &basis;
            Ok(zn.frobenius_norm() <= tol * z.frobenius_norm().max(1.0))
        }
    }
}

/// Block characterization of PSD for R = [[B, Cᵀ], [C, D]]: true iff B ⪰ 0,
/// null(B) ⊆ null(C), and D − C B† Cᵀ ⪰ 0, each decided with the shared
/// eigenvalue tolerance `tol`.
pub fn block_psd_schur_check(
    b: &DenseMatrix,
    c: &DenseMatrix,
    d: &DenseMatrix,
    tol: f64,
) -> Result<bool> {
    if !b.is_square() || !d.is_square() || c.rows() != d.rows() || c.cols() != b.rows() {
        return Err(Error::Dimension(format!(
            "block check needs b s×s, c q×s, d q×q; got b {}x{}, c {}x{}, d {}x{}",
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols(),
            d.rows(),
            d.cols()
        )));
    }
    let eig_b = sym_eig(b)?;
    let min_b = eig_b.eigenvalues.last().copied().unwrap_or(0.0);
    if min_b < -tol {
        return Ok(false);
    }
    if !null_containment(b, c, tol)? {
        return Ok(false);
    }
    // D − C B† Cᵀ on the range of B; eigenvalues ≤ tol are rank-deficient.
    let b_pinv = eig_b.apply_spectral(|l| if l > tol { 1.0 / l } else { 0.0 });
    let schur = d - &(&(c * &b_pinv) * &c.transpose());
    let eig_s = sym_eig(&sym_part(&schur)?)?;
    let min_s = eig_s.eigenvalues.last().copied().unwrap_or(0.0);
    Ok(min_s >= -tol)
}
