//! Dense matrix values and the factorization kernels every other module
//! consumes.
//!
//! [`DenseMatrix`] is a real dense matrix with row-major constructor
//! semantics and validated (finite) entries. [`ComplexDense`] is a
//! real/imaginary pair of equal shape. The heavy kernels — [`svd`],
//! [`sym_eig`], [`pinv_apply`] — are delegated to nalgebra behind this
//! module's interface; nalgebra types never appear in the public API.
//!
//! [`svd`] always returns *full* orthogonal factors (n×n and m×m): the thin
//! factor produced by the backend is completed to a full orthogonal basis
//! with a Householder QR of `[Q | I]`, which reproduces the thin columns to
//! machine precision and fills the complement.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// f64 machine epsilon; the unit all rank tolerances are scaled by.
pub const EPS: f64 = f64::EPSILON;

// ───────────────────────── DenseMatrix ─────────────────────────

/// Dense real matrix. Constructor entry order is row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    pub(crate) inner: DMatrix<f64>,
}

impl DenseMatrix {
    /// Build from row-major entries, validating length and finiteness.
    pub fn from_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {}x{} = {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        let m = DenseMatrix {
            inner: DMatrix::from_row_slice(rows, cols, entries),
        };
        m.check_finite()?;
        Ok(m)
    }

    /// Build from a closure over (row, col). The closure must produce finite
    /// values; this is the internal constructor for computed matrices.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        DenseMatrix {
            inner: DMatrix::from_fn(rows, cols, f),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix {
            inner: DMatrix::identity(n, n),
        }
    }

    /// Square diagonal matrix from the given diagonal entries.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        DenseMatrix {
            inner: DMatrix::from_diagonal(&DVector::from_column_slice(diag)),
        }
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.inner[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.inner[(row, col)] = value;
    }

    /// Err(NonFinite) at the first NaN/Inf entry, if any.
    pub fn check_finite(&self) -> Result<()> {
        for col in 0..self.cols() {
            for row in 0..self.rows() {
                if !self.inner[(row, col)].is_finite() {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix {
            inner: self.inner.transpose(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }

    /// Frobenius inner product ⟨A, B⟩ = Σᵢⱼ AᵢⱼBᵢⱼ.
    pub fn dot(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "dot: shape mismatch");
        self.inner.iter().zip(other.inner.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn scale(&self, s: f64) -> DenseMatrix {
        DenseMatrix {
            inner: &self.inner * s,
        }
    }

    /// Copy of the rectangular block starting at (row0, col0).
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix {
            inner: self.inner.view((row0, col0), (rows, cols)).into_owned(),
        }
    }

    /// Overwrite the block starting at (row0, col0) with `src`.
    pub fn set_block(&mut self, row0: usize, col0: usize, src: &DenseMatrix) {
        self.inner
            .view_mut((row0, col0), (src.rows(), src.cols()))
            .copy_from(&src.inner);
    }

    /// Entries in row-major order (the constructor order).
    pub fn row_major_entries(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub(crate) fn from_dmatrix(inner: DMatrix<f64>) -> Self {
        DenseMatrix { inner }
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.inner[idx]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut f64 {
        &mut self.inner[idx]
    }
}

// Arithmetic on references. Shape mismatches in these operators are
// programming errors (validated, conformal shapes are established at the
// API boundaries), so they panic like any slice index would.
impl std::ops::Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl std::ops::Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl std::ops::Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

impl std::ops::Neg for &DenseMatrix {
    type Output = DenseMatrix;
    fn neg(self) -> DenseMatrix {
        DenseMatrix {
            inner: -&self.inner,
        }
    }
}

// ───────────────────────── ComplexDense ─────────────────────────

/// Dense complex matrix stored as a real/imaginary pair of equal shape.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexDense {
    pub re: DenseMatrix,
    pub im: DenseMatrix,
}

impl ComplexDense {
    pub fn new(re: DenseMatrix, im: DenseMatrix) -> Result<Self> {
        if re.shape() != im.shape() {
            return Err(Error::Dimension(format!(
                "real part is {}x{} but imaginary part is {}x{}",
                re.rows(),
                re.cols(),
                im.rows(),
                im.cols()
            )));
        }
        Ok(ComplexDense { re, im })
    }

    /// A real matrix viewed as complex (zero imaginary part).
    pub fn from_real(re: DenseMatrix) -> Self {
        let im = DenseMatrix::zeros(re.rows(), re.cols());
        ComplexDense { re, im }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexDense {
            re: DenseMatrix::zeros(rows, cols),
            im: DenseMatrix::zeros(rows, cols),
        }
    }

    pub fn rows(&self) -> usize {
        self.re.rows()
    }

    pub fn cols(&self) -> usize {
        self.re.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.re.shape()
    }

    /// Conjugate transpose A*.
    pub fn adjoint(&self) -> ComplexDense {
        ComplexDense {
            re: self.re.transpose(),
            im: self.im.transpose().scale(-1.0),
        }
    }

    pub fn conjugate(&self) -> ComplexDense {
        ComplexDense {
            re: self.re.clone(),
            im: self.im.scale(-1.0),
        }
    }

    pub fn add(&self, rhs: &ComplexDense) -> ComplexDense {
        ComplexDense {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn sub(&self, rhs: &ComplexDense) -> ComplexDense {
        ComplexDense {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    /// Complex matrix product: (A_r + iA_j)(B_r + iB_j).
    pub fn mul(&self, rhs: &ComplexDense) -> ComplexDense {
        ComplexDense {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }

    pub fn scale(&self, s: f64) -> ComplexDense {
        ComplexDense {
            re: self.re.scale(s),
            im: self.im.scale(s),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.re.frobenius_norm().hypot(self.im.frobenius_norm())
    }

    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                best = best.max(self.re[(i, j)].hypot(self.im[(i, j)]));
            }
        }
        best
    }

    pub fn check_finite(&self) -> Result<()> {
        self.re.check_finite()?;
        self.im.check_finite()
    }
}

// ───────────────────────── symmetric / skew parts ─────────────────────────

/// (A + Aᵀ)/2. Errors on non-square input.
pub fn sym_part(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "sym_part needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        (a.get(i, j) + a.get(j, i)) / 2.0
    }))
}

/// (A − Aᵀ)/2. Errors on non-square input.
pub fn skew_part(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "skew_part needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        (a.get(i, j) - a.get(j, i)) / 2.0
    }))
}

// ───────────────────────── SVD ─────────────────────────

/// Full singular value decomposition X = U Σ Vᵀ with square orthogonal U, V.
#[derive(Clone, Debug)]
pub struct SvdFactorization {
    /// n×n orthogonal.
    pub u: DenseMatrix,
    /// min(n, m) values, nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    /// m×m orthogonal.
    pub v: DenseMatrix,
    /// #{σᵢ > rank tolerance}.
    pub numeric_rank: usize,
}

impl SvdFactorization {
    /// Reassemble U Σ Vᵀ (test/diagnostic helper).
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.u.rows();
        let m = self.v.rows();
        let k = self.singular_values.len();
        let mut sigma = DenseMatrix::zeros(n, m);
        for i in 0..k {
            sigma.set(i, i, self.singular_values[i]);
        }
        &(&self.u * &sigma) * &self.v.transpose()
    }
}

/// Default numeric-rank cutoff: max(rows, cols) · machine-epsilon · σ₁.
pub fn default_rank_tolerance(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * EPS * sigma_max
}

/// Complete a matrix with orthonormal columns to a full square orthogonal
/// matrix. Householder QR of [Q | I]: the first k columns come back equal to
/// Q up to sign (fixed from the R diagonal), the rest span the complement.
fn complete_orthogonal(q_thin: &DMatrix<f64>) -> DMatrix<f64> {
    let n = q_thin.nrows();
    let k = q_thin.ncols();
    if k == n {
        return q_thin.clone();
    }
    let mut aug = DMatrix::zeros(n, k + n);
    aug.view_mut((0, 0), (n, k)).copy_from(q_thin);
    for j in 0..n {
        aug[(j, k + j)] = 1.0;
    }
    let qr = aug.qr();
    let mut q = qr.q();
    let r = qr.r();
    for i in 0..k {
        if r[(i, i)] < 0.0 {
            for row in 0..n {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    q
}

/// Full SVD with numeric rank. `rank_tolerance = None` applies the default
/// rule max(n,m)·eps·σ₁; an explicit value is an absolute cutoff on σ.
pub fn svd(x: &DenseMatrix, rank_tolerance: Option<f64>) -> Result<SvdFactorization> {
    let (n, m) = x.shape();
    if n == 0 || m == 0 {
        return Err(Error::Dimension("svd of an empty matrix".into()));
    }
    x.check_finite()?;
    if let Some(t) = rank_tolerance {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Argument(format!(
                "rank tolerance must be finite and nonnegative, got {t}"
            )));
        }
    }

    let fact = x
        .inner
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Factorization {
            rows: n,
            cols: m,
            detail: "singular value decomposition did not converge".into(),
        })?;
    let u_thin = fact.u.expect("svd requested u");
    let v_t = fact.v_t.expect("svd requested v_t");
    let k = fact.singular_values.len();

    // Sort nonincreasing and permute both factors consistently (the backend
    // sorts already; this pins the contract rather than trusting it).
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| {
        fact.singular_values[j]
            .partial_cmp(&fact.singular_values[i])
            .expect("singular values are finite")
    });
    let singular_values: Vec<f64> = order.iter().map(|&i| fact.singular_values[i]).collect();
    let mut u_sorted = DMatrix::zeros(n, k);
    let mut v_sorted = DMatrix::zeros(m, k);
    for (dst, &src) in order.iter().enumerate() {
        u_sorted.set_column(dst, &u_thin.column(src));
        v_sorted.set_column(dst, &v_t.transpose().column(src));
    }

    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let tol = rank_tolerance.unwrap_or_else(|| default_rank_tolerance(n, m, sigma_max));
    let numeric_rank = singular_values.iter().filter(|&&s| s > tol).count();

    Ok(SvdFactorization {
        u: DenseMatrix::from_dmatrix(complete_orthogonal(&u_sorted)),
        singular_values,
        v: DenseMatrix::from_dmatrix(complete_orthogonal(&v_sorted)),
        numeric_rank,
    })
}

// ───────────────────────── symmetric eigendecomposition ─────────────────────────

/// Eigendecomposition of a symmetric matrix, eigenvalues nonincreasing.
#[derive(Clone, Debug)]
pub struct SymEig {
    /// Nonincreasing.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, aligned with `eigenvalues`.
    pub eigenvectors: DenseMatrix,
}

impl SymEig {
    /// Reassemble V diag(λ) Vᵀ (test/diagnostic helper).
    pub fn reconstruct(&self) -> DenseMatrix {
        let lam = DenseMatrix::from_diagonal(&self.eigenvalues);
        &(&self.eigenvectors * &lam) * &self.eigenvectors.transpose()
    }

    /// Reassemble V f(λ) Vᵀ for an eigenvalue map f (clipping, inversion, ...).
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let lam = DenseMatrix::from_diagonal(&mapped);
        &(&self.eigenvectors * &lam) * &self.eigenvectors.transpose()
    }
}

/// Eigendecomposition of a symmetric matrix. The input is validated to be
/// symmetric within 10⁻¹⁰ relative skew residual and then symmetrized exactly
/// before factorizing, so downstream spectral formulas see a true symmetric
/// operand.
pub fn sym_eig(a: &DenseMatrix) -> Result<SymEig> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "sym_eig needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    a.check_finite()?;
    let skew_norm = skew_part(a)?.frobenius_norm();
    if skew_norm > 1e-10 * (1.0 + a.frobenius_norm()) {
        return Err(Error::Argument(format!(
            "sym_eig input is asymmetric: skew residual {skew_norm:.3e}"
        )));
    }
    let n = a.rows();
    let sym = sym_part(a)?;
    let eig = nalgebra::SymmetricEigen::try_new(sym.inner, f64::EPSILON, 0).ok_or_else(|| {
        Error::Factorization {
            rows: n,
            cols: n,
            detail: "symmetric eigendecomposition did not converge".into(),
        }
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    Ok(SymEig {
        eigenvalues,
        eigenvectors: DenseMatrix::from_dmatrix(vectors),
    })
}

// ───────────────────────── pseudoinverse application ─────────────────────────

/// H† · w for symmetric PSD `h`, computed through [`sym_eig`]. Eigenvalues at
/// or below the rank tolerance are treated as exactly zero (never inverted).
/// `rank_tolerance = None` applies the default rule k·eps·λ_max.
pub fn pinv_apply(h: &DenseMatrix, w: &DenseMatrix, rank_tolerance: Option<f64>) -> Result<DenseMatrix> {
    if h.rows() != w.rows() {
        return Err(Error::Dimension(format!(
            "pinv_apply: h is {}x{} but w has {} rows",
            h.rows(),
            h.cols(),
            w.rows()
        )));
    }
    let eig = sym_eig(h)?;
    let lam_max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let tol = rank_tolerance
        .unwrap_or_else(|| default_rank_tolerance(h.rows(), h.cols(), lam_max))
        .max(0.0);
    let lam_min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if lam_min < -1e-10 * (1.0 + h.frobenius_norm()) {
        return Err(Error::Argument(format!(
            "pinv_apply expects a PSD matrix; min eigenvalue {lam_min:.3e}"
        )));
    }
    let inv = eig.apply_spectral(|l| if l > tol { 1.0 / l } else { 0.0 });
    Ok(&inv * w)
}

// ───────────────────────── tests ─────────────────────────
