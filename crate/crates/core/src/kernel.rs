//! Dense linear-algebra substrate: SVD, numerical rank, spectral norm and
//! the restricted solve used to invert an operator on a subspace.
//!
//! Every matrix is stored over ℂ. Real inputs are complex matrices with zero
//! imaginary parts; whether a matrix is "real" only matters at the file and
//! report boundary (see [`crate::io`]).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GenInvError, Result};

pub type C64 = Complex64;

/// Dense complex matrix, the carrier of every operator and algebra element.
pub type Matrix = DMatrix<C64>;

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ToleranceConfig {
    /// Singular values at or below `rank_rel_tol × σ₀` count as zero.
    pub rank_rel_tol: f64,
    /// Relative threshold under which a defining-equation residual is accepted.
    pub residual_tol: f64,
    /// Finite-difference steps, strictly decreasing.
    pub fd_step_sweep: Vec<f64>,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_rel_tol: 1e-10,
            residual_tol: 1e-8,
            fd_step_sweep: vec![1e-2, 1e-3, 1e-4, 1e-5],
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel_tol: f64, residual_tol: f64, fd_step_sweep: Vec<f64>) -> Result<Self> {
        let config = ToleranceConfig {
            rank_rel_tol,
            residual_tol,
            fd_step_sweep,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GenInvError::InvalidTolerance(msg));
        if !(0.0..1.0).contains(&self.rank_rel_tol) {
            return bad(format!("rank_rel_tol {} not in [0, 1)", self.rank_rel_tol));
        }
        if !(0.0..1.0).contains(&self.residual_tol) {
            return bad(format!("residual_tol {} not in [0, 1)", self.residual_tol));
        }
        if self.fd_step_sweep.is_empty() {
            return bad("fd_step_sweep is empty".into());
        }
        if self
            .fd_step_sweep
            .iter()
            .any(|h| !(h.is_finite() && *h > 0.0))
        {
            return bad("fd_step_sweep entries must be positive and finite".into());
        }
        if self.fd_step_sweep.windows(2).any(|w| w[1] >= w[0]) {
            return bad("fd_step_sweep must be strictly decreasing".into());
        }
        Ok(())
    }
}

/// Thin singular value decomposition `A = U · diag(σ) · V*`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: Matrix,
    /// Nonincreasing, nonnegative.
    pub sigma: Vec<f64>,
    /// `cols × k` with orthonormal columns.
    pub v: Matrix,
}

impl Svd {
    pub fn rank(&self, tol: &ToleranceConfig) -> usize {
        numerical_rank(&self.sigma, tol)
    }
}

pub fn ensure_finite(a: &Matrix) -> Result<()> {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(GenInvError::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub fn svd(a: &Matrix) -> Result<Svd> {
    ensure_finite(a)?;
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Ok(Svd {
            u: Matrix::zeros(m, 0),
            sigma: Vec::new(),
            v: Matrix::zeros(n, 0),
        });
    }
    let dec = to_faer(a)
        .thin_svd()
        .map_err(|_| GenInvError::KernelFailure { rows: m, cols: n })?;
    let sigma: Vec<f64> = (0..k).map(|i| dec.S().column_vector()[i].re).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let (fu, fv) = (dec.U(), dec.V());
    Ok(Svd {
        u: Matrix::from_fn(m, k, |i, j| fu[(i, order[j])]),
        sigma: order.iter().map(|&i| sigma[i]).collect(),
        v: Matrix::from_fn(n, k, |i, j| fv[(i, order[j])]),
    })
}

fn to_faer(a: &Matrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Complete right singular basis: all `cols` right singular vectors, with the
/// singular values padded by zeros up to `cols`.
///
/// Wide matrices are padded with zero rows so that the factorization returns
/// a square `V`; padding leaves `A*A`, and hence `V`, unchanged.
pub fn right_singular_basis(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok((Vec::new(), Matrix::zeros(0, 0)));
    }
    let padded;
    let source = if m < n {
        padded = a.clone().resize_vertically(n, C64::new(0.0, 0.0));
        &padded
    } else {
        a
    };
    let dec = svd(source)?;
    let mut sigma = dec.sigma;
    sigma.resize(n, 0.0);
    Ok((sigma, dec.v))
}

/// Number of singular values strictly above `rank_rel_tol × σ₀`.
pub fn numerical_rank(sigma: &[f64], tol: &ToleranceConfig) -> usize {
    match sigma.first() {
        Some(&top) if top > 0.0 => {
            let cutoff = tol.rank_rel_tol * top;
            sigma.iter().take_while(|&&s| s > cutoff).count()
        }
        _ => 0,
    }
}

/// Operator 2-norm, the largest singular value. Zero for empty matrices.
pub fn spectral_norm(a: &Matrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if a.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return 0.0;
    }
    to_faer(a)
        .singular_values()
        .map(|s| s.into_iter().fold(0.0, f64::max))
        .unwrap_or(f64::NAN)
}

/// Solves `(A·B) W = target` on the span of `A·B`, where `B` has orthonormal
/// columns. Components of `target` outside that span are discarded.
///
/// Fails with "restriction not injective" when `A·B` is rank deficient
/// relative to `‖A‖`.
pub fn solve_on_subspace(
    a: &Matrix,
    range_basis: &Matrix,
    target: &Matrix,
    tol: &ToleranceConfig,
) -> Result<Matrix> {
    if a.ncols() != range_basis.nrows() {
        return Err(GenInvError::mismatch(
            "solve_on_subspace basis",
            a.ncols(),
            range_basis.nrows(),
        ));
    }
    if a.nrows() != target.nrows() {
        return Err(GenInvError::mismatch(
            "solve_on_subspace target",
            a.nrows(),
            target.nrows(),
        ));
    }
    let k = range_basis.ncols();
    if k == 0 {
        return Ok(Matrix::zeros(0, target.ncols()));
    }
    let image = a * range_basis;
    let dec = svd(&image)?;
    let margin = restriction_margin(&dec.sigma, k, spectral_norm(a));
    if margin <= tol.rank_rel_tol {
        return Err(GenInvError::RestrictionNotInjective {
            clause: "A|_T : T → A(T) is not injective",
            margin,
        });
    }
    let projected = dec.u.adjoint() * target;
    let mut scaled = projected;
    for (i, s) in dec.sigma.iter().enumerate() {
        scaled.row_mut(i).scale_mut(1.0 / s);
    }
    let coeffs = &dec.v * scaled;

    let residual = spectral_norm(&(&image * &coeffs - &dec.u * (dec.u.adjoint() * target)));
    let bound = tol.residual_tol * spectral_norm(target).max(f64::MIN_POSITIVE);
    if residual > bound {
        return Err(GenInvError::ResidualRejected {
            name: "restricted_solve",
            value: residual,
            bound,
        });
    }
    Ok(coeffs)
}

/// Smallest singular value of `A|_T` relative to `‖A‖`; zero when fewer than
/// `k` singular values are available or `A = 0`.
pub(crate) fn restriction_margin(sigma: &[f64], k: usize, a_norm: f64) -> f64 {
    if sigma.len() < k || a_norm == 0.0 {
        return 0.0;
    }
    sigma[k - 1] / a_norm
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

/// Builds a matrix from real row-major entries.
pub fn from_real(rows: usize, cols: usize, row_major: &[f64]) -> Matrix {
    assert_eq!(row_major.len(), rows * cols, "entry count");
    Matrix::from_fn(rows, cols, |i, j| C64::new(row_major[i * cols + j], 0.0))
}

/// Builds a matrix from `(re, im)` row-major entries.
pub fn from_complex(rows: usize, cols: usize, row_major: &[(f64, f64)]) -> Matrix {
    assert_eq!(row_major.len(), rows * cols, "entry count");
    Matrix::from_fn(rows, cols, |i, j| {
        let (re, im) = row_major[i * cols + j];
        C64::new(re, im)
    })
}

pub fn diag_real(entries: &[f64]) -> Matrix {
    let n = entries.len();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(entries[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// True when every imaginary part is exactly zero.
pub fn is_real(a: &Matrix) -> bool {
    a.iter().all(|z| z.im == 0.0)
}

pub(crate) fn check_square(context: &'static str, a: &Matrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(GenInvError::mismatch(
            context,
            "square matrix",
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    Ok(())
}

pub(crate) fn check_same_shape(context: &'static str, a: &Matrix, b: &Matrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(GenInvError::mismatch(
            context,
            format!("{}x{}", a.nrows(), a.ncols()),
            format!("{}x{}", b.nrows(), b.ncols()),
        ));
    }
    Ok(())
}
