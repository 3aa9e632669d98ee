//! Subspaces as orthonormal bases, oblique projectors, direct-sum tests and
//! the gap between subspaces.
//!
//! The one-sided deviation `δ(M, N)` is the largest distance from a unit
//! vector of `M` to `N`. With orthonormal bases it equals
//! `‖(I − P_N) Q_M‖`, where `Q_M` is the basis of `M` and `P_N` the
//! orthogonal projector onto `N`. By convention `δ(0, N) = 0`, and
//! `δ(M, 0) = 1` for `M ≠ 0`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{GenInvError, Result};
use crate::kernel::{self, Matrix, ToleranceConfig, C64};

/// A subspace of `ℂⁿ` held as an orthonormal column basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    tol: ToleranceConfig,
}

impl Subspace {
    pub fn trivial(ambient_dim: usize, tol: &ToleranceConfig) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
            tol: tol.clone(),
        }
    }

    pub fn full(ambient_dim: usize, tol: &ToleranceConfig) -> Self {
        Subspace {
            ambient_dim,
            basis: kernel::identity(ambient_dim),
            tol: tol.clone(),
        }
    }

    /// Wraps a basis that is already orthonormal, checking `B*B = I`.
    pub fn from_orthonormal(basis: Matrix, tol: &ToleranceConfig) -> Result<Self> {
        kernel::ensure_finite(&basis)?;
        let k = basis.ncols();
        let defect = (basis.adjoint() * &basis - kernel::identity(k)).norm();
        if defect > tol.residual_tol.max(1e-12) * (k.max(1) as f64) {
            return Err(GenInvError::InvalidArgument(format!(
                "basis is not orthonormal (‖B*B − I‖_F = {defect:e})"
            )));
        }
        Ok(Subspace {
            ambient_dim: basis.nrows(),
            basis,
            tol: tol.clone(),
        })
    }

    /// The span of the columns of `a`; same as [`column_space`].
    pub fn span(a: &Matrix, tol: &ToleranceConfig) -> Result<Self> {
        column_space(a, tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn tolerance(&self) -> &ToleranceConfig {
        &self.tol
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn orthogonal_projector(&self) -> Matrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn orthogonal_complement(&self) -> Result<Subspace> {
        if self.is_trivial() {
            return Ok(Subspace::full(self.ambient_dim, &self.tol));
        }
        null_space(&self.basis.adjoint(), &self.tol)
    }

    /// Distance from each column of `x` to this subspace; returns the largest.
    fn distance(&self, x: &Matrix) -> f64 {
        if self.is_trivial() {
            return kernel::spectral_norm(x);
        }
        kernel::spectral_norm(&(x - &self.basis * (self.basis.adjoint() * x)))
    }
}

/// Orthonormal basis of the span of the columns of `a`.
pub fn column_space(a: &Matrix, tol: &ToleranceConfig) -> Result<Subspace> {
    let dec = kernel::svd(a)?;
    let rank = dec.rank(tol);
    Ok(Subspace {
        ambient_dim: a.nrows(),
        basis: dec.u.columns(0, rank).into_owned(),
        tol: tol.clone(),
    })
}

/// Orthonormal basis of `{x : Ax = 0}`; its dimension is `cols − rank`.
pub fn null_space(a: &Matrix, tol: &ToleranceConfig) -> Result<Subspace> {
    let n = a.ncols();
    let (sigma, v) = kernel::right_singular_basis(a)?;
    let rank = kernel::numerical_rank(&sigma, tol);
    Ok(Subspace {
        ambient_dim: n,
        basis: v.columns(rank, n - rank).into_owned(),
        tol: tol.clone(),
    })
}

/// An idempotent together with its range and null space.
#[derive(Debug, Clone)]
pub struct ObliqueProjector {
    pub matrix: Matrix,
    pub range: Subspace,
    pub nullspace: Subspace,
}

impl ObliqueProjector {
    /// Reads range and null space off an idempotent matrix.
    pub fn from_matrix(p: Matrix, tol: &ToleranceConfig) -> Result<Self> {
        kernel::check_square("ObliqueProjector::from_matrix", &p)?;
        kernel::ensure_finite(&p)?;
        let defect = kernel::spectral_norm(&(&p * &p - &p));
        if defect > tol.residual_tol * kernel::spectral_norm(&p).max(1.0) {
            return Err(GenInvError::NotIdempotent { defect });
        }
        let range = column_space(&p, tol)?;
        let nullspace = null_space(&p, tol)?;
        Ok(ObliqueProjector {
            matrix: p,
            range,
            nullspace,
        })
    }

    pub fn idempotency_defect(&self) -> f64 {
        kernel::spectral_norm(&(&self.matrix * &self.matrix - &self.matrix))
    }

    /// The complementary projector `I − P`, with range and null space swapped.
    pub fn complement(&self) -> ObliqueProjector {
        let n = self.matrix.nrows();
        ObliqueProjector {
            matrix: kernel::identity(n) - &self.matrix,
            range: self.nullspace.clone(),
            nullspace: self.range.clone(),
        }
    }
}

/// The projector onto `t` along `s`.
pub fn oblique_projector(t: &Subspace, s: &Subspace) -> Result<ObliqueProjector> {
    check_ambient("oblique_projector", t, s)?;
    let check = direct_sum_check(t, s);
    if !check.holds {
        return Err(GenInvError::NotComplementary {
            margin: check.margin,
        });
    }
    let n = t.ambient_dim;
    let k = t.dim();
    let mut joined = Matrix::zeros(n, n);
    joined.columns_mut(0, k).copy_from(t.basis());
    joined.columns_mut(k, n - k).copy_from(s.basis());
    let inv = joined.try_inverse().ok_or(GenInvError::NotComplementary {
        margin: check.margin,
    })?;
    // P [T S] = [T 0]  ⇒  P = T · (first k rows of [T S]⁻¹)
    let matrix = t.basis() * inv.rows(0, k);
    Ok(ObliqueProjector {
        matrix,
        range: t.clone(),
        nullspace: s.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Gap {
    pub delta_mn: f64,
    pub delta_nm: f64,
    pub gap: f64,
}

/// One-sided deviation `δ(M, N)`.
pub fn deviation(m: &Subspace, n: &Subspace) -> f64 {
    if m.is_trivial() {
        return 0.0;
    }
    n.distance(m.basis()).clamp(0.0, 1.0)
}

pub fn gap(m: &Subspace, n: &Subspace) -> Result<Gap> {
    check_ambient("gap", m, n)?;
    let delta_mn = deviation(m, n);
    let delta_nm = deviation(n, m);
    Ok(Gap {
        delta_mn,
        delta_nm,
        gap: delta_mn.max(delta_nm),
    })
}

/// Brute-force lower estimate of `δ(M, N)`: the largest distance to `N` over
/// `trials` random unit vectors of `M` (normalized Gaussian coefficients).
pub fn gap_sampling_oracle(m: &Subspace, n: &Subspace, trials: usize, seed: u64) -> Result<f64> {
    check_ambient("gap_sampling_oracle", m, n)?;
    if trials == 0 {
        return Err(GenInvError::InvalidArgument(
            "trials must be positive".into(),
        ));
    }
    if m.is_trivial() {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = m.dim();
    let mut best: f64 = 0.0;
    for _ in 0..trials {
        let coeffs = Matrix::from_fn(k, 1, |_, _| {
            C64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        });
        let norm = coeffs.norm();
        if norm == 0.0 {
            continue;
        }
        let x = m.basis() * coeffs.unscale(norm);
        best = best.max(n.distance(&x));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DirectSum {
    pub holds: bool,
    /// Smallest singular value of the joined bases `[T | S]`; zero when the
    /// dimensions do not add up to the ambient dimension.
    pub margin: f64,
}

pub fn direct_sum_check(t: &Subspace, s: &Subspace) -> DirectSum {
    let n = t.ambient_dim;
    if t.ambient_dim != s.ambient_dim || t.dim() + s.dim() != n {
        return DirectSum {
            holds: false,
            margin: 0.0,
        };
    }
    if n == 0 {
        return DirectSum {
            holds: true,
            margin: 1.0,
        };
    }
    let mut joined = Matrix::zeros(n, n);
    joined.columns_mut(0, t.dim()).copy_from(t.basis());
    joined.columns_mut(t.dim(), s.dim()).copy_from(s.basis());
    let margin = joined
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    DirectSum {
        holds: margin > t.tol.rank_rel_tol,
        margin,
    }
}

fn check_ambient(context: &'static str, a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient_dim != b.ambient_dim {
        return Err(GenInvError::mismatch(context, a.ambient_dim, b.ambient_dim));
    }
    Ok(())
}
