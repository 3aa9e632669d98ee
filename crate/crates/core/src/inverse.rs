//! Construction of generalized inverses with residual certificates.
//!
//! Every inverse here is an outer inverse `X` of `A` (`XAX = X`) pinned down
//! by its range `T` and null space `S`. The general construction lives in
//! [`outer_prescribed`]: `X` vanishes on `S` and inverts `A|_T : T → A(T)`.
//! The (B,C)-inverse, the Bott-Duffin inverse and the inverse along `D` all
//! reduce to it with `T = R(B)` and `S = N(C)`.

use std::collections::BTreeMap;

use crate::error::{GenInvError, InverseKind, Result};
use crate::kernel::{self, Matrix, ToleranceConfig};
use crate::subspace::{self, ObliqueProjector, Subspace};

/// A residual norm together with the scale it is judged against.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Residual {
    pub value: f64,
    /// `max(1, product of the operand norms in the equation)`.
    pub scale: f64,
}

impl Residual {
    fn new(value: f64, norms: &[f64]) -> Self {
        Residual {
            value,
            scale: norms.iter().product::<f64>().max(1.0),
        }
    }

    pub fn relative(&self) -> f64 {
        self.value / self.scale
    }
}

/// The data an inverse was built from, kept so that it can be rebuilt for a
/// perturbed operand.
#[derive(Debug, Clone)]
pub struct Problem {
    pub operand: Matrix,
    pub range: Subspace,
    pub nullspace: Subspace,
    /// `(B, C)` when the inverse was specified through generators.
    pub generators: Option<(Matrix, Matrix)>,
}

#[derive(Debug, Clone)]
pub struct InverseCertificate {
    pub inverse: Matrix,
    pub kind: InverseKind,
    pub residuals: BTreeMap<&'static str, Residual>,
    /// Condition number of `A|_T : T → A(T)`; 1 when `T = 0`.
    pub restricted_condition: f64,
    /// Gap between `R(X)` and the prescribed range.
    pub range_gap: f64,
    /// Gap between `N(X)` and the prescribed null space.
    pub nullspace_gap: f64,
    /// Smallest singular value of `[A(T) | S]` with orthonormal bases.
    pub complement_margin: f64,
    /// `max(1, ‖A‖·‖X‖)`.
    pub scale: f64,
    pub problem: Problem,
}

impl InverseCertificate {
    pub fn operand(&self) -> &Matrix {
        &self.problem.operand
    }

    /// Largest `value / scale` over all recorded residuals.
    pub fn max_relative_residual(&self) -> f64 {
        self.residuals
            .values()
            .map(Residual::relative)
            .fold(0.0, f64::max)
    }

    fn insert(&mut self, name: &'static str, value: f64, norms: &[f64]) {
        self.residuals.insert(name, Residual::new(value, norms));
    }

    fn validate(self, tol: &ToleranceConfig) -> Result<Self> {
        for (name, r) in &self.residuals {
            let bound = tol.residual_tol * r.scale;
            if r.value.is_nan() || r.value > bound {
                return Err(GenInvError::ResidualRejected {
                    name,
                    value: r.value,
                    bound,
                });
            }
        }
        Ok(self)
    }
}

/// Moore-Penrose inverse from the SVD, inverting singular values above the
/// rank cutoff.
pub fn moore_penrose(a: &Matrix, tol: &ToleranceConfig) -> Result<InverseCertificate> {
    let dec = kernel::svd(a)?;
    let r = dec.rank(tol);
    let mut vs = dec.v.columns(0, r).into_owned();
    for (j, s) in dec.sigma.iter().take(r).enumerate() {
        vs.column_mut(j).unscale_mut(*s);
    }
    let x = vs * dec.u.columns(0, r).adjoint();

    let na = kernel::spectral_norm(a);
    let nx = kernel::spectral_norm(&x);
    let ax = a * &x;
    let xa = &x * a;
    let range = subspace::column_space(&a.adjoint(), tol)?;
    let nullspace = subspace::null_space(&a.adjoint(), tol)?;
    let restricted_condition = if r == 0 {
        1.0
    } else {
        dec.sigma[0] / dec.sigma[r - 1]
    };
    let mut cert = InverseCertificate {
        kind: InverseKind::MoorePenrose,
        residuals: BTreeMap::new(),
        restricted_condition,
        range_gap: subspace::gap(&subspace::column_space(&x, tol)?, &range)?.gap,
        nullspace_gap: subspace::gap(&subspace::null_space(&x, tol)?, &nullspace)?.gap,
        complement_margin: 1.0,
        scale: (na * nx).max(1.0),
        problem: Problem {
            operand: a.clone(),
            range,
            nullspace,
            generators: None,
        },
        inverse: Matrix::zeros(0, 0),
    };
    cert.insert("axa", kernel::spectral_norm(&(&ax * a - a)), &[na, na, nx]);
    cert.insert(
        "xax",
        kernel::spectral_norm(&(&xa * &x - &x)),
        &[nx, na, nx],
    );
    cert.insert(
        "ax_herm",
        kernel::spectral_norm(&(&ax - ax.adjoint())),
        &[na, nx],
    );
    cert.insert(
        "xa_herm",
        kernel::spectral_norm(&(&xa - xa.adjoint())),
        &[na, nx],
    );
    cert.inverse = x;
    cert.validate(tol)
}

/// The outer inverse `A^(2)_{T,S}`: range `T ⊆ ℂⁿ`, null space `S ⊆ ℂᵐ` for
/// an `m × n` operand. Tolerances are taken from `t`.
pub fn outer_prescribed(a: &Matrix, t: &Subspace, s: &Subspace) -> Result<InverseCertificate> {
    let tol = t.tolerance().clone();
    let cert = outer_core(a, t, s, &tol)?;
    cert.validate(&tol)
}

fn outer_core(
    a: &Matrix,
    t: &Subspace,
    s: &Subspace,
    tol: &ToleranceConfig,
) -> Result<InverseCertificate> {
    kernel::ensure_finite(a)?;
    let (m, n) = a.shape();
    if t.ambient_dim() != n {
        return Err(GenInvError::mismatch(
            "outer_prescribed range",
            n,
            t.ambient_dim(),
        ));
    }
    if s.ambient_dim() != m {
        return Err(GenInvError::mismatch(
            "outer_prescribed null space",
            m,
            s.ambient_dim(),
        ));
    }
    let k = t.dim();
    let na = kernel::spectral_norm(a);

    let (x, restricted_condition, complement_margin) = if k == 0 {
        let check = subspace::direct_sum_check(&Subspace::trivial(m, tol), s);
        if !check.holds {
            return Err(complement_fails(check.margin));
        }
        (Matrix::zeros(n, m), 1.0, check.margin)
    } else {
        let image = a * t.basis();
        let dec = kernel::svd(&image)?;
        let margin = kernel::restriction_margin(&dec.sigma, k, na);
        if margin <= tol.rank_rel_tol {
            return Err(GenInvError::RestrictionNotInjective {
                clause: "A|_T : T → A(T) is not injective",
                margin,
            });
        }
        let u = Subspace::from_orthonormal(dec.u.clone(), tol)?;
        let check = subspace::direct_sum_check(&u, s);
        if !check.holds {
            return Err(complement_fails(check.margin));
        }
        let mut joined = Matrix::zeros(m, m);
        joined.columns_mut(0, k).copy_from(&dec.u);
        joined.columns_mut(k, m - k).copy_from(s.basis());
        let joined_inv = joined
            .try_inverse()
            .ok_or_else(|| complement_fails(check.margin))?;
        // X U = T V Σ⁻¹ and X S = 0.
        let mut tv = t.basis() * &dec.v;
        for (j, sigma) in dec.sigma.iter().enumerate() {
            tv.column_mut(j).unscale_mut(*sigma);
        }
        let x = tv * joined_inv.rows(0, k);
        (x, dec.sigma[0] / dec.sigma[k - 1], check.margin)
    };

    let nx = kernel::spectral_norm(&x);
    let range_gap = subspace::gap(&subspace::column_space(&x, tol)?, t)?.gap;
    let nullspace_gap = subspace::gap(&subspace::null_space(&x, tol)?, s)?.gap;
    let mut cert = InverseCertificate {
        kind: InverseKind::OuterPrescribed,
        residuals: BTreeMap::new(),
        restricted_condition,
        range_gap,
        nullspace_gap,
        complement_margin,
        scale: (na * nx).max(1.0),
        problem: Problem {
            operand: a.clone(),
            range: t.clone(),
            nullspace: s.clone(),
            generators: None,
        },
        inverse: Matrix::zeros(0, 0),
    };
    cert.insert(
        "outer",
        kernel::spectral_norm(&(&x * a * &x - &x)),
        &[nx, na, nx],
    );
    cert.inverse = x;
    Ok(cert)
}

fn complement_fails(margin: f64) -> GenInvError {
    GenInvError::ComplementFails {
        clause: "R(A·T) ⊕ S ≠ Y",
        margin,
    }
}

fn bc_core(
    a: &Matrix,
    b: &Matrix,
    c: &Matrix,
    tol: &ToleranceConfig,
) -> Result<InverseCertificate> {
    tol.validate()?;
    kernel::check_square("bc_inverse", a)?;
    kernel::check_same_shape("bc_inverse B", a, b)?;
    kernel::check_same_shape("bc_inverse C", a, c)?;
    kernel::ensure_finite(b)?;
    kernel::ensure_finite(c)?;
    let t = subspace::column_space(b, tol)?;
    let s = subspace::null_space(c, tol)?;
    let mut cert = outer_core(a, &t, &s, tol)?;
    cert.kind = InverseKind::Bc;
    cert.problem.generators = Some((b.clone(), c.clone()));
    Ok(cert)
}

fn does_not_exist(kind: InverseKind) -> impl Fn(GenInvError) -> GenInvError {
    move |cause| {
        if cause.is_existence_failure() {
            GenInvError::DoesNotExist {
                kind,
                cause: Box::new(cause),
            }
        } else {
            cause
        }
    }
}

/// The (B,C)-inverse: the outer inverse with range `R(B)` and null space
/// `N(C)`, recorded with the residuals of `B = XAB` and `C = CAX`.
pub fn bc_inverse(
    a: &Matrix,
    b: &Matrix,
    c: &Matrix,
    tol: &ToleranceConfig,
) -> Result<InverseCertificate> {
    let build = || {
        let mut cert = bc_core(a, b, c, tol)?;
        let x = cert.inverse.clone();
        let (na, nx) = (kernel::spectral_norm(a), kernel::spectral_norm(&x));
        let (nb, nc) = (kernel::spectral_norm(b), kernel::spectral_norm(c));
        cert.insert(
            "b_xab",
            kernel::spectral_norm(&(&x * a * b - b)),
            &[nx, na, nb],
        );
        cert.insert(
            "c_cax",
            kernel::spectral_norm(&(c * a * &x - c)),
            &[nc, na, nx],
        );
        cert.validate(tol)
    };
    build().map_err(does_not_exist(InverseKind::Bc))
}

/// Bott-Duffin `(P,Q)`-inverse: the (B,C)-inverse with idempotent generators.
pub fn bott_duffin(
    a: &Matrix,
    p: &ObliqueProjector,
    q: &ObliqueProjector,
    tol: &ToleranceConfig,
) -> Result<InverseCertificate> {
    let build = || {
        let (pm, qm) = (&p.matrix, &q.matrix);
        let mut cert = bc_core(a, pm, qm, tol)?;
        cert.kind = InverseKind::BottDuffin;
        let y = cert.inverse.clone();
        let (na, ny) = (kernel::spectral_norm(a), kernel::spectral_norm(&y));
        let (np, nq) = (kernel::spectral_norm(pm), kernel::spectral_norm(qm));
        cert.insert("y_py", kernel::spectral_norm(&(pm * &y - &y)), &[np, ny]);
        cert.insert("y_yq", kernel::spectral_norm(&(&y * qm - &y)), &[ny, nq]);
        cert.insert(
            "yap_p",
            kernel::spectral_norm(&(&y * a * pm - pm)),
            &[ny, na, np],
        );
        cert.insert(
            "qay_q",
            kernel::spectral_norm(&(qm * a * &y - qm)),
            &[nq, na, ny],
        );
        cert.validate(tol)
    };
    build().map_err(does_not_exist(InverseKind::BottDuffin))
}

/// Inverse along `D`: the (D,D)-inverse, recorded with `XAD = D = DAX`.
pub fn inverse_along(a: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<InverseCertificate> {
    let build = || {
        let mut cert = bc_core(a, d, d, tol)?;
        cert.kind = InverseKind::Along;
        let x = cert.inverse.clone();
        let (na, nx, nd) = (
            kernel::spectral_norm(a),
            kernel::spectral_norm(&x),
            kernel::spectral_norm(d),
        );
        cert.insert(
            "xad_d",
            kernel::spectral_norm(&(&x * a * d - d)),
            &[nx, na, nd],
        );
        cert.insert(
            "dax_d",
            kernel::spectral_norm(&(d * a * &x - d)),
            &[nd, na, nx],
        );
        cert.validate(tol)
    };
    build().map_err(does_not_exist(InverseKind::Along))
}

/// Reflexive generalized inverse of `F` with range `N` and null space `M`.
///
/// Requires `N(F) ⊕ N` to fill the domain and `R(F) ⊕ M` the codomain.
pub fn sf_inverse(f: &Matrix, n: &Subspace, m: &Subspace) -> Result<Matrix> {
    let tol = n.tolerance();
    if n.ambient_dim() != f.ncols() {
        return Err(GenInvError::mismatch(
            "sf_inverse N",
            f.ncols(),
            n.ambient_dim(),
        ));
    }
    if m.ambient_dim() != f.nrows() {
        return Err(GenInvError::mismatch(
            "sf_inverse M",
            f.nrows(),
            m.ambient_dim(),
        ));
    }
    let domain = subspace::direct_sum_check(&subspace::null_space(f, tol)?, n);
    if !domain.holds {
        return Err(GenInvError::ComplementFails {
            clause: "N(F) ⊕ N ≠ X",
            margin: domain.margin,
        });
    }
    let codomain = subspace::direct_sum_check(&subspace::column_space(f, tol)?, m);
    if !codomain.holds {
        return Err(GenInvError::ComplementFails {
            clause: "R(F) ⊕ M ≠ Y",
            margin: codomain.margin,
        });
    }
    Ok(outer_prescribed(f, n, m)?.inverse)
}

/// Matrix of `x ↦ ax` on `k × k` matrices under column-stacking
/// vectorization, i.e. `I ⊗ a`.
pub fn left_regular(a: &Matrix, k: usize) -> Result<Matrix> {
    check_order("left_regular", a, k)?;
    let mut l = Matrix::zeros(k * k, k * k);
    for q in 0..k {
        for i in 0..k {
            for p in 0..k {
                l[(q * k + i, q * k + p)] = a[(i, p)];
            }
        }
    }
    Ok(l)
}

/// Matrix of `x ↦ xa` on `k × k` matrices under column-stacking
/// vectorization, i.e. `aᵀ ⊗ I`.
pub fn right_regular(a: &Matrix, k: usize) -> Result<Matrix> {
    check_order("right_regular", a, k)?;
    let mut r = Matrix::zeros(k * k, k * k);
    for j in 0..k {
        for q in 0..k {
            for p in 0..k {
                r[(j * k + p, q * k + p)] = a[(q, j)];
            }
        }
    }
    Ok(r)
}

fn check_order(context: &'static str, a: &Matrix, k: usize) -> Result<()> {
    if k == 0 || a.shape() != (k, k) {
        return Err(GenInvError::mismatch(
            context,
            format!("{k}x{k}"),
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{diag_real, from_real, identity};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn close(a: &Matrix, b: &Matrix, eps: f64) -> bool {
        a.shape() == b.shape() && (a - b).norm() <= eps
    }

    fn span(cols: usize, entries: &[f64]) -> Subspace {
        let rows = entries.len() / cols;
        subspace::column_space(&from_real(rows, cols, entries), &tol()).unwrap()
    }

    #[test]
    fn moore_penrose_examples() {
        let x = moore_penrose(&diag_real(&[2.0, 0.0]), &tol()).unwrap();
        assert!(close(&x.inverse, &diag_real(&[0.5, 0.0]), 1e-15));
        assert_eq!(x.residuals.len(), 4);

        let z = moore_penrose(&Matrix::zeros(2, 3), &tol()).unwrap();
        assert!(close(&z.inverse, &Matrix::zeros(3, 2), 0.0));

        let x = moore_penrose(&from_real(1, 2, &[1.0, 1.0]), &tol()).unwrap();
        assert!(close(&x.inverse, &from_real(2, 1, &[0.5, 0.5]), 1e-15));
        assert!(x.max_relative_residual() < 1e-14);
    }

    #[test]
    fn outer_prescribed_examples() {
        let t = span(1, &[1.0, 0.0]);
        let s = span(1, &[1.0, 1.0]);
        let x = outer_prescribed(&identity(2), &t, &s).unwrap();
        let p = subspace::oblique_projector(&t, &s).unwrap();
        assert!(close(&x.inverse, &p.matrix, 1e-14));

        let a = diag_real(&[1.0, 2.0, 3.0]);
        let t = span(2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let s = span(1, &[0.0, 0.0, 1.0]);
        let x = outer_prescribed(&a, &t, &s).unwrap();
        assert!(close(&x.inverse, &diag_real(&[1.0, 0.5, 0.0]), 1e-14));
        assert!(x.range_gap < 1e-14 && x.nullspace_gap < 1e-14);
        assert!((x.restricted_condition - 2.0).abs() < 1e-13);

        let nil = from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e1 = span(1, &[1.0, 0.0]);
        let err = outer_prescribed(&nil, &e1, &e1).unwrap_err();
        assert!(matches!(err, GenInvError::RestrictionNotInjective { .. }));
    }

    #[test]
    fn outer_prescribed_complement_failure_names_clause() {
        let e1 = span(1, &[1.0, 0.0]);
        let err = outer_prescribed(&identity(2), &e1, &e1).unwrap_err();
        assert_eq!(err.clause().as_deref(), Some("R(A·T) ⊕ S ≠ Y"));
        assert!(err.margin().unwrap() < 1e-14);
    }

    #[test]
    fn outer_prescribed_rectangular() {
        // A : ℂ³ → ℂ², T = span(e1, e2), S = 0.
        let a = from_real(2, 3, &[1.0, 0.0, 5.0, 0.0, 2.0, 7.0]);
        let t = span(2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let s = Subspace::trivial(2, &tol());
        let x = outer_prescribed(&a, &t, &s).unwrap();
        let expected = from_real(3, 2, &[1.0, 0.0, 0.0, 0.5, 0.0, 0.0]);
        assert!(close(&x.inverse, &expected, 1e-14));
    }

    #[test]
    fn bc_inverse_examples() {
        let a = from_real(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let i2 = identity(2);
        let x = bc_inverse(&a, &i2, &i2, &tol()).unwrap();
        assert!(close(&(&x.inverse * &a), &i2, 1e-14));

        let a = diag_real(&[1.0, 2.0, 3.0]);
        let b = diag_real(&[1.0, 1.0, 0.0]);
        let x = bc_inverse(&a, &b, &b, &tol()).unwrap();
        assert!(close(&x.inverse, &diag_real(&[1.0, 0.5, 0.0]), 1e-14));
        assert!(x.residuals["b_xab"].value < 1e-14 && x.residuals["c_cax"].value < 1e-14);

        let z = Matrix::zeros(3, 3);
        let x = bc_inverse(&a, &z, &z, &tol()).unwrap();
        assert!(close(&x.inverse, &z, 0.0));
    }

    #[test]
    fn bc_inverse_failure_is_relabelled() {
        let nil = from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e1 = diag_real(&[1.0, 0.0]);
        let err = bc_inverse(&nil, &e1, &e1, &tol()).unwrap_err();
        assert!(err.to_string().starts_with("(B,C)-inverse does not exist"));
        assert!(err.is_existence_failure());
    }

    #[test]
    fn bott_duffin_examples() {
        let a = from_real(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let id = ObliqueProjector::from_matrix(identity(2), &tol()).unwrap();
        let y = bott_duffin(&a, &id, &id, &tol()).unwrap();
        assert!(close(&(&y.inverse * &a), &identity(2), 1e-14));
        assert_eq!(y.kind, InverseKind::BottDuffin);

        // P onto e1 along (1,1); Q with null space (1,1) ⇒ Y = projector onto e1 along (1,1).
        let e1 = span(1, &[1.0, 0.0]);
        let d = span(1, &[1.0, 1.0]);
        let p = subspace::oblique_projector(&e1, &d).unwrap();
        let q = subspace::oblique_projector(&span(1, &[0.0, 1.0]), &d).unwrap();
        let y = bott_duffin(&identity(2), &p, &q, &tol()).unwrap();
        let expected = outer_prescribed(&identity(2), &e1, &d).unwrap();
        assert!(close(&y.inverse, &expected.inverse, 1e-14));
        assert!(y.max_relative_residual() < 1e-14);

        let zero = ObliqueProjector::from_matrix(Matrix::zeros(2, 2), &tol()).unwrap();
        let y = bott_duffin(&a, &zero, &zero, &tol()).unwrap();
        assert!(close(&y.inverse, &Matrix::zeros(2, 2), 0.0));
    }

    #[test]
    fn inverse_along_examples() {
        let a = from_real(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let x = inverse_along(&a, &identity(2), &tol()).unwrap();
        assert!(close(&(&a * &x.inverse), &identity(2), 1e-14));

        let a = from_real(3, 3, &[1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 3.0, 1.0, 2.0]);
        let dag = moore_penrose(&a, &tol()).unwrap().inverse;
        let x = inverse_along(&a, &dag, &tol()).unwrap();
        assert!(close(&x.inverse, &dag, 1e-9));

        let nil = from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let err = inverse_along(&nil, &nil, &tol()).unwrap_err();
        assert!(err.to_string().starts_with("not invertible along D"));
        assert!(matches!(
            err,
            GenInvError::DoesNotExist { ref cause, .. }
                if matches!(**cause, GenInvError::RestrictionNotInjective { .. })
        ));
    }

    #[test]
    fn along_matches_bc_bitwise() {
        let a = from_real(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0]);
        let d = from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
        let along = inverse_along(&a, &d, &tol()).unwrap();
        let bc = bc_inverse(&a, &d, &d, &tol()).unwrap();
        assert_eq!(along.inverse, bc.inverse);
    }

    #[test]
    fn sf_inverse_examples() {
        let f = diag_real(&[1.0, 0.0]);
        let e1 = span(1, &[1.0, 0.0]);
        let e2 = span(1, &[0.0, 1.0]);
        let x = sf_inverse(&f, &e1, &e2).unwrap();
        assert!(close(&x, &f, 1e-15));

        let x = sf_inverse(&f, &span(1, &[1.0, 1.0]), &e2).unwrap();
        assert!(close(&x, &from_real(2, 2, &[1.0, 0.0, 1.0, 0.0]), 1e-14));

        let g = from_real(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let full = Subspace::full(2, &tol());
        let x = sf_inverse(&g, &full, &Subspace::trivial(2, &tol())).unwrap();
        assert!(close(&(&g * x), &identity(2), 1e-14));

        let err = sf_inverse(&f, &e2, &e2).unwrap_err();
        assert_eq!(err.clause().as_deref(), Some("N(F) ⊕ N ≠ X"));
        let err = sf_inverse(&f, &e1, &e1).unwrap_err();
        assert_eq!(err.clause().as_deref(), Some("R(F) ⊕ M ≠ Y"));
    }

    #[test]
    fn regular_representation_examples() {
        let three = from_real(1, 1, &[3.0]);
        assert_eq!(left_regular(&three, 1).unwrap(), three);
        assert_eq!(right_regular(&three, 1).unwrap(), three);
        assert_eq!(left_regular(&identity(3), 3).unwrap(), identity(9));
        assert_eq!(right_regular(&identity(3), 3).unwrap(), identity(9));
        let a = diag_real(&[1.0, 2.0]);
        assert_eq!(
            left_regular(&a, 2).unwrap(),
            diag_real(&[1.0, 2.0, 1.0, 2.0])
        );
        assert_eq!(
            right_regular(&a, 2).unwrap(),
            diag_real(&[1.0, 1.0, 2.0, 2.0])
        );
    }

    #[test]
    fn regular_representations_match_kronecker() {
        let a = from_real(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0]);
        let i3 = identity(3);
        assert_eq!(left_regular(&a, 3).unwrap(), i3.kronecker(&a));
        assert_eq!(right_regular(&a, 3).unwrap(), a.transpose().kronecker(&i3));
        // L_a vec(x) = vec(ax)
        let x = from_real(3, 3, &[0.5, -1.0, 2.0, 0.0, 3.0, 1.0, -2.0, 1.0, 4.0]);
        let vec = |m: &Matrix| Matrix::from_column_slice(9, 1, m.as_slice());
        assert!(close(
            &(left_regular(&a, 3).unwrap() * vec(&x)),
            &vec(&(&a * &x)),
            1e-12
        ));
        assert!(close(
            &(right_regular(&a, 3).unwrap() * vec(&x)),
            &vec(&(&x * &a)),
            1e-12
        ));
    }
}
