//! Perturbing the operand of a (B,C)-inverse with the generators held fixed.
//!
//! Inside the ball `‖E‖ < 1/‖X‖` the perturbed inverse exists and has the
//! closed form `(I + XE)⁻¹X = X(I + EX)⁻¹`.

use std::fmt;

use crate::error::{GenInvError, Result};
use crate::inverse::{self, InverseCertificate};
use crate::kernel::{self, Matrix};

/// Radius `1/‖X‖` of the ball of guaranteed existence around `A`.
pub fn openness_radius(cert: &InverseCertificate) -> Result<f64> {
    let norm = kernel::spectral_norm(&cert.inverse);
    if norm == 0.0 {
        return Err(GenInvError::ZeroInverse);
    }
    Ok(1.0 / norm)
}

#[derive(Debug, Clone)]
pub struct PerturbationReport {
    pub radius: f64,
    pub perturbation_norm: f64,
    /// Set when `‖E‖ ≥ radius`; the closed form is then not guaranteed.
    pub outside_ball: bool,
    /// `(I + XE)⁻¹X`.
    pub formula_inverse: Matrix,
    /// `‖(I + XE)⁻¹X − X(I + EX)⁻¹‖`.
    pub factorization_discrepancy: f64,
    /// The inverse recomputed from scratch for `A + E`, when it exists.
    pub direct_inverse: Option<Matrix>,
    /// `‖formula_inverse − direct_inverse‖`.
    pub discrepancy: Option<f64>,
    pub bound_value: Bound,
    /// `‖X_E − X‖`, using the direct inverse when available.
    pub actual_error: f64,
    /// `max(1, ‖A‖·‖X‖, ‖A + E‖·‖X_E‖)`.
    pub scale: f64,
}

/// Strict variant: rejects perturbations outside the openness ball.
pub fn perturbed_bc_inverse(cert: &InverseCertificate, e: &Matrix) -> Result<PerturbationReport> {
    let radius = openness_radius(cert)?;
    let norm = kernel::spectral_norm(e);
    if norm >= radius {
        return Err(GenInvError::OutsideOpennessBall { norm, radius });
    }
    perturbed_bc_inverse_flagged(cert, e)
}

/// Evaluates the closed form for any `E`, flagging points outside the ball.
/// Inside the ball a failed direct recomputation is an error; outside it is
/// recorded as a missing direct inverse.
pub fn perturbed_bc_inverse_flagged(
    cert: &InverseCertificate,
    e: &Matrix,
) -> Result<PerturbationReport> {
    let radius = openness_radius(cert)?;
    let a = cert.operand();
    kernel::ensure_finite(e)?;
    if e.shape() != a.shape() {
        return Err(GenInvError::mismatch(
            "perturbed_bc_inverse",
            format!("{}x{}", a.nrows(), a.ncols()),
            format!("{}x{}", e.nrows(), e.ncols()),
        ));
    }
    let x = &cert.inverse;
    let norm = kernel::spectral_norm(e);
    let outside_ball = norm >= radius;

    let left_factor = kernel::identity(x.nrows()) + x * e;
    let right_factor = kernel::identity(e.nrows()) + e * x;
    let left = left_factor
        .lu()
        .solve(x)
        .ok_or(GenInvError::SingularFactor)?;
    let right = right_factor
        .transpose()
        .lu()
        .solve(&x.transpose())
        .ok_or(GenInvError::SingularFactor)?
        .transpose();
    let factorization_discrepancy = kernel::spectral_norm(&(&left - &right));

    let perturbed = a + e;
    let tol = cert.problem.range.tolerance();
    let direct = match &cert.problem.generators {
        Some((b, c)) => inverse::bc_inverse(&perturbed, b, c, tol),
        None => inverse::outer_prescribed(&perturbed, &cert.problem.range, &cert.problem.nullspace),
    };
    let direct_inverse = match direct {
        Ok(d) => Some(d.inverse),
        Err(_) if outside_ball => None,
        Err(err) => return Err(err),
    };
    let discrepancy = direct_inverse
        .as_ref()
        .map(|d| kernel::spectral_norm(&(&left - d)));

    let nx = kernel::spectral_norm(x);
    let kappa = kernel::spectral_norm(a) * nx;
    let bound_value = perturbation_bound(kappa, 0.0, 0.0, nx * norm, nx);
    let actual_error = kernel::spectral_norm(&(direct_inverse.as_ref().unwrap_or(&left) - x));
    let scale = (kernel::spectral_norm(&perturbed) * kernel::spectral_norm(&left))
        .max(cert.scale)
        .max(1.0);

    Ok(PerturbationReport {
        radius,
        perturbation_norm: norm,
        outside_ball,
        formula_inverse: left,
        factorization_discrepancy,
        direct_inverse,
        discrepancy,
        bound_value,
        actual_error,
        scale,
    })
}

/// Either a numeric bound or a note that its premises fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Value(f64),
    Inapplicable,
}

impl Bound {
    pub fn value(self) -> Option<f64> {
        match self {
            Bound::Value(v) => Some(v),
            Bound::Inapplicable => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Value(v) => write!(f, "{v}"),
            Bound::Inapplicable => f.write_str("inapplicable"),
        }
    }
}

impl serde::Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Value(v) => s.serialize_f64(*v),
            Bound::Inapplicable => s.serialize_str("inapplicable"),
        }
    }
}

/// Upper bound on `‖Xₙ − X‖` when the operand moves by `z/‖X‖`, the range
/// of the generator by gap `v` and the null space by gap `u`:
///
/// `[(1+κ)(v+u) + (1+u)z] / [1 − (1+κ)v − κu − (1+u)z] · ‖X‖`
///
/// valid when `u < 1/(3+κ)`, `v < 1/(1+κ)²` and `z < 2κ/((1+κ)(4+κ))`.
pub fn perturbation_bound(kappa: f64, u: f64, v: f64, z: f64, inv_norm: f64) -> Bound {
    let inputs = [kappa, u, v, z, inv_norm];
    if inputs.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Bound::Inapplicable;
    }
    let premises = u < 1.0 / (3.0 + kappa)
        && v < 1.0 / ((1.0 + kappa) * (1.0 + kappa))
        && z < 2.0 * kappa / ((1.0 + kappa) * (4.0 + kappa));
    let numerator = (1.0 + kappa) * (v + u) + (1.0 + u) * z;
    let denominator = 1.0 - (1.0 + kappa) * v - kappa * u - (1.0 + u) * z;
    if !premises || denominator <= 0.0 {
        return Bound::Inapplicable;
    }
    Bound::Value(numerator / denominator * inv_norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{diag_real, from_real, ToleranceConfig};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn scalar_cert(a: f64) -> InverseCertificate {
        let one = from_real(1, 1, &[1.0]);
        inverse::bc_inverse(&from_real(1, 1, &[a]), &one, &one, &tol()).unwrap()
    }

    fn diag_cert() -> InverseCertificate {
        let b = diag_real(&[1.0, 1.0, 0.0]);
        inverse::bc_inverse(&diag_real(&[1.0, 2.0, 3.0]), &b, &b, &tol()).unwrap()
    }

    #[test]
    fn radius_examples() {
        assert!((openness_radius(&scalar_cert(1.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((openness_radius(&diag_cert()).unwrap() - 1.0).abs() < 1e-15);
        let z = Matrix::zeros(2, 2);
        let cert = inverse::bc_inverse(&kernel::identity(2), &z, &z, &tol()).unwrap();
        assert_eq!(
            openness_radius(&cert).unwrap_err(),
            GenInvError::ZeroInverse
        );
    }

    #[test]
    fn zero_perturbation_is_exact() {
        let cert = diag_cert();
        let report = perturbed_bc_inverse(&cert, &Matrix::zeros(3, 3)).unwrap();
        assert_eq!(report.formula_inverse, cert.inverse);
        assert_eq!(report.actual_error, 0.0);
    }

    #[test]
    fn scalar_perturbation() {
        let report = perturbed_bc_inverse(&scalar_cert(1.0), &from_real(1, 1, &[0.5])).unwrap();
        assert!((report.formula_inverse[(0, 0)].re - 2.0 / 3.0).abs() < 1e-15);
        assert!(report.factorization_discrepancy < 1e-15);
        assert!(report.discrepancy.unwrap() < 1e-15);
    }

    #[test]
    fn diagonal_perturbation() {
        let e = diag_real(&[0.1, 0.0, 0.0]);
        let report = perturbed_bc_inverse(&diag_cert(), &e).unwrap();
        let expected = diag_real(&[1.0 / 1.1, 0.5, 0.0]);
        assert!((&report.formula_inverse - &expected).norm() < 1e-15);
        assert!(report.discrepancy.unwrap() < 1e-15);
        assert!(!report.outside_ball);
    }

    #[test]
    fn outside_ball_is_rejected_or_flagged() {
        let cert = scalar_cert(1.0);
        let e = from_real(1, 1, &[2.0]);
        let err = perturbed_bc_inverse(&cert, &e).unwrap_err();
        assert!(matches!(err, GenInvError::OutsideOpennessBall { .. }));
        let report = perturbed_bc_inverse_flagged(&cert, &e).unwrap();
        assert!(report.outside_ball);
        assert!((report.formula_inverse[(0, 0)].re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(
            perturbation_bound(1.0, 0.0, 0.0, 0.0, 1.0),
            Bound::Value(0.0)
        );
        let b = perturbation_bound(1.0, 0.0, 0.0, 0.1, 1.0).value().unwrap();
        assert!((b - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(
            perturbation_bound(1.0, 0.5, 0.0, 0.0, 1.0),
            Bound::Inapplicable
        );
    }

    #[test]
    fn bound_serializes_as_number_or_tag() {
        assert_eq!(serde_json::to_string(&Bound::Value(0.5)).unwrap(), "0.5");
        assert_eq!(
            serde_json::to_string(&Bound::Inapplicable).unwrap(),
            "\"inapplicable\""
        );
    }
}
