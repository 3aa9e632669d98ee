//! Derivatives of generalized inverses along smooth matrix curves, checked
//! against central differences of the inverse curve.

use std::fmt;
use std::sync::Arc;

use crate::error::{GenInvError, Result};
use crate::inverse;
use crate::kernel::{self, Matrix, ToleranceConfig};
use crate::subspace::{self, ObliqueProjector};

/// Step of the five-point stencil used to differentiate the input curves.
pub const CURVE_STEP: f64 = 1e-3;

type Evaluator = dyn Fn(f64) -> Matrix + Send + Sync;

/// A matrix-valued function on an open interval.
#[derive(Clone)]
pub struct MatrixCurve {
    label: String,
    domain: (f64, f64),
    evaluator: Arc<Evaluator>,
}

impl fmt::Debug for MatrixCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixCurve")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

impl MatrixCurve {
    pub fn new(
        label: impl Into<String>,
        domain: (f64, f64),
        evaluator: impl Fn(f64) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        MatrixCurve {
            label: label.into(),
            domain,
            evaluator: Arc::new(evaluator),
        }
    }

    /// A curve defined on the whole real line.
    pub fn global(
        label: impl Into<String>,
        evaluator: impl Fn(f64) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        Self::new(label, (f64::NEG_INFINITY, f64::INFINITY), evaluator)
    }

    pub fn constant(label: impl Into<String>, m: Matrix) -> Self {
        Self::global(label, move |_| m.clone())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn eval(&self, t: f64) -> Result<Matrix> {
        if !(t > self.domain.0 && t < self.domain.1) {
            return Err(GenInvError::OutsideCurveDomain {
                label: self.label.clone(),
                t,
            });
        }
        let m = (self.evaluator)(t);
        kernel::ensure_finite(&m)?;
        Ok(m)
    }

    /// Pointwise product `t ↦ self(t)·other(t)`.
    pub fn times(&self, other: &MatrixCurve) -> MatrixCurve {
        let (f, g) = (self.evaluator.clone(), other.evaluator.clone());
        MatrixCurve {
            label: format!("{}·{}", self.label, other.label),
            domain: (
                self.domain.0.max(other.domain.0),
                self.domain.1.min(other.domain.1),
            ),
            evaluator: Arc::new(move |t| f(t) * g(t)),
        }
    }

    /// `t ↦ self(t)†`.
    pub fn pinv(&self, tol: &ToleranceConfig) -> MatrixCurve {
        let (f, tol) = (self.evaluator.clone(), tol.clone());
        MatrixCurve {
            label: format!("{}†", self.label),
            domain: self.domain,
            evaluator: Arc::new(move |t| pinv_or_nan(&f(t), &tol)),
        }
    }

    /// Five-point central difference with step `h`.
    pub fn derivative(&self, t: f64, h: f64) -> Result<Matrix> {
        let f = |s: f64| self.eval(s);
        Ok(
            (f(t - 2.0 * h)? - f(t + 2.0 * h)? + (f(t + h)? - f(t - h)?) * kernel::C64::from(8.0))
                / kernel::C64::from(12.0 * h),
        )
    }

    /// Plain two-point central difference with step `h`.
    pub fn central_difference(&self, t: f64, h: f64) -> Result<Matrix> {
        Ok((self.eval(t + h)? - self.eval(t - h)?) / kernel::C64::from(2.0 * h))
    }
}

fn pinv_or_nan(m: &Matrix, tol: &ToleranceConfig) -> Matrix {
    match inverse::moore_penrose(m, tol) {
        Ok(cert) => cert.inverse,
        Err(_) => Matrix::from_element(m.ncols(), m.nrows(), kernel::C64::new(f64::NAN, 0.0)),
    }
}

fn check_operands(context: &'static str, x: &Matrix, a: &Matrix) -> Result<()> {
    if x.shape() != (a.ncols(), a.nrows()) {
        return Err(GenInvError::mismatch(
            context,
            format!("{}x{} inverse", a.ncols(), a.nrows()),
            format!("{}x{}", x.nrows(), x.ncols()),
        ));
    }
    Ok(())
}

/// `X(hc)′(I − AX) + (I − XA)(bg)′X − XA′X` for `X = A^{-(B,C)}`, `g` an
/// inner inverse of `b` and `h` one of `c`.
pub fn bc_derivative(
    ainv0: &Matrix,
    a0: &Matrix,
    aprime: &Matrix,
    hc_prime: &Matrix,
    bg_prime: &Matrix,
) -> Result<Matrix> {
    let (m, n) = a0.shape();
    check_operands("bc_derivative", ainv0, a0)?;
    kernel::check_same_shape("bc_derivative A′", a0, aprime)?;
    check_square_of("bc_derivative (hc)′", hc_prime, m)?;
    check_square_of("bc_derivative (bg)′", bg_prime, n)?;
    let x = ainv0;
    let i_ax = kernel::identity(m) - a0 * x;
    let i_xa = kernel::identity(n) - x * a0;
    Ok(x * hc_prime * i_ax + i_xa * bg_prime * x - x * aprime * x)
}

fn check_square_of(context: &'static str, p: &Matrix, dim: usize) -> Result<()> {
    if p.shape() != (dim, dim) {
        return Err(GenInvError::mismatch(
            context,
            format!("{dim}x{dim}"),
            format!("{}x{}", p.nrows(), p.ncols()),
        ));
    }
    Ok(())
}

/// `−XQ′(I − AX) + (I − XA)P′X − XA′X` for `X = A^(2)_{R(P),R(Q)}`.
pub fn oip_derivative(
    ainv0: &Matrix,
    a0: &Matrix,
    aprime: &Matrix,
    pprime: &Matrix,
    qprime: &Matrix,
) -> Result<Matrix> {
    let (m, n) = a0.shape();
    check_operands("oip_derivative", ainv0, a0)?;
    kernel::check_same_shape("oip_derivative A′", a0, aprime)?;
    check_square_of("oip_derivative P′", pprime, n)?;
    check_square_of("oip_derivative Q′", qprime, m)?;
    let x = ainv0;
    let i_ax = kernel::identity(m) - a0 * x;
    let i_xa = kernel::identity(n) - x * a0;
    Ok(-(x * qprime * i_ax) + i_xa * pprime * x - x * aprime * x)
}

/// `a†(aa†)′(I − aa†) + (I − a†a)(a†a)′a† − a†a′a†`.
pub fn mp_derivative(
    a0: &Matrix,
    adag0: &Matrix,
    aprime: &Matrix,
    aadag_prime: &Matrix,
    adaga_prime: &Matrix,
) -> Result<Matrix> {
    let (m, n) = a0.shape();
    check_operands("mp_derivative", adag0, a0)?;
    kernel::check_same_shape("mp_derivative a′", a0, aprime)?;
    check_square_of("mp_derivative (aa†)′", aadag_prime, m)?;
    check_square_of("mp_derivative (a†a)′", adaga_prime, n)?;
    let x = adag0;
    let i_ax = kernel::identity(m) - a0 * x;
    let i_xa = kernel::identity(n) - x * a0;
    Ok(x * aadag_prime * i_ax + i_xa * adaga_prime * x - x * aprime * x)
}

/// Inner-inverse curves `g ∈ b{1}`, `h ∈ c{1}` replacing the Moore-Penrose
/// default.
#[derive(Debug, Clone)]
pub struct InnerInverses {
    pub g: MatrixCurve,
    pub h: MatrixCurve,
}

/// The curves whose inverse is differentiated.
#[derive(Debug, Clone)]
pub enum CurveProblem {
    /// `t ↦ a(t)^{-(b(t), c(t))}`.
    Bc {
        a: MatrixCurve,
        b: MatrixCurve,
        c: MatrixCurve,
        inner: Option<InnerInverses>,
    },
    /// `t ↦ A(t)^(2)_{R(P(t)), R(Q(t))}` with idempotent `P`, `Q`.
    Oip {
        a: MatrixCurve,
        p: MatrixCurve,
        q: MatrixCurve,
    },
    /// `t ↦ a(t)†`.
    Mp { a: MatrixCurve },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeKind {
    Bc,
    Oip,
    Mp,
}

impl CurveProblem {
    pub fn kind(&self) -> DerivativeKind {
        match self {
            CurveProblem::Bc { .. } => DerivativeKind::Bc,
            CurveProblem::Oip { .. } => DerivativeKind::Oip,
            CurveProblem::Mp { .. } => DerivativeKind::Mp,
        }
    }

    /// The inverse curve evaluated at `t`.
    pub fn inverse_at(&self, t: f64, tol: &ToleranceConfig) -> Result<Matrix> {
        let built = match self {
            CurveProblem::Bc { a, b, c, .. } => {
                inverse::bc_inverse(&a.eval(t)?, &b.eval(t)?, &c.eval(t)?, tol)
            }
            CurveProblem::Oip { a, p, q } => {
                let range = subspace::column_space(&p.eval(t)?, tol)?;
                let nullspace = subspace::column_space(&q.eval(t)?, tol)?;
                inverse::outer_prescribed(&a.eval(t)?, &range, &nullspace)
            }
            CurveProblem::Mp { a } => inverse::moore_penrose(&a.eval(t)?, tol),
        };
        built.map(|c| c.inverse).map_err(|cause| match cause {
            GenInvError::OutsideCurveDomain { .. } => cause,
            cause => GenInvError::CurveLeavesInvertibleSet {
                t,
                cause: Box::new(cause),
            },
        })
    }

    /// The closed-form derivative at `t0`, with the input curves
    /// differentiated numerically.
    pub fn formula(&self, t0: f64, tol: &ToleranceConfig) -> Result<Matrix> {
        let x = self.inverse_at(t0, tol)?;
        let h = CURVE_STEP;
        match self {
            CurveProblem::Bc { a, b, c, inner } => {
                let (g, hh) = match inner {
                    Some(inner) => (inner.g.clone(), inner.h.clone()),
                    None => (b.pinv(tol), c.pinv(tol)),
                };
                let hc = hh.times(c).derivative(t0, h)?;
                let bg = b.times(&g).derivative(t0, h)?;
                bc_derivative(&x, &a.eval(t0)?, &a.derivative(t0, h)?, &hc, &bg)
            }
            CurveProblem::Oip { a, p, q } => oip_derivative(
                &x,
                &a.eval(t0)?,
                &a.derivative(t0, h)?,
                &p.derivative(t0, h)?,
                &q.derivative(t0, h)?,
            ),
            CurveProblem::Mp { a } => {
                let dag = a.pinv(tol);
                mp_derivative(
                    &a.eval(t0)?,
                    &x,
                    &a.derivative(t0, h)?,
                    &a.times(&dag).derivative(t0, h)?,
                    &dag.times(a).derivative(t0, h)?,
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObservedOrder {
    /// Every difference quotient already matches the formula to tolerance.
    Exact,
    Fitted(f64),
}

impl ObservedOrder {
    /// The fitted order, with `Exact` counted as infinitely good.
    pub fn at_least(self, order: f64) -> bool {
        match self {
            ObservedOrder::Exact => true,
            ObservedOrder::Fitted(p) => p >= order,
        }
    }
}

impl serde::Serialize for ObservedOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ObservedOrder::Exact => s.serialize_str("exact"),
            ObservedOrder::Fitted(p) => s.serialize_f64(*p),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DerivativeReport {
    pub kind: DerivativeKind,
    pub t0: f64,
    pub formula_derivative: Matrix,
    /// `(step, ‖central difference − formula‖)` for each step of the sweep.
    pub fd_errors: Vec<(f64, f64)>,
    pub observed_order: ObservedOrder,
    /// `max(1, ‖formula‖, ‖X(t0)‖)`.
    pub scale: f64,
}

impl DerivativeReport {
    pub fn final_error(&self) -> f64 {
        self.fd_errors.last().map_or(0.0, |&(_, e)| e)
    }
}

/// Compares the closed-form derivative with central differences of the
/// inverse curve at every step of `tol.fd_step_sweep`.
pub fn finite_difference_check(
    problem: &CurveProblem,
    t0: f64,
    tol: &ToleranceConfig,
) -> Result<DerivativeReport> {
    tol.validate()?;
    let formula = problem.formula(t0, tol)?;
    let x0 = problem.inverse_at(t0, tol)?;
    let scale = kernel::spectral_norm(&formula)
        .max(kernel::spectral_norm(&x0))
        .max(1.0);
    let mut fd_errors = Vec::with_capacity(tol.fd_step_sweep.len());
    for &h in &tol.fd_step_sweep {
        let quotient = (problem.inverse_at(t0 + h, tol)? - problem.inverse_at(t0 - h, tol)?)
            / kernel::C64::from(2.0 * h);
        fd_errors.push((h, kernel::spectral_norm(&(quotient - &formula))));
    }
    let exact = fd_errors
        .iter()
        .all(|&(_, e)| e <= tol.residual_tol * scale);
    let observed_order = if exact {
        ObservedOrder::Exact
    } else {
        ObservedOrder::Fitted(fit_order(&fd_errors))
    };
    Ok(DerivativeReport {
        kind: problem.kind(),
        t0,
        formula_derivative: formula,
        fd_errors,
        observed_order,
        scale,
    })
}

/// Least-squares slope of `log(error)` against `log(step)`, dropping the
/// largest and smallest step when at least four are available.
pub fn fit_order(errors: &[(f64, f64)]) -> f64 {
    let inner = if errors.len() >= 4 {
        &errors[1..errors.len() - 1]
    } else {
        errors
    };
    let points: Vec<(f64, f64)> = inner
        .iter()
        .filter(|&&(h, e)| h > 0.0 && e > 0.0)
        .map(|&(h, e)| (h.ln(), e.ln()))
        .collect();
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Norm of the difference between the two sides of
///
/// `Y − X = Y(P_S − P_U)(I − AX) + (I − YB)(P_V − P_T)X − Y(B − A)X`
///
/// for `X = A^(2)_{T,S}` and `Y = B^(2)_{V,U}`, with idempotents onto
/// `T, V ⊆ ℂⁿ` and `S, U ⊆ ℂᵐ`. The identity is exact.
#[allow(clippy::too_many_arguments)]
pub fn outer_difference_residual(
    a: &Matrix,
    bm: &Matrix,
    ainv: &Matrix,
    binv: &Matrix,
    pt: &ObliqueProjector,
    pv: &ObliqueProjector,
    ps: &ObliqueProjector,
    pu: &ObliqueProjector,
) -> Result<f64> {
    let (m, n) = a.shape();
    kernel::check_same_shape("outer_difference_residual B", a, bm)?;
    check_operands("outer_difference_residual A⁽²⁾", ainv, a)?;
    check_operands("outer_difference_residual B⁽²⁾", binv, bm)?;
    for (p, dim) in [(pt, n), (pv, n), (ps, m), (pu, m)] {
        if p.matrix.shape() != (dim, dim) {
            return Err(GenInvError::mismatch(
                "outer_difference_residual projector",
                format!("{dim}x{dim}"),
                format!("{}x{}", p.matrix.nrows(), p.matrix.ncols()),
            ));
        }
    }
    let (x, y) = (ainv, binv);
    let rhs = y * (&ps.matrix - &pu.matrix) * (kernel::identity(m) - a * x)
        + (kernel::identity(n) - y * bm) * (&pv.matrix - &pt.matrix) * x
        - y * (bm - a) * x;
    Ok(kernel::spectral_norm(&((y - x) - rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{diag_real, from_real, identity, C64};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn scalar(t: f64) -> Matrix {
        from_real(1, 1, &[t])
    }

    fn rotating_projector(t: f64) -> Matrix {
        let (c, s) = (t.cos(), t.sin());
        from_real(2, 2, &[c * c, c * s, c * s, s * s])
    }

    #[test]
    fn bc_derivative_examples() {
        let one = scalar(1.0);
        let zero = scalar(0.0);
        let d = bc_derivative(&one, &one, &one, &zero, &zero).unwrap();
        assert_eq!(d, scalar(-1.0));

        let a = diag_real(&[2.0, 1.0]);
        let z = Matrix::zeros(2, 2);
        let x = a.clone().try_inverse().unwrap();
        assert_eq!(bc_derivative(&x, &a, &z, &z, &z).unwrap(), z);
        let d = bc_derivative(&x, &a, &diag_real(&[1.0, 0.0]), &z, &z).unwrap();
        assert!((d - diag_real(&[-0.25, 0.0])).norm() < 1e-15);
    }

    #[test]
    fn mp_derivative_examples() {
        let i2 = identity(2);
        let z = Matrix::zeros(2, 2);
        assert_eq!(mp_derivative(&i2, &i2, &i2, &z, &z).unwrap(), -i2.clone());
        assert_eq!(mp_derivative(&i2, &i2, &z, &z, &z).unwrap(), z);
        let a = diag_real(&[2.0, 0.0]);
        let dag = diag_real(&[0.5, 0.0]);
        let d = mp_derivative(&a, &dag, &diag_real(&[1.0, 0.0]), &z, &z).unwrap();
        assert!((d - diag_real(&[-0.25, 0.0])).norm() < 1e-15);
    }

    #[test]
    fn oip_derivative_examples() {
        let z = Matrix::zeros(2, 2);
        let a = diag_real(&[2.0, 4.0]);
        let x = diag_real(&[0.5, 0.25]);
        assert_eq!(oip_derivative(&x, &a, &z, &z, &z).unwrap(), z);
        let d = oip_derivative(&x, &a, &identity(2), &z, &z).unwrap();
        assert!((d - diag_real(&[-0.25, -0.0625])).norm() < 1e-15);

        // A = I on a rotating pair: the inverse is P(t) itself.
        let p0 = rotating_projector(0.0);
        let pprime = from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let d = oip_derivative(&p0, &identity(2), &z, &pprime, &(-pprime.clone())).unwrap();
        assert!((d - pprime).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let z2 = Matrix::zeros(2, 2);
        let z3 = Matrix::zeros(3, 3);
        assert!(matches!(
            bc_derivative(&z2, &z2, &z3, &z2, &z2),
            Err(GenInvError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn constant_curves_are_exact() {
        let a = MatrixCurve::constant("a", diag_real(&[1.0, 2.0, 3.0]));
        let b = MatrixCurve::constant("b", diag_real(&[1.0, 1.0, 0.0]));
        let problem = CurveProblem::Bc {
            a,
            c: b.clone(),
            b,
            inner: None,
        };
        let report = finite_difference_check(&problem, 0.0, &tol()).unwrap();
        assert_eq!(report.observed_order, ObservedOrder::Exact);
        assert!(report.fd_errors.iter().all(|&(_, e)| e == 0.0));
    }

    #[test]
    fn scalar_reciprocal_has_second_order() {
        let one = MatrixCurve::constant("1", scalar(1.0));
        let problem = CurveProblem::Bc {
            a: MatrixCurve::new("t", (0.0, f64::INFINITY), scalar),
            b: one.clone(),
            c: one,
            inner: None,
        };
        let report = finite_difference_check(&problem, 1.0, &tol()).unwrap();
        assert!((report.formula_derivative[(0, 0)] - C64::from(-1.0)).norm() < 1e-12);
        match report.observed_order {
            ObservedOrder::Fitted(p) => assert!((p - 2.0).abs() < 0.05, "order {p}"),
            ObservedOrder::Exact => panic!("expected a fitted order"),
        }
        assert!(report.final_error() < 1e-8);
    }

    #[test]
    fn rotating_range_matches_projector_derivative() {
        let p = MatrixCurve::global("P", rotating_projector);
        let q = MatrixCurve::global("Q", |t| identity(2) - rotating_projector(t));
        let problem = CurveProblem::Oip {
            a: MatrixCurve::constant("I", identity(2)),
            p,
            q,
        };
        let report = finite_difference_check(&problem, 0.0, &tol()).unwrap();
        let expected = from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!((&report.formula_derivative - expected).norm() < 1e-10);
        assert!(
            report.observed_order.at_least(1.8),
            "{:?}",
            report.fd_errors
        );
        assert!(report.final_error() < 1e-8);
    }

    #[test]
    fn rotating_generator_range() {
        // X(t) projects onto span(cos t, sin t) along span(e2): [[1, 0], [tan t, 0]].
        let problem = CurveProblem::Bc {
            a: MatrixCurve::constant("I", identity(2)),
            b: MatrixCurve::global("b", |t| from_real(2, 2, &[t.cos(), 0.0, t.sin(), 0.0])),
            c: MatrixCurve::constant("c", diag_real(&[1.0, 0.0])),
            inner: None,
        };
        let t0 = 0.3;
        let report = finite_difference_check(&problem, t0, &tol()).unwrap();
        let sec2 = 1.0 / (t0.cos() * t0.cos());
        let expected = from_real(2, 2, &[0.0, 0.0, sec2, 0.0]);
        assert!((&report.formula_derivative - expected).norm() < 1e-10);
        assert!(
            report.observed_order.at_least(1.8),
            "{:?}",
            report.fd_errors
        );
    }

    #[test]
    fn mp_curve_with_rotating_singular_vectors() {
        // a(t) = u(t)v*, a† = v u(t)*, so (a†)′ = v u′(t)*.
        let v = from_real(2, 1, &[0.6, 0.8]);
        let vv = v.clone();
        let problem = CurveProblem::Mp {
            a: MatrixCurve::global("a", move |t| {
                from_real(2, 1, &[t.cos(), t.sin()]) * vv.adjoint()
            }),
        };
        let t0 = 0.4;
        let report = finite_difference_check(&problem, t0, &tol()).unwrap();
        let expected = v * from_real(1, 2, &[-t0.sin(), t0.cos()]);
        assert!((&report.formula_derivative - expected).norm() < 1e-10);
        assert!(
            report.observed_order.at_least(1.8),
            "{:?}",
            report.fd_errors
        );
    }

    #[test]
    fn mp_curve_with_rank_one() {
        let problem = CurveProblem::Mp {
            a: MatrixCurve::new("diag(t,0)", (0.0, f64::INFINITY), |t| diag_real(&[t, 0.0])),
        };
        let report = finite_difference_check(&problem, 2.0, &tol()).unwrap();
        assert!((&report.formula_derivative - diag_real(&[-0.25, 0.0])).norm() < 1e-10);
        assert!(report.observed_order.at_least(1.8));
    }

    #[test]
    fn leaving_the_invertible_set_is_reported() {
        let one = MatrixCurve::constant("1", scalar(1.0));
        let problem = CurveProblem::Bc {
            a: MatrixCurve::global("t", scalar),
            b: one.clone(),
            c: one,
            inner: None,
        };
        let err = finite_difference_check(&problem, 0.0, &tol()).unwrap_err();
        assert!(matches!(err, GenInvError::CurveLeavesInvertibleSet { t, .. } if t == 0.0));
    }

    #[test]
    fn curve_domain_is_enforced() {
        let c = MatrixCurve::new("log", (0.0, 1.0), |t| scalar(t.ln()));
        assert!(matches!(
            c.eval(1.5),
            Err(GenInvError::OutsideCurveDomain { .. })
        ));
    }

    #[test]
    fn fit_order_recovers_slope() {
        let errs: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&h| (h, 3.0 * h * h))
            .collect();
        assert!((fit_order(&errs) - 2.0).abs() < 1e-12);
    }

    fn projector(t: &subspace::Subspace, s: &subspace::Subspace) -> ObliqueProjector {
        subspace::oblique_projector(t, s).unwrap()
    }

    #[test]
    fn difference_identity_equal_pairs() {
        let a = diag_real(&[1.0, 2.0, 3.0]);
        let t = subspace::column_space(&diag_real(&[1.0, 1.0, 0.0]), &tol()).unwrap();
        let s = subspace::column_space(&diag_real(&[0.0, 0.0, 1.0]), &tol()).unwrap();
        let x = inverse::outer_prescribed(&a, &t, &s).unwrap().inverse;
        let pt = projector(&t, &s);
        let ps = projector(&s, &t);
        let r = outer_difference_residual(&a, &a, &x, &x, &pt, &pt, &ps, &ps).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn difference_identity_invertible_pairs() {
        let a = from_real(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let b = from_real(2, 2, &[3.0, 1.0, 0.0, 1.0]);
        let x = a.clone().try_inverse().unwrap();
        let y = b.clone().try_inverse().unwrap();
        let full = subspace::Subspace::full(2, &tol());
        let zero = subspace::Subspace::trivial(2, &tol());
        let p_full = projector(&full, &zero);
        let p_zero = projector(&zero, &full);
        let r =
            outer_difference_residual(&a, &b, &x, &y, &p_full, &p_full, &p_zero, &p_zero).unwrap();
        assert!(r < 1e-14);
    }
}
