//! Seeded random matrices and solvable instances for tests, sequence
//! families and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::calculus::{CurveProblem, DerivativeKind, MatrixCurve};
use crate::error::{GenInvError, Result};
use crate::inverse::{self, InverseCertificate};
use crate::kernel::{self, Matrix, ToleranceConfig, C64};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard Gaussian entries; complex entries have independent real and
/// imaginary parts of variance 1/2.
pub fn gaussian(rng: &mut Rng64, rows: usize, cols: usize, complex: bool) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        if complex {
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        } else {
            C64::new(re, 0.0)
        }
    })
}

/// A product of Gaussian `rows × rank` and `rank × cols` factors, of rank
/// `rank` almost surely.
pub fn low_rank(rng: &mut Rng64, rows: usize, cols: usize, rank: usize, complex: bool) -> Matrix {
    if rank == 0 {
        return Matrix::zeros(rows, cols);
    }
    let l = gaussian(rng, rows, rank, complex);
    let r = gaussian(rng, rank, cols, complex);
    (l * r).unscale((rank as f64).sqrt())
}

/// A random skew-Hermitian matrix of unit spectral norm.
pub fn skew_hermitian(rng: &mut Rng64, n: usize, complex: bool) -> Matrix {
    let g = gaussian(rng, n, n, complex);
    let k = &g - g.adjoint();
    let norm = kernel::spectral_norm(&k);
    if norm == 0.0 {
        k
    } else {
        k.unscale(norm)
    }
}

/// Cayley transform `(I − θK/2)⁻¹(I + θK/2)`, unitary for skew-Hermitian `K`.
pub fn cayley(k: &Matrix, theta: f64) -> Matrix {
    let n = k.nrows();
    let half = k * C64::from(theta / 2.0);
    let num = kernel::identity(n) + &half;
    let den = kernel::identity(n) - half;
    den.lu()
        .solve(&num)
        .expect("I − θK/2 is invertible for skew-Hermitian K")
}

/// A random unitary matrix.
pub fn unitary(rng: &mut Rng64, n: usize, complex: bool) -> Matrix {
    let k = skew_hermitian(rng, n, complex);
    let theta = 1.0 + 2.0 * rng.random::<f64>();
    cayley(&k, theta)
}

/// A random matrix with prescribed singular values.
pub fn with_singular_values(
    rng: &mut Rng64,
    rows: usize,
    cols: usize,
    sigma: &[f64],
    complex: bool,
) -> Matrix {
    let u = unitary(rng, rows, complex);
    let v = unitary(rng, cols, complex);
    let mut d = Matrix::zeros(rows, cols);
    for (i, s) in sigma.iter().enumerate().take(rows.min(cols)) {
        d[(i, i)] = C64::from(*s);
    }
    u * d * v.adjoint()
}

/// A square `(A, B, C)` whose (B,C)-inverse exists with moderate
/// conditioning: `A|_{R(B)}` has condition at most `1e4` and the direct-sum
/// margin is at least `1e-3`.
#[derive(Debug, Clone)]
pub struct SolvableInstance {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub certificate: InverseCertificate,
}

pub fn solvable_bc(
    rng: &mut Rng64,
    n: usize,
    rank: usize,
    complex: bool,
    tol: &ToleranceConfig,
) -> Result<SolvableInstance> {
    if rank == 0 || rank > n {
        return Err(GenInvError::InvalidArgument(format!(
            "rank must lie in 1..={n}, got {rank}"
        )));
    }
    for _ in 0..1000 {
        let a = gaussian(rng, n, n, complex);
        let b = low_rank(rng, n, n, rank, complex);
        let c = low_rank(rng, n, n, rank, complex);
        if let Ok(certificate) = inverse::bc_inverse(&a, &b, &c, tol) {
            if certificate.restricted_condition <= 1e4 && certificate.complement_margin >= 1e-3 {
                return Ok(SolvableInstance {
                    a,
                    b,
                    c,
                    certificate,
                });
            }
        }
    }
    Err(GenInvError::InvalidArgument(
        "no well-conditioned solvable instance found".into(),
    ))
}

/// `X(Y*X)⁻¹Y*` for Gaussian `n × rank` factors: an oblique idempotent of
/// rank `rank`.
pub fn oblique_idempotent(rng: &mut Rng64, n: usize, rank: usize, complex: bool) -> Result<Matrix> {
    let x = gaussian(rng, n, rank, complex);
    let y = gaussian(rng, n, rank, complex);
    let core = (y.adjoint() * &x)
        .try_inverse()
        .ok_or_else(|| GenInvError::InvalidArgument("singular idempotent core".into()))?;
    Ok(x * core * y.adjoint())
}

/// `t ↦ A₀ + sin(t)·A₁ + t²/2·A₂`.
fn smooth_operand(rng: &mut Rng64, n: usize, complex: bool, label: &str) -> MatrixCurve {
    let a0 = gaussian(rng, n, n, complex);
    let a1 = gaussian(rng, n, n, complex) * C64::from(0.5);
    let a2 = gaussian(rng, n, n, complex) * C64::from(0.5);
    MatrixCurve::global(label, move |t| {
        &a0 + &a1 * C64::from(t.sin()) + &a2 * C64::from(t * t / 2.0)
    })
}

/// `t ↦ G(t)·M·H(t)*` for Cayley unitaries `G`, `H`; the rank is constant.
fn rotated(rng: &mut Rng64, m: Matrix, complex: bool, label: &str) -> MatrixCurve {
    let kg = skew_hermitian(rng, m.nrows(), complex);
    let kh = skew_hermitian(rng, m.ncols(), complex);
    MatrixCurve::global(label, move |t| {
        cayley(&kg, t) * &m * cayley(&kh, t).adjoint()
    })
}

/// `t ↦ S(t)·P·S(t)⁻¹` with `S(t) = I + t·M`, `‖M‖ = 1/2`; idempotent for
/// `|t| < 2`.
fn conjugated(rng: &mut Rng64, p: Matrix, complex: bool, label: &str) -> MatrixCurve {
    let n = p.nrows();
    let m = skew_hermitian(rng, n, complex) + gaussian(rng, n, n, complex);
    let m = &m * C64::from(0.5 / kernel::spectral_norm(&m));
    MatrixCurve::new(label, (-2.0, 2.0), move |t| {
        let s = kernel::identity(n) + &m * C64::from(t);
        let s_inv = s
            .clone()
            .try_inverse()
            .expect("I + tM is invertible for |t| < 2");
        s * &p * s_inv
    })
}

/// Widest offset from `t = 0` reached by the default step sweep together
/// with the stencil differentiating the input curves.
const CURVE_REACH: f64 = 0.02;

/// A random smooth curve problem with a well-conditioned inverse near
/// `t = 0`: the (B,C) kind uses constant-rank rotating generators, the
/// outer kind conjugated idempotents and the Moore-Penrose kind a
/// constant-rank operand.
pub fn smooth_curve_problem(
    rng: &mut Rng64,
    kind: DerivativeKind,
    n: usize,
    rank: usize,
    complex: bool,
    tol: &ToleranceConfig,
) -> Result<CurveProblem> {
    if rank == 0 || rank > n {
        return Err(GenInvError::InvalidArgument(format!(
            "rank must lie in 1..={n}, got {rank}"
        )));
    }
    for _ in 0..1000 {
        let problem = match kind {
            DerivativeKind::Bc => {
                let a = smooth_operand(rng, n, complex, "a");
                let b0 = low_rank(rng, n, n, rank, complex);
                let b = rotated(rng, b0, complex, "b");
                let c0 = low_rank(rng, n, n, rank, complex);
                let c = rotated(rng, c0, complex, "c");
                CurveProblem::Bc {
                    a,
                    b,
                    c,
                    inner: None,
                }
            }
            DerivativeKind::Oip => {
                let a = smooth_operand(rng, n, complex, "A");
                let p0 = oblique_idempotent(rng, n, rank, complex)?;
                let p = conjugated(rng, p0, complex, "P");
                let q0 = oblique_idempotent(rng, n, n - rank, complex)?;
                let q = conjugated(rng, q0, complex, "Q");
                CurveProblem::Oip { a, p, q }
            }
            DerivativeKind::Mp => {
                let l0 = gaussian(rng, n, rank, complex);
                let l1 = gaussian(rng, n, rank, complex) * C64::from(0.5);
                let r0 = gaussian(rng, rank, n, complex);
                let r1 = gaussian(rng, rank, n, complex) * C64::from(0.5);
                let core = MatrixCurve::global("core", move |t| {
                    (&l0 + &l1 * C64::from(t)) * (&r0 + &r1 * C64::from(t))
                });
                let kg = skew_hermitian(rng, n, complex);
                let kh = skew_hermitian(rng, n, complex);
                let a = MatrixCurve::global("a", move |t| {
                    cayley(&kg, t) * core.eval(t).expect("global curve") * cayley(&kh, t).adjoint()
                });
                CurveProblem::Mp { a }
            }
        };
        if well_conditioned(&problem, rank, tol) {
            return Ok(problem);
        }
    }
    Err(GenInvError::InvalidArgument(
        "no well-conditioned curve problem found".into(),
    ))
}

fn well_conditioned(problem: &CurveProblem, rank: usize, tol: &ToleranceConfig) -> bool {
    (-4..=4).all(|i| {
        let t = CURVE_REACH * f64::from(i) / 4.0;
        let cert = match problem {
            CurveProblem::Bc { a, b, c, .. } => {
                (|| inverse::bc_inverse(&a.eval(t)?, &b.eval(t)?, &c.eval(t)?, tol))()
            }
            CurveProblem::Oip { a, p, q } => (|| {
                let range = crate::subspace::column_space(&p.eval(t)?, tol)?;
                let null = crate::subspace::column_space(&q.eval(t)?, tol)?;
                inverse::outer_prescribed(&a.eval(t)?, &range, &null)
            })(),
            CurveProblem::Mp { a } => {
                let Ok(m) = a.eval(t) else { return false };
                let Ok(s) = kernel::svd(&m) else { return false };
                return s.rank(tol) == rank && s.sigma[0] / s.sigma[rank - 1] <= 1e3;
            }
        };
        cert.is_ok_and(|c| c.restricted_condition <= 1e3 && c.complement_margin >= 5e-2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_are_deterministic() {
        let a = gaussian(&mut rng(3), 4, 5, true);
        let b = gaussian(&mut rng(3), 4, 5, true);
        assert_eq!(a, b);
    }

    #[test]
    fn low_rank_has_requested_rank() {
        let tol = ToleranceConfig::default();
        let m = low_rank(&mut rng(1), 6, 5, 2, true);
        assert_eq!(kernel::svd(&m).unwrap().rank(&tol), 2);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = unitary(&mut rng(2), 5, true);
        assert!((u.adjoint() * &u - kernel::identity(5)).norm() < 1e-13);
    }

    #[test]
    fn prescribed_singular_values() {
        let m = with_singular_values(&mut rng(4), 4, 3, &[3.0, 2.0, 0.5], false);
        let s = kernel::svd(&m).unwrap().sigma;
        for (x, y) in s.iter().zip([3.0, 2.0, 0.5]) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn oblique_idempotent_is_idempotent() {
        let p = oblique_idempotent(&mut rng(6), 5, 2, true).unwrap();
        assert!((&p * &p - &p).norm() < 1e-10);
    }

    #[test]
    fn smooth_curve_problems_pass_derivative_check() {
        let tol = ToleranceConfig::default();
        let mut r = rng(7);
        for kind in [DerivativeKind::Bc, DerivativeKind::Oip, DerivativeKind::Mp] {
            let problem = smooth_curve_problem(&mut r, kind, 4, 2, true, &tol).unwrap();
            let report = crate::calculus::finite_difference_check(&problem, 0.0, &tol).unwrap();
            assert!(
                report.observed_order.at_least(1.8),
                "{kind:?} {:?}",
                report.fd_errors
            );
            assert!(
                report.final_error() <= 1e-6 * report.scale,
                "{kind:?} {:?}",
                report.fd_errors
            );
        }
    }

    #[test]
    fn solvable_instances_exist() {
        let tol = ToleranceConfig::default();
        let inst = solvable_bc(&mut rng(5), 5, 3, true, &tol).unwrap();
        assert!(inst.certificate.max_relative_residual() < 1e-10);
    }
}
