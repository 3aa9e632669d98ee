//! Convergence diagnostics for sequences of (B,C)-inverse problems and of
//! Moore-Penrose inverses.
//!
//! Each index yields a map of named quantities (errors, gaps and projector
//! terms). A statement is a conjunction of quantities tending to zero, and a
//! family is a set of statements that must hold or fail together. A split
//! family is reported as an alarm.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{GenInvError, Result};
use crate::inverse::{self, InverseCertificate};
use crate::kernel::{self, Matrix, ToleranceConfig};
use crate::perturb::{self, Bound};
use crate::subspace::{self, Subspace};

/// Largest order for which left-ideal quantities are computed through the
/// `k² × k²` right regular representation.
pub const RIGHT_SIDED_MAX_ORDER: usize = 6;

/// Relative slack allowed between consecutive tail values in the trend test.
const MONOTONE_SLACK: f64 = 1e-6;

/// Largest log-log slope over the tail still read as decay.
const DECAY_SLOPE: f64 = -0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct BcProblem {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
}

impl BcProblem {
    pub fn new(a: Matrix, b: Matrix, c: Matrix) -> Self {
        BcProblem { a, b, c }
    }

    fn is_square_algebra(&self) -> bool {
        let k = self.a.nrows();
        [&self.a, &self.b, &self.c]
            .iter()
            .all(|m| m.nrows() == k && m.ncols() == k)
    }
}

type Statement = (&'static str, &'static [&'static str]);

const GAP_STATEMENTS: &[Statement] = &[
    ("inverse", &["inverse_error"]),
    ("products", &["left_product_error", "right_product_error"]),
    (
        "left_product_and_null_gap",
        &["left_product_error", "nullspace_gap"],
    ),
    (
        "right_product_and_range_gap",
        &["right_product_error", "range_gap"],
    ),
    ("generator_gaps", &["range_gap", "nullspace_gap"]),
    (
        "inverse_gaps",
        &["inverse_range_gap", "inverse_nullspace_gap"],
    ),
];

const OUTER_STATEMENTS: &[Statement] = &[
    ("inverse", &["inverse_error"]),
    ("products", &["left_product_error", "right_product_error"]),
    (
        "left_product_and_null_gap",
        &["left_product_error", "nullspace_gap"],
    ),
    (
        "right_product_and_range_gap",
        &["right_product_error", "range_gap"],
    ),
    ("subspace_gaps", &["range_gap", "nullspace_gap"]),
];

const ORTHOGONAL_STATEMENTS: &[Statement] = &[
    ("inverse", &["inverse_error"]),
    ("products", &["left_product_error", "right_product_error"]),
    (
        "left_product_and_null_projector",
        &["left_product_error", "orth_null_projector_error"],
    ),
    (
        "right_product_and_range_projector",
        &["right_product_error", "orth_range_projector_error"],
    ),
    (
        "orthogonal_projectors",
        &["orth_range_projector_error", "orth_null_projector_error"],
    ),
];

const PROJECTOR_STATEMENTS: &[Statement] = &[
    ("inverse", &["inverse_error"]),
    (
        "left_product_and_null_terms",
        &["left_product_error", "mp_null_terms_0", "mp_null_terms_1"],
    ),
    (
        "right_product_and_range_terms",
        &[
            "right_product_error",
            "mp_range_terms_0",
            "mp_range_terms_1",
        ],
    ),
    (
        "range_and_null_terms",
        &[
            "mp_range_terms_0",
            "mp_range_terms_1",
            "mp_null_terms_0",
            "mp_null_terms_1",
        ],
    ),
    (
        "right_product_and_cokernel_terms",
        &[
            "right_product_error",
            "mp_cokernel_terms_0",
            "mp_cokernel_terms_1",
        ],
    ),
    (
        "left_product_and_coimage_terms",
        &[
            "left_product_error",
            "mp_coimage_terms_0",
            "mp_coimage_terms_1",
        ],
    ),
    (
        "cokernel_and_coimage_terms",
        &[
            "mp_cokernel_terms_0",
            "mp_cokernel_terms_1",
            "mp_coimage_terms_0",
            "mp_coimage_terms_1",
        ],
    ),
    (
        "projectors",
        &["range_projector_error", "null_projector_error"],
    ),
];

const C_STAR_STATEMENTS: &[Statement] = &[
    ("inverse", &["inverse_error"]),
    (
        "left_product_and_null_projector",
        &["left_product_error", "null_projector_error"],
    ),
    (
        "right_product_and_range_projector",
        &["right_product_error", "range_projector_error"],
    ),
    (
        "projectors",
        &["range_projector_error", "null_projector_error"],
    ),
];

const C_STAR_B_STATEMENT: Statement = (
    "right_product_and_b_pinv",
    &["right_product_error", "b_pinv_error"],
);
const C_STAR_C_STATEMENT: Statement = (
    "left_product_and_c_pinv",
    &["left_product_error", "c_pinv_error"],
);
const C_STAR_BC_STATEMENT: Statement = ("generator_pinvs", &["b_pinv_error", "c_pinv_error"]);

const RIGHT_SIDED_STATEMENTS: &[Statement] = &[
    ("inverse", &["inverse_error"]),
    ("products", &["left_product_error", "right_product_error"]),
    (
        "right_product_and_annihilator_gap",
        &["right_product_error", "right_null_gap"],
    ),
    (
        "left_product_and_ideal_gap",
        &["left_product_error", "right_range_gap"],
    ),
    ("ideal_gaps", &["right_null_gap", "right_range_gap"]),
    (
        "inverse_ideal_gaps",
        &["right_inverse_range_gap", "right_inverse_nullspace_gap"],
    ),
];

const MP_GAP_STATEMENTS: &[Statement] = &[
    ("inverse", &["inverse_error"]),
    ("products", &["left_product_error", "right_product_error"]),
    (
        "left_product_and_null_gap",
        &["left_product_error", "nullspace_gap"],
    ),
    (
        "right_product_and_range_gap",
        &["right_product_error", "range_gap"],
    ),
    ("generator_gaps", &["range_gap", "nullspace_gap"]),
];

/// Inputs and outcome of the perturbation bound at one index.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub kappa: f64,
    pub u: f64,
    pub v: f64,
    pub z: f64,
    pub bound: Bound,
    pub actual: f64,
    /// `actual ≤ bound · (1 + 1e-6)`, vacuously true when inapplicable.
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexRecord {
    /// 1-based position in the sequence.
    pub index: usize,
    pub quantities: BTreeMap<&'static str, f64>,
    /// Largest discrepancy among the algebraic/geometric gap identities and
    /// the adjoint symmetries at this index.
    pub identity_defect: f64,
    pub bound: Option<BoundCheck>,
}

impl IndexRecord {
    /// The named quantity, or NaN when it was not computed.
    pub fn get(&self, name: &str) -> f64 {
        self.quantities.get(name).copied().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexFailure {
    pub index: usize,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyVerdict {
    pub statements: BTreeMap<&'static str, bool>,
    pub unanimous: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceDiagnostics {
    pub records: Vec<IndexRecord>,
    /// Indices whose inverse could not be formed; excluded from verdicts.
    pub failures: Vec<IndexFailure>,
    /// `max(1, ‖X‖, ‖A‖·‖X‖)` for the limit inverse `X`.
    pub scale: f64,
    /// Convergence verdict per quantity.
    pub quantity_verdicts: BTreeMap<&'static str, bool>,
    pub families: BTreeMap<&'static str, FamilyVerdict>,
    pub max_identity_defect: f64,
}

impl SequenceDiagnostics {
    /// Families whose statements disagree.
    pub fn alarms(&self) -> Vec<&'static str> {
        self.families
            .iter()
            .filter(|(_, v)| !v.unanimous)
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn verdict(&self, family: &str, statement: &str) -> Option<bool> {
        self.families
            .get(family)?
            .statements
            .get(statement)
            .copied()
    }

    /// True when every statement of every family holds.
    pub fn all_true(&self) -> bool {
        self.families
            .values()
            .all(|f| f.statements.values().all(|v| *v))
    }

    /// True when every statement of every family fails.
    pub fn all_false(&self) -> bool {
        self.families
            .values()
            .all(|f| f.statements.values().all(|v| !*v))
    }

    pub fn series(&self, name: &str) -> Vec<f64> {
        self.records.iter().map(|r| r.get(name)).collect()
    }

    pub fn bound_violations(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter(|r| r.bound.as_ref().is_some_and(|b| !b.holds))
            .map(|r| r.index)
            .collect()
    }
}

/// Finite proxy for "tends to zero" on `(index, value)` pairs.
///
/// A series converges when its final value is at most `floor`, or when its
/// last third is non-increasing (up to a relative slack) and its log-log
/// slope there is at most `-0.5`.
pub fn converged(series: &[(usize, f64)], floor: f64) -> bool {
    let Some(&(_, last)) = series.last() else {
        return false;
    };
    if !last.is_finite() {
        return false;
    }
    if last <= floor {
        return true;
    }
    if series.len() < 3 {
        return false;
    }
    let tail_len = series.len().div_ceil(3).max(3);
    let tail = &series[series.len() - tail_len..];
    if tail.iter().any(|(_, q)| !q.is_finite()) {
        return false;
    }
    let monotone = tail
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 * (1.0 + MONOTONE_SLACK) + floor);
    monotone && log_log_slope(tail, floor) <= DECAY_SLOPE
}

fn log_log_slope(points: &[(usize, f64)], floor: f64) -> f64 {
    let xs: Vec<f64> = points.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = points
        .iter()
        .map(|(_, q)| q.max(floor.max(f64::MIN_POSITIVE)).ln())
        .collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn norm(m: &Matrix) -> f64 {
    kernel::spectral_norm(m)
}

fn gap_value(m: &Subspace, n: &Subspace) -> Result<f64> {
    Ok(subspace::gap(m, n)?.gap)
}

fn pinv(m: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    Ok(inverse::moore_penrose(m, tol)?.inverse)
}

/// Projector data for generators `b`, `c` in a matrix algebra.
struct AlgebraSide {
    b: Matrix,
    c: Matrix,
    b_pinv: Matrix,
    c_pinv: Matrix,
    pb: Matrix,
    pc: Matrix,
    cokernel: Subspace,
    coimage: Subspace,
}

impl AlgebraSide {
    fn new(b: &Matrix, c: &Matrix, tol: &ToleranceConfig) -> Result<Self> {
        let b_pinv = pinv(b, tol)?;
        let c_pinv = pinv(c, tol)?;
        Ok(AlgebraSide {
            pb: b * &b_pinv,
            pc: &c_pinv * c,
            cokernel: subspace::null_space(&b.adjoint(), tol)?,
            coimage: subspace::column_space(&c.adjoint(), tol)?,
            b: b.clone(),
            c: c.clone(),
            b_pinv,
            c_pinv,
        })
    }
}

/// Fills the projector-term quantities and returns the identity defect
/// against the geometric gaps already present in `q`.
fn algebra_quantities(
    q: &mut BTreeMap<&'static str, f64>,
    lim: &AlgebraSide,
    cur: &AlgebraSide,
) -> Result<f64> {
    let k = lim.pb.nrows();
    let id = kernel::identity(k);
    let r0 = norm(&((&id - &lim.pb) * &cur.pb));
    let r1 = norm(&((&id - &cur.pb) * &lim.pb));
    let n0 = norm(&(&lim.pc * (&id - &cur.pc)));
    let n1 = norm(&(&cur.pc * (&id - &lim.pc)));
    let k0 = norm(&(&lim.pb * (&id - &cur.pb)));
    let k1 = norm(&(&cur.pb * (&id - &lim.pb)));
    let i0 = norm(&((&id - &lim.pc) * &cur.pc));
    let i1 = norm(&((&id - &cur.pc) * &lim.pc));
    let cokernel_gap = gap_value(&cur.cokernel, &lim.cokernel)?;
    let coimage_gap = gap_value(&cur.coimage, &lim.coimage)?;
    let entries = [
        ("mp_range_terms_0", r0),
        ("mp_range_terms_1", r1),
        ("mp_null_terms_0", n0),
        ("mp_null_terms_1", n1),
        ("mp_cokernel_terms_0", k0),
        ("mp_cokernel_terms_1", k1),
        ("mp_coimage_terms_0", i0),
        ("mp_coimage_terms_1", i1),
        ("range_projector_error", norm(&(&cur.pb - &lim.pb))),
        ("null_projector_error", norm(&(&cur.pc - &lim.pc))),
        ("generator_b_error", norm(&(&cur.b - &lim.b))),
        ("generator_c_error", norm(&(&cur.c - &lim.c))),
        ("b_pinv_error", norm(&(&cur.b_pinv - &lim.b_pinv))),
        ("c_pinv_error", norm(&(&cur.c_pinv - &lim.c_pinv))),
        ("cokernel_gap", cokernel_gap),
        ("coimage_gap", coimage_gap),
    ];
    q.extend(entries);
    let defects = [
        r0.max(r1) - q["range_gap"],
        n0.max(n1) - q["nullspace_gap"],
        k0.max(k1) - cokernel_gap,
        i0.max(i1) - coimage_gap,
        r0 - k1,
        r1 - k0,
        n0 - i1,
        n1 - i0,
    ];
    Ok(defects.iter().fold(0.0, |m, d| m.max(d.abs())))
}

/// Left-ideal subspaces through the right regular representation.
struct RightSide {
    annihilator: Subspace,
    ideal: Subspace,
    inverse_range: Subspace,
    inverse_null: Subspace,
}

impl RightSide {
    fn new(b: &Matrix, c: &Matrix, x: &Matrix, tol: &ToleranceConfig) -> Result<Self> {
        let k = b.nrows();
        let rx = inverse::right_regular(x, k)?;
        Ok(RightSide {
            annihilator: subspace::null_space(&inverse::right_regular(b, k)?, tol)?,
            ideal: subspace::column_space(&inverse::right_regular(c, k)?, tol)?,
            inverse_range: subspace::column_space(&rx, tol)?,
            inverse_null: subspace::null_space(&rx, tol)?,
        })
    }
}

fn right_quantities(
    q: &mut BTreeMap<&'static str, f64>,
    lim: &RightSide,
    cur: &RightSide,
) -> Result<f64> {
    let null_gap = gap_value(&cur.annihilator, &lim.annihilator)?;
    let range_gap = gap_value(&cur.ideal, &lim.ideal)?;
    q.insert("right_null_gap", null_gap);
    q.insert("right_range_gap", range_gap);
    q.insert(
        "right_inverse_range_gap",
        gap_value(&cur.inverse_range, &lim.inverse_range)?,
    );
    q.insert(
        "right_inverse_nullspace_gap",
        gap_value(&cur.inverse_null, &lim.inverse_null)?,
    );
    let cokernel = q["mp_cokernel_terms_0"].max(q["mp_cokernel_terms_1"]);
    let coimage = q["mp_coimage_terms_0"].max(q["mp_coimage_terms_1"]);
    Ok((cokernel - null_gap).abs().max((coimage - range_gap).abs()))
}

/// Limit-side data shared by all indices.
struct Limit {
    a: Matrix,
    x: Matrix,
    xa: Matrix,
    ax: Matrix,
    range: Subspace,
    nullspace: Subspace,
    inverse_range: Subspace,
    inverse_null: Subspace,
    orth_range: Matrix,
    orth_null: Matrix,
    kappa: f64,
    x_norm: f64,
}

impl Limit {
    fn new(cert: &InverseCertificate, tol: &ToleranceConfig) -> Result<Self> {
        let a = cert.operand().clone();
        let x = cert.inverse.clone();
        let x_norm = norm(&x);
        Ok(Limit {
            xa: &x * &a,
            ax: &a * &x,
            kappa: norm(&a) * x_norm,
            x_norm,
            range: cert.problem.range.clone(),
            nullspace: cert.problem.nullspace.clone(),
            inverse_range: subspace::column_space(&x, tol)?,
            inverse_null: subspace::null_space(&x, tol)?,
            orth_range: cert.problem.range.orthogonal_projector(),
            orth_null: cert.problem.nullspace.orthogonal_projector(),
            a,
            x,
        })
    }

    fn quantities(
        &self,
        cert: &InverseCertificate,
        tol: &ToleranceConfig,
    ) -> Result<BTreeMap<&'static str, f64>> {
        let a = cert.operand();
        let x = &cert.inverse;
        let mut q = BTreeMap::new();
        q.insert("inverse_error", norm(&(x - &self.x)));
        q.insert("left_product_error", norm(&(x * a - &self.xa)));
        q.insert("right_product_error", norm(&(a * x - &self.ax)));
        q.insert("range_gap", gap_value(&cert.problem.range, &self.range)?);
        q.insert(
            "nullspace_gap",
            gap_value(&cert.problem.nullspace, &self.nullspace)?,
        );
        q.insert(
            "inverse_range_gap",
            gap_value(&subspace::column_space(x, tol)?, &self.inverse_range)?,
        );
        q.insert(
            "inverse_nullspace_gap",
            gap_value(&subspace::null_space(x, tol)?, &self.inverse_null)?,
        );
        q.insert(
            "orth_range_projector_error",
            norm(&(cert.problem.range.orthogonal_projector() - &self.orth_range)),
        );
        q.insert(
            "orth_null_projector_error",
            norm(&(cert.problem.nullspace.orthogonal_projector() - &self.orth_null)),
        );
        Ok(q)
    }

    fn bound_check(&self, q: &BTreeMap<&'static str, f64>, a_n: &Matrix) -> BoundCheck {
        let u = q["nullspace_gap"];
        let v = q["range_gap"];
        let z = self.x_norm * norm(&(&self.a - a_n));
        let bound = perturb::perturbation_bound(self.kappa, u, v, z, self.x_norm);
        let actual = q["inverse_error"];
        let holds = match bound {
            Bound::Value(b) => actual <= b * (1.0 + 1e-6),
            Bound::Inapplicable => true,
        };
        BoundCheck {
            kappa: self.kappa,
            u,
            v,
            z,
            bound,
            actual,
            holds,
        }
    }

    fn scale(&self) -> f64 {
        self.x_norm.max(self.kappa).max(1.0)
    }
}

fn family_verdict(
    quantity_verdicts: &BTreeMap<&'static str, bool>,
    statements: &[Statement],
) -> FamilyVerdict {
    let statements: BTreeMap<&'static str, bool> = statements
        .iter()
        .map(|(label, names)| {
            let holds = names
                .iter()
                .all(|n| quantity_verdicts.get(n).copied().unwrap_or(false));
            (*label, holds)
        })
        .collect();
    let first = statements.values().next().copied();
    let unanimous = statements.values().all(|v| Some(*v) == first);
    FamilyVerdict {
        statements,
        unanimous,
    }
}

fn quantity_verdicts(records: &[IndexRecord], floor: f64) -> BTreeMap<&'static str, bool> {
    let Some(first) = records.first() else {
        return BTreeMap::new();
    };
    first
        .quantities
        .keys()
        .map(|name| {
            let series: Vec<(usize, f64)> =
                records.iter().map(|r| (r.index, r.get(name))).collect();
            (*name, converged(&series, floor))
        })
        .collect()
}

fn check_shapes(limit: &BcProblem, seq: &[BcProblem]) -> Result<()> {
    for (i, p) in seq.iter().enumerate() {
        for (name, m, l) in [
            ("A", &p.a, &limit.a),
            ("B", &p.b, &limit.b),
            ("C", &p.c, &limit.c),
        ] {
            if m.shape() != l.shape() {
                return Err(GenInvError::mismatch(
                    "sequence_report",
                    format!("{name} of shape {}x{}", l.nrows(), l.ncols()),
                    format!("{}x{} at index {}", m.nrows(), m.ncols(), i + 1),
                ));
            }
        }
    }
    Ok(())
}

/// Measures every convergence quantity of the sequence against its limit
/// and evaluates the statement families.
///
/// The `gap`, `outer` and `orthogonal` families are always evaluated. For
/// square operands and generators of equal order the `projector` and
/// `c_star` families are added, and for order at most
/// [`RIGHT_SIDED_MAX_ORDER`] also the `right_sided` family. The `c_star`
/// statements involving `bₙ†` or `cₙ†` are included only when `bₙ → b` or
/// `cₙ → c` respectively.
pub fn sequence_report(
    limit: &BcProblem,
    seq: &[BcProblem],
    tol: &ToleranceConfig,
) -> Result<SequenceDiagnostics> {
    tol.validate()?;
    check_shapes(limit, seq)?;
    let cert = inverse::bc_inverse(&limit.a, &limit.b, &limit.c, tol)?;
    if norm(&cert.inverse) == 0.0 {
        return Err(GenInvError::InvalidArgument(
            "limit inverse is zero; use zero_limit_check".into(),
        ));
    }
    let lim = Limit::new(&cert, tol)?;
    let algebra = limit.is_square_algebra();
    let lim_alg = if algebra {
        Some(AlgebraSide::new(&limit.b, &limit.c, tol)?)
    } else {
        None
    };
    let right = algebra && limit.a.nrows() <= RIGHT_SIDED_MAX_ORDER;
    let lim_right = if right {
        Some(RightSide::new(&limit.b, &limit.c, &lim.x, tol)?)
    } else {
        None
    };

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (i, p) in seq.iter().enumerate() {
        let index = i + 1;
        let outcome = (|| -> Result<IndexRecord> {
            let cert_n = inverse::bc_inverse(&p.a, &p.b, &p.c, tol)?;
            let mut q = lim.quantities(&cert_n, tol)?;
            let mut defect = 0.0f64;
            if let Some(la) = &lim_alg {
                let cur = AlgebraSide::new(&p.b, &p.c, tol)?;
                defect = defect.max(algebra_quantities(&mut q, la, &cur)?);
            }
            if let Some(lr) = &lim_right {
                let cur = RightSide::new(&p.b, &p.c, &cert_n.inverse, tol)?;
                defect = defect.max(right_quantities(&mut q, lr, &cur)?);
            }
            let bound = Some(lim.bound_check(&q, &p.a));
            Ok(IndexRecord {
                index,
                quantities: q,
                identity_defect: defect,
                bound,
            })
        })();
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => failures.push(IndexFailure {
                index,
                error: e.to_string(),
            }),
        }
    }

    let scale = lim.scale();
    let floor = 10.0 * tol.residual_tol * scale;
    let qv = quantity_verdicts(&records, floor);
    let mut families = BTreeMap::new();
    families.insert("gap", family_verdict(&qv, GAP_STATEMENTS));
    families.insert("outer", family_verdict(&qv, OUTER_STATEMENTS));
    families.insert("orthogonal", family_verdict(&qv, ORTHOGONAL_STATEMENTS));
    if algebra {
        families.insert("projector", family_verdict(&qv, PROJECTOR_STATEMENTS));
        families.insert("c_star", c_star_verdict(&qv));
    }
    if right {
        families.insert("right_sided", family_verdict(&qv, RIGHT_SIDED_STATEMENTS));
    }
    Ok(assemble(records, failures, scale, qv, families))
}

fn c_star_verdict(qv: &BTreeMap<&'static str, bool>) -> FamilyVerdict {
    let b_conv = qv.get("generator_b_error").copied().unwrap_or(false);
    let c_conv = qv.get("generator_c_error").copied().unwrap_or(false);
    let mut statements: Vec<Statement> = C_STAR_STATEMENTS.to_vec();
    if b_conv {
        statements.push(C_STAR_B_STATEMENT);
    }
    if c_conv {
        statements.push(C_STAR_C_STATEMENT);
    }
    if b_conv && c_conv {
        statements.push(C_STAR_BC_STATEMENT);
    }
    family_verdict(qv, &statements)
}

fn assemble(
    records: Vec<IndexRecord>,
    failures: Vec<IndexFailure>,
    scale: f64,
    quantity_verdicts: BTreeMap<&'static str, bool>,
    families: BTreeMap<&'static str, FamilyVerdict>,
) -> SequenceDiagnostics {
    let max_identity_defect = records.iter().fold(0.0f64, |m, r| m.max(r.identity_defect));
    SequenceDiagnostics {
        records,
        failures,
        scale,
        quantity_verdicts,
        families,
        max_identity_defect,
    }
}

/// Moore-Penrose convergence of `aₙ → a` through the generators
/// `b = c = a†`.
///
/// Families: `projector` (eight projector-term statements), `mp_gap` (five
/// gap statements) and `c_star`. Each record also compares the four
/// projector-term maxima with the geometric gaps of `R(aₙ†)`, `N(aₙ†)`,
/// `N(aₙ)` and `R(aₙ)`.
pub fn mp_continuity_report(
    a: &Matrix,
    seq: &[Matrix],
    tol: &ToleranceConfig,
) -> Result<SequenceDiagnostics> {
    tol.validate()?;
    if a.nrows() != a.ncols() {
        return Err(GenInvError::mismatch(
            "mp_continuity_report",
            "square operand",
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    if norm(a) == 0.0 {
        return Err(GenInvError::InvalidArgument(
            "limit operand is zero; use zero_limit_check".into(),
        ));
    }
    for (i, m) in seq.iter().enumerate() {
        if m.shape() != a.shape() {
            return Err(GenInvError::mismatch(
                "mp_continuity_report",
                format!("{}x{}", a.nrows(), a.ncols()),
                format!("{}x{} at index {}", m.nrows(), m.ncols(), i + 1),
            ));
        }
    }
    let x = pinv(a, tol)?;
    let lim_alg = AlgebraSide::new(&x, &x, tol)?;
    let xa = &x * a;
    let ax = a * &x;
    let range = subspace::column_space(&x, tol)?;
    let nullspace = subspace::null_space(&x, tol)?;

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (i, a_n) in seq.iter().enumerate() {
        let index = i + 1;
        let outcome = (|| -> Result<IndexRecord> {
            let x_n = pinv(a_n, tol)?;
            let mut q = BTreeMap::new();
            q.insert("inverse_error", norm(&(&x_n - &x)));
            q.insert("left_product_error", norm(&(&x_n * a_n - &xa)));
            q.insert("right_product_error", norm(&(a_n * &x_n - &ax)));
            q.insert(
                "range_gap",
                gap_value(&subspace::column_space(&x_n, tol)?, &range)?,
            );
            q.insert(
                "nullspace_gap",
                gap_value(&subspace::null_space(&x_n, tol)?, &nullspace)?,
            );
            let cur = AlgebraSide::new(&x_n, &x_n, tol)?;
            let defect = algebra_quantities(&mut q, &lim_alg, &cur)?;
            Ok(IndexRecord {
                index,
                quantities: q,
                identity_defect: defect,
                bound: None,
            })
        })();
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => failures.push(IndexFailure {
                index,
                error: e.to_string(),
            }),
        }
    }

    let scale = norm(&x).max(norm(a) * norm(&x)).max(1.0);
    let floor = 10.0 * tol.residual_tol * scale;
    let qv = quantity_verdicts(&records, floor);
    let mut families = BTreeMap::new();
    families.insert("projector", family_verdict(&qv, PROJECTOR_STATEMENTS));
    families.insert("mp_gap", family_verdict(&qv, MP_GAP_STATEMENTS));
    families.insert("c_star", c_star_verdict(&qv));
    Ok(assemble(records, failures, scale, qv, families))
}

/// The four projector-difference norms comparing `bₙ` with `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MpGapTerms {
    /// `(‖(1−bb†)bₙbₙ†‖, ‖(1−bₙbₙ†)bb†‖)`, whose maximum is `ĝ(R(bₙ), R(b))`.
    pub range_terms: (f64, f64),
    /// `(‖bb†(1−bₙbₙ†)‖, ‖bₙbₙ†(1−bb†)‖)`, whose maximum is the gap between
    /// the left annihilators `{x : xbₙ = 0}` and `{x : xb = 0}`.
    pub cokernel_terms: (f64, f64),
    /// `ĝ(R(bₙ), R(b))` from orthonormal bases.
    pub geometric_range_gap: f64,
}

impl MpGapTerms {
    /// `|max(range_terms) − geometric_range_gap|`.
    pub fn identity_defect(&self) -> f64 {
        (self.range_terms.0.max(self.range_terms.1) - self.geometric_range_gap).abs()
    }

    /// Largest of `|range_terms.0 − cokernel_terms.1|` and
    /// `|range_terms.1 − cokernel_terms.0|`; zero up to rounding since the
    /// paired operators are adjoints of each other.
    pub fn adjoint_defect(&self) -> f64 {
        (self.range_terms.0 - self.cokernel_terms.1)
            .abs()
            .max((self.range_terms.1 - self.cokernel_terms.0).abs())
    }
}

pub fn mp_gap_terms(b: &Matrix, bn: &Matrix, tol: &ToleranceConfig) -> Result<MpGapTerms> {
    kernel::check_same_shape("mp_gap_terms", b, bn)?;
    kernel::check_square("mp_gap_terms", b)?;
    let p = b * pinv(b, tol)?;
    let pn = bn * pinv(bn, tol)?;
    let id = kernel::identity(b.nrows());
    Ok(MpGapTerms {
        range_terms: (norm(&((&id - &p) * &pn)), norm(&((&id - &pn) * &p))),
        cokernel_terms: (norm(&(&p * (&id - &pn))), norm(&(&pn * (&id - &p)))),
        geometric_range_gap: gap_value(
            &subspace::column_space(bn, tol)?,
            &subspace::column_space(b, tol)?,
        )?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ZeroLimit {
    pub converges_to_zero: bool,
    /// 1-based index from which every inverse is zero.
    pub n0: Option<usize>,
}

/// Decides whether a sequence of inverses is eventually zero, the only way
/// it can converge to a zero limit. Norms up to `residual_tol` count as zero.
pub fn zero_limit_check(inverses: &[Matrix], tol: &ToleranceConfig) -> ZeroLimit {
    let is_zero = |m: &Matrix| norm(m) <= tol.residual_tol;
    let nonzero_tail = inverses.iter().rposition(|m| !is_zero(m));
    match nonzero_tail {
        _ if inverses.is_empty() => ZeroLimit {
            converges_to_zero: false,
            n0: None,
        },
        None => ZeroLimit {
            converges_to_zero: true,
            n0: Some(1),
        },
        Some(last) if last + 1 < inverses.len() => ZeroLimit {
            converges_to_zero: true,
            n0: Some(last + 2),
        },
        Some(_) => ZeroLimit {
            converges_to_zero: false,
            n0: None,
        },
    }
}

/// [`zero_limit_check`] on the inverses carried by certificates.
pub fn zero_limit_check_certificates(
    certs: &[InverseCertificate],
    tol: &ToleranceConfig,
) -> ZeroLimit {
    let inverses: Vec<Matrix> = certs.iter().map(|c| c.inverse.clone()).collect();
    zero_limit_check(&inverses, tol)
}

/// Generated sequences with known limiting behaviour. Indices run from 1.
pub mod families {
    use super::BcProblem;
    use crate::error::Result;
    use crate::kernel::{self, Matrix, ToleranceConfig, C64};
    use crate::random::{self, Rng64};

    pub fn constant(limit: &BcProblem, len: usize) -> Vec<BcProblem> {
        vec![limit.clone(); len]
    }

    /// `Aₙ = A + E/n` with a random `E` of spectral norm `size`.
    pub fn additive(limit: &BcProblem, len: usize, size: f64, rng: &mut Rng64) -> Vec<BcProblem> {
        let e = direction(&limit.a, size, rng);
        (1..=len)
            .map(|n| {
                BcProblem::new(
                    &limit.a + &e / C64::from(n as f64),
                    limit.b.clone(),
                    limit.c.clone(),
                )
            })
            .collect()
    }

    /// `Bₙ = GₙB`, `Cₙ = CGₙ*` with `Gₙ` the Cayley unitary of angle
    /// `amplitude/n`, rotating `R(B)` and `N(C)` by the same `Gₙ`.
    pub fn rotating(
        limit: &BcProblem,
        len: usize,
        amplitude: f64,
        rng: &mut Rng64,
    ) -> Vec<BcProblem> {
        let k = random::skew_hermitian(rng, limit.b.nrows(), !kernel::is_real(&limit.b));
        (1..=len)
            .map(|n| {
                let g = random::cayley(&k, amplitude / n as f64);
                BcProblem::new(limit.a.clone(), &g * &limit.b, &limit.c * g.adjoint())
            })
            .collect()
    }

    /// Generators whose zero singular values are raised to `1/n`, so each
    /// term has full-rank generators while the limit does not.
    pub fn rank_drop(
        limit: &BcProblem,
        len: usize,
        tol: &ToleranceConfig,
    ) -> Result<Vec<BcProblem>> {
        let b_fill = null_fill(&limit.b, tol)?;
        let c_fill = null_fill(&limit.c, tol)?;
        Ok((1..=len)
            .map(|n| {
                let t = C64::from(1.0 / n as f64);
                BcProblem::new(
                    limit.a.clone(),
                    &limit.b + &b_fill * t,
                    &limit.c + &c_fill * t,
                )
            })
            .collect())
    }

    pub fn mp_constant(a: &Matrix, len: usize) -> Vec<Matrix> {
        vec![a.clone(); len]
    }

    /// `aₙ = a + E/n` with `E` compressed to the row and column spaces of
    /// `a`, so the rank is preserved.
    pub fn mp_additive(
        a: &Matrix,
        len: usize,
        size: f64,
        rng: &mut Rng64,
        tol: &ToleranceConfig,
    ) -> Result<Vec<Matrix>> {
        let x = crate::inverse::moore_penrose(a, tol)?.inverse;
        let e0 = direction(a, 1.0, rng);
        let e = a * &x * e0 * &x * a;
        let en = kernel::spectral_norm(&e);
        let e = if en > 0.0 {
            e * C64::from(size / en)
        } else {
            e
        };
        Ok((1..=len).map(|n| a + &e / C64::from(n as f64)).collect())
    }

    /// `aₙ = GₙaHₙ*` with Cayley unitaries of angle `amplitude/n`.
    pub fn mp_rotating(a: &Matrix, len: usize, amplitude: f64, rng: &mut Rng64) -> Vec<Matrix> {
        let complex = !kernel::is_real(a);
        let kg = random::skew_hermitian(rng, a.nrows(), complex);
        let kh = random::skew_hermitian(rng, a.ncols(), complex);
        (1..=len)
            .map(|n| {
                let t = amplitude / n as f64;
                random::cayley(&kg, t) * a * random::cayley(&kh, t).adjoint()
            })
            .collect()
    }

    /// Zero singular values of `a` raised to `1/n`.
    pub fn mp_rank_drop(a: &Matrix, len: usize, tol: &ToleranceConfig) -> Result<Vec<Matrix>> {
        let fill = null_fill(a, tol)?;
        Ok((1..=len)
            .map(|n| a + &fill * C64::from(1.0 / n as f64))
            .collect())
    }

    fn direction(like: &Matrix, size: f64, rng: &mut Rng64) -> Matrix {
        let e = random::gaussian(rng, like.nrows(), like.ncols(), !kernel::is_real(like));
        let en = kernel::spectral_norm(&e);
        e * C64::from(size / en)
    }

    /// `Σ uᵢvᵢ*` over the numerically zero singular values of a square `m`.
    fn null_fill(m: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
        kernel::check_square("rank_drop", m)?;
        let svd = kernel::svd(m)?;
        let r = svd.rank(tol);
        let mut fill = Matrix::zeros(m.nrows(), m.ncols());
        for i in r..m.nrows() {
            fill += svd.u.column(i) * svd.v.column(i).adjoint();
        }
        Ok(fill)
    }
}
