use std::fmt;

use thiserror::Error;

/// The five generalized inverses this crate constructs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseKind {
    MoorePenrose,
    OuterPrescribed,
    Bc,
    BottDuffin,
    Along,
}

impl InverseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InverseKind::MoorePenrose => "moore_penrose",
            InverseKind::OuterPrescribed => "outer_prescribed",
            InverseKind::Bc => "bc",
            InverseKind::BottDuffin => "bott_duffin",
            InverseKind::Along => "along",
        }
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub type Result<T, E = GenInvError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenInvError {
    #[error("kernel failure: factorization did not converge for a {rows}x{cols} matrix")]
    KernelFailure { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    /// The operator annihilates (numerically) some direction of the prescribed range.
    #[error("restriction not injective: {clause} (margin {margin:e})")]
    RestrictionNotInjective { clause: &'static str, margin: f64 },

    /// A required direct-sum decomposition of the codomain (or domain) fails.
    #[error("complement fails: {clause} (margin {margin:e})")]
    ComplementFails { clause: &'static str, margin: f64 },

    #[error("not complementary: T ⊕ S ≠ X (margin {margin:e})")]
    NotComplementary { margin: f64 },

    #[error("matrix is not idempotent: ‖P² − P‖ = {defect:e}")]
    NotIdempotent { defect: f64 },

    #[error("{}", describe_missing(*.kind, .cause))]
    DoesNotExist {
        kind: InverseKind,
        cause: Box<GenInvError>,
    },

    #[error("certificate rejected: residual {name} = {value:e} exceeds {bound:e}")]
    ResidualRejected {
        name: &'static str,
        value: f64,
        bound: f64,
    },

    #[error("radius undefined for zero inverse")]
    ZeroInverse,

    #[error("outside openness ball: ‖E‖ = {norm:e} ≥ radius {radius:e}")]
    OutsideOpennessBall { norm: f64, radius: f64 },

    #[error("perturbed factor I + XE is singular")]
    SingularFactor,

    #[error("curve leaves invertible set at t = {t}: {cause}")]
    CurveLeavesInvertibleSet { t: f64, cause: Box<GenInvError> },

    #[error("curve {label} evaluated outside its domain at t = {t}")]
    OutsideCurveDomain { label: String, t: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

fn describe_missing(kind: InverseKind, cause: &GenInvError) -> String {
    match kind {
        InverseKind::Along => format!("not invertible along D: {cause}"),
        InverseKind::Bc => format!("(B,C)-inverse does not exist: {cause}"),
        InverseKind::BottDuffin => format!("Bott-Duffin (P,Q)-inverse does not exist: {cause}"),
        other => format!("{other} inverse does not exist: {cause}"),
    }
}

impl GenInvError {
    /// The violated existence clause, if this is an existence failure.
    pub fn clause(&self) -> Option<String> {
        match self {
            GenInvError::RestrictionNotInjective { clause, .. }
            | GenInvError::ComplementFails { clause, .. } => Some((*clause).to_string()),
            GenInvError::NotComplementary { .. } => Some("T ⊕ S ≠ X".to_string()),
            GenInvError::NotIdempotent { .. } => Some("P² = P".to_string()),
            GenInvError::ResidualRejected { name, .. } => Some(format!("residual {name}")),
            GenInvError::OutsideOpennessBall { .. } => Some("‖E‖ < 1/‖X‖".to_string()),
            GenInvError::ZeroInverse => Some("X ≠ 0".to_string()),
            GenInvError::DoesNotExist { cause, .. }
            | GenInvError::CurveLeavesInvertibleSet { cause, .. } => cause.clause(),
            _ => None,
        }
    }

    pub fn margin(&self) -> Option<f64> {
        match self {
            GenInvError::RestrictionNotInjective { margin, .. }
            | GenInvError::ComplementFails { margin, .. }
            | GenInvError::NotComplementary { margin } => Some(*margin),
            GenInvError::NotIdempotent { defect } => Some(*defect),
            GenInvError::ResidualRejected { value, .. } => Some(*value),
            GenInvError::OutsideOpennessBall { norm, radius } => Some(radius - norm),
            GenInvError::DoesNotExist { cause, .. }
            | GenInvError::CurveLeavesInvertibleSet { cause, .. } => cause.margin(),
            _ => None,
        }
    }

    /// True when the error reports that a requested inverse (or decomposition)
    /// does not exist, as opposed to malformed input.
    pub fn is_existence_failure(&self) -> bool {
        matches!(
            self,
            GenInvError::RestrictionNotInjective { .. }
                | GenInvError::ComplementFails { .. }
                | GenInvError::NotComplementary { .. }
                | GenInvError::NotIdempotent { .. }
                | GenInvError::ResidualRejected { .. }
                | GenInvError::ZeroInverse
                | GenInvError::OutsideOpennessBall { .. }
                | GenInvError::SingularFactor
                | GenInvError::DoesNotExist { .. }
                | GenInvError::CurveLeavesInvertibleSet { .. }
        )
    }

    pub(crate) fn mismatch(
        context: &'static str,
        expected: impl fmt::Display,
        found: impl fmt::Display,
    ) -> Self {
        GenInvError::DimensionMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
