//! Generalized inverses of matrices: Moore-Penrose, outer inverses with
//! prescribed range and null space, (B,C)-inverses, Bott-Duffin inverses and
//! inverses along an element, with checks for their perturbation, continuity
//! and differentiability properties.

pub mod calculus;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod inverse;
pub mod io;
pub mod kernel;
pub mod perturb;
pub mod random;
pub mod subspace;

pub use error::{GenInvError, InverseKind, Result};
pub use kernel::{Matrix, ToleranceConfig, C64};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/kernel.md")]
    struct Kernel;
    #[doc = include_str!("../../../book/src/subspaces.md")]
    struct Subspaces;
    #[doc = include_str!("../../../book/src/inverses.md")]
    struct Inverses;
    #[doc = include_str!("../../../book/src/perturbation.md")]
    struct Perturbation;
    #[doc = include_str!("../../../book/src/derivatives.md")]
    struct Derivatives;
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    struct Diagnostics;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
