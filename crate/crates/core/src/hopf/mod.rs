//! Morphisms out of a finite quantum group, the unitary `X` and partial
//! action `θ` they define, Hopf images, generation certificates, closed
//! quantum subgroups and the subgroups they generate.

mod image;
mod morphism;
mod promote;
mod subgroup;
mod subset;

pub use image::{
    check_baaj_vaes, hopf_image, is_generating, is_generating_with, BaajVaesReport, GenerationCertificate, DEFAULT_SAMPLES,
    HopfImageResult,
};
pub use morphism::{check_morphism, HopfMap, HopfMapReport, MorphismReport, QMorphism};
pub use promote::{
    invariant_subspace_check, promote_intertwiners_check, restrict_corep, InvariantSubspaceReport,
    PromotionReport, RestrictedCorep,
};
pub use subgroup::{
    compose_with_hom, generated_subgroup, separation_check, subgroup_from_quotient, ComposeResult,
    FourAlgebraDims, GeneratedSubgroup, SeparationReport, SubgroupEmbedding,
};
pub use subset::{
    beta_restriction, build_theta, build_x, fixed_points, recover_x_from_theta, slice_algebra, BetaRestriction,
    RecoveredX, SliceAlgebra, SubsetData, Theta, ThetaReport,
};

use crate::fqg::FqgError;
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HopfError {
    #[error("{what}: expected {expected}, found {found}")]
    Shape { what: &'static str, expected: usize, found: usize },
    #[error("morphism check `{name}` fails with residual {residual:.3e}")]
    NotAMorphism { name: String, residual: f64 },
    #[error("postcondition `{name}` fails with residual {residual:.3e}")]
    Postcondition { name: String, residual: f64 },
    #[error("the algebraic and operator pictures of M₁ disagree (dims {algebraic} and {operator}, defect {defect:.3e})")]
    PictureMismatch { algebraic: usize, operator: usize, defect: f64 },
    #[error("M₁ is not invariant: coproduct defect {coproduct:.3e}, antipode defect {antipode:.3e}")]
    NotInvariant { coproduct: f64, antipode: f64 },
    #[error("conditions (ii) and (iii) disagree: dim M₁ = {m1_dim} of {dim}, fixed points {fixed_dim}")]
    CharacterisationMismatch { m1_dim: usize, dim: usize, fixed_dim: usize },
    #[error("the four algebras of a generated subgroup disagree: {0:?}")]
    FourAlgebraMismatch(Vec<usize>),
    #[error("objects live over different quantum groups")]
    ParentMismatch,
    #[error("empty family of subgroups")]
    EmptyFamily,
    #[error(transparent)]
    Fqg(#[from] FqgError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Compare two residuals against the global tolerance, naming the failure.
pub(crate) fn require(name: &str, residual: f64, tol: f64) -> Result<(), HopfError> {
    if residual.is_finite() && residual <= tol {
        Ok(())
    } else {
        Err(HopfError::Postcondition { name: name.into(), residual })
    }
}
