//! Point symmetries: vector fields, prolongation, brackets and the catalog
//! for every nonlinearity.

mod bracket;
mod catalog;
mod field;
mod heisenberg;

use thiserror::Error;

use crate::case::NonlinearityCase;
use crate::expr::{Dependent, Expr};
use crate::jet::{kohn_laplace, JetError, JetSpace, PdeIdeal};

pub use bracket::{bracket_table, classify, generator_rank, BracketEntry, BracketTable};
pub use catalog::{
    canonical_id, catalog, dilation, display_name, find, generator, latex_name, w_beta_with,
    BASE_GROUP,
};
pub use field::{PointVectorField, ProlongedField};
pub use heisenberg::{
    compose, displayed_fields, inverse, laplacian_checks, left_invariant_fields, sum_of_squares,
    LaplacianCheck, Point,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("prolongation order must be 1 or 2, got {0}")]
    ProlongationOrder(usize),
    #[error("prolongation of order {have} cannot act on an expression of order {needed}")]
    ProlongationTooShort { have: usize, needed: usize },
    #[error("no symmetry named '{name}' in case {case}")]
    UnknownSymmetry { name: String, case: String },
    #[error("catalog generators are linearly dependent (rank {rank} of {count})")]
    DependentGenerators { rank: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieCheck {
    Yes,
    No { residual: Expr },
}

impl LieCheck {
    pub fn is_yes(&self) -> bool {
        matches!(self, LieCheck::Yes)
    }
}

/// The equation's left-hand side `Δ_H u + f(u)`.
pub fn equation(case: &NonlinearityCase) -> Expr {
    kohn_laplace(Dependent::U) + case.nonlinearity()
}

/// Infinitesimal invariance: `pr²S(Δ_H u + f)` must vanish on solutions.
pub fn check_lie_symmetry(
    field: &PointVectorField,
    case: &NonlinearityCase,
    jets: &JetSpace,
) -> Result<LieCheck, SymmetryError> {
    let pr = field.prolong(2, jets)?;
    let image = pr.apply(&equation(case))?;
    let residual = PdeIdeal::for_case(case).reduce(&image, jets)?;
    Ok(if residual.is_zero() {
        LieCheck::Yes
    } else {
        LieCheck::No { residual }
    })
}
