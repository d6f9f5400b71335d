//! Mixed Hodge structures over `Q(i)`: Deligne splittings, the δ-splitting,
//! grading elements, polarization checks, sl2-triples and multigradings.

pub mod catalog;
mod polarization;
mod sl2;
mod splitting;

use serde::{Deserialize, Serialize};

use crate::exactlin::{Direction, ExactError, Filtration};
use crate::weightfilt::WeightError;

pub use polarization::{polarized_mhs_check, PolarizationForm, PolarizationReport};
pub use sl2::{
    ad_weight_components, commuting_multigrading, jacobson_morozov_completion, project_to_joint_kernel,
    yhat_increments, Multigrading, Sl2Triple,
};
pub use splitting::{
    delta_splitting, deligne_splitting, grading_element, hodge_filtration_of, is_mhs, is_r_split, DeligneSplitting,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MhsError {
    #[error("(W, F) is not a mixed Hodge structure")]
    NotMhs,
    #[error("splitting is not R-split")]
    NotRSplit,
    #[error("splitting identity fails: {0}")]
    SplittingInvariant(String),
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("bilinear form is neither symmetric nor alternating as required")]
    WrongSymmetry,
    #[error("gradings do not commute")]
    NotCommuting,
    #[error("grading is not semisimple with integer eigenvalues")]
    NonIntegerEigenvalue,
    #[error("precondition fails: {0}")]
    Precondition(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system has no unique solution")]
    NotUnique,
    #[error("W must be increasing and F decreasing on the same space")]
    BadFiltrations,
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A pair `(W, F)` on `V ⊗ Q(i)`; whether it is an actual mixed Hodge
/// structure is decided by [`is_mhs`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMixedHodge")]
pub struct MixedHodge {
    w: Filtration,
    f: Filtration,
}

#[derive(Deserialize)]
struct RawMixedHodge {
    w: Filtration,
    f: Filtration,
}

impl TryFrom<RawMixedHodge> for MixedHodge {
    type Error = MhsError;

    fn try_from(r: RawMixedHodge) -> Result<Self, MhsError> {
        MixedHodge::new(r.w, r.f)
    }
}

impl MixedHodge {
    pub fn new(w: Filtration, f: Filtration) -> Result<Self, MhsError> {
        if w.direction() != Direction::Increasing || f.direction() != Direction::Decreasing || w.dim() != f.dim() {
            return Err(MhsError::BadFiltrations);
        }
        Ok(Self { w, f })
    }

    pub fn w(&self) -> &Filtration {
        &self.w
    }

    pub fn f(&self) -> &Filtration {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }
}
