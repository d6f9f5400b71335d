//! Exact linear algebra over `Q` and `Q(i)`.
//!
//! Everything downstream (weight filtrations, Deligne splittings, sl2
//! data) is phrased in terms of [`Subspace`] and [`Filtration`], whose
//! canonical echelon representation turns subspace equality into
//! structural equality.

mod filtration;
mod json;
mod matrix;
mod scalar;
mod subspace;

pub use filtration::{induced_filtration_on_end, operator_weight, Direction, Filtration};
pub use json::{FiltrationJson, MatrixJson};
pub use matrix::{conj_vector, dot, is_zero_vector, unit_vector, ExactMatrix, ExactVector, RowReduced};
pub use scalar::ExactScalar;
pub use subspace::{echelonize, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows of unequal length")]
    Ragged,
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
}
