//! Reduction theory for `SL(2)^n` and `SL(n)` with the standard
//! upper-triangular minimal parabolic: Iwasawa coordinates, Siegel sets,
//! fundamental-domain reduction, finiteness enumerations, Hecke cosets,
//! chart maps and the Orr covering experiment.

mod enumerate;
mod fundamental;
mod group;
mod hecke;
mod interval;
mod iwasawa;
mod orr;
mod siegel;

pub use enumerate::{siegel_intersection_enumerate, EnumerationReport, IntersectionHit};
pub use fundamental::{bs_to_bb_chart, in_fundamental_domain, reduce_sl2z};
pub use group::{GroupElement, Sl2Z};
pub use hecke::{gamma0_index, hecke_correspondence, HeckeResult};
pub use interval::Interval;
pub use iwasawa::{ep_chart, iwasawa, HorosphericalCoords};
pub use orr::{orr_cover_check, Embedding, OrrReport};
pub use siegel::{siegel_membership, siegel_membership_point, SiegelSet, UpperHalfPoint};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("determinant {0} is not 1 within tolerance")]
    NotDetOne(f64),
    #[error("matrix is numerically singular")]
    NearSingular,
    #[error("point must lie in the upper half plane (y > 0)")]
    NotInUpperHalfPlane,
    #[error("height parameter must be positive")]
    NonPositiveHeight,
    #[error("invalid Siegel set bounds")]
    InvalidSiegelSet,
    #[error("group element is not rational")]
    NonRational,
    #[error("determinant must be positive")]
    NonPositiveDeterminant,
    #[error("block sizes do not match the matrix")]
    BlockMismatch,
    #[error("too few samples")]
    TooFewSamples,
    #[error("unsupported embedding `{0}` (expected diagonal or sym2)")]
    UnsupportedEmbedding(String),
}
