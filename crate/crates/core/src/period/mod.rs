//! Explicit period maps for the Legendre family and its two-parameter
//! product, their nilpotent orbits, and the desk-scale experiments built on
//! them: distance decay, limit parabolics, horospherical tracking, Siegel
//! containment and Hodge loci.

mod contain;
mod decay;
mod family;
mod hypergeometric;
mod locus;
mod parabolic;
mod sector;
mod track;

pub use contain::{siegel_containment_check, ContainmentReport, Witness};
pub use decay::{schmid_decay_check, DecayFit};
pub use family::{
    invariant_distance, local_lift, nilpotent_orbit_eval, nilpotent_orbit_exact, period_section, Family, HodgeFrame,
    NilpotentOrbitData, PeriodSample,
};
pub use hypergeometric::{agm_period, hypergeometric_period, legendre_monodromy, legendre_tau, legendre_tau_agm};
pub use locus::{hodge_locus_demo, HodgeLocusReport, LocusComponent};
pub use parabolic::{build_limit_parabolic, nilradical_membership, nj_in_nilradical_check, LimitParabolic};
pub use sector::{sector_decompose, SectorSpec};
pub use track::{horospherical_factorization_track, TrackReport};

use crate::exactlin::ExactError;
use crate::mhs::MhsError;
use crate::reduction::ReductionError;
use crate::weightfilt::WeightError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PeriodError {
    #[error("λ lies on a branch cut of the principal period")]
    BranchCut,
    #[error("singular parameter value")]
    Singular,
    #[error("iteration did not converge")]
    NonConvergence,
    #[error("Im z = {y} is below the validity threshold {threshold}")]
    BelowThreshold { y: f64, threshold: f64 },
    #[error("point has Im z_j = {y} below η = {eta}")]
    BelowEta { y: f64, eta: f64 },
    #[error("too few samples")]
    TooFewSamples,
    #[error("point lies outside the period domain")]
    NotInDomain,
    #[error("expected {expected} factors, found {found}")]
    FactorMismatch { expected: usize, found: usize },
    #[error("unsupported family `{0}` (expected legendre, product or constant)")]
    UnsupportedFamily(String),
    #[error("weight filtration is not constant on the cone spanned by {0:?}")]
    ConeNotConstant(Vec<usize>),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Mhs(#[from] MhsError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}
