//! Reduction theory of arithmetic groups and asymptotic Hodge theory,
//! made computable at desk scale.

pub mod exactlin;
pub mod weightfilt;
pub mod mhs;
pub mod reduction;
pub mod period;
pub mod samples;
pub mod oracle;
