//! Word lengths and the stability metric λ₁ for dihedral groups D_n under
//! three-reflection generating sets `S = {f, r^a f, r^b f}`.
//!
//! Word lengths are computed two ways: a breadth-first search of the
//! Cayley graph, and a sumset recurrence on the rotation indices of the
//! length-`l` words. The rest of the crate builds on those tables: λ₁ and
//! its bounds, checkers for the Cauchy-Davenport and Kneser theorems on
//! which the bounds rest, and exhaustive scans over all generating sets.

pub mod additive;
pub mod checkpoint;
pub mod dihedral;
pub mod error;
pub mod metrics;
pub mod residue;
pub mod survey;
pub mod verify;
pub mod wordlength;

pub use additive::{check_cauchy_davenport, check_kneser, is_prime, KneserReport};
pub use dihedral::{DihedralElement, GeneratingSet};
pub use error::{Error, Result};
pub use metrics::{
    check_sharpness, check_sqrt_bound, lambda1, lambda1_cross_checked, prime_condition,
    sqrt_presentation, LambdaReport, SharpnessReport, SqrtBoundReport,
};
pub use residue::{cyclic_subgroup, CosetEntry, ResidueSet};
pub use survey::{scan_stabilizers, survey_lambda, ConjectureScanResult, SurveyRow};
pub use verify::{verify, Claim, VerificationReport, VerifyOptions};
pub use wordlength::{
    bfs_lengths, sumset_lengths, w_prime_sequence, Engine, WPrimeSequence, WordLengthTable,
};
