//! Construction and exhaustive verification of linear sum-rank-metric codes
//! over F_{q^m}/F_q.

pub mod constructions;
pub mod error;
pub mod fqlin;
pub mod geometry;
pub mod gf;
pub mod hamming_ext;
pub mod report;
pub mod search;
pub mod skew;
pub mod srcode;

pub use error::{Error, Result};
pub use fqlin::{FqSubspace, Matrix, ProjectiveSpace, SweepOpts};
pub use geometry::{QSystem, WeightMap};
pub use gf::{Felem, Field, FieldDescriptor};
pub use skew::{EvaluationPair, SkewPoly};
pub use srcode::{BlockProfile, RankData, SumRankCode, WeightDistribution};
