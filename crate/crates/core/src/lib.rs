//! Linear RankSVM training.
//!
//! The pairwise hinge risk and its subgradient are computed in
//! `O(ms + m log m)` with order statistics trees ([`pairloss`]) and
//! minimized with a bundle method ([`bmrm`]). Brute-force `O(m²)` routines
//! are kept alongside as reference implementations.

pub mod bmrm;
pub mod data;
pub mod error;
pub mod eval;
pub mod ostree;
pub mod pairloss;
pub mod scaling;

pub use bmrm::{train, Bmrm, CuttingPlane, CuttingPlaneModel, RankModel, TraceRow, TrainConfig};
pub use data::{Dataset, SparseMatrix, ViewMode};
pub use error::{Error, Result};
pub use eval::{pairwise_ranking_error, predict, RankingErrorReport};
pub use ostree::OSTree;
pub use pairloss::{Backend, EmpiricalRisk, FrequencyVectors, RiskEvaluation};
