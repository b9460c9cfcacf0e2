//! Certified numerics for the partition function p(n).
//!
//! Exact values come from [`partition`]; every transcendental quantity is a
//! [`CertifiedReal`] ball, and inequalities are decided by climbing a
//! [`PrecisionLadder`] until the two sides separate.

pub mod difference;
pub mod error;
pub mod hrr;
pub mod lemmas;
pub mod partition;
pub mod precision;
pub mod report;
pub mod special;
pub mod sweep;

pub use error::{Error, Result};
pub use partition::{delta_r_p, p_brute, p_exact, PartitionTable};
pub use precision::{
    certified_strict_less, log_p_certified, Certificate, CertifiedReal, PrecisionLadder, Verdict,
};
