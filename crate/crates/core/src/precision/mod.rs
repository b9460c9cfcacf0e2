//! Ball arithmetic on MPFR floats and the precision ladder that turns strict
//! inequalities into certified verdicts.

mod ball;
mod ladder;

pub use ball::{CertifiedReal, RADIUS_PRECISION};
pub use ladder::{
    certified_strict_less, certify_margin, certify_positive, Certificate, PrecisionLadder, Verdict,
    DEFAULT_RUNGS, MAX_PRECISION_ENV,
};

use rug::Integer;

use crate::partition::with_values;

/// Enclosure of log p(n), from the exact integer.
pub fn log_p_certified(n: u64, prec: u32) -> CertifiedReal {
    with_values(n, |values| log_of_integer(&values[n as usize], prec))
}

/// Enclosure of log m for a positive integer m.
pub fn log_of_integer(m: &Integer, prec: u32) -> CertifiedReal {
    assert!(*m > 0, "log of a nonpositive integer");
    CertifiedReal::from_integer(m, prec)
        .ln()
        .expect("a positive integer rounds to a positive ball")
}
