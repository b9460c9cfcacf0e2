use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CertifiedReal;
use crate::error::{Error, Result};

/// Environment variable that caps the highest rung of a ladder.
pub const MAX_PRECISION_ENV: &str = "LOGPART_MAX_PRECISION_BITS";

pub const DEFAULT_RUNGS: [u32; 7] = [64, 128, 256, 512, 1024, 2048, 4096];

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// The claimed strict inequality is proved.
    Holds,
    /// Its negation is proved.
    Fails,
    /// The enclosures still overlapped at the top of the ladder.
    Undecided,
    /// Both sides are provably equal, or the claim is an equality case the
    /// strict comparison cannot resolve.
    Boundary,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::Fails => "Fails",
            Verdict::Undecided => "Undecided",
            Verdict::Boundary => "Boundary",
        }
    }

    /// Combines two verdicts that must both hold.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fails, _) | (_, Fails) => Fails,
            (Undecided, _) | (_, Undecided) => Undecided,
            (Boundary, _) | (_, Boundary) => Boundary,
            (Holds, Holds) => Holds,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Holds" => Ok(Verdict::Holds),
            "Fails" => Ok(Verdict::Fails),
            "Undecided" => Ok(Verdict::Undecided),
            "Boundary" => Ok(Verdict::Boundary),
            other => Err(Error::Format(format!("unknown verdict {other:?}"))),
        }
    }
}

/// A verdict together with the evidence behind it.
///
/// `margin` encloses `rhs - lhs` for a claim `lhs < rhs`, evaluated at the
/// rung where the ladder stopped.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub verdict: Verdict,
    pub precision: u32,
    pub margin: CertifiedReal,
}

impl Certificate {
    /// A certificate for a claim settled in exact arithmetic.
    pub fn exact(verdict: Verdict, margin: CertifiedReal) -> Self {
        Self {
            verdict,
            precision: 0,
            margin,
        }
    }
}

/// Increasing sequence of working precisions, in bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionLadder {
    rungs: Vec<u32>,
}

impl Default for PrecisionLadder {
    fn default() -> Self {
        Self {
            rungs: DEFAULT_RUNGS.to_vec(),
        }
    }
}

impl PrecisionLadder {
    pub fn new(mut rungs: Vec<u32>) -> Result<Self> {
        rungs.sort_unstable();
        rungs.dedup();
        if rungs.is_empty() || rungs[0] < 2 {
            return Err(Error::Precondition(
                "a ladder needs at least one rung of 2 or more bits".into(),
            ));
        }
        Ok(Self { rungs })
    }

    /// A single-rung ladder.
    pub fn fixed(bits: u32) -> Self {
        Self {
            rungs: vec![bits.max(2)],
        }
    }

    /// The default rungs from `start` upward. A start between rungs becomes
    /// its own first rung.
    pub fn starting_at(start: u32) -> Self {
        let mut rungs = vec![start.max(2)];
        rungs.extend(DEFAULT_RUNGS.iter().copied().filter(|&b| b > start));
        Self { rungs }
    }

    /// Drops rungs above `max_bits`, keeping at least the first rung.
    pub fn capped(mut self, max_bits: u32) -> Self {
        let first = self.rungs[0];
        self.rungs.retain(|&b| b <= max_bits);
        if self.rungs.is_empty() {
            self.rungs.push(first.min(max_bits).max(2));
        }
        self
    }

    /// `starting_at(start)` capped by `LOGPART_MAX_PRECISION_BITS` if set.
    pub fn from_env(start: u32) -> Result<Self> {
        let ladder = Self::starting_at(start);
        match std::env::var(MAX_PRECISION_ENV) {
            Ok(raw) => {
                let cap: u32 = raw.trim().parse().map_err(|_| {
                    Error::Precondition(format!(
                        "{MAX_PRECISION_ENV} must be a bit count, got {raw:?}"
                    ))
                })?;
                Ok(ladder.capped(cap))
            }
            Err(_) => Ok(ladder),
        }
    }

    pub fn rungs(&self) -> &[u32] {
        &self.rungs
    }

    pub fn first(&self) -> u32 {
        self.rungs[0]
    }

    pub fn max(&self) -> u32 {
        *self.rungs.last().expect("ladder is never empty")
    }
}

/// Climbs the ladder until the ball returned by `margin` excludes zero.
///
/// Holds when the margin is certified positive, Fails when it is certified
/// negative, Undecided if it still straddles zero at the last rung.
pub fn certify_margin<F>(margin: F, ladder: &PrecisionLadder) -> Result<Certificate>
where
    F: Fn(u32) -> Result<CertifiedReal>,
{
    let mut last = None;
    for &prec in ladder.rungs() {
        let m = margin(prec)?;
        if m.is_positive() {
            return Ok(Certificate {
                verdict: Verdict::Holds,
                precision: prec,
                margin: m,
            });
        }
        if m.is_negative() {
            return Ok(Certificate {
                verdict: Verdict::Fails,
                precision: prec,
                margin: m,
            });
        }
        last = Some((prec, m));
    }
    let (precision, margin) = last.expect("ladder is never empty");
    Ok(Certificate {
        verdict: Verdict::Undecided,
        precision,
        margin,
    })
}

/// Certifies `value > 0`.
pub fn certify_positive<F>(value: F, ladder: &PrecisionLadder) -> Result<Certificate>
where
    F: Fn(u32) -> Result<CertifiedReal>,
{
    certify_margin(value, ladder)
}

/// Certifies the strict claim `lhs < rhs`, re-evaluating both sides at each
/// rung.
pub fn certified_strict_less<L, R>(lhs: L, rhs: R, ladder: &PrecisionLadder) -> Result<Certificate>
where
    L: Fn(u32) -> Result<CertifiedReal>,
    R: Fn(u32) -> Result<CertifiedReal>,
{
    certify_margin(|prec| Ok(&rhs(prec)? - &lhs(prec)?), ladder)
}
