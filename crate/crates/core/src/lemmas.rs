//! Elementary inequalities the estimates rely on, as certified predicates.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{certify_margin, Certificate, CertifiedReal, PrecisionLadder, Verdict};
use crate::report::ReportRow;

/// The seven inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lemma {
    /// (1-x)^(-3/2) < 1 + (3/2)x + (3/8)x^(3/2) for 0 < x <= 1/48.
    L1,
    /// (1-x)^(-a) <= 1 + (1/(1-c))^(a+1) a x for a >= 1/2, 0 < x <= c < 1.
    L2,
    /// 1 >= (1+x)^(-a) >= 1 - a x for a >= 1/2, 0 <= x <= 1.
    L3,
    /// x(1-x) < log(1+x) for x > 0.
    L4,
    /// log(1-x) >= -x/(1-x) for 0 < x < 1.
    L5,
    /// |log(1 +- x)| <= -log(1-x) for 0 < x < 1.
    L6,
    /// x(1 - x/2) < log(1+x) for x > 0.
    L7,
}

impl Lemma {
    pub const ALL: [Lemma; 7] = [
        Lemma::L1,
        Lemma::L2,
        Lemma::L3,
        Lemma::L4,
        Lemma::L5,
        Lemma::L6,
        Lemma::L7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::L1 => "L1",
            Lemma::L2 => "L2",
            Lemma::L3 => "L3",
            Lemma::L4 => "L4",
            Lemma::L5 => "L5",
            Lemma::L6 => "L6",
            Lemma::L7 => "L7",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Precondition(format!("unknown lemma {s:?}")))
    }
}

/// Which of log(1+x), log(1-x) an L6 instance bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Parameters of one lemma instance. Unused fields are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaParams {
    pub x: Rational,
    pub alpha: Option<Rational>,
    pub c: Option<Rational>,
    pub sign: Option<Sign>,
}

impl LemmaParams {
    pub fn x(x: impl Into<Rational>) -> Self {
        Self {
            x: x.into(),
            alpha: None,
            c: None,
            sign: None,
        }
    }

    pub fn with_alpha(mut self, alpha: impl Into<Rational>) -> Self {
        self.alpha = Some(alpha.into());
        self
    }

    pub fn with_c(mut self, c: impl Into<Rational>) -> Self {
        self.c = Some(c.into());
        self
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = Some(sign);
        self
    }
}

/// A checked lemma instance.
#[derive(Clone, Debug)]
pub struct LemmaInstance {
    pub lemma: Lemma,
    pub params: LemmaParams,
    pub verdict: Verdict,
}

fn violated(lemma: Lemma, detail: String) -> Error {
    Error::Hypothesis {
        lemma: lemma.name(),
        detail,
    }
}

fn need_alpha(lemma: Lemma, p: &LemmaParams) -> Result<Rational> {
    let alpha = p
        .alpha
        .clone()
        .ok_or_else(|| violated(lemma, "alpha is required".into()))?;
    if alpha < Rational::from((1, 2)) {
        return Err(violated(lemma, format!("alpha = {alpha} < 1/2")));
    }
    Ok(alpha)
}

fn open_unit(lemma: Lemma, x: &Rational) -> Result<()> {
    if *x <= 0 || *x >= 1 {
        return Err(violated(lemma, format!("x = {x} not in (0, 1)")));
    }
    Ok(())
}

enum Claim {
    /// Certify margin > 0.
    Strict(Box<dyn Fn(u32) -> Result<CertifiedReal> + Send + Sync>),
    /// Both margins > 0.
    Both(
        Box<dyn Fn(u32) -> Result<CertifiedReal> + Send + Sync>,
        Box<dyn Fn(u32) -> Result<CertifiedReal> + Send + Sync>,
    ),
    /// The instance is an equality case.
    Equality,
}

fn ball(q: &Rational, prec: u32) -> CertifiedReal {
    CertifiedReal::from_rational(q, prec)
}

fn one(prec: u32) -> CertifiedReal {
    CertifiedReal::from_i64(1, prec)
}

fn claim(lemma: Lemma, p: &LemmaParams) -> Result<Claim> {
    let x = p.x.clone();
    Ok(match lemma {
        Lemma::L1 => {
            if x <= 0 || x > Rational::from((1, 48)) {
                return Err(violated(lemma, format!("x = {x} not in (0, 1/48]")));
            }
            Claim::Strict(Box::new(move |prec| {
                let xb = ball(&x, prec);
                let rhs = &(&one(prec) + &(&xb * &CertifiedReal::from_ratio(3, 2, prec)))
                    + &(&xb.pow_rational(&Rational::from((3, 2)))?
                        * &CertifiedReal::from_ratio(3, 8, prec));
                let lhs = (&one(prec) - &xb).pow_rational(&Rational::from((-3, 2)))?;
                Ok(&rhs - &lhs)
            }))
        }
        Lemma::L2 => {
            let alpha = need_alpha(lemma, p)?;
            let c =
                p.c.clone()
                    .ok_or_else(|| violated(lemma, "c is required".into()))?;
            if c <= 0 || c >= 1 || x < 0 || x > c {
                return Err(violated(
                    lemma,
                    format!("need 0 < x <= c < 1, got x = {x}, c = {c}"),
                ));
            }
            if x == 0 {
                return Ok(Claim::Equality);
            }
            Claim::Strict(Box::new(move |prec| {
                let xb = ball(&x, prec);
                let ab = ball(&alpha, prec);
                let base = one(prec).try_div(&(&one(prec) - &ball(&c, prec)))?;
                let growth = base.pow_rational(&Rational::from(&alpha + 1u32))?;
                let rhs = &one(prec) + &(&(&growth * &ab) * &xb);
                let lhs = (&one(prec) - &xb).pow_rational(&-alpha.clone())?;
                Ok(&rhs - &lhs)
            }))
        }
        Lemma::L3 => {
            let alpha = need_alpha(lemma, p)?;
            if !(0..=1).contains(&x) {
                return Err(violated(lemma, format!("x = {x} not in [0, 1]")));
            }
            if x == 0 {
                return Ok(Claim::Equality);
            }
            let (x2, alpha2) = (x.clone(), alpha.clone());
            Claim::Both(
                Box::new(move |prec| {
                    let mid = (&one(prec) + &ball(&x, prec)).pow_rational(&-alpha.clone())?;
                    Ok(&one(prec) - &mid)
                }),
                Box::new(move |prec| {
                    let mid = (&one(prec) + &ball(&x2, prec)).pow_rational(&-alpha2.clone())?;
                    let low = &one(prec) - &(&ball(&alpha2, prec) * &ball(&x2, prec));
                    Ok(&mid - &low)
                }),
            )
        }
        Lemma::L4 | Lemma::L7 => {
            if x <= 0 {
                return Err(violated(lemma, format!("x = {x} must be positive")));
            }
            Claim::Strict(Box::new(move |prec| {
                let xb = ball(&x, prec);
                let factor = if lemma == Lemma::L4 {
                    &one(prec) - &xb
                } else {
                    &one(prec) - &xb.mul_pow2(-1)
                };
                Ok(&(&one(prec) + &xb).ln()? - &(&xb * &factor))
            }))
        }
        Lemma::L5 => {
            open_unit(lemma, &x)?;
            Claim::Strict(Box::new(move |prec| {
                let xb = ball(&x, prec);
                let om = &one(prec) - &xb;
                Ok(&om.ln()? + &xb.try_div(&om)?)
            }))
        }
        Lemma::L6 => {
            open_unit(lemma, &x)?;
            let sign = p
                .sign
                .ok_or_else(|| violated(lemma, "sign (plus or minus) is required".into()))?;
            match sign {
                // -log(1-x) - log(1+x) = -log(1-x^2) > 0.
                Sign::Plus => Claim::Strict(Box::new(move |prec| {
                    let xb = ball(&x, prec);
                    Ok(-&(&one(prec) - &xb).ln()? - (&one(prec) + &xb).ln()?)
                })),
                // |log(1-x)| = -log(1-x) exactly; certifying log(1-x) < 0
                // proves the non-strict claim.
                Sign::Minus => Claim::Strict(Box::new(move |prec| {
                    Ok(-(&one(prec) - &ball(&x, prec)).ln()?)
                })),
            }
        }
    })
}

/// Certifies one lemma instance, returning the deciding margin.
pub fn check_lemma_certificate(
    lemma: Lemma,
    params: &LemmaParams,
    ladder: &PrecisionLadder,
) -> Result<Certificate> {
    match claim(lemma, params)? {
        Claim::Equality => Ok(Certificate::exact(
            Verdict::Boundary,
            CertifiedReal::zero(ladder.first()),
        )),
        Claim::Strict(margin) => certify_margin(margin, ladder),
        Claim::Both(a, b) => {
            let ca = certify_margin(a, ladder)?;
            let cb = certify_margin(b, ladder)?;
            let verdict = ca.verdict.and(cb.verdict);
            // Report the side that decided the combined verdict, else the tighter one.
            let pick_a = if ca.verdict == verdict && cb.verdict != verdict {
                true
            } else if cb.verdict == verdict && ca.verdict != verdict {
                false
            } else {
                ca.margin.to_f64() <= cb.margin.to_f64()
            };
            let chosen = if pick_a { ca } else { cb };
            Ok(Certificate { verdict, ..chosen })
        }
    }
}

/// Verdict of one lemma instance. Parameters outside the hypothesis region
/// are rejected with [`Error::Hypothesis`].
pub fn check_lemma(
    lemma: Lemma,
    params: &LemmaParams,
    ladder: &PrecisionLadder,
) -> Result<Verdict> {
    check_lemma_certificate(lemma, params, ladder).map(|c| c.verdict)
}

/// Checks every grid point; row `n` is the index into `grid`.
pub fn sweep_lemma(
    lemma: Lemma,
    grid: &[LemmaParams],
    ladder: &PrecisionLadder,
) -> Result<Vec<ReportRow>> {
    let id = format!("lemma:{lemma}");
    grid.par_iter()
        .enumerate()
        .map(|(i, p)| {
            let cert = check_lemma_certificate(lemma, p, ladder)?;
            Ok(ReportRow::from_certificate(
                id.clone(),
                i as u64,
                None,
                &cert,
            ))
        })
        .collect()
}
