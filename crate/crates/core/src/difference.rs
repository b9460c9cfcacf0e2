//! Finite differences of log p(n): the log-concavity family of statements,
//! the split of (-1)^(r-1) Δ^r log p(n) into a smooth part H_r and a small
//! part G_r, and the explicit thresholds beyond which its sign and size are
//! controlled.

use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hrr::TermBundle;
use crate::partition::{binomial, with_values, SignThreshold};
use crate::precision::{
    certify_margin, log_of_integer, Certificate, CertifiedReal, PrecisionLadder, Verdict,
};
use crate::special::{lambert_w, mu, mu_at, rising_factorial, Branch};

/// Default truncation of the a_2 / a_3 series.
pub const DEFAULT_SERIES_TERMS: u32 = 64;

fn c(v: i64, prec: u32) -> CertifiedReal {
    CertifiedReal::from_i64(v, prec)
}

fn q(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

fn ball_q(r: &Rational, prec: u32) -> CertifiedReal {
    CertifiedReal::from_rational(r, prec)
}

fn ball_int(v: &Integer, prec: u32) -> CertifiedReal {
    CertifiedReal::from_integer(v, prec)
}

fn factorial(m: u32) -> Integer {
    Integer::from(Integer::factorial(m))
}

/// (-1)^(r-1) Δ^r applied to samples v_0..v_r, i.e. sum_k (-1)^(k+1) C(r,k) v_k.
pub fn forward_difference(values: &[CertifiedReal]) -> CertifiedReal {
    let r = (values.len() - 1) as u32;
    let prec = values
        .iter()
        .map(CertifiedReal::precision)
        .max()
        .unwrap_or(64);
    let mut acc = CertifiedReal::zero(prec);
    for (k, v) in values.iter().enumerate() {
        let term = &ball_int(&binomial(r, k as u32), prec) * v;
        acc = if k % 2 == 1 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

/// (-1)^(r-1) Δ^r log p(n), split as H_r + G_r.
#[derive(Clone, Debug, Serialize)]
pub struct DifferenceValue {
    pub n: u64,
    pub r: u32,
    pub value: CertifiedReal,
    pub h_part: CertifiedReal,
    pub g_part: CertifiedReal,
}

fn check_nr(n: u64, r: u32) -> Result<()> {
    if n == 0 || r == 0 {
        return Err(Error::Precondition(format!(
            "need n, r >= 1, got n = {n}, r = {r}"
        )));
    }
    Ok(())
}

/// (-1)^(r-1) Δ^r log p(n) alone, without the decomposition.
pub fn oriented_log_difference(n: u64, r: u32, prec: u32) -> CertifiedReal {
    with_values(n + u64::from(r), |p| {
        let logs: Vec<_> = (0..=r as usize)
            .map(|k| log_of_integer(&p[n as usize + k], prec))
            .collect();
        forward_difference(&logs)
    })
}

/// The difference together with H_r and G_r = value - H_r.
pub fn delta_r_log_p(n: u64, r: u32, prec: u32) -> Result<DifferenceValue> {
    check_nr(n, r)?;
    let value = oriented_log_difference(n, r, prec);
    let h_part = h_r(n, r, prec)?;
    let g_part = &value - &h_part;
    Ok(DifferenceValue {
        n,
        r,
        value,
        h_part,
        g_part,
    })
}

/// H_r = (-1)^(r-1) Δ^r (-3 log mu(n) + log(mu(n) - 1) + mu(n)), by direct
/// binomial differencing of the closed form.
pub fn h_r(n: u64, r: u32, prec: u32) -> Result<CertifiedReal> {
    check_nr(n, r)?;
    let samples = (0..=u64::from(r))
        .map(|k| {
            let m = mu(n + k, prec);
            let shifted = &m - &c(1, prec);
            if !shifted.is_positive() {
                return Err(Error::Domain(format!("mu({}) <= 1", n + k)));
            }
            Ok(&(&shifted.ln()? + &m) - &(&m.ln()? * &c(3, prec)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(forward_difference(&samples))
}

/// p_2(n) = 2 log p(n) - log p(n-1) - log p(n+1) = -Δ^2 log p(n-1).
///
/// Defined for n >= 1 (n = 1 uses p(0) = 1).
pub fn p2_of_n(n: u64, prec: u32) -> Result<CertifiedReal> {
    if n == 0 {
        return Err(Error::Precondition("p_2(n) needs n >= 1".into()));
    }
    Ok(with_values(n + 1, |p| {
        let i = n as usize;
        let mid = log_of_integer(&p[i], prec).mul_pow2(1);
        &(&mid - &log_of_integer(&p[i - 1], prec)) - &log_of_integer(&p[i + 1], prec)
    }))
}

/// log(1 + pi / (sqrt(24) n^(3/2))), the right side of the conjectured bound.
pub fn conj_rhs(n: u64, prec: u32) -> Result<CertifiedReal> {
    let nn = c(n as i64, prec);
    let x =
        CertifiedReal::pi(prec).try_div(&(&c(24, prec).sqrt()? * &nn.pow_rational(&q(3, 2))?))?;
    (&c(1, prec) + &x).ln()
}

/// Certifies log-concavity at n: p_2(n) > 0.
pub fn verify_log_concavity(n: u64, ladder: &PrecisionLadder) -> Result<Certificate> {
    certify_margin(|prec| p2_of_n(n, prec), ladder)
}

/// Certifies p_2(n) < log(1 + pi/(sqrt(24) n^(3/2))).
pub fn verify_ratio_conjecture(n: u64, ladder: &PrecisionLadder) -> Result<Certificate> {
    if n < 2 {
        return Err(Error::Precondition("the ratio bound needs n >= 2".into()));
    }
    certify_margin(|prec| Ok(&conj_rhs(n, prec)? - &p2_of_n(n, prec)?), ladder)
}

/// (p(n-1)/p(n))(1 + 1/n) > p(n)/p(n+1), decided in exact rationals.
pub fn verify_ratio_exact(n: u64, prec: u32) -> Result<Certificate> {
    if n < 2 {
        return Err(Error::Precondition("needs n >= 2".into()));
    }
    let margin = with_values(n + 1, |p| {
        let i = n as usize;
        let lhs = Rational::from((Integer::from(&p[i - 1] * (n + 1)), Integer::from(&p[i] * n)));
        let rhs = Rational::from((p[i].clone(), p[i + 1].clone()));
        lhs - rhs
    });
    let verdict = match margin.cmp0() {
        std::cmp::Ordering::Greater => Verdict::Holds,
        std::cmp::Ordering::Less => Verdict::Fails,
        std::cmp::Ordering::Equal => Verdict::Boundary,
    };
    Ok(Certificate::exact(verdict, ball_q(&margin, prec)))
}

/// (p(n-1)/p(n))(1 + 240/(24n)^(3/2)) > p(n)/p(n+1), i.e.
/// p_2(n) < log(1 + 240/(24n)^(3/2)).
pub fn verify_ratio_cubic(n: u64, ladder: &PrecisionLadder) -> Result<Certificate> {
    if n < 2 {
        return Err(Error::Precondition("needs n >= 2".into()));
    }
    certify_margin(
        |prec| {
            let x = c(240, prec).try_div(&c(24 * n as i64, prec).pow_rational(&q(3, 2))?)?;
            Ok(&(&c(1, prec) + &x).ln()? - &p2_of_n(n, prec)?)
        },
        ladder,
    )
}

/// p(a) p(b) > p(a + b), decided exactly.
pub fn verify_bessenrodt_ono(a: u64, b: u64) -> Result<Verdict> {
    bessenrodt_ono_margin(a, b).map(|m| match m.cmp0() {
        std::cmp::Ordering::Greater => Verdict::Holds,
        std::cmp::Ordering::Less => Verdict::Fails,
        std::cmp::Ordering::Equal => Verdict::Boundary,
    })
}

fn bessenrodt_ono_margin(a: u64, b: u64) -> Result<Integer> {
    if a < 2 || b < 2 {
        return Err(Error::Precondition(format!(
            "needs a, b > 1, got ({a}, {b})"
        )));
    }
    Ok(with_values(a + b, |p| {
        Integer::from(&p[a as usize] * &p[b as usize]) - &p[(a + b) as usize]
    }))
}

/// Every split s = a + b with 1 < a <= b, checked exactly. The reported
/// margin is the smallest p(a)p(b) - p(s).
pub fn verify_bessenrodt_ono_sum(s: u64, prec: u32) -> Result<Certificate> {
    if s < 4 {
        return Err(Error::Precondition(format!("needs a + b >= 4, got {s}")));
    }
    let mut worst: Option<Integer> = None;
    for a in 2..=s / 2 {
        let m = bessenrodt_ono_margin(a, s - a)?;
        if worst.as_ref().is_none_or(|w| m < *w) {
            worst = Some(m);
        }
    }
    let worst = worst.expect("at least one split");
    let verdict = match worst.cmp0() {
        std::cmp::Ordering::Greater => Verdict::Holds,
        std::cmp::Ordering::Less => Verdict::Fails,
        std::cmp::Ordering::Equal => Verdict::Boundary,
    };
    Ok(Certificate::exact(verdict, ball_int(&worst, prec)))
}

/// Pairs (a, b) with 1 < a <= b and a + b <= max_sum where p(a)p(b) > p(a+b)
/// fails.
pub fn bessenrodt_ono_failures(max_sum: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for s in 4..=max_sum {
        for a in 2..=s / 2 {
            if bessenrodt_ono_margin(a, s - a)
                .map(|m| m <= 0)
                .unwrap_or(false)
            {
                out.push((a, s - a));
            }
        }
    }
    out
}

fn require_at_least_50(n: u64) -> Result<()> {
    if n < 50 {
        return Err(Error::Precondition(format!("needs n >= 50, got {n}")));
    }
    Ok(())
}

/// The four-term upper bound for p_2(n), valid for n >= 50:
/// 24pi/(24(n-1)-1)^(3/2)
///   + 288pi(-3 + pi sqrt(24(n-1)-1)) / ((24(n-1)-1)^(3/2) (-6 + pi sqrt(24(n-1)-1))^2)
///   - 864/(24(n+1)-1)^2 + 2 exp(-(pi/10) sqrt(2n/3)).
pub fn desalvo_pak_upper(n: u64, prec: u32) -> Result<CertifiedReal> {
    require_at_least_50(n)?;
    let pi = CertifiedReal::pi(prec);
    let m = c(24 * (n as i64 - 1) - 1, prec);
    let m32 = m.pow_rational(&q(3, 2))?;
    let root = m.sqrt()?;
    let first = (&pi * &c(24, prec)).try_div(&m32)?;
    let num = &(&pi * &c(288, prec)) * &(&(&pi * &root) - &c(3, prec));
    let den = &m32 * &(&(&pi * &root) - &c(6, prec)).square();
    let second = num.try_div(&den)?;
    let third = c(864, prec).try_div(&c(24 * (n as i64 + 1) - 1, prec).square())?;
    let expo = (&pi * &ball_q(&q(2 * n as i64, 3), prec).sqrt()?).try_div(&c(10, prec))?;
    let fourth = (-expo).exp().mul_pow2(1);
    Ok(&(&(&first + &second) - &third) + &fourth)
}

/// 24pi/(24n)^(3/2) - (24pi/(24n)^(3/2))^2, the intermediate bound used for
/// n >= 5000.
pub fn desalvo_pak_target(n: u64, prec: u32) -> Result<CertifiedReal> {
    let y = (&CertifiedReal::pi(prec) * &c(24, prec))
        .try_div(&c(24 * n as i64, prec).pow_rational(&q(3, 2))?)?;
    Ok(&y - &y.square())
}

/// Certifies p_2(n) < desalvo_pak_upper(n).
pub fn verify_desalvo_pak_bound(n: u64, ladder: &PrecisionLadder) -> Result<Certificate> {
    require_at_least_50(n)?;
    certify_margin(
        |prec| Ok(&desalvo_pak_upper(n, prec)? - &p2_of_n(n, prec)?),
        ladder,
    )
}

/// Certifies desalvo_pak_upper(n) < desalvo_pak_target(n) < conj_rhs(n); the
/// chain that settles the ratio bound from n = 5000 on.
pub fn verify_desalvo_pak_chain(n: u64, ladder: &PrecisionLadder) -> Result<Certificate> {
    require_at_least_50(n)?;
    certify_all(
        |prec| {
            let upper = desalvo_pak_upper(n, prec)?;
            let target = desalvo_pak_target(n, prec)?;
            Ok(vec![&target - &upper, &conj_rhs(n, prec)? - &target])
        },
        ladder,
    )
}

/// Climbs the ladder until every margin is certified positive, or one is
/// certified negative. The returned margin is the first failing one, or the
/// smallest positive one.
pub fn certify_all<F>(margins: F, ladder: &PrecisionLadder) -> Result<Certificate>
where
    F: Fn(u32) -> Result<Vec<CertifiedReal>>,
{
    let mut last = None;
    for &prec in ladder.rungs() {
        let ms = margins(prec)?;
        if let Some(bad) = ms.iter().find(|m| m.is_negative()) {
            return Ok(Certificate {
                verdict: Verdict::Fails,
                precision: prec,
                margin: bad.clone(),
            });
        }
        let tightest = ms
            .iter()
            .min_by(|a, b| a.to_f64().total_cmp(&b.to_f64()))
            .cloned()
            .unwrap_or_else(|| CertifiedReal::from_i64(1, prec));
        if ms.iter().all(CertifiedReal::is_positive) {
            return Ok(Certificate {
                verdict: Verdict::Holds,
                precision: prec,
                margin: tightest,
            });
        }
        let undecided = ms.into_iter().find(CertifiedReal::contains_zero);
        last = Some((prec, undecided.unwrap_or(tightest)));
    }
    let (precision, margin) = last.expect("ladder is never empty");
    Ok(Certificate {
        verdict: Verdict::Undecided,
        precision,
        margin,
    })
}

/// Members of the mu family whose derivatives have closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuFamily {
    /// mu(x)
    Mu,
    /// log mu(x)
    LogMu,
    /// mu(x)^(-k)
    InvMuPow(u32),
}

impl MuFamily {
    pub fn value(self, x: &CertifiedReal) -> Result<CertifiedReal> {
        let m = mu_at(x)?;
        match self {
            MuFamily::Mu => Ok(m),
            MuFamily::LogMu => m.ln(),
            MuFamily::InvMuPow(k) => m.powi(-i64::from(k)),
        }
    }
}

/// Closed forms of the r-th derivatives, for 24x > 1:
///   mu^(r)       = (-1)^(r-1) (1/2)_(r-1) 24^r pi / (12 (24x-1)^(r-1/2))
///   (log mu)^(r) = (1/2) (-1)^(r-1) (r-1)! 24^r / (24x-1)^r
///   (mu^-k)^(r)  = (k/2)_r (-24)^r 6^k / (pi^k (24x-1)^(k/2+r))
pub fn mu_family_derivative(which: MuFamily, r: u32, x: &CertifiedReal) -> Result<CertifiedReal> {
    if r == 0 {
        return Err(Error::Precondition("derivative order must be >= 1".into()));
    }
    let prec = x.precision();
    let base = &(x * &c(24, prec)) - &c(1, prec);
    if !base.is_positive() {
        return Err(Error::Domain(format!("needs 24x > 1, got x = {x}")));
    }
    let pi = CertifiedReal::pi(prec);
    let p24 = ball_int(&Integer::from(Integer::u_pow_u(24, r)), prec);
    let sign_odd = r.is_multiple_of(2); // (-1)^(r-1) is negative for even r
    let value = match which {
        MuFamily::Mu => {
            let coef = ball_q(&rising_factorial(&q(1, 2), r - 1), prec);
            let den = &c(12, prec) * &base.pow_rational(&q(2 * r as i64 - 1, 2))?;
            let v = (&(&coef * &p24) * &pi).try_div(&den)?;
            if sign_odd {
                -v
            } else {
                v
            }
        }
        MuFamily::LogMu => {
            let v = (&ball_int(&factorial(r - 1), prec) * &p24)
                .try_div(&base.powi(i64::from(r))?)?
                .mul_pow2(-1);
            if sign_odd {
                -v
            } else {
                v
            }
        }
        MuFamily::InvMuPow(k) => {
            if k == 0 {
                return Err(Error::Precondition("k must be >= 1".into()));
            }
            let coef = ball_q(&rising_factorial(&q(i64::from(k), 2), r), prec);
            let p6 = ball_int(&Integer::from(Integer::u_pow_u(6, k)), prec);
            let den = &pi.powi(i64::from(k))? * &base.pow_rational(&q(i64::from(k + 2 * r), 2))?;
            let v = (&(&coef * &p24) * &p6).try_div(&den)?;
            if r % 2 == 1 {
                -v
            } else {
                v
            }
        }
    };
    Ok(value)
}

/// Certifies (-1)^(r-1) f^(r)(n+r) < (-1)^(r-1) Δ^r f(n) < (-1)^(r-1) f^(r)(n)
/// for f = mu, log mu, or -mu^(-k).
pub fn verify_sandwich(
    which: MuFamily,
    r: u32,
    n: u64,
    ladder: &PrecisionLadder,
) -> Result<Certificate> {
    // f = -mu^(-k) for the power family.
    let negate = matches!(which, MuFamily::InvMuPow(_));
    let orient = |v: CertifiedReal| {
        let v = if negate { -v } else { v };
        if r.is_multiple_of(2) {
            -v
        } else {
            v
        }
    };
    certify_all(
        |prec| {
            let samples = (0..=u64::from(r))
                .map(|k| which.value(&c((n + k) as i64, prec)))
                .collect::<Result<Vec<_>>>()?;
            // forward_difference already carries the (-1)^(r-1) orientation.
            let mut diff = forward_difference(&samples);
            if negate {
                diff = -diff;
            }
            let hi = orient(mu_family_derivative(which, r, &c(n as i64, prec))?);
            let lo = orient(mu_family_derivative(
                which,
                r,
                &c((n + u64::from(r)) as i64, prec),
            )?);
            Ok(vec![&diff - &lo, &hi - &diff])
        },
        ladder,
    )
}

/// The bounds on F_1, F_2, F_3 and the comparison quantity F_4 at (n, r).
#[derive(Clone, Debug, Serialize)]
pub struct GBoundBreakdown {
    pub n: u64,
    pub r: u32,
    pub bound_f1: CertifiedReal,
    pub bound_f2: CertifiedReal,
    pub bound_f3: CertifiedReal,
    pub f4: CertifiedReal,
}

impl GBoundBreakdown {
    /// 5 * 2^(r+1/2) e^(-mu(n)/2), the bound on |G_r|.
    pub fn g_limit(n: u64, r: u32, prec: u32) -> Result<CertifiedReal> {
        Ok(&c(5, prec) * &f4_limit(n, r, prec)?)
    }
}

/// 2^(r+1/2) e^(-mu(n)/2).
fn f4_limit(n: u64, r: u32, prec: u32) -> Result<CertifiedReal> {
    let two_pow = c(2, prec).pow_rational(&q(2 * i64::from(r) + 1, 2))?;
    Ok(&two_pow * &(-&mu(n, prec).mul_pow2(-1)).exp())
}

/// F-breakdown from precomputed HRR terms.
fn breakdown_from(n: u64, r: u32, t: &TermBundle, prec: u32) -> Result<GBoundBreakdown> {
    let m = mu(n, prec);
    let one = c(1, prec);
    let scale = |v: CertifiedReal| v.mul_pow2(r as i32);
    let f2 = t.f2.abs();
    let bound_f1 = scale(&(&m + &one).try_div(&(&m - &one))? * &(-&m.mul_pow2(1)).exp());
    let bound_f2 = scale(f2.try_div(&t.gap())?);
    let bound_f3 = scale(t.g_bound.try_div(&t.gap_minus_tail())?);
    let f4 = scale(f2.try_div(&t.f1)?);
    Ok(GBoundBreakdown {
        n,
        r,
        bound_f1,
        bound_f2,
        bound_f3,
        f4,
    })
}

pub fn g_bound_breakdown(n: u64, r: u32, prec: u32) -> Result<GBoundBreakdown> {
    require_at_least_50(n)?;
    check_nr(n, r)?;
    breakdown_from(n, r, &TermBundle::new(n, prec)?, prec)
}

/// Certifies, at (n, r):
///   bound_F1 + bound_F2 + bound_F3 < 5 F_4,
///   F_4 < 2^(r+1/2) e^(-mu/2),
///   |G_r| < 5 * 2^(r+1/2) e^(-mu/2) for the computed G_r.
pub fn verify_g_bound(n: u64, r: u32, ladder: &PrecisionLadder) -> Result<Certificate> {
    require_at_least_50(n)?;
    check_nr(n, r)?;
    certify_all(
        |prec| {
            let t = TermBundle::new(n, prec)?;
            let b = breakdown_from(n, r, &t, prec)?;
            let limit = f4_limit(n, r, prec)?;
            let sum = &(&b.bound_f1 + &b.bound_f2) + &b.bound_f3;
            let g = delta_r_log_p(n, r, prec)?.g_part.abs();
            Ok(vec![
                &(&b.f4 * &c(5, prec)) - &sum,
                &limit - &b.f4,
                &(&limit * &c(5, prec)) - &g,
            ])
        },
        ladder,
    )
}

/// log(1 + (sqrt6 pi / 6) (1/2)_(r-1) / (n+1)^(r-1/2)).
pub fn u_r_bound(n: u64, r: u32, prec: u32) -> Result<CertifiedReal> {
    check_nr(n, r)?;
    let pi = CertifiedReal::pi(prec);
    let lead = (&c(6, prec).sqrt()? * &pi).try_div(&c(6, prec))?;
    let x = (&lead * &ball_q(&rising_factorial(&q(1, 2), r - 1), prec))
        .try_div(&c(n as i64 + 1, prec).pow_rational(&q(2 * i64::from(r) - 1, 2))?)?;
    (&c(1, prec) + &x).ln()
}

/// Certifies (-1)^(r-1) Δ^r log p(n) < u_r_bound(n, r).
pub fn verify_upper_bound(n: u64, r: u32, ladder: &PrecisionLadder) -> Result<Certificate> {
    check_nr(n, r)?;
    certify_margin(
        |prec| Ok(&u_r_bound(n, r, prec)? - &oriented_log_difference(n, r, prec)),
        ladder,
    )
}

/// Certifies 0 < (-1)^(r-1) Δ^r log p(n) < u_r_bound(n, r).
pub fn verify_upper_bound_chain(n: u64, r: u32, ladder: &PrecisionLadder) -> Result<Certificate> {
    check_nr(n, r)?;
    certify_all(
        |prec| {
            let v = oriented_log_difference(n, r, prec);
            Ok(vec![&u_r_bound(n, r, prec)? - &v, v])
        },
        ladder,
    )
}

/// Certifies (-1)^(r-1) Δ^r log p(n) > 0.
pub fn verify_positivity(n: u64, r: u32, ladder: &PrecisionLadder) -> Result<Certificate> {
    check_nr(n, r)?;
    certify_margin(|prec| Ok(oriented_log_difference(n, r, prec)), ladder)
}

/// Smallest n0 >= 1 with (-1)^(r-1) Δ^r log p(n) certified positive on
/// [n0, n_max]. Scans downward from n_max and stops at the first n that is
/// not certified positive.
pub fn empirical_sign_threshold_logp(
    r: u32,
    n_max: u64,
    ladder: &PrecisionLadder,
) -> Result<SignThreshold> {
    if r == 0 || n_max == 0 {
        return Err(Error::Precondition("needs r, n_max >= 1".into()));
    }
    crate::partition::ensure_table(n_max + u64::from(r));
    let mut threshold = None;
    for n in (1..=n_max).rev() {
        if verify_positivity(n, r, ladder)?.verdict == Verdict::Holds {
            threshold = Some(n);
        } else {
            break;
        }
    }
    Ok(SignThreshold {
        r,
        n_max,
        threshold,
    })
}

/// Which explicit threshold is being assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Upper bound (-1)^(r-1) Δ^r log p(n) < U_r: constants a_i, u_i.
    #[serde(rename = "thm31")]
    UpperBound,
    /// Positivity: constants b_i, m_i.
    #[serde(rename = "thm41")]
    Positivity,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::UpperBound => "thm31",
            Family::Positivity => "thm41",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm31" => Ok(Family::UpperBound),
            "thm41" => Ok(Family::Positivity),
            other => Err(Error::Precondition(format!("unknown family {other:?}"))),
        }
    }
}

/// Constants behind an explicit threshold n(r).
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdConstants {
    pub r: u32,
    pub family: Family,
    /// a_1 or b_1.
    pub c1: CertifiedReal,
    /// a_2 or b_2.
    pub c2: CertifiedReal,
    /// a_3 or b_3.
    pub c3: CertifiedReal,
    /// u_1 or m_1.
    pub u_or_m_1: CertifiedReal,
    /// u_2 or m_2: the larger root of the crossing equation.
    pub u_or_m_2: CertifiedReal,
    /// Argument handed to W_-1; certified inside (-1/e, 0).
    pub lambert_argument: CertifiedReal,
    pub series_terms: u32,
    pub n_of_r: u64,
}

fn ceil_upper(x: &CertifiedReal) -> Result<u64> {
    x.upper()
        .to_integer_round(Round::Up)
        .and_then(|(i, _)| i.to_u64())
        .ok_or_else(|| Error::Domain(format!("threshold {x} out of range")))
}

fn floor_lower(x: &CertifiedReal) -> Result<u64> {
    x.lower()
        .to_integer_round(Round::Down)
        .and_then(|(i, _)| i.to_u64())
        .ok_or_else(|| Error::Domain(format!("threshold {x} out of range")))
}

/// Sum of term(1..=k_max) plus a geometric tail bound. `ratio` must bound
/// term(k+1)/term(k) for every k >= k_max; it has to be below 1/2 at k_max.
fn series_with_tail<T, R>(k_max: u32, term: T, ratio: R) -> Result<CertifiedReal>
where
    T: Fn(u32) -> Result<CertifiedReal>,
    R: Fn(u32) -> Result<CertifiedReal>,
{
    let mut sum = term(1)?;
    let mut last = sum.clone();
    for k in 2..=k_max {
        last = term(k)?;
        sum = &sum + &last;
    }
    let rho = ratio(k_max)?;
    if rho.upper() >= 0.5 {
        return Err(Error::Validation(format!(
            "series ratio bound {rho} is not below 1/2 at k = {k_max}"
        )));
    }
    // sum_{k > K} t_k <= t_K rho / (1 - rho) <= 2 rho t_K
    let tail = rug::Float::with_val_round(64, &last.upper_short() * &rho.upper_short(), Round::Up)
        .0
        * 2u32;
    Ok(sum.widen(&tail))
}

/// 6 / (pi sqrt(24 (48r - 2))), the base decay rate of the a_2 / a_3 terms.
fn series_decay(r: u32, prec: u32) -> Result<CertifiedReal> {
    let inner = c(24 * (48 * i64::from(r) - 2), prec).sqrt()?;
    c(6, prec).try_div(&(&CertifiedReal::pi(prec) * &inner))
}

/// Certifies 0 < -z < 1/e.
fn check_lambert_argument(z: &CertifiedReal) -> Result<()> {
    let prec = z.precision();
    let inv_e = c(-1, prec).exp();
    if !z.is_negative() || !(z + &inv_e).is_positive() {
        return Err(Error::Domain(format!(
            "Lambert argument {z} not inside (-1/e, 0)"
        )));
    }
    Ok(())
}

/// Certifies that `crossing` is negative at floor(root) and positive at
/// ceil(root) + 1, so the root really is the last sign change.
fn validate_crossing<F>(root: &CertifiedReal, crossing: F) -> Result<()>
where
    F: Fn(u64) -> Result<CertifiedReal>,
{
    let below = floor_lower(root)?;
    let above = ceil_upper(root)? + 1;
    let (lo, hi) = (crossing(below)?, crossing(above)?);
    if lo.is_negative() && hi.is_positive() {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "no certified sign change of the threshold equation between {below} and {above}"
        )))
    }
}

/// Constants and n(r) for the requested family. `series_terms` truncates the
/// a_2 / a_3 series (ignored by the other family).
pub fn threshold_constants(
    r: u32,
    family: Family,
    series_terms: u32,
    prec: u32,
) -> Result<ThresholdConstants> {
    match family {
        Family::UpperBound => upper_bound_constants(r, series_terms, prec),
        Family::Positivity => positivity_constants(r, prec),
    }
}

fn upper_bound_constants(r: u32, k_max: u32, prec: u32) -> Result<ThresholdConstants> {
    if r < 2 {
        return Err(Error::Precondition("the a/u constants need r >= 2".into()));
    }
    if k_max < 10 {
        return Err(Error::Precondition(
            "series truncation needs at least 10 terms".into(),
        ));
    }
    let ri = i64::from(r);
    let pi = CertifiedReal::pi(prec);
    let half = ball_q(&rising_factorial(&q(1, 2), r - 1), prec);
    let w48 = ball_q(&q(48, 47), prec);
    let big = c(48 * ri - 2, prec);
    let p24_32 = c(24, prec).pow_rational(&q(3, 2))?;

    let a1 = &(&(&(&half * &w48.pow_rational(&q(2 * ri + 1, 2))?) * &c(2 * ri - 1, prec))
        * &(&c(25, prec) * &pi).try_div(&p24_32)?)
        + &(&pi.square().try_div(&c(6, prec))? * &half.square())
            .try_div(&big.pow_rational(&q(2 * ri - 3, 2))?)?;

    let decay = series_decay(r, prec)?;
    let step = c(6, prec).try_div(&(&pi * &c(24, prec).sqrt()?))?;
    let a2 = series_with_tail(
        k_max,
        |k| {
            let ki = i64::from(k);
            let coef = ball_q(&rising_factorial(&q(ki, 2), r), prec);
            let shrink = big.pow_rational(&q(-(ki - 1), 2))?;
            (&(&coef * &shrink) * &step.powi(ki)?).try_div(&c(ki, prec))
        },
        |k| Ok(&ball_q(&q(i64::from(k) + 1, i64::from(k)), prec).powi(ri)? * &decay),
    )?;
    let a3 = series_with_tail(
        k_max,
        |k| {
            let ki = i64::from(k);
            let coef = ball_q(&rising_factorial(&q(ki, 2), r + 1), prec);
            let shrink = big.pow_rational(&q(-(ki + 1), 2))?;
            let growth = w48.pow_rational(&q(ki + 2 * ri + 2, 2))?;
            let weight = ball_q(&q(25 * (2 * ri + ki), 48 * ki), prec);
            Ok(&(&(&(&coef * &shrink) * &growth) * &weight) * &step.powi(ki)?)
        },
        |k| {
            let base = ball_q(&q(i64::from(k) + 1, i64::from(k)), prec).powi(ri + 2)?;
            Ok(&(&base * &w48.sqrt()?) * &decay)
        },
    )?;

    let fact = ball_int(&factorial(r - 1), prec);
    let u1 = (&(&a1 + &a2) + &a3)
        .square()
        .mul_pow2(2)
        .try_div(&fact.square())?;

    // Larger root of (23/48)^r (r-1)! / (2 (x - 1/24)^r) = 5 * 2^(r+1/2) e^(-mu(x)/2).
    let z = -(&(&pi * &c(23, prec).sqrt()?).try_div(&c(48 * ri, prec))?
        * &fact
            .try_div(&(&c(10, prec) * &c(2, prec).sqrt()?))?
            .pow_rational(&q(1, 2 * ri))?);
    check_lambert_argument(&z)?;
    let w = lambert_w(Branch::MinusOne, &z)?.value;
    let u2 =
        &ball_q(&q(1, 24), prec) + &(&c(24 * ri * ri, prec) * &w.square()).try_div(&pi.square())?;
    validate_crossing(&u2, |x| {
        let t = &c(x as i64, prec) - &ball_q(&q(1, 24), prec);
        let lhs =
            (&ball_q(&q(23, 48), prec).powi(ri)? * &fact).try_div(&t.powi(ri)?.mul_pow2(1))?;
        Ok(&lhs - &GBoundBreakdown::g_limit(x, r, prec)?)
    })?;

    let n_of_r = [
        50,
        48 * u64::from(r) - 3,
        ceil_upper(&u1)? + 1,
        ceil_upper(&u2)? + 1,
    ]
    .into_iter()
    .max()
    .expect("nonempty");
    Ok(ThresholdConstants {
        r,
        family: Family::UpperBound,
        c1: a1,
        c2: a2,
        c3: a3,
        u_or_m_1: u1,
        u_or_m_2: u2,
        lambert_argument: z,
        series_terms: k_max,
        n_of_r,
    })
}

fn positivity_constants(r: u32, prec: u32) -> Result<ThresholdConstants> {
    if r == 0 {
        return Err(Error::Precondition("r must be >= 1".into()));
    }
    let ri = i64::from(r);
    let pi = CertifiedReal::pi(prec);
    let half_r1 = ball_q(&rising_factorial(&q(1, 2), r - 1), prec);
    let half_r = ball_q(&rising_factorial(&q(1, 2), r), prec);
    let sqrt6 = c(6, prec).sqrt()?;
    let fact = ball_int(&factorial(r - 1), prec);

    let b1 = &(&sqrt6 * &pi).try_div(&c(6, prec))? * &half_r1;
    let b2 = (&(&pi * &c(48 * ri - 2, prec).sqrt()?) * &half_r)
        .try_div(&c(24, prec).pow_rational(&q(3, 2))?)?;
    let b3 = &fact
        * &(&c(1, prec)
            + &(&ball_q(&q(ri, 24 * (48 * ri - 2)), prec)
                * &ball_q(&q(48, 47), prec).powi(ri + 1)?));
    let m1 = (&b2 + &b3).square().mul_pow2(2).try_div(&b1.square())?;

    // Larger root of (23/24)^(r-1/2) b_1 / (2 (x - 1/24)^(r-1/2)) = 5 * 2^(r+1/2) e^(-mu(x)/2).
    let z = -(&(&c(46, prec).sqrt()? * &pi).try_div(&c(24 * (2 * ri - 1), prec))?
        * &(&pi * &half_r1)
            .try_div(&(&c(20, prec) * &sqrt6))?
            .pow_rational(&q(1, 2 * ri - 1))?);
    check_lambert_argument(&z)?;
    let w = lambert_w(Branch::MinusOne, &z)?.value;
    let m2 = &ball_q(&q(1, 24), prec)
        + &(&c(6 * (2 * ri - 1) * (2 * ri - 1), prec) * &w.square()).try_div(&pi.square())?;
    let expo = q(2 * ri - 1, 2);
    validate_crossing(&m2, |x| {
        let t = &c(x as i64, prec) - &ball_q(&q(1, 24), prec);
        let lhs = (&ball_q(&q(23, 24), prec).pow_rational(&expo)? * &b1)
            .try_div(&t.pow_rational(&expo)?.mul_pow2(1))?;
        Ok(&lhs - &GBoundBreakdown::g_limit(x, r, prec)?)
    })?;

    let n_of_r = [
        50,
        48 * u64::from(r) - 2,
        ceil_upper(&m1)? + 1,
        ceil_upper(&m2)? + 1,
    ]
    .into_iter()
    .max()
    .expect("nonempty");
    Ok(ThresholdConstants {
        r,
        family: Family::Positivity,
        c1: b1,
        c2: b2,
        c3: b3,
        u_or_m_1: m1,
        u_or_m_2: m2,
        lambert_argument: z,
        series_terms: 0,
        n_of_r,
    })
}

/// Certifies H_r(n) > b_1 / (2 n^(r-1/2)).
pub fn verify_h_lower_bound(n: u64, r: u32, ladder: &PrecisionLadder) -> Result<Certificate> {
    check_nr(n, r)?;
    certify_margin(
        |prec| {
            let b1 = positivity_b1(r, prec)?;
            let bound = b1.try_div(
                &c(n as i64, prec)
                    .pow_rational(&q(2 * i64::from(r) - 1, 2))?
                    .mul_pow2(1),
            )?;
            Ok(&h_r(n, r, prec)? - &bound)
        },
        ladder,
    )
}

fn positivity_b1(r: u32, prec: u32) -> Result<CertifiedReal> {
    let pi = CertifiedReal::pi(prec);
    Ok(&(&c(6, prec).sqrt()? * &pi).try_div(&c(6, prec))?
        * &ball_q(&rising_factorial(&q(1, 2), r - 1), prec))
}

/// Certifies m! < sqrt(2 pi) m^(m+1/2) e^(-m + 1/(12m)).
pub fn verify_stirling_bound(m: u32, ladder: &PrecisionLadder) -> Result<Certificate> {
    if m == 0 {
        return Err(Error::Precondition("needs m >= 1".into()));
    }
    let mi = i64::from(m);
    certify_margin(
        |prec| {
            let pi2 = CertifiedReal::pi(prec).mul_pow2(1);
            let power = c(mi, prec).pow_rational(&q(2 * mi + 1, 2))?;
            let expo = (&ball_q(&q(1, 12 * mi), prec) - &c(mi, prec)).exp();
            let rhs = &(&pi2.sqrt()? * &power) * &expo;
            Ok(&rhs - &ball_int(&factorial(m), prec))
        },
        ladder,
    )
}
