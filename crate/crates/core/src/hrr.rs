//! The first two terms of the Hardy-Ramanujan-Rademacher series, the bound on
//! the k >= 3 tail, and Lehmer's remainder bound.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::{certify_margin, CertifiedReal, PrecisionLadder};
use crate::report::ReportRow;
use crate::special::{l_nu, mu, zeta_7_4};

/// Truncation point used throughout: the series is cut after k = 2.
pub const TRUNCATION: u32 = 2;

fn c(v: i64, prec: u32) -> CertifiedReal {
    CertifiedReal::from_i64(v, prec)
}

/// 2 pi (pi/12)^(3/2).
pub fn hrr_prefactor(prec: u32) -> CertifiedReal {
    let pi = CertifiedReal::pi(prec);
    let ratio = pi.try_div(&c(12, prec)).expect("12 != 0");
    let power = ratio
        .pow_rational(&Rational::from((3, 2)))
        .expect("pi/12 > 0");
    (&pi * &power).mul_pow2(1)
}

fn sign_a(n: u64, k: u32) -> i64 {
    if k == 2 && n % 2 == 1 {
        -1
    } else {
        1
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 1 || k == 2 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "only k = 1, 2 have known coefficients A_k(n), got k = {k}"
        )))
    }
}

/// f_k(n) = 2 pi (pi/12)^(3/2) A_k(n) k^(-5/2) L_{3/2}(mu(n)^2 / (4k^2)) for
/// k in {1, 2}, with A_1 = 1 and A_2(n) = (-1)^n.
pub fn f_k(n: u64, k: u32, prec: u32) -> Result<CertifiedReal> {
    check_k(k)?;
    let m = mu(n, prec);
    let arg = m.square().try_div(&c(4 * i64::from(k * k), prec))?;
    let l = l_nu(&Rational::from((3, 2)), &arg)?;
    let scale = c(i64::from(k), prec).pow_rational(&Rational::from((-5, 2)))?;
    let value = &(&hrr_prefactor(prec) * &scale) * &l;
    Ok(if sign_a(n, k) < 0 { -value } else { value })
}

/// The k-th Rademacher term in elementary form,
/// sqrt(12)/(24n - 1) A_k k^(-1/2) [(1 - k/mu) e^(mu/k) + (1 + k/mu) e^(-mu/k)].
pub fn hrr_term_closed(n: u64, k: u32, prec: u32) -> Result<CertifiedReal> {
    check_k(k)?;
    let m = mu(n, prec);
    let kk = c(i64::from(k), prec);
    let k_over_mu = kk.try_div(&m)?;
    let e = m.try_div(&kk)?.exp();
    let e_inv = e.recip()?;
    let one = c(1, prec);
    let bracket = &(&(&one - &k_over_mu) * &e) + &(&(&one + &k_over_mu) * &e_inv);
    let front = c(12, prec).sqrt()?.try_div(&CertifiedReal::from_integer(
        &(Integer::from(n) * 24u32 - 1u32),
        prec,
    ))?;
    let value = (&front * &bracket).try_div(&kk.sqrt()?)?;
    Ok(if sign_a(n, k) < 0 { -value } else { value })
}

/// f_1(n) from its closed form.
pub fn f1_closed(n: u64, prec: u32) -> Result<CertifiedReal> {
    hrr_term_closed(n, 1, prec)
}

/// g(n) = 4 pi (pi/12)^(3/2) zeta(7/4) L_{3/2}(mu(n)^2/36), an upper bound for
/// sum_{k >= 3} |f_k(n)|.
pub fn g_tail(n: u64, prec: u32) -> Result<CertifiedReal> {
    let m = mu(n, prec);
    let l = l_nu(&Rational::from((3, 2)), &m.square().try_div(&c(36, prec))?)?;
    Ok(&(&hrr_prefactor(prec) * &zeta_7_4(prec)) * &l).map(|v| v.mul_pow2(1))
}

/// Lehmer's bound on the remainder after N terms:
/// (pi^2 N^(-2/3) / sqrt 3) [(N/mu)^3 sinh(mu/N) + 1/6 - (N/mu)^2].
pub fn lehmer_bound(n: u64, big_n: u32, prec: u32) -> Result<CertifiedReal> {
    if n == 0 || big_n == 0 {
        return Err(Error::Precondition("Lehmer's bound needs n, N >= 1".into()));
    }
    let m = mu(n, prec);
    let nn = c(i64::from(big_n), prec);
    let ratio = nn.try_div(&m)?;
    let pi = CertifiedReal::pi(prec);
    let front = (&pi.square() * &nn.pow_rational(&Rational::from((-2, 3)))?)
        .try_div(&c(3, prec).sqrt()?)?;
    let bracket = &(&(&ratio.powi(3)? * &m.try_div(&nn)?.sinh())
        + &CertifiedReal::from_ratio(1, 6, prec))
        - &ratio.square();
    Ok(&front * &bracket)
}

/// Enclosure of p(n) from the two-term sum plus Lehmer's remainder bound.
#[derive(Clone, Debug, Serialize)]
pub struct HrrInterval {
    pub n: u64,
    pub truncation: u32,
    pub approx: CertifiedReal,
    pub lehmer_radius: CertifiedReal,
}

impl HrrInterval {
    pub fn new(n: u64, prec: u32) -> Result<Self> {
        let approx = &hrr_term_closed(n, 1, prec)? + &hrr_term_closed(n, 2, prec)?;
        Ok(Self {
            n,
            truncation: TRUNCATION,
            approx,
            lehmer_radius: lehmer_bound(n, TRUNCATION, prec)?,
        })
    }

    /// The ball approx +/- (lehmer bound + approx radius).
    pub fn enclosure(&self) -> CertifiedReal {
        self.approx.clone().widen(&self.lehmer_radius.upper_short())
    }

    pub fn contains(&self, value: &Integer) -> bool {
        self.enclosure().contains_integer(value)
    }

    /// Upper bound on the total width of the enclosure.
    pub fn width(&self) -> f64 {
        2.0 * self.enclosure().radius_f64()
    }
}

/// f_1, f_2 and the tail bound g at one n.
#[derive(Clone, Debug, Serialize)]
pub struct TermBundle {
    pub n: u64,
    pub f1: CertifiedReal,
    pub f2: CertifiedReal,
    pub g_bound: CertifiedReal,
}

impl TermBundle {
    pub fn new(n: u64, prec: u32) -> Result<Self> {
        Ok(Self {
            n,
            f1: f_k(n, 1, prec)?,
            f2: f_k(n, 2, prec)?,
            g_bound: g_tail(n, prec)?,
        })
    }

    /// f1 - |f2|.
    pub fn gap(&self) -> CertifiedReal {
        &self.f1 - &self.f2.abs()
    }

    /// f1 - |f2| - g.
    pub fn gap_minus_tail(&self) -> CertifiedReal {
        &self.gap() - &self.g_bound
    }

    pub fn f2_over_f1(&self) -> Result<CertifiedReal> {
        self.f2.abs().try_div(&self.f1)
    }

    pub fn g_over_f1(&self) -> Result<CertifiedReal> {
        self.g_bound.try_div(&self.f1)
    }

    pub fn g_over_f2(&self) -> Result<CertifiedReal> {
        self.g_bound.try_div(&self.f2.abs())
    }

    pub fn g_over_gap(&self) -> Result<CertifiedReal> {
        self.g_bound.try_div(&self.gap())
    }
}

/// The six one-sided ratio bounds
///   2^(-5/2) e^(-mu/2)   < |f2|/f1 < sqrt2 e^(-mu/2)
///   2 zeta e^(-2mu/3)    < g/f1    < 54 zeta e^(-2mu/3)
///   2^(7/2) zeta e^(-mu/6) < g/|f2| < 27 sqrt2 zeta e^(-mu/6)
/// as certified report rows.
pub fn ratio_bound_checks(n: u64, ladder: &PrecisionLadder) -> Result<Vec<ReportRow>> {
    type Side = fn(&TermBundle, &CertifiedReal, u32) -> Result<(CertifiedReal, CertifiedReal)>;
    let checks: [(&str, Side); 6] = [
        ("ratio:f2/f1:lower", |t, m, p| {
            let bound = &CertifiedReal::from_i64(2, p).pow_rational(&Rational::from((-5, 2)))?
                * &(-&m.mul_pow2(-1)).exp();
            Ok((bound, t.f2_over_f1()?))
        }),
        ("ratio:f2/f1:upper", |t, m, p| {
            let bound = &CertifiedReal::from_i64(2, p).sqrt()? * &(-&m.mul_pow2(-1)).exp();
            Ok((t.f2_over_f1()?, bound))
        }),
        ("ratio:g/f1:lower", |t, m, p| {
            let z = zeta_7_4(p).mul_pow2(1);
            let e = (-&(m * &CertifiedReal::from_ratio(2, 3, p))).exp();
            Ok((&z * &e, t.g_over_f1()?))
        }),
        ("ratio:g/f1:upper", |t, m, p| {
            let z = &zeta_7_4(p) * &CertifiedReal::from_i64(54, p);
            let e = (-&(m * &CertifiedReal::from_ratio(2, 3, p))).exp();
            Ok((t.g_over_f1()?, &z * &e))
        }),
        ("ratio:g/f2:lower", |t, m, p| {
            let k = CertifiedReal::from_i64(2, p).pow_rational(&Rational::from((7, 2)))?;
            let e = (-&(m * &CertifiedReal::from_ratio(1, 6, p))).exp();
            Ok((&(&k * &zeta_7_4(p)) * &e, t.g_over_f2()?))
        }),
        ("ratio:g/f2:upper", |t, m, p| {
            let k = &CertifiedReal::from_i64(27, p) * &CertifiedReal::from_i64(2, p).sqrt()?;
            let e = (-&(m * &CertifiedReal::from_ratio(1, 6, p))).exp();
            Ok((t.g_over_f2()?, &(&k * &zeta_7_4(p)) * &e))
        }),
    ];
    checks
        .iter()
        .map(|(id, side)| {
            let cert = certify_margin(
                |prec| {
                    let t = TermBundle::new(n, prec)?;
                    let (lhs, rhs) = side(&t, &mu(n, prec), prec)?;
                    Ok(&rhs - &lhs)
                },
                ladder,
            )?;
            Ok(ReportRow::from_certificate(*id, n, None, &cert))
        })
        .collect()
}

/// sqrt2 e^(-mu/2) + 54 zeta(7/4) e^(-2mu/3) < 1, the smallness condition
/// behind the F_3 estimate.
pub fn smallness_check(n: u64, ladder: &PrecisionLadder) -> Result<ReportRow> {
    let cert = certify_margin(
        |prec| {
            let m = mu(n, prec);
            let a = &CertifiedReal::from_i64(2, prec).sqrt()? * &(-&m.mul_pow2(-1)).exp();
            let b = &(&zeta_7_4(prec) * &c(54, prec))
                * &(-&(&m * &CertifiedReal::from_ratio(2, 3, prec))).exp();
            Ok(&c(1, prec) - &(&a + &b))
        },
        ladder,
    )?;
    Ok(ReportRow::from_certificate("smallness", n, None, &cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::p_exact;
    use crate::precision::Verdict;

    #[test]
    fn series_and_closed_forms_agree() {
        for n in [1u64, 10, 50, 500] {
            for k in [1u32, 2] {
                let a = f_k(n, k, 128).unwrap();
                let b = hrr_term_closed(n, k, 128).unwrap();
                assert!(a.overlaps(&b), "n={n} k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_unknown_k() {
        assert!(matches!(f_k(5, 3, 64), Err(Error::Precondition(_))));
        assert!(hrr_term_closed(5, 0, 64).is_err());
    }

    #[test]
    fn f2_sign_follows_parity() {
        for n in 1..=20u64 {
            let f2 = f_k(n, 2, 128).unwrap();
            if n % 2 == 0 {
                assert!(f2.is_positive());
            } else {
                assert!(f2.is_negative());
            }
        }
    }

    #[test]
    fn f1_dominates() {
        for n in 1..=100u64 {
            let f1 = f1_closed(n, 128).unwrap();
            let f2 = hrr_term_closed(n, 2, 128).unwrap();
            assert!(f1.is_positive());
            assert!((&f1 + &f2).is_positive());
        }
    }

    #[test]
    fn f1_close_to_p50() {
        let f1 = f1_closed(50, 128).unwrap().to_f64();
        assert!((f1 / 204226.0 - 1.0).abs() < 0.1);
    }

    #[test]
    fn f1_increasing() {
        for n in 10..20u64 {
            let d = &f1_closed(n + 1, 128).unwrap() - &f1_closed(n, 128).unwrap();
            assert!(d.is_positive());
        }
    }

    #[test]
    fn lehmer_positive_and_contains() {
        for n in 1..=100u64 {
            assert!(lehmer_bound(n, 2, 128).unwrap().is_positive());
            assert!(HrrInterval::new(n, 256).unwrap().contains(&p_exact(n)));
        }
        assert!(lehmer_bound(0, 2, 64).is_err());
    }

    #[test]
    fn lehmer_relative_error_decreases() {
        let rel = |n: u64| {
            let b = lehmer_bound(n, 2, 128).unwrap();
            b.try_div(&CertifiedReal::from_integer(&p_exact(n), 128))
                .unwrap()
        };
        assert!((&rel(10) - &rel(100)).is_positive());
        assert!((&rel(100) - &rel(1000)).is_positive());
    }

    #[test]
    fn tail_bounds() {
        for n in [1u64, 10, 50] {
            assert!(g_tail(n, 128).unwrap().is_positive());
        }
        let t = TermBundle::new(50, 128).unwrap();
        assert!(t.gap_minus_tail().is_positive());
    }

    #[test]
    fn ratio_checks_hold() {
        let ladder = PrecisionLadder::starting_at(128);
        for n in [1u64, 50] {
            let rows = ratio_bound_checks(n, &ladder).unwrap();
            assert_eq!(rows.len(), 6);
            assert!(rows.iter().all(|r| r.verdict == Verdict::Holds), "{rows:?}");
        }
        assert_eq!(
            smallness_check(50, &ladder).unwrap().verdict,
            Verdict::Holds
        );
    }
}
