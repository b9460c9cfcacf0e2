//! Special functions used by the Rademacher-series estimates: the exponential
//! scale mu(n), the entire series L_nu, its Bessel connection, zeta(7/4),
//! rising factorials and the two real branches of the Lambert W function.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

use rug::float::Round;
use rug::ops::{AddAssignRound, Pow};
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::{certified_strict_less, CertifiedReal, PrecisionLadder, Verdict};

/// Extra bits carried internally by series and root solvers.
const GUARD_BITS: u32 = 32;

/// Number of explicit terms in the default zeta(7/4) partial sum.
pub const ZETA_DEFAULT_TERMS: u64 = 10_000;

const MAX_SERIES_TERMS: u64 = 1_000_000;

/// mu(n) = (pi/6) sqrt(24n - 1).
pub fn mu(n: u64, prec: u32) -> CertifiedReal {
    assert!(n >= 1, "mu(n) needs n >= 1");
    let inner = CertifiedReal::from_integer(&(Integer::from(n) * 24u32 - 1u32), prec);
    let root = inner.sqrt().expect("24n - 1 > 0");
    (&CertifiedReal::pi(prec) * &root)
        .try_div(&CertifiedReal::from_i64(6, prec))
        .expect("6 != 0")
}

/// mu at a real argument; needs 24x > 1 on the whole ball.
pub fn mu_at(x: &CertifiedReal) -> Result<CertifiedReal> {
    let prec = x.precision();
    let inner = &(x * &CertifiedReal::from_i64(24, prec)) - &CertifiedReal::from_i64(1, prec);
    if !inner.is_positive() {
        return Err(Error::Domain(format!("mu needs 24x > 1, got x = {x}")));
    }
    (&CertifiedReal::pi(prec) * &inner.sqrt()?).try_div(&CertifiedReal::from_i64(6, prec))
}

/// mu(n) together with its index.
#[derive(Clone, Debug, Serialize)]
pub struct MuValue {
    pub n: u64,
    pub mu: CertifiedReal,
}

impl MuValue {
    pub fn new(n: u64, prec: u32) -> Self {
        Self { n, mu: mu(n, prec) }
    }
}

/// (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
pub fn rising_factorial(a: &Rational, k: u32) -> Rational {
    let mut acc = Rational::from(1);
    let mut term = a.clone();
    for _ in 0..k {
        acc *= &term;
        term += 1u32;
    }
    acc
}

/// Ball around 1/Gamma(s) for rational s >= 3/2, where Gamma is increasing.
fn recip_gamma(s: &Rational, prec: u32) -> Result<CertifiedReal> {
    let lo = Float::with_val_round(prec, s, Round::Down).0;
    let hi = Float::with_val_round(prec, s, Round::Up).0;
    let g_lo = Float::with_val_round(prec, lo.gamma_ref(), Round::Down).0;
    let g_hi = Float::with_val_round(prec, hi.gamma_ref(), Round::Up).0;
    CertifiedReal::from_bounds(&g_lo, &g_hi, prec)?.recip()
}

/// L_nu(x) = sum_{m >= 0} x^m / (m! Gamma(m + nu + 1)) for rational nu >= 1/2
/// and a positive ball x.
///
/// Terms follow t_{m+1} = t_m x / ((m+1)(m+1+nu)). Once that ratio is at most
/// 1/2 the remainder is below 2 rho t_m, which is added to the radius as soon
/// as it drops under the working precision.
pub fn l_nu(nu: &Rational, x: &CertifiedReal) -> Result<CertifiedReal> {
    if *nu < Rational::from((1, 2)) {
        return Err(Error::Precondition(format!(
            "L_nu needs nu >= 1/2, got {nu}"
        )));
    }
    if !x.is_positive() {
        return Err(Error::Domain(format!("L_nu needs x > 0, got {x}")));
    }
    let prec = x.precision();
    let wp = prec + GUARD_BITS;
    let (p, q) = (nu.numer(), nu.denom());
    let xg = x.with_precision(wp);
    let x_hi_q = Float::with_val_round(64, &xg.upper_short() * q, Round::Up).0;
    let xq = &xg * &CertifiedReal::from_integer(q, wp);

    let mut term = CertifiedReal::from_i64(1, wp);
    let mut sum = term.clone();
    let mut m = 0u64;
    loop {
        let next = Integer::from(m + 1);
        let den = Integer::from(&next * &Integer::from(q * &next + p));
        let den_lo = Float::with_val_round(64, &den, Round::Down).0;
        let rho = Float::with_val_round(64, &x_hi_q / &den_lo, Round::Up).0;
        if rho <= 0.5 {
            let tail = Float::with_val_round(64, &term.upper_short() * &rho, Round::Up).0 * 2u32;
            let negligible = Float::with_val_round(64, sum.lower_short() >> wp, Round::Down).0;
            if tail <= negligible {
                sum = sum.widen(&tail);
                break;
            }
        }
        term = (&term * &xq).try_div(&CertifiedReal::from_integer(&den, wp))?;
        sum = &sum + &term;
        m += 1;
        if m > MAX_SERIES_TERMS {
            return Err(Error::Domain(format!(
                "L_nu series did not settle for x = {x}"
            )));
        }
    }
    let s = Rational::from(nu + 1u32);
    Ok((&sum * &recip_gamma(&s, wp)?).with_precision(prec))
}

/// I_nu(2 sqrt(x)) = x^(nu/2) L_nu(x).
pub fn i_nu_from_l(nu: &Rational, x: &CertifiedReal) -> Result<CertifiedReal> {
    let half_nu = Rational::from(nu / 2u32);
    Ok(&x.pow_rational(&half_nu)? * &l_nu(nu, x)?)
}

/// Modified Bessel function of the first kind, I_nu(z) for z > 0.
pub fn bessel_i(nu: &Rational, z: &CertifiedReal) -> Result<CertifiedReal> {
    if !z.is_positive() {
        return Err(Error::Domain(format!("I_nu needs z > 0, got {z}")));
    }
    let half = z.mul_pow2(-1);
    Ok(&half.pow_rational(nu)? * &l_nu(nu, &half.square())?)
}

static ZETA_CACHE: LazyLock<Mutex<HashMap<(u32, u64), CertifiedReal>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// zeta(7/4) with the default partial-sum length.
pub fn zeta_7_4(prec: u32) -> CertifiedReal {
    zeta_7_4_with_terms(prec, ZETA_DEFAULT_TERMS)
}

/// zeta(7/4) = sum_{k <= K} k^(-7/4) + tail, with the tail enclosed by the
/// integrals over [K+1, inf) and [K, inf): [(4/3)(K+1)^(-3/4), (4/3)K^(-3/4)].
pub fn zeta_7_4_with_terms(prec: u32, terms: u64) -> CertifiedReal {
    assert!(terms >= 1, "at least one explicit term");
    let key = (prec, terms);
    if let Some(hit) = ZETA_CACHE.lock().expect("zeta cache poisoned").get(&key) {
        return hit.clone();
    }
    let wp = prec + GUARD_BITS;
    let s = Float::with_val(wp, -1.75);
    let mut lo = Float::new(wp);
    let mut hi = Float::new(wp);
    for k in 1..=terms {
        let base = Float::with_val(wp, k);
        let (t_lo, _) = Float::with_val_round(wp, (&base).pow(&s), Round::Down);
        let (t_hi, _) = Float::with_val_round(wp, (&base).pow(&s), Round::Up);
        lo.add_assign_round(&t_lo, Round::Down);
        hi.add_assign_round(&t_hi, Round::Up);
    }
    let tail_exp = Float::with_val(wp, -0.75);
    let tail = |k: u64, round: Round| {
        let base = Float::with_val(wp, k);
        let (pw, _) = Float::with_val_round(wp, (&base).pow(&tail_exp), round);
        Float::with_val_round(wp, &pw * 4u32, round).0 / 3u32
    };
    let mut tail_lo = tail(terms + 1, Round::Down);
    // Division by 3 above rounds to nearest; nudge outward by one ulp each way.
    tail_lo.next_down();
    let mut tail_hi = tail(terms, Round::Up);
    tail_hi.next_up();
    lo.add_assign_round(&tail_lo, Round::Down);
    hi.add_assign_round(&tail_hi, Round::Up);
    let z = CertifiedReal::from_bounds(&lo, &hi, prec).expect("ordered bounds");
    ZETA_CACHE
        .lock()
        .expect("zeta cache poisoned")
        .insert(key, z.clone());
    z
}

/// Real branches of the Lambert W function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// W_0, values >= -1.
    Principal,
    /// W_-1, values <= -1, defined on [-1/e, 0).
    MinusOne,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Principal => "W0",
            Branch::MinusOne => "W-1",
        })
    }
}

/// A certified Lambert W value.
#[derive(Clone, Debug, Serialize)]
pub struct LambertWResult {
    pub branch: Branch,
    pub argument: CertifiedReal,
    pub value: CertifiedReal,
}

impl LambertWResult {
    /// w e^w - z over the enclosures; contains zero by construction.
    pub fn residual(&self) -> CertifiedReal {
        &(&self.value * &self.value.exp()) - &self.argument
    }
}

/// Float approximation of W on the given branch. Not rigorous: the result is
/// only a seed for the certified bracket built in [`lambert_w`].
fn lambert_approx(branch: Branch, z: &Float, prec: u32) -> Float {
    let e = Float::with_val(prec, 1).exp();
    let ez1 = Float::with_val(prec, &e * z) + 1u32;
    if ez1 <= 0 {
        return Float::with_val(prec, -1);
    }
    let mut w = if ez1 < 0.3 {
        // Expansion about the branch point in p = +-sqrt(2(ez + 1)).
        let mut p = Float::with_val(prec, &ez1 * 2u32).sqrt();
        if branch == Branch::MinusOne {
            p = -p;
        }
        let p2 = Float::with_val(prec, &p * &p);
        let p3 = Float::with_val(prec, &p2 * &p);
        Float::with_val(prec, &p - 1u32) - p2 / 3u32 + p3 * 11u32 / 72u32
    } else {
        match branch {
            Branch::Principal if *z < 3 => Float::with_val(prec, z + 1u32).ln(),
            Branch::Principal => {
                let l = Float::with_val(prec, z.ln_ref());
                let ll = Float::with_val(prec, l.ln_ref());
                l - ll
            }
            Branch::MinusOne => {
                let l = Float::with_val(prec, -z).ln();
                let ll = Float::with_val(prec, -&l).ln();
                l - ll
            }
        }
    };
    let tol_shift = prec as i32 - 6;
    for _ in 0..200 {
        let ew = Float::with_val(prec, w.exp_ref());
        let f = Float::with_val(prec, &w * &ew) - z;
        let wp1 = Float::with_val(prec, &w + 1u32);
        if f.is_zero() || wp1.is_zero() || !f.is_finite() {
            break;
        }
        // Halley step for w e^w - z.
        let correction =
            Float::with_val(prec, &w + 2u32) * &f / (Float::with_val(prec, &wp1 * 2u32));
        let denom = Float::with_val(prec, &ew * &wp1) - correction;
        let dw = f / denom;
        if !dw.is_finite() {
            break;
        }
        w -= &dw;
        let scale = Float::with_val(prec, w.abs_ref()).max(&Float::with_val(prec, 1));
        if Float::with_val(prec, dw.abs_ref()) <= (scale >> tol_shift) {
            break;
        }
    }
    w
}

/// w e^w as a ball, for an exact point w.
fn w_exp_w(w: &Float, prec: u32) -> CertifiedReal {
    let b = CertifiedReal::new(Float::with_val(prec, w), Float::new(64)).expect("finite seed");
    &b * &b.exp()
}

/// Certified Lambert W on the given branch.
///
/// A Halley iteration supplies approximate values at both ends of the
/// argument ball; the enclosure is then padded until the monotonicity of
/// w e^w on the branch proves it. Points of the argument below -1/e are
/// outside the domain and are ignored when the ball straddles the branch
/// point.
pub fn lambert_w(branch: Branch, z: &CertifiedReal) -> Result<LambertWResult> {
    let prec = z.precision();
    let wp = prec + GUARD_BITS;
    let inv_e = CertifiedReal::from_i64(-1, wp).exp();
    let branch_point = -&inv_e;
    // Certainly below -1/e: no real W at all.
    if z.upper() < branch_point.lower() {
        return Err(Error::Domain(format!(
            "{branch} undefined below -1/e, got {z}"
        )));
    }
    if branch == Branch::MinusOne && !z.is_negative() {
        return Err(Error::Domain(format!("W-1 needs z < 0, got {z}")));
    }
    let z_lo = z.lower();
    let z_hi = z.upper();
    let touches_branch_point = z_lo <= branch_point.upper();
    let minus_one = Float::with_val(wp, -1);

    let seed_at = |at: &Float| {
        if touches_branch_point && *at <= branch_point.upper() {
            minus_one.clone()
        } else {
            lambert_approx(branch, &Float::with_val(wp, at), wp)
        }
    };
    // Ends of the enclosure before padding: W is increasing on the principal
    // branch and decreasing on the other.
    let (raw_lo, raw_hi) = match branch {
        Branch::Principal => (seed_at(&z_lo), seed_at(&z_hi)),
        Branch::MinusOne => (seed_at(&z_hi), seed_at(&z_lo)),
    };

    let magnitude = Float::with_val(64, raw_lo.abs_ref())
        .max(&Float::with_val(64, raw_hi.abs_ref()))
        .max(&Float::with_val(64, 1));
    let mut pad = Float::with_val(64, &magnitude) >> (prec as i32 - 8);
    for _ in 0..40 {
        let mut w_lo = Float::with_val(wp, &raw_lo - &pad);
        let mut w_hi = Float::with_val(wp, &raw_hi + &pad);
        let ok = match branch {
            Branch::Principal => {
                // w e^w increases on [-1, inf): need h(w_lo) <= z_lo and h(w_hi) >= z_hi.
                let lo_ok = if w_lo <= -1 {
                    w_lo = minus_one.clone();
                    true
                } else {
                    w_exp_w(&w_lo, wp).upper() <= z_lo
                };
                lo_ok && w_exp_w(&w_hi, wp).lower() >= z_hi
            }
            Branch::MinusOne => {
                // w e^w decreases on (-inf, -1]: need h(w_lo) >= z_hi and h(w_hi) <= z_lo.
                let hi_ok = if w_hi >= -1 {
                    w_hi = minus_one.clone();
                    true
                } else {
                    w_exp_w(&w_hi, wp).upper() <= z_lo
                };
                hi_ok && w_exp_w(&w_lo, wp).lower() >= z_hi
            }
        };
        if ok {
            let value = CertifiedReal::from_bounds(&w_lo, &w_hi, prec)?;
            return Ok(LambertWResult {
                branch,
                argument: z.clone(),
                value,
            });
        }
        pad <<= 4;
    }
    Err(Error::Validation(format!(
        "could not bracket {branch}({z})"
    )))
}

/// g(x) = -2/(3x^2) + 2 exp(-(pi/10) sqrt(2x/3)), the function whose larger
/// root marks where the second-difference bound takes over.
pub fn g_function(x: &CertifiedReal) -> Result<CertifiedReal> {
    let prec = x.precision();
    let c = |v| CertifiedReal::from_i64(v, prec);
    let rational_part = c(-2).try_div(&(&c(3) * &x.square()))?;
    let root = x.mul_pow2(1).try_div(&c(3))?.sqrt()?;
    let expo = (&CertifiedReal::pi(prec) * &root).try_div(&c(10))?;
    Ok(&rational_part + &(-expo).exp().mul_pow2(1))
}

/// The two positive roots of g, from x = (2400/pi^2) W(-pi sqrt2/(40 3^(3/4)))^2
/// on both branches.
///
/// Each returned ball is a bracket [x - d, x + d] around the Lambert value
/// whose endpoints have been certified to give g opposite signs.
pub fn solve_g_roots(prec: u32) -> Result<(CertifiedReal, CertifiedReal)> {
    let c = |v| CertifiedReal::from_i64(v, prec);
    let pi = CertifiedReal::pi(prec);
    let scale = c(2400).try_div(&pi.square())?;
    let arg =
        -(&pi * &c(2).sqrt()?).try_div(&(&c(40) * &c(3).pow_rational(&Rational::from((3, 4)))?))?;
    let mut roots = Vec::with_capacity(2);
    for branch in [Branch::Principal, Branch::MinusOne] {
        let w = lambert_w(branch, &arg)?;
        let x = &scale * &w.value.square();
        roots.push(validated_bracket(&x)?);
    }
    let x2 = roots.pop().expect("two roots");
    let x1 = roots.pop().expect("two roots");
    Ok((x1, x2))
}

fn validated_bracket(x: &CertifiedReal) -> Result<CertifiedReal> {
    let prec = x.precision();
    let rel = Float::with_val(64, x.midpoint().abs_ref()) >> (prec as i32 / 2);
    let delta = rel.max(&Float::with_val(64, x.radius() * 2u32));
    let a = Float::with_val_round(prec, x.midpoint() - &delta, Round::Down).0;
    let b = Float::with_val_round(prec, x.midpoint() + &delta, Round::Up).0;
    let point = |f: &Float| CertifiedReal::new(f.clone(), Float::new(64)).expect("finite");
    let ga = g_function(&point(&a))?;
    let gb = g_function(&point(&b))?;
    let crosses = (ga.is_negative() && gb.is_positive()) || (ga.is_positive() && gb.is_negative());
    if !crosses {
        return Err(Error::Validation(format!(
            "g has no certified sign change on [{a}, {b}]"
        )));
    }
    CertifiedReal::from_bounds(&a, &b, prec)
}

/// Checks e^(2sqrt x - 2sqrt y) < L_nu(x)/L_nu(y) < e^(2sqrt x - 2sqrt y) (y/x)^nu
/// for 0 < x < y.
pub fn check_l_ratio_bounds(
    nu: &Rational,
    x: &Rational,
    y: &Rational,
    ladder: &PrecisionLadder,
) -> Result<Verdict> {
    if !(*x > 0 && x < y) {
        return Err(Error::Precondition(format!(
            "need 0 < x < y, got x = {x}, y = {y}"
        )));
    }
    let ratio = |prec| {
        let lx = l_nu(nu, &CertifiedReal::from_rational(x, prec))?;
        let ly = l_nu(nu, &CertifiedReal::from_rational(y, prec))?;
        lx.try_div(&ly)
    };
    let envelope = |prec| -> Result<CertifiedReal> {
        let sx = CertifiedReal::from_rational(x, prec).sqrt()?;
        let sy = CertifiedReal::from_rational(y, prec).sqrt()?;
        Ok((&sx - &sy).mul_pow2(1).exp())
    };
    let lower = certified_strict_less(envelope, ratio, ladder)?;
    let upper = certified_strict_less(
        ratio,
        |prec| {
            let yx = CertifiedReal::from_rational(&Rational::from(y / x), prec);
            Ok(&envelope(prec)? * &yx.pow_rational(nu)?)
        },
        ladder,
    )?;
    Ok(lower.verdict.and(upper.verdict))
}

/// Certifies that L_{3/2}(y/16) / L_{3/2}(y/4) strictly decreases along an
/// increasing grid of positive y.
pub fn check_l_ratio_decreasing(grid: &[Rational], ladder: &PrecisionLadder) -> Result<Verdict> {
    let nu = Rational::from((3, 2));
    let ratio = |y: &Rational, prec: u32| {
        let a = l_nu(
            &nu,
            &CertifiedReal::from_rational(&Rational::from(y / 16u32), prec),
        )?;
        let b = l_nu(
            &nu,
            &CertifiedReal::from_rational(&Rational::from(y / 4u32), prec),
        )?;
        a.try_div(&b)
    };
    let mut verdict = Verdict::Holds;
    for pair in grid.windows(2) {
        if pair[0] >= pair[1] || pair[0] <= 0 {
            return Err(Error::Precondition(
                "grid must be positive and increasing".into(),
            ));
        }
        let c = certified_strict_less(|p| ratio(&pair[1], p), |p| ratio(&pair[0], p), ladder)?;
        verdict = verdict.and(c.verdict);
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_halves() -> Rational {
        Rational::from((3, 2))
    }

    #[test]
    fn mu_values() {
        let m1 = mu(1, 128);
        assert!((m1.to_f64() - 2.5110915135822645).abs() < 1e-15);
        let m50 = mu(50, 128);
        let expected = std::f64::consts::PI / 6.0 * 1199f64.sqrt();
        assert!((m50.to_f64() - expected).abs() < 1e-12);
        assert!((&mu(51, 128) - &m50).is_positive());
        assert!(mu_at(&CertifiedReal::from_ratio(1, 48, 64)).is_err());
        assert!(mu_at(&CertifiedReal::from_i64(50, 128))
            .unwrap()
            .overlaps(&m50));
    }

    #[test]
    fn rising_factorial_examples() {
        let half = Rational::from((1, 2));
        assert_eq!(rising_factorial(&half, 0), 1);
        assert_eq!(rising_factorial(&half, 1), half);
        assert_eq!(rising_factorial(&half, 3), Rational::from((15, 8)));
    }

    #[test]
    fn l_nu_leading_term() {
        // L_{3/2}(x) -> 1/Gamma(5/2) = 4/(3 sqrt(pi)) as x -> 0.
        let tiny = CertifiedReal::from_ratio(1, 1 << 40, 128);
        let l = l_nu(&three_halves(), &tiny).unwrap();
        let lead = 4.0 / (3.0 * std::f64::consts::PI.sqrt());
        assert!((l.to_f64() - lead).abs() < 1e-11);
    }

    #[test]
    fn l_nu_rejects_bad_input() {
        assert!(l_nu(&three_halves(), &CertifiedReal::zero(64)).is_err());
        assert!(l_nu(&Rational::from((1, 4)), &CertifiedReal::from_i64(1, 64)).is_err());
    }

    #[test]
    fn l_half_matches_sinh() {
        // L_{1/2}(x) = sinh(2 sqrt x) / (sqrt(pi x)).
        let x = CertifiedReal::from_i64(7, 128);
        let l = l_nu(&Rational::from((1, 2)), &x).unwrap();
        let s = x.sqrt().unwrap();
        let closed = s
            .mul_pow2(1)
            .sinh()
            .try_div(&(&CertifiedReal::pi(128) * &x).sqrt().unwrap())
            .unwrap();
        assert!(l.overlaps(&closed));
        assert!(l.radius_f64() < 1e-30);
    }

    #[test]
    fn bessel_connection() {
        let nu = three_halves();
        let x = CertifiedReal::from_i64(5, 128);
        let i = i_nu_from_l(&nu, &x).unwrap();
        let back = (&i * &x.pow_rational(&Rational::from((-3, 4))).unwrap()).with_precision(128);
        assert!(back.overlaps(&l_nu(&nu, &x).unwrap()));
        let z = x.sqrt().unwrap().mul_pow2(1);
        assert!(bessel_i(&nu, &z).unwrap().overlaps(&i));
    }

    #[test]
    fn zeta_enclosures() {
        let z = zeta_7_4(128);
        let two_terms = 1.0 + 2f64.powf(-1.75);
        assert!(z.lower() > two_terms);
        assert!(z.radius_f64() * 2.0 < 1e-2);
        let coarse = zeta_7_4_with_terms(128, 100);
        assert!(coarse.overlaps(&z));
        assert!(coarse.radius() > z.radius());
        assert!((z.to_f64() - 1.962_320_099_451_342).abs() < 1e-6);
    }

    #[test]
    fn lambert_simple_values() {
        let w = lambert_w(Branch::Principal, &CertifiedReal::zero(128)).unwrap();
        assert!(w.value.contains_rational(&Rational::new()));
        let e = CertifiedReal::from_i64(1, 128).exp();
        let w = lambert_w(Branch::Principal, &e).unwrap();
        assert!(w.value.contains_rational(&Rational::from(1)));
        assert!(w.value.radius_f64() < 1e-30);
        assert!(w.residual().contains_zero());
    }

    #[test]
    fn lambert_branch_point() {
        let z = -CertifiedReal::from_i64(-1, 128).exp();
        for branch in [Branch::Principal, Branch::MinusOne] {
            let w = lambert_w(branch, &z).unwrap();
            assert!(w.value.contains_rational(&Rational::from(-1)), "{branch}");
        }
    }

    #[test]
    fn lambert_domain_errors() {
        let below = CertifiedReal::from_ratio(-1, 2, 64);
        assert!(lambert_w(Branch::Principal, &below).is_err());
        assert!(lambert_w(Branch::MinusOne, &CertifiedReal::from_ratio(1, 10, 64)).is_err());
        assert!(lambert_w(Branch::MinusOne, &CertifiedReal::zero(64)).is_err());
    }

    #[test]
    fn lambert_branches_ordered() {
        let z = CertifiedReal::from_ratio(-1, 5, 128);
        let w0 = lambert_w(Branch::Principal, &z).unwrap();
        let wm = lambert_w(Branch::MinusOne, &z).unwrap();
        assert!(w0.value.lower() >= -1);
        assert!(wm.value.upper() <= -1);
        assert!(w0.residual().contains_zero());
        assert!(wm.residual().contains_zero());
    }

    #[test]
    fn g_roots() {
        let (x1, x2) = solve_g_roots(128).unwrap();
        assert!((x1.to_f64() - 0.64).abs() < 0.01);
        assert!((x2.to_f64() - 4996.47).abs() < 0.5);
        let g5000 = g_function(&CertifiedReal::from_i64(5000, 128)).unwrap();
        assert!(g5000.is_negative());
    }

    #[test]
    fn ratio_bounds_sample() {
        let ladder = PrecisionLadder::starting_at(128);
        let v = check_l_ratio_bounds(
            &three_halves(),
            &Rational::from(3),
            &Rational::from(40),
            &ladder,
        )
        .unwrap();
        assert_eq!(v, Verdict::Holds);
        assert!(check_l_ratio_bounds(
            &three_halves(),
            &Rational::from(4),
            &Rational::from(4),
            &ladder
        )
        .is_err());
    }

    #[test]
    fn ratio_decreases_on_grid() {
        let grid: Vec<Rational> = [1, 5, 20, 100, 1000]
            .iter()
            .map(|&v| Rational::from(v))
            .collect();
        let v = check_l_ratio_decreasing(&grid, &PrecisionLadder::starting_at(128)).unwrap();
        assert_eq!(v, Verdict::Holds);
    }
}
