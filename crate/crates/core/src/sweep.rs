//! Range sweeps: one statement checked for every n in [from, to], fanned out
//! over the rayon pool with rows kept in ascending n.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::difference as d;
use crate::error::{Error, Result};
use crate::hrr::HrrInterval;
use crate::lemmas::{check_lemma_certificate, Lemma, LemmaParams, Sign};
use crate::partition::{ensure_table, p_exact};
use crate::precision::{certify_margin, Certificate, CertifiedReal, PrecisionLadder};
use crate::report::{ReportRow, VerificationReport};
use crate::special::{g_function, solve_g_roots};

/// A statement that can be checked over a range of n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statement {
    RatioExact,
    RatioCubic,
    RatioConjecture,
    LogConcave,
    Lehmer,
    SecondDifferenceBound,
    SecondDifferenceChain,
    UpperBound,
    GBound,
    Positivity,
    ProductBound,
    Lemma(Lemma),
    GRoots,
}

impl Statement {
    pub fn id(self) -> String {
        match self {
            Statement::RatioExact => "thm1.1".into(),
            Statement::RatioCubic => "thm1.2".into(),
            Statement::RatioConjecture => "conj1.3".into(),
            Statement::LogConcave => "logconcave".into(),
            Statement::Lehmer => "lehmer".into(),
            Statement::SecondDifferenceBound => "dp-bound".into(),
            Statement::SecondDifferenceChain => "dp-chain".into(),
            Statement::UpperBound => "thm3.1".into(),
            Statement::GBound => "thm3.2".into(),
            Statement::Positivity => "thm4.1".into(),
            Statement::ProductBound => "bo".into(),
            Statement::Lemma(l) => format!("lemma:{l}"),
            Statement::GRoots => "roots:g".into(),
        }
    }

    /// Every accepted id, for help text.
    pub fn all_ids() -> Vec<String> {
        let mut ids: Vec<String> = [
            Statement::RatioExact,
            Statement::RatioCubic,
            Statement::RatioConjecture,
            Statement::LogConcave,
            Statement::Lehmer,
            Statement::SecondDifferenceBound,
            Statement::SecondDifferenceChain,
            Statement::UpperBound,
            Statement::GBound,
            Statement::Positivity,
            Statement::ProductBound,
        ]
        .into_iter()
        .map(Statement::id)
        .collect();
        ids.extend(Lemma::ALL.iter().map(|&l| Statement::Lemma(l).id()));
        ids.push(Statement::GRoots.id());
        ids
    }

    /// Whether rows carry an r.
    pub fn uses_r(self) -> bool {
        matches!(
            self,
            Statement::UpperBound | Statement::GBound | Statement::Positivity
        )
    }

    fn min_n(self) -> u64 {
        match self {
            Statement::RatioExact | Statement::RatioCubic | Statement::RatioConjecture => 2,
            Statement::SecondDifferenceBound
            | Statement::SecondDifferenceChain
            | Statement::GBound => 50,
            Statement::ProductBound => 4,
            _ => 1,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(name) = s.strip_prefix("lemma:") {
            return name.parse().map(Statement::Lemma);
        }
        Ok(match s {
            "thm1.1" => Statement::RatioExact,
            "thm1.2" => Statement::RatioCubic,
            "conj1.3" => Statement::RatioConjecture,
            "logconcave" => Statement::LogConcave,
            "lehmer" => Statement::Lehmer,
            "dp-bound" => Statement::SecondDifferenceBound,
            "dp-chain" => Statement::SecondDifferenceChain,
            "thm3.1" => Statement::UpperBound,
            "thm3.2" => Statement::GBound,
            "thm4.1" => Statement::Positivity,
            "bo" => Statement::ProductBound,
            "roots:g" => Statement::GRoots,
            other => {
                return Err(Error::Precondition(format!(
                    "unknown statement id {other:?}"
                )))
            }
        })
    }
}

/// Grid point n of a lemma sweep over [.., to]: x = x_max * n / (to + 1),
/// with the lemma's remaining parameters fixed at representative values.
pub fn lemma_grid_point(lemma: Lemma, n: u64, to: u64) -> LemmaParams {
    let frac = Rational::from((n, to + 1));
    match lemma {
        Lemma::L1 => LemmaParams::x(frac / 48u32),
        Lemma::L2 => LemmaParams::x(frac / 2u32)
            .with_alpha((3, 2))
            .with_c((1, 2)),
        Lemma::L3 => LemmaParams::x(frac).with_alpha((3, 2)),
        Lemma::L6 => LemmaParams::x(frac).with_sign(Sign::Plus),
        _ => LemmaParams::x(frac),
    }
}

fn check_one(
    statement: Statement,
    n: u64,
    r: u32,
    to: u64,
    ladder: &PrecisionLadder,
) -> Result<Certificate> {
    let prec = ladder.first();
    match statement {
        Statement::RatioExact => d::verify_ratio_exact(n, prec),
        Statement::RatioCubic => d::verify_ratio_cubic(n, ladder),
        Statement::RatioConjecture => d::verify_ratio_conjecture(n, ladder),
        Statement::LogConcave => d::verify_log_concavity(n, ladder),
        Statement::Lehmer => {
            let p = p_exact(n);
            certify_margin(
                |prec| {
                    let h = HrrInterval::new(n, prec)?;
                    let miss = (&h.approx - &CertifiedReal::from_integer(&p, prec)).abs();
                    Ok(&h.lehmer_radius - &miss)
                },
                ladder,
            )
        }
        Statement::SecondDifferenceBound => d::verify_desalvo_pak_bound(n, ladder),
        Statement::SecondDifferenceChain => d::verify_desalvo_pak_chain(n, ladder),
        Statement::UpperBound => d::verify_upper_bound(n, r, ladder),
        Statement::GBound => d::verify_g_bound(n, r, ladder),
        Statement::Positivity => d::verify_positivity(n, r, ladder),
        Statement::ProductBound => d::verify_bessenrodt_ono_sum(n, prec),
        Statement::Lemma(l) => check_lemma_certificate(l, &lemma_grid_point(l, n, to), ladder),
        Statement::GRoots => unreachable!("handled by g_root_rows"),
    }
}

/// Rows certifying the two sign changes of g (n = 1, 2: the brackets around
/// x_1 and x_2; margin -g(lo) g(hi)) and g(5000) < 0 (n = 5000; margin -g).
pub fn g_root_rows(ladder: &PrecisionLadder) -> Result<Vec<ReportRow>> {
    let prec = ladder.first().max(128);
    let (x1, x2) = solve_g_roots(prec)?;
    let at =
        |f: Float| -> Result<CertifiedReal> { g_function(&CertifiedReal::new(f, Float::new(64))?) };
    let mut rows = Vec::with_capacity(3);
    for (i, root) in [x1, x2].iter().enumerate() {
        let product = &at(root.lower())? * &at(root.upper())?;
        let margin = -product;
        let cert = Certificate::exact(verdict_of(&margin), margin);
        rows.push(ReportRow::from_certificate(
            "roots:g",
            i as u64 + 1,
            None,
            &cert,
        ));
    }
    let cert = certify_margin(
        |prec| Ok(-g_function(&CertifiedReal::from_i64(5000, prec))?),
        ladder,
    )?;
    rows.push(ReportRow::from_certificate("roots:g", 5000, None, &cert));
    Ok(rows)
}

fn verdict_of(margin: &CertifiedReal) -> crate::precision::Verdict {
    use crate::precision::Verdict;
    if margin.is_positive() {
        Verdict::Holds
    } else if margin.is_negative() {
        Verdict::Fails
    } else {
        Verdict::Undecided
    }
}

/// Checks `statement` for every n in [from, to]. `r` is used only by the
/// Δ^r statements (default 1).
pub fn run(
    statement: Statement,
    from: u64,
    to: u64,
    r: Option<u32>,
    ladder: &PrecisionLadder,
) -> Result<VerificationReport> {
    if from > to {
        return Err(Error::Precondition(format!("empty range [{from}, {to}]")));
    }
    if statement == Statement::GRoots {
        return Ok(VerificationReport::new(
            statement.id(),
            from,
            to,
            g_root_rows(ladder)?,
        ));
    }
    if from < statement.min_n() {
        return Err(Error::Precondition(format!(
            "{statement} needs n >= {}, got {from}",
            statement.min_n()
        )));
    }
    let r_value = r.unwrap_or(1);
    if r_value == 0 {
        return Err(Error::Precondition("r must be >= 1".into()));
    }
    let row_r = statement.uses_r().then_some(r_value);
    ensure_table(to + u64::from(r_value) + 1);
    let id = statement.id();
    let rows = (from..=to)
        .into_par_iter()
        .map(|n| {
            let cert = check_one(statement, n, r_value, to, ladder)?;
            Ok(ReportRow::from_certificate(id.clone(), n, row_r, &cert))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(id, from, to, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Verdict;

    #[test]
    fn ids_round_trip() {
        for id in Statement::all_ids() {
            assert_eq!(id.parse::<Statement>().unwrap().id(), id);
        }
        assert!("thm9.9".parse::<Statement>().is_err());
        assert!("lemma:L8".parse::<Statement>().is_err());
    }

    #[test]
    fn rows_are_ordered() {
        let report = run(
            Statement::RatioExact,
            2,
            300,
            None,
            &PrecisionLadder::default(),
        )
        .unwrap();
        let ns: Vec<u64> = report.rows.iter().map(|r| r.n).collect();
        assert_eq!(ns, (2..=300).collect::<Vec<_>>());
        assert!(report.summary().is_clean());
    }

    #[test]
    fn range_checks() {
        let ladder = PrecisionLadder::default();
        assert!(run(Statement::RatioExact, 5, 4, None, &ladder).is_err());
        assert!(run(Statement::GBound, 10, 60, Some(2), &ladder).is_err());
        assert!(run(Statement::Positivity, 1, 5, Some(0), &ladder).is_err());
    }

    #[test]
    fn product_bound_small_sums_fail() {
        let report = run(
            Statement::ProductBound,
            4,
            12,
            None,
            &PrecisionLadder::default(),
        )
        .unwrap();
        assert_eq!(report.rows[0].verdict, Verdict::Fails);
        assert_eq!(report.rows.last().unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn g_roots_rows_hold() {
        let rows = g_root_rows(&PrecisionLadder::default()).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.verdict == Verdict::Holds));
    }

    #[test]
    fn lemma_sweep_points_are_admissible() {
        for l in Lemma::ALL {
            let report = run(
                Statement::Lemma(l),
                1,
                20,
                None,
                &PrecisionLadder::default(),
            )
            .unwrap();
            assert_eq!(report.summary().holds, 20, "{l}");
        }
    }
}
