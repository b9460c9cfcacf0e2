use proptest::prelude::*;
use rug::float::Round;
use rug::{Float, Integer, Rational};

use logpart::difference::{delta_r_log_p, p2_of_n};
use logpart::report::{read_csv, write_csv, ReportRow};
use logpart::sweep::Statement;
use logpart::{certified_strict_less, delta_r_p, CertifiedReal, PrecisionLadder, Verdict};

const ORACLE_BITS: u32 = 2048;

fn rational() -> impl Strategy<Value = Rational> {
    (-1_000_000_000i64..=1_000_000_000, 1i64..=1_000_000).prop_map(|(n, d)| Rational::from((n, d)))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=1_000_000_000, 1i64..=1_000_000).prop_map(|(n, d)| Rational::from((n, d)))
}

fn ball(q: &Rational, prec: u32) -> CertifiedReal {
    CertifiedReal::from_rational(q, prec)
}

fn oracle(q: &Rational) -> Float {
    Float::with_val(ORACLE_BITS, q)
}

fn encloses(b: &CertifiedReal, x: &Float) -> bool {
    b.lower() <= *x && *x <= b.upper()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn arithmetic_encloses_exact_result(a in rational(), b in rational(), prec in 24u32..300) {
        let (x, y) = (ball(&a, prec), ball(&b, prec));
        prop_assert!((&x + &y).contains_rational(&Rational::from(&a + &b)));
        prop_assert!((&x - &y).contains_rational(&Rational::from(&a - &b)));
        prop_assert!((&x * &y).contains_rational(&Rational::from(&a * &b)));
        if b != 0 {
            prop_assert!(x.try_div(&y).unwrap().contains_rational(&Rational::from(&a / &b)));
        }
        let chained = &(&(&x * &x) - &y) * &(&x + &y);
        let exact = (Rational::from(&a * &a) - &b) * (Rational::from(&a + &b));
        prop_assert!(chained.contains_rational(&exact));
    }

    #[test]
    fn transcendentals_enclose_oracle(a in positive_rational(), prec in 32u32..256) {
        let x = ball(&a, prec);
        let o = oracle(&a);
        prop_assert!(encloses(&x.ln().unwrap(), &Float::with_val(ORACLE_BITS, o.ln_ref())));
        prop_assert!(encloses(&x.sqrt().unwrap(), &Float::with_val(ORACLE_BITS, o.sqrt_ref())));
        let q = Rational::from((3, 7));
        let pow = Float::with_val(ORACLE_BITS, o.clone().ln() * Float::with_val(ORACLE_BITS, &q)).exp();
        prop_assert!(encloses(&x.pow_rational(&q).unwrap(), &pow));
        // Keep exp and sinh arguments moderate.
        let small = Rational::from(&a / 10_000_000);
        let s = ball(&small, prec);
        let os = oracle(&small);
        prop_assert!(encloses(&s.exp(), &Float::with_val(ORACLE_BITS, os.exp_ref())));
        prop_assert!(encloses(&s.sinh(), &Float::with_val(ORACLE_BITS, os.sinh_ref())));
    }

    #[test]
    fn radius_is_sound_for_pi(prec in 16u32..2000) {
        let pi = CertifiedReal::pi(prec);
        prop_assert!(encloses(&pi, &Float::with_val(prec + 64, rug::float::Constant::Pi)));
    }

    #[test]
    fn comparisons_are_antisymmetric(a in rational(), b in rational()) {
        let ladder = PrecisionLadder::default();
        let (qa, qb) = (a.clone(), b.clone());
        let forward = certified_strict_less(
            |p| Ok(ball(&qa, p)), |p| Ok(ball(&qb, p)), &ladder).unwrap().verdict;
        let backward = certified_strict_less(
            |p| Ok(ball(&qb, p)), |p| Ok(ball(&qa, p)), &ladder).unwrap().verdict;
        match a.cmp(&b) {
            std::cmp::Ordering::Less => {
                prop_assert_eq!(forward, Verdict::Holds);
                prop_assert_eq!(backward, Verdict::Fails);
            }
            std::cmp::Ordering::Greater => {
                prop_assert_eq!(forward, Verdict::Fails);
                prop_assert_eq!(backward, Verdict::Holds);
            }
            std::cmp::Ordering::Equal => {
                prop_assert_eq!(forward, Verdict::Undecided);
                prop_assert_eq!(backward, Verdict::Undecided);
            }
        }
    }

    #[test]
    fn ladder_verdicts_are_monotone(k in 1u32..200, start in 2u32..80) {
        // 1 + 2^-k against 1 + 2^-k + 3^-(k/2): decidable once precision exceeds ~k bits.
        let gap = Rational::from((1, 1)) + Rational::from((Integer::from(1), Integer::from(Integer::u_pow_u(2, k))));
        let lhs = |p| ball(&gap, p).sqrt();
        let rhs = |p| Ok(&ball(&gap, p).sqrt()? + &ball(&Rational::from((1, Integer::from(Integer::u_pow_u(3, k / 2)))), p));
        let mut decided = false;
        for bits in [start, start * 2, start * 4, start * 8, start * 16] {
            let v = certified_strict_less(lhs, rhs, &PrecisionLadder::fixed(bits)).unwrap().verdict;
            prop_assert_ne!(v, Verdict::Fails);
            if decided {
                prop_assert_eq!(v, Verdict::Holds);
            }
            decided |= v == Verdict::Holds;
        }
    }

    #[test]
    fn csv_round_trips(rows in prop::collection::vec(row(), 0..40)) {
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn report_rows_agree_with_their_margin(num in -1_000_000i64..=1_000_000, den in 1i64..1000) {
        prop_assume!(num != 0);
        let m = CertifiedReal::from_ratio(num, den, 128);
        let verdict = if m.is_positive() { Verdict::Holds } else { Verdict::Fails };
        let row = ReportRow::from_margin("thm1.1", 2, None, &m, verdict);
        let (margin, radius) = (row.margin_f64().unwrap(), row.radius_f64().unwrap());
        prop_assert_eq!(verdict == Verdict::Holds, margin - radius > 0.0);
    }
}

fn row() -> impl Strategy<Value = ReportRow> {
    let ids = Statement::all_ids();
    (
        prop::sample::select(ids),
        0u64..1_000_000,
        prop::option::of(1u32..10),
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        0f64..1e-10,
        prop::sample::select(vec![
            Verdict::Holds,
            Verdict::Fails,
            Verdict::Undecided,
            Verdict::Boundary,
        ]),
    )
        .prop_map(|(id, n, r, margin, radius, verdict)| ReportRow {
            statement_id: id,
            n,
            r,
            margin: format!("{margin:.16e}"),
            radius: format!("{radius:.16e}"),
            verdict,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_reconstructs_value(n in 50u64..=500, r in 1u32..=6) {
        let d = delta_r_log_p(n, r, 128).unwrap();
        prop_assert!((&d.value - &(&d.h_part + &d.g_part)).contains_zero());
    }

    #[test]
    fn second_difference_matches_p2(n in 2u64..3000) {
        let d = delta_r_log_p(n - 1, 2, 128).unwrap();
        prop_assert!(d.value.overlaps(&p2_of_n(n, 128).unwrap()));
    }

    #[test]
    fn pascal_rule_for_differences(n in 0u64..2000, r in 0u32..8) {
        let lhs = delta_r_p(n, r + 1);
        let rhs = delta_r_p(n + 1, r) - delta_r_p(n, r);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rounding_direction_is_respected(a in positive_rational(), prec in 8u32..64) {
        let b = ball(&a, prec);
        let down = Float::with_val_round(prec, &a, Round::Down).0;
        let up = Float::with_val_round(prec, &a, Round::Up).0;
        prop_assert!(b.lower() <= down && up <= b.upper());
    }
}
