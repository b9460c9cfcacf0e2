//! Per-n verification records and their CSV / JSON encodings.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::precision::{Certificate, CertifiedReal, Verdict};

/// One checked instance of a statement.
///
/// `margin` is the f64 midpoint of `rhs - lhs` for a strict claim `lhs < rhs`
/// and `radius` an upper bound on its error, both in scientific notation with
/// 17 significant digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub statement_id: String,
    pub n: u64,
    pub r: Option<u32>,
    pub margin: String,
    pub radius: String,
    pub verdict: Verdict,
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

impl ReportRow {
    pub fn from_margin(
        statement_id: impl Into<String>,
        n: u64,
        r: Option<u32>,
        margin: &CertifiedReal,
        verdict: Verdict,
    ) -> Self {
        Self {
            statement_id: statement_id.into(),
            n,
            r,
            margin: sci(margin.to_f64()),
            radius: sci(margin.radius_f64()),
            verdict,
        }
    }

    pub fn from_certificate(
        statement_id: impl Into<String>,
        n: u64,
        r: Option<u32>,
        cert: &Certificate,
    ) -> Self {
        Self::from_margin(statement_id, n, r, &cert.margin, cert.verdict)
    }

    pub fn margin_f64(&self) -> Result<f64> {
        self.margin
            .parse()
            .map_err(|_| Error::Format(format!("bad margin {:?}", self.margin)))
    }

    pub fn radius_f64(&self) -> Result<f64> {
        self.radius
            .parse()
            .map_err(|_| Error::Format(format!("bad radius {:?}", self.radius)))
    }
}

/// Verdict counts over a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub holds: usize,
    pub fails: usize,
    pub undecided: usize,
    pub boundary: usize,
}

impl Summary {
    pub fn of(rows: &[ReportRow]) -> Self {
        let mut s = Summary {
            total: rows.len(),
            ..Summary::default()
        };
        for row in rows {
            match row.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Fails => s.fails += 1,
                Verdict::Undecided => s.undecided += 1,
                Verdict::Boundary => s.boundary += 1,
            }
        }
        s
    }

    /// No failures and nothing left undecided.
    pub fn is_clean(&self) -> bool {
        self.fails == 0 && self.undecided == 0
    }
}

/// All rows produced for one statement over a range of n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub statement: String,
    pub from: u64,
    pub to: u64,
    pub rows: Vec<ReportRow>,
}

impl VerificationReport {
    pub fn new(statement: impl Into<String>, from: u64, to: u64, rows: Vec<ReportRow>) -> Self {
        Self {
            statement: statement.into(),
            from,
            to,
            rows,
        }
    }

    pub fn summary(&self) -> Summary {
        Summary::of(&self.rows)
    }

    /// n values whose verdict is `verdict`.
    pub fn with_verdict(&self, verdict: Verdict) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|row| row.verdict == verdict)
            .map(|row| row.n)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(&self.rows, out)
    }

    pub fn to_json(&self) -> Value {
        let s = self.summary();
        json!({
            "statement": self.statement,
            "range": { "from": self.from.to_string(), "to": self.to.to_string() },
            "rows": self.rows.iter().map(|row| json!({
                "statement_id": row.statement_id,
                "n": row.n.to_string(),
                "r": row.r.map(|r| r.to_string()),
                "margin": row.margin,
                "radius": row.radius,
                "verdict": row.verdict.as_str(),
            })).collect::<Vec<_>>(),
            "summary": {
                "total": s.total.to_string(),
                "holds": s.holds.to_string(),
                "fails": s.fails.to_string(),
                "undecided": s.undecided.to_string(),
                "boundary": s.boundary.to_string(),
            },
        })
    }
}

/// Writes rows as CSV with the header `statement_id,n,r,margin,radius,verdict`.
pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    // The header is written by hand so that an empty report still has one.
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer
        .write_record(["statement_id", "n", "r", "margin", "radius", "verdict"])
        .map_err(|e| Error::Format(e.to_string()))?;
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Format(e.to_string()))?;
    }
    writer.flush().map_err(|e| Error::Format(e.to_string()))
}

/// Parses rows written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<ReportRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::Format(e.to_string()))?
        .clone();
    if headers != vec!["statement_id", "n", "r", "margin", "radius", "verdict"] {
        return Err(Error::Format(format!("unexpected header {headers:?}")));
    }
    reader
        .deserialize()
        .map(|row| row.map_err(|e| Error::Format(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ReportRow> {
        let m = CertifiedReal::from_ratio(1, 3, 128);
        vec![
            ReportRow::from_margin("conj1.3", 45, None, &m, Verdict::Holds),
            ReportRow::from_margin("thm3.1", 147, Some(2), &-&m, Verdict::Fails),
        ]
    }

    #[test]
    fn csv_layout_and_roundtrip() {
        let rows = sample();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("statement_id,n,r,margin,radius,verdict"));
        assert_eq!(
            lines.next(),
            Some("conj1.3,45,,3.3333333333333331e-1,7.3468396926392969e-40,Holds")
        );
        assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn empty_report_keeps_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(buf, b"statement_id,n,r,margin,radius,verdict\n");
        assert!(read_csv(buf.as_slice()).unwrap().is_empty());
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn json_uses_strings() {
        let report = VerificationReport::new("thm3.1", 45, 147, sample());
        let v = report.to_json();
        assert_eq!(v["range"]["from"], "45");
        assert_eq!(v["rows"][1]["r"], "2");
        assert!(v["rows"][0]["r"].is_null());
        assert_eq!(v["summary"]["fails"], "1");
        assert!(!report.summary().is_clean());
        assert_eq!(report.with_verdict(Verdict::Fails), vec![147]);
    }
}
