//! Reproduction harness for the published tables.
//!
//! Each table run yields CSV rows plus one discrepancy row per printed cell.
//! Printed error magnitudes match when the measured value is within one unit
//! of the last printed digit; digit counts must be equal.

mod tables;

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;

use rug::Float;

use crate::numeric::format_sci;
use crate::powers::ApproximationRecord;
use crate::{Error, Result};

pub use tables::{expected_cells, reproduce_table, TABLE_IDS};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub precision_bits: u32,
    /// Iterative runs stop before exceeding this many denominator digits.
    pub digit_ceiling: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            precision_bits: crate::DEFAULT_PRECISION_BITS,
            digit_ceiling: crate::iterative::DEFAULT_DIGIT_CEILING,
        }
    }
}

/// A value as printed in a table, e.g. `9.8e-7` or `0.002`.
#[derive(Clone, Debug)]
pub struct Printed {
    pub text: String,
    pub value: Float,
    /// One unit in the last printed digit.
    pub ulp: Float,
}

const PRINTED_PREC: u32 = 128;

impl Printed {
    pub fn parse(text: &str) -> Result<Printed> {
        let err = || Error::Parse {
            what: "printed value",
            input: text.to_string(),
            reason: "expected d[.ddd][e±x]".into(),
        };
        let (mant, exp) = match text.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().map_err(|_| err())?),
            None => (text, 0),
        };
        let decimals = mant.split_once('.').map_or(0, |(_, d)| d.len()) as i32;
        let mant = mant.trim_end_matches('.');
        if mant.is_empty() || !mant.bytes().all(|b| b.is_ascii_digit() || b == b'.') {
            return Err(err());
        }
        let value = Float::parse(format!("{mant}e{exp}")).map_err(|_| err())?;
        let ulp = Float::parse(format!("1e{}", exp - decimals)).map_err(|_| err())?;
        Ok(Printed {
            text: text.to_string(),
            value: Float::with_val(PRINTED_PREC, value),
            ulp: Float::with_val(PRINTED_PREC, ulp),
        })
    }

    /// `Exact` when `measured` rounds to the printed value, otherwise
    /// `WithinTolerance` inside one unit of the last digit.
    pub fn classify(&self, measured: &Float) -> MatchStatus {
        let diff = Float::with_val(PRINTED_PREC, measured - &self.value).abs();
        let half = Float::with_val(PRINTED_PREC, &self.ulp / 2u32);
        if diff <= half {
            MatchStatus::Exact
        } else if diff < self.ulp {
            MatchStatus::WithinTolerance
        } else {
            MatchStatus::Mismatch
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatchStatus {
    Exact,
    WithinTolerance,
    Mismatch,
}

impl MatchStatus {
    pub fn is_match(self) -> bool {
        self != MatchStatus::Mismatch
    }
}

impl fmt::Display for MatchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchStatus::Exact => "exact",
            MatchStatus::WithinTolerance => "within-tolerance",
            MatchStatus::Mismatch => "mismatch",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// Printed error magnitude.
    Error,
    /// Printed digit count.
    Digits,
    /// Printed step index chosen by a selection rule.
    Selection,
}

/// One printed cell of a table.
#[derive(Clone, Debug)]
pub struct ExpectedCell {
    pub table: u8,
    /// Row label such as `(0,-1,1)` or `newton`.
    pub params: String,
    pub n: u64,
    pub kind: CellKind,
    pub printed: String,
}

impl ExpectedCell {
    pub fn label(&self) -> String {
        let what = match self.kind {
            CellKind::Error => "abs_error",
            CellKind::Digits => "digits",
            CellKind::Selection => "selected_n",
        };
        format!("{} n={} {}", self.params, self.n, what)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyRow {
    pub table: u8,
    pub cell: String,
    pub expected: String,
    pub measured: String,
    pub status: MatchStatus,
    pub tolerance: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiscrepancyReport {
    pub rows: Vec<DiscrepancyRow>,
}

impl DiscrepancyReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &DiscrepancyRow> {
        self.rows.iter().filter(|r| r.status == MatchStatus::Mismatch)
    }

    pub fn all_match(&self) -> bool {
        self.mismatches().next().is_none()
    }

    pub fn extend(&mut self, other: DiscrepancyReport) {
        self.rows.extend(other.rows);
    }

    pub fn header() -> [&'static str; 5] {
        ["table", "cell", "expected", "measured", "status"]
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.table.to_string(),
                    r.cell.clone(),
                    r.expected.clone(),
                    r.measured.clone(),
                    r.status.to_string(),
                ]
            })
            .collect()
    }

    fn error_cell(&mut self, cell: &ExpectedCell, measured: Option<&Float>) -> Result<()> {
        let printed = Printed::parse(&cell.printed)?;
        let (measured, status) = match measured {
            Some(v) => (format_sci(v, 3), printed.classify(v)),
            None => ("unavailable".to_string(), MatchStatus::Mismatch),
        };
        self.rows.push(DiscrepancyRow {
            table: cell.table,
            cell: cell.label(),
            expected: cell.printed.clone(),
            measured,
            status,
            tolerance: format_sci(&printed.ulp, 1),
        });
        Ok(())
    }

    fn integer_cell(&mut self, cell: &ExpectedCell, measured: Option<u64>) {
        let expected: u64 = cell.printed.parse().expect("integer fixture");
        let status = match measured {
            Some(v) if v == expected => MatchStatus::Exact,
            _ => MatchStatus::Mismatch,
        };
        self.rows.push(DiscrepancyRow {
            table: cell.table,
            cell: cell.label(),
            expected: cell.printed.clone(),
            measured: measured.map_or_else(|| "unavailable".to_string(), |v| v.to_string()),
            status,
            tolerance: "0".into(),
        });
    }
}

/// CSV rows of one table plus the per-cell comparison.
#[derive(Clone, Debug)]
pub struct TableOutput {
    pub id: u8,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub report: DiscrepancyReport,
    /// Additional artifacts: file name, header, rows.
    pub extra: Vec<(String, Vec<&'static str>, Vec<Vec<String>>)>,
    /// Free-form findings, e.g. which starting point matched best.
    pub notes: Vec<String>,
}

impl TableOutput {
    pub fn file_name(&self) -> String {
        format!("table{}.csv", self.id)
    }

    /// Writes `table<id>.csv` and any extra artifacts into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        emit_csv(&dir.join(self.file_name()), &self.header, &self.rows)?;
        for (name, header, rows) in &self.extra {
            emit_csv(&dir.join(name), header, rows)?;
        }
        Ok(())
    }
}

/// Which denominator digit count a selection looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigitMetric {
    Raw,
    Reduced,
}

impl DigitMetric {
    fn of(self, r: &ApproximationRecord) -> u64 {
        match self {
            DigitMetric::Raw => r.den_digits,
            DigitMetric::Reduced => r.reduced_den_digits,
        }
    }
}

/// One approximation sequence taking part in an equal-size comparison.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub label: String,
    /// Records sorted by n.
    pub records: Vec<ApproximationRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub target: u64,
    pub label: String,
    pub record: ApproximationRecord,
}

/// For each digit target and candidate, the record with the largest n whose
/// denominator has at most `target` digits.
pub fn compare_at_equal_digits(
    candidates: &[Candidate],
    targets: &[u64],
    metric: DigitMetric,
) -> Result<Vec<Selection>> {
    let mut out = Vec::with_capacity(candidates.len() * targets.len());
    for &target in targets {
        for c in candidates {
            let ceiling = c.records.last().map_or(0, |r| r.n);
            let unreachable = || Error::UnreachableDigits {
                candidate: c.label.clone(),
                target,
                ceiling,
            };
            // a sequence still under the target at its last n may go further
            if c.records.last().is_none_or(|r| metric.of(r) <= target) {
                return Err(unreachable());
            }
            let pick = c
                .records
                .iter()
                .filter(|r| metric.of(r) <= target)
                .max_by_key(|r| r.n)
                .ok_or_else(unreachable)?;
            out.push(Selection {
                target,
                label: c.label.clone(),
                record: pick.clone(),
            });
        }
    }
    Ok(out)
}

/// Writes a CSV file with a header line; rows are written in the order
/// given (callers sort them).
pub fn emit_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Sort key: first column as text, second as a number when it parses.
pub(crate) fn sort_rows(rows: &mut [Vec<String>]) {
    rows.sort_by(|a, b| {
        let key = |r: &Vec<String>| r.get(1).and_then(|s| s.parse::<u64>().ok());
        a[0].cmp(&b[0])
            .then_with(|| match (key(a), key(b)) {
                (Some(x), Some(y)) => x.cmp(&y),
                _ => a.get(1).cmp(&b.get(1)),
            })
            .then_with(|| a.cmp(b))
    });
}

pub(crate) fn cmp_float(a: &Float, b: &Float) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn rec(n: u64, digits: u64) -> ApproximationRecord {
        ApproximationRecord {
            n,
            exponent: n,
            value: Rational::from(n),
            abs_error: Float::with_val(64, 1.0 / (n as f64 + 1.0)),
            den_digits: digits,
            reduced_den_digits: digits,
        }
    }

    #[test]
    fn printed_tolerance() {
        let p = Printed::parse("9.8e-7").unwrap();
        assert_eq!(p.classify(&Float::with_val(64, 9.84e-7)), MatchStatus::Exact);
        assert_eq!(p.classify(&Float::with_val(64, 9.87e-7)), MatchStatus::WithinTolerance);
        assert_eq!(p.classify(&Float::with_val(64, 9.95e-7)), MatchStatus::Mismatch);
        let p = Printed::parse("0.002").unwrap();
        assert_eq!(p.classify(&Float::with_val(64, 0.00256)), MatchStatus::WithinTolerance);
        let p = Printed::parse("1.e-760").unwrap();
        let v = Float::with_val(64, Float::parse("1.7e-760").unwrap());
        assert_eq!(p.classify(&v), MatchStatus::WithinTolerance);
        assert!(Printed::parse("abc").is_err());
    }

    #[test]
    fn selection_takes_largest_n_under_target() {
        let c = Candidate {
            label: "a".into(),
            records: vec![rec(1, 3), rec(2, 5), rec(3, 5), rec(4, 8)],
        };
        let s = compare_at_equal_digits(std::slice::from_ref(&c), &[5], DigitMetric::Raw).unwrap();
        assert_eq!(s[0].record.n, 3);
        assert!(compare_at_equal_digits(std::slice::from_ref(&c), &[8], DigitMetric::Raw).is_err());
        assert!(compare_at_equal_digits(&[c], &[2], DigitMetric::Raw).is_err());
    }

    #[test]
    fn refining_grid_keeps_selection() {
        let coarse = Candidate {
            label: "a".into(),
            records: vec![rec(2, 4), rec(6, 9), rec(10, 14)],
        };
        let fine = Candidate {
            label: "a".into(),
            records: (2..=10).map(|n| rec(n, 4 + (n - 2) * 10 / 8)).collect(),
        };
        let a = compare_at_equal_digits(&[coarse], &[9], DigitMetric::Raw).unwrap();
        let b = compare_at_equal_digits(&[fine], &[9], DigitMetric::Raw).unwrap();
        assert!(b[0].record.n >= a[0].record.n);
    }

    #[test]
    fn empty_csv_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        emit_csv(&p, &["params", "n", "abs_error"], &[]).unwrap();
        assert_eq!(std::fs::read_to_string(p).unwrap(), "params,n,abs_error\n");
    }
}
