//! Exact powers of `M` and the approximation sequences read off them.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};

use crate::matrix::RationalMatrix;
use crate::regrep::RegRepMatrix;
use crate::roots::RealRoot;
use crate::{Error, Result};

/// A 1-based matrix position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntryIndex {
    pub row: usize,
    pub col: usize,
}

impl EntryIndex {
    pub fn new(row: usize, col: usize) -> Self {
        EntryIndex { row, col }
    }

    pub fn validate(self, m: usize) -> Result<Self> {
        for (idx, what) in [(self.row, "row"), (self.col, "column")] {
            if idx == 0 || idx > m {
                return Err(Error::IndexOutOfRange {
                    what,
                    index: idx,
                    bound: m,
                });
            }
        }
        Ok(self)
    }

    fn zero_based(self) -> (usize, usize) {
        (self.row - 1, self.col - 1)
    }
}

impl FromStr for EntryIndex {
    type Err = Error;

    /// `"i,j"`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            what: "entry index",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (a, b) = s.split_once(',').ok_or_else(|| err("expected i,j"))?;
        let row = a.trim().parse().map_err(|_| err("row is not a positive integer"))?;
        let col = b.trim().parse().map_err(|_| err("column is not a positive integer"))?;
        if row == 0 || col == 0 {
            return Err(err("indices are 1-based"));
        }
        Ok(EntryIndex { row, col })
    }
}

impl fmt::Display for EntryIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Clone, Debug)]
pub struct MatrixPower {
    pub base: RegRepMatrix,
    pub n: u64,
    pub entries: RationalMatrix,
}

impl MatrixPower {
    pub fn entry(&self, idx: EntryIndex) -> &Rational {
        &self.entries[idx.zero_based()]
    }
}

/// Square-and-multiply exponentiation of an exact matrix.
pub fn pow_matrix(a: &RationalMatrix, mut n: u64) -> RationalMatrix {
    let mut acc: Option<RationalMatrix> = None;
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = Some(match acc {
                Some(x) => x.mul(&base),
                None => base.clone(),
            });
        }
        n >>= 1;
        if n > 0 {
            base = base.mul(&base);
        }
    }
    acc.unwrap_or_else(|| RationalMatrix::identity(a.dim()))
}

pub fn mat_pow(m: &RegRepMatrix, n: u64) -> MatrixPower {
    MatrixPower {
        base: m.clone(),
        n,
        entries: pow_matrix(&m.entries, n),
    }
}

/// Decimal digits of `|v|`.
pub fn digit_count(v: &Integer) -> Result<u64> {
    if *v == 0 {
        return Err(Error::ZeroDigits);
    }
    let approx = f64::from(v.significant_bits() - 1) * std::f64::consts::LOG10_2;
    // exact check around the estimate: 10^(d-1) <= |v| < 10^d
    let mut d = approx.floor().max(1.0) as u32;
    let abs = Integer::from(v.abs_ref());
    while abs >= Integer::from(Integer::u_pow_u(10, d)) {
        d += 1;
    }
    while d > 1 && abs < Integer::from(Integer::u_pow_u(10, d - 1)) {
        d -= 1;
    }
    Ok(u64::from(d))
}

/// Something an approximation can be measured against.
pub trait ErrorOracle {
    fn abs_error(&mut self, value: &Rational) -> Result<Float>;
}

impl ErrorOracle for RealRoot {
    fn abs_error(&mut self, value: &Rational) -> Result<Float> {
        RealRoot::abs_error(self, value)
    }
}

/// A numeric reference value, e.g. a Vandermonde-predicted limit.
#[derive(Clone, Debug)]
pub struct FloatReference(pub Float);

impl ErrorOracle for FloatReference {
    fn abs_error(&mut self, value: &Rational) -> Result<Float> {
        let mut d = Float::with_val(self.0.prec(), value);
        d -= &self.0;
        Ok(d.abs())
    }
}

/// One step of an approximation sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproximationRecord {
    /// Step index as reported (the power for plain sequences).
    pub n: u64,
    /// Power of `M` behind the value.
    pub exponent: u64,
    pub value: Rational,
    pub abs_error: Float,
    /// Digits of the denominator before reduction.
    pub den_digits: u64,
    pub reduced_den_digits: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SequencePoint {
    Record(ApproximationRecord),
    /// Zero denominator entry at this n.
    Unavailable { n: u64 },
}

impl SequencePoint {
    pub fn record(&self) -> Option<&ApproximationRecord> {
        match self {
            SequencePoint::Record(r) => Some(r),
            SequencePoint::Unavailable { .. } => None,
        }
    }
}

/// Records of a sequence, dropping unavailable points.
pub fn records(points: &[SequencePoint]) -> Vec<ApproximationRecord> {
    points.iter().filter_map(|p| p.record().cloned()).collect()
}

/// Ratio `num / den + offset` with both digit counts; `None` on a zero
/// denominator entry.
pub fn ratio_value(
    power: &RationalMatrix,
    num: EntryIndex,
    den: EntryIndex,
    offset: &Rational,
) -> Option<(Rational, u64, u64)> {
    let a = &power[num.zero_based()];
    let b = &power[den.zero_based()];
    if *b.numer() == 0 {
        return None;
    }
    // a = a1/a2, b = b1/b2: a/b + o1/o2 has unreduced denominator a2 b1 o2
    let raw_den = Integer::from(a.denom() * b.numer()) * offset.denom();
    let value = Rational::from(a / b) + offset;
    let raw = digit_count(&raw_den).expect("nonzero");
    let reduced = digit_count(value.denom()).expect("nonzero");
    Some((value, raw, reduced))
}

fn make_record(
    n: u64,
    exponent: u64,
    power: &RationalMatrix,
    num: EntryIndex,
    den: EntryIndex,
    offset: &Rational,
    oracle: &mut dyn ErrorOracle,
) -> Result<SequencePoint> {
    match ratio_value(power, num, den, offset) {
        None => Ok(SequencePoint::Unavailable { n }),
        Some((value, den_digits, reduced_den_digits)) => {
            let abs_error = oracle.abs_error(&value)?;
            Ok(SequencePoint::Record(ApproximationRecord {
                n,
                exponent,
                value,
                abs_error,
                den_digits,
                reduced_den_digits,
            }))
        }
    }
}

fn all_unavailable(points: &[SequencePoint], num_den: EntryIndex) -> Result<()> {
    if !points.is_empty() && points.iter().all(|p| p.record().is_none()) {
        let n = match points[0] {
            SequencePoint::Unavailable { n } => n,
            SequencePoint::Record(_) => unreachable!(),
        };
        return Err(Error::ZeroDenominator {
            n,
            row: num_den.row,
            col: num_den.col,
        });
    }
    Ok(())
}

/// `M^n_{num} / M^n_{den} + offset` for every requested n (sorted,
/// deduplicated), measured against `oracle`.
pub fn ratio_sequence(
    m: &RegRepMatrix,
    num: EntryIndex,
    den: EntryIndex,
    offset: &Rational,
    n_list: &[u64],
    oracle: &mut dyn ErrorOracle,
) -> Result<Vec<SequencePoint>> {
    let dim = m.dim();
    num.validate(dim)?;
    den.validate(dim)?;
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut points = Vec::with_capacity(ns.len());
    let mut current = RationalMatrix::identity(dim);
    let mut at = 0u64;
    for n in ns {
        current = current.mul(&pow_matrix(&m.entries, n - at));
        at = n;
        points.push(make_record(n, n, &current, num, den, offset, oracle)?);
    }
    all_unavailable(&points, den)?;
    Ok(points)
}

/// How the accelerated sequence walks the powers of `N = M^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerSchedule {
    /// Step k uses `N^k = M^(k s)`.
    Linear,
    /// Step k uses `N_k = N_{k-1}^s = M^(s^k)`.
    Geometric,
}

/// Sampled sequence built from `N = M^s`; `steps` are step indices k ≥ 1.
pub fn accelerated_sequence(
    m: &RegRepMatrix,
    stride: u64,
    schedule: PowerSchedule,
    num: EntryIndex,
    den: EntryIndex,
    offset: &Rational,
    steps: &[u64],
    oracle: &mut dyn ErrorOracle,
) -> Result<Vec<SequencePoint>> {
    if stride == 0 {
        return Err(Error::InvalidArgument {
            name: "stride",
            reason: "must be at least 1".into(),
        });
    }
    let dim = m.dim();
    num.validate(dim)?;
    den.validate(dim)?;
    let mut ks = steps.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let n_mat = pow_matrix(&m.entries, stride);
    let mut points = Vec::with_capacity(ks.len());
    match schedule {
        PowerSchedule::Linear => {
            let mut current = RationalMatrix::identity(dim);
            let mut at = 0u64;
            for k in ks {
                current = current.mul(&pow_matrix(&n_mat, k - at));
                at = k;
                let exponent = k.checked_mul(stride).ok_or(overflow())?;
                points.push(make_record(k, exponent, &current, num, den, offset, oracle)?);
            }
        }
        PowerSchedule::Geometric => {
            let mut current = m.entries.clone();
            let mut at = 0u64;
            let mut exponent = 1u64;
            for k in ks {
                if k == 0 {
                    points.push(make_record(0, 1, &current, num, den, offset, oracle)?);
                    continue;
                }
                while at < k {
                    current = pow_matrix(&current, stride);
                    exponent = exponent.checked_mul(stride).ok_or(overflow())?;
                    at += 1;
                }
                points.push(make_record(k, exponent, &current, num, den, offset, oracle)?);
            }
        }
    }
    all_unavailable(&points, den)?;
    Ok(points)
}

fn overflow() -> Error {
    Error::InvalidArgument {
        name: "steps",
        reason: "power exponent overflows u64".into(),
    }
}

/// Result of checking the two ratios that never move with n.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantRatioReport {
    /// True for m = 2, where both patterns name the same ratio.
    pub skipped: bool,
    /// `M^n_{m,m-1} / M^n_{1,m}` and its constancy.
    pub first: Option<Rational>,
    pub first_constant: bool,
    /// `M^n_{m,1} / M^n_{1,2}` and its constancy.
    pub second: Option<Rational>,
    pub second_constant: bool,
    /// n values skipped because of a zero denominator entry.
    pub zero_denominator_n: Vec<u64>,
}

pub fn constant_ratio_check(m: &RegRepMatrix, n_max: u64) -> Result<ConstantRatioReport> {
    let dim = m.dim();
    if dim < 2 {
        return Err(Error::InvalidArgument {
            name: "degree",
            reason: "constant ratios need m >= 2".into(),
        });
    }
    let mut report = ConstantRatioReport {
        skipped: dim == 2,
        first: None,
        first_constant: true,
        second: None,
        second_constant: true,
        zero_denominator_n: Vec::new(),
    };
    if report.skipped {
        return Ok(report);
    }
    let patterns = [
        (EntryIndex::new(dim, dim - 1), EntryIndex::new(1, dim)),
        (EntryIndex::new(dim, 1), EntryIndex::new(1, 2)),
    ];
    let mut current = RationalMatrix::identity(dim);
    for n in 1..=n_max {
        current = current.mul(&m.entries);
        let mut zero = false;
        for (slot, (num, den)) in patterns.iter().enumerate() {
            let b = &current[den.zero_based()];
            if *b.numer() == 0 {
                zero = true;
                continue;
            }
            let v = Rational::from(&current[num.zero_based()] / b);
            let (value, constant) = if slot == 0 {
                (&mut report.first, &mut report.first_constant)
            } else {
                (&mut report.second, &mut report.second_constant)
            };
            match value {
                Some(prev) if *prev != v => *constant = false,
                Some(_) => {}
                None => *value = Some(v),
            }
        }
        if zero {
            report.zero_denominator_n.push(n);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::Polynomial;
    use crate::regrep::{build, Weights};
    use crate::roots::isolate_real_roots;

    fn setup(x: &[i64]) -> (RegRepMatrix, RealRoot) {
        let f = Polynomial::from_u_i64(&[-1, 2, 1]).unwrap();
        let m = build(&f, &Weights::from_i64(x).unwrap()).unwrap();
        let iv = isolate_real_roots(&f).unwrap().remove(0);
        (m, RealRoot::new(&f, &iv).unwrap())
    }

    #[test]
    fn binary_power_matches_naive() {
        let (m, _) = setup(&[0, -1, 1]);
        for n in [0u64, 1, 2, 7, 16, 31] {
            assert_eq!(mat_pow(&m, n).entries, m.entries.pow_naive(n), "n={n}");
        }
        assert_eq!(mat_pow(&m, 0).entries, RationalMatrix::identity(3));
    }

    #[test]
    fn digit_counts() {
        assert_eq!(digit_count(&Integer::from(999)).unwrap(), 3);
        assert_eq!(digit_count(&Integer::from(-1000)).unwrap(), 4);
        assert_eq!(digit_count(&Integer::from(1)).unwrap(), 1);
        assert!(digit_count(&Integer::new()).is_err());
        let big = Integer::from(Integer::u_pow_u(10, 500)) - 1u32;
        assert_eq!(digit_count(&big).unwrap(), 500);
    }

    #[test]
    fn table_one_and_two_cells() {
        let (m, mut root) = setup(&[0, -1, 1]);
        let pts = ratio_sequence(
            &m,
            EntryIndex::new(2, 1),
            EntryIndex::new(3, 1),
            &Rational::from(-1),
            &[20, 5],
            &mut root,
        )
        .unwrap();
        let recs = records(&pts);
        assert_eq!(recs[0].n, 5);
        assert_eq!(recs[0].reduced_den_digits, 3);
        let e5 = recs[0].abs_error.to_f64();
        assert!((7.5e-5..8.5e-5).contains(&e5), "{e5}");
        let e20 = recs[1].abs_error.to_f64();
        assert!((3.05e-18..3.15e-18).contains(&e20), "{e20}");
        assert_eq!(recs[1].reduced_den_digits, 12);
        assert!(recs[1].den_digits >= recs[1].reduced_den_digits);
    }

    #[test]
    fn linear_stride_one_equals_plain() {
        let (m, mut root) = setup(&[1, -1, 1]);
        let (num, den, off) = (EntryIndex::new(2, 1), EntryIndex::new(3, 1), Rational::from(-1));
        let ns = [1, 2, 3, 4, 5, 6];
        let a = ratio_sequence(&m, num, den, &off, &ns, &mut root).unwrap();
        let b = accelerated_sequence(&m, 1, PowerSchedule::Linear, num, den, &off, &ns, &mut root).unwrap();
        assert_eq!(a, b);
        let c = accelerated_sequence(&m, 3, PowerSchedule::Linear, num, den, &off, &[2], &mut root).unwrap();
        assert_eq!(c[0].record().unwrap().exponent, 6);
        let d = ratio_sequence(&m, num, den, &off, &[6], &mut root).unwrap();
        assert_eq!(c[0].record().unwrap().value, d[0].record().unwrap().value);
    }

    #[test]
    fn zero_denominators_are_transient_or_fatal() {
        // B = x I + z A^2 for t^3 - r: early powers have zero entries
        let f = Polynomial::from_u_i64(&[0, 0, 2]).unwrap();
        let m = build(&f, &Weights::from_i64(&[1, 0, 1]).unwrap()).unwrap();
        let iv = isolate_real_roots(&f).unwrap().remove(0);
        let mut root = RealRoot::new(&f, &iv).unwrap();
        let pts = ratio_sequence(
            &m,
            EntryIndex::new(1, 1),
            EntryIndex::new(2, 1),
            &Rational::new(),
            &[0, 1, 2],
            &mut root,
        )
        .unwrap();
        assert_eq!(pts[0], SequencePoint::Unavailable { n: 0 });
        assert!(pts[2].record().is_some());
        let err = ratio_sequence(&m, EntryIndex::new(1, 1), EntryIndex::new(2, 1), &Rational::new(), &[0], &mut root);
        assert!(matches!(err, Err(Error::ZeroDenominator { n: 0, .. })));
    }

    #[test]
    fn remark_ratios_constant() {
        let (m, _) = setup(&[0, -1, 1]);
        let rep = constant_ratio_check(&m, 30).unwrap();
        assert!(!rep.skipped && rep.first_constant && rep.second_constant);
        assert_eq!(rep.first, Some(Rational::from(1)));
        let f2 = Polynomial::from_u_i64(&[1, 1]).unwrap();
        let m2 = build(&f2, &Weights::from_i64(&[1, 1]).unwrap()).unwrap();
        assert!(constant_ratio_check(&m2, 5).unwrap().skipped);
    }

    #[test]
    fn parses_entry_index() {
        assert_eq!("2,1".parse::<EntryIndex>().unwrap(), EntryIndex::new(2, 1));
        assert!("0,1".parse::<EntryIndex>().is_err());
        assert!("2".parse::<EntryIndex>().is_err());
        assert!(EntryIndex::new(4, 1).validate(3).is_err());
    }
}
