//! Dominance criterion, limits of entry ratios and convergence rates.
//!
//! With `V` the Vandermonde matrix of the roots (`V_{s,j} = α_s^{j-1}`),
//! `V A V^{-1} = diag(α)` and therefore `M^n = V^{-1} diag(γ)^n V` where
//! `γ_s = Σ x_i α_s^i`. If `γ_k` strictly dominates in modulus,
//! `M^n_{i,j} / M^n_{p,q} → V^{-1}_{i,k} V_{k,j} / (V^{-1}_{p,k} V_{k,q})`.

use std::cmp::Ordering;

use rug::{Float, Rational};

use crate::matrix::{ComplexMatrix, RationalMatrix};
use crate::numeric::{log10_abs, Complex};
use crate::polynomial::Polynomial;
use crate::powers::{ApproximationRecord, EntryIndex};
use crate::regrep::Weights;
use crate::roots::{all_roots, RootSet};
use crate::{Error, Result};

/// Precision ceiling for dominance certification.
pub const MAX_CERTIFY_BITS: u32 = 4096;

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub roots: RootSet,
    pub weights: Weights,
    pub gamma: Vec<Complex>,
    /// Certified radius around each `gamma`.
    pub gamma_radius: Vec<Float>,
    /// 0-based canonical root index of the dominant `γ`.
    pub dominant: usize,
    pub runner_up: usize,
    pub c_value: Float,
    pub c_inverse: Float,
    /// Lower bound on `c` from the certified radii.
    pub c_lower: Float,
    pub certified: bool,
    pub precision_bits: u32,
}

impl ConvergenceReport {
    pub fn polynomial(&self) -> &Polynomial {
        &self.roots.source
    }

    pub fn dominant_root(&self) -> &Complex {
        &self.roots.roots[self.dominant].center
    }
}

fn gamma_at(x: &Weights, z: &Complex) -> Complex {
    let prec = z.prec();
    let mut acc = Complex::zero(prec);
    for xi in x.as_slice().iter().rev() {
        acc = &(&acc * z) + &Complex::from_rational(xi, prec);
    }
    acc
}

// |γ(z') - γ(z)| for |z' - z| <= rho, bounded by Σ |x_i| ((|z|+rho)^i - |z|^i),
// plus a rounding allowance.
fn gamma_radius(x: &Weights, z: &Complex, rho: &Float) -> Float {
    let prec = z.prec();
    let a = z.abs();
    let b = Float::with_val(prec, &a + rho);
    let mut pa = Float::with_val(prec, 1);
    let mut pb = Float::with_val(prec, 1);
    let mut sum = Float::new(prec);
    let mut scale = Float::new(prec);
    for xi in x.as_slice() {
        let w = Float::with_val(prec, xi).abs();
        sum += Float::with_val(prec, &pb - &pa) * &w;
        scale += Float::with_val(prec, &pb * &w);
        pa *= &a;
        pb *= &b;
    }
    let rounding = scale * Float::with_val(prec, Float::i_exp(1, -(prec as i32 - 16)));
    Float::with_val(64, sum + rounding) * (1.0 + 1e-9)
}

/// Computes every `γ_j`, picks the dominant one and certifies `c > 1`,
/// doubling precision until the `|γ|` discs separate.
pub fn analyze(f: &Polynomial, x: &Weights, precision_bits: u32) -> Result<ConvergenceReport> {
    let m = f.degree();
    if x.len() != m {
        return Err(Error::Arity {
            what: "weights",
            expected: m,
            found: x.len(),
        });
    }
    if m < 2 {
        return Err(Error::InvalidArgument {
            name: "degree",
            reason: "dominance needs at least two roots".into(),
        });
    }
    // only x_0 nonzero: every γ_j equals x_0
    if x.as_slice()[1..].iter().all(|v| *v.numer() == 0) {
        return Err(Error::DominanceUndecidable {
            precision_bits: precision_bits.max(64),
        });
    }
    let mut prec = precision_bits.max(64);
    loop {
        let roots = all_roots(f, prec)?;
        let work = roots.roots[0].center.prec();
        let gamma: Vec<Complex> = roots.roots.iter().map(|r| gamma_at(x, &r.center)).collect();
        let radius: Vec<Float> = roots
            .roots
            .iter()
            .map(|r| gamma_radius(x, &r.center, &r.radius))
            .collect();
        let moduli: Vec<Float> = gamma.iter().map(Complex::abs).collect();

        let k = (0..m)
            .max_by(|&a, &b| moduli[a].partial_cmp(&moduli[b]).unwrap_or(Ordering::Equal).then(b.cmp(&a)))
            .unwrap();
        if moduli[k].is_zero() {
            return Err(Error::AllGammaZero);
        }
        let l = (0..m)
            .filter(|&j| j != k)
            .max_by(|&a, &b| moduli[a].partial_cmp(&moduli[b]).unwrap_or(Ordering::Equal).then(b.cmp(&a)))
            .unwrap();
        let lower_k = Float::with_val(work, &moduli[k] - &radius[k]);
        let upper_l = (0..m)
            .filter(|&j| j != k)
            .map(|j| Float::with_val(work, &moduli[j] + &radius[j]))
            .fold(Float::new(work), |a, b| if b > a { b } else { a });
        let certified = lower_k > upper_l && lower_k > 0;
        if certified || prec >= MAX_CERTIFY_BITS {
            if !certified {
                return Err(Error::DominanceUndecidable { precision_bits: prec });
            }
            let c_value = Float::with_val(work, &moduli[k] / &moduli[l]);
            let c_inverse = Float::with_val(work, &moduli[l] / &moduli[k]);
            let c_lower = if upper_l.is_zero() {
                Float::with_val(work, rug::float::Special::Infinity)
            } else {
                Float::with_val(work, &lower_k / &upper_l)
            };
            return Ok(ConvergenceReport {
                roots,
                weights: x.clone(),
                gamma,
                gamma_radius: radius,
                dominant: k,
                runner_up: l,
                c_value,
                c_inverse,
                c_lower,
                certified,
                precision_bits: prec,
            });
        }
        prec = (prec * 2).min(MAX_CERTIFY_BITS);
    }
}

/// `V_{s,j} = α_s^{j-1}` at the precision of the root centres.
pub fn vandermonde(roots: &RootSet) -> ComplexMatrix {
    let m = roots.len();
    let prec = roots.roots[0].center.prec();
    let mut v = ComplexMatrix::zeros(m, prec);
    for (s, r) in roots.roots.iter().enumerate() {
        let mut p = Complex::real(Float::with_val(prec, 1));
        for j in 0..m {
            v[(s, j)] = p.clone();
            p = &p * &r.center;
        }
    }
    v
}

/// Residual tolerance `2^(-prec/4)` used for Vandermonde inverses and limit
/// radii at working precision `prec`.
pub fn working_tolerance(prec: u32) -> Float {
    Float::with_val(64, Float::i_exp(1, -(prec as i32 / 4)))
}

/// `max |V A V^{-1} - diag(α)|`.
pub fn diagonalization_residual(roots: &RootSet) -> Result<Float> {
    let v = vandermonde(roots);
    let prec = roots.roots[0].center.prec();
    let vinv = invert_checked(&v)?;
    let a = ComplexMatrix::from_rational(&roots.source.companion().entries, prec);
    let mut d = ComplexMatrix::zeros(roots.len(), prec);
    for (s, r) in roots.roots.iter().enumerate() {
        d[(s, s)] = r.center.clone();
    }
    Ok(v.mul(&a).mul(&vinv).sub(&d).max_abs())
}

fn invert_checked(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let prec = v[(0, 0)].prec();
    let tol = working_tolerance(prec);
    let vinv = v.inverse().ok_or_else(|| Error::VandermondeResidual {
        residual: "inf".into(),
        tolerance: tol.to_string(),
    })?;
    let resid = v.mul(&vinv).sub(&ComplexMatrix::identity(v.dim(), prec)).max_abs();
    if resid > tol {
        return Err(Error::VandermondeResidual {
            residual: format!("{:.3e}", resid.to_f64()),
            tolerance: format!("{:.3e}", tol.to_f64()),
        });
    }
    Ok(vinv)
}

/// `M^n_{i,j}` rebuilt as `Σ_s V^{-1}_{i,s} γ_s^n V_{s,j}`.
pub fn spectral_reconstruction(report: &ConvergenceReport, n: u32) -> Result<Vec<Vec<Complex>>> {
    let v = vandermonde(&report.roots);
    let vinv = invert_checked(&v)?;
    let m = v.dim();
    let powers: Vec<Complex> = report.gamma.iter().map(|g| g.powu(n)).collect();
    let prec = v[(0, 0)].prec();
    let mut out = vec![vec![Complex::zero(prec); m]; m];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = Complex::zero(prec);
            for (s, gn) in powers.iter().enumerate() {
                acc = &acc + &(&(&vinv[(i, s)] * gn) * &v[(s, j)]);
            }
            *cell = acc;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LimitPrediction {
    pub num: EntryIndex,
    pub den: EntryIndex,
    /// Predicted limit `L = A_k / B_k`.
    pub limit: Complex,
    pub limit_radius: Float,
    pub a_k: Complex,
    pub b_k: Complex,
    pub a_l: Complex,
    pub b_l: Complex,
    /// `|A_l B_k - A_k B_l| / |B_k|^2`.
    pub rate_constant: Float,
    pub degenerate: bool,
    /// Exact value for the index patterns whose ratio never moves.
    pub exact_limit: Option<Rational>,
}

/// The two patterns with an n-independent ratio and their common value
/// `1 / u_m`.
pub fn constant_pattern(f: &Polynomial, num: EntryIndex, den: EntryIndex) -> Option<Rational> {
    let m = f.degree();
    if m < 2 {
        return None;
    }
    let first = (EntryIndex::new(m, m - 1), EntryIndex::new(1, m));
    let second = (EntryIndex::new(m, 1), EntryIndex::new(1, 2));
    let um = f.u_at(m);
    if ((num, den) == first || (num, den) == second) && *um.numer() != 0 {
        Some(Rational::from(um.recip_ref()))
    } else {
        None
    }
}

pub fn limit_ratio(report: &ConvergenceReport, num: EntryIndex, den: EntryIndex) -> Result<LimitPrediction> {
    if !report.certified {
        return Err(Error::NotCertified);
    }
    let f = report.polynomial();
    let m = f.degree();
    num.validate(m)?;
    den.validate(m)?;
    let v = vandermonde(&report.roots);
    let vinv = invert_checked(&v)?;
    let prec = v[(0, 0)].prec();
    let (k, l) = (report.dominant, report.runner_up);
    let coef = |idx: EntryIndex, s: usize| &vinv[(idx.row - 1, s)] * &v[(s, idx.col - 1)];
    let a_k = coef(num, k);
    let b_k = coef(den, k);
    let a_l = coef(num, l);
    let b_l = coef(den, l);
    let tol = working_tolerance(prec);
    let scale = [&a_k, &b_k, &a_l, &b_l]
        .iter()
        .map(|c| c.abs())
        .fold(Float::with_val(prec, 1), |a, b| if b > a { b } else { a });
    let bk_abs = b_k.abs();
    if bk_abs <= Float::with_val(prec, &scale * &tol) {
        return Err(Error::LimitDenominatorZero { p: den.row, q: den.col });
    }
    let limit = a_k.div(&b_k);
    let cross = &(&a_l * &b_k) - &(&a_k * &b_l);
    let bk2 = Float::with_val(prec, &bk_abs * &bk_abs);
    let rate_constant = Float::with_val(prec, cross.abs() / &bk2);
    let exact_limit = constant_pattern(f, num, den);
    let numeric_degenerate = cross.abs() <= Float::with_val(prec, &scale * &scale) * &tol;
    let limit_radius = Float::with_val(64, &tol * (Float::with_val(prec, limit.abs() + 1u32)));
    Ok(LimitPrediction {
        num,
        den,
        degenerate: exact_limit.is_some() || numeric_degenerate,
        limit,
        limit_radius,
        a_k,
        b_k,
        a_l,
        b_l,
        rate_constant,
        exact_limit,
    })
}

/// The symbolic limit `α_k + shift` for the index patterns where the shift
/// is rational for every degree.
pub fn symbolic_shift(f: &Polynomial, num: EntryIndex, den: EntryIndex) -> Option<Rational> {
    let m = f.degree();
    if num.row == den.row && num.col == den.col + 1 {
        return Some(Rational::new());
    }
    if m >= 2 && num.col == den.col && den.row == m && num.row == m - 1 {
        return Some(Rational::from(-f.u_at(1)));
    }
    None
}

/// Offset that turns the ratio into an approximation of `α_k`.
pub fn auto_offset(f: &Polynomial, num: EntryIndex, den: EntryIndex) -> Result<Rational> {
    symbolic_shift(f, num, den).map(|s| -s).ok_or(Error::OffsetUnavailable {
        i: num.row,
        j: num.col,
        p: den.row,
        q: den.col,
    })
}

/// Which numerator the closed-form cubic limit matrix is normalised by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicNumerator {
    TwoTwo,
    ThreeThree,
}

/// `M̄_{h,k} = lim M^n_{num} / M^n_{h,k}` from the closed forms in the
/// dominant root and `p`, `r`.
pub fn cubic_limit_matrix(report: &ConvergenceReport, numerator: CubicNumerator) -> Result<Vec<Vec<Float>>> {
    let f = report.polynomial();
    if f.degree() != 3 {
        return Err(Error::NotCubic { degree: f.degree() });
    }
    if !report.certified {
        return Err(Error::NotCertified);
    }
    let r_q = f.u_at(3);
    if *r_q.numer() == 0 {
        return Err(Error::ZeroCubicConstant);
    }
    let a = report.dominant_root().re.clone();
    let prec = a.prec();
    let p = Float::with_val(prec, f.u_at(1));
    let r = Float::with_val(prec, r_q);
    let one = Float::with_val(prec, 1);
    let amp = Float::with_val(prec, &a - &p);
    let f2 = |x: Float| x;
    Ok(match numerator {
        CubicNumerator::TwoTwo => {
            let row3 = vec![
                f2(Float::with_val(prec, &a * &amp)),
                amp.clone(),
                Float::with_val(prec, &amp / &a),
            ];
            let factor = Float::with_val(prec, &a / &r);
            let row1 = row3.iter().map(|v| Float::with_val(prec, v * &factor)).collect();
            let row2 = vec![a.clone(), one.clone(), Float::with_val(prec, &one / &a)];
            vec![row1, row2, row3]
        }
        CubicNumerator::ThreeThree => {
            let a2 = Float::with_val(prec, &a * &a);
            let a3 = Float::with_val(prec, &a2 * &a);
            vec![
                vec![
                    Float::with_val(prec, &a3 / &r),
                    Float::with_val(prec, &a2 / &r),
                    Float::with_val(prec, &a / &r),
                ],
                vec![
                    Float::with_val(prec, &a2 / &amp),
                    Float::with_val(prec, &a / &amp),
                    Float::with_val(prec, &one / &amp),
                ],
                vec![a2, a.clone(), one],
            ]
        }
    })
}

#[derive(Clone, Debug)]
pub struct RateSummary {
    /// Predicted per-step error factor `1/c`.
    pub predicted_factor: Float,
    /// `-log10 c`.
    pub predicted_slope: f64,
    pub rate_constant: Float,
    /// Least-squares slope of `log10 |error|` against n.
    pub measured_slope: f64,
    pub relative_deviation: f64,
    pub records_used: usize,
}

/// Least-squares slope of `log10 abs_error` against `n`.
pub fn log_error_slope(records: &[ApproximationRecord]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| !r.abs_error.is_zero())
        .map(|r| (r.n as f64, log10_abs(&r.abs_error)))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientRecords {
            needed: 2,
            found: pts.len(),
        });
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// Compares the measured decay over the tail half of `measured` with the
/// predicted `1/c` per step.
pub fn rate_report(
    prediction: &LimitPrediction,
    report: &ConvergenceReport,
    measured: &[ApproximationRecord],
) -> Result<RateSummary> {
    if prediction.degenerate {
        return Err(Error::DegenerateRatio {
            i: prediction.num.row,
            j: prediction.num.col,
            p: prediction.den.row,
            q: prediction.den.col,
        });
    }
    let usable: Vec<ApproximationRecord> = measured.iter().filter(|r| !r.abs_error.is_zero()).cloned().collect();
    if usable.len() < 5 {
        return Err(Error::InsufficientRecords {
            needed: 5,
            found: usable.len(),
        });
    }
    let tail = &usable[usable.len() / 2..];
    let measured_slope = log_error_slope(tail)?;
    let predicted_slope = -log10_abs(&report.c_value);
    Ok(RateSummary {
        predicted_factor: report.c_inverse.clone(),
        predicted_slope,
        rate_constant: prediction.rate_constant.clone(),
        measured_slope,
        relative_deviation: ((measured_slope - predicted_slope) / predicted_slope).abs(),
        records_used: tail.len(),
    })
}

/// Best integer weight vector in `[-bound, bound]^m` for making root
/// `target` (0-based canonical) dominant. Returns the certified report.
pub fn search_weights(
    f: &Polynomial,
    target: usize,
    bound: i64,
    precision_bits: u32,
) -> Result<Option<ConvergenceReport>> {
    let m = f.degree();
    let roots = all_roots(f, precision_bits)?;
    if target >= m {
        return Err(Error::IndexOutOfRange {
            what: "root",
            index: target + 1,
            bound: m,
        });
    }
    let width = (2 * bound + 1) as u64;
    let total = width.checked_pow(m as u32).ok_or(Error::InvalidArgument {
        name: "bound",
        reason: "search box too large".into(),
    })?;
    let mut best: Option<(Float, Vec<i64>)> = None;
    for code in 0..total {
        let mut c = code;
        let x: Vec<i64> = (0..m)
            .map(|_| {
                let d = (c % width) as i64 - bound;
                c /= width;
                d
            })
            .collect();
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        let w = Weights::from_i64(&x)?;
        let moduli: Vec<Float> = roots.roots.iter().map(|r| gamma_at(&w, &r.center).abs()).collect();
        let others = (0..m)
            .filter(|&j| j != target)
            .map(|j| moduli[j].clone())
            .fold(Float::new(64), |a, b| if b > a { b } else { a });
        if others.is_zero() || moduli[target] <= others {
            continue;
        }
        let c = Float::with_val(64, &moduli[target] / &others);
        if best.as_ref().is_none_or(|(b, _)| c > *b) {
            best = Some((c, x));
        }
    }
    match best {
        None => Ok(None),
        Some((_, x)) => analyze(f, &Weights::from_i64(&x)?, precision_bits).map(Some),
    }
}

/// Ratio of two entries of an exact matrix, used by tests and the CLI to
/// compare a finite power with a prediction.
pub fn entry_ratio(power: &RationalMatrix, num: EntryIndex, den: EntryIndex) -> Option<Rational> {
    let b = &power[(den.row - 1, den.col - 1)];
    if *b.numer() == 0 {
        return None;
    }
    Some(Rational::from(&power[(num.row - 1, num.col - 1)] / b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powers::pow_matrix;
    use rug::ops::Pow;
    use crate::regrep::build;

    fn ramanujan() -> Polynomial {
        Polynomial::from_u_i64(&[-1, 2, 1]).unwrap()
    }

    fn report(x: &[i64]) -> ConvergenceReport {
        analyze(&ramanujan(), &Weights::from_i64(x).unwrap(), 256).unwrap()
    }

    #[test]
    fn published_c_values() {
        let cases: [(&[i64], f64, f64); 3] = [
            (&[0, 0, 1], 2.08815, 1e-5),
            (&[0, -1, 1], 7.85086, 1e-5),
            (&[69, 99, -124], 1343.4, 0.1),
        ];
        for (x, c, tol) in cases {
            let r = report(x);
            assert!(r.certified);
            assert!((r.c_value.to_f64() - c).abs() < tol, "{x:?}: {}", r.c_value);
            // α3 = 2cos(8π/7) has the largest modulus
            assert_eq!(r.dominant, 0);
        }
        let r = report(&[10, -2, -3]);
        let alpha2 = 2.0 * (4.0 * std::f64::consts::PI / 7.0).cos();
        assert!((r.dominant_root().re.to_f64() - alpha2).abs() < 1e-12);
        assert!((r.c_value.to_f64() - 2.67).abs() < 0.005);
    }

    #[test]
    fn unit_weights_are_undecidable() {
        let err = analyze(&ramanujan(), &Weights::from_i64(&[1, 0, 0]).unwrap(), 128);
        assert!(matches!(err, Err(Error::DominanceUndecidable { .. })));
    }

    #[test]
    fn scaling_weights_keeps_c() {
        let a = report(&[1, -1, 1]);
        let b = report(&[3, -3, 3]);
        assert_eq!(a.dominant, b.dominant);
        let d = Float::with_val(256, &a.c_value - &b.c_value).abs();
        assert!(d < 1e-60);
    }

    #[test]
    fn limits_match_closed_forms() {
        let r = report(&[0, -1, 1]);
        let alpha = r.dominant_root().re.to_f64();
        let p = -1.0;
        let l = limit_ratio(&r, EntryIndex::new(2, 1), EntryIndex::new(3, 1)).unwrap();
        assert!((l.limit.re.to_f64() - (alpha - p)).abs() < 1e-30);
        let l = limit_ratio(&r, EntryIndex::new(2, 2), EntryIndex::new(2, 1)).unwrap();
        assert!((l.limit.re.to_f64() - alpha).abs() < 1e-30);
        let l = limit_ratio(&r, EntryIndex::new(3, 3), EntryIndex::new(3, 2)).unwrap();
        assert!((l.limit.re.to_f64() - alpha).abs() < 1e-30);
        let l = limit_ratio(&r, EntryIndex::new(3, 2), EntryIndex::new(1, 3)).unwrap();
        assert!(l.degenerate);
        assert_eq!(l.exact_limit, Some(Rational::from(1)));
    }

    #[test]
    fn closed_form_matrix_agrees_with_vandermonde() {
        let f = Polynomial::from_u_i64(&[2, 3, -5]).unwrap();
        let x = Weights::from_i64(&[1, 1, 1]).unwrap();
        let r = analyze(&f, &x, 256).unwrap();
        for (choice, num) in [(CubicNumerator::TwoTwo, EntryIndex::new(2, 2)), (CubicNumerator::ThreeThree, EntryIndex::new(3, 3))] {
            let bar = cubic_limit_matrix(&r, choice).unwrap();
            for h in 1..=3 {
                for k in 1..=3 {
                    let l = limit_ratio(&r, num, EntryIndex::new(h, k)).unwrap();
                    let d = (bar[h - 1][k - 1].to_f64() - l.limit.re.to_f64()).abs();
                    assert!(d < 1e-20, "{choice:?} ({h},{k}) {d}");
                }
            }
        }
        let bar = cubic_limit_matrix(&r, CubicNumerator::TwoTwo).unwrap();
        let ratio = Float::with_val(256, &bar[2][0] / &bar[0][1]);
        assert!((ratio.to_f64() + 5.0).abs() < 1e-30);
        assert!((bar[1][1].to_f64() - 1.0).abs() < 1e-60);
    }

    #[test]
    fn measured_ratio_approaches_limit() {
        let r = report(&[1, -1, 1]);
        let m = build(&ramanujan(), &r.weights).unwrap();
        let (num, den) = (EntryIndex::new(1, 2), EntryIndex::new(2, 3));
        let l = limit_ratio(&r, num, den).unwrap();
        assert!(!l.degenerate);
        let n = 40;
        let v = entry_ratio(&pow_matrix(&m.entries, n), num, den).unwrap();
        let err = (Float::with_val(256, &v) - &l.limit.re).abs();
        let bound = Float::with_val(256, r.c_inverse.clone().pow(n as u32)) * &l.rate_constant * 2u32;
        assert!(err <= bound, "{err} > {bound}");
    }

    #[test]
    fn diagonalization_and_spectrum() {
        let r = report(&[0, -1, 1]);
        assert!(diagonalization_residual(&r.roots).unwrap() < 1e-60);
        let m = build(&ramanujan(), &r.weights).unwrap();
        let m7 = pow_matrix(&m.entries, 7);
        let rec = spectral_reconstruction(&r, 7).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((rec[i][j].re.to_f64() - m7[(i, j)].to_f64()).abs() < 1e-40);
            }
        }
    }

    #[test]
    fn auto_offsets() {
        let f = ramanujan();
        assert_eq!(auto_offset(&f, EntryIndex::new(2, 1), EntryIndex::new(3, 1)).unwrap(), -1);
        assert_eq!(auto_offset(&f, EntryIndex::new(2, 2), EntryIndex::new(2, 1)).unwrap(), 0);
        assert!(auto_offset(&f, EntryIndex::new(1, 1), EntryIndex::new(3, 3)).is_err());
    }

    #[test]
    fn weight_search_finds_certified_vector() {
        let f = ramanujan();
        // α1 = 2cos(2π/7) sits at canonical index 1
        let r = search_weights(&f, 1, 2, 128).unwrap().unwrap();
        assert!(r.certified);
        assert_eq!(r.dominant, 1);
    }
}
