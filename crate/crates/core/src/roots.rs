//! Root oracle.
//!
//! Real roots are isolated with Sturm sequences and refined in exact
//! rational interval arithmetic (bisection, switching to interval Newton
//! once the derivative enclosure excludes zero), so every real radius is
//! certified by a sign change. All complex roots come from Aberth
//! iteration at MPFR precision with the inclusion radius `m |f(z)| / |f'(z)|`,
//! accepted only when the discs are pairwise disjoint.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::{Float, Rational};

use crate::numeric::{bits_below, dyadic_ceil, dyadic_floor, rational_to_float, Complex};
use crate::polynomial::{sign_variations, Polynomial};
use crate::{Error, Result};

/// Precision ceiling for the all-roots escalation loop.
pub const MAX_PRECISION_BITS: u32 = 1 << 15;

/// Significant bits of reported errors.
pub const ERROR_PRECISION: u32 = 64;

/// Refinement stops with an error below this many bits of radius.
const MAX_REFINE_BITS: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RationalInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn midpoint(&self) -> Rational {
        Rational::from(&self.lo + &self.hi) / 2u32
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Disjoint isolating intervals for the real roots of a squarefree `f`,
/// in increasing order. Exact rational roots hit during bisection come back
/// as point intervals.
pub fn isolate_real_roots(f: &Polynomial) -> Result<Vec<RationalInterval>> {
    f.ensure_squarefree()?;
    let chain = f.sturm_chain();
    let bound = f.root_bound();
    let lo = Rational::from(-&bound);
    let total = sign_variations(&chain, &lo) - sign_variations(&chain, &bound);
    let mut out = Vec::with_capacity(total);
    isolate(f, &chain, lo, bound, total, &mut out);
    Ok(out)
}

// Roots counted in the half-open interval (a, b].
fn isolate(
    f: &Polynomial,
    chain: &[Vec<Rational>],
    a: Rational,
    b: Rational,
    count: usize,
    out: &mut Vec<RationalInterval>,
) {
    if count == 0 {
        return;
    }
    if count == 1 {
        let fb = f.eval(&b).cmp0();
        if fb == Ordering::Equal {
            out.push(RationalInterval::point(b));
            return;
        }
        let fa = f.eval(&a).cmp0();
        if fa != Ordering::Equal && fa != fb {
            out.push(RationalInterval::new(a, b));
            return;
        }
    }
    let mid = Rational::from(&a + &b) / 2u32;
    let left = sign_variations(chain, &a) - sign_variations(chain, &mid);
    isolate(f, chain, a, mid.clone(), left, out);
    isolate(f, chain, mid, b, count - left, out);
}

/// A real root held as a certified rational bracket that can be tightened
/// on demand.
#[derive(Clone, Debug)]
pub struct RealRoot {
    poly: Polynomial,
    deriv: Vec<Rational>,
    bracket: RationalInterval,
    sign_lo: Ordering,
    exact: bool,
}

impl RealRoot {
    /// Requires `f(lo)` and `f(hi)` of opposite sign, or a zero at an
    /// endpoint.
    pub fn new(f: &Polynomial, interval: &RationalInterval) -> Result<Self> {
        let fl = f.eval(&interval.lo).cmp0();
        let fh = f.eval(&interval.hi).cmp0();
        let mut root = RealRoot {
            poly: f.clone(),
            deriv: f.derivative_ascending(),
            bracket: interval.clone(),
            sign_lo: fl,
            exact: false,
        };
        if fl == Ordering::Equal {
            root.collapse(interval.lo.clone());
        } else if fh == Ordering::Equal {
            root.collapse(interval.hi.clone());
        } else if fl == fh {
            return Err(Error::NoSignChange {
                lo: interval.lo.to_string(),
                hi: interval.hi.to_string(),
            });
        }
        Ok(root)
    }

    fn collapse(&mut self, x: Rational) {
        self.bracket = RationalInterval::point(x);
        self.exact = true;
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn bracket(&self) -> &RationalInterval {
        &self.bracket
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn radius(&self) -> Rational {
        self.bracket.width() / 2u32
    }

    pub fn midpoint(&self) -> Rational {
        self.bracket.midpoint()
    }

    /// One refinement step. Returns the new width.
    pub fn step(&mut self) -> Rational {
        if self.exact {
            return Rational::new();
        }
        let RationalInterval { lo, hi } = self.bracket.clone();
        let width = Rational::from(&hi - &lo);
        let mid = self.bracket.midpoint();
        let fm = self.poly.eval(&mid);
        if fm.cmp0() == Ordering::Equal {
            self.collapse(mid);
            return Rational::new();
        }

        if let Some((nlo, nhi)) = self.newton_candidate(&lo, &hi, &mid, &fm) {
            let new_width = Rational::from(&nhi - &nlo);
            if new_width * 2u32 <= width {
                let sl = self.poly.eval(&nlo).cmp0();
                let sh = self.poly.eval(&nhi).cmp0();
                if sl == Ordering::Equal {
                    self.collapse(nlo);
                    return Rational::new();
                }
                if sh == Ordering::Equal {
                    self.collapse(nhi);
                    return Rational::new();
                }
                if sl == self.sign_lo && sh != self.sign_lo {
                    self.bracket = RationalInterval::new(nlo, nhi);
                    return self.bracket.width();
                }
            }
        }

        if fm.cmp0() == self.sign_lo {
            self.bracket.lo = mid;
        } else {
            self.bracket.hi = mid;
        }
        self.bracket.width()
    }

    // Interval Newton: N = mid - f(mid) / f'([lo, hi]) intersected with the
    // bracket and rounded outward to a dyadic grid.
    fn newton_candidate(
        &self,
        lo: &Rational,
        hi: &Rational,
        mid: &Rational,
        fm: &Rational,
    ) -> Option<(Rational, Rational)> {
        let (dlo, dhi) = interval_horner(&self.deriv, lo, hi);
        if dlo.cmp0() != dhi.cmp0() || dlo.cmp0() == Ordering::Equal {
            return None;
        }
        let q1 = Rational::from(fm / &dlo);
        let q2 = Rational::from(fm / &dhi);
        let (qmin, qmax) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
        let mut nlo = Rational::from(mid - &qmax);
        let mut nhi = Rational::from(mid - &qmin);
        if nlo < *lo {
            nlo = lo.clone();
        }
        if nhi > *hi {
            nhi = hi.clone();
        }
        if nlo > nhi {
            return None;
        }
        let w = Rational::from(&nhi - &nlo);
        if w.cmp0() == Ordering::Greater {
            let bits = bits_below(&(w / 8u32));
            nlo = dyadic_floor(&nlo, bits).max(lo.clone());
            nhi = dyadic_ceil(&nhi, bits).min(hi.clone());
        }
        Some((nlo, nhi))
    }

    /// Refines until the radius is at most `eps`; returns the number of
    /// steps taken.
    pub fn refine(&mut self, eps: &Rational) -> Result<usize> {
        let mut steps = 0;
        while !self.exact && self.radius() > *eps {
            self.step();
            steps += 1;
            if steps as u64 > MAX_REFINE_BITS {
                return Err(Error::PrecisionCeiling {
                    bits: MAX_REFINE_BITS,
                });
            }
        }
        Ok(steps)
    }

    /// `|value - α|` correctly rounded to [`ERROR_PRECISION`] bits. The
    /// answer does not depend on how far the bracket was refined before.
    pub fn abs_error(&mut self, value: &Rational) -> Result<Float> {
        loop {
            if self.exact {
                let d = Rational::from(value - &self.bracket.lo).abs();
                return Ok(Float::with_val(ERROR_PRECISION, &d));
            }
            let a = Rational::from(value - &self.bracket.lo).abs();
            let b = Rational::from(value - &self.bracket.hi).abs();
            if !self.bracket.contains(value) {
                let (near, far) = if a <= b { (a, b) } else { (b, a) };
                let lo = Float::with_val(ERROR_PRECISION, &near);
                let hi = Float::with_val(ERROR_PRECISION, &far);
                if lo == hi {
                    return Ok(lo);
                }
                self.refine(&(far >> (ERROR_PRECISION + 16)))?;
            } else {
                let r = self.radius() >> 32u32;
                self.refine(&r)?;
            }
        }
    }

    /// Midpoint as a float after refining to `prec` bits of absolute
    /// accuracy.
    pub fn to_float(&mut self, prec: u32) -> Result<Float> {
        self.refine(&(Rational::from(1) >> (prec + 2)))?;
        Ok(Float::with_val(prec, &self.midpoint()))
    }

    pub fn estimate(&self, index: usize, prec: u32) -> RootEstimate {
        let mid = self.midpoint();
        let center = Float::with_val(prec, &mid);
        let slop = Rational::from(&mid - &center.to_rational().unwrap_or_default()).abs();
        let radius = rational_to_float(&(self.radius() + slop), 64, Round::Up);
        RootEstimate {
            center: Complex::real(center),
            radius,
            is_real: true,
            index,
            enclosure: Some(self.bracket.clone()),
        }
    }
}

/// Interval enclosure of a polynomial (ascending coefficients) over `[lo, hi]`.
fn interval_horner(c: &[Rational], lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut a = Rational::new();
    let mut b = Rational::new();
    for coeff in c.iter().rev() {
        let products = [
            Rational::from(&a * lo),
            Rational::from(&a * hi),
            Rational::from(&b * lo),
            Rational::from(&b * hi),
        ];
        let mn = products.iter().min().unwrap().clone();
        let mx = products.iter().max().unwrap().clone();
        a = mn + coeff;
        b = mx + coeff;
    }
    (a, b)
}

/// Certified refinement of the real root isolated by `interval`.
pub fn refine_real_root(
    f: &Polynomial,
    interval: &RationalInterval,
    eps: &Rational,
) -> Result<RootEstimate> {
    if eps.cmp0() != Ordering::Greater {
        return Err(Error::InvalidArgument {
            name: "eps",
            reason: "must be positive".into(),
        });
    }
    let mut root = RealRoot::new(f, interval)?;
    root.refine(eps)?;
    let prec = bits_below(eps).saturating_add(16).max(64);
    Ok(root.estimate(0, prec))
}

/// One approximated root.
#[derive(Clone, Debug)]
pub struct RootEstimate {
    pub center: Complex,
    /// The true root lies within this distance of `center`.
    pub radius: Float,
    pub is_real: bool,
    /// Position in the canonical ordering of its [`RootSet`].
    pub index: usize,
    /// Exact bracket for real roots.
    pub enclosure: Option<RationalInterval>,
}

/// All roots of a squarefree polynomial in canonical order: descending
/// modulus, ties by descending real part, then descending imaginary part.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<RootEstimate>,
    pub source: Polynomial,
    pub precision_bits: u32,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Refinable handle on a real root of the set.
    pub fn real_root(&self, index: usize) -> Result<RealRoot> {
        let est = self.roots.get(index).ok_or(Error::IndexOutOfRange {
            what: "root",
            index: index + 1,
            bound: self.roots.len(),
        })?;
        match &est.enclosure {
            Some(iv) => RealRoot::new(&self.source, iv),
            None => Err(Error::TargetNotReal { index: index + 1 }),
        }
    }

    /// Index of the real root closest to `x`, if any.
    pub fn nearest_real(&self, x: f64) -> Option<usize> {
        self.roots
            .iter()
            .filter(|r| r.is_real)
            .min_by(|a, b| {
                let da = (a.center.re.to_f64() - x).abs();
                let db = (b.center.re.to_f64() - x).abs();
                da.total_cmp(&db)
            })
            .map(|r| r.index)
    }
}

/// All complex roots of `f`, each with an inclusion radius below
/// `2^(-precision_bits/2)`.
pub fn all_roots(f: &Polynomial, precision_bits: u32) -> Result<RootSet> {
    all_roots_with_ceiling(f, precision_bits, MAX_PRECISION_BITS)
}

pub fn all_roots_with_ceiling(f: &Polynomial, precision_bits: u32, ceiling: u32) -> Result<RootSet> {
    let precision_bits = precision_bits.max(64);
    let m = f.degree();
    let real = isolate_real_roots(f)?;
    let tol_bits = precision_bits / 2;
    let tol = Float::with_val(64, Float::i_exp(1, -(tol_bits as i32)));

    let mut approx = aberth(f, initial_guesses(f, 64), 64, 400);
    let mut prec = 64;
    while prec < precision_bits {
        prec = (prec * 2).min(precision_bits);
        approx = aberth(f, approx, prec, 100);
    }
    let radii = loop {
        let radii: Vec<Float> = approx.iter().map(|z| inclusion_radius(f, z)).collect();
        if radii.iter().all(|r| *r <= tol) && discs_disjoint(&approx, &radii) {
            break radii;
        }
        prec *= 2;
        if prec > ceiling {
            return Err(Error::RootSeparation {
                precision_bits: ceiling,
            });
        }
        approx = aberth(f, approx, prec, 100);
    };

    let center_prec = prec + 32;
    let mut roots: Vec<RootEstimate> = Vec::with_capacity(m);
    let mut used = vec![false; m];
    let eps = Rational::from(1) >> (prec + 4);
    for iv in &real {
        let mut rr = RealRoot::new(f, iv)?;
        rr.refine(&eps)?;
        let est = rr.estimate(0, center_prec);
        // drop the Aberth approximation that this certified root replaces
        let nearest = (0..m)
            .filter(|&i| !used[i])
            .min_by(|&i, &j| {
                let di = (&approx[i] - &est.center).abs();
                let dj = (&approx[j] - &est.center).abs();
                di.partial_cmp(&dj).unwrap_or(Ordering::Equal)
            })
            .expect("more real roots than approximations");
        used[nearest] = true;
        roots.push(est);
    }

    let mut complex: Vec<(Complex, Float)> = (0..m)
        .filter(|&i| !used[i])
        .map(|i| (approx[i].clone(), radii[i].clone()))
        .collect();
    for (z, r) in &complex {
        if Float::with_val(64, z.im.abs_ref()) <= *r {
            // a disc touching the real axis that Sturm says is non-real
            return Err(Error::RootSeparation { precision_bits: prec });
        }
    }
    // conjugate pairs: keep the upper half-plane member, mirror it
    complex.sort_by(|a, b| b.0.im.partial_cmp(&a.0.im).unwrap_or(Ordering::Equal));
    let half = complex.len() / 2;
    let upper: Vec<(Complex, Float)> = complex[..half].to_vec();
    let lower: Vec<(Complex, Float)> = complex[half..].to_vec();
    let mut lower_used = vec![false; lower.len()];
    for (z, r) in upper {
        let partner = (0..lower.len())
            .filter(|&j| !lower_used[j])
            .min_by(|&i, &j| {
                let di = (&lower[i].0 - &z.conj()).abs();
                let dj = (&lower[j].0 - &z.conj()).abs();
                di.partial_cmp(&dj).unwrap_or(Ordering::Equal)
            })
            .expect("conjugate partner");
        lower_used[partner] = true;
        let drift = (&lower[partner].0 - &z.conj()).abs();
        let mut radius = if lower[partner].1 > r {
            lower[partner].1.clone()
        } else {
            r.clone()
        };
        radius += drift;
        for w in [z.clone(), z.conj()] {
            roots.push(RootEstimate {
                center: w.with_prec(center_prec),
                radius: radius.clone(),
                is_real: false,
                index: 0,
                enclosure: None,
            });
        }
    }

    let tie_tol = Float::with_val(64, &tol * 4u32);
    canonical_sort(&mut roots, &tie_tol);
    for (i, r) in roots.iter_mut().enumerate() {
        r.index = i;
    }
    Ok(RootSet {
        roots,
        source: f.clone(),
        precision_bits: prec,
    })
}

// Insertion sort: the tolerant comparator is not a strict weak order, and
// m is small.
fn canonical_sort(roots: &mut [RootEstimate], tol: &Float) {
    for i in 1..roots.len() {
        let mut j = i;
        while j > 0 && roots[j].center.canonical_cmp(&roots[j - 1].center, tol) == Ordering::Less {
            roots.swap(j, j - 1);
            j -= 1;
        }
    }
}

fn initial_guesses(f: &Polynomial, prec: u32) -> Vec<Complex> {
    let m = f.degree();
    let max_u = f
        .u()
        .iter()
        .map(|c| Float::with_val(prec, c).abs())
        .fold(Float::new(prec), |a, b| if b > a { b } else { a });
    let radius = max_u + 1u32;
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    (0..m)
        .map(|k| {
            let theta = Float::with_val(prec, &two_pi * k as u32) / m as u32 + 0.4f64;
            let rk = Float::with_val(prec, &radius * (1.0 - 0.07 * k as f64 / m as f64));
            Complex::new(
                Float::with_val(prec, &rk * theta.clone().cos()),
                Float::with_val(prec, &rk * theta.sin()),
            )
        })
        .collect()
}

fn aberth(f: &Polynomial, seeds: Vec<Complex>, prec: u32, max_iter: usize) -> Vec<Complex> {
    let mut z: Vec<Complex> = seeds.iter().map(|s| s.with_prec(prec)).collect();
    let m = z.len();
    let stop = Float::with_val(prec, Float::i_exp(1, -(prec as i32 - 8)));
    let one = Complex::real(Float::with_val(prec, 1));
    for _ in 0..max_iter {
        let mut worst = Float::new(prec);
        for i in 0..m {
            let (p, dp) = f.eval_complex(&z[i]);
            if p.is_zero() {
                continue;
            }
            if dp.is_zero() {
                // nudge off a critical point
                let bump = Float::with_val(prec, Float::i_exp(1, -(prec as i32 / 4)));
                z[i].re += &bump;
                z[i].im += &bump;
                worst = Float::with_val(prec, 1);
                continue;
            }
            let ratio = p.div(&dp);
            let mut s = Complex::zero(prec);
            for j in 0..m {
                if j != i {
                    s = &s + &(&z[i] - &z[j]).recip();
                }
            }
            let denom = &one - &(&ratio * &s);
            let w = if denom.is_zero() { ratio } else { ratio.div(&denom) };
            let scale = Float::with_val(prec, z[i].abs().max(&Float::with_val(prec, 1)));
            let rel = Float::with_val(prec, w.abs() / &scale);
            if rel > worst {
                worst = rel;
            }
            z[i] = &z[i] - &w;
        }
        if worst < stop {
            break;
        }
    }
    z
}

// m |f(z)| / |f'(z)|, inflated for rounding in the evaluation.
fn inclusion_radius(f: &Polynomial, z: &Complex) -> Float {
    let prec = z.prec();
    let (p, dp) = f.eval_complex(z);
    let dpa = dp.abs();
    if dpa.is_zero() {
        return Float::with_val(64, rug::float::Special::Infinity);
    }
    let scale = Float::with_val(prec, z.abs().max(&Float::with_val(prec, 1)));
    let rounding = Float::with_val(prec, Float::i_exp(1, -(prec as i32 - 16))) * scale;
    let r = Float::with_val(prec, p.abs() / &dpa) * f.degree() as u32;
    let r = r * (1.0 + 1e-6) + rounding;
    Float::with_val_round(64, &r, Round::Up).0
}

fn discs_disjoint(z: &[Complex], r: &[Float]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (&z[i] - &z[j]).abs();
            if d <= Float::with_val(d.prec(), &r[i] + &r[j]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramanujan() -> Polynomial {
        Polynomial::from_monic_i64(&[1, 1, -2, -1]).unwrap()
    }

    #[test]
    fn isolates_ramanujan_roots() {
        let iv = isolate_real_roots(&ramanujan()).unwrap();
        assert_eq!(iv.len(), 3);
        let expect = [-1.8019377358, -0.4450418679, 1.2469796037];
        for (i, e) in iv.iter().zip(expect) {
            assert!(i.lo.to_f64() <= e && e <= i.hi.to_f64(), "{i} vs {e}");
        }
        for w in iv.windows(2) {
            assert!(w[0].hi <= w[1].lo);
        }
    }

    #[test]
    fn no_real_roots_and_linear() {
        let f = Polynomial::from_monic_i64(&[1, 0, 1]).unwrap();
        assert!(isolate_real_roots(&f).unwrap().is_empty());
        let g = Polynomial::from_u(vec![Rational::from((1, 2))]).unwrap();
        let iv = isolate_real_roots(&g).unwrap();
        assert_eq!(iv.len(), 1);
        assert!(iv[0].contains(&Rational::from((1, 2))));
    }

    #[test]
    fn non_squarefree_rejected() {
        let f = Polynomial::from_monic_i64(&[1, -2, 1]).unwrap();
        assert!(matches!(isolate_real_roots(&f), Err(Error::NotSquarefree { .. })));
    }

    #[test]
    fn exact_rational_root_has_zero_radius() {
        let g = Polynomial::from_u(vec![Rational::from((1, 2))]).unwrap();
        let iv = RationalInterval::new(Rational::from(-3), Rational::from(5));
        let est = refine_real_root(&g, &iv, &Rational::from((1, 1000))).unwrap();
        assert!(est.radius.is_zero());
        assert_eq!(est.enclosure.unwrap().lo, Rational::from((1, 2)));
    }

    #[test]
    fn missing_sign_change_is_an_error() {
        let f = Polynomial::from_monic_i64(&[1, 0, -2]).unwrap();
        let iv = RationalInterval::new(Rational::from(2), Rational::from(3));
        assert!(matches!(
            refine_real_root(&f, &iv, &Rational::from((1, 10))),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn radius_shrinks_monotonically() {
        let f = ramanujan();
        let iv = isolate_real_roots(&f).unwrap().remove(0);
        let mut root = RealRoot::new(&f, &iv).unwrap();
        let mut last = root.bracket().width();
        for _ in 0..14 {
            let w = root.step();
            assert!(w * 2u32 <= last);
            last = root.bracket().width();
        }
    }

    #[test]
    fn roots_of_unity_order() {
        let f = Polynomial::from_monic_i64(&[1, 0, 0, -1]).unwrap();
        let set = all_roots(&f, 128).unwrap();
        assert_eq!(set.len(), 3);
        assert!(set.roots[0].is_real);
        assert!((set.roots[0].center.re.to_f64() - 1.0).abs() < 1e-30);
        // equal modulus and real part -1/2: positive imaginary part first
        assert!(set.roots[1].center.im.to_f64() > 0.8);
        assert!(set.roots[2].center.im.to_f64() < -0.8);
        for r in &set.roots {
            assert!((r.center.abs().to_f64() - 1.0).abs() < 1e-30);
        }
    }

    #[test]
    fn complex_and_real_mix() {
        // (t^2 + 1)(t - 3) = t^3 - 3t^2 + t - 3
        let f = Polynomial::from_monic_i64(&[1, -3, 1, -3]).unwrap();
        let set = all_roots(&f, 128).unwrap();
        assert!(set.roots[0].is_real);
        assert_eq!(set.roots[0].enclosure.as_ref().unwrap().lo, 3);
        assert!(!set.roots[1].is_real && !set.roots[2].is_real);
        assert_eq!(set.roots[1].center.re, -set.roots[2].center.re.clone() * -1i32);
    }
}
