//! Scalar plumbing: rational literals, MPFR helpers and a complex type built
//! from two `rug::Float`s.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::{Assign, Float, Integer, Rational};

use crate::{Error, Result};

/// Parses `[+-]digits[/digits]`. The result is canonical (reduced, positive
/// denominator).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = |reason: &str| Error::Parse {
        what: "rational",
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let digits = |part: &str, signed: bool| -> Result<Integer> {
        let body = if signed {
            part.strip_prefix(['+', '-']).unwrap_or(part)
        } else {
            part
        };
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected decimal digits"));
        }
        let mut v = Integer::from_str_radix(body, 10).map_err(|e| err(&e.to_string()))?;
        if signed && part.starts_with('-') {
            v = -v;
        }
        Ok(v)
    };
    let n = digits(num, true)?;
    let d = match den {
        Some(d) => digits(d, false)?,
        None => Integer::from(1),
    };
    if d == 0 {
        return Err(err("zero denominator"));
    }
    Ok(Rational::from((n, d)))
}

/// Comma-separated list of rational literals.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

/// Rounds `q` to a float of `prec` bits in the requested direction.
pub fn rational_to_float(q: &Rational, prec: u32, round: Round) -> Float {
    Float::with_val_round(prec, q, round).0
}

/// Nearest float.
pub fn to_float(q: &Rational, prec: u32) -> Float {
    Float::with_val(prec, q)
}

/// `log10 |x|` as an `f64`, valid far outside the `f64` exponent range.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mant, exp) = x.to_f64_exp();
    mant.abs().log10() + f64::from(exp) * std::f64::consts::LOG10_2
}

/// Scientific notation with `sig` significant digits, e.g. `3.10e-18`.
pub fn format_sci(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = format!("{:.*e}", sig.saturating_sub(1), x);
    // rug prints the exponent as e-18, keep as is but drop a leading '+'
    s.replace("e+", "e")
}

/// A complex number at MPFR precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Complex::real(to_float(q, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Copy at a different precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Complex::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let prec = self.prec();
        Float::with_val(prec, &self.re * &self.re) + Float::with_val(prec, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, s: &Float) -> Self {
        let prec = self.prec();
        Complex::new(Float::with_val(prec, &self.re * s), Float::with_val(prec, &self.im * s))
    }

    pub fn recip(&self) -> Self {
        let prec = self.prec();
        let d = self.norm_sqr();
        Complex::new(
            Float::with_val(prec, &self.re / &d),
            Float::with_val(prec, -Float::with_val(prec, &self.im / &d)),
        )
    }

    pub fn div(&self, rhs: &Complex) -> Self {
        self * &rhs.recip()
    }

    pub fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Complex::real(Float::with_val(self.prec(), 1));
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Total order used for canonical root ordering: descending modulus,
    /// then descending real part, then descending imaginary part, with
    /// differences below `tol` treated as ties.
    pub fn canonical_cmp(&self, other: &Complex, tol: &Float) -> Ordering {
        let cmp_tol = |a: &Float, b: &Float| {
            let d = Float::with_val(a.prec().max(b.prec()), a - b);
            if d.clone().abs() <= *tol {
                Ordering::Equal
            } else if d > 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        };
        cmp_tol(&self.abs(), &other.abs())
            .then_with(|| cmp_tol(&self.re, &other.re))
            .then_with(|| cmp_tol(&self.im, &other.im))
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", format_sci(&self.re, 20), format_sci(&self.im, 20))
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let prec = self.prec().max(rhs.prec());
        Complex::new(
            Float::with_val(prec, &self.re + &rhs.re),
            Float::with_val(prec, &self.im + &rhs.im),
        )
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let prec = self.prec().max(rhs.prec());
        Complex::new(
            Float::with_val(prec, &self.re - &rhs.re),
            Float::with_val(prec, &self.im - &rhs.im),
        )
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let prec = self.prec().max(rhs.prec());
        let mut re = Float::with_val(prec, &self.re * &rhs.re);
        re -= Float::with_val(prec, &self.im * &rhs.im);
        let mut im = Float::with_val(prec, &self.re * &rhs.im);
        im += Float::with_val(prec, &self.im * &rhs.re);
        Complex::new(re, im)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

/// `x` rounded up to a dyadic rational with denominator `2^bits`.
pub fn dyadic_ceil(x: &Rational, bits: u32) -> Rational {
    let scaled = Rational::from(x << bits);
    let c = scaled.ceil();
    c >> bits
}

/// `x` rounded down to a dyadic rational with denominator `2^bits`.
pub fn dyadic_floor(x: &Rational, bits: u32) -> Rational {
    let scaled = Rational::from(x << bits);
    let f = scaled.floor();
    f >> bits
}

/// A bit count `b` with `2^-b <= x` (at most one more than necessary).
pub fn bits_below(x: &Rational) -> u32 {
    debug_assert!(*x > 0);
    let mut probe = Float::new(64);
    probe.assign(x);
    let e = probe.get_exp().unwrap_or(0);
    (1 - e).max(0) as u32 + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_fractions() {
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::from((-1, 2)));
        assert_eq!(parse_rational("+7").unwrap(), Rational::from(7));
        assert_eq!(parse_rational(" 12/4 ").unwrap(), Rational::from(3));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "1/0", "1.5", "a", "--1", "1/-2", "/3"] {
            assert!(parse_rational(bad).is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn log10_survives_tiny_values() {
        let x = Float::with_val(64, Float::i_exp(1, -20000));
        let got = log10_abs(&x);
        assert!((got + 20000.0 * std::f64::consts::LOG10_2).abs() < 1e-9);
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let third = Rational::from((1, 3));
        let lo = dyadic_floor(&third, 10);
        let hi = dyadic_ceil(&third, 10);
        assert!(lo <= third && third <= hi);
        assert_eq!(Rational::from(&hi - &lo), Rational::from((1, 1024)));
    }

    #[test]
    fn complex_division_inverts_multiplication() {
        let a = Complex::new(Float::with_val(128, 3), Float::with_val(128, -2));
        let b = Complex::new(Float::with_val(128, 0.5), Float::with_val(128, 4));
        let q = (&a * &b).div(&b);
        let d = (&q - &a).abs();
        assert!(d < Float::with_val(128, Float::i_exp(1, -120)));
    }
}
