//! Newton, Halley and Noor iterations in exact rational arithmetic.
//!
//! Denominators are never truncated between steps, so their growth is the
//! growth the formulas dictate.

use std::fmt;
use std::str::FromStr;

use rug::Rational;

use crate::polynomial::Polynomial;
use crate::powers::{digit_count, ApproximationRecord, ErrorOracle};
use crate::{Error, Result};

/// Default limit on denominator digits before a run stops early.
pub const DEFAULT_DIGIT_CEILING: u64 = 100_000;

/// Starting points tried when the initial condition is unknown.
pub const X0_CANDIDATES: [(i64, i64); 4] = [(-2, 1), (-3, 2), (-7, 4), (-9, 5)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Newton,
    Halley,
    Noor,
    /// Third-order `x - f/f' - f^2 f'' / (2 f'^3)`, i.e. the Noor corrector
    /// applied at `x` without the Newton predictor.
    Chebyshev,
}

impl Method {
    /// The methods compared by default.
    pub const ALL: [Method; 3] = [Method::Newton, Method::Halley, Method::Noor];

    pub fn name(self) -> &'static str {
        match self {
            Method::Newton => "newton",
            Method::Halley => "halley",
            Method::Noor => "noor",
            Method::Chebyshev => "chebyshev",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "newton" => Ok(Method::Newton),
            "halley" => Ok(Method::Halley),
            "noor" => Ok(Method::Noor),
            "chebyshev" => Ok(Method::Chebyshev),
            _ => Err(Error::Parse {
                what: "method",
                input: s.to_string(),
                reason: "expected newton, halley, noor or chebyshev".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterativeState {
    pub method: Method,
    pub x: Rational,
    pub step: u64,
    /// Newton predictor of the last Noor step.
    pub y: Option<Rational>,
}

impl IterativeState {
    pub fn new(method: Method, x0: Rational) -> Self {
        IterativeState {
            method,
            x: x0,
            step: 0,
            y: None,
        }
    }

    pub fn advance(&mut self, f: &Polynomial) -> Result<()> {
        let step = self.step + 1;
        let next = match self.method {
            Method::Newton => newton_step(f, &self.x).map_err(|e| at_step(e, step))?,
            Method::Halley => halley_step(f, &self.x).map_err(|e| at_step(e, step))?,
            Method::Noor => {
                let (y, x) = noor_step(f, &self.x).map_err(|e| at_step(e, step))?;
                self.y = Some(y);
                x
            }
            Method::Chebyshev => chebyshev_step(f, &self.x).map_err(|e| at_step(e, step))?,
        };
        self.x = next;
        self.step = step;
        Ok(())
    }
}

fn at_step(e: Error, step: u64) -> Error {
    match e {
        Error::ZeroDerivative { method, .. } => Error::ZeroDerivative { method, step },
        other => other,
    }
}

fn zero_derivative(method: &'static str) -> Error {
    Error::ZeroDerivative { method, step: 0 }
}

/// `x - f(x) / f'(x)`.
pub fn newton_step(f: &Polynomial, x: &Rational) -> Result<Rational> {
    let fx = f.eval(x);
    if *fx.numer() == 0 {
        return Ok(x.clone());
    }
    let d1 = f.eval_derivative(x, 1);
    if *d1.numer() == 0 {
        return Err(zero_derivative("newton"));
    }
    Ok(x - fx / d1)
}

/// `x - 2 f f' / (2 f'^2 - f f'')`.
pub fn halley_step(f: &Polynomial, x: &Rational) -> Result<Rational> {
    let fx = f.eval(x);
    if *fx.numer() == 0 {
        return Ok(x.clone());
    }
    let d1 = f.eval_derivative(x, 1);
    let d2 = f.eval_derivative(x, 2);
    let den = Rational::from(&d1 * &d1) * 2u32 - Rational::from(&fx * &d2);
    if *den.numer() == 0 {
        return Err(zero_derivative("halley"));
    }
    let num = Rational::from(&fx * &d1) * 2u32;
    Ok(x - num / den)
}

/// `x - f/f' - f^2 f'' / (2 f'^3)`.
pub fn chebyshev_step(f: &Polynomial, x: &Rational) -> Result<Rational> {
    let fx = f.eval(x);
    if *fx.numer() == 0 {
        return Ok(x.clone());
    }
    let d1 = f.eval_derivative(x, 1);
    if *d1.numer() == 0 {
        return Err(zero_derivative("chebyshev"));
    }
    let d2 = f.eval_derivative(x, 2);
    let newton = Rational::from(&fx / &d1);
    let cube = Rational::from(&d1 * &d1) * &d1 * 2u32;
    let corr = Rational::from(&fx * &fx) * d2 / cube;
    Ok(Rational::from(x - &newton) - corr)
}

/// Newton predictor `y`, then
/// `y - f(y)/f'(y) - f(y)^2 f''(y) / (2 f'(y)^3)`.
pub fn noor_step(f: &Polynomial, x: &Rational) -> Result<(Rational, Rational)> {
    let y = newton_step(f, x).map_err(|_| zero_derivative("noor"))?;
    let fy = f.eval(&y);
    if *fy.numer() == 0 {
        return Ok((y.clone(), y));
    }
    let d1 = f.eval_derivative(&y, 1);
    if *d1.numer() == 0 {
        return Err(zero_derivative("noor"));
    }
    let d2 = f.eval_derivative(&y, 2);
    let newton = Rational::from(&fy / &d1);
    let cube = Rational::from(&d1 * &d1) * &d1 * 2u32;
    let corr = Rational::from(&fy * &fy) * d2 / cube;
    let next = Rational::from(&y - &newton) - corr;
    Ok((y, next))
}

/// Iterates `steps` times from `x0`, recording every step. Stops early on an
/// exact hit, or when the next denominator is predicted to exceed
/// `digit_ceiling` digits.
pub fn run_method(
    method: Method,
    f: &Polynomial,
    x0: &Rational,
    steps: u64,
    oracle: &mut dyn ErrorOracle,
    digit_ceiling: u64,
) -> Result<Vec<ApproximationRecord>> {
    if steps == 0 {
        return Err(Error::InvalidArgument {
            name: "steps",
            reason: "must be at least 1".into(),
        });
    }
    let mut state = IterativeState::new(method, x0.clone());
    let mut out: Vec<ApproximationRecord> = Vec::new();
    let mut growing = 0;
    while state.step < steps {
        if let [.., a, b] = out.as_slice() {
            let ratio = b.reduced_den_digits as f64 / a.reduced_den_digits.max(1) as f64;
            if b.reduced_den_digits as f64 * ratio.max(1.0) > digit_ceiling as f64 {
                break;
            }
        }
        state.advance(f)?;
        let digits = digit_count(state.x.denom())?;
        let abs_error = oracle.abs_error(&state.x)?;
        if let Some(prev) = out.last() {
            if abs_error > prev.abs_error {
                growing += 1;
                if growing >= 3 {
                    return Err(Error::Diverged {
                        method: method.name(),
                        step: state.step,
                        error: format!("{:.3e}", abs_error.to_f64()),
                    });
                }
            } else {
                growing = 0;
            }
        }
        let exact = abs_error.is_zero();
        out.push(ApproximationRecord {
            n: state.step,
            exponent: state.step,
            value: state.x.clone(),
            abs_error,
            den_digits: digits,
            reduced_den_digits: digits,
        });
        if exact {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{isolate_real_roots, RealRoot};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn sqrt2() -> Polynomial {
        Polynomial::from_monic_i64(&[1, 0, -2]).unwrap()
    }

    fn alpha3() -> (Polynomial, RealRoot) {
        let f = Polynomial::from_monic_i64(&[1, 1, -2, -1]).unwrap();
        let iv = isolate_real_roots(&f).unwrap().remove(0);
        let r = RealRoot::new(&f, &iv).unwrap();
        (f, r)
    }

    #[test]
    fn hand_computed_steps() {
        let f = sqrt2();
        assert_eq!(newton_step(&f, &q(1, 1)).unwrap(), q(3, 2));
        assert_eq!(halley_step(&f, &q(1, 1)).unwrap(), q(7, 5));
        // y = 3/2, f(y) = 1/4, f'(y) = 3, f''(y) = 2: 3/2 - 1/12 - (1/16)(2)/54
        let (y, x) = noor_step(&f, &q(1, 1)).unwrap();
        assert_eq!(y, q(3, 2));
        assert_eq!(x, q(3, 2) - q(1, 12) - q(1, 432));
        // f(1) = -1, f'(1) = 2, f''(1) = 2: 1 + 1/2 - 2/16
        assert_eq!(chebyshev_step(&f, &q(1, 1)).unwrap(), q(11, 8));
    }

    #[test]
    fn exact_roots_are_fixed_points() {
        let f = Polynomial::from_monic_i64(&[1, -3, 2]).unwrap();
        assert_eq!(newton_step(&f, &q(2, 1)).unwrap(), q(2, 1));
        assert_eq!(halley_step(&f, &q(1, 1)).unwrap(), q(1, 1));
        assert_eq!(noor_step(&f, &q(2, 1)).unwrap(), (q(2, 1), q(2, 1)));
    }

    #[test]
    fn zero_derivative_reported() {
        let f = Polynomial::from_monic_i64(&[1, 0, 1]).unwrap();
        assert!(matches!(newton_step(&f, &q(0, 1)), Err(Error::ZeroDerivative { .. })));
    }

    #[test]
    fn linear_polynomial_one_step() {
        let f = Polynomial::from_u(vec![q(5, 3)]).unwrap();
        let iv = isolate_real_roots(&f).unwrap().remove(0);
        let mut r = RealRoot::new(&f, &iv).unwrap();
        for m in Method::ALL {
            let recs = run_method(m, &f, &q(-7, 1), 5, &mut r, DEFAULT_DIGIT_CEILING).unwrap();
            assert_eq!(recs.len(), 1);
            assert!(recs[0].abs_error.is_zero());
        }
    }

    #[test]
    fn ramanujan_from_minus_two() {
        let (f, mut r) = alpha3();
        let recs = run_method(Method::Newton, &f, &q(-2, 1), 3, &mut r, DEFAULT_DIGIT_CEILING).unwrap();
        assert_eq!(recs[2].reduced_den_digits, 9);
        let e = recs[2].abs_error.to_f64();
        assert!((1.0e-6..1.1e-6).contains(&e), "{e}");
        let recs = run_method(Method::Halley, &f, &q(-2, 1), 2, &mut r, DEFAULT_DIGIT_CEILING).unwrap();
        assert_eq!(recs[1].reduced_den_digits, 9);
        let e = recs[1].abs_error.to_f64();
        assert!((8.0e-8..8.2e-8).contains(&e), "{e}");
        let recs = run_method(Method::Chebyshev, &f, &q(-2, 1), 6, &mut r, DEFAULT_DIGIT_CEILING).unwrap();
        let digits: Vec<u64> = recs.iter().map(|r| r.reduced_den_digits).collect();
        assert_eq!(digits, [3, 18, 126, 881, 6163, 43136]);
    }

    #[test]
    fn runs_are_deterministic() {
        let (f, mut r) = alpha3();
        let a = run_method(Method::Noor, &f, &q(-3, 2), 3, &mut r, DEFAULT_DIGIT_CEILING).unwrap();
        let b = run_method(Method::Noor, &f, &q(-3, 2), 3, &mut r, DEFAULT_DIGIT_CEILING).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parses_methods() {
        assert_eq!("Halley".parse::<Method>().unwrap(), Method::Halley);
        assert!("secant".parse::<Method>().is_err());
    }
}
