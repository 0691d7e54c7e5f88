//! Monic polynomials `f(t) = t^m - u_1 t^{m-1} - … - u_{m-1} t - u_m`.
//!
//! The u-vector is the canonical storage; the full monic coefficient list
//! is a view. All operations are exact over Q.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Rational};

use crate::matrix::RationalMatrix;
use crate::numeric::{parse_rational_list, Complex};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    u: Vec<Rational>,
}

impl Polynomial {
    /// From `(u_1, …, u_m)`.
    pub fn from_u(u: Vec<Rational>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::DegreeZero);
        }
        Ok(Polynomial { u })
    }

    pub fn from_u_i64(u: &[i64]) -> Result<Self> {
        Self::from_u(u.iter().map(|&v| Rational::from(v)).collect())
    }

    /// From the full coefficient list, highest degree first. The leading
    /// coefficient must be exactly 1.
    pub fn from_monic(coeffs: &[Rational]) -> Result<Self> {
        let (lead, rest) = coeffs.split_first().ok_or(Error::DegreeZero)?;
        if *lead != 1 {
            return Err(Error::NotMonic {
                leading: lead.to_string(),
            });
        }
        Self::from_u(rest.iter().map(|c| Rational::from(-c)).collect())
    }

    pub fn from_monic_i64(coeffs: &[i64]) -> Result<Self> {
        let c: Vec<Rational> = coeffs.iter().map(|&v| Rational::from(v)).collect();
        Self::from_monic(&c)
    }

    /// Monic polynomial from ascending coefficients `c_0, …, c_m`; divides
    /// through by `c_m`.
    pub(crate) fn from_ascending(coeffs: &[Rational]) -> Result<Self> {
        let lead = coeffs.last().ok_or(Error::DegreeZero)?;
        if coeffs.len() < 2 || *lead.numer() == 0 {
            return Err(Error::DegreeZero);
        }
        let m = coeffs.len() - 1;
        let u = (1..=m)
            .map(|i| -Rational::from(&coeffs[m - i] / lead))
            .collect();
        Ok(Polynomial { u })
    }

    pub fn degree(&self) -> usize {
        self.u.len()
    }

    /// `(u_1, …, u_m)`.
    pub fn u(&self) -> &[Rational] {
        &self.u
    }

    /// 1-based accessor matching the usual `u_i` notation.
    pub fn u_at(&self, i: usize) -> &Rational {
        &self.u[i - 1]
    }

    /// `(1, -u_1, …, -u_m)`, highest degree first.
    pub fn monic_coefficients(&self) -> Vec<Rational> {
        std::iter::once(Rational::from(1))
            .chain(self.u.iter().map(|c| Rational::from(-c)))
            .collect()
    }

    /// `(c_0, …, c_m)` with `c_m = 1`.
    pub fn ascending(&self) -> Vec<Rational> {
        let mut c = self.monic_coefficients();
        c.reverse();
        c
    }

    /// `f^{(order)}(t)`, exact.
    pub fn eval_derivative(&self, t: &Rational, order: usize) -> Rational {
        let coeffs = derivative_coefficients(&self.ascending(), order);
        let mut acc = Rational::new();
        for c in coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.eval_derivative(t, 0)
    }

    /// Value and first derivative at a float point.
    pub fn eval_float(&self, t: &Float) -> (Float, Float) {
        let prec = t.prec();
        let c = self.ascending();
        let mut p = Float::new(prec);
        let mut dp = Float::new(prec);
        for coeff in c.iter().rev() {
            dp *= t;
            dp += &p;
            p *= t;
            p += coeff;
        }
        (p, dp)
    }

    /// Value and first derivative at a complex point.
    pub fn eval_complex(&self, z: &Complex) -> (Complex, Complex) {
        let prec = z.prec();
        let mut p = Complex::zero(prec);
        let mut dp = Complex::zero(prec);
        for coeff in self.ascending().iter().rev() {
            dp = &(&dp * z) + &p;
            p = &(&p * z) + &Complex::from_rational(coeff, prec);
        }
        (p, dp)
    }

    pub fn derivative_ascending(&self) -> Vec<Rational> {
        derivative_coefficients(&self.ascending(), 1)
    }

    /// Monic polynomial whose roots are the reciprocals of the roots of `f`.
    pub fn reflect(&self) -> Result<Self> {
        let c = self.ascending();
        if *c[0].numer() == 0 {
            return Err(Error::ZeroConstantTerm);
        }
        let reversed: Vec<Rational> = c.into_iter().rev().collect();
        Self::from_ascending(&reversed)
    }

    /// `g(t) = f(t - c)`: roots move by `+c`. Repeated synthetic division
    /// by `(t + c)` yields the Taylor coefficients at `-c`.
    pub fn shift(&self, c: &Rational) -> Self {
        let a = Rational::from(-c);
        let mut coeffs = self.ascending();
        let m = coeffs.len() - 1;
        for i in 0..m {
            for k in (i..m).rev() {
                let t = Rational::from(&a * &coeffs[k + 1]);
                coeffs[k] += t;
            }
        }
        Self::from_ascending(&coeffs).expect("shift keeps the monic leading term")
    }

    pub fn companion(&self) -> CompanionMatrix {
        let m = self.degree();
        let mut a = RationalMatrix::zeros(m);
        for i in 1..m {
            a[(i, i - 1)] = Rational::from(1);
        }
        for i in 0..m {
            a[(i, m - 1)] = self.u[m - 1 - i].clone();
        }
        CompanionMatrix {
            entries: a,
            source: self.clone(),
        }
    }

    /// Degree of `gcd(f, f')`; zero means squarefree.
    pub fn squarefree_defect(&self) -> usize {
        let g = poly_gcd(self.ascending(), self.derivative_ascending());
        g.len().saturating_sub(1)
    }

    pub fn ensure_squarefree(&self) -> Result<()> {
        match self.squarefree_defect() {
            0 => Ok(()),
            gcd_degree => Err(Error::NotSquarefree { gcd_degree }),
        }
    }

    /// Sturm chain `f, f', -rem(f, f'), …`, ascending coefficients.
    pub(crate) fn sturm_chain(&self) -> Vec<Vec<Rational>> {
        let mut chain = vec![self.ascending(), self.derivative_ascending()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_empty() {
                chain.pop();
                break;
            }
            let r = poly_rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        chain
    }

    /// Bound `B` with every root strictly inside `|t| < B` (Cauchy).
    pub fn root_bound(&self) -> Rational {
        let max = self
            .u
            .iter()
            .map(|c| Rational::from(c.abs_ref()))
            .max()
            .unwrap_or_default();
        max + 1u32
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// `u:u1,…,um` or `c:1,c_{m-1},…,c0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("u:") {
            Self::from_u(parse_rational_list(rest)?)
        } else if let Some(rest) = s.strip_prefix("c:") {
            let coeffs = parse_rational_list(rest)?;
            if coeffs.len() < 2 {
                return Err(Error::Arity {
                    what: "monic coefficient list",
                    expected: 2,
                    found: coeffs.len(),
                });
            }
            Self::from_monic(&coeffs)
        } else {
            Err(Error::Parse {
                what: "polynomial",
                input: s.to_string(),
                reason: "expected prefix `u:` or `c:`".to_string(),
            })
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self
            .monic_coefficients()
            .iter()
            .map(|q| q.to_string())
            .collect();
        write!(f, "c:{}", c.join(","))
    }
}

/// Companion matrix of `f`: ones on the subdiagonal, `(u_m, …, u_1)` down
/// the last column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionMatrix {
    pub entries: RationalMatrix,
    pub source: Polynomial,
}

fn derivative_coefficients(c: &[Rational], order: usize) -> Vec<Rational> {
    let mut c = c.to_vec();
    for _ in 0..order {
        if c.len() <= 1 {
            return Vec::new();
        }
        c = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(s, v)| Rational::from(v * s as u64))
            .collect();
    }
    c
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| *c.numer() == 0) {
        p.pop();
    }
    p
}

/// Remainder of `a` by `b` (ascending coefficients, `b` nonzero).
fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = Rational::from(r.last().unwrap() / &lead);
        for (k, bc) in b.iter().enumerate() {
            let t = Rational::from(&factor * bc);
            r[shift + k] -= t;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn poly_gcd(a: Vec<Rational>, b: Vec<Rational>) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Number of sign changes of the chain at `t`, zeros skipped.
pub(crate) fn sign_variations(chain: &[Vec<Rational>], t: &Rational) -> usize {
    let mut last = 0i32;
    let mut count = 0;
    for p in chain {
        let mut acc = Rational::new();
        for c in p.iter().rev() {
            acc *= t;
            acc += c;
        }
        let s = acc.cmp0() as i32;
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn parses_both_formats() {
        let f: Polynomial = "c:1,1,-2,-1".parse().unwrap();
        assert_eq!(f.u(), &[q(-1, 1), q(2, 1), q(1, 1)]);
        let g: Polynomial = "u:0,0,5".parse().unwrap();
        assert_eq!(g.monic_coefficients(), vec![q(1, 1), q(0, 1), q(0, 1), q(-5, 1)]);
        let h: Polynomial = "c:1,-2,-1,1".parse().unwrap();
        assert_eq!(h.u(), &[q(2, 1), q(1, 1), q(-1, 1)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("c:2,1".parse::<Polynomial>(), Err(Error::NotMonic { .. })));
        assert!(matches!("c:1".parse::<Polynomial>(), Err(Error::Arity { .. })));
        assert!(matches!("u:".parse::<Polynomial>(), Err(Error::DegreeZero)));
        assert!(matches!("u:1,x".parse::<Polynomial>(), Err(Error::Parse { .. })));
        assert!(matches!("1,2".parse::<Polynomial>(), Err(Error::Parse { .. })));
    }

    #[test]
    fn evaluation_and_derivatives() {
        let f = Polynomial::from_monic_i64(&[1, 1, -2, -1]).unwrap();
        assert_eq!(f.eval(&q(0, 1)), -1);
        // f' = 3t^2 + 2t - 2
        assert_eq!(f.eval_derivative(&q(1, 1), 1), 3);
        // f'' = 6t + 2
        assert_eq!(f.eval_derivative(&q(2, 1), 2), 14);
        assert_eq!(f.eval_derivative(&q(2, 1), 4), 0);
    }

    #[test]
    fn reflect_examples() {
        let f = Polynomial::from_monic_i64(&[1, 1, -2, -1]).unwrap();
        assert_eq!(f.reflect().unwrap(), Polynomial::from_monic_i64(&[1, 2, -1, -1]).unwrap());
        let g = Polynomial::from_monic_i64(&[1, 0, -2]).unwrap();
        let r = g.reflect().unwrap();
        assert_eq!(r.monic_coefficients(), vec![q(1, 1), q(0, 1), q(-1, 2)]);
        let pal = Polynomial::from_monic_i64(&[1, -3, 1]).unwrap();
        assert_eq!(pal.reflect().unwrap(), pal);
        let z = Polynomial::from_monic_i64(&[1, 1, 0]).unwrap();
        assert!(matches!(z.reflect(), Err(Error::ZeroConstantTerm)));
    }

    #[test]
    fn shift_examples() {
        let f = Polynomial::from_monic_i64(&[1, 1, -2, -1]).unwrap();
        assert_eq!(f.shift(&q(1, 1)), Polynomial::from_u_i64(&[2, 1, -1]).unwrap());
        assert_eq!(f.shift(&q(0, 1)), f);
        let g = Polynomial::from_monic_i64(&[1, 0, -2]).unwrap();
        assert_eq!(g.shift(&q(3, 1)), Polynomial::from_monic_i64(&[1, -6, 7]).unwrap());
    }

    #[test]
    fn companion_layout() {
        let f = Polynomial::from_u(vec![q(7, 1), q(8, 1), q(9, 1)]).unwrap();
        let a = f.companion().entries;
        assert_eq!(a, RationalMatrix::from_i64_rows(&[&[0, 0, 9], &[1, 0, 8], &[0, 1, 7]]));
        let one = Polynomial::from_u_i64(&[5]).unwrap().companion().entries;
        assert_eq!(one, RationalMatrix::from_i64_rows(&[&[5]]));
        let four = Polynomial::from_u_i64(&[1, 2, 3, 4]).unwrap().companion().entries;
        assert_eq!(four.column(3), vec![q(4, 1), q(3, 1), q(2, 1), q(1, 1)]);
        assert_eq!(four[(1, 0)], 1);
        assert_eq!(four[(3, 2)], 1);
    }

    #[test]
    fn squarefree_detection() {
        let f = Polynomial::from_monic_i64(&[1, 1, -2, -1]).unwrap();
        assert_eq!(f.squarefree_defect(), 0);
        // (t-1)^2 (t+2)
        let g = Polynomial::from_monic_i64(&[1, 0, -3, 2]).unwrap();
        assert_eq!(g.squarefree_defect(), 1);
    }

    #[test]
    fn display_round_trips() {
        let f = Polynomial::from_u(vec![q(1, 2), q(-3, 1)]).unwrap();
        let back: Polynomial = f.to_string().parse().unwrap();
        assert_eq!(back, f);
    }
}
