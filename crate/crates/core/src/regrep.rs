//! The regular-representation matrix `M(x, u) = Σ x_n A^n`.

use std::fmt;

use rug::{Integer, Rational};

use crate::matrix::RationalMatrix;
use crate::polynomial::Polynomial;
use crate::{Error, Result};

/// Coordinates `(x_0, …, x_{m-1})` of `Σ x_i α^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights(Vec<Rational>);

impl Weights {
    pub fn new(x: Vec<Rational>) -> Result<Self> {
        if x.iter().all(|v| *v.numer() == 0) {
            return Err(Error::ZeroWeights);
        }
        Ok(Weights(x))
    }

    pub fn from_i64(x: &[i64]) -> Result<Self> {
        Self::new(x.iter().map(|&v| Rational::from(v)).collect())
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The coordinates of the product of two field elements, reduced with
    /// `α^m = u_1 α^{m-1} + … + u_m`.
    pub fn product_mod(&self, other: &Weights, f: &Polynomial) -> Result<Weights> {
        let m = f.degree();
        check_arity(self, m)?;
        check_arity(other, m)?;
        let mut prod = vec![Rational::new(); 2 * m - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                prod[i + j] += Rational::from(a * b);
            }
        }
        for d in (m..prod.len()).rev() {
            let c = std::mem::take(&mut prod[d]);
            if *c.numer() == 0 {
                continue;
            }
            for s in 1..=m {
                prod[d - s] += Rational::from(&c * f.u_at(s));
            }
        }
        prod.truncate(m);
        Weights::new(prod)
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_arity(x: &Weights, m: usize) -> Result<()> {
    if x.len() != m {
        return Err(Error::Arity {
            what: "weights",
            expected: m,
            found: x.len(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegRepMatrix {
    pub entries: RationalMatrix,
    pub weights: Weights,
    pub poly: Polynomial,
}

impl RegRepMatrix {
    pub fn dim(&self) -> usize {
        self.entries.dim()
    }
}

impl fmt::Display for RegRepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.entries.fmt(f)
    }
}

/// `M = Σ x_n A^n` by Horner accumulation over the companion matrix.
pub fn build(f: &Polynomial, x: &Weights) -> Result<RegRepMatrix> {
    let m = f.degree();
    check_arity(x, m)?;
    let a = f.companion().entries;
    let xs = x.as_slice();
    let mut acc = RationalMatrix::identity(m).scale(&xs[m - 1]);
    for xn in xs[..m - 1].iter().rev() {
        acc = acc.mul(&a).add(&RationalMatrix::identity(m).scale(xn));
    }
    Ok(RegRepMatrix {
        entries: acc,
        weights: x.clone(),
        poly: f.clone(),
    })
}

/// Closed form for `f = t^3 - p t^2 - q t - r` and weights `(x, y, z)`.
pub fn build_cubic(
    p: &Rational,
    q: &Rational,
    r: &Rational,
    x: &Rational,
    y: &Rational,
    z: &Rational,
) -> Result<RegRepMatrix> {
    let rz = Rational::from(r * z);
    let pz = Rational::from(p * z);
    let prz = Rational::from(&pz * r);
    let pq_r = Rational::from(p * q) + r;
    let p2_q = Rational::from(p * p) + q;
    let rows = vec![
        vec![x.clone(), rz.clone(), Rational::from(r * y) + &prz],
        vec![
            y.clone(),
            Rational::from(q * z) + x,
            Rational::from(q * y) + Rational::from(&pq_r * z),
        ],
        vec![
            z.clone(),
            Rational::from(y + &pz),
            Rational::from(p * y) + x + Rational::from(&p2_q * z),
        ],
    ];
    Ok(RegRepMatrix {
        entries: RationalMatrix::from_rows(rows)?,
        weights: Weights::new(vec![x.clone(), y.clone(), z.clone()])?,
        poly: Polynomial::from_u(vec![p.clone(), q.clone(), r.clone()])?,
    })
}

/// Entry `(i, j)` (1-based) of `A^n` from the multinomial expansion.
pub fn entry_multinomial(f: &Polynomial, i: usize, j: usize, n: u64) -> Result<Rational> {
    let m = f.degree();
    for (idx, what) in [(i, "row"), (j, "column")] {
        if idx == 0 || idx > m {
            return Err(Error::IndexOutOfRange {
                what,
                index: idx,
                bound: m,
            });
        }
    }
    let total = n as i128 - i as i128 + j as i128;
    if total < 0 {
        return Ok(Rational::new());
    }
    if total == 0 {
        return Ok(Rational::from(1));
    }
    let mut k = vec![0u64; m];
    let mut sum = Rational::new();
    // weight counts k_s for s in m+1-i..=m
    let tail_from = m + 1 - i;
    compositions(f, m, total as u64, &mut k, tail_from, &mut sum);
    Ok(sum)
}

// Depth-first over k_s, s = level..1, with Σ s k_s = remaining at the leaf.
fn compositions(
    f: &Polynomial,
    level: usize,
    remaining: u64,
    k: &mut [u64],
    tail_from: usize,
    sum: &mut Rational,
) {
    if level == 0 {
        if remaining == 0 {
            add_term(f, k, tail_from, sum);
        }
        return;
    }
    let s = level as u64;
    for ks in 0..=remaining / s {
        k[level - 1] = ks;
        compositions(f, level - 1, remaining - ks * s, k, tail_from, sum);
    }
    k[level - 1] = 0;
}

fn add_term(f: &Polynomial, k: &[u64], tail_from: usize, sum: &mut Rational) {
    let total: u64 = k.iter().sum();
    let tail: u64 = k[tail_from - 1..].iter().sum();
    if tail == 0 {
        return;
    }
    let mut coeff = Integer::from(Integer::factorial(total as u32));
    let mut term = Rational::from(1);
    for (s, &ks) in k.iter().enumerate() {
        coeff /= Integer::from(Integer::factorial(ks as u32));
        if ks > 0 {
            term *= Rational::from(rug::ops::Pow::pow(f.u_at(s + 1), ks as u32));
        }
    }
    term *= Rational::from((Integer::from(tail) * coeff, Integer::from(total)));
    *sum += term;
}

/// Same matrix as [`build`], computed entry by entry through
/// [`entry_multinomial`].
pub fn entries_via_formula(f: &Polynomial, x: &Weights) -> Result<RegRepMatrix> {
    let m = f.degree();
    check_arity(x, m)?;
    let mut out = RationalMatrix::zeros(m);
    for i in 1..=m {
        for j in 1..=m {
            let mut acc = Rational::new();
            for (n, xn) in x.as_slice().iter().enumerate() {
                if *xn.numer() != 0 {
                    acc += entry_multinomial(f, i, j, n as u64)? * xn;
                }
            }
            out[(i - 1, j - 1)] = acc;
        }
    }
    Ok(RegRepMatrix {
        entries: out,
        weights: x.clone(),
        poly: f.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    fn ramanujan() -> Polynomial {
        Polynomial::from_u_i64(&[-1, 2, 1]).unwrap()
    }

    #[test]
    fn khovanskii_pattern() {
        let r = 5;
        let f = Polynomial::from_u_i64(&[0, 0, r]).unwrap();
        let m = build(&f, &Weights::from_i64(&[7, 1, 1]).unwrap()).unwrap();
        let expect = RationalMatrix::from_i64_rows(&[&[7, r, r], &[1, 7, r], &[1, 1, 7]]);
        assert_eq!(m.entries, expect);
    }

    #[test]
    fn ramanujan_weights_matrix() {
        let m = build(&ramanujan(), &Weights::from_i64(&[0, -1, 1]).unwrap()).unwrap();
        let expect = RationalMatrix::from_i64_rows(&[&[0, 1, -2], &[-1, 2, -3], &[1, -2, 4]]);
        assert_eq!(m.entries, expect);
        let c = build_cubic(&q(-1), &q(2), &q(1), &q(0), &q(-1), &q(1)).unwrap();
        assert_eq!(c.entries, expect);
    }

    #[test]
    fn identity_for_unit_weights() {
        let f = Polynomial::from_u_i64(&[3, -1, 4, 1]).unwrap();
        let one = Weights::from_i64(&[1, 0, 0, 0]).unwrap();
        assert_eq!(build(&f, &one).unwrap().entries, RationalMatrix::identity(4));
        assert_eq!(entries_via_formula(&f, &one).unwrap().entries, RationalMatrix::identity(4));
        let c = build_cubic(&q(2), &q(3), &q(4), &q(1), &q(0), &q(0)).unwrap();
        assert_eq!(c.entries, RationalMatrix::identity(3));
    }

    #[test]
    fn matrix_c_of_cubic_family() {
        let (p, qq, r) = (q(2), q(-3), q(5));
        let f = Polynomial::from_u(vec![p.clone(), qq.clone(), r.clone()]).unwrap();
        let m = build(&f, &Weights::from_i64(&[4, 0, 1]).unwrap()).unwrap();
        // [[x, r, pr], [0, x+q, pq+r], [1, p, x+p^2+q]]
        let expect = RationalMatrix::from_i64_rows(&[&[4, 5, 10], &[0, 1, -1], &[1, 2, 5]]);
        assert_eq!(m.entries, expect);
    }

    #[test]
    fn multinomial_matches_companion_powers() {
        let f = ramanujan();
        let a = f.companion().entries;
        for n in 0..=5u64 {
            let an = a.pow_naive(n);
            for i in 1..=3 {
                for j in 1..=3 {
                    assert_eq!(entry_multinomial(&f, i, j, n).unwrap(), an[(i - 1, j - 1)], "n={n} ({i},{j})");
                }
            }
        }
        let g = Polynomial::from_u_i64(&[7, 11, 13]).unwrap();
        assert_eq!(entry_multinomial(&g, 3, 3, 1).unwrap(), 7);
        assert_eq!(entry_multinomial(&g, 2, 3, 1).unwrap(), 11);
        assert_eq!(entry_multinomial(&g, 1, 3, 1).unwrap(), 13);
        assert!(entry_multinomial(&g, 4, 1, 1).is_err());
    }

    #[test]
    fn formula_path_agrees() {
        let f = ramanujan();
        let x = Weights::from_i64(&[0, -1, 1]).unwrap();
        assert_eq!(build(&f, &x).unwrap(), entries_via_formula(&f, &x).unwrap());
    }

    #[test]
    fn arity_and_zero_weights() {
        let f = ramanujan();
        assert!(matches!(
            build(&f, &Weights::from_i64(&[1, 2]).unwrap()),
            Err(Error::Arity { .. })
        ));
        assert!(matches!(Weights::from_i64(&[0, 0, 0]), Err(Error::ZeroWeights)));
    }

    #[test]
    fn product_mod_is_multiplicative() {
        let f = ramanujan();
        let a = Weights::from_i64(&[1, 2, -1]).unwrap();
        let b = Weights::from_i64(&[0, -1, 3]).unwrap();
        let ab = a.product_mod(&b, &f).unwrap();
        let lhs = build(&f, &a).unwrap().entries.mul(&build(&f, &b).unwrap().entries);
        assert_eq!(lhs, build(&f, &ab).unwrap().entries);
    }
}
