//! Exact univariate polynomials and truncated power series over `BigInt`.
//!
//! [`IntPoly`] stores its coefficients sparsely (degree -> nonzero coefficient);
//! products of two dense-ish operands are carried out on a dense scratch buffer.
//! [`TruncSeries`] pairs a polynomial with the degree through which its
//! coefficients are exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Operands with at least this many terms each are multiplied densely.
const DENSE_MUL_THRESHOLD: usize = 12;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    terms: BTreeMap<usize, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(degree, c);
        }
        Self { terms }
    }

    /// `1 - t^k`.
    pub fn one_minus_t_pow(k: usize) -> Self {
        Self::one() - Self::monomial(1, k)
    }

    /// Builds a polynomial from dense coefficients, lowest degree first.
    pub fn from_coeffs<I, C>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(d, c)| (d, c.into()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Degree, with `None` standing for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, degree: usize) -> BigInt {
        self.terms.get(&degree).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(usize, &BigInt)> {
        self.terms.iter().next_back().map(|(&d, c)| (d, c))
    }

    /// Nonzero terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.terms.iter().map(|(&d, c)| (d, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Dense coefficient vector `[c_0, ..., c_deg]`; empty for the zero polynomial.
    pub fn to_dense(&self) -> Vec<BigInt> {
        match self.degree() {
            None => Vec::new(),
            Some(deg) => {
                let mut out = vec![BigInt::zero(); deg + 1];
                for (&d, c) in &self.terms {
                    out[d] = c.clone();
                }
                out
            }
        }
    }

    fn add_term(&mut self, degree: usize, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(degree) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&d, v)| (d, v * c)).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        Self {
            terms: self.terms.iter().map(|(&d, v)| (d + k, v.clone())).collect(),
        }
    }

    /// Drops every term of degree greater than `k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self {
            terms: self.terms.range(..=k).map(|(&d, c)| (d, c.clone())).collect(),
        }
    }

    /// `t^d p(1/t)`; requires `deg p <= d`.
    pub fn reverse(&self, d: usize) -> Result<Self> {
        if let Some(deg) = self.degree() {
            if deg > d {
                return Err(Error::DegreeOverflow { degree: deg, bound: d });
            }
        }
        Ok(Self {
            terms: self.terms.iter().map(|(&k, c)| (d - k, c.clone())).collect(),
        })
    }

    /// Substitutes `t -> -t`.
    pub fn negate_variable(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&d, c)| (d, if d % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        // Horner over the dense form
        let mut acc = BigInt::zero();
        for c in self.to_dense().iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn mul_impl(&self, other: &Self, cap: Option<usize>) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let within = |d: usize| cap.is_none_or(|k| d <= k);
        if self.num_terms() >= DENSE_MUL_THRESHOLD && other.num_terms() >= DENSE_MUL_THRESHOLD {
            let a = self.to_dense();
            let b = other.to_dense();
            let mut len = a.len() + b.len() - 1;
            if let Some(k) = cap {
                len = len.min(k + 1);
            }
            let mut out = vec![BigInt::zero(); len];
            for (i, x) in a.iter().enumerate() {
                if x.is_zero() || i >= len {
                    continue;
                }
                for (j, y) in b.iter().enumerate().take(len - i) {
                    if !y.is_zero() {
                        out[i + j] += x * y;
                    }
                }
            }
            Self::from_coeffs(out)
        } else {
            let mut out = Self::zero();
            for (&i, x) in &self.terms {
                if !within(i) {
                    break;
                }
                for (&j, y) in &other.terms {
                    if !within(i + j) {
                        break;
                    }
                    out.add_term(i + j, x * y);
                }
            }
            out
        }
    }

    /// Product with every term above degree `k` discarded.
    pub fn mul_truncated(&self, other: &Self, k: usize) -> Self {
        self.mul_impl(other, Some(k))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient `q` with `self = q * divisor`, failing when a remainder is left.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let non_exact = || Error::NonExactDivision {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        let (db, lb) = match divisor.leading() {
            Some((d, c)) => (d, c.clone()),
            None => return Err(Error::InvalidArgs("division by the zero polynomial".into())),
        };
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some((dr, lr)) = rem.leading() {
            if dr < db {
                return Err(non_exact());
            }
            let (q, r) = lr.div_rem(&lb);
            if !r.is_zero() {
                return Err(non_exact());
            }
            let shift = dr - db;
            for (&d, c) in &divisor.terms {
                rem.add_term(d + shift, -(c * &q));
            }
            quotient.add_term(shift, q);
        }
        Ok(quotient)
    }

    /// Power-series inverse through degree `precision`; the constant term must be `±1`.
    pub fn series_inverse(&self, precision: usize) -> Result<TruncSeries> {
        let c0 = self.coeff(0);
        if !(c0.is_one() || (-&c0).is_one()) {
            return Err(Error::NonUnitConstantTerm(c0.to_string()));
        }
        // q_0 = c0^{-1} = c0;  q_k = -c0 * sum_{j=1..k} p_j q_{k-j}
        let p = self.truncate(precision);
        let mut q: Vec<BigInt> = Vec::with_capacity(precision + 1);
        q.push(c0.clone());
        for k in 1..=precision {
            let mut acc = BigInt::zero();
            for (j, pj) in p.terms.range(1..=k) {
                acc += pj * &q[k - j];
            }
            q.push(-(&c0 * acc));
        }
        Ok(TruncSeries::new(Self::from_coeffs(q), precision))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (&d, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if d == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match d {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl AddAssign<&IntPoly> for IntPoly {
    fn add_assign(&mut self, rhs: &IntPoly) {
        for (&d, c) in &rhs.terms {
            self.add_term(d, c.clone());
        }
    }
}

impl SubAssign<&IntPoly> for IntPoly {
    fn sub_assign(&mut self, rhs: &IntPoly) {
        for (&d, c) in &rhs.terms {
            self.add_term(d, -c);
        }
    }
}

impl Add<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(mut self, rhs: IntPoly) -> IntPoly {
        self += &rhs;
        self
    }
}

impl Sub<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(mut self, rhs: IntPoly) -> IntPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            terms: self.terms.iter().map(|(&d, c)| (d, -c)).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl Mul<&IntPoly> for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        self.mul_impl(rhs, None)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        self.mul_impl(&rhs, None)
    }
}

impl std::iter::Sum for IntPoly {
    fn sum<I: Iterator<Item = IntPoly>>(iter: I) -> IntPoly {
        iter.fold(IntPoly::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> IntPoly {
        iter.fold(IntPoly::one(), |acc, p| acc * p)
    }
}

/// A power series known exactly through degree `valid_through`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    poly: IntPoly,
    valid_through: usize,
}

impl TruncSeries {
    /// Wraps `poly`, discarding whatever lies above `valid_through`.
    pub fn new(poly: IntPoly, valid_through: usize) -> Self {
        Self {
            poly: poly.truncate(valid_through),
            valid_through,
        }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn into_poly(self) -> IntPoly {
        self.poly
    }

    pub fn valid_through(&self) -> usize {
        self.valid_through
    }

    pub fn coeff(&self, degree: usize) -> Result<BigInt> {
        if degree > self.valid_through {
            return Err(Error::InsufficientPrecision {
                valid_through: self.valid_through,
                requested: degree,
            });
        }
        Ok(self.poly.coeff(degree))
    }

    /// The exact polynomial part through degree `k`.
    pub fn truncate(&self, k: usize) -> Result<IntPoly> {
        if k > self.valid_through {
            return Err(Error::InsufficientPrecision {
                valid_through: self.valid_through,
                requested: k,
            });
        }
        Ok(self.poly.truncate(k))
    }

    pub fn add(&self, other: &Self) -> Self {
        let v = self.valid_through.min(other.valid_through);
        Self::new(&self.poly + &other.poly, v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let v = self.valid_through.min(other.valid_through);
        Self::new(&self.poly - &other.poly, v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let v = self.valid_through.min(other.valid_through);
        Self {
            poly: self.poly.mul_truncated(&other.poly, v),
            valid_through: v,
        }
    }

    /// Product with an exact polynomial; precision is unchanged.
    pub fn mul_poly(&self, p: &IntPoly) -> Self {
        Self {
            poly: self.poly.mul_truncated(p, self.valid_through),
            valid_through: self.valid_through,
        }
    }
}

/// Gaussian binomial `[n choose s]_t` via `[n,s] = t^s [n-1,s] + [n-1,s-1]`.
pub fn q_binomial(n: usize, s: usize) -> Result<IntPoly> {
    if s > n {
        return Err(Error::InvalidArgs(format!("q_binomial({n}, {s}) needs s <= n")));
    }
    // row[j] holds [m choose j] for the current m, j <= s
    let mut row: Vec<IntPoly> = vec![IntPoly::one()];
    for m in 1..=n {
        let top = m.min(s);
        let mut next = Vec::with_capacity(top + 1);
        for j in 0..=top {
            let keep = if j < m && j < row.len() {
                row[j].shift(j)
            } else {
                IntPoly::zero()
            };
            let step = if j >= 1 { row[j - 1].clone() } else { IntPoly::zero() };
            next.push(keep + step);
        }
        row = next;
    }
    Ok(row.swap_remove(s))
}

/// `(1 - t) [n choose s]_t`, which equals `f_n / (f_s f_{n-s})` for `0 < s < n`.
pub fn f_ratio(n: usize, s: usize) -> Result<IntPoly> {
    if s == 0 || s >= n {
        return Err(Error::InvalidArgs(format!("f_ratio({n}, {s}) needs 1 <= s <= n-1")));
    }
    Ok(&IntPoly::one_minus_t_pow(1) * &q_binomial(n, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(c.iter().copied())
    }

    /// f_n = (1-t^2)...(1-t^n), built without root_data.
    fn f_sl(n: usize) -> IntPoly {
        (2..=n).map(IntPoly::one_minus_t_pow).product()
    }

    /// Sum of t^{inversions} over binary words with s ones and n-s zeros.
    fn q_binomial_by_words(n: usize, s: usize) -> IntPoly {
        let mut out = IntPoly::zero();
        for w in 0u32..(1 << n) {
            if w.count_ones() as usize != s {
                continue;
            }
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if (w >> i) & 1 == 1 && (w >> j) & 1 == 0 {
                        inv += 1;
                    }
                }
            }
            out = out + IntPoly::monomial(1, inv);
        }
        out
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&p(&[1, 0, -1]) * &p(&[1, 0, 0, -1]), p(&[1, 0, -1, -1, 0, 1]));
        assert!((&p(&[3, 1]) * &IntPoly::zero()).is_zero());
        assert_eq!(&p(&[1, 1]) * &p(&[1, -1]), p(&[1, 0, -1]));
        assert_eq!(IntPoly::zero().degree(), None);
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), IntPoly::zero());
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(f_sl(3).exact_div(&f_sl(2)).unwrap(), p(&[1, 0, 0, -1]));
        let expected = &p(&[1, 0, 0, -1]) * &p(&[1, 0, 1]);
        assert_eq!(f_sl(4).exact_div(&(&f_sl(2) * &f_sl(2))).unwrap(), expected);
        let q = p(&[2, -5, 0, 7]);
        assert_eq!(q.exact_div(&q).unwrap(), IntPoly::one());
    }

    #[test]
    fn exact_division_rejects_remainders() {
        assert!(matches!(
            p(&[1, 1]).exact_div(&p(&[1, 0, 1])),
            Err(Error::NonExactDivision { .. })
        ));
        assert!(matches!(p(&[1, 3]).exact_div(&p(&[0, 2])), Err(Error::NonExactDivision { .. })));
        assert!(matches!(p(&[1]).exact_div(&IntPoly::zero()), Err(Error::InvalidArgs(_))));
    }

    #[test]
    fn reverse_examples() {
        let p4 = p(&[1, 0, 2, 1]);
        assert_eq!(p4.reverse(9).unwrap(), p(&[0, 0, 0, 0, 0, 0, 1, 2, 0, 1]));
        assert_eq!(IntPoly::one().reverse(0).unwrap(), IntPoly::one());
        assert_eq!(p4.reverse(9).unwrap().reverse(9).unwrap(), p4);
        assert!(matches!(p4.reverse(2), Err(Error::DegreeOverflow { degree: 3, bound: 2 })));
    }

    #[test]
    fn series_inverse_examples() {
        let s = p(&[1, 0, -1]).series_inverse(6).unwrap();
        assert_eq!(s.poly(), &p(&[1, 0, 1, 0, 1, 0, 1]));
        assert_eq!(s.valid_through(), 6);
        assert_eq!(IntPoly::one().series_inverse(10).unwrap().poly(), &IntPoly::one());
        // (1 + t^2 + t^4)(1 + t^3) through t^4
        assert_eq!(f_sl(3).series_inverse(4).unwrap().poly(), &p(&[1, 0, 1, 1, 1]));
        assert!(matches!(p(&[2, 1]).series_inverse(3), Err(Error::NonUnitConstantTerm(_))));
        assert_eq!(p(&[-1, 1]).series_inverse(3).unwrap().poly(), &p(&[-1, -1, -1, -1]));
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(p(&[1, 0, 1, 0, -1]).truncate(3), p(&[1, 0, 1]));
        let q = p(&[1, 2, 3]);
        assert_eq!(q.truncate(7), q);
        let d4 = p(&[1, 0, 2, 1, 0, 0, -1, -2, 0, -1]);
        assert_eq!(d4.truncate(4), p(&[1, 0, 2, 1]));
        let s = TruncSeries::new(q.clone(), 1);
        assert!(matches!(s.truncate(2), Err(Error::InsufficientPrecision { .. })));
        assert_eq!(s.truncate(1).unwrap(), p(&[1, 2]));
    }

    #[test]
    fn trunc_series_takes_minimum_precision() {
        let a = TruncSeries::new(p(&[1, 1, 1, 1]), 3);
        let b = TruncSeries::new(p(&[1, 1]), 1);
        assert_eq!(a.mul(&b).valid_through(), 1);
        assert_eq!(a.add(&b).poly(), &p(&[2, 2]));
    }

    #[test]
    fn q_binomial_examples() {
        assert_eq!(q_binomial(5, 0).unwrap(), IntPoly::one());
        assert_eq!(q_binomial(4, 2).unwrap(), q_binomial_by_words(4, 2));
        assert_eq!(q_binomial(4, 2).unwrap(), p(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial(3, 1).unwrap(), p(&[1, 1, 1]));
        assert!(q_binomial(2, 3).is_err());
        for n in 0..=9 {
            for s in 0..=n {
                assert_eq!(q_binomial(n, s).unwrap(), q_binomial_by_words(n, s), "[{n},{s}]");
            }
        }
    }

    #[test]
    fn f_ratio_examples() {
        assert_eq!(f_ratio(3, 1).unwrap(), p(&[1, 0, 0, -1]));
        assert_eq!(f_ratio(4, 2).unwrap(), p(&[1, 0, 1, -1, 0, -1]));
        for n in 2..=10 {
            for s in 1..n {
                assert_eq!(f_ratio(n, s).unwrap(), f_ratio(n, n - s).unwrap());
            }
        }
        assert!(f_ratio(4, 0).is_err());
        assert!(f_ratio(4, 4).is_err());
    }

    #[test]
    fn f_ratio_matches_exact_division() {
        for n in 2..=12 {
            for s in 1..n {
                let by_division = f_sl(n).exact_div(&(&f_sl(s) * &f_sl(n - s))).unwrap();
                assert_eq!(f_ratio(n, s).unwrap(), by_division, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn reversal_of_f_is_a_signed_shift() {
        // t^{d_n + n - 1} f_n(1/t) = (-1)^{n-1} t^{n-1} f_n(t)
        for n in 1..=10usize {
            let f = f_sl(n);
            let d = f.degree().unwrap();
            let sign = if (n - 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            assert_eq!(f.reverse(d + n - 1).unwrap(), f.scale(&sign).shift(n - 1), "n={n}");
        }
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[1, 0, 2, 1]).to_string(), "1 + 2t^2 + t^3");
        assert_eq!(p(&[0, -1, 0, 3]).to_string(), "-t + 3t^3");
        assert_eq!(p(&[1, 0, -1]).to_string(), "1 - t^2");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn eval_uses_all_terms() {
        let f = p(&[1, 0, -1, -1, 0, 1]);
        assert_eq!(f.eval(&BigInt::from(2)), BigInt::from(21));
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-50i64..50, 0..max_len).prop_map(IntPoly::from_coeffs)
    }

    proptest! {
        #[test]
        fn exact_div_inverts_mul(a in arb_poly(30), b in arb_poly(20)) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }

        #[test]
        fn dense_and_sparse_products_agree(a in arb_poly(40), b in arb_poly(40)) {
            let mut sparse = IntPoly::zero();
            for (i, x) in a.terms() {
                for (j, y) in b.terms() {
                    sparse += &IntPoly::monomial(x * y, i + j);
                }
            }
            prop_assert_eq!(&a * &b, sparse);
        }

        #[test]
        fn series_inverse_is_inverse(tail in arb_poly(15), sign in prop::bool::ANY, prec in 0usize..25) {
            let c0 = if sign { 1 } else { -1 };
            let f = IntPoly::constant(c0) + tail.shift(1);
            let inv = f.series_inverse(prec).unwrap();
            prop_assert_eq!(f.mul_truncated(inv.poly(), prec), IntPoly::one());
        }
    }
}
