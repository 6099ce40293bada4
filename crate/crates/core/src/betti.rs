//! Betti numbers `c_i(n) = [t^i] P_n` of the SL_n varieties, the Gaussian
//! coefficients `b_{i,s}(n) = [t^i] f_n / (f_s f_{n-s})`, their stability, the
//! binomial-basis expansion of `c_i(n)` and the composition identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ic_core::{dim_sl, Engine};
use crate::polyring::{f_ratio, q_binomial, IntPoly};
use crate::report::{big, big_list, Report};

/// `P_1, …, P_{n_max}` read as a table of coefficients `c_i(n)`.
#[derive(Clone, Debug)]
pub struct BettiTable {
    i_max: usize,
    polys: Vec<IntPoly>,
}

impl BettiTable {
    pub fn n_max(&self) -> usize {
        self.polys.len()
    }

    pub fn i_max(&self) -> usize {
        self.i_max
    }

    pub fn poincare(&self, n: usize) -> &IntPoly {
        assert!((1..=self.n_max()).contains(&n), "n = {n} outside 1..={}", self.n_max());
        &self.polys[n - 1]
    }

    /// `c_i(n)`; panics if `n` is outside `1..=n_max`.
    pub fn c(&self, i: usize, n: usize) -> BigInt {
        self.poincare(n).coeff(i)
    }

    /// `c_i(n)` with `c` at a negative index equal to zero.
    pub fn c_signed(&self, i: i64, n: usize) -> BigInt {
        if i < 0 {
            BigInt::zero()
        } else {
            self.c(i as usize, n)
        }
    }

    /// Rows `i = 0..=i_max`, columns `n = 1..=n_max`.
    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..=self.i_max)
            .map(|i| (1..=self.n_max()).map(|n| self.c(i, n)).collect())
            .collect()
    }
}

pub fn c_table(engine: &Engine, i_max: usize, n_max: usize) -> Result<BettiTable> {
    if i_max < 1 || n_max < 1 {
        return Err(Error::InvalidArgs(format!("c_table needs i_max, n_max >= 1, got {i_max}, {n_max}")));
    }
    let polys = (1..=n_max).map(|n| engine.sl(n)).collect::<Result<Vec<_>>>()?;
    Ok(BettiTable { i_max, polys })
}

/// `b_{i,s}(n)` for `1 <= s <= n-1`.
pub fn b_coeff(i: usize, s: usize, n: usize) -> Result<BigInt> {
    if s == 0 || s >= n {
        return Err(Error::InvalidArgs(format!("b_{{i,s}}(n) needs 1 <= s <= n-1, got s = {s}, n = {n}")));
    }
    Ok(f_ratio(n, s)?.coeff(i))
}

/// `[t^i] (1-t)·[n choose s]_t` for `0 <= s <= n`; agrees with [`b_coeff`]
/// inside `1..=n-1` and satisfies the Pascal recurrence on that whole range.
pub fn b_extended(i: usize, s: usize, n: usize) -> Result<BigInt> {
    let gauss = q_binomial(n, s)?;
    Ok(gauss.coeff(i) - if i == 0 { BigInt::zero() } else { gauss.coeff(i - 1) })
}

/// Checks `b_{i,s}(n) = b_{i,s}(max(i,1)+s)` for `max(i,1)+s <= n <= n_max`.
pub fn check_b_stability(i: usize, s: usize, n_max: usize) -> Result<Report> {
    let start = i.max(1) + s;
    if s == 0 || n_max < start + 1 {
        return Err(Error::InvalidArgs(format!(
            "stability check for i = {i}, s = {s} needs s >= 1 and n_max >= {}",
            start + 1
        )));
    }
    let stable = b_coeff(i, s, start)?;
    let mut deviations = Vec::new();
    for n in start + 1..=n_max {
        let v = b_coeff(i, s, n)?;
        if v != stable {
            deviations.push(json!({"n": n, "value": big(&v)}));
        }
    }
    Ok(Report::new(
        "b_stability",
        json!({"i": i, "s": s, "n_max": n_max}),
        deviations.is_empty(),
        json!({"stable_value": big(&stable), "from_n": start, "deviations": deviations}),
    ))
}

/// `c_i(n) = sum_k a_{i,k} binom(n-i, k)` with `k <= floor(i/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialExpansion {
    pub i: usize,
    pub coeffs: Vec<BigInt>,
    /// Smallest `n >= 1` from which the expansion agrees with `c_i` through `verified_through`.
    pub holds_from: usize,
    pub verified_through: usize,
}

impl BinomialExpansion {
    pub fn eval(&self, n: usize) -> BigInt {
        let x = n as i64 - self.i as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * binomial_signed(x, k))
            .sum()
    }
}

/// `x(x-1)…(x-k+1)/k!` for any integer `x`.
pub fn binomial_signed(x: i64, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(x - j as i64);
        den *= BigInt::from(j + 1);
    }
    num / den
}

pub fn interpolation_nodes(i: usize) -> Vec<usize> {
    let start = i.max(1);
    (start..=start + i / 2).collect()
}

pub fn verification_limit(i: usize) -> usize {
    3 * i / 2 + 3
}

/// Interpolates `a_{i,·}` at `n = max(i,1) …` over exact rationals, then
/// checks the expansion on every further `n` through `floor(3i/2) + 3`.
pub fn binomial_coeffs(table: &BettiTable, i: usize) -> Result<BinomialExpansion> {
    let limit = verification_limit(i);
    if table.n_max() < limit {
        return Err(Error::InvalidArgs(format!(
            "expansion of c_{i} needs P_n through n = {limit}, table stops at {}",
            table.n_max()
        )));
    }
    let nodes = interpolation_nodes(i);
    let matrix: Vec<Vec<BigRational>> = nodes
        .iter()
        .map(|&n| {
            (0..nodes.len())
                .map(|k| BigRational::from_integer(binomial_signed(n as i64 - i as i64, k)))
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = nodes.iter().map(|&n| BigRational::from_integer(table.c(i, n))).collect();
    let solution = solve_exact(matrix, rhs)?;
    let coeffs = solution
        .into_iter()
        .map(|v| {
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(Error::NonIntegralCoefficient { i, value: v.to_string() })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut exp = BinomialExpansion {
        i,
        coeffs,
        holds_from: nodes[0],
        verified_through: limit,
    };
    for n in nodes[0]..=limit {
        let (expected, actual) = (exp.eval(n), table.c(i, n));
        if expected != actual {
            return Err(Error::VerificationMismatch {
                i,
                n,
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    while exp.holds_from > 1 && exp.eval(exp.holds_from - 1) == table.c(i, exp.holds_from - 1) {
        exp.holds_from -= 1;
    }
    Ok(exp)
}

/// Gauss–Jordan elimination over `Q`; the system must be square and nonsingular.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidArgs("singular interpolation system".into()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Ok(b)
}

/// Reports, for each `i <= i_max`, whether every `a_{i,k}` is non-negative.
pub fn check_conjecture_binomial(table: &BettiTable, i_max: usize) -> Result<Report> {
    let mut expansions = serde_json::Map::new();
    let mut negative = Vec::new();
    for i in 0..=i_max {
        let exp = binomial_coeffs(table, i)?;
        for (k, a) in exp.coeffs.iter().enumerate() {
            if a.is_negative() {
                negative.push(json!({"i": i, "k": k, "value": big(a)}));
            }
        }
        expansions.insert(i.to_string(), big_list(&exp.coeffs));
    }
    Ok(Report::new(
        "binomial_nonnegative",
        json!({"i_max": i_max}),
        negative.is_empty(),
        json!({"expansions": expansions, "negative": negative}),
    ))
}

/// `a_{i,i/2} = 1` for even `i`, `a_{i,(i-1)/2} = (i-1)/2` for odd `i`.
pub fn check_leading(table: &BettiTable, i: usize) -> Result<Report> {
    if i < 2 {
        return Err(Error::InvalidArgs(format!("leading coefficient check needs i >= 2, got {i}")));
    }
    let exp = binomial_coeffs(table, i)?;
    let k = i / 2;
    let expected = if i % 2 == 0 { BigInt::one() } else { BigInt::from(k) };
    let actual = exp.coeffs[k].clone();
    Ok(Report::new(
        "leading_coefficient",
        json!({"i": i}),
        actual == expected,
        json!({"k": k, "expected": big(&expected), "actual": big(&actual)}),
    ))
}

/// Right side of
/// `c_i(n) = sum_{s=1}^{i} sum_{p+q+r=i} b_{p,s}(n) c_{d_s-q}(s) c_r(n-s)`.
pub fn ci_recursion_rhs(table: &BettiTable, i: usize, n: usize) -> Result<BigInt> {
    if i < 1 || n <= i {
        return Err(Error::InvalidArgs(format!("recursion check needs n > i >= 1, got i = {i}, n = {n}")));
    }
    let mut total = BigInt::zero();
    for s in 1..=i {
        let d_s = dim_sl(s) as i64;
        let ratio = f_ratio(n, s)?;
        for p in 0..=i {
            let b = ratio.coeff(p);
            if b.is_zero() {
                continue;
            }
            for q in 0..=i - p {
                let c_s = table.c_signed(d_s - q as i64, s);
                if c_s.is_zero() {
                    continue;
                }
                total += &b * &c_s * table.c(i - p - q, n - s);
            }
        }
    }
    Ok(total)
}

pub fn verify_ci_recursion(table: &BettiTable, i: usize, n: usize) -> Result<Report> {
    let rhs = ci_recursion_rhs(table, i, n)?;
    let lhs = table.c(i, n);
    Ok(Report::new(
        "ci_recursion",
        json!({"i": i, "n": n}),
        lhs == rhs,
        json!({"lhs": big(&lhs), "rhs": big(&rhs)}),
    ))
}

pub const MAX_COMPOSITION_N: usize = 22;

/// Part sizes of the composition of `n` whose cut points are the set bits of `mask`.
fn composition_parts(n: usize, mask: u32) -> impl Iterator<Item = usize> {
    let mut last = 0;
    (1..=n).filter_map(move |pos| {
        if pos == n || mask & (1 << (pos - 1)) != 0 {
            let part = pos - last;
            last = pos;
            Some(part)
        } else {
            None
        }
    })
}

/// Enumerates the `2^{n-1}` compositions of `n` and checks
/// (a) `sum_k (-1)^k k binom(n-1,k) = 0` and
/// (b) `sum_σ (-1)^r (r - k_σ) = 0`, `k_σ` = number of parts greater than 1
/// (for `n >= 4`).
pub fn composition_identity_checks(n: usize) -> Result<Report> {
    if !(3..=MAX_COMPOSITION_N).contains(&n) {
        return Err(Error::InvalidArgs(format!(
            "composition identities are enumerated for 3 <= n <= {MAX_COMPOSITION_N}, got {n}"
        )));
    }
    let mut stirling_enum: i64 = 0;
    let mut c3: i64 = 0;
    let mut count: u64 = 0;
    for mask in 0u32..1 << (n - 1) {
        let (mut r, mut big_parts) = (0i64, 0i64);
        for part in composition_parts(n, mask) {
            r += 1;
            if part > 1 {
                big_parts += 1;
            }
        }
        let k = r - 1;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        stirling_enum += sign * k;
        c3 += -sign * (r - big_parts);
        count += 1;
    }
    let stirling_formula: BigInt = (0..n)
        .map(|k| {
            let term = BigInt::from(k) * binomial_signed(n as i64 - 1, k);
            if k % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum();
    let c3_applies = n >= 4;
    let passed = stirling_enum == 0 && stirling_formula.is_zero() && (!c3_applies || c3 == 0);
    Ok(Report::new(
        "composition_identities",
        json!({"n": n}),
        passed,
        json!({
            "compositions": count,
            "stirling_enumerated": stirling_enum,
            "stirling_formula": big(&stirling_formula),
            "c3_sum": c3,
            "c3_applies": c3_applies,
        }),
    ))
}

pub fn table_json(table: &BettiTable) -> Value {
    json!({
        "i_max": table.i_max(),
        "n_max": table.n_max(),
        "rows": table.rows().iter().map(big_list).collect::<Vec<_>>(),
    })
}
