//! The bivariate series `Ψ(t,u) = 1 + sum_n u^n P_n(t)/f_n(t)`, its flipped
//! companion `Ψ(1/t,u)`, the functional equation tying them together, and the
//! plethystic logarithm `PLog Ψ = sum e(i,n) t^i u^n`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ic_core::{dim_sl, Engine};
use crate::polyring::IntPoly;
use crate::report::{big, Report};
use crate::root_data::GroupType;

/// Exact rational coefficients `[t^i u^n]` for `i <= t_max`, `n <= u_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    t_max: usize,
    u_max: usize,
    coeffs: Vec<Vec<BigRational>>,
}

type Grid = Vec<Vec<BigInt>>;

fn zero_grid(t_max: usize, u_max: usize) -> Grid {
    vec![vec![BigInt::zero(); t_max + 1]; u_max + 1]
}

impl BiSeries {
    pub fn zero(t_max: usize, u_max: usize) -> Self {
        Self {
            t_max,
            u_max,
            coeffs: vec![vec![BigRational::zero(); t_max + 1]; u_max + 1],
        }
    }

    pub fn from_integers(t_max: usize, u_max: usize, grid: &[Vec<BigInt>]) -> Self {
        let mut s = Self::zero(t_max, u_max);
        for (n, row) in grid.iter().enumerate().take(u_max + 1) {
            for (i, v) in row.iter().enumerate().take(t_max + 1) {
                s.coeffs[n][i] = BigRational::from_integer(v.clone());
            }
        }
        s
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn u_max(&self) -> usize {
        self.u_max
    }

    /// `[t^i u^n]`.
    pub fn get(&self, i: usize, n: usize) -> &BigRational {
        &self.coeffs[n][i]
    }

    pub fn set(&mut self, i: usize, n: usize, value: BigRational) {
        self.coeffs[n][i] = value;
    }

    /// The `u^n` slice as a list of `t`-coefficients.
    pub fn u_slice(&self, n: usize) -> &[BigRational] {
        &self.coeffs[n]
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().flatten().all(BigRational::is_integer)
    }

    /// Integer coefficients indexed `[n][i]`, or `None` if any value is fractional.
    pub fn to_integers(&self) -> Option<Vec<Vec<BigInt>>> {
        self.coeffs
            .iter()
            .map(|row| row.iter().map(|v| v.is_integer().then(|| v.to_integer())).collect())
            .collect()
    }

    /// Restriction to smaller caps.
    pub fn truncate(&self, t_max: usize, u_max: usize) -> Self {
        let t_max = t_max.min(self.t_max);
        let u_max = u_max.min(self.u_max);
        Self {
            t_max,
            u_max,
            coeffs: self.coeffs[..=u_max].iter().map(|r| r[..=t_max].to_vec()).collect(),
        }
    }

    /// `u ↦ -u`.
    pub fn negate_u(&self) -> Self {
        let mut out = self.clone();
        for (n, row) in out.coeffs.iter_mut().enumerate() {
            if n % 2 == 1 {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
            }
        }
        out
    }

    /// Truncated product at the smaller of the two caps in each variable.
    pub fn mul(&self, other: &Self) -> Self {
        let t_max = self.t_max.min(other.t_max);
        let u_max = self.u_max.min(other.u_max);
        let mut out = Self::zero(t_max, u_max);
        for n1 in 0..=u_max {
            for n2 in 0..=u_max - n1 {
                for (i1, a) in self.coeffs[n1].iter().enumerate().take(t_max + 1) {
                    if a.is_zero() {
                        continue;
                    }
                    for (i2, b) in other.coeffs[n2].iter().enumerate().take(t_max + 1 - i1) {
                        if !b.is_zero() {
                            out.coeffs[n1 + n2][i1 + i2] += a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// CSV with one row per `t`-degree `i` and one column per `u`-degree `n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i");
        for n in 0..=self.u_max {
            write!(out, ",{n}").unwrap();
        }
        out.push('\n');
        for i in 0..=self.t_max {
            write!(out, "{i}").unwrap();
            for n in 0..=self.u_max {
                write!(out, ",{}", self.coeffs[n][i]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// `{"t_max", "u_max", "rows"}` with `rows[i][n]`; fractional entries are strings.
    pub fn to_json(&self) -> Value {
        let cell = |v: &BigRational| {
            if v.is_integer() {
                big(&v.to_integer())
            } else {
                Value::String(v.to_string())
            }
        };
        let rows: Vec<Value> = (0..=self.t_max)
            .map(|i| Value::Array((0..=self.u_max).map(|n| cell(&self.coeffs[n][i])).collect()))
            .collect();
        json!({"t_max": self.t_max, "u_max": self.u_max, "rows": rows})
    }
}

fn grid_mul(a: &Grid, b: &Grid, t_max: usize, u_max: usize) -> Grid {
    let mut out = zero_grid(t_max, u_max);
    for n1 in 0..=u_max {
        for n2 in 0..=u_max - n1 {
            for (i1, x) in a[n1].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (i2, y) in b[n2].iter().enumerate().take(t_max + 1 - i1) {
                    if !y.is_zero() {
                        out[n1 + n2][i1 + i2] += x * y;
                    }
                }
            }
        }
    }
    out
}

fn slice_coeffs(poly: &IntPoly, t_max: usize) -> Vec<BigInt> {
    (0..=t_max).map(|i| poly.coeff(i)).collect()
}

/// Builds `u^0 = 1` plus `u^n` slices from `slice(n)` for `1 <= n <= u_max`, in parallel.
fn build_grid<F>(engine: &Engine, t_max: usize, u_max: usize, slice: F) -> Result<Grid>
where
    F: Fn(usize) -> Result<Vec<BigInt>> + Sync + Send,
{
    if u_max >= 1 {
        engine.sl(u_max)?;
    }
    let mut grid = vec![slice_coeffs(&IntPoly::one(), t_max)];
    let rest: Vec<Vec<BigInt>> = (1..=u_max).into_par_iter().map(slice).collect::<Result<_>>()?;
    grid.extend(rest);
    Ok(grid)
}

fn psi_grid(engine: &Engine, t_max: usize, u_max: usize) -> Result<Grid> {
    build_grid(engine, t_max, u_max, |n| {
        let series = engine.equivariant_series(&GroupType::sl(n)?, t_max)?;
        Ok(slice_coeffs(series.poly(), t_max))
    })
}

fn psi_flipped_grid(engine: &Engine, t_max: usize, u_max: usize) -> Result<Grid> {
    build_grid(engine, t_max, u_max, |m| {
        let g = GroupType::sl(m)?;
        let flipped = engine.sl(m)?.reverse(dim_sl(m))?;
        let series = g.f_poly().series_inverse(t_max)?.mul_poly(&flipped);
        let poly = if m % 2 == 1 { series.into_poly() } else { -series.into_poly() };
        Ok(slice_coeffs(&poly, t_max))
    })
}

/// `Ψ(t,u)` through `t^{t_max} u^{u_max}`.
pub fn psi(engine: &Engine, t_max: usize, u_max: usize) -> Result<BiSeries> {
    Ok(BiSeries::from_integers(t_max, u_max, &psi_grid(engine, t_max, u_max)?))
}

/// `Ψ(1/t,u)` with `[u^m] = (-1)^{m-1} t^{d_m} P_m(1/t) / f_m(t)`, a power series in `t`.
pub fn psi_flipped(engine: &Engine, t_max: usize, u_max: usize) -> Result<BiSeries> {
    Ok(BiSeries::from_integers(t_max, u_max, &psi_flipped_grid(engine, t_max, u_max)?))
}

const WITNESS_LIMIT: usize = 20;

/// Checks `Ψ(1/t,u) · Ψ(t,-u) = 1` coefficient by coefficient within the caps.
pub fn check_functional_equation(engine: &Engine, t_max: usize, u_max: usize) -> Result<Report> {
    let flipped = psi_flipped_grid(engine, t_max, u_max)?;
    let mut negated = psi_grid(engine, t_max, u_max)?;
    for row in negated.iter_mut().skip(1).step_by(2) {
        for v in row.iter_mut() {
            *v = -&*v;
        }
    }
    let product = grid_mul(&flipped, &negated, t_max, u_max);
    let mut offenders = Vec::new();
    let mut count = 0usize;
    for (n, row) in product.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            let expected = if i == 0 && n == 0 { BigInt::one() } else { BigInt::zero() };
            if *v != expected {
                count += 1;
                if offenders.len() < WITNESS_LIMIT {
                    offenders.push(json!({"i": i, "n": n, "value": big(v)}));
                }
            }
        }
    }
    Ok(Report::new(
        "functional_equation",
        json!({"t_max": t_max, "u_max": u_max}),
        count == 0,
        json!({"coefficients_checked": (t_max + 1) * (u_max + 1), "mismatches": count, "offenders": offenders}),
    ))
}

/// Möbius function by trial division.
pub fn mobius(mut k: u64) -> i64 {
    assert!(k >= 1, "mobius(0) is undefined");
    let mut result = 1;
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            k /= p;
            if k % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if k > 1 {
        result = -result;
    }
    result
}

/// `PLog` of an integral series with constant term 1 and no pure-`t` terms:
/// `sum_k μ(k)/k · log Φ(t^k, u^k)` with `log(1+x) = sum_j (-1)^{j+1} x^j / j`.
pub fn plog_of(series: &BiSeries) -> Result<BiSeries> {
    let (t_max, u_max) = (series.t_max, series.u_max);
    let mut x = series
        .to_integers()
        .ok_or_else(|| Error::InvalidArgs("plethystic logarithm needs integer coefficients".into()))?;
    if !x[0][0].is_one() || x[0].iter().skip(1).any(|v| !v.is_zero()) {
        return Err(Error::InvalidArgs("series must be 1 + O(u)".into()));
    }
    x[0][0] = BigInt::zero();

    let mut log = BiSeries::zero(t_max, u_max);
    let mut power = x.clone();
    for j in 1..=u_max {
        let weight = BigRational::new(if j % 2 == 1 { BigInt::one() } else { -BigInt::one() }, BigInt::from(j));
        for (n, row) in power.iter().enumerate().skip(j) {
            for (i, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    log.coeffs[n][i] += &weight * BigRational::from_integer(v.clone());
                }
            }
        }
        if j < u_max {
            power = grid_mul(&power, &x, t_max, u_max);
        }
    }

    let mut out = BiSeries::zero(t_max, u_max);
    for n in 1..=u_max {
        for i in 0..=t_max {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if n % k != 0 || i % k != 0 {
                    continue;
                }
                let mu = mobius(k as u64);
                if mu == 0 {
                    continue;
                }
                let l = &log.coeffs[n / k][i / k];
                if !l.is_zero() {
                    acc += l * BigRational::new(BigInt::from(mu), BigInt::from(k));
                }
            }
            if !acc.is_integer() {
                return Err(Error::NonIntegralPLog { i, n, value: acc.to_string() });
            }
            out.coeffs[n][i] = acc;
        }
    }
    Ok(out)
}

/// `e(i,n)` with `Ψ = prod (1 - t^i u^n)^{-e(i,n)}`, within the caps.
pub fn plog(engine: &Engine, t_max: usize, u_max: usize) -> Result<BiSeries> {
    if t_max < 1 || u_max < 1 {
        return Err(Error::InvalidArgs(format!("plog needs t_max, u_max >= 1, got {t_max}, {u_max}")));
    }
    plog_of(&psi(engine, t_max, u_max)?)
}

/// `prod_{n >= 1, i >= 0} (1 - t^i u^n)^{-e(i,n)}` within the caps of `e`.
pub fn reexponentiate(e: &BiSeries) -> Result<BiSeries> {
    let (t_max, u_max) = (e.t_max, e.u_max);
    let exps = e
        .to_integers()
        .ok_or_else(|| Error::InvalidArgs("exponents must be integers".into()))?;
    let mut acc = zero_grid(t_max, u_max);
    acc[0][0] = BigInt::one();
    for n in 1..=u_max {
        for i in 0..=t_max {
            let ex = &exps[n][i];
            if ex.is_zero() {
                continue;
            }
            // (1 - z)^{-e} = sum_m binom(e+m-1, m) z^m
            let mut factor = Vec::new();
            let mut c = BigInt::one();
            for m in 1.. {
                if n * m > u_max || i * m > t_max {
                    break;
                }
                c = (c * (ex + BigInt::from(m - 1))).div_floor(&BigInt::from(m));
                factor.push((m, c.clone()));
            }
            let mut next = acc.clone();
            for (m, cm) in &factor {
                let (dn, di) = (n * m, i * m);
                for n0 in 0..=u_max - dn {
                    for i0 in 0..=t_max - di {
                        let a = &acc[n0][i0];
                        if !a.is_zero() {
                            next[n0 + dn][i0 + di] += cm * a;
                        }
                    }
                }
            }
            acc = next;
        }
    }
    Ok(BiSeries::from_integers(t_max, u_max, &acc))
}

/// Non-negativity of `e(i,n)` and of the low coefficients of
/// `Q_n = f_n · (sum_i e(i,n) t^i) / t^2` for `2 <= n <= u_max`.
pub fn check_plog_conjectures(engine: &Engine, t_max: usize, u_max: usize) -> Result<Report> {
    if t_max < 2 || u_max < 2 {
        return Err(Error::InvalidArgs(format!("PLog checks need t_max, u_max >= 2, got {t_max}, {u_max}")));
    }
    let e = plog(engine, t_max, u_max)?;
    let grid = e.to_integers().expect("plog output is integral");
    plog_report(&grid, t_max, u_max)
}

fn plog_report(grid: &Grid, t_max: usize, u_max: usize) -> Result<Report> {
    let mut negative = Vec::new();
    for (n, row) in grid.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            if v.is_negative() {
                negative.push(json!({"i": i, "n": n, "value": big(v)}));
            }
        }
    }
    let mut not_divisible = Vec::new();
    let mut q_negative = Vec::new();
    let mut q_prefix = serde_json::Map::new();
    for n in 2..=u_max {
        let e_n = IntPoly::from_coeffs(grid[n].iter().cloned());
        let r = GroupType::sl(n)?.f_poly().mul_truncated(&e_n, t_max);
        if !r.coeff(0).is_zero() || !r.coeff(1).is_zero() {
            not_divisible.push(json!({"n": n, "c0": big(&r.coeff(0)), "c1": big(&r.coeff(1))}));
        }
        let q: Vec<BigInt> = (2..=t_max).map(|j| r.coeff(j)).collect();
        for (j, v) in q.iter().enumerate() {
            if v.is_negative() {
                q_negative.push(json!({"n": n, "degree": j, "value": big(v)}));
            }
        }
        q_prefix.insert(n.to_string(), Value::Array(q.iter().take(8).map(big).collect()));
    }
    let beyond_known: Vec<Value> = q_negative
        .iter()
        .chain(&not_divisible)
        .filter(|w| w["n"].as_u64().is_some_and(|n| n > 7))
        .cloned()
        .collect();
    let passed = negative.is_empty() && not_divisible.is_empty() && q_negative.is_empty();
    Ok(Report::new(
        "plog_nonnegative",
        json!({"t_max": t_max, "u_max": u_max}),
        passed,
        json!({
            "negative_e": negative,
            "not_divisible_by_t2": not_divisible,
            "negative_q": q_negative,
            "q_checked_through_degree": t_max - 2,
            "q_low_coefficients": q_prefix,
            "failures_beyond_n7": beyond_known,
            "note": "Q_n is checked only through degree t_max - 2; polynomiality is not certified by a truncation",
        }),
    ))
}

/// Re-exponentiates `PLog Ψ` and compares with `Ψ` within the caps.
pub fn check_plog_roundtrip(engine: &Engine, t_max: usize, u_max: usize) -> Result<Report> {
    let psi_series = psi(engine, t_max, u_max)?;
    let e = plog_of(&psi_series)?;
    let back = reexponentiate(&e)?;
    let mut offenders = Vec::new();
    for n in 0..=u_max {
        for i in 0..=t_max {
            if back.get(i, n) != psi_series.get(i, n) && offenders.len() < WITNESS_LIMIT {
                offenders.push(json!({"i": i, "n": n, "psi": psi_series.get(i, n).to_string(), "rebuilt": back.get(i, n).to_string()}));
            }
        }
    }
    Ok(Report::new(
        "plog_roundtrip",
        json!({"t_max": t_max, "u_max": u_max}),
        offenders.is_empty(),
        json!({"offenders": offenders}),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn psi_examples() {
        let e = Engine::new();
        let s = psi(&e, 6, 10).unwrap();
        assert_eq!(*s.get(2, 2), q(1));
        for n in 2..=10 {
            assert_eq!(*s.get(2, n), q(n as i64 - 1), "n = {n}");
        }
        for n in 0..=10 {
            assert_eq!(*s.get(0, n), q(1));
        }
        assert_eq!(*s.get(1, 0), q(0));
    }

    #[test]
    fn psi_coefficients_are_non_negative_integers() {
        let s = psi(&Engine::new(), 25, 10).unwrap();
        assert!(s.is_integral());
        for n in 0..=10 {
            assert!(s.u_slice(n).iter().all(|v| !v.is_negative()));
        }
    }

    #[test]
    fn psi_flipped_examples() {
        let e = Engine::new();
        let s = psi_flipped(&e, 10, 6).unwrap();
        assert_eq!(*s.get(0, 1), q(1));
        for i in 1..=10 {
            assert_eq!(*s.get(i, 1), q(0));
        }
        for i in 0..=10 {
            let expected = if i >= 2 && i % 2 == 0 { -1 } else { 0 };
            assert_eq!(*s.get(i, 2), q(expected), "i = {i}");
        }
        for m in 2..=6 {
            assert_eq!(*s.get(0, m), q(0));
        }
    }

    #[test]
    fn functional_equation_low_orders() {
        let e = Engine::new();
        let flipped = psi_flipped(&e, 12, 2).unwrap();
        let product = flipped.mul(&psi(&e, 12, 2).unwrap().negate_u());
        for n in 0..=2 {
            for i in 0..=12 {
                let expected = if (i, n) == (0, 0) { 1 } else { 0 };
                assert_eq!(*product.get(i, n), q(expected));
            }
        }
        let r = check_functional_equation(&e, 20, 7).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn functional_equation_detects_corruption() {
        // Ψ(t,u)·Ψ(t,-u) has [t^2 u^2] = 2.
        let e = Engine::new();
        let s = psi(&e, 4, 3).unwrap();
        let product = s.mul(&s.negate_u());
        assert_ne!(*product.get(2, 2), q(0));
    }

    #[test]
    fn plog_examples() {
        let e = Engine::new();
        let p = plog(&e, 12, 8).unwrap();
        assert_eq!(*p.get(0, 1), q(1));
        for i in 1..=12 {
            assert_eq!(*p.get(i, 1), q(0));
        }
        assert_eq!(*p.get(2, 2), q(1));
        assert_eq!(*p.get(3, 2), q(0));
        assert_eq!(*p.get(4, 2), q(1));
        for i in 0..=12 {
            let expected = if i >= 2 && i % 2 == 0 { 1 } else { 0 };
            assert_eq!(*p.get(i, 2), q(expected));
        }
        for n in 2..=8 {
            assert_eq!(*p.get(0, n), q(0));
            assert_eq!(*p.get(1, n), q(0));
        }
        assert!(plog(&e, 0, 3).is_err());
    }

    #[test]
    fn plog_conjecture_report() {
        let e = Engine::new();
        let r = check_plog_conjectures(&e, 14, 8).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.witness["q_low_coefficients"]["2"], json!([1, 0, 0, 0, 0, 0, 0, 0]));
        assert_eq!(r.witness["q_checked_through_degree"], json!(12));
        assert!(check_plog_conjectures(&e, 1, 8).is_err());
    }

    #[test]
    fn plog_report_flags_findings() {
        let mut grid = zero_grid(4, 9);
        grid[1][0] = BigInt::one();
        grid[9][3] = BigInt::from(-2);
        let r = plog_report(&grid, 4, 9).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witness["negative_e"][0]["n"], json!(9));
        assert!(!r.witness["failures_beyond_n7"].as_array().unwrap().is_empty());
    }

    #[test]
    fn plog_roundtrip() {
        let r = check_plog_roundtrip(&Engine::new(), 16, 9).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0];
        for (k, mu) in expected.iter().enumerate() {
            assert_eq!(mobius(k as u64 + 1), *mu, "k = {}", k + 1);
        }
    }

    #[test]
    fn truncation_is_monotone() {
        let e = Engine::new();
        let big_psi = psi(&e, 20, 8).unwrap();
        assert_eq!(psi(&e, 10, 5).unwrap(), big_psi.truncate(10, 5));
        let big_plog = plog(&e, 20, 8).unwrap();
        assert_eq!(plog(&e, 10, 5).unwrap(), big_plog.truncate(10, 5));
        assert_eq!(psi_flipped(&e, 9, 4).unwrap(), psi_flipped(&e, 15, 7).unwrap().truncate(9, 4));
    }

    #[test]
    fn emitters() {
        let s = psi(&Engine::new(), 2, 3).unwrap();
        assert_eq!(s.to_csv(), "i,0,1,2,3\n0,1,1,1,1\n1,0,0,0,0\n2,0,0,1,2\n");
        assert_eq!(s.to_json(), json!({"t_max": 2, "u_max": 3, "rows": [[1,1,1,1],[0,0,0,0],[0,0,1,2]]}));
        let mut frac = BiSeries::zero(0, 0);
        frac.set(0, 0, BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(frac.to_json()["rows"][0][0], json!("1/2"));
        assert!(plog_of(&frac).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn plog_inverts_euler_products(
            exps in proptest::collection::vec(-3i64..6, 7 * 4),
        ) {
            let (t_max, u_max) = (6, 4);
            let mut e = BiSeries::zero(t_max, u_max);
            for n in 1..=u_max {
                for i in 0..=t_max {
                    e.set(i, n, q(exps[(n - 1) * (t_max + 1) + i]));
                }
            }
            let product = reexponentiate(&e).unwrap();
            prop_assert!(product.is_integral());
            prop_assert_eq!(plog_of(&product).unwrap(), e);
        }
    }
}
