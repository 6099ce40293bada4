//! Verification suites that bundle the individual checks into report streams.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::betti::{self, BettiTable};
use crate::error::{Error, Result};
use crate::genfun;
use crate::ic_core::{truncation_bound, Engine, EngineOptions};
use crate::report::{big, big_list, Report};
use crate::root_data::{Family, GroupType, SimpleType};

/// Reference expansions `c_i(n) = sum_k a_{i,k} binom(n-i,k)` for `i <= 9`.
pub const REFERENCE_BINOMIAL: [&[i64]; 10] = [
    &[1],
    &[0],
    &[0, 1],
    &[0, 1],
    &[0, 2, 1],
    &[1, 4, 2],
    &[6, 9, 5, 1],
    &[15, 20, 12, 3],
    &[50, 53, 30, 9, 1],
    &[123, 125, 73, 25, 4],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Functional,
    Plog,
    Betti,
    Identities,
    Cross,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["all", "functional", "plog", "betti", "identities", "cross"];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "functional" => Suite::Functional,
            "plog" => Suite::Plog,
            "betti" => Suite::Betti,
            "identities" => Suite::Identities,
            "cross" => Suite::Cross,
            other => return Err(Error::InvalidArgs(format!("unknown suite '{other}'"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::All, Suite::Functional, Suite::Plog, Suite::Betti, Suite::Identities, Suite::Cross]
            .iter()
            .position(|s| s == self)
            .unwrap();
        f.write_str(Suite::NAMES[i])
    }
}

/// Sizes of every suite; the defaults are the full acceptance windows.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub cross_n_max: usize,
    pub invariant_rank_max: usize,
    pub invariant_a_rank_max: usize,
    pub equivariant_n_max: usize,
    pub t_max: usize,
    pub u_max: usize,
    pub plog_t_max: usize,
    pub plog_u_max: usize,
    pub betti_i_max: usize,
    pub leading_i_max: usize,
    pub betti_n_max: usize,
    pub stability_i_max: usize,
    pub stability_s_max: usize,
    pub stability_n_max: usize,
    pub recursion_i_max: usize,
    pub recursion_n_max: usize,
    pub identities_n_min: usize,
    pub identities_n_max: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            cross_n_max: 9,
            invariant_rank_max: 6,
            invariant_a_rank_max: 12,
            equivariant_n_max: 12,
            t_max: 40,
            u_max: 12,
            plog_t_max: 30,
            plog_u_max: 20,
            betti_i_max: 9,
            leading_i_max: 12,
            betti_n_max: 21,
            stability_i_max: 10,
            stability_s_max: 6,
            stability_n_max: 20,
            recursion_i_max: 8,
            recursion_n_max: 14,
            identities_n_min: 4,
            identities_n_max: 18,
        }
    }
}

pub fn run_suite(engine: &Engine, suite: Suite, params: &VerifyParams) -> Result<Vec<Report>> {
    match suite {
        Suite::All => {
            let mut out = Vec::new();
            for s in [Suite::Cross, Suite::Functional, Suite::Plog, Suite::Betti, Suite::Identities] {
                out.extend(run_suite(engine, s, params)?);
            }
            Ok(out)
        }
        Suite::Cross => cross_suite(engine, params),
        Suite::Functional => Ok(vec![genfun::check_functional_equation(engine, params.t_max, params.u_max)?]),
        Suite::Plog => Ok(vec![
            genfun::check_plog_conjectures(engine, params.plog_t_max, params.plog_u_max)?,
            genfun::check_plog_roundtrip(engine, params.plog_t_max, params.plog_u_max)?,
        ]),
        Suite::Betti => betti_suite(engine, params),
        Suite::Identities => (params.identities_n_min..=params.identities_n_max)
            .map(betti::composition_identity_checks)
            .collect(),
    }
}

/// Subset recursion against the type-A recursion for `SL_n`, `n <= n_max`.
pub fn cross_oracle(engine: &Engine, n: usize) -> Result<Report> {
    let generic = Engine::with_options(EngineOptions {
        type_a_fast_path: false,
        ..engine.options()
    });
    let fast = engine.ic_poincare_a_fast(n)?;
    let general = generic.sl(n)?;
    let compositions_agree = if n >= 2 {
        let subset_d = generic.difference_poly(SimpleType::sl(n)?)?;
        engine.difference_poly_by_compositions(n)? == subset_d && engine.difference_poly_sl(n)? == subset_d
    } else {
        true
    };
    Ok(Report::new(
        "cross_oracle",
        json!({"n": n}),
        fast == general && compositions_agree,
        json!({
            "fast": big_list(&fast.to_dense()),
            "subsets": big_list(&general.to_dense()),
            "difference_forms_agree": compositions_agree,
        }),
    ))
}

/// Antisymmetry and midpoint vanishing of `D`, plus the shape of `P`.
pub fn difference_invariants(engine: &Engine, t: SimpleType) -> Result<Report> {
    let d = t.dim_x();
    let diff = engine.difference_poly(t)?;
    let p = engine.ic_poincare_simple(t)?;
    let antisymmetric = diff.reverse(d)? == -&diff;
    let midpoint = if d % 2 == 0 { diff.coeff(d / 2) } else { BigInt::zero() };
    let degree_ok = p.degree().is_some_and(|deg| deg <= truncation_bound(d));
    let constant_ok = p.coeff(0).is_one();
    Ok(Report::new(
        "difference_invariants",
        json!({"group": t.to_string(), "d": d}),
        antisymmetric && midpoint.is_zero() && degree_ok && constant_ok,
        json!({
            "antisymmetric": antisymmetric,
            "midpoint_coefficient": big(&midpoint),
            "degree_below_half": degree_ok,
            "constant_term_one": constant_ok,
            "poincare": big_list(&p.to_dense()),
        }),
    ))
}

/// `[t^2] P_n/f_n = n-1` and `[t^3] P_n/f_n = n-2`.
pub fn equivariant_low_terms(engine: &Engine, n: usize) -> Result<Report> {
    let series = engine.equivariant_series(&GroupType::sl(n)?, 3)?;
    let (c2, c3) = (series.coeff(2)?, series.coeff(3)?);
    let passed = c2 == BigInt::from(n as i64 - 1) && c3 == BigInt::from(n as i64 - 2);
    Ok(Report::new(
        "equivariant_low_terms",
        json!({"n": n}),
        passed,
        json!({"t2": big(&c2), "t3": big(&c3)}),
    ))
}

/// Every simple type of rank `<= rank_max`, `A_r` for `r <= a_rank_max`,
/// and `E6`, `E7`, `F4`, without repeats.
pub fn invariant_types(rank_max: usize, a_rank_max: usize) -> Result<Vec<SimpleType>> {
    let mut types = SimpleType::all_up_to_rank(rank_max);
    for r in 1..=a_rank_max {
        types.push(SimpleType::new(Family::A, r)?);
    }
    types.push(SimpleType::new(Family::E, 6)?);
    types.push(SimpleType::new(Family::E, 7)?);
    types.push(SimpleType::new(Family::F, 4)?);
    types.sort();
    types.dedup();
    Ok(types)
}

fn cross_suite(engine: &Engine, params: &VerifyParams) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for n in 1..=params.cross_n_max {
        out.push(cross_oracle(engine, n)?);
    }
    for t in invariant_types(params.invariant_rank_max, params.invariant_a_rank_max)? {
        out.push(difference_invariants(engine, t)?);
    }
    for n in 3..=params.equivariant_n_max {
        out.push(equivariant_low_terms(engine, n)?);
    }
    Ok(out)
}

/// `c_i(n)` against the reference expansion for `max(i,1) <= n <= n_max`.
pub fn closed_form_check(table: &BettiTable, i: usize) -> Result<Report> {
    let reference = REFERENCE_BINOMIAL
        .get(i)
        .ok_or_else(|| Error::InvalidArgs(format!("no reference expansion for i = {i}")))?;
    let mut mismatches = Vec::new();
    for n in i.max(1)..=table.n_max() {
        let expected: BigInt = reference
            .iter()
            .enumerate()
            .map(|(k, &a)| BigInt::from(a) * betti::binomial_signed(n as i64 - i as i64, k))
            .sum();
        let actual = table.c(i, n);
        if expected != actual {
            mismatches.push(json!({"n": n, "expected": big(&expected), "actual": big(&actual)}));
        }
    }
    Ok(Report::new(
        "betti_closed_form",
        json!({"i": i, "n_max": table.n_max()}),
        mismatches.is_empty(),
        json!({"mismatches": mismatches}),
    ))
}

/// Interpolated `a_{i,·}` against the reference list.
pub fn expansion_check(table: &BettiTable, i: usize) -> Result<Report> {
    let exp = betti::binomial_coeffs(table, i)?;
    let reference: Vec<BigInt> = REFERENCE_BINOMIAL[i].iter().map(|&a| BigInt::from(a)).collect();
    Ok(Report::new(
        "binomial_expansion",
        json!({"i": i}),
        exp.coeffs == reference,
        json!({
            "computed": big_list(&exp.coeffs),
            "reference": big_list(&reference),
            "holds_from": exp.holds_from,
            "verified_through": exp.verified_through,
        }),
    ))
}

fn betti_suite(engine: &Engine, params: &VerifyParams) -> Result<Vec<Report>> {
    let n_max = params
        .betti_n_max
        .max(betti::verification_limit(params.leading_i_max.max(params.betti_i_max)))
        .max(params.recursion_n_max);
    let table = betti::c_table(engine, params.leading_i_max.max(params.betti_i_max).max(1), n_max)?;
    let mut out = Vec::new();
    for i in 0..=params.betti_i_max.min(REFERENCE_BINOMIAL.len() - 1) {
        out.push(closed_form_check(&table, i)?);
        out.push(expansion_check(&table, i)?);
    }
    out.push(betti::check_conjecture_binomial(&table, params.leading_i_max.max(params.betti_i_max))?);
    for i in 2..=params.leading_i_max {
        out.push(betti::check_leading(&table, i)?);
    }
    for i in 0..=params.stability_i_max {
        for s in 1..=params.stability_s_max {
            if params.stability_n_max > i.max(1) + s {
                out.push(betti::check_b_stability(i, s, params.stability_n_max)?);
            }
        }
    }
    for i in 1..=params.recursion_i_max {
        for n in i + 1..=params.recursion_n_max {
            out.push(betti::verify_ci_recursion(&table, i, n)?);
        }
    }
    Ok(out)
}
