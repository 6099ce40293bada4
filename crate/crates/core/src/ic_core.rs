//! Intersection cohomology Poincaré polynomials `P_G(t)`.
//!
//! For a simple type `T` with diagram nodes `Δ`, the difference polynomial
//!
//! ```text
//! D_T(t) = P_T(t) - t^d P_T(1/t) = sum over nonempty S ⊆ Δ of (f_T / f_{G_S}) · t^{d_S} P_{G_S}(1/t)
//! ```
//!
//! determines `P_T` by truncation, because `deg P_T < d/2`. Type `A_{n-1}`
//! additionally has an `O(n)` form,
//!
//! ```text
//! D_n(t) = sum_{s=1}^{n-1} (f_n / (f_s f_{n-s})) · t^{d_s} P_s(1/t) · P_{n-s}(t),
//! ```
//!
//! used by default. Products of simple factors multiply.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polyring::{f_ratio, IntPoly, TruncSeries};
use crate::root_data::{compositions, levi_subtype, Family, GroupType, NodeSet, SimpleType};

/// Largest degree `P_G` may have: `ceil(d/2) - 1`, i.e. the strict bound `deg < d/2`.
pub fn truncation_bound(d: usize) -> usize {
    d.div_ceil(2).saturating_sub(1)
}

/// `d_n = dim X_{SL_n} = n(n+1)/2 - 1`.
pub fn dim_sl(n: usize) -> usize {
    (n * (n + 1) / 2).saturating_sub(1)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

/// Memo table from canonical group keys to `P` values.
///
/// Entries are write-once: a second insert for a present key is ignored.
#[derive(Debug, Default)]
pub struct MemoCache {
    table: RwLock<HashMap<GroupType, IntPoly>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl MemoCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &GroupType) -> Option<IntPoly> {
        let found = self.table.read().expect("memo cache poisoned").get(key).cloned();
        let counter = if found.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    pub fn insert(&self, key: GroupType, value: IntPoly) {
        self.table
            .write()
            .expect("memo cache poisoned")
            .entry(key)
            .or_insert(value);
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("memo cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            entries: self.len(),
        }
    }

    /// All entries, sorted by key.
    pub fn snapshot(&self) -> Vec<(GroupType, IntPoly)> {
        let mut out: Vec<_> = self
            .table
            .read()
            .expect("memo cache poisoned")
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn preload(&self, entries: impl IntoIterator<Item = (GroupType, IntPoly)>) {
        let mut table = self.table.write().expect("memo cache poisoned");
        for (k, v) in entries {
            table.entry(k).or_insert(v);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Compute type `A` through the `O(n)` recursion instead of the subset sum.
    pub type_a_fast_path: bool,
    /// Evaluate subset sums as a parallel reduction.
    pub parallel: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            type_a_fast_path: true,
            parallel: true,
        }
    }
}

#[derive(Debug, Default)]
pub struct Engine {
    options: EngineOptions,
    cache: MemoCache,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_options(options: EngineOptions) -> Self {
        Self {
            options,
            cache: MemoCache::new(),
        }
    }

    pub fn options(&self) -> EngineOptions {
        self.options
    }

    pub fn cache(&self) -> &MemoCache {
        &self.cache
    }

    /// `P_G(t)` for any semisimple group; multiplicative over simple factors.
    pub fn ic_poincare(&self, g: &GroupType) -> Result<IntPoly> {
        let mut acc = IntPoly::one();
        for &t in g.factors() {
            acc = &acc * &self.ic_poincare_simple(t)?;
        }
        Ok(acc)
    }

    /// `P_n(t) = P_{SL_n}(t)` for `n >= 1`.
    pub fn sl(&self, n: usize) -> Result<IntPoly> {
        self.ic_poincare(&GroupType::sl(n)?)
    }

    pub fn ic_poincare_simple(&self, t: SimpleType) -> Result<IntPoly> {
        let key = GroupType::simple(t);
        if let Some(p) = self.cache.get(&key) {
            return Ok(p);
        }
        let diff = if self.options.type_a_fast_path && t.family() == Family::A {
            self.difference_poly_sl(t.rank() + 1)?
        } else {
            self.difference_poly(t)?
        };
        let p = poincare_from_difference(&key, &diff, t.dim_x())?;
        self.cache.insert(key, p.clone());
        Ok(p)
    }

    /// `P_n` through the type-A recursion at the top level (sub-results come from
    /// [`Engine::ic_poincare`]). Not written to the cache.
    pub fn ic_poincare_a_fast(&self, n: usize) -> Result<IntPoly> {
        if n == 0 {
            return Err(Error::InvalidArgs("SL_0".into()));
        }
        if n == 1 {
            return Ok(IntPoly::one());
        }
        let diff = self.difference_poly_sl(n)?;
        poincare_from_difference(&GroupType::sl(n)?, &diff, dim_sl(n))
    }

    /// `D_T` as the sum over nonempty node subsets `S` (increasing mask order).
    pub fn difference_poly(&self, t: SimpleType) -> Result<IntPoly> {
        let f_t = t.f_poly();
        let full = t.all_nodes().mask();
        let term = |mask: u32| self.subset_term(t, &f_t, NodeSet::from_mask(mask));
        let terms: Vec<IntPoly> = if self.options.parallel {
            (1..=full).into_par_iter().map(term).collect::<Result<_>>()?
        } else {
            (1..=full).map(term).collect::<Result<_>>()?
        };
        Ok(terms.into_iter().sum())
    }

    /// `(f_T / f_{G_S}) · t^{d_S} P_{G_S}(1/t)`.
    fn subset_term(&self, t: SimpleType, f_t: &IntPoly, s: NodeSet) -> Result<IntPoly> {
        let compute = || -> Result<IntPoly> {
            let levi = levi_subtype(t, s)?;
            let ratio = f_t.exact_div(&levi.f_poly())?;
            let p = self.ic_poincare(&levi)?;
            Ok(&ratio * &p.reverse(levi.dim_x())?)
        };
        compute().map_err(|e| Error::Recursion {
            group: t.to_string(),
            subset: s.to_string(),
            source: Box::new(e),
        })
    }

    /// `D_n` through the `O(n)` type-A form.
    pub fn difference_poly_sl(&self, n: usize) -> Result<IntPoly> {
        let mut acc = IntPoly::zero();
        for s in 1..n {
            let ratio = f_ratio(n, s)?;
            let flipped = self.sl(s)?.reverse(dim_sl(s))?;
            let term = &(&ratio * &flipped) * &self.sl(n - s)?;
            acc += &term;
        }
        Ok(acc)
    }

    /// `D_n` as a sum over compositions `σ` of `n` with at least two parts of
    /// `(f_n / prod f_{σ_i}) · prod t^{d_{σ_i}} P_{σ_i}(1/t)`.
    pub fn difference_poly_by_compositions(&self, n: usize) -> Result<IntPoly> {
        let f_n = GroupType::sl(n)?.f_poly();
        let mut acc = IntPoly::zero();
        for sigma in compositions(n).filter(|c| c.len() >= 2) {
            let mut denom = IntPoly::one();
            let mut flipped = IntPoly::one();
            for &part in &sigma {
                denom = &denom * &GroupType::sl(part)?.f_poly();
                flipped = &flipped * &self.sl(part)?.reverse(dim_sl(part))?;
            }
            acc += &(&f_n.exact_div(&denom)? * &flipped);
        }
        Ok(acc)
    }

    /// `P_G / f_G` through degree `precision`.
    pub fn equivariant_series(&self, g: &GroupType, precision: usize) -> Result<TruncSeries> {
        let p = self.ic_poincare(g)?;
        let inv = g.f_poly().series_inverse(precision)?;
        Ok(inv.mul_poly(&p))
    }

    /// `sum over all S ⊆ Δ (including ∅) of t^{d_S} P_{G_S}(1/t) / f_{G_S}` through `precision`.
    pub fn recursion_rhs(&self, t: SimpleType, precision: usize) -> Result<TruncSeries> {
        let mut acc = TruncSeries::new(IntPoly::zero(), precision);
        for s in t.all_nodes().subsets() {
            let levi = levi_subtype(t, s)?;
            let flipped = self.ic_poincare(&levi)?.reverse(levi.dim_x())?;
            let term = levi.f_poly().series_inverse(precision)?.mul_poly(&flipped);
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

/// Recovers `P` from `D = P - t^d P(1/t)` and confirms the split is exact
/// and that `P(0) = 1`.
fn poincare_from_difference(group: &GroupType, diff: &IntPoly, d: usize) -> Result<IntPoly> {
    let p = diff.truncate(truncation_bound(d));
    let rebuilt = &p - &p.reverse(d)?;
    if &rebuilt != diff {
        return Err(Error::InconsistentDifference {
            group: group.to_string(),
        });
    }
    if !p.coeff(0).is_one() {
        return Err(Error::ConstantTerm {
            group: group.to_string(),
            value: p.coeff(0).to_string(),
        });
    }
    Ok(p)
}

/// `F_q`-point count of the orbit `O_S` as a polynomial in `q`:
/// `(-1)^{|S|} f_T(q) / f_{G_S}(q)`.
pub fn orbit_point_count(t: SimpleType, s: NodeSet) -> Result<IntPoly> {
    let levi = levi_subtype(t, s)?;
    let ratio = t.f_poly().exact_div(&levi.f_poly())?;
    let sign = if (t.rank() - levi.rank()) % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    Ok(ratio.scale(&sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(c.iter().copied())
    }

    fn g(s: &str) -> GroupType {
        s.parse().unwrap()
    }

    fn simple(s: &str) -> SimpleType {
        g(s).as_simple().unwrap()
    }

    #[test]
    fn truncation_bounds() {
        assert_eq!(truncation_bound(2), 0);
        assert_eq!(truncation_bound(5), 2);
        assert_eq!(truncation_bound(8), 3);
        assert_eq!(truncation_bound(9), 4);
        assert_eq!(dim_sl(1), 0);
        assert_eq!(dim_sl(4), 9);
    }

    #[test]
    fn poincare_examples() {
        let e = Engine::new();
        assert_eq!(e.ic_poincare(&g("A1")).unwrap(), IntPoly::one());
        assert_eq!(e.ic_poincare(&g("A3")).unwrap(), p(&[1, 0, 2, 1]));
        assert_eq!(e.ic_poincare(&g("G2")).unwrap(), p(&[1, 0, 1]));
        assert_eq!(e.ic_poincare(&g("B2")).unwrap(), p(&[1, 0, 1]));
        assert_eq!(e.ic_poincare(&g("A2+A1")).unwrap(), p(&[1, 0, 1]));
        assert_eq!(e.ic_poincare(&GroupType::trivial()).unwrap(), IntPoly::one());
    }

    #[test]
    fn difference_examples() {
        let e = Engine::new();
        assert_eq!(
            e.difference_poly(simple("A3")).unwrap(),
            p(&[1, 0, 2, 1, 0, 0, -1, -2, 0, -1])
        );
        assert_eq!(e.difference_poly(simple("G2")).unwrap(), p(&[1, 0, 1, 0, 0, 0, -1, 0, -1]));
        assert_eq!(e.difference_poly(simple("A1")).unwrap(), p(&[1, 0, -1]));
        // hand-run subset sum: 2(t^2 - t^6) + (1 - t^2)(1 - t^4)
        assert_eq!(e.difference_poly(simple("B2")).unwrap(), p(&[1, 0, 1, 0, -1, 0, -1]));
        assert_eq!(e.difference_poly_sl(3).unwrap(), p(&[1, 0, 1, -1, 0, -1]));
    }

    #[test]
    fn fast_path_examples() {
        let e = Engine::new();
        assert_eq!(e.ic_poincare_a_fast(3).unwrap(), p(&[1, 0, 1]));
        assert_eq!(e.ic_poincare_a_fast(5).unwrap(), p(&[1, 0, 3, 2, 2, 1, 2]));
        assert_eq!(e.ic_poincare_a_fast(1).unwrap(), IntPoly::one());
    }

    #[test]
    fn fast_path_matches_subset_recursion() {
        let fast = Engine::new();
        let general = Engine::with_options(EngineOptions {
            type_a_fast_path: false,
            parallel: true,
        });
        for n in 1..=9 {
            assert_eq!(fast.sl(n).unwrap(), general.sl(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn composition_form_matches_subset_form() {
        let e = Engine::new();
        for n in 2..=8 {
            let t = SimpleType::sl(n).unwrap();
            let by_subsets = e.difference_poly(t).unwrap();
            assert_eq!(e.difference_poly_by_compositions(n).unwrap(), by_subsets, "n={n}");
            assert_eq!(e.difference_poly_sl(n).unwrap(), by_subsets, "n={n}");
        }
    }

    #[test]
    fn differences_are_antisymmetric() {
        let e = Engine::new();
        let mut types = SimpleType::all_up_to_rank(6);
        types.extend((7..=12).map(|r| SimpleType::new(Family::A, r).unwrap()));
        for t in types {
            let d = t.dim_x();
            let diff = e.difference_poly(t).unwrap();
            assert_eq!(diff.reverse(d).unwrap(), -&diff, "{t}");
            if d % 2 == 0 {
                assert_eq!(diff.coeff(d / 2), BigInt::from(0), "{t}");
            }
            let pt = e.ic_poincare_simple(t).unwrap();
            assert_eq!(pt.coeff(0), BigInt::one(), "{t}");
            assert_eq!(pt.coeff(1), BigInt::from(0), "{t}");
            assert!(2 * pt.degree().unwrap() < d, "{t}");
        }
    }

    #[test]
    fn b_and_c_agree() {
        let e = Engine::new();
        for k in 2..=6 {
            let b = e.ic_poincare_simple(SimpleType::new(Family::B, k).unwrap()).unwrap();
            let c = e.ic_poincare_simple(SimpleType::new(Family::C, k).unwrap()).unwrap();
            assert_eq!(b, c, "rank {k}");
        }
    }

    #[test]
    fn full_recursion_identity_holds() {
        let e = Engine::new();
        for t in SimpleType::all_up_to_rank(4) {
            let prec = t.dim_x();
            let lhs = e.equivariant_series(&GroupType::simple(t), prec).unwrap();
            let rhs = e.recursion_rhs(t, prec).unwrap();
            assert_eq!(lhs, rhs, "{t}");
        }
    }

    #[test]
    fn orbit_counts() {
        let a1 = simple("A1");
        assert_eq!(orbit_point_count(a1, NodeSet::from_nodes(&[1])).unwrap(), p(&[-1, 0, 1]));
        let a2 = simple("A2");
        let full = orbit_point_count(a2, a2.all_nodes()).unwrap();
        assert_eq!(full, p(&[1, 0, -1, -1, 0, 1]));
        assert_eq!(full.eval(&BigInt::from(2)), BigInt::from(168 / 8));
        for t in SimpleType::all_up_to_rank(5) {
            assert_eq!(orbit_point_count(t, NodeSet::EMPTY).unwrap(), IntPoly::one());
        }
    }

    #[test]
    fn open_orbit_is_g_mod_u() {
        // |O_Δ(F_q)| · |U(F_q)| = |G(F_q)|
        for t in SimpleType::all_up_to_rank(4) {
            let q = BigInt::from(3);
            let open = orbit_point_count(t, t.all_nodes()).unwrap().eval(&q);
            let u = q.pow((t.dim_x() - t.rank()) as u32);
            let sign = if t.rank() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let group_order = sign * &u * t.f_poly().eval(&q);
            assert_eq!(open * u, group_order, "{t}");
        }
    }

    #[test]
    fn equivariant_examples() {
        let e = Engine::new();
        for n in 2..=10 {
            let s = e.equivariant_series(&GroupType::sl(n).unwrap(), 3).unwrap();
            assert_eq!(s.coeff(2).unwrap(), BigInt::from(n as i64 - 1), "n={n}");
            if n >= 3 {
                assert_eq!(s.coeff(3).unwrap(), BigInt::from(n as i64 - 2), "n={n}");
            }
        }
        let trivial = e.equivariant_series(&GroupType::trivial(), 5).unwrap();
        assert_eq!(trivial.poly(), &IntPoly::one());
    }

    #[test]
    fn exceptional_types_terminate() {
        let e = Engine::new();
        for name in ["E6", "E7", "E8", "F4"] {
            let t = simple(name);
            let pt = e.ic_poincare_simple(t).unwrap();
            assert_eq!(pt.coeff(0), BigInt::one());
            assert!(2 * pt.degree().unwrap() < t.dim_x());
            let d = e.difference_poly(t).unwrap();
            assert_eq!(d.reverse(t.dim_x()).unwrap(), -&d);
        }
    }

    #[test]
    fn cache_is_write_once_and_counts() {
        let e = Engine::new();
        e.sl(4).unwrap();
        let before = e.cache().stats();
        assert!(before.entries >= 3);
        e.sl(4).unwrap();
        assert!(e.cache().stats().hits > before.hits);
        e.cache().insert(g("A3"), IntPoly::zero());
        assert_eq!(e.sl(4).unwrap(), p(&[1, 0, 2, 1]));
    }

    #[test]
    fn concurrent_callers_agree() {
        let shared = Arc::new(Engine::new());
        let handles: Vec<_> = (0..8)
            .map(|k| {
                let e = Arc::clone(&shared);
                std::thread::spawn(move || {
                    let names = ["A7", "B5", "D5", "F4", "A9", "C4", "E6", "G2"];
                    let key = g(names[k % names.len()]);
                    (key.clone(), e.ic_poincare(&key).unwrap())
                })
            })
            .collect();
        let fresh = Engine::with_options(EngineOptions {
            type_a_fast_path: true,
            parallel: false,
        });
        for h in handles {
            let (key, value) = h.join().unwrap();
            assert_eq!(value, fresh.ic_poincare(&key).unwrap(), "{key}");
        }
    }

    #[test]
    fn corrupted_degree_data_is_reported_with_context() {
        let e = Engine::new();
        let t = simple("A2");
        // divide by something that does not divide f_{A2}
        let bogus = IntPoly::one_minus_t_pow(5);
        let err = e.subset_term(t, &bogus, NodeSet::from_nodes(&[1])).unwrap_err();
        match err {
            Error::Recursion { group, subset, source } => {
                assert_eq!(group, "A2");
                assert_eq!(subset, "{1}");
                assert!(matches!(*source, Error::NonExactDivision { .. }));
            }
            other => panic!("{other:?}"),
        }
    }
}
