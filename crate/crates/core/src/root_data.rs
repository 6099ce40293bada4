//! Dynkin types, fundamental degrees and Levi subtypes.
//!
//! Nodes are numbered 1..=rank following Bourbaki:
//!
//! ```text
//! A_n  1 - 2 - ... - n
//! B_n  1 - 2 - ... - (n-1) => n        node n short
//! C_n  1 - 2 - ... - (n-1) <= n        node n long
//! D_n  1 - 2 - ... - (n-2) - (n-1)
//!                        \
//!                         n
//! E_n  1 - 3 - 4 - 5 - ... - n          node 2 attached to node 4
//!              |
//!              2
//! F_4  1 - 2 => 3 - 4                   nodes 1, 2 long
//! G_2  1 <= 2                           node 1 short, triple bond
//! ```
//!
//! Arrows point from the long root to the short root.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::polyring::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ];

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Family::ALL.into_iter().find(|f| f.letter() == c)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A simple simply connected type. Ordering is by family letter, then rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleType {
    family: Family,
    rank: usize,
}

impl SimpleType {
    /// Validates `(family, rank)` and folds the low-rank coincidences
    /// `B_1 = C_1 = A_1` and `D_3 = A_3`. `D_2 = A_1 x A_1` is not simple;
    /// use [`GroupType::from_family_rank`] for it.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidGroup(format!("{family}{rank}: {why}")));
        let (family, rank) = match (family, rank) {
            (_, 0) => return bad("rank must be positive"),
            (Family::B | Family::C, 1) => (Family::A, 1),
            (Family::D, 3) => (Family::A, 3),
            (Family::D, 1 | 2) => return bad("D_1 and D_2 are not simple"),
            (Family::E, r) if !(6..=8).contains(&r) => return bad("E needs rank 6, 7 or 8"),
            (Family::F, r) if r != 4 => return bad("F needs rank 4"),
            (Family::G, r) if r != 2 => return bad("G needs rank 2"),
            other => other,
        };
        Ok(Self { family, rank })
    }

    /// `A_{n-1}`, the type of `SL_n` (requires `n >= 2`).
    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGroup(format!("SL_{n} has no simple factor")));
        }
        Self::new(Family::A, n - 1)
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    /// Fundamental degrees, sorted ascending.
    pub fn degrees(self) -> Vec<usize> {
        let n = self.rank;
        let mut out: Vec<usize> = match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|k| 2 * k).collect(),
            Family::D => (1..n).map(|k| 2 * k).chain(std::iter::once(n)).collect(),
            Family::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Family::F => vec![2, 6, 8, 12],
            Family::G => vec![2, 6],
        };
        out.sort_unstable();
        out
    }

    /// `d = dim X`, the sum of the degrees.
    pub fn dim_x(self) -> usize {
        self.degrees().iter().sum()
    }

    /// `f(t) = prod (1 - t^e)` over the degrees.
    pub fn f_poly(self) -> IntPoly {
        self.degrees().into_iter().map(IntPoly::one_minus_t_pow).product()
    }

    pub fn diagram(self) -> DynkinDiagram {
        DynkinDiagram::of(self)
    }

    pub fn all_nodes(self) -> NodeSet {
        NodeSet::full(self.rank)
    }

    /// All simple types of rank at most `max_rank`, in canonical order.
    pub fn all_up_to_rank(max_rank: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for family in Family::ALL {
            for rank in 1..=max_rank {
                let canonical = match (family, rank) {
                    (Family::B | Family::C, 1) | (Family::D, 1..=3) => continue,
                    (Family::E, r) if !(6..=8).contains(&r) => continue,
                    (Family::F, r) if r != 4 => continue,
                    (Family::G, r) if r != 2 => continue,
                    _ => Self { family, rank },
                };
                out.push(canonical);
            }
        }
        out
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A semisimple simply connected group, as a sorted multiset of simple factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupType {
    factors: Vec<SimpleType>,
}

impl GroupType {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn simple(t: SimpleType) -> Self {
        Self { factors: vec![t] }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = SimpleType>) -> Self {
        let mut factors: Vec<SimpleType> = factors.into_iter().collect();
        factors.sort_unstable();
        Self { factors }
    }

    /// Like [`SimpleType::new`], but also accepts `D_2 = A_1 + A_1`.
    pub fn from_family_rank(family: Family, rank: usize) -> Result<Self> {
        if family == Family::D && rank == 2 {
            let a1 = SimpleType::new(Family::A, 1)?;
            return Ok(Self::from_factors([a1, a1]));
        }
        SimpleType::new(family, rank).map(Self::simple)
    }

    /// The group `SL_n`; `SL_1` is trivial.
    pub fn sl(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidGroup("SL_0".into())),
            1 => Ok(Self::trivial()),
            _ => SimpleType::sl(n).map(Self::simple),
        }
    }

    pub fn factors(&self) -> &[SimpleType] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn as_simple(&self) -> Option<SimpleType> {
        match self.factors.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|t| t.rank()).sum()
    }

    pub fn dim_x(&self) -> usize {
        self.factors.iter().map(|t| t.dim_x()).sum()
    }

    pub fn f_poly(&self) -> IntPoly {
        self.factors.iter().map(|t| t.f_poly()).product()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.factors.iter().flat_map(|t| t.degrees()).collect();
        out.sort_unstable();
        out
    }
}

impl From<SimpleType> for GroupType {
    fn from(t: SimpleType) -> Self {
        Self::simple(t)
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("trivial");
        }
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Parses `FACTOR ("+" FACTOR)*` with `FACTOR = FAMILY RANK`, e.g. `A2+A2+B3`.
/// The word `trivial` denotes the trivial group. Whitespace is not allowed.
impl FromStr for GroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "trivial" {
            return Ok(Self::trivial());
        }
        let err = |position: usize, message: String| Error::Parse { position, message };
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0;
        let mut factors = Vec::new();
        loop {
            let Some(&c) = chars.get(pos) else {
                return Err(err(pos, "expected a family letter A-G".into()));
            };
            let family = Family::from_letter(c)
                .ok_or_else(|| err(pos, format!("expected a family letter A-G, found '{c}'")))?;
            pos += 1;
            let start = pos;
            while chars.get(pos).is_some_and(|c| c.is_ascii_digit()) {
                pos += 1;
            }
            if start == pos {
                return Err(err(start, "expected a rank".into()));
            }
            let digits: String = chars[start..pos].iter().collect();
            let rank: usize = digits.parse().map_err(|_| err(start, format!("rank {digits} is too large")))?;
            let group = GroupType::from_family_rank(family, rank).map_err(|e| err(start - 1, e.to_string()))?;
            factors.extend(group.factors);
            match chars.get(pos) {
                None => break,
                Some('+') => pos += 1,
                Some(c) => return Err(err(pos, format!("expected '+' or end of input, found '{c}'"))),
            }
        }
        Ok(Self::from_factors(factors))
    }
}

/// A subset of diagram nodes; bit `i - 1` stands for node `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet(u32);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn from_mask(mask: u32) -> Self {
        Self(mask)
    }

    pub fn full(rank: usize) -> Self {
        assert!(rank < 32);
        Self((1u32 << rank) - 1)
    }

    pub fn from_nodes(nodes: &[usize]) -> Self {
        Self(nodes.iter().fold(0, |m, &n| {
            assert!((1..=32).contains(&n), "node labels start at 1");
            m | (1 << (n - 1))
        }))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, node: usize) -> bool {
        node >= 1 && node <= 32 && (self.0 >> (node - 1)) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn nodes(self) -> impl Iterator<Item = usize> {
        (1..=32).filter(move |&n| self.contains(n))
    }

    /// Every subset of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = NodeSet> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some(((cur | !full).wrapping_add(1)) & full) };
            Some(NodeSet(cur))
        })
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.nodes().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("}")
    }
}

/// A bond between two nodes. For multiple bonds `long` is the long end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub multiplicity: u8,
    pub long: Option<usize>,
}

impl Edge {
    fn simple(a: usize, b: usize) -> Self {
        Self { a, b, multiplicity: 1, long: None }
    }

    fn multiple(long: usize, short: usize, multiplicity: u8) -> Self {
        Self { a: long.min(short), b: long.max(short), multiplicity, long: Some(long) }
    }

    pub fn other(&self, node: usize) -> Option<usize> {
        if self.a == node {
            Some(self.b)
        } else if self.b == node {
            Some(self.a)
        } else {
            None
        }
    }

    pub fn short(&self) -> Option<usize> {
        self.long.and_then(|l| self.other(l))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinDiagram {
    rank: usize,
    edges: Vec<Edge>,
}

impl DynkinDiagram {
    pub fn of(t: SimpleType) -> Self {
        let n = t.rank();
        let chain = |upto: usize| (1..upto).map(|i| Edge::simple(i, i + 1)).collect::<Vec<_>>();
        let edges = match t.family() {
            Family::A => chain(n),
            Family::B => {
                let mut e = chain(n - 1);
                e.push(Edge::multiple(n - 1, n, 2));
                e
            }
            Family::C => {
                let mut e = chain(n - 1);
                e.push(Edge::multiple(n, n - 1, 2));
                e
            }
            Family::D => {
                let mut e = chain(n - 1);
                e.push(Edge::simple(n - 2, n));
                e
            }
            Family::E => {
                let mut e = vec![Edge::simple(1, 3), Edge::simple(2, 4)];
                e.extend((3..n).map(|i| Edge::simple(i, i + 1)));
                e
            }
            Family::F => vec![Edge::simple(1, 2), Edge::multiple(2, 3, 2), Edge::simple(3, 4)],
            Family::G => vec![Edge::multiple(2, 1, 3)],
        };
        Self { rank: n, edges }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Cartan matrix `a_ij = <alpha_i^vee, alpha_j>`, indexed from 0.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for e in &self.edges {
            let (i, j) = (e.a - 1, e.b - 1);
            match (e.long, e.short()) {
                (Some(l), Some(s)) => {
                    a[l - 1][s - 1] = -1;
                    a[s - 1][l - 1] = -i64::from(e.multiplicity);
                }
                _ => {
                    a[i][j] = -1;
                    a[j][i] = -1;
                }
            }
        }
        a
    }

    /// Connected components of the diagram with `removed` deleted, as sorted node lists.
    pub fn components_without(&self, removed: NodeSet) -> Vec<Vec<usize>> {
        let mut seen = removed;
        let mut out = Vec::new();
        for start in 1..=self.rank {
            if seen.contains(start) {
                continue;
            }
            let mut comp = vec![start];
            seen = NodeSet(seen.0 | 1 << (start - 1));
            let mut idx = 0;
            while idx < comp.len() {
                let v = comp[idx];
                idx += 1;
                for e in &self.edges {
                    if let Some(w) = e.other(v) {
                        if !seen.contains(w) {
                            seen = NodeSet(seen.0 | 1 << (w - 1));
                            comp.push(w);
                        }
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Identifies the simple type spanned by a connected node set.
    pub fn classify_component(&self, nodes: &[usize]) -> Result<SimpleType> {
        let fail = || Error::UnclassifiableComponent { nodes: nodes.to_vec() };
        let inside = |v: usize| nodes.contains(&v);
        let edges: Vec<Edge> = self.edges.iter().copied().filter(|e| inside(e.a) && inside(e.b)).collect();
        let r = nodes.len();
        if r == 0 || edges.len() + 1 != r {
            return Err(fail());
        }
        let degree = |v: usize| edges.iter().filter(|e| e.other(v).is_some()).count();
        let neighbours = |v: usize| edges.iter().filter_map(move |e| e.other(v));

        if let Some(e) = edges.iter().find(|e| e.multiplicity == 3) {
            return if r == 2 && e.long.is_some() { SimpleType::new(Family::G, 2) } else { Err(fail()) };
        }
        let multiple: Vec<&Edge> = edges.iter().filter(|e| e.multiplicity > 1).collect();
        let branch: Vec<usize> = nodes.iter().copied().filter(|&v| degree(v) >= 3).collect();

        if !branch.is_empty() {
            if branch.len() != 1 || !multiple.is_empty() || degree(branch[0]) != 3 {
                return Err(fail());
            }
            let centre = branch[0];
            let mut arms: Vec<usize> = neighbours(centre)
                .map(|first| {
                    let (mut prev, mut cur, mut len) = (centre, first, 1);
                    loop {
                        match neighbours(cur).find(|&w| w != prev) {
                            Some(next) => {
                                prev = cur;
                                cur = next;
                                len += 1;
                            }
                            None => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            return match arms.as_slice() {
                [1, 1, c] => SimpleType::new(Family::D, c + 3),
                [1, 2, 2] => SimpleType::new(Family::E, 6),
                [1, 2, 3] => SimpleType::new(Family::E, 7),
                [1, 2, 4] => SimpleType::new(Family::E, 8),
                _ => Err(fail()),
            };
        }

        // A path: walk it from its smaller-labelled end.
        let start = nodes.iter().copied().find(|&v| degree(v) <= 1).ok_or_else(fail)?;
        let mut path = vec![start];
        while path.len() < r {
            let cur = *path.last().unwrap();
            let prev = path.len().checked_sub(2).map(|i| path[i]);
            let next = neighbours(cur).find(|&w| Some(w) != prev).ok_or_else(fail)?;
            path.push(next);
        }
        match multiple.as_slice() {
            [] => SimpleType::new(Family::A, r),
            [e] => {
                let pos = path.iter().position(|&v| v == e.a || v == e.b).unwrap();
                let short = e.short().ok_or_else(fail)?;
                if r == 2 {
                    // both ends qualify; keep the orientation of the ambient labels
                    let family = if short == path[1] { Family::B } else { Family::C };
                    SimpleType::new(family, 2)
                } else if pos == 0 {
                    let family = if short == path[0] { Family::B } else { Family::C };
                    SimpleType::new(family, r)
                } else if pos == r - 2 {
                    let family = if short == path[r - 1] { Family::B } else { Family::C };
                    SimpleType::new(family, r)
                } else if r == 4 && pos == 1 {
                    SimpleType::new(Family::F, 4)
                } else {
                    Err(fail())
                }
            }
            _ => Err(fail()),
        }
    }
}

/// The semisimple group whose diagram is that of `t` with the nodes of `s` removed.
pub fn levi_subtype(t: SimpleType, s: NodeSet) -> Result<GroupType> {
    if !s.is_subset_of(t.all_nodes()) {
        return Err(Error::InvalidArgs(format!("{s} is not a node subset of {t}")));
    }
    let diagram = t.diagram();
    let factors = diagram
        .components_without(s)
        .iter()
        .map(|comp| diagram.classify_component(comp))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupType::from_factors(factors))
}

/// The subset `S_sigma` of the `A_{n-1}` diagram attached to a composition of `n`:
/// the partial sums `sigma_1, sigma_1 + sigma_2, ...` (all but the last).
pub fn composition_subset(sigma: &[usize]) -> NodeSet {
    let mut acc = 0;
    let mut nodes = Vec::new();
    for &part in &sigma[..sigma.len().saturating_sub(1)] {
        acc += part;
        nodes.push(acc);
    }
    NodeSet::from_nodes(&nodes)
}

/// All compositions of `n`, each as its list of parts. `n = 0` yields the empty composition.
pub fn compositions(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let cuts = n.saturating_sub(1);
    let count: u64 = if n == 0 { 1 } else { 1u64 << cuts };
    (0..count).map(move |mask| {
        if n == 0 {
            return Vec::new();
        }
        let mut parts = Vec::new();
        let mut last = 0;
        for i in 1..n {
            if (mask >> (i - 1)) & 1 == 1 {
                parts.push(i - last);
                last = i;
            }
        }
        parts.push(n - last);
        parts
    })
}
