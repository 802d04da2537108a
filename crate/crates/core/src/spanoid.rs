//! Spanoids: monotone, reflexive inference structures over a finite
//! universe `{0, .., u − 1}`, with span closure, rank search, the spanoid
//! `S_A` of a matrix, the product of two spanoids, and the product rank
//! upper bound from set families.

use alloc::format;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::boolmat::BoolMatrix;
use crate::combin::Combinations;
use crate::error::{Error, Result};

/// A spanoid given by its inference oracle. `infers(S, i)` must be
/// monotone in `S` and true whenever `i ∈ S`.
pub trait Spanoid {
    fn universe_size(&self) -> usize;

    /// Is there a rule `(S', i)` with `S' ⊆ s`?
    fn infers(&self, s: &FixedBitSet, i: usize) -> bool;
}

impl<T: Spanoid + ?Sized> Spanoid for &T {
    fn universe_size(&self) -> usize {
        (**self).universe_size()
    }

    fn infers(&self, s: &FixedBitSet, i: usize) -> bool {
        (**self).infers(s, i)
    }
}

pub fn set_of(universe: usize, elems: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(universe);
    for e in elems {
        s.insert(e);
    }
    s
}

/// Least fixed point of adding inferred elements to `t`.
pub fn span<S: Spanoid + ?Sized>(sp: &S, t: &FixedBitSet) -> FixedBitSet {
    let u = sp.universe_size();
    let mut cur = t.clone();
    cur.grow(u);
    loop {
        let mut changed = false;
        for i in 0..u {
            if !cur.contains(i) && sp.infers(&cur, i) {
                cur.insert(i);
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
    }
}

pub fn spans_all<S: Spanoid + ?Sized>(sp: &S, t: &FixedBitSet) -> bool {
    span(sp, t).count_ones(..) == sp.universe_size()
}

/// A spanoid with an explicit rule list, closed under monotonicity and
/// reflexivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSpanoid {
    universe: usize,
    rules: Vec<(Vec<usize>, usize)>,
}

impl RuleSpanoid {
    pub fn new(universe: usize, rules: Vec<(Vec<usize>, usize)>) -> Result<Self> {
        for (s, i) in &rules {
            if let Some(&e) = s.iter().chain(core::iter::once(i)).find(|&&e| e >= universe) {
                return Err(Error::OutOfRange { index: e, bound: universe });
            }
        }
        Ok(RuleSpanoid { universe, rules })
    }

    pub fn rules(&self) -> &[(Vec<usize>, usize)] {
        &self.rules
    }
}

impl Spanoid for RuleSpanoid {
    fn universe_size(&self) -> usize {
        self.universe
    }

    fn infers(&self, s: &FixedBitSet, i: usize) -> bool {
        s.contains(i) || self.rules.iter().any(|(r, j)| *j == i && r.iter().all(|&e| s.contains(e)))
    }
}

/// Largest universe a matrix spanoid may have.
pub const MAX_MATRIX_UNIVERSE: usize = 10_000;

/// `S_A`: the universe is every all-ones rectangle `X × Y` of `A` (nonempty
/// `X`, `Y`), ordered by (row mask, column mask); `S` infers `M` iff `M` is
/// dominated by the Boolean sum of `S`. Needs `rows · cols ≤ 64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSpanoid {
    matrix: BoolMatrix,
    elements: Vec<(u64, u64)>,
    supports: Vec<u64>,
}

impl MatrixSpanoid {
    pub fn new(a: &BoolMatrix) -> Result<Self> {
        let (rows, cols) = a.dims();
        if rows * cols > 64 {
            return Err(Error::InvalidParameter(format!(
                "matrix spanoids need at most 64 entries, got {rows}x{cols}"
            )));
        }
        let row_mask = |i: usize| a.row_words(i).first().copied().unwrap_or(0);
        let mut elements = Vec::new();
        for x in 1u64..(1 << rows) {
            let common = (0..rows).filter(|i| x >> i & 1 == 1).fold(u64::MAX >> (64 - cols.max(1)), |acc, i| acc & row_mask(i));
            let common = if cols == 0 { 0 } else { common };
            // all nonempty subsets of `common`, increasing
            let mut y = common & common.wrapping_neg();
            while y != 0 {
                if elements.len() == MAX_MATRIX_UNIVERSE {
                    return Err(Error::InvalidParameter(format!(
                        "matrix spanoid universe exceeds {MAX_MATRIX_UNIVERSE} elements"
                    )));
                }
                elements.push((x, y));
                y = (y.wrapping_sub(common)) & common;
            }
        }
        let supports = elements
            .iter()
            .map(|&(x, y)| (0..rows).filter(|i| x >> i & 1 == 1).fold(0u64, |acc, i| acc | y << (i * cols)))
            .collect();
        Ok(MatrixSpanoid { matrix: a.clone(), elements, supports })
    }

    pub fn matrix(&self) -> &BoolMatrix {
        &self.matrix
    }

    /// Element `e` as (row indices, column indices).
    pub fn element(&self, e: usize) -> (Vec<usize>, Vec<usize>) {
        let (x, y) = self.elements[e];
        let idx = |m: u64| (0..64).filter(|b| m >> b & 1 == 1).collect();
        (idx(x), idx(y))
    }

    /// Index of the rectangle `rows × cols`, if it is in the universe.
    pub fn index_of(&self, rows: &[usize], cols: &[usize]) -> Option<usize> {
        let m = |v: &[usize]| v.iter().fold(0u64, |acc, &b| acc | 1 << b);
        let key = (m(rows), m(cols));
        self.elements.binary_search(&key).ok()
    }
}

impl Spanoid for MatrixSpanoid {
    fn universe_size(&self) -> usize {
        self.elements.len()
    }

    fn infers(&self, s: &FixedBitSet, i: usize) -> bool {
        let sum = s.ones().fold(0u64, |acc, e| acc | self.supports[e]);
        self.supports[i] & !sum == 0
    }
}

/// `S_1 ⊗ S_2` on `U_1 × U_2`, element `(i, j)` at index `i · |U_2| + j`.
/// `T` infers `(i, j)` iff `{m : (m, j) ∈ T}` infers `i` in `S_1` or
/// `{m : (i, m) ∈ T}` infers `j` in `S_2`.
#[derive(Debug, Clone)]
pub struct ProductSpanoid<A, B> {
    first: A,
    second: B,
}

impl<A: Spanoid, B: Spanoid> ProductSpanoid<A, B> {
    pub fn new(first: A, second: B) -> Self {
        ProductSpanoid { first, second }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.second.universe_size() + j
    }
}

impl<A: Spanoid, B: Spanoid> Spanoid for ProductSpanoid<A, B> {
    fn universe_size(&self) -> usize {
        self.first.universe_size() * self.second.universe_size()
    }

    fn infers(&self, t: &FixedBitSet, e: usize) -> bool {
        let (u1, u2) = (self.first.universe_size(), self.second.universe_size());
        let (i, j) = (e / u2, e % u2);
        let column = set_of(u1, (0..u1).filter(|&m| t.contains(m * u2 + j)));
        if self.first.infers(&column, i) {
            return true;
        }
        let row = set_of(u2, (0..u2).filter(|&m| t.contains(i * u2 + m)));
        self.second.infers(&row, j)
    }
}

/// Limits of [`spanoid_rank`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankSearch {
    /// Largest spanning-set size tried.
    pub max_size: usize,
    /// Largest universe searched.
    pub max_universe: usize,
    /// Largest number of candidate sets whose span is computed.
    pub budget: u64,
}

impl Default for RankSearch {
    fn default() -> Self {
        RankSearch { max_size: 6, max_universe: 100, budget: 50_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanoidRank {
    /// The rank and the lexicographically first spanning set of that size.
    Exact { rank: usize, witness: Vec<usize> },
    /// No set of size at most `max_size` spans; the rank exceeds it.
    Above(usize),
}

/// Smallest spanning set, by iterative deepening over set sizes and
/// lexicographic order within a size.
pub fn spanoid_rank<S: Spanoid + ?Sized>(sp: &S, opts: RankSearch) -> Result<SpanoidRank> {
    let u = sp.universe_size();
    if u > opts.max_universe {
        return Err(Error::InvalidParameter(format!(
            "universe of {u} elements exceeds the search cap of {}",
            opts.max_universe
        )));
    }
    let mut tried = 0u64;
    for size in 0..=opts.max_size.min(u) {
        for pick in Combinations::new(u, size) {
            tried += 1;
            if tried > opts.budget {
                return Err(Error::BudgetExceeded { budget: opts.budget });
            }
            if spans_all(sp, &set_of(u, pick.iter().copied())) {
                return Ok(SpanoidRank::Exact { rank: size, witness: pick });
            }
        }
    }
    Ok(SpanoidRank::Above(opts.max_size))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductBoundFailure {
    /// The `N_t` with `i ∈ M_t` do not span `U_2`.
    Hypothesis { element: usize },
    /// The union of `M_t × N_t` does not span `U_1 × U_2` (cannot happen
    /// once the hypothesis holds).
    NotSpanning,
}

/// Check that for every `i ∈ U_1` the union of the `N_t` with `i ∈ M_t`
/// spans `U_2`, then that `⋃ M_t × N_t` spans the product, and return the
/// bound `Σ |M_t| · |N_t|` on the product rank.
pub fn check_product_bound<A: Spanoid, B: Spanoid>(
    s1: &A,
    s2: &B,
    m_sets: &[Vec<usize>],
    n_sets: &[Vec<usize>],
) -> Result<core::result::Result<usize, ProductBoundFailure>> {
    if m_sets.len() != n_sets.len() {
        return Err(Error::InvalidParameter(format!(
            "set family lengths differ: {} vs {}",
            m_sets.len(),
            n_sets.len()
        )));
    }
    let (u1, u2) = (s1.universe_size(), s2.universe_size());
    for (sets, u) in [(m_sets, u1), (n_sets, u2)] {
        if let Some(&e) = sets.iter().flatten().find(|&&e| e >= u) {
            return Err(Error::OutOfRange { index: e, bound: u });
        }
    }
    for i in 0..u1 {
        let union = set_of(u2, m_sets.iter().zip(n_sets).filter(|(m, _)| m.contains(&i)).flat_map(|(_, n)| n.iter().copied()));
        if !spans_all(s2, &union) {
            return Ok(Err(ProductBoundFailure::Hypothesis { element: i }));
        }
    }
    let product = ProductSpanoid::new(s1, s2);
    let union = set_of(
        u1 * u2,
        m_sets
            .iter()
            .zip(n_sets)
            .flat_map(|(m, n)| m.iter().flat_map(move |&i| n.iter().map(move |&j| i * u2 + j))),
    );
    if !spans_all(&product, &union) {
        return Ok(Err(ProductBoundFailure::NotSpanning));
    }
    let dedup = |v: &Vec<usize>| {
        let mut v = v.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    Ok(Ok(m_sets.iter().zip(n_sets).map(|(m, n)| dedup(m) * dedup(n)).sum()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::bounds::{exact_boolean_rank, RankOptions};
    use crate::crown::crown_matrix;
    use proptest::prelude::*;

    fn rank_of<S: Spanoid>(s: &S) -> usize {
        match spanoid_rank(s, RankSearch::default()).unwrap() {
            SpanoidRank::Exact { rank, .. } => rank,
            SpanoidRank::Above(_) => panic!("rank above cap"),
        }
    }

    #[test]
    fn matrix_spanoid_of_c2() {
        let s = MatrixSpanoid::new(&crown_matrix(2)).unwrap();
        assert_eq!(s.universe_size(), 2);
        assert_eq!(span(&s, &set_of(2, [])).count_ones(..), 0);
        let one = s.index_of(&[0], &[1]).unwrap();
        assert_eq!(span(&s, &set_of(2, [one])).ones().collect::<Vec<_>>(), vec![one]);
        assert_eq!(rank_of(&s), 2);
    }

    #[test]
    fn matrix_spanoid_of_ones() {
        let s = MatrixSpanoid::new(&BoolMatrix::ones(2, 2)).unwrap();
        assert_eq!(s.universe_size(), 9);
        assert_eq!(rank_of(&s), 1);
        // every single 1 of A is in the universe
        for (i, j) in BoolMatrix::ones(2, 2).ones_iter() {
            assert!(s.index_of(&[i], &[j]).is_some());
        }
    }

    #[test]
    fn products() {
        let c2 = MatrixSpanoid::new(&crown_matrix(2)).unwrap();
        assert_eq!(rank_of(&ProductSpanoid::new(&c2, &c2)), 4);
        let row = MatrixSpanoid::new(&BoolMatrix::ones(1, 2)).unwrap();
        let col = MatrixSpanoid::new(&BoolMatrix::ones(2, 1)).unwrap();
        assert_eq!(rank_of(&ProductSpanoid::new(&row, &col)), 1);
        let single = RuleSpanoid::new(1, Vec::new()).unwrap();
        assert_eq!(rank_of(&ProductSpanoid::new(&single, &c2)), 2);
        assert_eq!(rank_of(&ProductSpanoid::new(&c2, &single)), 2);
    }

    #[test]
    fn rule_spanoid_chain() {
        // 0 -> 1, {0,1} -> 2
        let s = RuleSpanoid::new(4, vec![(vec![0], 1), (vec![0, 1], 2)]).unwrap();
        assert_eq!(span(&s, &set_of(4, [0])).ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(
            spanoid_rank(&s, RankSearch::default()).unwrap(),
            SpanoidRank::Exact { rank: 2, witness: vec![0, 3] }
        );
        assert!(RuleSpanoid::new(2, vec![(vec![5], 1)]).is_err());
    }

    #[test]
    fn product_bound_on_c2() {
        let c2 = MatrixSpanoid::new(&crown_matrix(2)).unwrap();
        let m = vec![vec![0], vec![1]];
        let n = vec![vec![0, 1], vec![0, 1]];
        assert_eq!(check_product_bound(&c2, &c2, &m, &n).unwrap(), Ok(4));
        let broken = vec![vec![0, 1], vec![0]];
        assert_eq!(
            check_product_bound(&c2, &c2, &m, &broken).unwrap(),
            Err(ProductBoundFailure::Hypothesis { element: 1 })
        );
        let all = vec![vec![0, 1]];
        assert_eq!(check_product_bound(&c2, &c2, &all, &[vec![0, 1]]).unwrap(), Ok(4));
        assert!(check_product_bound(&c2, &c2, &all, &[]).is_err());
    }

    #[test]
    fn matrix_spanoid_rank_equals_boolean_rank() {
        for (r, c) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 2), (3, 3)] {
            for bits in 0u32..(1 << (r * c)) {
                let a = BoolMatrix::from_fn(r, c, |i, j| bits >> (i * c + j) & 1 == 1);
                let s = MatrixSpanoid::new(&a).unwrap();
                if s.universe_size() > 50 {
                    continue;
                }
                let exact = exact_boolean_rank(&a, RankOptions::default()).unwrap().exact().unwrap();
                assert_eq!(rank_of(&s), exact, "{a:?}");
            }
        }
    }

    fn arb_rules() -> impl Strategy<Value = RuleSpanoid> {
        (1usize..7).prop_flat_map(|u| {
            proptest::collection::vec((proptest::collection::vec(0..u, 0..3), 0..u), 0..8)
                .prop_map(move |rules| RuleSpanoid::new(u, rules).unwrap())
        })
    }

    proptest! {
        #[test]
        fn span_is_monotone_and_idempotent(s in arb_rules(), a in any::<u8>(), b in any::<u8>()) {
            let u = s.universe_size();
            let t = set_of(u, (0..u).filter(|i| a >> i & 1 == 1));
            let t2 = set_of(u, (0..u).filter(|i| (a | b) >> i & 1 == 1));
            let st = span(&s, &t);
            prop_assert!(t.is_subset(&st));
            prop_assert!(st.is_subset(&span(&s, &t2)));
            prop_assert_eq!(span(&s, &st), st);
        }

        #[test]
        fn product_bound_sandwich(s1 in arb_rules(), s2 in arb_rules(), picks in proptest::collection::vec((any::<u8>(), any::<u8>()), 1..4)) {
            let (u1, u2) = (s1.universe_size(), s2.universe_size());
            prop_assume!(u1 * u2 <= 16);
            let m: Vec<Vec<usize>> = picks.iter().map(|(a, _)| (0..u1).filter(|i| a >> i & 1 == 1).collect()).collect();
            let n: Vec<Vec<usize>> = picks.iter().map(|(_, b)| (0..u2).filter(|i| b >> i & 1 == 1).collect()).collect();
            if let Ok(bound) = check_product_bound(&s1, &s2, &m, &n).unwrap() {
                let p = ProductSpanoid::new(&s1, &s2);
                let opts = RankSearch { max_size: 16, ..RankSearch::default() };
                match spanoid_rank(&p, opts).unwrap() {
                    SpanoidRank::Exact { rank, .. } => prop_assert!(rank <= bound),
                    SpanoidRank::Above(_) => prop_assert!(false),
                }
            }
        }
    }
}
