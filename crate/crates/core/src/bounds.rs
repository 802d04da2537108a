//! Exact Boolean rank of small matrices and the lower bounds used to certify
//! ranks of Kronecker products: isolation sets, `μ(A)` and
//! `R_B(A ⊗ B) ≥ μ(A) · R_B(B)`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::boolmat::BoolMatrix;
use crate::cover::{Cover, Rectangle};
use crate::crown::{crown_matrix, sigma};
use crate::error::{Error, Result};

/// Default node budget of the exact rank search.
pub const DEFAULT_RANK_BUDGET: u64 = 200_000_000;

/// Default node budget of the isolation set search.
pub const DEFAULT_ISOLATION_BUDGET: u64 = 50_000_000;

/// Largest column count handled by the rectangle enumeration.
pub const MAX_ENUM_COLS: usize = 64;

/// All maximal all-ones rectangles of `a`, ordered by (rows, cols).
///
/// Column sets of maximal rectangles are exactly the nonempty intersections
/// of row supports; each determines its row set. Requires `cols ≤ 64`.
pub fn maximal_rectangles(a: &BoolMatrix) -> Result<Vec<Rectangle>> {
    if a.cols() > MAX_ENUM_COLS {
        return Err(Error::InvalidParameter(alloc::format!(
            "rectangle enumeration needs at most {MAX_ENUM_COLS} columns, got {}",
            a.cols()
        )));
    }
    let row_mask = |i: usize| a.row_words(i).first().copied().unwrap_or(0);
    let mut closed: BTreeSet<u64> = BTreeSet::new();
    for i in 0..a.rows() {
        let r = row_mask(i);
        if r == 0 {
            continue;
        }
        let fresh: Vec<u64> = closed.iter().map(|&s| s & r).filter(|&s| s != 0).collect();
        closed.insert(r);
        closed.extend(fresh);
    }
    let mut out: Vec<Rectangle> = closed
        .into_iter()
        .map(|cols| {
            let rows = (0..a.rows()).filter(|&i| row_mask(i) & cols == cols).collect();
            let cols = (0..a.cols()).filter(|&j| cols >> j & 1 == 1).collect();
            Rectangle::new(rows, cols).expect("closed sets are nonempty")
        })
        .collect();
    out.sort();
    Ok(out)
}

/// A nonnegative rational `num / den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter(alloc::string::String::from("zero denominator")));
        }
        let g = gcd(num, den).max(1);
        Ok(Ratio { num: num / g, den: den / g })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `⌈self · k⌉`, exactly.
    pub fn ceil_mul(&self, k: u64) -> u64 {
        (self.num as u128 * k as u128).div_ceil(self.den as u128) as u64
    }

    pub fn ceil(&self) -> u64 {
        self.ceil_mul(1)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `μ(A)`: ones of `A` over the largest area of an all-ones rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mu {
    pub value: Ratio,
    pub ones: u64,
    pub max_area: u64,
    /// A rectangle of maximum area.
    pub witness: Rectangle,
}

pub fn mu(a: &BoolMatrix) -> Result<Mu> {
    if a.is_zero() {
        return Err(Error::Empty("matrix"));
    }
    let rects = maximal_rectangles(a)?;
    let witness = rects
        .iter()
        .max_by(|x, y| x.area().cmp(&y.area()).then_with(|| y.cmp(x)))
        .expect("nonzero matrix")
        .clone();
    let ones = a.count_ones();
    Ok(Mu { value: Ratio::new(ones, witness.area())?, ones, max_area: witness.area(), witness })
}

/// `μ(C_n) = n(n−1) / (⌈n/2⌉·⌊n/2⌋)`, attained by the rectangle of the first
/// `⌈n/2⌉` rows and the remaining columns.
pub fn mu_crown(n: usize) -> Result<Mu> {
    if n < 2 {
        return Err(Error::Empty("matrix"));
    }
    let h = n.div_ceil(2);
    let witness = Rectangle::new((0..h).collect(), (h..n).collect())?;
    let ones = (n * (n - 1)) as u64;
    Ok(Mu { value: Ratio::new(ones, witness.area())?, ones, max_area: witness.area(), witness })
}

/// Result of the isolation set search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isolation {
    /// Entries in distinct rows and columns, no two in an all-ones 2×2.
    pub witness: Vec<(usize, usize)>,
    /// False when the budget ran out; `witness` is then only a lower bound.
    pub exact: bool,
}

impl Isolation {
    pub fn size(&self) -> usize {
        self.witness.len()
    }
}

/// Can `x` and `y` both belong to an isolation set of `a`?
pub fn isolated_pair(a: &BoolMatrix, x: (usize, usize), y: (usize, usize)) -> bool {
    x.0 != y.0 && x.1 != y.1 && !(a.get(x.0, y.1) && a.get(y.0, x.1))
}

pub fn is_isolation_set(a: &BoolMatrix, set: &[(usize, usize)]) -> bool {
    set.iter().all(|&(i, j)| a.get(i, j))
        && set.iter().enumerate().all(|(s, &x)| set[s + 1..].iter().all(|&y| isolated_pair(a, x, y)))
}

/// Maximum isolation set by branch and bound on the compatibility graph of
/// the 1-entries (vertices in row-major order), pruned by greedy coloring.
pub fn isolation_number(a: &BoolMatrix, budget: u64) -> Isolation {
    let verts: Vec<(usize, usize)> = a.ones_iter().collect();
    let n = verts.len();
    let words = n.div_ceil(64).max(1);
    let mut adj = vec![vec![0u64; words]; n];
    for u in 0..n {
        for v in u + 1..n {
            if isolated_pair(a, verts[u], verts[v]) {
                adj[u][v / 64] |= 1 << (v % 64);
                adj[v][u / 64] |= 1 << (u % 64);
            }
        }
    }
    struct Search<'a> {
        adj: &'a [Vec<u64>],
        best: Vec<usize>,
        cur: Vec<usize>,
        nodes: u64,
        budget: u64,
        out_of_budget: bool,
    }
    fn bits(set: &[u64]) -> Vec<usize> {
        crate::boolmat::iter_bits(set).collect()
    }
    impl Search<'_> {
        fn color_bound(&self, cand: &[usize]) -> usize {
            // greedy coloring: number of colors bounds the clique size
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for &v in cand {
                match classes
                    .iter_mut()
                    .find(|c| c.iter().all(|&u| self.adj[v][u / 64] >> (u % 64) & 1 == 0))
                {
                    Some(c) => c.push(v),
                    None => classes.push(vec![v]),
                }
            }
            classes.len()
        }

        fn expand(&mut self, cand: Vec<u64>) {
            self.nodes += 1;
            if self.nodes > self.budget {
                self.out_of_budget = true;
                return;
            }
            let list = bits(&cand);
            if list.is_empty() {
                if self.cur.len() > self.best.len() {
                    self.best = self.cur.clone();
                }
                return;
            }
            if self.cur.len() + self.color_bound(&list) <= self.best.len() {
                return;
            }
            let mut rest = cand;
            for v in list {
                if self.out_of_budget || self.cur.len() + crate::boolmat::popcount(&rest) <= self.best.len() {
                    return;
                }
                rest[v / 64] &= !(1 << (v % 64));
                let next: Vec<u64> = rest.iter().zip(&self.adj[v]).map(|(r, a)| r & a).collect();
                self.cur.push(v);
                self.expand(next);
                self.cur.pop();
            }
        }
    }
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut s = Search { adj: &adj, best: Vec::new(), cur: Vec::new(), nodes: 0, budget, out_of_budget: false };
    s.expand(all);
    Isolation { witness: s.best.iter().map(|&v| verts[v]).collect(), exact: !s.out_of_budget }
}

/// An isolation set of size 3 in `C_n`, `n ≥ 3` (size `min(n, 2)` below).
pub fn crown_isolation_witness(n: usize) -> Vec<(usize, usize)> {
    match n {
        0 | 1 => Vec::new(),
        2 => vec![(0, 1), (1, 0)],
        _ => vec![(0, 1), (1, 2), (2, 0)],
    }
}

/// Lower bound part of a rank certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerBound {
    Isolation(Vec<(usize, usize)>),
    /// `⌈μ(A)⌉`.
    Mu(Ratio),
    /// Search refuted every cover with fewer than this many rectangles.
    Search(usize),
}

impl LowerBound {
    pub fn value(&self) -> usize {
        match self {
            LowerBound::Isolation(w) => w.len(),
            LowerBound::Mu(r) => r.ceil() as usize,
            LowerBound::Search(v) => *v,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LowerBound::Isolation(_) => "isolation",
            LowerBound::Mu(_) => "mu",
            LowerBound::Search(_) => "search",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankStatus {
    /// `lower.value() == upper.len()`.
    Exact,
    /// No cover below the requested limit exists; the rank is at least it.
    LimitReached,
    /// The node budget ran out; only the bounds are known.
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankCertificate {
    pub status: RankStatus,
    pub lower: LowerBound,
    pub upper: Cover,
}

impl RankCertificate {
    pub fn exact(&self) -> Option<usize> {
        (self.status == RankStatus::Exact).then_some(self.upper.len())
    }
}

/// Options for [`exact_boolean_rank`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankOptions {
    /// Stop once covers of every size below `limit` are refuted.
    pub limit: Option<usize>,
    pub budget: u64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { limit: None, budget: DEFAULT_RANK_BUDGET }
    }
}

struct SetCover {
    /// coverage of each candidate rectangle as a bitset over the 1-entries
    sets: Vec<Vec<u64>>,
    words: usize,
    /// candidates containing each entry, in candidate order
    by_entry: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

fn and_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

impl SetCover {
    /// Can `uncovered` be covered with at most `left` candidates? Fills
    /// `chosen` on success.
    fn search(&mut self, uncovered: &[u64], left: usize, chosen: &mut Vec<usize>) -> Result<bool, ()> {
        let Some(first) = crate::boolmat::first_bit(uncovered) else {
            return Ok(true);
        };
        if left == 0 {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        let need: u32 = uncovered.iter().map(|w| w.count_ones()).sum();
        // the `left` largest coverages must reach `need`
        let mut gains: Vec<u32> = self.sets.iter().map(|s| and_count(s, uncovered)).collect();
        if left < gains.len() {
            gains.select_nth_unstable_by(left - 1, |a, b| b.cmp(a));
        }
        if gains.iter().take(left).sum::<u32>() < need {
            return Ok(false);
        }
        let cands = self.by_entry[first].clone();
        let restricted: Vec<Vec<u64>> = cands
            .iter()
            .map(|&c| self.sets[c].iter().zip(uncovered).map(|(s, u)| s & u).collect())
            .collect();
        for (x, &c) in cands.iter().enumerate() {
            // skip candidates whose remaining coverage another one contains
            let dominated = restricted.iter().enumerate().any(|(y, other)| {
                y != x
                    && restricted[x].iter().zip(other).all(|(a, b)| a & !b == 0)
                    && (restricted[x] != *other || y < x)
            });
            if dominated {
                continue;
            }
            let rest: Vec<u64> = uncovered.iter().zip(&restricted[x]).map(|(u, r)| u & !r).collect();
            chosen.push(c);
            if self.search(&rest, left - 1, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Greedy cover by maximal rectangles (largest remaining coverage first).
pub fn greedy_cover(a: &BoolMatrix) -> Result<Cover> {
    let rects = maximal_rectangles(a)?;
    let ones: Vec<(usize, usize)> = a.ones_iter().collect();
    let mut uncovered: BTreeSet<(usize, usize)> = ones.into_iter().collect();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let best = rects
            .iter()
            .max_by_key(|r| {
                let gain = uncovered.iter().filter(|&&(i, j)| r.contains(i, j)).count();
                (gain, core::cmp::Reverse(*r))
            })
            .expect("some rectangle covers each 1");
        uncovered.retain(|&(i, j)| !best.contains(i, j));
        chosen.push(best.clone());
    }
    Cover::new(a.rows(), a.cols(), chosen)
}

/// Exact Boolean rank: minimum cover by maximal rectangles found by
/// iterative deepening, branching on the first uncovered 1-entry in
/// row-major order over candidates sorted by area (descending), then
/// lexicographically. Never reports a wrong exact value: on budget
/// exhaustion the certificate carries only bounds.
pub fn exact_boolean_rank(a: &BoolMatrix, opts: RankOptions) -> Result<RankCertificate> {
    if a.is_zero() {
        return Ok(RankCertificate {
            status: RankStatus::Exact,
            lower: LowerBound::Search(0),
            upper: Cover::empty(a.rows(), a.cols()),
        });
    }
    let mut rects = maximal_rectangles(a)?;
    rects.sort_by(|x, y| y.area().cmp(&x.area()).then_with(|| x.cmp(y)));
    let ones: Vec<(usize, usize)> = a.ones_iter().collect();
    let words = ones.len().div_ceil(64);
    let sets: Vec<Vec<u64>> = rects
        .iter()
        .map(|r| {
            let mut s = vec![0u64; words];
            for (e, &(i, j)) in ones.iter().enumerate() {
                if r.contains(i, j) {
                    s[e / 64] |= 1 << (e % 64);
                }
            }
            s
        })
        .collect();
    let mut by_entry = vec![Vec::new(); ones.len()];
    for (c, s) in sets.iter().enumerate() {
        for e in crate::boolmat::iter_bits(s) {
            by_entry[e].push(c);
        }
    }
    let mu = Ratio::new(ones.len() as u64, rects[0].area())?;
    let start = mu.ceil() as usize;
    let greedy = greedy_cover(a)?;
    let mut all = vec![0u64; words];
    for e in 0..ones.len() {
        all[e / 64] |= 1 << (e % 64);
    }
    let mut sc = SetCover { sets, words, by_entry, nodes: 0, budget: opts.budget };
    let lower_at = |size: usize| if size == start { LowerBound::Mu(mu) } else { LowerBound::Search(size) };
    let mut size = start;
    loop {
        if opts.limit.is_some_and(|l| size >= l) || size >= greedy.len() {
            if size >= greedy.len() {
                return Ok(RankCertificate { status: RankStatus::Exact, lower: lower_at(size), upper: greedy });
            }
            return Ok(RankCertificate { status: RankStatus::LimitReached, lower: lower_at(size), upper: greedy });
        }
        let mut chosen = Vec::new();
        match sc.search(&all, size, &mut chosen) {
            Ok(true) => {
                let upper = Cover::new(a.rows(), a.cols(), chosen.iter().map(|&c| rects[c].clone()).collect())?;
                return Ok(RankCertificate { status: RankStatus::Exact, lower: lower_at(upper.len()), upper });
            }
            Ok(false) => size += 1,
            Err(()) => {
                return Ok(RankCertificate { status: RankStatus::BudgetExceeded, lower: lower_at(size), upper: greedy });
            }
        }
        debug_assert!(sc.words == words);
    }
}

/// `R_B(A)` for lower-bound purposes: `σ(n)` for crown matrices (a proven
/// value), otherwise the lower end of the exact search.
fn rank_lower(a: &BoolMatrix, opts: RankOptions) -> Result<usize> {
    if let Some(n) = crown_order(a) {
        return Ok(sigma(n as u64));
    }
    Ok(exact_boolean_rank(a, opts)?.lower.value())
}

/// `Some(n)` if `a` is the crown matrix `C_n`.
pub fn crown_order(a: &BoolMatrix) -> Option<usize> {
    (a.rows() == a.cols() && *a == crown_matrix(a.rows())).then_some(a.rows())
}

fn mu_of(a: &BoolMatrix) -> Result<Mu> {
    match crown_order(a) {
        Some(n) => mu_crown(n),
        None => mu(a),
    }
}

/// Lower bounds on `R_B(A ⊗ B)` with their ingredients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KronLowerBound {
    pub mu_a: Mu,
    pub mu_b: Mu,
    pub rank_a: usize,
    pub rank_b: usize,
    pub isolation_a: Vec<(usize, usize)>,
    pub isolation_b: Vec<(usize, usize)>,
    /// `⌈max(μ(A)·R_B(B), μ(B)·R_B(A))⌉`.
    pub mu_bound: u64,
    /// `max(i(A)·R_B(B), i(B)·R_B(A))`.
    pub isolation_bound: u64,
}

impl KronLowerBound {
    pub fn value(&self) -> u64 {
        self.mu_bound.max(self.isolation_bound)
    }
}

pub fn kron_lower_bound(a: &BoolMatrix, b: &BoolMatrix, opts: RankOptions) -> Result<KronLowerBound> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Empty("matrix"));
    }
    let (mu_a, mu_b) = (mu_of(a)?, mu_of(b)?);
    let (rank_a, rank_b) = (rank_lower(a, opts)?, rank_lower(b, opts)?);
    let isolation = |m: &BoolMatrix| match crown_order(m) {
        Some(n) => crown_isolation_witness(n),
        None => isolation_number(m, DEFAULT_ISOLATION_BUDGET).witness,
    };
    let (isolation_a, isolation_b) = (isolation(a), isolation(b));
    let mu_bound = mu_a.value.ceil_mul(rank_b as u64).max(mu_b.value.ceil_mul(rank_a as u64));
    let isolation_bound = (isolation_a.len() * rank_b).max(isolation_b.len() * rank_a) as u64;
    Ok(KronLowerBound { mu_a, mu_b, rank_a, rank_b, isolation_a, isolation_b, mu_bound, isolation_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::verify_cover;
    use proptest::prelude::*;

    fn brute_rank(a: &BoolMatrix) -> usize {
        // smallest r such that some r maximal rectangles cover a
        let rects = maximal_rectangles(a).unwrap();
        if a.is_zero() {
            return 0;
        }
        let target = a.clone();
        for r in 1..=rects.len() {
            for pick in crate::combin::Combinations::new(rects.len(), r) {
                let c = Cover::new(a.rows(), a.cols(), pick.iter().map(|&t| rects[t].clone()).collect()).unwrap();
                if c.to_matrix() == target {
                    return r;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn small_ranks() {
        let j = BoolMatrix::ones(3, 3);
        assert_eq!(exact_boolean_rank(&j, RankOptions::default()).unwrap().exact(), Some(1));
        let z = BoolMatrix::zeros(2, 3);
        let c = exact_boolean_rank(&z, RankOptions::default()).unwrap();
        assert_eq!(c.exact(), Some(0));
        assert!(c.upper.is_empty());
        let c4 = exact_boolean_rank(&crown_matrix(4), RankOptions::default()).unwrap();
        assert_eq!(c4.exact(), Some(4));
        assert!(verify_cover(&crown_matrix(4), &c4.upper).unwrap().holds());
    }

    #[test]
    fn crown_ranks_match_sigma() {
        for n in 1..=7 {
            let c = exact_boolean_rank(&crown_matrix(n), RankOptions::default()).unwrap();
            assert_eq!(c.exact(), Some(sigma(n as u64)), "n = {n}");
        }
    }

    #[test]
    fn limit_stops_early() {
        let c = exact_boolean_rank(&crown_matrix(6), RankOptions { limit: Some(3), ..RankOptions::default() }).unwrap();
        assert_eq!(c.status, RankStatus::LimitReached);
        assert!(c.lower.value() >= 3);
        assert!(verify_cover(&crown_matrix(6), &c.upper).unwrap().holds());
    }

    #[test]
    fn tiny_budget_is_reported() {
        let c = exact_boolean_rank(&crown_matrix(7), RankOptions { limit: None, budget: 1 }).unwrap();
        assert_eq!(c.status, RankStatus::BudgetExceeded);
        assert!(c.lower.value() <= c.upper.len());
    }

    #[test]
    fn maximal_rectangles_of_crowns() {
        for n in 2..=6usize {
            assert_eq!(maximal_rectangles(&crown_matrix(n)).unwrap().len(), (1 << n) - 2);
        }
        assert_eq!(maximal_rectangles(&crown_matrix(4)).unwrap().len(), 14);
    }

    #[test]
    fn isolation_examples() {
        for n in 1..=6 {
            let r = isolation_number(&BoolMatrix::identity(n), DEFAULT_ISOLATION_BUDGET);
            assert!(r.exact);
            assert_eq!(r.size(), n);
        }
        for n in 3..=8 {
            let r = isolation_number(&crown_matrix(n), DEFAULT_ISOLATION_BUDGET);
            assert_eq!(r.size(), 3, "n = {n}");
            assert!(is_isolation_set(&crown_matrix(n), &r.witness));
            assert!(is_isolation_set(&crown_matrix(n), &crown_isolation_witness(n)));
        }
        assert_eq!(isolation_number(&BoolMatrix::ones(2, 2), 1000).size(), 1);
    }

    #[test]
    fn mu_values() {
        assert_eq!(mu_crown(4).unwrap().value, Ratio::new(3, 1).unwrap());
        assert_eq!(mu(&crown_matrix(4)).unwrap().value, Ratio::new(3, 1).unwrap());
        assert_eq!(mu_crown(5).unwrap().value, Ratio::new(10, 3).unwrap());
        assert_eq!(mu(&crown_matrix(5)).unwrap().value, Ratio::new(10, 3).unwrap());
        assert_eq!(mu(&BoolMatrix::ones(3, 4)).unwrap().value, Ratio::new(1, 1).unwrap());
        for n in 2..=9 {
            assert_eq!(mu(&crown_matrix(n)).unwrap().value, mu_crown(n).unwrap().value);
        }
        assert!(mu(&BoolMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn kron_bounds() {
        let o = RankOptions::default();
        let c4 = crown_matrix(4);
        let c5 = crown_matrix(5);
        assert_eq!(kron_lower_bound(&c4, &c4, o).unwrap().mu_bound, 12);
        assert_eq!(kron_lower_bound(&c4, &c5, o).unwrap().mu_bound, 14);
        assert_eq!(kron_lower_bound(&crown_matrix(10), &crown_matrix(10), o).unwrap().mu_bound, 18);
        assert_eq!(kron_lower_bound(&c4, &c4, o).unwrap().isolation_bound, 12);
    }

    #[test]
    fn ratio_arithmetic() {
        let r = Ratio::new(90, 25).unwrap();
        assert_eq!((r.num(), r.den()), (18, 5));
        assert_eq!(r.ceil_mul(5), 18);
        assert_eq!(r.ceil(), 4);
        assert!(Ratio::new(10, 3).unwrap() > Ratio::new(3, 1).unwrap());
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = BoolMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BoolMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
        })
    }

    proptest! {
        #[test]
        fn exact_rank_matches_brute_force(a in arb_matrix(4)) {
            let c = exact_boolean_rank(&a, RankOptions::default()).unwrap();
            prop_assert_eq!(c.exact(), Some(brute_rank(&a)));
            prop_assert!(verify_cover(&a, &c.upper).unwrap().holds());
        }

        #[test]
        fn lower_bounds_sandwich(a in arb_matrix(5)) {
            prop_assume!(!a.is_zero());
            let r = exact_boolean_rank(&a, RankOptions::default()).unwrap().exact().unwrap();
            let iso = isolation_number(&a, DEFAULT_ISOLATION_BUDGET);
            prop_assert!(is_isolation_set(&a, &iso.witness));
            prop_assert!(iso.size() <= r);
            prop_assert!(mu(&a).unwrap().value.ceil() as usize <= r);
        }

        #[test]
        fn maximal_rectangles_are_maximal(a in arb_matrix(5)) {
            for r in maximal_rectangles(&a).unwrap() {
                prop_assert!(r.rows().iter().all(|&i| r.cols().iter().all(|&j| a.get(i, j))));
                let extra_row = (0..a.rows()).any(|i| !r.rows().contains(&i) && r.cols().iter().all(|&j| a.get(i, j)));
                let extra_col = (0..a.cols()).any(|j| !r.cols().contains(&j) && r.rows().iter().all(|&i| a.get(i, j)));
                prop_assert!(!extra_row && !extra_col);
            }
        }
    }
}
