//! Crown matrices, covers from subset families, the bijections behind the
//! coverable triples, and the gap covers of `C_n ⊗ C_m`.
//!
//! Subsets of `[k] = {1, .., k}` are `u64` masks (element `e` is bit
//! `e - 1`), so `k ≤ 63`. Families are enumerated in colex order, which is
//! the numeric order of the masks.
//!
//! For an ordered family `F = (F_1, .., F_n)` of distinct `ℓ`-subsets, the
//! matrix `B_F` has a 1 at `(i, j)` iff `F_i` meets the complement of `F_j`,
//! so `B_F = C_n`. The rectangle `P_F(t)` has rows `{i : t ∈ F_i}` and
//! columns `{j : t ∉ F_j}`; the `k` rectangles together cover `B_F`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::boolmat::BoolMatrix;
use crate::combin::{binomial, colex_subsets, half_up, mask_elements};
use crate::cover::{best_triple_ordering, compose_kron_cover, check_half_covering, Cover, KronCover, MatrixFamily, Rectangle};
use crate::error::{Error, Result};

const MAX_GROUND: usize = 63;

/// The `n × n` matrix with zeros on the diagonal and ones elsewhere.
pub fn crown_matrix(n: usize) -> BoolMatrix {
    BoolMatrix::from_fn(n, n, |i, j| i != j)
}

/// `σ(n)`: the smallest `k` with `n ≤ C(k, ⌈k/2⌉)`, the Boolean rank of
/// `C_n` (`σ(1) = 0`, since `C_1` is zero).
pub fn sigma(n: u64) -> usize {
    sigma_big(&BigUint::from(n))
}

pub fn sigma_big(n: &BigUint) -> usize {
    (0u64..)
        .find(|&k| binomial(k, half_up(k as usize) as u64) >= *n)
        .expect("central binomials are unbounded") as usize
}

/// An ordered list of distinct `ell`-subsets of `[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetFamily {
    k: usize,
    ell: usize,
    sets: Vec<u64>,
}

impl SubsetFamily {
    pub fn new(k: usize, ell: usize, sets: Vec<u64>) -> Result<Self> {
        if k > MAX_GROUND {
            return Err(Error::InvalidParameter(format!("ground set size {k} exceeds {MAX_GROUND}")));
        }
        let ground = if k == 64 { !0 } else { (1u64 << k) - 1 };
        for (i, &s) in sets.iter().enumerate() {
            if s & !ground != 0 || s.count_ones() as usize != ell {
                return Err(Error::InvalidParameter(format!(
                    "set {} is not an {ell}-subset of [{k}]",
                    i + 1
                )));
            }
        }
        let mut sorted = sets.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(String::from("sets are not distinct")));
        }
        Ok(SubsetFamily { k, ell, sets })
    }

    /// Build from 1-based element lists.
    pub fn from_elements(k: usize, ell: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(sets.len());
        for s in sets {
            let mut m = 0u64;
            for &e in s {
                if e == 0 || e > k || e > MAX_GROUND {
                    return Err(Error::OutOfRange { index: e, bound: k + 1 });
                }
                m |= 1 << (e - 1);
            }
            masks.push(m);
        }
        Self::new(k, ell, masks)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    /// Set `i` as sorted 1-based elements.
    pub fn elements(&self, i: usize) -> Vec<usize> {
        mask_elements(self.sets[i])
    }

    /// `B_F`.
    pub fn matrix(&self) -> BoolMatrix {
        let n = self.len();
        BoolMatrix::from_fn(n, n, |i, j| self.sets[i] & !self.sets[j] != 0)
    }

    /// `P_F(t)` for `t ∈ [k]`; an error if it would be empty.
    pub fn intersection_rectangle(&self, t: usize) -> Result<Rectangle> {
        if t == 0 || t > self.k {
            return Err(Error::OutOfRange { index: t, bound: self.k + 1 });
        }
        self.rectangle_of(t).ok_or(Error::Empty("rectangle"))
    }

    fn rectangle_of(&self, t: usize) -> Option<Rectangle> {
        let bit = 1u64 << (t - 1);
        let rows: Vec<usize> = (0..self.len()).filter(|&i| self.sets[i] & bit != 0).collect();
        let cols: Vec<usize> = (0..self.len()).filter(|&j| self.sets[j] & bit == 0).collect();
        Rectangle::new(rows, cols).ok()
    }

    /// The nonempty rectangles among `P_F(t)` for `t` in `ts`, in that order.
    pub fn rectangles(&self, ts: impl IntoIterator<Item = usize>) -> Cover {
        let rects = ts.into_iter().filter_map(|t| self.rectangle_of(t)).collect();
        Cover::new(self.len(), self.len(), rects).expect("indices in range")
    }

    /// The cover of `B_F` by all nonempty `P_F(t)`, `t ∈ [k]`.
    pub fn cover(&self) -> Cover {
        self.rectangles(1..=self.k)
    }

    /// The family `(h(F_1), .., h(F_n))`.
    pub fn map(&self, h: &FamilyBijection) -> Result<SubsetFamily> {
        let sets = self
            .sets
            .iter()
            .map(|&s| h.apply(s).ok_or_else(|| Error::InvalidParameter(format!("{:?} not in the domain", mask_elements(s)))))
            .collect::<Result<Vec<_>>>()?;
        SubsetFamily::new(self.k, self.ell, sets)
    }
}

/// The first `n` of the `⌈k/2⌉`-subsets of `[k]` in colex order.
pub fn canonical_family(k: usize, n: usize) -> Result<SubsetFamily> {
    if k > MAX_GROUND {
        return Err(Error::InvalidParameter(format!("ground set size {k} exceeds {MAX_GROUND}")));
    }
    let ell = half_up(k);
    if BigUint::from(n) > binomial(k as u64, ell as u64) {
        return Err(Error::InvalidParameter(format!("{n} exceeds C({k},{ell})")));
    }
    let sets = crate::combin::ColexSubsets::new(k, ell).take(n).collect();
    SubsetFamily::new(k, ell, sets)
}

/// A bijection from a set collection onto itself, given pointwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyBijection {
    domain: Vec<u64>,
    images: Vec<u64>,
    index: BTreeMap<u64, usize>,
}

impl FamilyBijection {
    /// `images[i]` is the image of `domain[i]`; must be a permutation of
    /// `domain`.
    pub fn new(domain: Vec<u64>, images: Vec<u64>) -> Result<Self> {
        if domain.len() != images.len() {
            return Err(Error::InvalidParameter(String::from("domain and images differ in length")));
        }
        let mut a = domain.clone();
        let mut b = images.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b || a.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(String::from("images are not a permutation of the domain")));
        }
        let index = domain.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        Ok(FamilyBijection { domain, images, index })
    }

    pub fn identity(domain: Vec<u64>) -> Result<Self> {
        Self::new(domain.clone(), domain)
    }

    pub fn domain(&self) -> &[u64] {
        &self.domain
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn apply(&self, set: u64) -> Option<u64> {
        self.index.get(&set).map(|&i| self.images[i])
    }
}

/// First `F` with `F ∩ L ≠ h(F) ∩ L`.
pub fn preserving_violation(h: &FamilyBijection, l: u64) -> Option<u64> {
    h.domain.iter().zip(&h.images).find(|(d, e)| *d & l != *e & l).map(|(d, _)| *d)
}

pub fn is_l_preserving(h: &FamilyBijection, l: u64) -> bool {
    preserving_violation(h, l).is_none()
}

/// First pair `(D, E)` with `∅ ≠ D ∖ E ⊆ L` but `(h(D) ∖ h(E)) ∖ L = ∅`.
pub fn shifting_violation(h: &FamilyBijection, l: u64) -> Option<(u64, u64)> {
    for (&d, &hd) in h.domain.iter().zip(&h.images) {
        for (&e, &he) in h.domain.iter().zip(&h.images) {
            let diff = d & !e;
            if diff != 0 && diff & !l == 0 && hd & !he & !l == 0 {
                return Some((d, e));
            }
        }
    }
    None
}

pub fn is_l_intersection_shifting(h: &FamilyBijection, l: u64) -> bool {
    shifting_violation(h, l).is_none()
}

/// Maximum bipartite matching by augmenting paths; `adj[u]` lists the right
/// vertices of left vertex `u`. Returns the partner of each left vertex.
fn max_matching(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; n_right];
    for u in 0..adj.len() {
        let mut seen = vec![false; n_right];
        augment(u, adj, &mut seen, &mut owner);
    }
    let mut partner = vec![None; adj.len()];
    for (v, o) in owner.iter().enumerate() {
        if let Some(u) = o {
            partner[*u] = Some(v);
        }
    }
    partner
}

/// The bijection `g` on the `(⌈k/2⌉ − 1)`-subsets of `[k − 1]` with
/// `F ∩ g(F) = ∅` for every `F`.
///
/// Odd `k`: complement in `[k − 1]`. Even `k`: complement of the partner of
/// `F` in a perfect matching between `(ℓ−1)`- and `ℓ`-subsets of `[k − 1]`
/// under containment.
pub fn build_g(k: usize) -> Result<FamilyBijection> {
    if !(2..=MAX_GROUND).contains(&k) {
        return Err(Error::InvalidParameter(format!("k = {k} must be in 2..={MAX_GROUND}")));
    }
    let ell = half_up(k);
    let ground = (1u64 << (k - 1)) - 1;
    let domain = colex_subsets(k - 1, ell - 1);
    let images = if k % 2 == 1 {
        domain.iter().map(|&f| ground & !f).collect()
    } else {
        let right = colex_subsets(k - 1, ell);
        let right_index: BTreeMap<u64, usize> = right.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let adj: Vec<Vec<usize>> = domain
            .iter()
            .map(|&f| {
                let mut nbrs: Vec<usize> = (0..k - 1)
                    .filter(|&e| f >> e & 1 == 0)
                    .map(|e| right_index[&(f | 1 << e)])
                    .collect();
                nbrs.sort_unstable();
                nbrs
            })
            .collect();
        let partner = max_matching(&adj, right.len());
        partner
            .iter()
            .map(|p| p.map(|v| ground & !right[v]))
            .collect::<Option<Vec<u64>>>()
            .ok_or(Error::Internal("containment graph has no perfect matching"))?
    };
    FamilyBijection::new(domain, images)
}

/// Drop bit `i` (0-based) and shift higher bits down.
fn squeeze(mask: u64, i: usize) -> u64 {
    let low = mask & ((1u64 << i) - 1);
    let high = mask >> (i + 1);
    low | high << i
}

/// Inverse of [`squeeze`] with bit `i` clear.
fn unsqueeze(mask: u64, i: usize) -> u64 {
    let low = mask & ((1u64 << i) - 1);
    let high = mask >> i;
    low | high << (i + 1)
}

/// The `{i}`-preserving, `{i}`-intersection-shifting bijection `h` on all
/// `⌈k/2⌉`-subsets of `[k]`: `h(F) = g(F ∖ {i}) ∪ {i}` when `i ∈ F`, and
/// `h(F) = F` otherwise, with `g` from [`build_g`] on `[k] ∖ {i}`.
pub fn build_h(k: usize, i: usize) -> Result<FamilyBijection> {
    if !(5..=MAX_GROUND).contains(&k) {
        return Err(Error::InvalidParameter(format!("k = {k} must be in 5..={MAX_GROUND}")));
    }
    if i == 0 || i > k {
        return Err(Error::OutOfRange { index: i, bound: k + 1 });
    }
    let g = build_g(k)?;
    let bit = 1u64 << (i - 1);
    let domain = colex_subsets(k, half_up(k));
    let images = domain
        .iter()
        .map(|&f| {
            if f & bit == 0 {
                f
            } else {
                let image = g.apply(squeeze(f & !bit, i - 1)).expect("g is total on (ℓ-1)-subsets");
                unsqueeze(image, i - 1) | bit
            }
        })
        .collect();
    FamilyBijection::new(domain, images)
}

/// Three matrices, every two of which cover `C_n` for `n = C(k, ⌈k/2⌉)`,
/// with rank-1 decompositions of sizes `r`, `k − r`, `k − r`:
/// `A_1 = Σ_{t ≤ r} P_F(t)`, `A_2 = Σ_{t > r} P_F(t)` and
/// `A_3 = Σ_{t > r} P_{h(F)}(t)` for the canonical family `F`.
///
/// `h` must be `[r]`-preserving and `[r]`-intersection shifting; for
/// `r = 1` it may be omitted and [`build_h`]`(k, 1)` is used.
pub fn triple_cover(k: usize, r: usize, h: Option<&FamilyBijection>) -> Result<MatrixFamily> {
    if r == 0 || r > k {
        return Err(Error::InvalidParameter(format!("r = {r} must be in 1..={k}")));
    }
    let built;
    let h = match (h, r) {
        (Some(h), _) => h,
        (None, 1) => {
            built = build_h(k, 1)?;
            &built
        }
        (None, _) => {
            return Err(Error::InvalidParameter(format!(
                "no [r]-preserving, [r]-intersection-shifting bijection known for r = {r}"
            )))
        }
    };
    let n = binomial(k as u64, half_up(k) as u64);
    let n = usize::try_from(n).map_err(|_| Error::InvalidParameter(format!("C({k},{}) is too large", half_up(k))))?;
    let f = canonical_family(k, n)?;
    let fh = f.map(h)?;
    let covers = vec![f.rectangles(1..=r), f.rectangles(r + 1..=k), fh.rectangles(r + 1..=k)];
    let fam = MatrixFamily::from_covers(n, n, covers)?;
    if let crate::cover::Verdict::Fails(w) = check_half_covering(&crown_matrix(n), &fam)? {
        return Err(Error::Hypothesis(format!("members {w:?} do not cover C_{n}")));
    }
    Ok(fam)
}

/// The explicit `(2, 2, 3)`-coverable triple for `C_5`, built from a
/// labelling of rows and columns by subsets of `[7]`: member `t` is the sum
/// of the rectangles `{i : e ∈ R_i} × {j : e ∈ K_j}` over `e` in
/// `{1,2}`, `{3,4}`, `{5,6,7}` respectively.
pub fn c5_triple() -> MatrixFamily {
    const ROWS: [[usize; 4]; 5] = [[1, 4, 5, 7], [1, 3, 6, 7], [2, 4, 6, 7], [2, 3, 5, 7], [3, 4, 5, 6]];
    const COLS: [[usize; 3]; 5] = [[2, 3, 6], [2, 4, 5], [1, 3, 5], [1, 4, 6], [1, 2, 7]];
    let groups: [&[usize]; 3] = [&[1, 2], &[3, 4], &[5, 6, 7]];
    let covers = groups
        .iter()
        .map(|g| {
            let rects = g
                .iter()
                .map(|&e| {
                    let rows = (0..5).filter(|&i| ROWS[i].contains(&e)).collect();
                    let cols = (0..5).filter(|&j| COLS[j].contains(&e)).collect();
                    Rectangle::new(rows, cols).expect("every label is used")
                })
                .collect();
            Cover::new(5, 5, rects).expect("in range")
        })
        .collect();
    MatrixFamily::from_covers(5, 5, covers).expect("5x5 members")
}

/// A `(2, 2, 2)`-coverable triple for `C_4`, found by exhaustive search
/// over unions of maximal rectangles (see [`find_coverable_triple`]).
pub fn c4_triple() -> MatrixFamily {
    const MEMBERS: [[([usize; 2], [usize; 2]); 2]; 3] = [
        [([0, 2], [1, 3]), ([1, 3], [0, 2])],
        [([0, 3], [1, 2]), ([1, 2], [0, 3])],
        [([0, 1], [2, 3]), ([2, 3], [0, 1])],
    ];
    let covers = MEMBERS
        .iter()
        .map(|m| {
            let rects = m
                .iter()
                .map(|(r, c)| Rectangle::new(r.to_vec(), c.to_vec()).expect("sorted"))
                .collect();
            Cover::new(4, 4, rects).expect("in range")
        })
        .collect();
    MatrixFamily::from_covers(4, 4, covers).expect("4x4 members")
}

/// Exhaustive search for three matrices of Boolean rank at most `sizes[0]`,
/// `sizes[1]`, `sizes[2]` such that every two of them cover `a`. Only
/// unions of maximal rectangles need to be tried, since enlarging members
/// keeps every pairwise sum inside `a`. Requires `rows · cols ≤ 64`.
pub fn find_coverable_triple(a: &BoolMatrix, sizes: [usize; 3]) -> Result<Option<MatrixFamily>> {
    let (rows, cols) = a.dims();
    if rows * cols > 64 {
        return Err(Error::InvalidParameter(String::from("coverable-triple search needs at most 64 entries")));
    }
    let flat = |m: &BoolMatrix| m.ones_iter().fold(0u64, |acc, (i, j)| acc | 1 << (i * cols + j));
    let target = flat(a);
    let maximal = crate::bounds::maximal_rectangles(a)?;
    let rect_masks: Vec<u64> = maximal
        .iter()
        .map(|r| flat(&r.to_matrix(rows, cols).expect("in range")))
        .collect();
    // unions of at most `s` maximal rectangles, with one witness list each
    let unions = |s: usize| -> BTreeMap<u64, Vec<usize>> {
        let mut out: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        out.insert(0, Vec::new());
        for _ in 0..s {
            let snapshot: Vec<(u64, Vec<usize>)> = out.iter().map(|(k, v)| (*k, v.clone())).collect();
            for (m, picks) in snapshot {
                let from = picks.last().map_or(0, |&p| p + 1);
                for (t, &r) in rect_masks.iter().enumerate().skip(from) {
                    out.entry(m | r).or_insert_with(|| {
                        let mut p = picks.clone();
                        p.push(t);
                        p
                    });
                }
            }
        }
        out
    };
    let cands: Vec<BTreeMap<u64, Vec<usize>>> = sizes.iter().map(|&s| unions(s)).collect();
    for (&m3, p3) in &cands[2] {
        let l1: Vec<(&u64, &Vec<usize>)> = cands[0].iter().filter(|(m, _)| *m | m3 == target).collect();
        let l2: Vec<(&u64, &Vec<usize>)> = cands[1].iter().filter(|(m, _)| *m | m3 == target).collect();
        for &(m1, p1) in &l1 {
            if let Some(&(_, p2)) = l2.iter().find(|(m2, _)| m1 | *m2 == target) {
                let covers = [p1, p2, p3]
                    .iter()
                    .map(|p| Cover::new(rows, cols, p.iter().map(|&t| maximal[t].clone()).collect()))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(Some(MatrixFamily::from_covers(rows, cols, covers)?));
            }
        }
    }
    Ok(None)
}

/// A coverable triple for `C_n` together with its decomposition sizes:
/// `c4_triple` for `n = 4`, `c5_triple` for `n = 5`, and the
/// `(1, k − 1, k − 1)` triple for `k = σ(n)` restricted to its leading
/// `n × n` block for `n ≥ 7`.
pub fn crown_triple(n: usize) -> Result<MatrixFamily> {
    match n {
        4 => Ok(c4_triple()),
        5 => Ok(c5_triple()),
        n if n >= 7 => {
            let k = sigma(n as u64);
            triple_cover(k, 1, None)?.restrict(n, n)
        }
        _ => Err(Error::InvalidParameter(format!("no coverable triple known for C_{n}"))),
    }
}

fn sizes3(f: &MatrixFamily) -> [usize; 3] {
    let s = f.decomposition_sizes();
    [s[0].unwrap_or(0), s[1].unwrap_or(0), s[2].unwrap_or(0)]
}

/// A cover of `C_n ⊗ C_m` with fewer than `σ(n) · σ(m)` rectangles,
/// composed from coverable triples of both factors (the second reordered to
/// minimize the size). Supported for `n, m ∈ {4, 5} ∪ {7, 8, ..}` except
/// `n = m = 5`.
pub fn gap_cover(n: usize, m: usize) -> Result<KronCover> {
    let ta = crown_triple(n)?;
    let tb = crown_triple(m)?;
    let (perm, cost) = best_triple_ordering(sizes3(&ta), sizes3(&tb));
    let bound = sigma(n as u64) * sigma(m as u64);
    if cost >= bound {
        return Err(Error::InvalidParameter(format!(
            "the triples for C_{n} and C_{m} give {cost} rectangles, not below {bound}"
        )));
    }
    let tb = tb.select(&perm)?;
    compose_kron_cover(&crown_matrix(n), &ta, &crown_matrix(m), &tb)
}

/// Verify a cover of `C_n ⊗ C_m`: eagerly when `n · m ≤ eager_dim`,
/// otherwise through the Kronecker hypotheses of its grouped families.
pub fn verify_crown_product(n: usize, m: usize, c: &KronCover, eager_dim: usize) -> Result<bool> {
    let (a, b) = (crown_matrix(n), crown_matrix(m));
    if n * m <= eager_dim {
        let p = crate::boolmat::kronecker(&a, &b)?;
        Ok(crate::cover::verify_cover(&p, &c.to_cover())?.holds())
    } else {
        c.verify_lazy(&a, &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::verify_cover;

    fn set(elems: &[usize]) -> u64 {
        crate::combin::elements_mask(elems)
    }

    #[test]
    fn crowns() {
        assert_eq!(crown_matrix(1), BoolMatrix::zeros(1, 1));
        assert_eq!(crown_matrix(2), BoolMatrix::from_rows(&[[0u8, 1], [1, 0]]).unwrap());
        let c4 = crown_matrix(4);
        assert_eq!(c4.count_ones(), 12);
        assert!((0..4).all(|i| !c4.get(i, i)));
    }

    #[test]
    fn sigma_values() {
        // direct scan: smallest k with C(k, ceil(k/2)) >= n
        fn oracle(n: u64) -> usize {
            let mut k = 0u64;
            loop {
                let h = k.div_ceil(2);
                let c: u64 = (0..h).fold(1u64, |acc, i| acc * (k - i) / (i + 1));
                if c >= n {
                    return k as usize;
                }
                k += 1;
            }
        }
        for (n, s) in [(2, 2), (4, 4), (5, 4), (7, 5), (35, 7), (6859, 16)] {
            assert_eq!(sigma(n), s, "sigma({n})");
            assert_eq!(oracle(n), s);
        }
        for n in 1..=3000 {
            assert_eq!(sigma(n), oracle(n));
        }
    }

    #[test]
    fn canonical_families() {
        let f = canonical_family(4, 4).unwrap();
        let got: Vec<Vec<usize>> = (0..4).map(|i| f.elements(i)).collect();
        assert_eq!(got, vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 4]]);
        assert_eq!(canonical_family(4, 6).unwrap().len(), 6);
        assert_eq!(canonical_family(5, 10).unwrap().len(), 10);
        assert!(canonical_family(4, 7).is_err());
    }

    #[test]
    fn b_f_is_crown_and_rectangles_cover() {
        for k in 1..=10 {
            let ell = half_up(k);
            let n = colex_subsets(k, ell).len();
            let f = canonical_family(k, n).unwrap();
            assert_eq!(f.matrix(), crown_matrix(n));
            assert!(verify_cover(&crown_matrix(n), &f.cover()).unwrap().holds(), "k = {k}");
        }
    }

    #[test]
    fn rectangle_p1_of_full_k4() {
        let f = canonical_family(4, 6).unwrap();
        let r = f.intersection_rectangle(1).unwrap();
        // sets containing 1: {1,2},{1,3},{1,4}; not containing: {2,3},{2,4},{3,4}
        let with: Vec<usize> = (0..6).filter(|&i| f.elements(i).contains(&1)).collect();
        let without: Vec<usize> = (0..6).filter(|&i| !f.elements(i).contains(&1)).collect();
        assert_eq!(r.rows(), &with[..]);
        assert_eq!(r.cols(), &without[..]);
        assert_eq!((r.rows().len(), r.cols().len()), (3, 3));
        assert!(f.intersection_rectangle(5).is_err());
        let partial = SubsetFamily::from_elements(4, 2, &[vec![1, 2], vec![1, 3]]).unwrap();
        assert!(matches!(partial.intersection_rectangle(4), Err(Error::Empty(_))));
    }

    #[test]
    fn g_properties() {
        for k in 2..=12 {
            let g = build_g(k).unwrap();
            for (&f, &gf) in g.domain().iter().zip(g.images()) {
                assert_eq!(f & gf, 0, "k = {k}");
            }
        }
        let g5 = build_g(5).unwrap();
        assert_eq!(g5.apply(set(&[1, 2])), Some(set(&[3, 4])));
    }

    #[test]
    fn h_examples() {
        let h = build_h(5, 1).unwrap();
        assert_eq!(h.apply(set(&[1, 2, 3])), Some(set(&[1, 4, 5])));
        assert_eq!(h.apply(set(&[2, 3, 4])), Some(set(&[2, 3, 4])));
        let (d, e) = (set(&[1, 2, 3]), set(&[2, 3, 5]));
        assert_eq!(d & !e, set(&[1]));
        let (hd, he) = (h.apply(d).unwrap(), h.apply(e).unwrap());
        assert_eq!(hd & !he & !set(&[1]), set(&[4]));
        assert!(build_h(4, 1).is_err());
        assert!(build_h(5, 6).is_err());
    }

    #[test]
    fn h_is_preserving_and_shifting() {
        for k in 5..=8 {
            for i in 1..=k {
                let h = build_h(k, i).unwrap();
                let l = set(&[i]);
                assert!(is_l_preserving(&h, l), "k={k} i={i}");
                assert!(is_l_intersection_shifting(&h, l), "k={k} i={i}");
            }
        }
    }

    #[test]
    fn identity_is_preserving_not_shifting() {
        let id = FamilyBijection::identity(colex_subsets(5, 3)).unwrap();
        assert!(is_l_preserving(&id, set(&[1])));
        assert!(is_l_preserving(&id, set(&[2, 4])));
        let (d, e) = shifting_violation(&id, set(&[1])).unwrap();
        assert_eq!(d & !e, set(&[1]));
    }

    #[test]
    fn bijection_must_permute() {
        assert!(FamilyBijection::new(vec![1, 2], vec![1, 1]).is_err());
        assert!(FamilyBijection::new(vec![1, 2], vec![2, 4]).is_err());
    }

    #[test]
    fn triples_for_k5_and_k7() {
        for (k, n) in [(5, 10), (7, 35)] {
            let t = triple_cover(k, 1, None).unwrap();
            assert_eq!(t.dims(), (n, n));
            assert_eq!(t.decomposition_sizes(), vec![Some(1), Some(k - 1), Some(k - 1)]);
            assert!(check_half_covering(&crown_matrix(n), &t).unwrap().holds());
        }
        assert!(triple_cover(5, 2, None).is_err());
    }

    #[test]
    fn triple_c35_composes_to_48() {
        let t = triple_cover(7, 1, None).unwrap();
        let (perm, cost) = best_triple_ordering([1, 6, 6], [1, 6, 6]);
        assert_eq!(cost, 48);
        let kc = compose_kron_cover(&crown_matrix(35), &t, &crown_matrix(35), &t.select(&perm).unwrap()).unwrap();
        assert_eq!(kc.len(), 48);
        assert!(verify_crown_product(35, 35, &kc, 4900).unwrap());
    }

    #[test]
    fn c5_members_match_printed_matrices() {
        let t = c5_triple();
        let a1 = BoolMatrix::from_rows(&[b"00111", b"00111", b"11001", b"11001", b"00000"].map(bits)).unwrap();
        let a2 = BoolMatrix::from_rows(&[b"01010", b"10100", b"01010", b"10100", b"11110"].map(bits)).unwrap();
        let a3 = BoolMatrix::from_rows(&[b"01101", b"10011", b"10011", b"01101", b"11110"].map(bits)).unwrap();
        assert_eq!(t.members(), &[a1, a2, a3]);
        assert_eq!(t.decomposition_sizes(), vec![Some(2), Some(2), Some(3)]);
        assert!(check_half_covering(&crown_matrix(5), &t).unwrap().holds());
    }

    fn bits(s: &[u8; 5]) -> [u8; 5] {
        s.map(|c| c - b'0')
    }

    #[test]
    fn c4_triple_is_frozen_search_result() {
        let c4 = crown_matrix(4);
        let found = find_coverable_triple(&c4, [2, 2, 2]).unwrap().expect("C4 is (2,2,2)-coverable");
        assert!(check_half_covering(&c4, &found).unwrap().holds());
        let t = c4_triple();
        assert_eq!(t.members(), found.members());
        assert_eq!(t.decomposition_sizes(), vec![Some(2); 3]);
        assert!(check_half_covering(&c4, &t).unwrap().holds());
        assert!(find_coverable_triple(&c4, [1, 1, 1]).unwrap().is_none());
    }

    #[test]
    fn c5_coverability_profile() {
        let c5 = crown_matrix(5);
        assert!(find_coverable_triple(&c5, [2, 2, 2]).unwrap().is_none());
        assert!(find_coverable_triple(&c5, [3, 3, 1]).unwrap().is_none());
        let t = find_coverable_triple(&c5, [2, 2, 3]).unwrap().expect("C5 is (2,2,3)-coverable");
        assert!(check_half_covering(&c5, &t).unwrap().holds());
    }

    #[test]
    fn gap_cover_small() {
        for (n, m, size) in [(4, 4, 12), (4, 5, 14), (7, 7, 24), (7, 10, 24), (4, 7, 18), (5, 7, 19)] {
            let kc = gap_cover(n, m).unwrap();
            assert_eq!(kc.len(), size, "({n},{m})");
            assert!(verify_crown_product(n, m, &kc, 4900).unwrap());
            assert!(kc.verify_lazy(&crown_matrix(n), &crown_matrix(m)).unwrap());
        }
        assert!(gap_cover(5, 5).is_err());
        assert!(gap_cover(6, 7).is_err());
        assert!(gap_cover(3, 7).is_err());
    }

    #[test]
    fn squeeze_roundtrip() {
        for m in 0u64..256 {
            for i in 0..8 {
                let cleared = m & !(1 << i);
                assert_eq!(unsqueeze(squeeze(cleared, i), i), cleared);
            }
        }
    }
}
