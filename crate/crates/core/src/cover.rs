//! Cover certificates and their verification, and the composition of covers
//! of `A ⊗ B` from two matrix families.
//!
//! Two families `M = (M_1..M_s)` and `N = (N_1..N_s)` satisfy the
//! *Kronecker hypotheses* for `(A, B)` when `M` covers `A` and, for every
//! 1-entry `(i, j)` of `A`, the members `N_t` with `(M_t)_{i,j} = 1` cover
//! `B`. Then `A ⊗ B = Σ_t M_t ⊗ N_t`, so products of the rank-1 pieces of
//! `M_t` and `N_t` cover `A ⊗ B`. Checking the hypotheses never touches the
//! product matrix, which is how covers far above the materialization limit
//! are certified.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boolmat::{self, check_limit, pattern, BoolMatrix, DEFAULT_MATERIALIZATION_LIMIT};
use crate::combin::{binomial_u128, Combinations};
use crate::error::{Error, Result};

/// Outcome of a verification: either it holds, or the first failure in
/// row-major (entries) or lexicographic (subsets) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

/// An all-ones combinatorial rectangle `rows × cols`, both index sets
/// nonempty and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rectangle {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl Rectangle {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.is_empty() || cols.is_empty() || !strictly_increasing(&rows) || !strictly_increasing(&cols) {
            return Err(Error::MalformedRectangle);
        }
        Ok(Rectangle { rows, cols })
    }

    /// Sorts and deduplicates the index sets first.
    pub fn from_unsorted(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self> {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        Self::new(rows, cols)
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn area(&self) -> u64 {
        self.rows.len() as u64 * self.cols.len() as u64
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows.binary_search(&i).is_ok() && self.cols.binary_search(&j).is_ok()
    }

    fn check_bounds(&self, rows: usize, cols: usize) -> Result<()> {
        let r = *self.rows.last().expect("nonempty");
        if r >= rows {
            return Err(Error::OutOfRange { index: r, bound: rows });
        }
        let c = *self.cols.last().expect("nonempty");
        if c >= cols {
            return Err(Error::OutOfRange { index: c, bound: cols });
        }
        Ok(())
    }

    pub fn to_matrix(&self, rows: usize, cols: usize) -> Result<BoolMatrix> {
        BoolMatrix::from_rectangle(rows, cols, &self.rows, &self.cols)
    }

    /// Intersection with the leading `rows × cols` block, `None` if empty.
    pub fn restrict(&self, rows: usize, cols: usize) -> Option<Rectangle> {
        let r: Vec<usize> = self.rows.iter().copied().take_while(|&i| i < rows).collect();
        let c: Vec<usize> = self.cols.iter().copied().take_while(|&j| j < cols).collect();
        (!r.is_empty() && !c.is_empty()).then_some(Rectangle { rows: r, cols: c })
    }

    /// The rectangle `self ⊗ other` in a product whose right factor has
    /// dimensions `b_dims`.
    pub fn kron(&self, other: &Rectangle, b_dims: (usize, usize)) -> Rectangle {
        let rows = self
            .rows
            .iter()
            .flat_map(|&ia| other.rows.iter().map(move |&ib| ia * b_dims.0 + ib))
            .collect();
        let cols = self
            .cols
            .iter()
            .flat_map(|&ja| other.cols.iter().map(move |&jb| ja * b_dims.1 + jb))
            .collect();
        Rectangle { rows, cols }
    }
}

/// An ordered list of rectangles certifying a cover of a `rows × cols`
/// target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    rows: usize,
    cols: usize,
    rects: Vec<Rectangle>,
}

impl Cover {
    pub fn new(rows: usize, cols: usize, rects: Vec<Rectangle>) -> Result<Self> {
        for r in &rects {
            r.check_bounds(rows, cols)?;
        }
        Ok(Cover { rows, cols, rects })
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Cover { rows, cols, rects: Vec::new() }
    }

    /// A rank-1 decomposition of `m` with one rectangle per distinct nonzero
    /// row pattern (not minimal in general).
    pub fn row_decomposition(m: &BoolMatrix) -> Self {
        let mut groups: BTreeMap<&[u64], Vec<usize>> = BTreeMap::new();
        let mut order = Vec::new();
        for i in m.nonzero_rows() {
            let key = m.row_words(i);
            groups
                .entry(key)
                .or_insert_with(|| {
                    order.push(key);
                    Vec::new()
                })
                .push(i);
        }
        let rects = order
            .into_iter()
            .map(|key| Rectangle {
                rows: groups[key].clone(),
                cols: boolmat::iter_bits(key).collect(),
            })
            .collect();
        Cover { rows: m.rows(), cols: m.cols(), rects }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn rects(&self) -> &[Rectangle] {
        &self.rects
    }

    pub fn into_rects(self) -> Vec<Rectangle> {
        self.rects
    }

    /// Boolean sum of the rectangles.
    pub fn to_matrix(&self) -> BoolMatrix {
        let mut m = BoolMatrix::zeros(self.rows, self.cols);
        for r in &self.rects {
            let pat = pattern(self.cols, &r.cols);
            for &i in &r.rows {
                m.or_row(i, &pat);
            }
        }
        m
    }

    /// Restriction to the leading `rows × cols` block; rectangles that
    /// become empty are dropped.
    pub fn restrict(&self, rows: usize, cols: usize) -> Cover {
        Cover {
            rows,
            cols,
            rects: self.rects.iter().filter_map(|r| r.restrict(rows, cols)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverFailure {
    /// Rectangle `rect` contains the 0-entry `(row, col)` of the target.
    RectangleHitsZero { rect: usize, row: usize, col: usize },
    /// The 1-entry `(row, col)` lies in no rectangle.
    Uncovered { row: usize, col: usize },
}

/// Check that every rectangle is all-ones in `a` and that together they
/// cover every 1 of `a`.
pub fn verify_cover(a: &BoolMatrix, c: &Cover) -> Result<Verdict<CoverFailure>> {
    if a.dims() != c.dims() {
        return Err(Error::DimensionMismatch {
            expected_rows: a.rows(),
            expected_cols: a.cols(),
            rows: c.rows,
            cols: c.cols,
        });
    }
    for r in &c.rects {
        r.check_bounds(a.rows(), a.cols())?;
    }
    let mut covered = BoolMatrix::zeros(a.rows(), a.cols());
    for (t, r) in c.rects.iter().enumerate() {
        let pat = pattern(a.cols(), &r.cols);
        for &i in &r.rows {
            for (w, (p, x)) in pat.iter().zip(a.row_words(i)).enumerate() {
                let bad = p & !x;
                if bad != 0 {
                    return Ok(Verdict::Fails(CoverFailure::RectangleHitsZero {
                        rect: t,
                        row: i,
                        col: w * 64 + bad.trailing_zeros() as usize,
                    }));
                }
            }
            covered.or_row(i, &pat);
        }
    }
    Ok(match a.first_excess_over(&covered)? {
        Some((row, col)) => Verdict::Fails(CoverFailure::Uncovered { row, col }),
        None => Verdict::Holds,
    })
}

/// Verify a cover of `a ⊗ b` block by block without materializing the
/// product. Agrees with `verify_cover(kronecker(a, b), c)` including the
/// witness.
pub fn verify_product_cover_lazy(a: &BoolMatrix, b: &BoolMatrix, c: &Cover) -> Result<Verdict<CoverFailure>> {
    let (ra, ca) = a.dims();
    let (rb, cb) = b.dims();
    let expect = (ra * rb, ca * cb);
    if c.dims() != expect {
        return Err(Error::DimensionMismatch {
            expected_rows: expect.0,
            expected_cols: expect.1,
            rows: c.rows,
            cols: c.cols,
        });
    }
    struct Split {
        rows: BTreeMap<usize, Vec<usize>>,
        cols: BTreeMap<usize, Vec<usize>>,
    }
    let mut splits = Vec::with_capacity(c.len());
    for (t, r) in c.rects.iter().enumerate() {
        r.check_bounds(expect.0, expect.1)?;
        // first zero of the product inside r, in row-major order
        let mut bad = None;
        'scan: for &i in &r.rows {
            for &j in &r.cols {
                if !(a.get(i / rb, j / cb) && b.get(i % rb, j % cb)) {
                    bad = Some((i, j));
                    break 'scan;
                }
            }
        }
        if let Some((row, col)) = bad {
            return Ok(Verdict::Fails(CoverFailure::RectangleHitsZero { rect: t, row, col }));
        }
        let mut rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &i in &r.rows {
            rows.entry(i / rb).or_default().push(i % rb);
        }
        let mut cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &j in &r.cols {
            cols.entry(j / cb).or_default().push(j % cb);
        }
        splits.push(Split { rows, cols });
    }
    let mut first: Option<(usize, usize)> = None;
    let mut block = BoolMatrix::zeros(rb, cb);
    for (ia, ja) in a.ones_iter() {
        // blocks in later rows of A cannot beat a witness found in row `ia`
        if let Some((r0, _)) = first {
            if r0 < ia * rb {
                break;
            }
        }
        block = BoolMatrix::zeros(rb, cb);
        for s in &splits {
            if let (Some(rs), Some(cs)) = (s.rows.get(&ia), s.cols.get(&ja)) {
                let pat = pattern(cb, cs);
                for &i in rs {
                    block.or_row(i, &pat);
                }
            }
        }
        if let Some((i, j)) = b.first_excess_over(&block)? {
            let cand = (ia * rb + i, ja * cb + j);
            if first.is_none_or(|f| cand < f) {
                first = Some(cand);
            }
        }
    }
    drop(block);
    Ok(match first {
        Some((row, col)) => Verdict::Fails(CoverFailure::Uncovered { row, col }),
        None => Verdict::Holds,
    })
}

/// Verify a cover of `a ⊗ b`, materializing the product only if it has at
/// most `limit` entries.
pub fn verify_product_cover(a: &BoolMatrix, b: &BoolMatrix, c: &Cover, limit: u64) -> Result<Verdict<CoverFailure>> {
    match boolmat::kronecker_with_limit(a, b, limit) {
        Ok(p) => verify_cover(&p, c),
        Err(Error::TooLarge { .. }) => verify_product_cover_lazy(a, b, c),
        Err(e) => Err(e),
    }
}

/// An ordered family of equally sized matrices, each optionally carrying a
/// rank-1 decomposition (a [`Cover`] whose Boolean sum is the member).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFamily {
    rows: usize,
    cols: usize,
    members: Vec<BoolMatrix>,
    decompositions: Vec<Option<Cover>>,
}

impl MatrixFamily {
    pub fn from_covers(rows: usize, cols: usize, covers: Vec<Cover>) -> Result<Self> {
        let mut members = Vec::with_capacity(covers.len());
        for c in &covers {
            if c.dims() != (rows, cols) {
                return Err(Error::DimensionMismatch {
                    expected_rows: rows,
                    expected_cols: cols,
                    rows: c.rows,
                    cols: c.cols,
                });
            }
            members.push(c.to_matrix());
        }
        Ok(MatrixFamily {
            rows,
            cols,
            members,
            decompositions: covers.into_iter().map(Some).collect(),
        })
    }

    pub fn from_matrices(rows: usize, cols: usize, members: Vec<BoolMatrix>) -> Result<Self> {
        if let Some(m) = members.iter().find(|m| m.dims() != (rows, cols)) {
            return Err(Error::DimensionMismatch {
                expected_rows: rows,
                expected_cols: cols,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let decompositions = vec![None; members.len()];
        Ok(MatrixFamily { rows, cols, members, decompositions })
    }

    /// Members paired with decompositions; each decomposition must sum to
    /// its member.
    pub fn from_parts(rows: usize, cols: usize, parts: Vec<(BoolMatrix, Option<Cover>)>) -> Result<Self> {
        let mut fam = MatrixFamily::from_matrices(rows, cols, parts.iter().map(|p| p.0.clone()).collect())?;
        for (t, (m, d)) in parts.into_iter().enumerate() {
            if let Some(d) = &d {
                if d.to_matrix() != m {
                    return Err(Error::InvalidParameter(format!(
                        "decomposition of member {t} does not sum to the member"
                    )));
                }
            }
            fam.decompositions[t] = d;
        }
        Ok(fam)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[BoolMatrix] {
        &self.members
    }

    pub fn member(&self, t: usize) -> &BoolMatrix {
        &self.members[t]
    }

    pub fn decomposition(&self, t: usize) -> Option<&Cover> {
        self.decompositions[t].as_ref()
    }

    /// Decomposition sizes; members without one report `None`.
    pub fn decomposition_sizes(&self) -> Vec<Option<usize>> {
        self.decompositions.iter().map(|d| d.as_ref().map(Cover::len)).collect()
    }

    /// Give every member lacking a decomposition its row decomposition.
    pub fn with_default_decompositions(mut self) -> Self {
        for (m, d) in self.members.iter().zip(self.decompositions.iter_mut()) {
            if d.is_none() {
                *d = Some(Cover::row_decomposition(m));
            }
        }
        self
    }

    /// The members at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&t) = indices.iter().find(|&&t| t >= self.len()) {
            return Err(Error::OutOfRange { index: t, bound: self.len() });
        }
        Ok(MatrixFamily {
            rows: self.rows,
            cols: self.cols,
            members: indices.iter().map(|&t| self.members[t].clone()).collect(),
            decompositions: indices.iter().map(|&t| self.decompositions[t].clone()).collect(),
        })
    }

    /// Restriction of every member (and decomposition) to the leading
    /// `rows × cols` block.
    pub fn restrict(&self, rows: usize, cols: usize) -> Result<Self> {
        let members = self
            .members
            .iter()
            .map(|m| m.prefix(rows, cols))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixFamily {
            rows,
            cols,
            members,
            decompositions: self
                .decompositions
                .iter()
                .map(|d| d.as_ref().map(|c| c.restrict(rows, cols)))
                .collect(),
        })
    }
}

/// Orderings matter: `compose_kron_cover` pairs members positionally. Among
/// the six orderings of a 3-member family `b`, the one minimizing
/// `a1*b1 + a2*b2 + a3*b3` over decomposition sizes (first in lexicographic
/// order of permutations on ties).
pub fn best_triple_ordering(a_sizes: [usize; 3], b_sizes: [usize; 3]) -> ([usize; 3], usize) {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS
        .iter()
        .map(|p| (*p, (0..3).map(|t| a_sizes[t] * b_sizes[p[t]]).sum()))
        .min_by_key(|&(_, cost)| cost)
        .expect("six permutations")
}

/// A cover of `A ⊗ B` kept in factored form: each rectangle is the product
/// of a rectangle of the `A` side and one of the `B` side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KronCover {
    a_dims: (usize, usize),
    b_dims: (usize, usize),
    pairs: Vec<(Rectangle, Rectangle)>,
}

impl KronCover {
    pub fn new(a_dims: (usize, usize), b_dims: (usize, usize), pairs: Vec<(Rectangle, Rectangle)>) -> Result<Self> {
        for (ra, rb) in &pairs {
            ra.check_bounds(a_dims.0, a_dims.1)?;
            rb.check_bounds(b_dims.0, b_dims.1)?;
        }
        Ok(KronCover { a_dims, b_dims, pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(Rectangle, Rectangle)] {
        &self.pairs
    }

    pub fn product_dims(&self) -> (usize, usize) {
        (self.a_dims.0 * self.b_dims.0, self.a_dims.1 * self.b_dims.1)
    }

    /// Flatten into a plain cover of the product.
    pub fn to_cover(&self) -> Cover {
        let (rows, cols) = self.product_dims();
        Cover {
            rows,
            cols,
            rects: self.pairs.iter().map(|(ra, rb)| ra.kron(rb, self.b_dims)).collect(),
        }
    }

    /// Group the pairs by their `A`-side rectangle: member `t` of the first
    /// family is the `t`-th distinct `A` rectangle, member `t` of the second
    /// is the sum of the `B` rectangles paired with it.
    pub fn to_families(&self) -> (MatrixFamily, MatrixFamily) {
        let mut order: Vec<&Rectangle> = Vec::new();
        let mut groups: BTreeMap<&Rectangle, Vec<Rectangle>> = BTreeMap::new();
        for (ra, rb) in &self.pairs {
            groups
                .entry(ra)
                .or_insert_with(|| {
                    order.push(ra);
                    Vec::new()
                })
                .push(rb.clone());
        }
        let (a_rows, a_cols) = self.a_dims;
        let (b_rows, b_cols) = self.b_dims;
        let m_covers = order
            .iter()
            .map(|r| Cover { rows: a_rows, cols: a_cols, rects: vec![(*r).clone()] })
            .collect();
        let n_covers = order
            .iter()
            .map(|r| Cover { rows: b_rows, cols: b_cols, rects: groups[*r].clone() })
            .collect();
        (
            MatrixFamily::from_covers(a_rows, a_cols, m_covers).expect("dims checked"),
            MatrixFamily::from_covers(b_rows, b_cols, n_covers).expect("dims checked"),
        )
    }

    /// Verify this is a cover of `a ⊗ b`: eagerly when the product has at
    /// most `limit` entries, otherwise through the Kronecker hypotheses of
    /// the grouped families.
    pub fn verify(&self, a: &BoolMatrix, b: &BoolMatrix, limit: u64) -> Result<bool> {
        if a.dims() != self.a_dims || b.dims() != self.b_dims {
            return Err(Error::DimensionMismatch {
                expected_rows: self.a_dims.0,
                expected_cols: self.a_dims.1,
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let (rows, cols) = self.product_dims();
        if check_limit(rows, cols, limit).is_ok() {
            let p = boolmat::kronecker_with_limit(a, b, limit)?;
            return Ok(verify_cover(&p, &self.to_cover())?.holds());
        }
        self.verify_lazy(a, b)
    }

    pub fn verify_lazy(&self, a: &BoolMatrix, b: &BoolMatrix) -> Result<bool> {
        if a.is_zero() || b.is_zero() {
            return Ok(self.pairs.is_empty());
        }
        let (m, n) = self.to_families();
        Ok(verify_kron_hypotheses(a, &m, b, &n)?.holds())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KronFailure {
    /// The first family does not cover `A`.
    FamilyDoesNotCoverA(MemberCoverFailure),
    /// At the 1-entry `(row, col)` of `A`, the selected members of the second
    /// family (`selected`) do not sum to `B`; they differ at `(b_row, b_col)`.
    SelectionFails {
        row: usize,
        col: usize,
        selected: Vec<usize>,
        b_row: usize,
        b_col: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberCoverFailure {
    /// Member `member` has a 1 at a 0 of the target.
    Excess { member: usize, row: usize, col: usize },
    Uncovered { row: usize, col: usize },
}

fn check_family_dims(fam: &MatrixFamily, target: &BoolMatrix) -> Result<()> {
    if fam.dims() != target.dims() {
        return Err(Error::DimensionMismatch {
            expected_rows: target.rows(),
            expected_cols: target.cols(),
            rows: fam.rows,
            cols: fam.cols,
        });
    }
    Ok(())
}

/// Does the whole family sum to `a`?
pub fn family_covers(a: &BoolMatrix, fam: &MatrixFamily) -> Result<Verdict<MemberCoverFailure>> {
    check_family_dims(fam, a)?;
    for (t, m) in fam.members.iter().enumerate() {
        if let Some((row, col)) = m.first_excess_over(a)? {
            return Ok(Verdict::Fails(MemberCoverFailure::Excess { member: t, row, col }));
        }
    }
    let sum = union_of(a.rows(), a.cols(), fam.members.iter());
    Ok(match a.first_excess_over(&sum)? {
        Some((row, col)) => Verdict::Fails(MemberCoverFailure::Uncovered { row, col }),
        None => Verdict::Holds,
    })
}

fn union_of<'a>(rows: usize, cols: usize, ms: impl Iterator<Item = &'a BoolMatrix>) -> BoolMatrix {
    let mut acc = BoolMatrix::zeros(rows, cols);
    for m in ms {
        acc.or_assign(m);
    }
    acc
}

const MASK_METHOD_MAX_MEMBERS: usize = 12;

/// Check the Kronecker hypotheses for `(a, m, b, n)` without forming
/// `a ⊗ b`. Equivalent to `m` covering `a` together with
/// `Σ_t m_t ⊗ n_t = a ⊗ b`.
///
/// The witness is the first row-major 1-entry of `a` whose selection fails.
pub fn verify_kron_hypotheses(
    a: &BoolMatrix,
    m: &MatrixFamily,
    b: &BoolMatrix,
    n: &MatrixFamily,
) -> Result<Verdict<KronFailure>> {
    if m.len() != n.len() {
        return Err(Error::InvalidParameter(format!(
            "family lengths differ: {} vs {}",
            m.len(),
            n.len()
        )));
    }
    check_family_dims(n, b)?;
    if let Verdict::Fails(w) = family_covers(a, m)? {
        return Ok(Verdict::Fails(KronFailure::FamilyDoesNotCoverA(w)));
    }
    let failing = if m.len() <= MASK_METHOD_MAX_MEMBERS {
        first_failing_entry_by_masks(a, m, b, n)
    } else if m.len() <= 64 {
        first_failing_entry_by_keys(a, m, b, n)
    } else {
        first_failing_entry_by_entries(a, m, b, n)
    };
    Ok(match failing {
        None => Verdict::Holds,
        Some((row, col)) => {
            let selected: Vec<usize> = (0..m.len()).filter(|&t| m.members[t].get(row, col)).collect();
            let sum = union_of(b.rows(), b.cols(), selected.iter().map(|&t| &n.members[t]));
            let (b_row, b_col) = b
                .first_difference(&sum)
                .expect("same dims")
                .ok_or(Error::Internal("failing selection sums to B"))?;
            Verdict::Fails(KronFailure::SelectionFails { row, col, selected, b_row, b_col })
        }
    })
}

/// Entries whose selection is contained in a failing member set `F` are
/// exactly those not covered by the members outside `F`. Only maximal
/// failing sets need to be visited.
fn first_failing_entry_by_masks(
    a: &BoolMatrix,
    m: &MatrixFamily,
    b: &BoolMatrix,
    n: &MatrixFamily,
) -> Option<(usize, usize)> {
    let s = m.len();
    let full = 1usize << s;
    let failing: Vec<bool> = (0..full)
        .map(|mask| {
            let sum = union_of(b.rows(), b.cols(), (0..s).filter(|t| mask >> t & 1 == 1).map(|t| &n.members[t]));
            sum != *b
        })
        .collect();
    let mut first: Option<(usize, usize)> = None;
    for mask in 0..full {
        if !failing[mask] || (0..s).any(|t| mask >> t & 1 == 0 && failing[mask | 1 << t]) {
            continue;
        }
        let outside = union_of(a.rows(), a.cols(), (0..s).filter(|t| mask >> t & 1 == 0).map(|t| &m.members[t]));
        if let Some(e) = a.first_excess_over(&outside).expect("same dims") {
            if first.is_none_or(|f| e < f) {
                first = Some(e);
            }
        }
    }
    first
}

/// Calls `f(i, j, key)` for every 1-entry of `a`, where bit `t` of `key`
/// is `fam_t[i][j]`. Requires at most 64 members.
fn for_each_entry_key(a: &BoolMatrix, fam: &MatrixFamily, mut f: impl FnMut(usize, usize, u64) -> bool) {
    for i in 0..a.rows() {
        let member_rows: Vec<&[u64]> = fam.members.iter().map(|x| x.row_words(i)).collect();
        for (w, &aw) in a.row_words(i).iter().enumerate() {
            let mut bits = aw;
            while bits != 0 {
                let bit = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let key = member_rows.iter().enumerate().fold(0u64, |k, (t, row)| k | (row[w] >> bit & 1) << t);
                if !f(i, w * 64 + bit, key) {
                    return;
                }
            }
        }
    }
}

/// Inclusion-minimal distinct entry keys of `a` under `fam`.
fn minimal_entry_keys(a: &BoolMatrix, fam: &MatrixFamily) -> Vec<u64> {
    let mut keys = Vec::new();
    let mut row_keys = Vec::new();
    let mut current = 0;
    for_each_entry_key(a, fam, |i, _, key| {
        if i != current {
            row_keys.sort_unstable();
            row_keys.dedup();
            keys.append(&mut row_keys);
            current = i;
        }
        row_keys.push(key);
        true
    });
    keys.append(&mut row_keys);
    keys.sort_unstable_by_key(|k| (k.count_ones(), *k));
    keys.dedup();
    let mut minimal: Vec<u64> = Vec::new();
    for k in keys {
        if !minimal.iter().any(|&m| m & !k == 0) {
            minimal.push(k);
        }
    }
    minimal
}

/// The selection at `(i, j)` covers `b` iff its key meets the key of every
/// 1-entry of `b`, so only minimal keys on either side need comparing.
fn first_failing_entry_by_keys(
    a: &BoolMatrix,
    m: &MatrixFamily,
    b: &BoolMatrix,
    n: &MatrixFamily,
) -> Option<(usize, usize)> {
    let b_keys = minimal_entry_keys(b, n);
    let a_keys = minimal_entry_keys(a, m);
    let fails = |k: u64| b_keys.iter().any(|&bk| bk & k == 0);
    if !a_keys.iter().any(|&k| fails(k)) {
        return None;
    }
    let mut memo: BTreeMap<u64, bool> = BTreeMap::new();
    let mut first = None;
    for_each_entry_key(a, m, |i, j, key| {
        if *memo.entry(key).or_insert_with(|| fails(key)) {
            first = Some((i, j));
            return false;
        }
        true
    });
    first
}

fn first_failing_entry_by_entries(
    a: &BoolMatrix,
    m: &MatrixFamily,
    b: &BoolMatrix,
    n: &MatrixFamily,
) -> Option<(usize, usize)> {
    let s = m.len();
    let key_words = s.div_ceil(64);
    let mut memo: BTreeMap<Vec<u64>, bool> = BTreeMap::new();
    let mut key = vec![0u64; key_words];
    let mut last: Option<(Vec<u64>, bool)> = None;
    for i in 0..a.rows() {
        let member_rows: Vec<&[u64]> = m.members.iter().map(|x| x.row_words(i)).collect();
        for (w, &aw) in a.row_words(i).iter().enumerate() {
            let mut bits = aw;
            while bits != 0 {
                let bit = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                key.iter_mut().for_each(|k| *k = 0);
                for (t, row) in member_rows.iter().enumerate() {
                    key[t / 64] |= (row[w] >> bit & 1) << (t % 64);
                }
                let ok = match &last {
                    Some((k, ok)) if *k == key => *ok,
                    _ => {
                        let ok = match memo.get(key.as_slice()) {
                            Some(&ok) => ok,
                            None => {
                                let sum = union_of(
                                    b.rows(),
                                    b.cols(),
                                    (0..s).filter(|t| key[t / 64] >> (t % 64) & 1 == 1).map(|t| &n.members[t]),
                                );
                                let ok = sum == *b;
                                memo.insert(key.clone(), ok);
                                ok
                            }
                        };
                        last = Some((key.clone(), ok));
                        ok
                    }
                };
                if !ok {
                    return Some((i, w * 64 + bit));
                }
            }
        }
    }
    None
}

/// Build the cover of `a ⊗ b` whose rectangles are all products of a
/// rectangle in the decomposition of `M_t` with one in the decomposition of
/// `N_t`. Its size is `Σ_t |dec(M_t)| · |dec(N_t)|`.
///
/// Fails with [`Error::Hypothesis`] (describing the witness) unless the
/// families satisfy the Kronecker hypotheses for `(a, b)`.
pub fn compose_kron_cover(a: &BoolMatrix, m: &MatrixFamily, b: &BoolMatrix, n: &MatrixFamily) -> Result<KronCover> {
    for (fam, side) in [(m, "first"), (n, "second")] {
        if let Some(t) = fam.decompositions.iter().position(Option::is_none) {
            return Err(Error::InvalidParameter(format!(
                "member {t} of the {side} family has no rank-1 decomposition"
            )));
        }
    }
    if let Verdict::Fails(w) = verify_kron_hypotheses(a, m, b, n)? {
        return Err(Error::Hypothesis(format!("{w:?}")));
    }
    let mut pairs = Vec::new();
    for t in 0..m.len() {
        let dm = m.decompositions[t].as_ref().expect("checked");
        let dn = n.decompositions[t].as_ref().expect("checked");
        for ra in &dm.rects {
            for rb in &dn.rects {
                pairs.push((ra.clone(), rb.clone()));
            }
        }
    }
    Ok(KronCover { a_dims: a.dims(), b_dims: b.dims(), pairs })
}

/// Outcome of a q-subset covering check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QCoverReport {
    /// Failing subset (lexicographically smallest among those checked).
    pub verdict: Verdict<Vec<usize>>,
    /// False when `C(s, q)` exceeded the budget and subsets were sampled.
    pub exhaustive: bool,
    pub checked: u64,
}

/// Options for [`check_q_covering`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QCoverOptions {
    /// Largest number of subsets checked; above it, this many are sampled.
    pub budget: u64,
    pub seed: u64,
}

impl Default for QCoverOptions {
    fn default() -> Self {
        QCoverOptions { budget: 1_000_000, seed: 0x5eed }
    }
}

fn subset_covers(a: &BoolMatrix, members: &[BoolMatrix], subset: &[usize]) -> bool {
    let mut row = vec![0u64; a.stride()];
    for i in 0..a.rows() {
        row.iter_mut().for_each(|w| *w = 0);
        for &t in subset {
            for (w, x) in row.iter_mut().zip(members[t].row_words(i)) {
                *w |= x;
            }
        }
        if row != a.row_words(i) {
            return false;
        }
    }
    true
}

#[cfg(feature = "parallel")]
fn first_failing(a: &BoolMatrix, members: &[BoolMatrix], subsets: &[Vec<usize>]) -> Option<usize> {
    use rayon::prelude::*;
    subsets.par_iter().position_first(|s| !subset_covers(a, members, s))
}

#[cfg(not(feature = "parallel"))]
fn first_failing(a: &BoolMatrix, members: &[BoolMatrix], subsets: &[Vec<usize>]) -> Option<usize> {
    subsets.iter().position(|s| !subset_covers(a, members, s))
}

/// Does every `q`-subset of the family sum to `a`?
///
/// Exhaustive when `C(s, q) ≤ budget`; otherwise `budget` subsets drawn
/// with a seeded generator are checked and the report is marked
/// non-exhaustive.
pub fn check_q_covering(a: &BoolMatrix, fam: &MatrixFamily, q: usize, opts: QCoverOptions) -> Result<QCoverReport> {
    check_family_dims(fam, a)?;
    let s = fam.len();
    if q == 0 || q > s {
        return Err(Error::InvalidParameter(format!("q = {q} must be in 1..={s}")));
    }
    let total = binomial_u128(s as u64, q as u64).unwrap_or(u128::MAX);
    if total <= opts.budget as u128 {
        let subsets: Vec<Vec<usize>> = Combinations::new(s, q).collect();
        let verdict = match first_failing(a, &fam.members, &subsets) {
            Some(k) => Verdict::Fails(subsets[k].clone()),
            None => Verdict::Holds,
        };
        return Ok(QCoverReport { verdict, exhaustive: true, checked: total as u64 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut subsets: Vec<Vec<usize>> = (0..opts.budget)
        .map(|_| {
            let mut v = sample(&mut rng, s, q).into_vec();
            v.sort_unstable();
            v
        })
        .collect();
    subsets.sort();
    subsets.dedup();
    let verdict = match first_failing(a, &fam.members, &subsets) {
        Some(k) => Verdict::Fails(subsets[k].clone()),
        None => Verdict::Holds,
    };
    Ok(QCoverReport { verdict, exhaustive: false, checked: opts.budget })
}

/// Does every `⌈s/2⌉` members of the family cover `a`? Always exhaustive.
pub fn check_half_covering(a: &BoolMatrix, fam: &MatrixFamily) -> Result<Verdict<Vec<usize>>> {
    if fam.is_empty() {
        return Err(Error::Empty("family"));
    }
    let q = fam.len().div_ceil(2);
    let opts = QCoverOptions { budget: u64::MAX, ..QCoverOptions::default() };
    Ok(check_q_covering(a, fam, q, opts)?.verdict)
}

/// Split every rectangle `P_t` of a cover of `a ⊗ b` into rank-1 factors
/// `(M_t, N_t)` with `P_t ⪯ M_t ⊗ N_t`. The resulting families satisfy the
/// Kronecker hypotheses and have as many members as the cover has
/// rectangles; each member carries itself as a one-rectangle decomposition.
pub fn extract_families(a: &BoolMatrix, b: &BoolMatrix, c: &Cover) -> Result<(MatrixFamily, MatrixFamily)> {
    if let Verdict::Fails(w) = verify_product_cover(a, b, c, DEFAULT_MATERIALIZATION_LIMIT)? {
        return Err(Error::Hypothesis(format!("not a cover of the product: {w:?}")));
    }
    let (rb, cb) = b.dims();
    let mut m_covers = Vec::with_capacity(c.len());
    let mut n_covers = Vec::with_capacity(c.len());
    for r in &c.rects {
        let ra = Rectangle::from_unsorted(r.rows.iter().map(|i| i / rb).collect(), r.cols.iter().map(|j| j / cb).collect())?;
        let rbr = Rectangle::from_unsorted(r.rows.iter().map(|i| i % rb).collect(), r.cols.iter().map(|j| j % cb).collect())?;
        m_covers.push(Cover { rows: a.rows(), cols: a.cols(), rects: vec![ra] });
        n_covers.push(Cover { rows: rb, cols: cb, rects: vec![rbr] });
    }
    Ok((
        MatrixFamily::from_covers(a.rows(), a.cols(), m_covers)?,
        MatrixFamily::from_covers(rb, cb, n_covers)?,
    ))
}

/// Short human-readable description of a witness, for diagnostics.
pub fn describe<W: core::fmt::Debug>(v: &Verdict<W>) -> String {
    match v {
        Verdict::Holds => String::from("holds"),
        Verdict::Fails(w) => format!("fails: {w:?}"),
    }
}
