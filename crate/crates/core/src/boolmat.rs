//! Dense 0/1 matrices with word-packed rows and Boolean-semiring arithmetic.
//!
//! Every row occupies `stride = ⌈cols / 64⌉` words; bits past `cols` in the
//! last word of a row are always zero, so whole-word OR/AND/compare are exact.
//! Values are immutable once built: every operation returns a new matrix.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest number of entries a materialized matrix may have unless a caller
/// passes an explicit limit.
pub const DEFAULT_MATERIALIZATION_LIMIT: u64 = 1 << 31;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

/// Position of an entry of `A ⊗ B` given by its coordinates in both factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntryIndex4 {
    pub row_a: usize,
    pub col_a: usize,
    pub row_b: usize,
    pub col_b: usize,
}

impl EntryIndex4 {
    /// Flat `(row, col)` in the product, where `b_dims` are the dimensions of
    /// the right factor.
    pub fn to_flat(self, b_dims: (usize, usize)) -> (usize, usize) {
        (
            self.row_a * b_dims.0 + self.row_b,
            self.col_a * b_dims.1 + self.col_b,
        )
    }

    pub fn from_flat(row: usize, col: usize, b_dims: (usize, usize)) -> Self {
        EntryIndex4 {
            row_a: row / b_dims.0,
            col_a: col / b_dims.1,
            row_b: row % b_dims.0,
            col_b: col % b_dims.1,
        }
    }
}

fn stride_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

fn tail_mask(cols: usize) -> u64 {
    match cols % WORD {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

pub(crate) fn check_limit(rows: usize, cols: usize, limit: u64) -> Result<()> {
    let entries = rows as u128 * cols as u128;
    if entries > limit as u128 {
        return Err(Error::TooLarge { entries, limit });
    }
    Ok(())
}

/// Iterate the set bit positions of a packed word slice.
pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        core::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * WORD + b)
        })
    })
}

pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

pub(crate) fn first_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .position(|&w| w != 0)
        .map(|i| i * WORD + words[i].trailing_zeros() as usize)
}

/// Packed row pattern with ones at `indices` (must be `< len`).
pub(crate) fn pattern(len: usize, indices: &[usize]) -> Vec<u64> {
    let mut words = vec![0u64; stride_for(len)];
    for &i in indices {
        words[i / WORD] |= 1u64 << (i % WORD);
    }
    words
}

impl BoolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = stride_for(cols);
        BoolMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j);
                }
            }
        }
        m
    }

    /// Build from rows of 0/1 values; all rows must have the same length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected_rows: rows.len(),
                    expected_cols: cols,
                    rows: rows.len(),
                    cols: r.len(),
                });
            }
            for (j, &v) in r.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(i, j),
                    _ => return Err(Error::InvalidParameter(alloc::format!("entry {v} is not 0/1"))),
                }
            }
        }
        Ok(m)
    }

    /// The all-ones rectangle `row_set × col_set` inside a `rows × cols` zero
    /// matrix. Indices must be in range.
    pub fn from_rectangle(rows: usize, cols: usize, row_set: &[usize], col_set: &[usize]) -> Result<Self> {
        if let Some(&i) = row_set.iter().find(|&&i| i >= rows) {
            return Err(Error::OutOfRange { index: i, bound: rows });
        }
        if let Some(&j) = col_set.iter().find(|&&j| j >= cols) {
            return Err(Error::OutOfRange { index: j, bound: cols });
        }
        let mut m = Self::zeros(rows, cols);
        let pat = pattern(cols, col_set);
        for &i in row_set {
            m.or_row(i, &pat);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Words per packed row.
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) out of bounds");
        self.words[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.words[i * self.stride + j / WORD] |= 1u64 << (j % WORD);
    }

    pub(crate) fn or_row(&mut self, i: usize, pat: &[u64]) {
        for (w, p) in self.row_words_mut(i).iter_mut().zip(pat) {
            *w |= p;
        }
    }

    pub(crate) fn or_assign(&mut self, other: &BoolMatrix) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn row_support(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row_words(i))
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// All 1-entries in row-major order.
    pub fn ones_iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| self.row_support(i).map(move |j| (i, j)))
    }

    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.rows)
            .filter(|&i| self.row_words(i).iter().any(|&w| w != 0))
            .collect()
    }

    pub fn nonzero_cols(&self) -> Vec<usize> {
        let mut acc = vec![0u64; self.stride];
        for i in 0..self.rows {
            for (a, w) in acc.iter_mut().zip(self.row_words(i)) {
                *a |= w;
            }
        }
        iter_bits(&acc).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j) in self.ones_iter() {
            t.set(j, i);
        }
        t
    }

    /// Sub-matrix on the given row and column indices, in the given order.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<Self> {
        if let Some(&i) = row_idx.iter().find(|&&i| i >= self.rows) {
            return Err(Error::OutOfRange { index: i, bound: self.rows });
        }
        if let Some(&j) = col_idx.iter().find(|&&j| j >= self.cols) {
            return Err(Error::OutOfRange { index: j, bound: self.cols });
        }
        Ok(Self::from_fn(row_idx.len(), col_idx.len(), |a, b| {
            self.get(row_idx[a], col_idx[b])
        }))
    }

    /// Leading `rows × cols` block.
    pub fn prefix(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows > self.rows || cols > self.cols {
            return Err(Error::DimensionMismatch {
                expected_rows: self.rows,
                expected_cols: self.cols,
                rows,
                cols,
            });
        }
        let mut m = Self::zeros(rows, cols);
        let mask = tail_mask(cols);
        for i in 0..rows {
            let src = &self.row_words(i)[..m.stride];
            let dst = m.row_words_mut(i);
            dst.copy_from_slice(src);
            if let Some(last) = dst.last_mut() {
                *last &= mask;
            }
        }
        Ok(m)
    }

    fn same_dims(&self, other: &BoolMatrix) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected_rows: self.rows,
                expected_cols: self.cols,
                rows: other.rows,
                cols: other.cols,
            });
        }
        Ok(())
    }

    /// First row-major entry where `self` has a 1 and `other` a 0.
    pub fn first_excess_over(&self, other: &BoolMatrix) -> Result<Option<(usize, usize)>> {
        self.same_dims(other)?;
        for i in 0..self.rows {
            let a = self.row_words(i);
            let b = other.row_words(i);
            for (w, (x, y)) in a.iter().zip(b).enumerate() {
                let d = x & !y;
                if d != 0 {
                    return Ok(Some((i, w * WORD + d.trailing_zeros() as usize)));
                }
            }
        }
        Ok(None)
    }

    /// First row-major entry where the two matrices differ.
    pub fn first_difference(&self, other: &BoolMatrix) -> Result<Option<(usize, usize)>> {
        self.same_dims(other)?;
        for i in 0..self.rows {
            let a = self.row_words(i);
            let b = other.row_words(i);
            for (w, (x, y)) in a.iter().zip(b).enumerate() {
                let d = x ^ y;
                if d != 0 {
                    return Ok(Some((i, w * WORD + d.trailing_zeros() as usize)));
                }
            }
        }
        Ok(None)
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(64) {
            for j in 0..self.cols.min(64) {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Entrywise OR of a nonempty list of equally sized matrices.
pub fn boolean_sum<'a, I>(ms: I) -> Result<BoolMatrix>
where
    I: IntoIterator<Item = &'a BoolMatrix>,
{
    let mut it = ms.into_iter();
    let mut acc = it.next().ok_or(Error::Empty("boolean_sum of no matrices"))?.clone();
    for m in it {
        acc.same_dims(m)?;
        acc.or_assign(m);
    }
    Ok(acc)
}

/// Product over the Boolean semiring.
pub fn boolean_product(u: &BoolMatrix, v: &BoolMatrix) -> Result<BoolMatrix> {
    if u.cols != v.rows {
        return Err(Error::DimensionMismatch {
            expected_rows: u.cols,
            expected_cols: v.cols,
            rows: v.rows,
            cols: v.cols,
        });
    }
    let mut out = BoolMatrix::zeros(u.rows, v.cols);
    for i in 0..u.rows {
        for t in u.row_support(i).collect::<Vec<_>>() {
            let src = v.row_words(t);
            for (w, s) in out.row_words_mut(i).iter_mut().zip(src) {
                *w |= s;
            }
        }
    }
    Ok(out)
}

/// OR `nbits` bits of `src` into `dst` starting at bit `offset`.
fn or_bits_at(dst: &mut [u64], offset: usize, src: &[u64], nbits: usize) {
    if nbits == 0 {
        return;
    }
    let shift = offset % WORD;
    let base = offset / WORD;
    for (k, &s) in src.iter().enumerate() {
        if s == 0 {
            continue;
        }
        dst[base + k] |= s << shift;
        if shift != 0 && base + k + 1 < dst.len() {
            dst[base + k + 1] |= s >> (WORD - shift);
        }
    }
}

/// Kronecker product with the default materialization limit.
pub fn kronecker(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix> {
    kronecker_with_limit(a, b, DEFAULT_MATERIALIZATION_LIMIT)
}

/// Kronecker product: block `(i, j)` of the result is `a[i][j] · b`.
///
/// Refuses with [`Error::TooLarge`] when the product has more than `limit`
/// entries; such products are verified lazily through
/// [`crate::cover::verify_kron_hypotheses`].
pub fn kronecker_with_limit(a: &BoolMatrix, b: &BoolMatrix, limit: u64) -> Result<BoolMatrix> {
    let rows = a.rows.checked_mul(b.rows).ok_or(Error::TooLarge {
        entries: u128::MAX,
        limit,
    })?;
    let cols = a.cols.checked_mul(b.cols).ok_or(Error::TooLarge {
        entries: u128::MAX,
        limit,
    })?;
    check_limit(rows, cols, limit)?;
    let mut out = BoolMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        let supp: Vec<usize> = a.row_support(ia).collect();
        for ib in 0..b.rows {
            let src = b.row_words(ib);
            let dst = out.row_words_mut(ia * b.rows + ib);
            for &ja in &supp {
                or_bits_at(dst, ja * b.cols, src, b.cols);
            }
        }
    }
    Ok(out)
}

/// True iff `m` is nonzero and its support is (nonzero rows) × (nonzero cols).
pub fn is_rank_one(m: &BoolMatrix) -> bool {
    let mut pattern: Option<&[u64]> = None;
    for i in 0..m.rows {
        let r = m.row_words(i);
        if r.iter().all(|&w| w == 0) {
            continue;
        }
        match pattern {
            None => pattern = Some(r),
            Some(p) if p == r => {}
            Some(_) => return false,
        }
    }
    pattern.is_some()
}

/// `m ⪯ a`: every 1 of `m` is a 1 of `a`.
pub fn dominated_by(m: &BoolMatrix, a: &BoolMatrix) -> Result<bool> {
    Ok(m.first_excess_over(a)?.is_none())
}

/// Split a rank-1 matrix `m ⪯ A ⊗ B` into rank-1 factors `(M_A, M_B)` with
/// `m ⪯ M_A ⊗ M_B`: `M_A` has a 1 at `(iA, jA)` iff block `(iA, jA)` of `m`
/// is nonzero, and `M_B` is the OR of all blocks.
pub fn project_factors(
    m: &BoolMatrix,
    dims_a: (usize, usize),
    dims_b: (usize, usize),
) -> Result<(BoolMatrix, BoolMatrix)> {
    if m.rows != dims_a.0 * dims_b.0 || m.cols != dims_a.1 * dims_b.1 {
        return Err(Error::DimensionMismatch {
            expected_rows: dims_a.0 * dims_b.0,
            expected_cols: dims_a.1 * dims_b.1,
            rows: m.rows,
            cols: m.cols,
        });
    }
    if !is_rank_one(m) {
        return Err(Error::NotRankOne);
    }
    let mut ma = BoolMatrix::zeros(dims_a.0, dims_a.1);
    let mut mb = BoolMatrix::zeros(dims_b.0, dims_b.1);
    for (i, j) in m.ones_iter() {
        let e = EntryIndex4::from_flat(i, j, dims_b);
        ma.set(e.row_a, e.col_a);
        mb.set(e.row_b, e.col_b);
    }
    Ok((ma, mb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crown::crown_matrix;
    use proptest::prelude::*;

    fn m(rows: &[&[u8]]) -> BoolMatrix {
        BoolMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn sum_of_complementary_supports() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let b = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(boolean_sum([&a, &b]).unwrap(), BoolMatrix::ones(2, 2));
        assert_eq!(boolean_sum([&a, &a]).unwrap(), a);
    }

    #[test]
    fn sum_errors() {
        assert!(matches!(boolean_sum([]), Err(Error::Empty(_))));
        let a = BoolMatrix::zeros(2, 3);
        let b = BoolMatrix::zeros(3, 2);
        assert!(matches!(boolean_sum([&a, &b]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn worked_example_sums_to_c4() {
        // Rows/columns labelled by subsets of {1,2}; entry is 1 iff labels intersect.
        let first = m(&[&[0, 0, 1, 1], &[0, 0, 1, 1], &[1, 1, 0, 0], &[1, 1, 0, 0]]);
        let second = m(&[&[0, 1, 1, 0], &[1, 0, 0, 1], &[1, 0, 0, 1], &[0, 1, 1, 0]]);
        assert_eq!(boolean_sum([&first, &second]).unwrap(), crown_matrix(4));
    }

    #[test]
    fn product_basics() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(boolean_product(&BoolMatrix::identity(2), &a).unwrap(), a);
        let col = BoolMatrix::ones(3, 1);
        let row = BoolMatrix::ones(1, 4);
        assert_eq!(boolean_product(&col, &row).unwrap(), BoolMatrix::ones(3, 4));
        assert!(boolean_product(&a, &a).is_err());
    }

    #[test]
    fn c4_rank_four_factorization() {
        // Row i gets the 2-subset S_i of [4], column j gets its complement;
        // U[i][t] = [t ∈ S_i], V[t][j] = [t ∉ S_j].
        let sets: [[usize; 2]; 4] = [[0, 1], [0, 2], [1, 2], [0, 3]];
        let u = BoolMatrix::from_fn(4, 4, |i, t| sets[i].contains(&t));
        let v = BoolMatrix::from_fn(4, 4, |t, j| !sets[j].contains(&t));
        let uv = boolean_product(&u, &v).unwrap();
        // entrywise definition
        let direct = BoolMatrix::from_fn(4, 4, |i, j| (0..4).any(|t| u.get(i, t) && v.get(t, j)));
        assert_eq!(uv, direct);
        assert_eq!(uv, crown_matrix(4));
    }

    #[test]
    fn kron_c2_c2() {
        let c2 = crown_matrix(2);
        let k = kronecker(&c2, &c2).unwrap();
        assert_eq!(k.dims(), (4, 4));
        assert_eq!(k.count_ones(), 4);
        for r in 0..4 {
            for c in 0..4 {
                let e = EntryIndex4::from_flat(r, c, (2, 2));
                let expect = e.row_a != e.col_a && e.row_b != e.col_b;
                assert_eq!(k.get(r, c), expect);
            }
        }
    }

    #[test]
    fn kron_units() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(kronecker(&a, &BoolMatrix::ones(1, 1)).unwrap(), a);
        let z = kronecker(&BoolMatrix::zeros(1, 1), &a).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.dims(), (2, 3));
    }

    #[test]
    fn kron_limit() {
        let a = BoolMatrix::ones(10, 10);
        assert!(matches!(
            kronecker_with_limit(&a, &a, 9999),
            Err(Error::TooLarge { entries: 10000, limit: 9999 })
        ));
        assert!(kronecker_with_limit(&a, &a, 10000).is_ok());
    }

    #[test]
    fn rank_one_cases() {
        assert!(is_rank_one(&BoolMatrix::ones(3, 3)));
        assert!(!is_rank_one(&BoolMatrix::identity(2)));
        assert!(!is_rank_one(&BoolMatrix::zeros(3, 3)));
        assert!(is_rank_one(&m(&[&[0, 1, 1], &[0, 0, 0], &[0, 1, 1]])));
    }

    #[test]
    fn domination() {
        let c3 = crown_matrix(3);
        assert!(dominated_by(&BoolMatrix::zeros(3, 3), &c3).unwrap());
        assert!(dominated_by(&c3, &c3).unwrap());
        assert!(!dominated_by(&BoolMatrix::identity(3), &c3).unwrap());
        assert!(dominated_by(&c3, &BoolMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn project_single_entry() {
        let e = EntryIndex4 { row_a: 1, col_a: 0, row_b: 2, col_b: 1 };
        let (r, c) = e.to_flat((3, 2));
        let mm = BoolMatrix::from_fn(6, 4, |i, j| (i, j) == (r, c));
        let (ma, mb) = project_factors(&mm, (2, 2), (3, 2)).unwrap();
        assert_eq!(ma, BoolMatrix::from_fn(2, 2, |i, j| (i, j) == (1, 0)));
        assert_eq!(mb, BoolMatrix::from_fn(3, 2, |i, j| (i, j) == (2, 1)));
    }

    #[test]
    fn project_block_rectangle() {
        // X×Y all-ones block inside block (0,1) of a 2x2 ⊗ 3x3 product.
        let xs = [0usize, 2];
        let ys = [1usize, 2];
        let mm = BoolMatrix::from_fn(6, 6, |i, j| {
            let e = EntryIndex4::from_flat(i, j, (3, 3));
            e.row_a == 0 && e.col_a == 1 && xs.contains(&e.row_b) && ys.contains(&e.col_b)
        });
        let (ma, mb) = project_factors(&mm, (2, 2), (3, 3)).unwrap();
        assert_eq!(ma, BoolMatrix::from_fn(2, 2, |i, j| (i, j) == (0, 1)));
        assert_eq!(mb, BoolMatrix::from_rectangle(3, 3, &xs, &ys).unwrap());
        assert!(matches!(
            project_factors(&BoolMatrix::identity(4), (2, 2), (2, 2)),
            Err(Error::NotRankOne)
        ));
    }

    /// All rank-1 submatrices of `a` with at most 6x6 entries.
    fn rank_one_submatrices(a: &BoolMatrix) -> Vec<BoolMatrix> {
        let mut out = Vec::new();
        for rm in 1u32..(1 << a.rows()) {
            for cm in 1u32..(1 << a.cols()) {
                let ok = (0..a.rows()).all(|i| {
                    rm >> i & 1 == 0 || (0..a.cols()).all(|j| cm >> j & 1 == 0 || a.get(i, j))
                });
                if ok {
                    out.push(BoolMatrix::from_fn(a.rows(), a.cols(), |i, j| {
                        rm >> i & 1 == 1 && cm >> j & 1 == 1
                    }));
                }
            }
        }
        out
    }

    #[test]
    fn project_all_rank_one_in_c2_c2() {
        let c2 = crown_matrix(2);
        let p = kronecker(&c2, &c2).unwrap();
        let subs = rank_one_submatrices(&p);
        assert!(!subs.is_empty());
        for s in subs {
            let (ma, mb) = project_factors(&s, (2, 2), (2, 2)).unwrap();
            assert!(dominated_by(&ma, &c2).unwrap());
            assert!(dominated_by(&mb, &c2).unwrap());
            assert!(dominated_by(&s, &kronecker(&ma, &mb).unwrap()).unwrap());
        }
    }

    #[test]
    fn prefix_keeps_padding_zero() {
        let a = BoolMatrix::ones(3, 70);
        let p = a.prefix(2, 65).unwrap();
        assert_eq!(p.count_ones(), 130);
        assert_eq!(p, BoolMatrix::ones(2, 65));
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = BoolMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BoolMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
        })
    }

    fn arb_same_dims(n: usize) -> impl Strategy<Value = Vec<BoolMatrix>> {
        (1..=5usize, 1..=5usize).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec(any::<bool>(), r * c)
                    .prop_map(move |bits| BoolMatrix::from_fn(r, c, |i, j| bits[i * c + j])),
                n,
            )
        })
    }

    proptest! {
        #[test]
        fn sum_is_assoc_comm_idem(ms in arb_same_dims(3)) {
            let (a, b, c) = (&ms[0], &ms[1], &ms[2]);
            let ab = boolean_sum([a, b]).unwrap();
            let bc = boolean_sum([b, c]).unwrap();
            prop_assert_eq!(boolean_sum([&ab, c]).unwrap(), boolean_sum([a, &bc]).unwrap());
            prop_assert_eq!(ab, boolean_sum([b, a]).unwrap());
            prop_assert_eq!(boolean_sum([a, a]).unwrap(), a.clone());
        }

        #[test]
        fn kron_entries_match_4_tuple(a in arb_matrix(6), b in arb_matrix(6)) {
            let k = kronecker(&a, &b).unwrap();
            for ra in 0..a.rows() { for ca in 0..a.cols() {
                for rb in 0..b.rows() { for cb in 0..b.cols() {
                    let e = EntryIndex4 { row_a: ra, col_a: ca, row_b: rb, col_b: cb };
                    let (r, c) = e.to_flat(b.dims());
                    prop_assert_eq!(EntryIndex4::from_flat(r, c, b.dims()), e);
                    prop_assert_eq!(k.get(r, c), a.get(ra, ca) && b.get(rb, cb));
                }}
            }}
        }

        #[test]
        fn projection_of_maximal_rank_one(a in arb_matrix(4), b in arb_matrix(4)) {
            let p = kronecker(&a, &b).unwrap();
            if p.rows() * p.cols() <= 64 || (p.rows() <= 9 && p.cols() <= 9) {
                for s in rank_one_submatrices(&p) {
                    let (ma, mb) = project_factors(&s, a.dims(), b.dims()).unwrap();
                    prop_assert!(is_rank_one(&ma) && is_rank_one(&mb));
                    prop_assert!(dominated_by(&ma, &a).unwrap());
                    prop_assert!(dominated_by(&mb, &b).unwrap());
                    prop_assert!(dominated_by(&s, &kronecker(&ma, &mb).unwrap()).unwrap());
                }
            }
        }
    }
}
