//! Small combinatorial helpers: binomials, colex subset enumeration and
//! lexicographic index combinations.

use alloc::vec::Vec;
use num_bigint::BigUint;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient as `u128`, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) is always integral at this point
        acc = acc.checked_mul(n as u128 - i)? / (i + 1);
    }
    Some(acc)
}

/// `⌈k/2⌉`.
pub fn half_up(k: usize) -> usize {
    k.div_ceil(2)
}

/// Iterator over the `size`-subsets of `{0, .., ground - 1}` as bit masks in
/// colexicographic order (which coincides with increasing numeric order of
/// the mask).
#[derive(Debug, Clone)]
pub struct ColexSubsets {
    next: Option<u64>,
    limit: u64,
}

impl ColexSubsets {
    pub fn new(ground: usize, size: usize) -> Self {
        assert!(ground <= 63, "ground sets above 63 elements are not supported");
        let limit = 1u64 << ground;
        let next = if size > ground {
            None
        } else {
            Some((1u64 << size) - 1)
        };
        ColexSubsets { next, limit }
    }
}

impl Iterator for ColexSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        if cur >= self.limit {
            self.next = None;
            return None;
        }
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur)
    }
}

/// All `size`-subsets of `{0, .., ground - 1}` in colex order.
pub fn colex_subsets(ground: usize, size: usize) -> Vec<u64> {
    ColexSubsets::new(ground, size).collect()
}

/// Lexicographic enumeration of `q`-element index combinations of
/// `{0, .., s - 1}`.
#[derive(Debug, Clone)]
pub struct Combinations {
    current: Vec<usize>,
    s: usize,
    done: bool,
}

impl Combinations {
    pub fn new(s: usize, q: usize) -> Self {
        Combinations {
            current: (0..q).collect(),
            s,
            done: q > s,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let q = self.current.len();
        let mut i = q;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.s - q + i {
                self.current[i] += 1;
                for j in i + 1..q {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Elements of a mask as 1-based integers, increasing.
pub fn mask_elements(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

/// Mask of a collection of 1-based elements.
pub fn elements_mask(elems: &[usize]) -> u64 {
    elems.iter().fold(0u64, |m, &e| m | (1u64 << (e - 1)))
}
