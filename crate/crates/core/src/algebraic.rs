//! The `Z_p` function family `g_i(x) = Σ_t i^{t−1} x_t (mod p)` and the
//! matrix family built from it in which every `q` members cover `C_{p^q}`,
//! plus the parameter pipeline for covers of `C_n ⊗ C_n` with
//! `O(σ(n) log σ(n))` rectangles.
//!
//! Rows and columns of `C_{p^q}` are indexed by tuples `x ∈ Z_p^q` in
//! mixed radix with `x_1` least significant. Member `A_i` (for
//! `i = 1, .., p − 1`) has a 1 at `(x, y)` iff `g_i(x) ≠ g_i(y)`; it is the
//! sum of the `2d` rectangles `P_{F_i}(t)`, `t` in the first block of the
//! ground set.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::boolmat::check_limit;
use crate::combin::{binomial, binomial_u128, colex_subsets, Combinations};
use crate::cover::{check_q_covering, compose_kron_cover, Cover, KronCover, MatrixFamily, QCoverOptions, Rectangle, Verdict};
use crate::crown::{crown_matrix, sigma_big};
use crate::error::{Error, Result};

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= m {
        if m.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Largest prime `≤ m`, by trial division.
pub fn largest_prime_leq(m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidParameter(alloc::format!("no prime below {m}")));
    }
    Ok((2..=m).rev().find(|&c| is_prime(c)).expect("2 is prime"))
}

/// The functions `g_1, .., g_{p−1}` from `Z_p^q` to `Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZpFunctionFamily {
    p: u64,
    q: usize,
}

impl ZpFunctionFamily {
    pub fn new(p: u64, q: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(alloc::format!("{p} is not prime")));
        }
        if q == 0 || p <= q as u64 {
            return Err(Error::InvalidParameter(alloc::format!("need p > q >= 1, got p = {p}, q = {q}")));
        }
        Ok(ZpFunctionFamily { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `i^{t−1} mod p` for `t = 1..q`.
    pub fn coefficients(&self, i: u64) -> Vec<u64> {
        let mut c = Vec::with_capacity(self.q);
        let mut pow = 1u64;
        for _ in 0..self.q {
            c.push(pow);
            pow = pow * i % self.p;
        }
        c
    }

    /// `g_i(x)`; `x` has `q` components in `0..p`.
    pub fn eval(&self, i: u64, x: &[u64]) -> u64 {
        self.coefficients(i).iter().zip(x).fold(0, |acc, (c, v)| (acc + c * v) % self.p)
    }

    /// Number of tuples, `p^q`, if it fits a `usize`.
    pub fn domain_size(&self) -> Option<usize> {
        usize::try_from(self.p).ok()?.checked_pow(self.q as u32)
    }

    /// Exhaustively check that `x_1 ↦ g_i(x)` is a bijection for every `i`
    /// and every fixed `(x_2, .., x_q)`.
    pub fn check_property1(&self) -> Result<bool> {
        let p = self.p as usize;
        let tails = self.domain_size().ok_or(Error::InvalidParameter(alloc::string::String::from("p^q too large")))? / p;
        for i in 1..self.p {
            let coef = self.coefficients(i);
            for tail in 0..tails {
                let mut rest = 0u64;
                let mut tt = tail;
                for c in &coef[1..] {
                    rest = (rest + c * (tt % p) as u64) % self.p;
                    tt /= p;
                }
                let mut seen = vec![false; p];
                for x1 in 0..self.p {
                    let v = ((coef[0] * x1 + rest) % self.p) as usize;
                    if seen[v] {
                        return Ok(false);
                    }
                    seen[v] = true;
                }
            }
        }
        Ok(true)
    }

    /// Exhaustively check that any `q` distinct functions share no common
    /// collision, i.e. `x ↦ (g_{i_1}(x), .., g_{i_q}(x))` is injective.
    /// Returns the first (lexicographic) index set for which it is not.
    pub fn property2_violation(&self) -> Result<Option<Vec<u64>>> {
        let size = self.domain_size().ok_or(Error::InvalidParameter(alloc::string::String::from("p^q too large")))?;
        let p = self.p;
        let q = self.q;
        let mut seen = vec![false; size];
        for idx in Combinations::new(p as usize - 1, q) {
            let fns: Vec<Vec<u64>> = idx.iter().map(|&i| self.coefficients(i as u64 + 1)).collect();
            seen.iter_mut().for_each(|s| *s = false);
            // odometer over x with y = (g_{i_j}(x))_j kept up to date
            let mut x = vec![0u64; q];
            let mut y = vec![0u64; q];
            let mut injective = true;
            'walk: loop {
                let code = y.iter().rev().fold(0usize, |acc, &v| acc * p as usize + v as usize);
                if seen[code] {
                    injective = false;
                    break;
                }
                seen[code] = true;
                let mut t = 0;
                loop {
                    if t == q {
                        break 'walk;
                    }
                    x[t] += 1;
                    for (yj, f) in y.iter_mut().zip(&fns) {
                        *yj = (*yj + f[t]) % p;
                    }
                    if x[t] < p {
                        break;
                    }
                    // x_t wrapped around: adding p copies of the column is a no-op mod p
                    x[t] = 0;
                    t += 1;
                }
            }
            if !injective {
                return Ok(Some(idx.iter().map(|&i| i as u64 + 1).collect()));
            }
        }
        Ok(None)
    }

    /// The tuple index of `(g_i(x), x_2, .., x_q)` for every tuple index of
    /// `x`: the action of the block-1 rewriting `h_i` on the product family.
    pub fn block_rewrite(&self, i: u64) -> Result<Vec<usize>> {
        let size = self.domain_size().ok_or(Error::InvalidParameter(alloc::string::String::from("p^q too large")))?;
        let p = self.p as usize;
        Ok((0..size)
            .map(|r| {
                let x = digits(r, p, self.q);
                r - x[0] as usize + self.eval(i, &x) as usize
            })
            .collect())
    }
}

fn digits(mut r: usize, p: usize, q: usize) -> Vec<u64> {
    let mut x = Vec::with_capacity(q);
    for _ in 0..q {
        x.push((r % p) as u64);
        r /= p;
    }
    x
}

/// Parameters of [`algebraic_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicCoverParams {
    pub d: usize,
    pub q: usize,
    pub p: u64,
    /// `p^q`.
    pub n: usize,
    /// `2dq`.
    pub k: usize,
    /// `L_j = {(j−1)·2d + 1, .., j·2d}` as masks over `[k]`.
    pub blocks: Vec<u64>,
    /// `B_j`: the `p` colex-smallest `d`-subsets of `L_j`, as masks.
    pub block_sets: Vec<Vec<u64>>,
}

impl AlgebraicCoverParams {
    pub fn new(d: usize, q: usize) -> Result<Self> {
        if d == 0 || q < 2 {
            return Err(Error::InvalidParameter(alloc::format!("need d >= 1 and q >= 2, got d = {d}, q = {q}")));
        }
        let k = 2 * d * q;
        if k > 63 {
            return Err(Error::InvalidParameter(alloc::format!("ground set 2dq = {k} exceeds 63")));
        }
        let c = binomial_u128(2 * d as u64, d as u64).expect("k <= 63");
        let p = largest_prime_leq(c as u64)?;
        if p <= q as u64 {
            return Err(Error::InvalidParameter(alloc::format!("largest prime {p} <= C({},{d}) does not exceed q = {q}", 2 * d)));
        }
        let n = usize::try_from(p)
            .ok()
            .and_then(|p| p.checked_pow(q as u32))
            .ok_or(Error::InvalidParameter(alloc::format!("{p}^{q} overflows")))?;
        let local: Vec<u64> = colex_subsets(2 * d, d).into_iter().take(p as usize).collect();
        let blocks = (0..q).map(|j| ((1u64 << (2 * d)) - 1) << (j * 2 * d)).collect();
        let block_sets = (0..q).map(|j| local.iter().map(|s| s << (j * 2 * d)).collect()).collect();
        Ok(AlgebraicCoverParams { d, q, p, n, k, blocks, block_sets })
    }

    /// The set `F(x) = B_1[x_1] ∪ .. ∪ B_q[x_q]` for tuple index `r`.
    pub fn member_set(&self, r: usize) -> u64 {
        digits(r, self.p as usize, self.q)
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &v)| acc | self.block_sets[j][v as usize])
    }
}

/// The `p − 1` matrices `A_1, .., A_{p−1}` of size `p^q × p^q`, every `q` of
/// which cover `C_{p^q}`, each with a decomposition into at most `2d`
/// rectangles. Fails if a member would exceed `limit` entries.
pub fn algebraic_family(d: usize, q: usize, limit: u64) -> Result<(AlgebraicCoverParams, MatrixFamily)> {
    let params = AlgebraicCoverParams::new(d, q)?;
    let n = params.n;
    check_limit(n, n, limit)?;
    let zp = ZpFunctionFamily::new(params.p, q)?;
    let first_block = &params.block_sets[0];
    let mut covers = Vec::with_capacity(params.p as usize - 1);
    for i in 1..params.p {
        let moved = zp.block_rewrite(i)?;
        // block 1 of h_i(F(x)) is B_1[g_i(x)]
        let block1: Vec<u64> = moved.iter().map(|&r| first_block[r % params.p as usize]).collect();
        let rects = (0..2 * d)
            .filter_map(|t| {
                let bit = 1u64 << t;
                let rows = (0..n).filter(|&r| block1[r] & bit != 0).collect();
                let cols = (0..n).filter(|&c| block1[c] & bit == 0).collect();
                Rectangle::new(rows, cols).ok()
            })
            .collect();
        covers.push(Cover::new(n, n, rects)?);
    }
    let fam = MatrixFamily::from_covers(n, n, covers)?;
    Ok((params, fam))
}

/// Why the parameters of [`asymptotic_params`] cannot be carried out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Infeasibility {
    /// Fewer than `s` functions `g_i` exist (`p − 1 < s`).
    TooFewFunctions { available: u64, needed: u64 },
    /// `p ≤ q`: the function family is undefined.
    PrimeTooSmall { p: u64, q: u64 },
    /// The members would have `side × side` entries, above the limit.
    BeyondMaterialization { side: BigUint, limit: u64 },
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::TooFewFunctions { available, needed } => {
                write!(f, "p-1 = {available} functions available, s = {needed} needed")
            }
            Infeasibility::PrimeTooSmall { p, q } => write!(f, "p = {p} does not exceed q = {q}"),
            Infeasibility::BeyondMaterialization { side, limit } => {
                write!(f, "members would be {side}x{side}, beyond the materialization limit of {limit} entries")
            }
        }
    }
}

/// Parameters of the cover of `C_n ⊗ C_n` with `O(k log k)` rectangles,
/// `k = σ(n)`: the smallest `d` with `n ≤ n_d = (C(2d,d)/2)^{2^d}`,
/// `q = 2^d`, `s = 2^{d+1}` members and at most `2^{d+3} d²` rectangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticParams {
    pub n: BigUint,
    pub d: usize,
    pub q: u64,
    pub p: u64,
    /// `σ(n)`, rounded up to even.
    pub k: usize,
    pub s: u64,
    pub bound: u64,
    /// Empty when feasible.
    pub infeasible: Vec<Infeasibility>,
}

impl AsymptoticParams {
    pub fn feasible(&self) -> bool {
        self.infeasible.is_empty()
    }
}

impl fmt::Display for AsymptoticParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PARAMS d={} q={} p={} n={} k={} s={} bound={} feasible={}",
            self.d,
            self.q,
            self.p,
            self.n,
            self.k,
            self.s,
            self.bound,
            if self.feasible() { "yes" } else { "no" }
        )
    }
}

/// `n_d = (C(2d,d)/2)^{2^d}`.
pub fn n_d(d: usize) -> BigUint {
    let half = binomial(2 * d as u64, d as u64) / 2u32;
    half.pow(1u32 << d)
}

pub fn asymptotic_params(n: &BigUint, limit: u64) -> Result<AsymptoticParams> {
    if *n < BigUint::from(2u32) {
        return Err(Error::InvalidParameter(alloc::string::String::from("n must be at least 2")));
    }
    let d = (1usize..).find(|&d| *n <= n_d(d)).expect("n_d is unbounded");
    if d >= 32 {
        return Err(Error::InvalidParameter(alloc::string::String::from("n is too large")));
    }
    let q = 1u64 << d;
    let s = 1u64 << (d + 1);
    let bound = (1u64 << (d + 3)) * (d * d) as u64;
    let c = u64::try_from(binomial(2 * d as u64, d as u64)).expect("d < 32");
    let p = largest_prime_leq(c)?;
    let mut k = sigma_big(n);
    k += k % 2;
    let mut infeasible = Vec::new();
    if p - 1 < s {
        infeasible.push(Infeasibility::TooFewFunctions { available: p - 1, needed: s });
    }
    if p <= q {
        infeasible.push(Infeasibility::PrimeTooSmall { p, q });
    }
    let side = BigUint::from(p).pow(q as u32);
    if &side * &side > BigUint::from(limit) {
        infeasible.push(Infeasibility::BeyondMaterialization { side, limit });
    }
    Ok(AsymptoticParams { n: n.clone(), d, q, p, k, s, bound, infeasible })
}

/// A cover of `C_n ⊗ C_n` composed from `s` members of
/// `algebraic_family(d, q)` used on both sides, certified through the
/// Kronecker hypotheses without forming the product.
#[derive(Debug, Clone)]
pub struct AlgebraicProductCover {
    pub params: AlgebraicCoverParams,
    /// Side of the crown matrix covered (`≤ p^q`).
    pub n: usize,
    pub s: usize,
    pub cover: KronCover,
}

/// Select the first `s` members of `algebraic_family(d, q)`, check that
/// every `q` of them cover `C_{p^q}` (so every `⌈s/2⌉ ≥ q` do), restrict to
/// the leading `n × n` block, and compose the family with itself.
pub fn algebraic_product_cover(d: usize, q: usize, s: usize, n: Option<usize>, limit: u64) -> Result<AlgebraicProductCover> {
    let (params, fam) = algebraic_family(d, q, limit)?;
    if s > fam.len() || s.div_ceil(2) < q {
        return Err(Error::InvalidParameter(alloc::format!(
            "need q <= ceil(s/2) and s <= p-1 = {}, got q = {q}, s = {s}",
            fam.len()
        )));
    }
    let n = n.unwrap_or(params.n);
    if n > params.n || n == 0 {
        return Err(Error::InvalidParameter(alloc::format!("n = {n} must be in 1..={}", params.n)));
    }
    let chosen: Vec<usize> = (0..s).collect();
    let fam = fam.select(&chosen)?;
    let full = crown_matrix(params.n);
    let opts = QCoverOptions { budget: u64::MAX, ..QCoverOptions::default() };
    if let Verdict::Fails(w) = check_q_covering(&full, &fam, q, opts)?.verdict {
        return Err(Error::Hypothesis(alloc::format!("members {w:?} do not cover C_{}", params.n)));
    }
    let (fam, c) = if n < params.n {
        (fam.restrict(n, n)?, crown_matrix(n))
    } else {
        (fam, full)
    };
    let cover = compose_kron_cover(&c, &fam, &c, &fam)?;
    Ok(AlgebraicProductCover { params, n, s, cover })
}

/// `C(r, r/2) ≥ 2^r / √(2r)` for even `r ≥ 2`, compared exactly after
/// squaring: `C(r, r/2)² · 2r ≥ 4^r`.
pub fn central_binomial_fact(r: u64) -> bool {
    let c = binomial(r, r / 2);
    &c * &c * BigUint::from(2 * r) >= BigUint::from(1u32) << (2 * r as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BoolMatrix;
    use crate::DEFAULT_MATERIALIZATION_LIMIT as LIMIT;

    #[test]
    fn primes() {
        assert_eq!(largest_prime_leq(6).unwrap(), 5);
        assert_eq!(largest_prime_leq(2).unwrap(), 2);
        assert_eq!(largest_prime_leq(70).unwrap(), 67);
        assert_eq!(largest_prime_leq(20).unwrap(), 19);
        assert!(largest_prime_leq(1).is_err());
    }

    #[test]
    fn zp_evaluation() {
        let z = ZpFunctionFamily::new(5, 2).unwrap();
        assert_eq!(z.eval(2, &[3, 4]), 1);
        assert_eq!(z.eval(1, &[3, 4]), 2);
        assert!(ZpFunctionFamily::new(6, 2).is_err());
        assert!(ZpFunctionFamily::new(5, 5).is_err());
    }

    #[test]
    fn zp_properties_small() {
        let z = ZpFunctionFamily::new(5, 2).unwrap();
        assert!(z.check_property1().unwrap());
        assert_eq!(z.property2_violation().unwrap(), None);
        // brute force over all pairs of tuples
        for i in 1..5u64 {
            for j in i + 1..5 {
                for x in 0..25usize {
                    for y in 0..25usize {
                        let (a, b) = (digits(x, 5, 2), digits(y, 5, 2));
                        if x != y {
                            assert!(z.eval(i, &a) != z.eval(i, &b) || z.eval(j, &a) != z.eval(j, &b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn block_rewrite_is_permutation() {
        let z = ZpFunctionFamily::new(7, 3).unwrap();
        for i in 1..7 {
            let mut m = z.block_rewrite(i).unwrap();
            m.sort_unstable();
            assert_eq!(m, (0..343).collect::<Vec<_>>());
        }
    }

    #[test]
    fn params_d2_q2() {
        let p = AlgebraicCoverParams::new(2, 2).unwrap();
        assert_eq!((p.p, p.n, p.k), (5, 25, 8));
        assert!(p.block_sets.iter().zip(&p.blocks).all(|(bs, l)| bs.len() == 5
            && bs.iter().all(|s| s & !l == 0 && s.count_ones() == 2)));
        assert!(AlgebraicCoverParams::new(1, 2).is_err());
    }

    #[test]
    fn family_d2_q2_matches_definition() {
        let (params, fam) = algebraic_family(2, 2, LIMIT).unwrap();
        let z = ZpFunctionFamily::new(5, 2).unwrap();
        assert_eq!(fam.len(), 4);
        for i in 0..4 {
            let oracle = BoolMatrix::from_fn(25, 25, |r, c| {
                z.eval(i as u64 + 1, &digits(r, 5, 2)) != z.eval(i as u64 + 1, &digits(c, 5, 2))
            });
            assert_eq!(fam.member(i), &oracle);
            assert!(fam.decomposition(i).unwrap().len() <= 2 * params.d);
        }
        let c = crown_matrix(25);
        let r = check_q_covering(&c, &fam, 2, QCoverOptions::default()).unwrap();
        assert!(r.verdict.holds() && r.exhaustive && r.checked == 6);
        // a single member never covers: g_i has collisions
        let single = check_q_covering(&c, &fam, 1, QCoverOptions::default()).unwrap();
        assert_eq!(single.verdict, Verdict::Fails(vec![0]));
    }

    #[test]
    fn asymptotic_parameters() {
        let p = asymptotic_params(&BigUint::from(81u32), LIMIT).unwrap();
        assert_eq!((p.d, p.q, p.s, p.bound), (2, 4, 8, 128));
        assert!(!p.feasible());
        assert!(p.infeasible.contains(&Infeasibility::TooFewFunctions { available: 4, needed: 8 }));
        let p = asymptotic_params(&BigUint::from(82u32), LIMIT).unwrap();
        assert_eq!(p.d, 3);
        assert_eq!(asymptotic_params(&BigUint::from(2u32), LIMIT).unwrap().d, 2);
        assert_eq!(n_d(1), BigUint::from(1u32));
        assert_eq!(n_d(3), BigUint::from(100_000_000u32));
        assert_eq!(asymptotic_params(&BigUint::from(100_000_000u32), LIMIT).unwrap().d, 3);
        let p4 = asymptotic_params(&(n_d(3) + 1u32), LIMIT).unwrap();
        assert_eq!((p4.d, p4.p, p4.s), (4, 67, 32));
        assert!(!p4.infeasible.iter().any(|r| matches!(r, Infeasibility::TooFewFunctions { .. })));
        assert!(p4.infeasible.iter().any(|r| matches!(r, Infeasibility::BeyondMaterialization { .. })));
        assert_eq!(
            alloc::format!("{}", asymptotic_params(&BigUint::from(81u32), LIMIT).unwrap()),
            "PARAMS d=2 q=4 p=5 n=81 k=10 s=8 bound=128 feasible=no"
        );
    }

    #[test]
    fn small_generalized_cover() {
        let c = algebraic_product_cover(2, 2, 4, None, LIMIT).unwrap();
        assert_eq!(c.cover.len(), 4 * 16);
        assert!(c.cover.verify(&crown_matrix(25), &crown_matrix(25), LIMIT).unwrap());
        let c = algebraic_product_cover(2, 2, 3, Some(20), LIMIT).unwrap();
        assert!(c.cover.verify(&crown_matrix(20), &crown_matrix(20), LIMIT).unwrap());
        assert!(algebraic_product_cover(2, 2, 2, None, LIMIT).is_err());
    }

    #[test]
    fn fact_small() {
        for r in (2..=60).step_by(2) {
            assert!(central_binomial_fact(r), "r = {r}");
        }
    }
}
