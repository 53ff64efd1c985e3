//! Vector bundles on the projective line: splitting types, automorphism
//! groups, and the independent closed forms for `sum 1/|Aut E|`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{from_int, q_power};
use crate::error::{Error, Result};
use crate::BigRational;

/// `h^0(P^1, O(b - a))`, the dimension of `Hom(O(a), O(b))`.
pub fn hom_dim(a: i64, b: i64) -> i64 {
    (b - a + 1).max(0)
}

/// `O(a_1) + ... + O(a_n)` with `a_1 >= ... >= a_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SplittingType {
    twists: Vec<i64>,
}

impl SplittingType {
    pub fn new(twists: Vec<i64>) -> Result<Self> {
        if twists.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidLabel(format!("twists must be nonincreasing: {twists:?}")));
        }
        Ok(SplittingType { twists })
    }

    /// Sorts the twists into canonical order.
    pub fn from_unsorted(mut twists: Vec<i64>) -> Self {
        twists.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { twists }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// `a_1 - a_n`, zero for rank at most one.
    pub fn spread(&self) -> i64 {
        match (self.twists.first(), self.twists.last()) {
            (Some(a), Some(b)) => a - b,
            _ => 0,
        }
    }

    /// Sizes of the blocks of equal twists, in order.
    fn blocks(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (i, a) in self.twists.iter().enumerate() {
            if i > 0 && self.twists[i - 1] == *a {
                *out.last_mut().unwrap() += 1;
            } else {
                out.push(1);
            }
        }
        out
    }

    /// `dim End(E) = sum_{i,j} hom_dim(a_j, a_i)`.
    pub fn end_dim(&self) -> i64 {
        let t = &self.twists;
        t.iter().flat_map(|&a| t.iter().map(move |&b| hom_dim(b, a))).sum()
    }

    /// Exponent of `q` from the unipotent part: maps from smaller to strictly
    /// larger twists.
    fn unipotent_dim(&self) -> i64 {
        let t = &self.twists;
        let mut acc = 0;
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                if t[i] > t[j] {
                    acc += hom_dim(t[j], t[i]);
                }
            }
        }
        acc
    }
}

/// `|GL_k(F_q)|` as a polynomial in `q`, lowest coefficient first.
fn gl_polynomial(k: usize) -> Vec<i64> {
    let mut p = vec![1i64];
    for i in 0..k {
        // multiply by q^k - q^i
        let mut next = vec![0i64; p.len() + k];
        for (j, &c) in p.iter().enumerate() {
            next[j + k] += c;
            next[j + i] -= c;
        }
        p = next;
    }
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `|Aut E|` as an integer polynomial in `q`, lowest coefficient first.
pub fn aut_polynomial(e: &SplittingType) -> Vec<i64> {
    let mut p = vec![1i64];
    for k in e.blocks() {
        p = poly_mul(&p, &gl_polynomial(k));
    }
    let shift = e.unipotent_dim() as usize;
    let mut out = vec![0i64; shift];
    out.extend(p);
    out
}

pub fn gl_size(k: usize, q: u64) -> BigInt {
    let qk = num_traits::pow(BigInt::from(q), k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (&qk - num_traits::pow(BigInt::from(q), i)))
}

/// Order of the unit group of `End(E)`: a product of `GL` blocks for equal
/// twists times the unipotent radical.
pub fn aut_bundle_size(e: &SplittingType, q: u64) -> BigInt {
    let levi = e.blocks().into_iter().fold(BigInt::one(), |acc, k| acc * gl_size(k, q));
    levi * num_traits::pow(BigInt::from(q), e.unipotent_dim() as usize)
}

/// All splitting types of rank `n`, degree `e` and spread at most `window`,
/// ordered by spread, then by twists in descending lexicographic order.
pub fn splittings(n: usize, e: i64, window: i64) -> Vec<SplittingType> {
    let mut out = Vec::new();
    if n == 0 {
        if e == 0 {
            out.push(SplittingType { twists: Vec::new() });
        }
        return out;
    }
    if n == 1 {
        out.push(SplittingType { twists: vec![e] });
        return out;
    }
    let nn = n as i64;
    let lo = (e - (nn - 1) * window).div_euclid(nn) - 1;
    let hi = e.div_euclid(nn);
    for last in lo..=hi {
        for first in last..=last + window {
            // middle twists in [last, first], nonincreasing, with the right sum
            let rest = e - first - last;
            let mut mid = Vec::new();
            fill_middle(n - 2, first, last, rest, &mut mid, &mut |m| {
                let mut t = vec![first];
                t.extend_from_slice(m);
                t.push(last);
                out.push(SplittingType { twists: t });
            });
        }
    }
    out.sort_by(|a, b| a.spread().cmp(&b.spread()).then_with(|| b.twists.cmp(&a.twists)));
    out.dedup();
    out
}

fn fill_middle(k: usize, upper: i64, lower: i64, sum: i64, cur: &mut Vec<i64>, emit: &mut dyn FnMut(&[i64])) {
    if k == 0 {
        if sum == 0 {
            emit(cur);
        }
        return;
    }
    let kk = k as i64;
    for x in (lower..=upper).rev() {
        let rest = sum - x;
        if rest > (kk - 1) * x || rest < (kk - 1) * lower {
            continue;
        }
        cur.push(x);
        fill_middle(k - 1, x, lower, rest, cur, emit);
        cur.pop();
    }
}

/// `sum over all E of rank n, degree e of 1/|Aut E|` on the projective line,
/// from the product formula `q^-(n^2-1) prod_{k=2}^n zeta(k) / (q - 1)` with
/// `zeta(k) = 1/((1 - q^-k)(1 - q^(1-k)))`. Independent of `e`.
pub fn bun_total_product_formula(q: u64, n: usize) -> BigRational {
    let one = BigRational::one();
    let mut acc = q_power(q, -((n * n) as i64 - 1)) / from_int(q as i64 - 1);
    for k in 2..=n as i64 {
        let zeta = (&one - q_power(q, -k)) * (&one - q_power(q, 1 - k));
        acc /= zeta;
    }
    acc
}

/// Rank two on the projective line, summed over spread as explicit
/// geometric series: for even `e` the balanced term `1/|GL_2|` plus
/// `sum_{k>=1} 1/((q-1)^2 q^(2k+1))` from `(k + e/2, -k + e/2)`; for odd `e`
/// the terms `1/((q-1)^2 q^(2k+2))` from spread `2k+1`. Returns the partial
/// sum over spread at most `window` and the exact remainder.
pub fn bun2_geometric(q: u64, e: i64, window: i64) -> (BigRational, BigRational) {
    let qq = from_int(q as i64);
    let unit = from_int(q as i64 - 1).pow(2);
    let one = BigRational::one();
    let ratio = &one - q_power(q, -2);
    let mut partial = BigRational::zero();
    let mut b = 1;
    if e.rem_euclid(2) == 0 {
        let gl2 = (&qq * &qq - &one) * (&qq * &qq - &qq);
        partial += &one / gl2;
        b = 2;
    }
    while b <= window {
        partial += q_power(q, -(b + 1)) / &unit;
        b += 2;
    }
    // remaining spreads b, b+2, ...
    let rest = q_power(q, -(b + 1)) / &unit / ratio;
    (partial, rest)
}

/// Line bundles: one isomorphism class per degree, `Aut = F_q^*`.
pub fn bun1(q: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(q - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(t: &[i64]) -> SplittingType {
        SplittingType::new(t.to_vec()).unwrap()
    }

    fn eval(p: &[i64], q: i64) -> BigInt {
        p.iter().rev().fold(BigInt::zero(), |acc, &c| acc * q + c)
    }

    #[test]
    fn hom_dim_examples() {
        assert_eq!(hom_dim(0, 0), 1);
        assert_eq!(hom_dim(2, 0), 0);
        assert_eq!(hom_dim(-1, 3), 5);
    }

    #[test]
    fn aut_examples() {
        assert_eq!(aut_bundle_size(&st(&[0, 0]), 2), BigInt::from(6));
        assert_eq!(aut_bundle_size(&st(&[1, 0]), 2), BigInt::from(4));
        assert_eq!(aut_bundle_size(&st(&[5]), 7), BigInt::from(6));
        assert_eq!(aut_bundle_size(&st(&[2, 2, 0]), 3), BigInt::from(48 * 2 * 27 * 27));
    }

    #[test]
    fn aut_polynomial_matches_size() {
        for t in [vec![0, 0], vec![3, 1, 1, -2], vec![1, 1, 1], vec![4, 0, -1]] {
            let e = st(&t);
            let p = aut_polynomial(&e);
            assert_eq!(p.len() as i64 - 1, e.end_dim());
            for q in [2u64, 3, 5] {
                assert_eq!(eval(&p, q as i64), aut_bundle_size(&e, q));
            }
        }
    }

    #[test]
    fn splitting_enumeration() {
        let s = splittings(2, 0, 4);
        let tw: Vec<_> = s.iter().map(|x| x.twists().to_vec()).collect();
        assert_eq!(tw, vec![vec![0, 0], vec![1, -1], vec![2, -2]]);
        let s = splittings(3, 1, 2);
        for x in &s {
            assert_eq!(x.degree(), 1);
            assert!(x.spread() <= 2);
        }
        // (1,0,0), (1,1,-1); (2,0,-1) has spread 3
        assert_eq!(s.len(), 2);
        assert_eq!(splittings(1, 4, 0), vec![st(&[4])]);
    }

    #[test]
    fn rank_two_closed_forms_agree_with_product_formula() {
        for q in [2u64, 3, 5] {
            for e in [0, 1, -3] {
                let (p, r) = bun2_geometric(q, e, 9);
                assert_eq!(p + r, bun_total_product_formula(q, 2));
            }
            assert_eq!(bun_total_product_formula(q, 1), bun1(q));
        }
    }

    #[test]
    fn rank_two_partial_sums_match_aut_sizes() {
        for q in [2u64, 3] {
            for e in [0i64, 1] {
                let direct: BigRational = splittings(2, e, 7)
                    .iter()
                    .map(|s| BigRational::new(BigInt::one(), aut_bundle_size(s, q)))
                    .sum();
                assert_eq!(direct, bun2_geometric(q, e, 7).0);
            }
        }
    }
}
