//! Dimensions of the strata of the global nilpotent cone.
//!
//! A nilpotent pair `(E, theta)` with `theta^s = 0`, `theta^(s-1) != 0` is
//! filtered by the twisted images `E_i = Im(theta^(s-i))((i-s)D)`. The ranks
//! `n_i` and degrees `e_i` of the graded pieces label a stratum; its
//! dimension splits as the dimension of a stack of chains plus an exponent
//! `Delta` coming from the unipotent radical. Both sums that appear in two
//! written forms are evaluated independently here and compared.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerology::fiber_dimension_formula;

/// Default window `|e_i| <= 6` for degree enumeration.
pub const DEFAULT_DEGREE_BOUND: i64 = 6;

/// Ranks `n_1, ..., n_s` and degrees `e_1, ..., e_s` of the graded pieces
/// of the image filtration, indexed by filtration step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NilpotentStratumLabel {
    nbar: Vec<u32>,
    ebar: Vec<i64>,
}

impl NilpotentStratumLabel {
    pub fn new(nbar: Vec<u32>, ebar: Vec<i64>) -> Result<Self> {
        if nbar.is_empty() || nbar.len() != ebar.len() {
            return Err(Error::InvalidLabel(format!(
                "need matching nonempty rank and degree lists, got {nbar:?} and {ebar:?}"
            )));
        }
        if nbar.contains(&0) {
            return Err(Error::InvalidLabel(format!("ranks must be positive, got {nbar:?}")));
        }
        Ok(NilpotentStratumLabel { nbar, ebar })
    }

    pub fn nbar(&self) -> &[u32] {
        &self.nbar
    }

    pub fn ebar(&self) -> &[i64] {
        &self.ebar
    }

    pub fn s(&self) -> usize {
        self.nbar.len()
    }

    pub fn rank(&self) -> u32 {
        self.nbar.iter().sum()
    }

    pub fn degree(&self) -> i64 {
        self.ebar.iter().sum()
    }

    /// `n_s >= n_(s-1) >= ... >= n_1`.
    pub fn rank_admissible(&self) -> bool {
        self.nbar.windows(2).all(|w| w[0] <= w[1])
    }

    /// `e_(i+1) - d <= e_i` wherever `n_(i+1) = n_i`.
    pub fn degree_admissible(&self, d: i64) -> bool {
        (0..self.s().saturating_sub(1))
            .all(|i| self.nbar[i + 1] != self.nbar[i] || self.ebar[i + 1] - d <= self.ebar[i])
    }

    fn view(&self) -> View<'_> {
        View { nbar: &self.nbar, ebar: &self.ebar }
    }
}

/// Borrowed label data, so the shifted-degree check needs no allocation.
#[derive(Debug, Clone, Copy)]
struct View<'a> {
    nbar: &'a [u32],
    ebar: &'a [i64],
}

impl View<'_> {
    fn s(&self) -> usize {
        self.nbar.len()
    }

    fn n(&self, i: usize) -> i64 {
        // 1-indexed with n_0 = 0
        if i == 0 {
            0
        } else {
            self.nbar[i - 1] as i64
        }
    }

    fn e(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.ebar[i - 1]
        }
    }

    /// `f_i`, 1-indexed with `f_0 = 0`.
    fn f(&self, i: usize, d: i64) -> i64 {
        if i == 0 {
            0
        } else {
            self.e(i) + self.n(i) * (self.s() - i) as i64 * d
        }
    }
}

/// `f_i = e_i + n_i (s - i) d`.
pub fn chain_degrees(label: &NilpotentStratumLabel, d: i64) -> Vec<i64> {
    let v = label.view();
    (1..=v.s()).map(|i| v.f(i, d)).collect()
}

/// The exponent as first written: the modular character, corrected by the
/// non-adjacent part of the Lie algebra and the volume of the centralizer.
fn delta_first_form(label: View, g: i64, d: i64) -> i64 {
    let s = label.s();
    let mut acc = 0;
    for i in 1..=s {
        for j in i + 1..=s {
            let (ni, nj, ei, ej) = (label.n(i), label.n(j), label.e(i), label.e(j));
            acc -= nj * ei - ni * ej;
            if i + 1 < j {
                acc += nj * ei - ni * ej + ni * nj * d;
            }
        }
    }
    for i in 1..s {
        acc += label.n(i) * label.n(i + 1) * (g - 1);
    }
    acc
}

/// The exponent with the adjacent terms collected, using `n_0 = e_0 = 0`.
fn delta_second_form(label: View, g: i64, d: i64) -> i64 {
    let s = label.s();
    let adjacent: i64 = (0..s)
        .map(|i| label.n(i + 1) * label.e(i) - label.n(i) * label.e(i + 1))
        .sum();
    let mut far = 0;
    for i in 1..=s {
        for j in i + 2..=s {
            far += label.n(i) * label.n(j) * d;
        }
    }
    let centralizer: i64 = (1..s).map(|i| label.n(i) * label.n(i + 1) * (g - 1)).sum();
    -adjacent + far + centralizer
}

pub fn delta_exponent(label: &NilpotentStratumLabel, g: i64, d: i64) -> Result<i64> {
    delta_checked(label.view(), g, d)
}

fn delta_checked(label: View, g: i64, d: i64) -> Result<i64> {
    let a = delta_first_form(label, g, d);
    let b = delta_second_form(label, g, d);
    if a != b {
        return Err(Error::Assertion(format!("delta form mismatch: {a} != {b} for {label:?}")));
    }
    Ok(a)
}

fn chain_dim_f_form(label: View, g: i64, d: i64) -> i64 {
    let s = label.s();
    let fi = |i: usize| label.f(i, d);
    (0..s)
        .map(|i| {
            let (a, b) = (label.n(i), label.n(i + 1));
            b * (b - a) * (g - 1) + (b * fi(i) - a * fi(i + 1))
        })
        .sum()
}

fn chain_dim_e_form(label: View, g: i64, d: i64) -> i64 {
    let s = label.s();
    let ranks: i64 = (0..s)
        .map(|i| label.n(i + 1) * (label.n(i + 1) - label.n(i)) * (g - 1))
        .sum();
    let degrees: i64 = (0..s)
        .map(|i| label.n(i + 1) * label.e(i) - label.n(i) * label.e(i + 1))
        .sum();
    let links: i64 = (1..s).map(|i| label.n(i) * label.n(i + 1) * d).sum();
    ranks + degrees + links
}

/// Dimension of the stack of chains `F^s -> ... -> F^1` with ranks `n_i`
/// and degrees `f_i`.
pub fn chain_stack_dim(label: &NilpotentStratumLabel, g: i64, d: i64) -> Result<i64> {
    chain_dim_checked(label.view(), g, d)
}

fn chain_dim_checked(label: View, g: i64, d: i64) -> Result<i64> {
    let a = chain_dim_f_form(label, g, d);
    let b = chain_dim_e_form(label, g, d);
    if a != b {
        return Err(Error::Assertion(format!("chain form mismatch: {a} != {b} for {label:?}")));
    }
    Ok(a)
}

/// `(sum n_i^2)(g-1) + (sum_{i<j} n_i n_j) d`.
pub fn stratum_dim_closed_form(nbar: &[u32], g: i64, d: i64) -> i64 {
    let sq: i64 = nbar.iter().map(|&x| (x as i64) * (x as i64)).sum();
    let total: i64 = nbar.iter().map(|&x| x as i64).sum();
    let cross = (total * total - sq) / 2;
    sq * (g - 1) + cross * d
}

/// Closed-form stratum dimension, cross-checked against chain dimension
/// plus exponent, for the given degrees and for a shifted degree vector
/// with the same total.
pub fn stratum_dim(label: &NilpotentStratumLabel, g: i64, d: i64) -> Result<i64> {
    let closed = stratum_dim_closed_form(&label.nbar, g, d);
    let assembled = chain_stack_dim(label, g, d)? + delta_exponent(label, g, d)?;
    if closed != assembled {
        return Err(Error::Assertion(format!(
            "stratum dimension {closed} != chain + delta = {assembled} for {label:?}"
        )));
    }
    if label.s() >= 2 {
        let mut shifted = label.ebar.clone();
        shifted[0] += 1;
        shifted[label.s() - 1] -= 1;
        let other = View { nbar: &label.nbar, ebar: &shifted };
        let again = chain_dim_checked(other, g, d)? + delta_checked(other, g, d)?;
        if again != closed {
            return Err(Error::Assertion(format!("stratum dimension depends on degrees: {label:?}")));
        }
    }
    Ok(closed)
}

/// `d_f - 1 - dim`, checked against `(d'/2) sum n_i (n_i - 1)` with
/// `d = 2g - 2 + d'`.
pub fn deficit(label: &NilpotentStratumLabel, g: i64, d: i64) -> Result<i64> {
    let n = label.rank() as i64;
    let dim = stratum_dim(label, g, d)?;
    let value = fiber_dimension_formula(g, d, n) - 1 - dim;
    let d_prime = d - (2 * g - 2);
    let pairs: i64 = label.nbar.iter().map(|&x| (x as i64) * (x as i64 - 1)).sum();
    if (d_prime * pairs) % 2 != 0 {
        return Err(Error::Assertion(format!("odd d' * sum n_i(n_i-1) for {label:?}")));
    }
    if value != d_prime * pairs / 2 {
        return Err(Error::Assertion(format!(
            "deficit {value} != (d'/2) sum n_i(n_i-1) = {} for {label:?}",
            d_prime * pairs / 2
        )));
    }
    if d_prime > 0 {
        let all_ones = label.nbar.iter().all(|&x| x == 1);
        if value < 0 || (value == 0) != all_ones {
            return Err(Error::Assertion(format!("deficit law fails for {label:?}: {value}")));
        }
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilRow {
    pub nbar: Vec<u32>,
    pub ebar: Vec<i64>,
    pub f: Vec<i64>,
    pub delta: i64,
    pub chain_dim: i64,
    pub dim: i64,
    pub deficit: i64,
    pub rank_adm: bool,
    pub deg_adm: bool,
}

impl NilRow {
    pub fn compute(label: &NilpotentStratumLabel, g: i64, d: i64) -> Result<Self> {
        Ok(NilRow {
            nbar: label.nbar.clone(),
            ebar: label.ebar.clone(),
            f: chain_degrees(label, d),
            delta: delta_exponent(label, g, d)?,
            chain_dim: chain_stack_dim(label, g, d)?,
            dim: stratum_dim(label, g, d)?,
            deficit: deficit(label, g, d)?,
            rank_adm: label.rank_admissible(),
            deg_adm: label.degree_admissible(d),
        })
    }

    /// Recomputes the row from its label and compares.
    pub fn validate(&self, g: i64, d: i64) -> Result<()> {
        let label = NilpotentStratumLabel::new(self.nbar.clone(), self.ebar.clone())?;
        if &NilRow::compute(&label, g, d)? != self {
            return Err(Error::Assertion(format!("row {self:?} does not recompute")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub g: i64,
    pub d: i64,
    pub n: u32,
    pub e: i64,
    pub bound: i64,
    pub rows: Vec<NilRow>,
    /// Maximum stratum dimension over rank-admissible rows.
    pub max_dim: i64,
    /// `d_f - 1`.
    pub bound_dim: i64,
    /// Rank vectors of the rank-admissible rows attaining `max_dim`.
    pub attained_by: Vec<Vec<u32>>,
}

/// All compositions of `n` in lexicographic order.
pub fn compositions(n: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 1..=rest {
            cur.push(k);
            rec(rest - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, &mut Vec::new(), &mut out);
    }
    out
}

/// Integer vectors of length `s` with entries in `[-bound, bound]` summing to
/// `e`, in lexicographic order.
pub fn degree_vectors(s: usize, e: i64, bound: i64) -> Vec<Vec<i64>> {
    fn rec(left: usize, rest: i64, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slack = bound * (left as i64 - 1);
        for x in -bound..=bound {
            let r = rest - x;
            if r.abs() > slack {
                continue;
            }
            cur.push(x);
            rec(left - 1, r, bound, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, e, bound, &mut Vec::new(), &mut out);
    out
}

/// Tabulates every composition of `n` against every degree vector in the
/// window and checks that no rank-admissible stratum exceeds `d_f - 1`, with
/// equality exactly for `n_i = 1` (for `d > 2g - 2`), or that every stratum
/// attains it (for `d = 2g - 2`).
pub fn proposition_report(g: i64, d: i64, n: u32, e: i64, bound: i64) -> Result<PropositionReport> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    if bound < 0 {
        return Err(Error::OutOfRange("degree bound must be nonnegative".into()));
    }
    let mut rows = Vec::new();
    for nbar in compositions(n) {
        for ebar in degree_vectors(nbar.len(), e, bound) {
            let label = NilpotentStratumLabel::new(nbar.clone(), ebar)?;
            rows.push(NilRow::compute(&label, g, d)?);
        }
    }
    let bound_dim = fiber_dimension_formula(g, d, n as i64) - 1;
    let admissible = || rows.iter().filter(|r| r.rank_adm);
    let max_dim = admissible().map(|r| r.dim).max().unwrap_or(i64::MIN);
    let mut attained_by: Vec<Vec<u32>> =
        admissible().filter(|r| r.dim == max_dim).map(|r| r.nbar.clone()).collect();
    attained_by.dedup();

    let d_prime = d - (2 * g - 2);
    if d_prime > 0 {
        let ones = vec![1u32; n as usize];
        if max_dim > bound_dim || (max_dim == bound_dim) != attained_by.iter().all(|v| *v == ones) {
            return Err(Error::Assertion(format!(
                "nilpotent cone bound fails: max {max_dim}, d_f - 1 = {bound_dim}"
            )));
        }
    } else if d_prime == 0 && rows.iter().any(|r| r.dim != bound_dim) {
        return Err(Error::Assertion("canonical case: a stratum misses d_f - 1".into()));
    }
    Ok(PropositionReport { g, d, n, e, bound, rows, max_dim, bound_dim, attained_by })
}
