//! Twisted endomorphisms of split bundles on the projective line and the
//! degrees of their image flags.
//!
//! `D` is `d` times the point at infinity, so a section of `O(m)` is a
//! polynomial of degree at most `m` in the chart coordinate, and the entry
//! `theta_ij : O(a_j) -> O(a_i + d)` has degree at most `a_i - a_j + d`.
//!
//! Degrees of saturated subbundles are read off Plücker coordinates: if the
//! generic fiber of `F` is spanned by the columns of a polynomial matrix `V`
//! of rank `r`, then `det F` is the line subbundle of `wedge^r E` spanned by
//! the primitive vector of `r x r` minors `P_I / gcd`, and a primitive vector
//! `v` in `O(w_1) + ... + O(w_N)` spans a line bundle of degree
//! `min_{v_I != 0} (w_I - deg v_I)` (the minimum is attained because the
//! line is saturated at infinity too).

use serde::{Deserialize, Serialize};

use super::bundles::SplittingType;
use crate::algebra::linalg::{generic_rank, left_kernel, nullity_fq, poly_determinant, poly_mat_mul, PolyMatrix};
use crate::algebra::{Fq, PolyFq, PolyRing};
use crate::error::{Error, Result};
use crate::nilstrata::NilpotentStratumLabel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitchinPairP1 {
    splitting: SplittingType,
    d: i64,
    theta: PolyMatrix,
}

impl HitchinPairP1 {
    pub fn new(splitting: SplittingType, d: i64, theta: PolyMatrix) -> Result<Self> {
        let a = splitting.twists();
        let n = a.len();
        if theta.len() != n || theta.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSetup(format!("theta must be {n} x {n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if !theta[i][j].is_zero() && theta[i][j].degree_or_neg() > a[i] - a[j] + d {
                    return Err(Error::DegreeBound(format!(
                        "theta[{i}][{j}] has degree {} > {}",
                        theta[i][j].degree_or_neg(),
                        a[i] - a[j] + d
                    )));
                }
            }
        }
        Ok(HitchinPairP1 { splitting, d, theta })
    }

    /// Skips the degree checks; for enumerators that build `theta` within
    /// the bounds by construction.
    pub(crate) fn new_unchecked(splitting: SplittingType, d: i64, theta: PolyMatrix) -> Self {
        HitchinPairP1 { splitting, d, theta }
    }

    pub fn splitting(&self) -> &SplittingType {
        &self.splitting
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn theta(&self) -> &PolyMatrix {
        &self.theta
    }

    pub fn rank(&self) -> usize {
        self.splitting.rank()
    }

    pub fn degree(&self) -> i64 {
        self.splitting.degree()
    }

    /// `theta^0, theta^1, ..., theta^n`.
    pub fn powers(&self, ring: &PolyRing<Fq>) -> Vec<PolyMatrix> {
        let n = self.rank();
        let mut out = vec![identity(ring, n)];
        for k in 1..=n {
            let next = if k == 1 { self.theta.clone() } else { poly_mat_mul(ring, &out[k - 1], &self.theta) };
            out.push(next);
        }
        out
    }

    pub fn is_nilpotent(&self, ring: &PolyRing<Fq>) -> bool {
        is_zero(&self.powers(ring)[self.rank()])
    }
}

pub fn identity(ring: &PolyRing<Fq>, n: usize) -> PolyMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect()
}

fn is_zero(m: &PolyMatrix) -> bool {
    m.iter().all(|r| r.iter().all(|p| p.is_zero()))
}

/// Degree of the line subbundle spanned by the polynomial vector `v` in
/// `O(w_1) + ... + O(w_N)`, after removing the content of `v`.
pub fn line_degree(ring: &PolyRing<Fq>, v: &[PolyFq], w: &[i64]) -> Option<i64> {
    let content = v.iter().fold(ring.zero(), |acc, p| ring.gcd(&acc, p));
    let c = content.degree()? as i64;
    v.iter()
        .zip(w)
        .filter(|(p, _)| !p.is_zero())
        .map(|(p, &wi)| wi - (p.degree_or_neg() - c))
        .min()
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Degree of the saturation of the subsheaf generated by `cols` (each a
/// polynomial vector in `O(w_1) + ... + O(w_N)`), assumed linearly
/// independent over `F_q(t)`.
pub fn saturated_degree(ring: &PolyRing<Fq>, cols: &[Vec<PolyFq>], w: &[i64]) -> i64 {
    let r = cols.len();
    if r == 0 {
        return 0;
    }
    if r == 1 {
        return line_degree(ring, &cols[0], w).expect("nonzero column");
    }
    let subsets = combinations(w.len(), r);
    let mut minors = Vec::with_capacity(subsets.len());
    let mut weights = Vec::with_capacity(subsets.len());
    for rows in &subsets {
        let m: PolyMatrix = rows.iter().map(|&i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        minors.push(poly_determinant(ring, &m));
        weights.push(rows.iter().map(|&i| w[i]).sum());
    }
    line_degree(ring, &minors, &weights).expect("independent columns")
}

/// Columns of `m` forming a basis of its column space over `F_q(t)`.
fn independent_columns(ring: &PolyRing<Fq>, m: &PolyMatrix) -> Vec<Vec<PolyFq>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut chosen: Vec<Vec<PolyFq>> = Vec::new();
    for j in 0..ncols {
        let col: Vec<PolyFq> = m.iter().map(|r| r[j].clone()).collect();
        if col.iter().all(|p| p.is_zero()) {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(col);
        let as_rows: PolyMatrix = trial.clone();
        if generic_rank(ring, &as_rows) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

fn transpose(m: &PolyMatrix) -> PolyMatrix {
    let ncols = m.first().map_or(0, |r| r.len());
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Basis of the kernel of `m` over `F_q(t)` as primitive polynomial
/// vectors.
fn kernel_basis(ring: &PolyRing<Fq>, m: &PolyMatrix) -> Vec<Vec<PolyFq>> {
    left_kernel(ring, &transpose(m))
}

/// Rank, kernel degree and saturated image degree of a bundle map
/// `m : (+) O(source_j) -> (+) O(target_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapDegrees {
    pub rank: usize,
    pub ker_degree: i64,
    pub sat_image_degree: i64,
}

pub fn map_degrees(ring: &PolyRing<Fq>, m: &PolyMatrix, source: &[i64], target: &[i64]) -> MapDegrees {
    let n = source.len();
    if is_zero(m) {
        return MapDegrees { rank: 0, ker_degree: source.iter().sum(), sat_image_degree: 0 };
    }
    if n == 2 && target.len() == 2 {
        return map_degrees_2x2(ring, m, source, target);
    }
    let image = independent_columns(ring, m);
    let kernel = kernel_basis(ring, m);
    MapDegrees {
        rank: image.len(),
        ker_degree: saturated_degree(ring, &kernel, source),
        sat_image_degree: saturated_degree(ring, &image, target),
    }
}

/// Closed forms for nonzero `2 x 2` maps: the adjugate's columns span the
/// kernel of a singular matrix.
fn map_degrees_2x2(ring: &PolyRing<Fq>, m: &PolyMatrix, source: &[i64], target: &[i64]) -> MapDegrees {
    let det = ring.sub(&ring.mul(&m[0][0], &m[1][1]), &ring.mul(&m[0][1], &m[1][0]));
    if !det.is_zero() {
        // generically injective: the saturated image is the whole target
        return MapDegrees { rank: 2, ker_degree: 0, sat_image_degree: target.iter().sum() };
    }
    let (col0, col1) = ([m[0][0].clone(), m[1][0].clone()], [m[0][1].clone(), m[1][1].clone()]);
    let col = if col0.iter().any(|p| !p.is_zero()) { col0 } else { col1 };
    let adj0 = [m[1][1].clone(), ring.neg(&m[1][0])];
    let adj1 = [ring.neg(&m[0][1]), m[0][0].clone()];
    let ker = if adj0.iter().any(|p| !p.is_zero()) { adj0 } else { adj1 };
    MapDegrees {
        rank: 1,
        ker_degree: line_degree(ring, &ker, source).expect("nonzero"),
        sat_image_degree: line_degree(ring, &col, target).expect("nonzero"),
    }
}

/// Splitting type of `ker m` from the dimensions `h(k) = h^0(ker(k))` of
/// the solution spaces of `m v = 0` with `v_j` of degree at most
/// `source_j + k`: the first differences `h(k) - h(k-1)` count the kernel
/// twists `>= -k`.
pub fn kernel_splitting(ring: &PolyRing<Fq>, m: &PolyMatrix, source: &[i64], target: &[i64]) -> Result<SplittingType> {
    let f = ring.field();
    let n = source.len();
    let r = n - generic_rank(ring, m);
    if r == 0 {
        return Ok(SplittingType::from_unsorted(Vec::new()));
    }
    let max_a = *source.iter().max().unwrap();
    let min_a = *source.iter().min().unwrap();
    let max_b = target.iter().copied().max().unwrap_or(max_a);
    // every kernel twist lies in [min_a - n max(0, max_b - min_a), max_a]
    let lowest = min_a - n as i64 * (max_b - min_a).max(0);
    let h = |k: i64| -> usize {
        let sizes: Vec<usize> = source.iter().map(|&a| (a + k + 1).max(0) as usize).collect();
        let ncols: usize = sizes.iter().sum();
        if ncols == 0 {
            return 0;
        }
        let mut rows = Vec::new();
        for (i, &b) in target.iter().enumerate() {
            let len = (b + k + 1).max(0) as usize;
            for c in 0..len.max(1) {
                let mut row = vec![0u32; ncols];
                let mut off = 0;
                for (j, &sz) in sizes.iter().enumerate() {
                    // coefficient of t^c in m_ij * v_j, v_j = sum_l x_{j,l} t^l
                    for l in 0..sz {
                        if c >= l {
                            if let Some(&x) = m[i][j].coeffs().get(c - l) {
                                row[off + l] = x;
                            }
                        }
                    }
                    off += sz;
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
            // entries exceeding the declared target degree would be lost
            debug_assert!((0..n).all(|j| m[i][j].degree_or_neg() + source[j] <= b || m[i][j].is_zero()));
        }
        nullity_fq(f, &rows, ncols)
    };
    let mut twists = Vec::new();
    let mut prev_h = h(-max_a - 1);
    let mut prev_diff = 0usize;
    let mut k = -max_a;
    loop {
        if k > -lowest + 1 {
            return Err(Error::Assertion("kernel splitting did not stabilize in the proven window".into()));
        }
        let cur = h(k);
        let diff = cur - prev_h;
        for _ in prev_diff..diff {
            twists.push(-k);
        }
        if diff == r {
            break;
        }
        prev_h = cur;
        prev_diff = diff;
        k += 1;
    }
    Ok(SplittingType::from_unsorted(twists))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Sat,
    Unsat,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Sat => "sat",
            Convention::Unsat => "unsat",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sat" => Some(Convention::Sat),
            "unsat" => Some(Convention::Unsat),
            _ => None,
        }
    }
}

/// Flag invariants of a nilpotent pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagInvariants {
    pub s: usize,
    pub nbar: Vec<u32>,
    /// `e_i = deg E_i - deg E_(i-1)` with `E_i = Im(theta^(s-i))((i-s)D)`.
    pub ebar: Vec<i64>,
    /// The same with every `E_i` replaced by its saturation in `E`.
    pub ebar_sat: Vec<i64>,
    /// Splitting types of `ker theta^k` for `k = 1, ..., s - 1`, when requested.
    pub kernels: Option<Vec<SplittingType>>,
}

impl FlagInvariants {
    pub fn label(&self, convention: Convention) -> NilpotentStratumLabel {
        let ebar = match convention {
            Convention::Sat => self.ebar_sat.clone(),
            Convention::Unsat => self.ebar.clone(),
        };
        NilpotentStratumLabel::new(self.nbar.clone(), ebar).expect("nonempty flag")
    }

    /// Bookkeeping that holds for every pair.
    pub fn check(&self, n: usize, e: i64) -> Result<()> {
        let fail = |m: &str| Err(Error::Assertion(format!("{m}: {self:?}")));
        if self.nbar.iter().sum::<u32>() as usize != n {
            return fail("ranks do not add up");
        }
        if self.ebar.iter().sum::<i64>() != e || self.ebar_sat.iter().sum::<i64>() != e {
            return fail("degrees do not add up");
        }
        if self.nbar.windows(2).any(|w| w[0] > w[1]) {
            return fail("rank sequence not monotone");
        }
        let (mut a, mut b) = (0, 0);
        for (x, y) in self.ebar.iter().zip(&self.ebar_sat) {
            a += x;
            b += y;
            if b < a {
                return fail("saturation lowered a degree");
            }
        }
        Ok(())
    }
}

/// Nilpotency index, ranks and degrees of the image flag in both
/// conventions. Kernel splitting types are computed only with
/// `with_kernels`.
pub fn extract_invariants(ring: &PolyRing<Fq>, pair: &HitchinPairP1, with_kernels: bool) -> Result<FlagInvariants> {
    let powers = pair.powers(ring);
    extract_from_powers(ring, pair, &powers, with_kernels)
}

pub(crate) fn extract_from_powers(
    ring: &PolyRing<Fq>,
    pair: &HitchinPairP1,
    powers: &[PolyMatrix],
    with_kernels: bool,
) -> Result<FlagInvariants> {
    let n = pair.rank();
    let a = pair.splitting.twists();
    let e = pair.degree();
    let d = pair.d;
    let s = (0..=n).find(|&k| is_zero(&powers[k])).ok_or(Error::NotNilpotent)?;
    if s == 0 {
        return Err(Error::InvalidSetup("rank zero bundle".into()));
    }
    // cumulative (rank, unsaturated degree, saturated degree) of E_1..E_s
    let mut cum = Vec::with_capacity(s);
    let mut kernels = Vec::new();
    for i in 1..=s {
        let k = s - i;
        if k == 0 {
            cum.push((n, e, e));
            continue;
        }
        let target: Vec<i64> = a.iter().map(|x| x + k as i64 * d).collect();
        let md = map_degrees(ring, &powers[k], a, &target);
        let twist = md.rank as i64 * k as i64 * d;
        cum.push((md.rank, e - md.ker_degree - twist, md.sat_image_degree - twist));
        if with_kernels {
            kernels.push((k, kernel_splitting(ring, &powers[k], a, &target)?));
        }
    }
    let mut nbar = Vec::with_capacity(s);
    let mut ebar = Vec::with_capacity(s);
    let mut ebar_sat = Vec::with_capacity(s);
    let mut prev = (0usize, 0i64, 0i64);
    for &(r, du, ds) in &cum {
        nbar.push((r - prev.0) as u32);
        ebar.push(du - prev.1);
        ebar_sat.push(ds - prev.2);
        prev = (r, du, ds);
    }
    let kernels = with_kernels.then(|| {
        kernels.sort_by_key(|(k, _)| *k);
        kernels.into_iter().map(|(_, st)| st).collect()
    });
    let inv = FlagInvariants { s, nbar, ebar, ebar_sat, kernels };
    inv.check(n, e)?;
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(q: u32) -> PolyRing<Fq> {
        PolyRing::new(Fq::prime(q).unwrap())
    }

    fn mat(r: &PolyRing<Fq>, m: &[&[&[i64]]]) -> PolyMatrix {
        m.iter().map(|row| row.iter().map(|c| r.from_ints(c)).collect()).collect()
    }

    #[test]
    fn kernel_examples() {
        let r = ring(3);
        let zero = mat(&r, &[&[&[], &[]], &[&[], &[]]]);
        let k = kernel_splitting(&r, &zero, &[2, -1], &[3, 0]).unwrap();
        assert_eq!(k.twists(), &[2, -1]);

        let nil = mat(&r, &[&[&[], &[1]], &[&[], &[]]]);
        let k = kernel_splitting(&r, &nil, &[0, 0], &[1, 1]).unwrap();
        assert_eq!(k.twists(), &[0]);
        let md = map_degrees(&r, &nil, &[0, 0], &[1, 1]);
        assert_eq!((md.rank, md.ker_degree, md.sat_image_degree), (1, 0, 1));

        // O(1) + O -> (+) O(1 + d) with a single nonzero entry theta_21
        let low = mat(&r, &[&[&[], &[]], &[&[1], &[]]]);
        assert_eq!(generic_rank(&r, &low), 1);
        let k = kernel_splitting(&r, &low, &[1, 0], &[2, 1]).unwrap();
        assert_eq!(k.twists(), &[0]);
    }

    #[test]
    fn worked_pair_invariants() {
        let r = ring(2);
        let e = SplittingType::new(vec![0, 0]).unwrap();
        let pair = HitchinPairP1::new(e, 1, mat(&r, &[&[&[], &[1]], &[&[], &[]]])).unwrap();
        let inv = extract_invariants(&r, &pair, true).unwrap();
        assert_eq!(inv.s, 2);
        assert_eq!(inv.nbar, vec![1, 1]);
        assert_eq!(inv.ebar, vec![-1, 1]);
        assert_eq!(inv.ebar_sat, vec![0, 0]);
        assert_eq!(inv.kernels.unwrap(), vec![SplittingType::new(vec![0]).unwrap()]);
    }

    #[test]
    fn zero_theta_is_one_step() {
        let r = ring(3);
        let e = SplittingType::new(vec![2, 1, -4]).unwrap();
        let z: PolyMatrix = (0..3).map(|_| (0..3).map(|_| r.zero()).collect()).collect();
        let inv = extract_invariants(&r, &HitchinPairP1::new(e, 2, z).unwrap(), false).unwrap();
        assert_eq!((inv.s, inv.nbar, inv.ebar, inv.ebar_sat), (1, vec![3], vec![-1], vec![-1]));
    }

    #[test]
    fn non_nilpotent_rejected() {
        let r = ring(3);
        let e = SplittingType::new(vec![0, 0]).unwrap();
        let pair = HitchinPairP1::new(e, 1, mat(&r, &[&[&[1], &[]], &[&[], &[]]])).unwrap();
        assert_eq!(extract_invariants(&r, &pair, false), Err(Error::NotNilpotent));
    }

    #[test]
    fn rank_three_regular_nilpotent() {
        // theta = t-shifted Jordan block on O + O + O, d = 1
        let r = ring(3);
        let e = SplittingType::new(vec![0, 0, 0]).unwrap();
        let th = mat(&r, &[&[&[], &[0, 1], &[]], &[&[], &[], &[1]], &[&[], &[], &[]]]);
        let pair = HitchinPairP1::new(e, 1, th).unwrap();
        let inv = extract_invariants(&r, &pair, true).unwrap();
        assert_eq!(inv.s, 3);
        assert_eq!(inv.nbar, vec![1, 1, 1]);
        // Im theta^2 = O e_1 with entry t: unsaturated degree 0 - 2 = -2
        assert_eq!(inv.ebar, vec![-2, 0, 2]);
        assert_eq!(inv.ebar_sat, vec![0, 0, 0]);
        let ks: Vec<_> = inv.kernels.unwrap().iter().map(|k| k.twists().to_vec()).collect();
        assert_eq!(ks, vec![vec![0], vec![0, 0]]);
    }

    #[test]
    fn general_and_two_by_two_paths_agree() {
        let r = ring(3);
        let m = mat(&r, &[&[&[1, 1], &[2, 0, 1]], &[&[2], &[1, 2]]]);
        let fast = map_degrees_2x2(&r, &m, &[1, 0], &[3, 2]);
        let image = independent_columns(&r, &m);
        let kernel = kernel_basis(&r, &m);
        assert_eq!(fast.rank, image.len());
        assert_eq!(fast.ker_degree, if kernel.is_empty() { 0 } else { saturated_degree(&r, &kernel, &[1, 0]) });
        if fast.rank == 1 {
            assert_eq!(fast.sat_image_degree, saturated_degree(&r, &image, &[3, 2]));
        }
    }
}
