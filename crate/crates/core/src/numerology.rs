//! Dimension formulas for the Hitchin base and fibers, the stratification of
//! the base by the degrees and multiplicities of spectral components, and the
//! inequality bookkeeping that excludes every stratum but the elliptic one
//! from the support of the direct image.

use std::cmp::Reverse;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank accepted by [`enumerate_lambda`].
pub const MAX_LAMBDA_RANK: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `deg D > 2g - 2`.
    Large,
    /// `D` canonical, `deg D = 2g - 2`.
    Canonical,
}

/// Genus `g`, `deg D = d`, rank `n` and bundle degree `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeometrySetup {
    g: i64,
    d: i64,
    n: i64,
    e: i64,
    mode: Mode,
}

impl GeometrySetup {
    pub fn new(g: i64, d: i64, n: i64, e: i64, mode: Mode) -> Result<Self> {
        if g < 0 {
            return Err(Error::InvalidSetup(format!("genus must be >= 0, got {g}")));
        }
        if n < 1 {
            return Err(Error::InvalidSetup(format!("rank must be >= 1, got {n}")));
        }
        match mode {
            Mode::Large if d <= 2 * g - 2 => {
                return Err(Error::UnsupportedDegreeRegime(format!(
                    "large mode needs d > 2g-2, got d = {d}, 2g-2 = {}",
                    2 * g - 2
                )))
            }
            Mode::Canonical if g == 0 => {
                return Err(Error::InvalidSetup("no canonical divisor of degree -2 on P^1".into()))
            }
            Mode::Canonical if d != 2 * g - 2 => {
                return Err(Error::InvalidSetup(format!(
                    "canonical mode needs d = 2g-2 = {}, got {d}",
                    2 * g - 2
                )))
            }
            _ => {}
        }
        Ok(GeometrySetup { g, d, n, e, mode })
    }

    /// Large mode setup with `e = 1` (coprime to every rank).
    pub fn large(g: i64, d: i64, n: i64) -> Result<Self> {
        Self::new(g, d, n, 1, Mode::Large)
    }

    pub fn canonical(g: i64, n: i64) -> Result<Self> {
        Self::new(g, 2 * g - 2, n, 1, Mode::Canonical)
    }

    pub fn g(&self) -> i64 {
        self.g
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The same curve and divisor with a different rank.
    pub fn with_rank(&self, n: i64) -> Result<Self> {
        Self::new(self.g, self.d, n, self.e, self.mode)
    }

    /// Non-fatal remarks about the setup.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.n.gcd(&self.e) != 1 {
            w.push(format!("gcd(n, e) = gcd({}, {}) != 1", self.n, self.e));
        }
        w
    }
}

/// `n(1-g) + n(n+1)d/2`, the Riemann-Roch count of `sum_i h^0(O(iD))` when
/// no `h^1` survives.
pub fn base_dimension_formula(g: i64, d: i64, n: i64) -> i64 {
    n * (1 - g) + n * (n + 1) * d / 2
}

/// `n(g-1) + n(n-1)d/2 + 1`, valid as a polynomial for every `(g, d)`.
pub fn fiber_dimension_formula(g: i64, d: i64, n: i64) -> i64 {
    n * (g - 1) + n * (n - 1) * d / 2 + 1
}

pub fn dim_base(setup: &GeometrySetup) -> i64 {
    let GeometrySetup { g, d, n, .. } = *setup;
    match setup.mode {
        Mode::Large => base_dimension_formula(g, d, n),
        // h^1(O(D)) = 1 for D canonical contributes the extra 1
        Mode::Canonical => n * n * (g - 1) + 1,
    }
}

pub fn dim_fiber(setup: &GeometrySetup) -> Result<i64> {
    let GeometrySetup { g, d, n, .. } = *setup;
    let df = fiber_dimension_formula(g, d, n);
    if setup.mode == Mode::Canonical && df != n * n * (g - 1) + 1 {
        return Err(Error::Assertion(format!("canonical fiber dimension {df} != n^2(g-1)+1")));
    }
    Ok(df)
}

/// `dim_base + dim_fiber`; equals `n^2 d + 1` in large mode.
pub fn dim_total(setup: &GeometrySetup) -> Result<i64> {
    let total = dim_base(setup) + dim_fiber(setup)?;
    let (d, n) = (setup.d, setup.n);
    if setup.mode == Mode::Large && total != n * n * d + 1 {
        return Err(Error::Assertion(format!("total dimension {total} != n^2 d + 1")));
    }
    Ok(total)
}

/// `chi(O_{X_a}) = n(1-g) - n(n-1)d/2`.
pub fn euler_char_spectral(setup: &GeometrySetup) -> i64 {
    let GeometrySetup { g, d, n, .. } = *setup;
    n * (1 - g) - n * (n - 1) * d / 2
}

/// `dim_fiber - dim_base`; equals `n(2g-2-d) + 1` in large mode and 0 in
/// canonical mode.
pub fn relative_gap(setup: &GeometrySetup) -> Result<i64> {
    let GeometrySetup { g, d, n, .. } = *setup;
    let gap = dim_fiber(setup)? - dim_base(setup);
    match setup.mode {
        Mode::Large if gap != n * (2 * g - 2 - d) + 1 => {
            Err(Error::Assertion(format!("gap {gap} != n(2g-2-d)+1")))
        }
        Mode::Canonical if gap != 0 => {
            Err(Error::Assertion(format!("canonical gap {gap} != 0")))
        }
        _ => Ok(gap),
    }
}

/// Rank of the local system `R^1 f_* Q_l` over the smooth locus: twice the
/// abelian-scheme dimension.
pub fn r1_rank(setup: &GeometrySetup) -> Result<i64> {
    Ok(2 * dim_fiber(setup)?)
}

/// A stratum of the Hitchin base: the spectral curve has `s` distinct
/// components, the i-th of degree `n_i` over the curve and multiplicity
/// `m_i`, with `sum n_i m_i = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StratumLabel {
    pairs: Vec<(u32, u32)>,
}

impl StratumLabel {
    /// Sorts the pairs into canonical (descending lexicographic) order.
    pub fn new(mut pairs: Vec<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() || pairs.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::InvalidLabel(format!("pairs must be positive, got {pairs:?}")));
        }
        pairs.sort_by_key(|&p| Reverse(p));
        Ok(StratumLabel { pairs })
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn s(&self) -> usize {
        self.pairs.len()
    }

    /// `sum n_i m_i`.
    pub fn rank(&self) -> u32 {
        self.pairs.iter().map(|&(a, b)| a * b).sum()
    }

    /// `sum n_i`, each distinct component counted once.
    pub fn component_degree_sum(&self) -> u32 {
        self.pairs.iter().map(|&(a, _)| a).sum()
    }

    pub fn is_elliptic(&self) -> bool {
        self.pairs.len() == 1 && self.pairs[0].1 == 1
    }

    /// Serialization order: fewer components first, then descending
    /// lexicographic on the pair lists.
    fn sort_key(&self) -> (usize, Reverse<Vec<(u32, u32)>>) {
        (self.pairs.len(), Reverse(self.pairs.clone()))
    }
}

/// All stratum labels of rank `n`, each once, in canonical order.
pub fn enumerate_lambda(n: u32) -> Result<Vec<StratumLabel>> {
    if n == 0 || n > MAX_LAMBDA_RANK {
        return Err(Error::OutOfRange(format!("n = {n} not in 1..={MAX_LAMBDA_RANK}")));
    }
    // candidate pairs in descending order
    let mut candidates: Vec<(u32, u32)> =
        (1..=n).flat_map(|a| (1..=n / a).map(move |b| (a, b))).collect();
    candidates.sort_by_key(|&p| Reverse(p));
    let mut out = Vec::new();
    let mut current = Vec::new();
    multisets(&candidates, 0, n, &mut current, &mut out);
    let mut labels: Vec<StratumLabel> =
        out.into_iter().map(|pairs| StratumLabel { pairs }).collect();
    labels.sort_by_key(|l| l.sort_key());
    Ok(labels)
}

fn multisets(
    candidates: &[(u32, u32)],
    start: usize,
    remaining: u32,
    current: &mut Vec<(u32, u32)>,
    out: &mut Vec<Vec<(u32, u32)>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for (i, &(a, b)) in candidates.iter().enumerate().skip(start) {
        if a * b <= remaining {
            current.push((a, b));
            multisets(candidates, i, remaining - a * b, current, out);
            current.pop();
        }
    }
}

fn check_label(label: &StratumLabel, setup: &GeometrySetup) -> Result<()> {
    if label.rank() as i64 != setup.n {
        return Err(Error::InvalidLabel(format!(
            "sum n_i m_i = {} but n = {}",
            label.rank(),
            setup.n
        )));
    }
    Ok(())
}

/// Generic dimension of the stratum: each component moves in its own
/// elliptic base, so the dimensions add.
pub fn stratum_base_dim(label: &StratumLabel, setup: &GeometrySetup) -> Result<i64> {
    check_label(label, setup)?;
    label
        .pairs
        .iter()
        .map(|&(ni, _)| Ok(dim_base(&setup.with_rank(ni as i64)?)))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Excluded,
    NotExcluded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionRow {
    pub lambda: Vec<[u32; 2]>,
    /// `1 - s`
    pub lhs: i64,
    /// `(n - sum n_i)(d - 2g + 2)`
    pub rhs: i64,
    pub verdict: Verdict,
}

impl ExclusionRow {
    /// Re-checks the row's internal consistency after parsing.
    pub fn validate(&self, setup: &GeometrySetup) -> Result<()> {
        let label = StratumLabel::new(self.lambda.iter().map(|p| (p[0], p[1])).collect())?;
        let fresh = support_exclusion_test(&label, setup)?;
        if &fresh != self {
            return Err(Error::Assertion(format!("row {self:?} does not recompute")));
        }
        Ok(())
    }
}

/// Tests `1 - s >= (n - sum n_i)(d - 2g + 2)`; a stratum failing it cannot
/// carry a socle point.
pub fn support_exclusion_test(label: &StratumLabel, setup: &GeometrySetup) -> Result<ExclusionRow> {
    check_label(label, setup)?;
    // The constant term is d_f - d_A at rank n minus the same at each n_i:
    // 1 - s in large mode, 0 in canonical mode where d_f = d_A at every rank.
    let lhs = match setup.mode {
        Mode::Large => 1 - label.s() as i64,
        Mode::Canonical => 0,
    };
    let rhs = (setup.n - label.component_degree_sum() as i64) * (setup.d - 2 * setup.g + 2);
    Ok(ExclusionRow {
        lambda: label.pairs.iter().map(|&(a, b)| [a, b]).collect(),
        lhs,
        rhs,
        verdict: if lhs >= rhs { Verdict::NotExcluded } else { Verdict::Excluded },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<ExclusionRow>,
    pub not_excluded: usize,
}

/// Runs the exclusion test over every label of rank `n`. In large mode
/// exactly the elliptic label survives; in canonical mode every label does.
pub fn exclusion_sweep(setup: &GeometrySetup) -> Result<SweepReport> {
    let labels = enumerate_lambda(setup.n as u32)?;
    let rows = labels
        .iter()
        .map(|l| support_exclusion_test(l, setup))
        .collect::<Result<Vec<_>>>()?;
    let survivors: Vec<&StratumLabel> = labels
        .iter()
        .zip(&rows)
        .filter(|(_, r)| r.verdict == Verdict::NotExcluded)
        .map(|(l, _)| l)
        .collect();
    match setup.mode {
        Mode::Large => {
            if survivors.len() != 1 || !survivors[0].is_elliptic() {
                return Err(Error::Assertion(format!(
                    "expected only the elliptic label to survive, got {survivors:?}"
                )));
            }
        }
        Mode::Canonical => {
            if survivors.len() != labels.len() {
                return Err(Error::Assertion("canonical mode excluded a label".into()));
            }
        }
    }
    Ok(SweepReport { not_excluded: survivors.len(), rows })
}

/// One spectral component in the ledger: degree `n` over the curve,
/// multiplicity `m`, the dimension `d_a` of its parameter stratum and its
/// delta-invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerComponent {
    pub n: i64,
    #[serde(default = "one")]
    pub m: i64,
    pub d_a: i64,
    pub delta: i64,
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SevereLedgerEntry {
    pub components: Vec<LedgerComponent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentBounds {
    pub n: i64,
    /// `d_f(n_i) - delta_i`
    pub d_ab: i64,
    /// `d_f(n_i) - d_A(n_i) + d_{a_i}`
    pub severi_lower: i64,
    /// `d_A(n_i) - d_{a_i} >= delta_i`
    pub severi_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeveriReport {
    pub d_a: i64,
    pub d_ab: i64,
    /// `d_f - d_A + d_a`
    pub upper_bound: i64,
    pub lower_sum: i64,
    pub components: Vec<ComponentBounds>,
    /// `d_f - d_A + d_a >= d^ab`
    pub technique_holds: bool,
    pub verdict: Verdict,
}

/// Assembles the two inequalities bounding the abelian part at a candidate
/// socle point: the global upper bound `d_f - d_A + d_a` and the per-component
/// Severi lower bounds. The point is excluded when the lower bounds add up to
/// more than the upper bound.
pub fn severi_ledger(entry: &SevereLedgerEntry, setup: &GeometrySetup) -> Result<SeveriReport> {
    if entry.components.is_empty() {
        return Err(Error::InvalidLedger("no components".into()));
    }
    let weighted: i64 = entry.components.iter().map(|c| c.n * c.m).sum();
    if weighted != setup.n {
        return Err(Error::InvalidLedger(format!("sum n_i m_i = {weighted} but n = {}", setup.n)));
    }
    let mut components = Vec::with_capacity(entry.components.len());
    for c in &entry.components {
        if c.n < 1 || c.m < 1 {
            return Err(Error::InvalidLedger(format!("component {c:?} has nonpositive n or m")));
        }
        let sub = setup.with_rank(c.n)?;
        let df = dim_fiber(&sub)?;
        let da = dim_base(&sub);
        if c.delta < 0 {
            return Err(Error::InvalidLedger(format!("delta = {} is negative", c.delta)));
        }
        if c.delta > df {
            return Err(Error::InvalidLedger("delta exceeds fiber dimension".into()));
        }
        components.push(ComponentBounds {
            n: c.n,
            d_ab: df - c.delta,
            severi_lower: df - da + c.d_a,
            severi_holds: da - c.d_a >= c.delta,
        });
    }
    let d_a: i64 = entry.components.iter().map(|c| c.d_a).sum();
    let d_ab: i64 = components.iter().map(|c| c.d_ab).sum();
    let upper_bound = dim_fiber(setup)? - dim_base(setup) + d_a;
    let lower_sum: i64 = components.iter().map(|c| c.severi_lower).sum();
    Ok(SeveriReport {
        d_a,
        d_ab,
        upper_bound,
        lower_sum,
        components,
        technique_holds: upper_bound >= d_ab,
        verdict: if lower_sum > upper_bound { Verdict::Excluded } else { Verdict::NotExcluded },
    })
}
