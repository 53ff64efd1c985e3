//! Cross-checks of the census: the stratum count against `q^delta` times
//! the chain count, the `theta = 0` stratum against closed forms for
//! `sum 1/|Aut E|`, and growth in `q` against the stratum dimension.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::bundles::{aut_polynomial, bun1, bun2_geometric, bun_total_product_formula, SplittingType};
use super::pairs::Convention;
use super::sweep::{count_chain_stack, census_sweep, CensusSweep, StackyCount, TailKind};
use crate::algebra::rational::{at_most_ten_to_minus, q_power, to_f64, to_fraction_string};
use crate::error::{Error, Result};
use crate::nilstrata::{chain_degrees, delta_exponent, NilpotentStratumLabel};
use crate::BigRational;

/// Genus of the projective line.
const G: i64 = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub q: u64,
    pub d: i64,
    pub n: usize,
    pub e: i64,
    pub label: NilpotentStratumLabel,
    pub window: i64,
    pub sat: StackyCount,
    pub unsat: StackyCount,
    pub chain: StackyCount,
    pub q_delta: i64,
    /// `q^delta` times the chain count.
    pub predicted: BigRational,
    /// Conventions whose count agrees with the prediction within tails.
    pub matching: Vec<Convention>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        !self.matching.is_empty()
    }

    pub fn count(&self, convention: Convention) -> &StackyCount {
        match convention {
            Convention::Sat => &self.sat,
            Convention::Unsat => &self.unsat,
        }
    }

    /// Reported convention: the first match, saturated preferred.
    pub fn convention(&self) -> Convention {
        self.matching.first().copied().unwrap_or(Convention::Sat)
    }

    /// Both sides vanish.
    pub fn is_empty(&self) -> bool {
        self.predicted.is_zero() && self.sat.value.is_zero() && self.unsat.value.is_zero()
    }

    pub fn to_json(&self) -> Value {
        self.to_json_for(self.convention())
    }

    /// Report with the headline value taken from the given convention.
    pub fn to_json_for(&self, conv: Convention) -> Value {
        let main = self.count(conv);
        json!({
            "q": self.q,
            "d": self.d,
            "n": self.n,
            "e": self.e,
            "label": {"nbar": self.label.nbar(), "ebar": self.label.ebar()},
            "convention": conv.as_str(),
            "value": main.value_string(),
            "window": self.window,
            "tail": main.tail_string(),
            "tail_kind": main.tail_kind.as_str(),
            "values": {
                "sat": self.sat.value_string(),
                "unsat": self.unsat.value_string(),
            },
            "identity": {
                "chain": self.chain.value_string(),
                "q_delta": format!("{:+}", self.q_delta),
                "predicted": to_fraction_string(&self.predicted),
                "matching": self.matching.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
                "verdict": if self.passed() { "PASS" } else { "FAIL" },
            },
        })
    }
}

fn agrees(count: &StackyCount, predicted: &BigRational, predicted_tail: &BigRational) -> bool {
    (&count.value - predicted).abs() <= &count.tail + predicted_tail
}

/// Compares both conventions of the stratum count with `q^delta` times the
/// chain count.
pub fn verify_count_identity(
    q: u64,
    d: i64,
    n: usize,
    e: i64,
    label: &NilpotentStratumLabel,
    window: i64,
) -> Result<IdentityReport> {
    let sweep = census_sweep(q, d, n, e, window)?;
    verify_with_sweep(&sweep, label)
}

/// As [`verify_count_identity`], reusing a sweep that covers the label.
pub fn verify_with_sweep(sweep: &CensusSweep, label: &NilpotentStratumLabel) -> Result<IdentityReport> {
    if label.rank() as usize != sweep.n || label.degree() != sweep.e {
        return Err(Error::InvalidLabel(format!(
            "label {label:?} does not have rank {} and degree {}",
            sweep.n, sweep.e
        )));
    }
    let (q, d, window) = (sweep.q, sweep.d, sweep.window);
    let sat = sweep.stratum_count(label, Convention::Sat);
    let unsat = sweep.stratum_count(label, Convention::Unsat);
    let f = chain_degrees(label, d);
    let chain = count_chain_stack(q, label.nbar(), &f, window)?;
    let q_delta = delta_exponent(label, G, d)?;
    let scale = q_power(q, q_delta);
    let predicted = &chain.value * &scale;
    let predicted_tail = &chain.tail * &scale;
    let matching = [Convention::Sat, Convention::Unsat]
        .into_iter()
        .filter(|c| {
            let count = match c {
                Convention::Sat => &sat,
                Convention::Unsat => &unsat,
            };
            agrees(count, &predicted, &predicted_tail)
        })
        .collect();
    Ok(IdentityReport {
        q,
        d,
        n: sweep.n,
        e: sweep.e,
        label: label.clone(),
        window,
        sat,
        unsat,
        chain,
        q_delta,
        predicted,
        matching,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationReport {
    pub q: u64,
    pub n: usize,
    pub e: i64,
    pub window: i64,
    pub census: StackyCount,
    /// Closed form truncated to the same window, when one is available.
    pub oracle_partial: Option<BigRational>,
    pub oracle_total: BigRational,
}

/// The calibration target for the certified tail.
pub const CALIBRATION_TAIL_EXP10: u32 = 9;

impl CalibrationReport {
    /// Census and oracle agree on the window.
    pub fn partial_match(&self) -> bool {
        self.oracle_partial.as_ref().is_none_or(|p| *p == self.census.value)
    }

    /// The full oracle value lies in `[census, census + tail]`.
    pub fn within_tail(&self) -> bool {
        let gap = &self.oracle_total - &self.census.value;
        !gap.is_negative() && gap <= self.census.tail
    }

    pub fn tail_small(&self) -> bool {
        at_most_ten_to_minus(&self.census.tail, CALIBRATION_TAIL_EXP10)
    }

    pub fn passed(&self) -> bool {
        self.partial_match() && self.within_tail() && self.tail_small()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "n": self.n,
            "e": self.e,
            "window": self.window,
            "value": self.census.value_string(),
            "tail": self.census.tail_string(),
            "tail_kind": self.census.tail_kind.as_str(),
            "oracle_partial": self.oracle_partial.as_ref().map(to_fraction_string),
            "oracle_total": to_fraction_string(&self.oracle_total),
            "partial_match": self.partial_match(),
            "within_tail": self.within_tail(),
            "tail_small": self.tail_small(),
            "verdict": if self.passed() { "PASS" } else { "FAIL" },
        })
    }
}

/// Census count of the `theta = 0` stratum against closed forms: the
/// scalar `1/(q-1)` in rank one, the explicit geometric series in rank two,
/// and the product formula for the full sum in rank three.
pub fn bun_calibration(q: u64, n: usize, e: i64, window: i64) -> Result<CalibrationReport> {
    if !(1..=3).contains(&n) {
        return Err(Error::OutOfRange(format!("calibration needs 1 <= n <= 3, got {n}")));
    }
    let label = NilpotentStratumLabel::new(vec![n as u32], vec![e])?;
    // d plays no role for the theta = 0 stratum
    let census = super::sweep::count_stratum(q, 1, n, e, &label, Convention::Sat, window)?;
    let (oracle_partial, oracle_total) = match n {
        1 => (Some(bun1(q)), bun1(q)),
        2 => {
            let (p, r) = bun2_geometric(q, e, window);
            (Some(p.clone()), p + r)
        }
        _ => (None, bun_total_product_formula(q, n)),
    };
    Ok(CalibrationReport { q, n, e, window, census, oracle_partial, oracle_total })
}

/// `q^shift * num(q) / den(q)` with integer polynomials, lowest coefficient
/// first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFunction {
    pub shift: i64,
    pub num: Vec<i64>,
    pub den: Vec<i64>,
}

fn degree(p: &[i64]) -> Option<i64> {
    p.iter().rposition(|&c| c != 0).map(|i| i as i64)
}

impl QFunction {
    pub fn eval(&self, q: u64) -> BigRational {
        let at = |p: &[i64]| -> BigRational {
            p.iter().rev().fold(BigRational::zero(), |acc, &c| acc * crate::algebra::rational::from_int(q as i64) + crate::algebra::rational::from_int(c))
        };
        q_power(q, self.shift) * at(&self.num) / at(&self.den)
    }

    /// `None` for the zero function.
    pub fn leading_exponent(&self) -> Option<i64> {
        let dn = degree(&self.num)?;
        let dd = degree(&self.den).expect("nonzero denominator");
        Some(self.shift + dn - dd)
    }

    /// `q^delta (q^(f_1 - f_2 + 1) - 1)/(q - 1)^2` for a two-step stratum
    /// with one-dimensional pieces; zero when `f_1 < f_2`.
    pub fn chain_11(label: &NilpotentStratumLabel, d: i64) -> Result<Self> {
        if label.nbar() != [1, 1] {
            return Err(Error::InvalidLabel(format!("expected nbar = (1,1), got {:?}", label.nbar())));
        }
        let f = chain_degrees(label, d);
        let shift = delta_exponent(label, G, d)?;
        let num = if f[0] >= f[1] {
            let mut p = vec![0i64; (f[0] - f[1] + 2) as usize];
            p[0] = -1;
            *p.last_mut().unwrap() = 1;
            p
        } else {
            vec![0]
        };
        Ok(QFunction { shift, num, den: vec![1, -2, 1] })
    }

    /// `1/|Aut E|` for the balanced splitting type, the dominant term of
    /// the `theta = 0` stratum.
    pub fn bun_balanced(n: usize, e: i64) -> Self {
        let nn = n as i64;
        let lo = e.div_euclid(nn);
        let high = e.rem_euclid(nn) as usize;
        let twists = (0..n).map(|i| if i < high { lo + 1 } else { lo }).collect();
        let st = SplittingType::new(twists).expect("balanced twists are ordered");
        QFunction { shift: 0, num: vec![1], den: aut_polynomial(&st) }
    }
}

/// Growth data for [`leading_exponent`].
#[derive(Debug, Clone)]
pub enum Growth {
    Symbolic(QFunction),
    /// Exact values at several `q`.
    Numeric(BTreeMap<u64, BigRational>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeadingExponent {
    pub exponent: i64,
    /// The numeric fit did not settle near an integer.
    pub anomaly: bool,
}

/// Fitted slopes farther than this from an integer are reported.
const FIT_TOLERANCE: f64 = 0.35;
const MAX_DENOMINATOR_POWER: u32 = 16;

/// Leading exponent in `q`: exact for a closed form, otherwise the rounded
/// `log_q` slope between the two largest `q` after removing powers of
/// `1 - 1/q`.
pub fn leading_exponent(growth: &Growth) -> Result<LeadingExponent> {
    match growth {
        Growth::Symbolic(f) => f
            .leading_exponent()
            .map(|exponent| LeadingExponent { exponent, anomaly: false })
            .ok_or_else(|| Error::OutOfRange("zero count has no leading exponent".into())),
        Growth::Numeric(values) => {
            if values.len() < 2 {
                return Err(Error::OutOfRange("need values at two q at least".into()));
            }
            if values.values().any(|v| !v.is_positive()) {
                return Err(Error::OutOfRange("growth fit needs positive counts".into()));
            }
            // Denominators (q - 1)^k bend the log-log slope at small q;
            // remove them with the k that makes the slopes most constant.
            let mut best: Option<(f64, f64)> = None;
            for k in 0..=MAX_DENOMINATOR_POWER {
                let pts: Vec<(f64, f64)> = values
                    .iter()
                    .map(|(&q, v)| {
                        let lq = (q as f64).ln();
                        (lq, to_f64(v).ln() + k as f64 * (1.0 - 1.0 / q as f64).ln())
                    })
                    .collect();
                let slopes: Vec<f64> =
                    pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
                let last = *slopes.last().unwrap();
                let spread = slopes.iter().map(|x| (x - last).abs()).fold(0.0, f64::max);
                if best.is_none_or(|(_, sp)| spread < sp - 1e-12) {
                    best = Some((last, spread));
                }
            }
            let (last, _) = best.unwrap();
            let exponent = last.round() as i64;
            let anomaly = (last - last.round()).abs() > FIT_TOLERANCE;
            Ok(LeadingExponent { exponent, anomaly })
        }
    }
}

/// Closed form of the stratum count when one is known: the chain formula
/// for `(1,1)` and the balanced term for `theta = 0`.
pub fn symbolic_form(label: &NilpotentStratumLabel, d: i64) -> Result<Option<QFunction>> {
    if label.nbar() == [1, 1] {
        return QFunction::chain_11(label, d).map(Some);
    }
    if label.s() == 1 {
        return Ok(Some(QFunction::bun_balanced(label.rank() as usize, label.degree())));
    }
    Ok(None)
}

/// Exact tail kinds that justify a zero tail.
pub fn tail_is_proven(kind: TailKind) -> bool {
    matches!(kind, TailKind::Exact | TailKind::Certified)
}
