//! Characteristic polynomials of twisted endomorphisms on the projective
//! line and their classification over a finite field.
//!
//! A point `a = (a_1, ..., a_n)` of the Hitchin base has `a_i` a section of
//! `O(i d)`, represented in the standard chart by a polynomial of degree at
//! most `i d`. Factorization is over `F_q(t)`; the profile is therefore the
//! `F_q`-rational shadow of the geometric one, refined on demand over
//! `F_(q^k)`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{factor_u, resultant_discriminant, BivarPoly, Fq, PolyFq, PolyRing};
use crate::error::{Error, Result};
use crate::numerology::{euler_char_spectral, GeometrySetup};

/// Largest search space (field order to the number of free coefficients
/// at one t-adic level) accepted by the extension-field refinement.
const REFINE_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPoint {
    q: u32,
    d: i64,
    a: Vec<PolyFq>,
}

impl CharPoint {
    pub fn new(q: u32, d: i64, a: Vec<PolyFq>) -> Result<Self> {
        Fq::prime(q)?;
        if a.is_empty() {
            return Err(Error::InvalidSetup("rank must be at least 1".into()));
        }
        for (i, ai) in a.iter().enumerate() {
            let bound = (i as i64 + 1) * d;
            if ai.degree_or_neg() > bound {
                return Err(Error::DegreeBound(format!(
                    "a_{} has degree {} > {bound}",
                    i + 1,
                    ai.degree_or_neg()
                )));
            }
            if ai.coeffs().iter().any(|&c| c >= q) {
                return Err(Error::InvalidField(format!("coefficient of a_{} not reduced mod {q}", i + 1)));
            }
        }
        Ok(CharPoint { q, d, a })
    }

    /// Builds a point from integer coefficient lists, reducing mod `q`.
    pub fn from_ints(q: u32, d: i64, a: &[Vec<i64>]) -> Result<Self> {
        let ring = PolyRing::new(Fq::prime(q)?);
        CharPoint::new(q, d, a.iter().map(|c| ring.from_ints(c)).collect())
    }

    pub fn zero(q: u32, d: i64, n: usize) -> Result<Self> {
        CharPoint::from_ints(q, d, &vec![Vec::new(); n])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[PolyFq] {
        &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|c| c.is_zero())
    }

    fn ring(&self) -> PolyRing<Fq> {
        PolyRing::new(Fq::prime(self.q).expect("validated"))
    }

    /// The same point read in the chart at infinity, `s = 1/t`:
    /// `a_i'(s) = s^(i d) a_i(1/s)`.
    pub fn at_infinity(&self) -> CharPoint {
        let ring = self.ring();
        let a = self
            .a
            .iter()
            .enumerate()
            .map(|(i, ai)| {
                let w = ((i as i64 + 1) * self.d).max(0) as usize;
                let mut c = vec![0u32; w + 1];
                for (k, &x) in ai.coeffs().iter().enumerate() {
                    c[w - k] = x;
                }
                ring.from_coeffs(c)
            })
            .collect();
        CharPoint { q: self.q, d: self.d, a }
    }
}

/// `u^n + a_1 u^(n-1) + ... + a_n`.
pub fn build_char_poly(a: &CharPoint) -> BivarPoly {
    BivarPoly::monic_from_tail(&a.ring(), &a.a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscStatus {
    Zero,
    NonzeroSquarefree,
    NonzeroNonSquarefree,
}

impl DiscStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DiscStatus::Zero => "zero",
            DiscStatus::NonzeroSquarefree => "nonzero-squarefree",
            DiscStatus::NonzeroNonSquarefree => "nonzero-non-squarefree",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantReport {
    pub disc: PolyFq,
    pub status: DiscStatus,
    /// Squarefree nonzero discriminant: the spectral curve is smooth over
    /// the affine chart.
    pub chart_smooth: bool,
    /// Chart-smooth and the discriminant has the generic degree
    /// `n(n-1)d`, so nothing happens over infinity either.
    pub smooth_candidate: bool,
    /// Chart-smooth but the degree test says nothing about infinity.
    pub infinity_unverified: bool,
}

pub fn discriminant_status(a: &CharPoint) -> DiscriminantReport {
    let ring = a.ring();
    let disc = resultant_discriminant(&ring, &build_char_poly(a)).expect("n >= 1");
    let status = if disc.is_zero() {
        DiscStatus::Zero
    } else if is_squarefree(&ring, &disc) {
        DiscStatus::NonzeroSquarefree
    } else {
        DiscStatus::NonzeroNonSquarefree
    };
    let n = a.n() as i64;
    let chart_smooth = status == DiscStatus::NonzeroSquarefree;
    let generic = disc.degree_or_neg() == n * (n - 1) * a.d;
    DiscriminantReport {
        disc,
        status,
        chart_smooth,
        smooth_candidate: chart_smooth && generic,
        infinity_unverified: chart_smooth && !generic,
    }
}

fn is_squarefree(ring: &PolyRing<Fq>, f: &PolyFq) -> bool {
    ring.squarefree_decomposition(f)
        .map(|parts| parts.iter().all(|(_, m)| *m == 1))
        .unwrap_or(false)
}

/// Second-chart certificate over `t = infinity`: the spectral curve is
/// smooth over `s = 0` when the discriminant there vanishes to order at
/// most one. A `false` answer means "not certified", not "singular".
pub fn smooth_at_infinity(a: &CharPoint) -> bool {
    let b = a.at_infinity();
    let ring = b.ring();
    let disc = resultant_discriminant(&ring, &build_char_poly(&b)).expect("n >= 1");
    let order = disc.coeffs().iter().position(|&c| c != 0);
    matches!(order, Some(0) | Some(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralFlags {
    pub smooth_candidate: bool,
    pub chart_smooth: bool,
    pub infinity_unverified: bool,
    pub reduced: bool,
    pub nilpotent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralClassification {
    /// `(u-degree, multiplicity)` of the irreducible factors over `F_q(t)`,
    /// sorted descending.
    pub profile: Vec<(usize, u32)>,
    pub factors: Vec<(BivarPoly, u32)>,
    pub disc: PolyFq,
    pub status: DiscStatus,
    pub flags: SpectralFlags,
}

impl SpectralClassification {
    pub fn to_json(&self) -> Value {
        json!({
            "profile": self.profile.iter().map(|&(d, m)| json!([d, m])).collect::<Vec<_>>(),
            "disc": self.disc.to_coeff_string(),
            "status": self.status.as_str(),
            "flags": self.flags,
        })
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let total: usize = self.profile.iter().map(|&(d, m)| d * m as usize).sum();
        if total != n {
            return Err(Error::Assertion(format!("profile {:?} does not add up to {n}", self.profile)));
        }
        if self.flags.reduced != self.profile.iter().all(|&(_, m)| m == 1) {
            return Err(Error::Assertion("reduced flag disagrees with profile".into()));
        }
        Ok(())
    }
}

fn profile_of(factors: &[(BivarPoly, u32)]) -> Vec<(usize, u32)> {
    let mut p: Vec<(usize, u32)> =
        factors.iter().map(|(f, m)| (f.u_degree().unwrap_or(0), *m)).collect();
    p.sort_unstable_by(|x, y| y.cmp(x));
    p
}

pub fn multiplicity_profile(a: &CharPoint) -> SpectralClassification {
    let ring = a.ring();
    let p = build_char_poly(a);
    let factors = factor_u(&ring, &p).expect("monic and nonzero");
    let profile = profile_of(&factors);
    let disc = discriminant_status(a);
    let reduced = profile.iter().all(|&(_, m)| m == 1);
    let flags = SpectralFlags {
        smooth_candidate: disc.smooth_candidate,
        chart_smooth: disc.chart_smooth,
        infinity_unverified: disc.infinity_unverified,
        reduced,
        nilpotent: a.is_zero(),
    };
    SpectralClassification { profile, factors, disc: disc.disc, status: disc.status, flags }
}

/// Profile of `P_a` over `F_(q^k)(t)`.
pub fn refine_profile(a: &CharPoint, k: u32) -> Result<Vec<(usize, u32)>> {
    let field = if k == 1 { Fq::prime(a.q)? } else { Fq::extension(a.q, k)? };
    let slots = (a.n() / 2).max(1) as u32;
    if (field.order() as u64).checked_pow(slots).is_none_or(|c| c > REFINE_BUDGET) {
        return Err(Error::BudgetExceeded(format!(
            "factor search over F_{}^{k} is too large",
            a.q
        )));
    }
    // The prime subfield keeps its encoding inside every extension.
    let ring = PolyRing::new(field);
    let coeffs = a.a.iter().map(|c| ring.from_coeffs(c.coeffs().to_vec())).collect::<Vec<_>>();
    let p = BivarPoly::monic_from_tail(&ring, &coeffs);
    Ok(profile_of(&factor_u(&ring, &p)?))
}

/// Whether `P_a` stays irreducible and reduced over `F_(q^k)(t)` for every
/// `k <= n`; `None` when some extension is too large to search.
pub fn elliptic_up_to_rank(a: &CharPoint) -> Option<bool> {
    let n = a.n();
    for k in 1..=n as u32 {
        match refine_profile(a, k) {
            Ok(p) if p != vec![(n, 1)] => return Some(false),
            Ok(_) => {}
            Err(_) => return None,
        }
    }
    Some(true)
}

/// `(sum_{i<n} chi(O(-iD)), chi(O_{X_a}))`, asserted equal.
pub fn pushforward_check(setup: &GeometrySetup) -> Result<(i64, i64)> {
    let (g, d, n) = (setup.g(), setup.d(), setup.n());
    let summed: i64 = (0..n).map(|i| 1 - g - i * d).sum();
    let closed = euler_char_spectral(setup);
    if summed != closed {
        return Err(Error::Assertion(format!("pushforward Euler characteristic {summed} != {closed}")));
    }
    Ok((summed, closed))
}

/// Uniform random point; sample `index` uses its own stream of the seeded
/// generator so the result does not depend on how samples are scheduled.
pub fn random_point(q: u32, d: i64, n: usize, seed: u64, index: u64) -> Result<CharPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let a = (1..=n)
        .map(|i| {
            let len = (i as i64 * d + 1).max(0) as usize;
            (0..len).map(|_| rng.gen_range(0..q) as i64).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    CharPoint::from_ints(q, d, &a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleTable {
    pub q: u32,
    pub d: i64,
    pub n: usize,
    pub count: u64,
    pub seed: u64,
    /// Occurrences keyed by `status profile`, e.g. `nonzero-squarefree [[2,1]]`.
    pub classes: BTreeMap<String, u64>,
    pub zero_disc: u64,
    pub non_squarefree: u64,
    pub reduced: u64,
    pub nilpotent: u64,
    pub smooth_candidate: u64,
}

impl SampleTable {
    /// Samples whose discriminant is zero or has a repeated factor.
    pub fn non_squarefree_fraction(&self) -> (u64, u64) {
        (self.non_squarefree, self.count)
    }
}

/// Draws `count` uniform points and tabulates their classification. With
/// `force_zero` every point is replaced by `a = 0`.
pub fn sample_strata(q: u32, d: i64, n: usize, count: u64, seed: u64, force_zero: bool) -> Result<SampleTable> {
    Fq::prime(q)?;
    if n == 0 {
        return Err(Error::InvalidSetup("rank must be at least 1".into()));
    }
    let classes: Vec<SpectralClassification> = (0..count)
        .into_par_iter()
        .map(|i| {
            let a = if force_zero { CharPoint::zero(q, d, n)? } else { random_point(q, d, n, seed, i)? };
            Ok(multiplicity_profile(&a))
        })
        .collect::<Result<_>>()?;
    let mut table = SampleTable {
        q,
        d,
        n,
        count,
        seed,
        classes: BTreeMap::new(),
        zero_disc: 0,
        non_squarefree: 0,
        reduced: 0,
        nilpotent: 0,
        smooth_candidate: 0,
    };
    for c in &classes {
        let profile = serde_json::to_string(&c.profile).expect("serializable");
        *table.classes.entry(format!("{} {profile}", c.status.as_str())).or_default() += 1;
        table.zero_disc += (c.status == DiscStatus::Zero) as u64;
        table.non_squarefree += (c.status != DiscStatus::NonzeroSquarefree) as u64;
        table.reduced += c.flags.reduced as u64;
        table.nilpotent += c.flags.nilpotent as u64;
        table.smooth_candidate += c.flags.smooth_candidate as u64;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(q: u32, d: i64, a: &[&[i64]]) -> CharPoint {
        CharPoint::from_ints(q, d, &a.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn char_poly_construction() {
        let a = pt(5, 1, &[&[], &[0, -1]]);
        let p = build_char_poly(&a);
        assert_eq!(p.to_coeff_lists(), vec![vec![0, 4], vec![], vec![1]]);
        let z = CharPoint::zero(3, 2, 3).unwrap();
        assert_eq!(build_char_poly(&z).to_coeff_lists(), vec![vec![], vec![], vec![], vec![1]]);
        assert!(matches!(CharPoint::from_ints(5, 1, &[vec![0, 0, 1]]), Err(Error::DegreeBound(_))));
    }

    #[test]
    fn profile_examples() {
        let c = multiplicity_profile(&CharPoint::zero(5, 1, 3).unwrap());
        assert_eq!(c.profile, vec![(1, 3)]);
        assert!(c.flags.nilpotent && !c.flags.reduced);

        let c = multiplicity_profile(&pt(5, 1, &[&[], &[0, -1]]));
        assert_eq!(c.profile, vec![(2, 1)]);
        assert!(c.flags.reduced);

        let c = multiplicity_profile(&pt(5, 1, &[&[], &[0, 0, 1]]));
        assert_eq!(c.profile, vec![(1, 1), (1, 1)]);
        assert!(c.flags.reduced);
        c.validate(2).unwrap();
    }

    #[test]
    fn discriminant_examples() {
        let r = discriminant_status(&pt(5, 1, &[&[], &[0, -1]]));
        // raw Sylvester sign: -4t = t over F_5
        assert_eq!(r.disc.coeffs(), &[0, 1]);
        assert_eq!(r.status, DiscStatus::NonzeroSquarefree);
        assert!(r.chart_smooth && r.infinity_unverified && !r.smooth_candidate);

        let r = discriminant_status(&CharPoint::zero(5, 1, 2).unwrap());
        assert_eq!(r.status, DiscStatus::Zero);

        let r = discriminant_status(&pt(5, 1, &[&[], &[0, 0, 1]]));
        assert_eq!(r.status, DiscStatus::NonzeroNonSquarefree);
    }

    #[test]
    fn second_chart() {
        // u^2 - t: over s = 1/t it becomes u^2 - s, smooth
        assert!(smooth_at_infinity(&pt(5, 1, &[&[], &[0, -1]])));
        // u^2 - 1 - t^2: generic degree, smooth at infinity
        let a = pt(5, 1, &[&[], &[-1, 0, -1]]);
        assert!(discriminant_status(&a).smooth_candidate);
        assert!(smooth_at_infinity(&a));
        // u^2 - t: constant term only, chart at infinity reads u^2 - s
        assert_eq!(pt(5, 1, &[&[], &[0, -1]]).at_infinity().a()[1].coeffs(), &[0, 4]);
        // u^2 - 1: double point at infinity in the other chart
        assert!(!smooth_at_infinity(&pt(5, 1, &[&[], &[-1]])));
    }

    #[test]
    fn refinement_over_extension() {
        // 2 is not a square mod 5
        let a = pt(5, 1, &[&[], &[-2]]);
        assert_eq!(multiplicity_profile(&a).profile, vec![(2, 1)]);
        assert_eq!(refine_profile(&a, 2).unwrap(), vec![(1, 1), (1, 1)]);
        assert_eq!(elliptic_up_to_rank(&a), Some(false));
        let b = pt(5, 1, &[&[], &[0, -1]]);
        assert_eq!(elliptic_up_to_rank(&b), Some(true));
    }

    #[test]
    fn pushforward_examples() {
        assert_eq!(pushforward_check(&GeometrySetup::large(0, 1, 2).unwrap()).unwrap(), (1, 1));
        assert_eq!(pushforward_check(&GeometrySetup::large(2, 3, 2).unwrap()).unwrap(), (-5, -5));
        assert_eq!(pushforward_check(&GeometrySetup::large(3, 5, 1).unwrap()).unwrap(), (-2, -2));
    }

    #[test]
    fn sampling_basics() {
        let t = sample_strata(7, 1, 2, 0, 1, false).unwrap();
        assert!(t.classes.is_empty());
        let t = sample_strata(7, 1, 2, 20, 1, true).unwrap();
        assert_eq!(t.nilpotent, 20);
        let a = sample_strata(5, 1, 2, 30, 9, false).unwrap();
        let b = sample_strata(5, 1, 2, 30, 9, false).unwrap();
        assert_eq!(a, b);
        assert_eq!(random_point(5, 1, 2, 9, 3).unwrap(), random_point(5, 1, 2, 9, 3).unwrap());
    }
}
