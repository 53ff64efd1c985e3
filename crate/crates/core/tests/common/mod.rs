//! Seeded property suites shared by the property tests and the acceptance
//! run. Each returns `Err` with the first counterexample.

#![allow(dead_code)]

use hitchin_core::algebra::bivar::gcd_u;
use hitchin_core::algebra::linalg::{generic_rank, PolyMatrix};
use hitchin_core::algebra::{resultant_discriminant, squarefree_decomposition_u, BivarPoly, Fq, PolyFq, PolyRing};
use hitchin_core::census::pairs::map_degrees;
use hitchin_core::census::{census_sweep, kernel_splitting, Convention};
use hitchin_core::spectral::{multiplicity_profile, random_point, DiscStatus};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const SAMPLES: u32 = 500;

pub fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn check<S: Strategy>(
    cases: u32,
    seed: u8,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases, seed).run(&strategy, test).map_err(|e| e.to_string())
}

const PRIMES: [u32; 4] = [2, 3, 5, 7];

fn poly_strategy(max_len: usize) -> impl Strategy<Value = (u32, Vec<u32>)> {
    prop::sample::select(PRIMES.to_vec())
        .prop_flat_map(move |q| (Just(q), prop::collection::vec(0..q, 1..=max_len)))
}

fn pow(ring: &PolyRing<Fq>, f: &PolyFq, k: u32) -> PolyFq {
    ring.pow(f, k)
}

/// Squarefree parts are squarefree, coprime, and multiply back to the monic
/// input; gcds divide both arguments and leave coprime cofactors.
pub fn gcd_squarefree_reassembly(cases: u32) -> Result<(), String> {
    // products of random factors so repeated factors actually occur
    let strat = poly_strategy(5).prop_flat_map(|(q, a)| {
        (Just(q), Just(a), prop::collection::vec(0..q, 1..=4), 1u32..=4, prop::collection::vec(0..q, 0..=6))
    });
    check(cases, 11, strat, |(q, a, b, k, c)| {
        let ring = PolyRing::new(Fq::prime(q).unwrap());
        let (a, b, c) = (ring.from_coeffs(a), ring.from_coeffs(b), ring.from_coeffs(c));
        let f = ring.mul(&ring.mul(&a, &pow(&ring, &b, k)), &c);
        if f.is_zero() {
            return Ok(());
        }
        let parts = ring.squarefree_decomposition(&f).unwrap();
        let mut prod = ring.one();
        for (i, (g, m)) in parts.iter().enumerate() {
            let dg = ring.derivative(g);
            prop_assert!(ring.is_one(&ring.gcd(g, &dg)) || dg.is_zero() && ring.is_constant(g));
            for (h, _) in &parts[i + 1..] {
                prop_assert!(ring.is_one(&ring.gcd(g, h)));
            }
            prod = ring.mul(&prod, &pow(&ring, g, *m));
        }
        prop_assert_eq!(prod, ring.monic(&f));
        let g = ring.gcd(&f, &a);
        if !g.is_zero() {
            prop_assert!(ring.divides(&g, &f) && ring.divides(&g, &a));
            let (fa, aa) = (ring.exact_div(&f, &g).unwrap(), ring.exact_div(&a, &g).unwrap());
            prop_assert!(ring.is_one(&ring.gcd(&fa, &aa)));
        }
        Ok(())
    })
}

fn bivar_strategy() -> impl Strategy<Value = (u32, i64, usize, u64)> {
    (prop::sample::select(PRIMES.to_vec()), 1i64..=2, 1usize..=3, any::<u64>())
}

/// The discriminant vanishes exactly when `P` and `dP/du` share a factor
/// over `F_q(t)`; for `n < p` that is exactly a repeated factor.
pub fn discriminant_iff_gcd(cases: u32) -> Result<(), String> {
    check(cases, 12, bivar_strategy(), |(q, d, n, seed)| {
        let ring = PolyRing::new(Fq::prime(q).unwrap());
        let mut a = random_point(q, d, n, seed, 0).unwrap();
        // half the cases get a forced square factor
        if seed % 2 == 0 && n >= 2 {
            let r = random_point(q, d, 1, seed, 1).unwrap();
            let lin = BivarPoly::monic_from_tail(&ring, r.a());
            let rest = random_point(q, d, n - 2, seed, 2);
            let mut p = lin.mul(&ring, &lin);
            if let Ok(rest) = rest {
                p = p.mul(&ring, &BivarPoly::monic_from_tail(&ring, rest.a()));
            }
            let tail: Vec<Vec<i64>> = p.u_coeffs()[..n]
                .iter()
                .rev()
                .map(|c| c.coeffs().iter().map(|&x| x as i64).collect())
                .collect();
            a = hitchin_core::spectral::CharPoint::from_ints(q, d, &tail).unwrap_or(a);
        }
        let p = hitchin_core::spectral::build_char_poly(&a);
        let disc = resultant_discriminant(&ring, &p).unwrap();
        let g = gcd_u(&ring, &p, &p.partial_u(&ring));
        let common = g.u_degree().is_none_or(|k| k > 0);
        prop_assert_eq!(disc.is_zero(), common, "disc {:?} vs gcd {:?}", disc, g);
        if (n as u32) < q {
            let parts = squarefree_decomposition_u(&ring, &p).unwrap();
            let repeated = parts.iter().any(|(_, m)| *m > 1);
            prop_assert_eq!(disc.is_zero(), repeated);
        }
        Ok(())
    })
}

/// Irreducible factors with multiplicities multiply back to `P_a`, and
/// the profile adds up to `n`.
pub fn profile_reassembly(cases: u32) -> Result<(), String> {
    check(cases, 13, bivar_strategy(), |(q, d, n, seed)| {
        let ring = PolyRing::new(Fq::prime(q).unwrap());
        let a = random_point(q, d, n, seed, 0).unwrap();
        let c = multiplicity_profile(&a);
        c.validate(n).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let mut prod = BivarPoly::from_u_coeffs(vec![ring.one()]);
        for (f, m) in &c.factors {
            prod = prod.mul(&ring, &f.pow(&ring, *m));
        }
        prop_assert_eq!(prod, hitchin_core::spectral::build_char_poly(&a));
        prop_assert_eq!(c.status == DiscStatus::Zero, c.disc.is_zero());
        Ok(())
    })
}

fn bundle_map_strategy() -> impl Strategy<Value = (u32, Vec<i64>, Vec<i64>, u64)> {
    (prop::sample::select(vec![2u32, 3, 5]), 1usize..=3, 1usize..=3).prop_flat_map(|(q, n, m)| {
        (
            Just(q),
            prop::collection::vec(-2i64..=2, n),
            prop::collection::vec(-1i64..=3, m),
            any::<u64>(),
        )
    })
}

fn random_map(ring: &PolyRing<Fq>, source: &[i64], target: &[i64], seed: u64) -> PolyMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let q = ring.field().order();
    // sparse entries make rank drops common
    let sparse = rng.gen_bool(0.5);
    target
        .iter()
        .map(|&t| {
            source
                .iter()
                .map(|&s| {
                    let len = (t - s + 1).max(0) as usize;
                    if sparse && rng.gen_bool(0.5) {
                        return ring.zero();
                    }
                    ring.from_coeffs((0..len).map(|_| rng.gen_range(0..q)).collect())
                })
                .collect()
        })
        .collect()
}

/// For `m : (+) O(s_j) -> (+) O(t_i)`: the kernel is a bundle of rank
/// `n - rank m` and degree `deg ker`, `rank m` is the generic rank, and the
/// image degree `deg E - deg ker` is at most the saturated image degree.
pub fn kernel_bookkeeping(cases: u32) -> Result<(), String> {
    check(cases, 14, bundle_map_strategy(), |(q, source, target, seed)| {
        let ring = PolyRing::new(Fq::prime(q).unwrap());
        let m = random_map(&ring, &source, &target, seed);
        let md = map_degrees(&ring, &m, &source, &target);
        let ker = kernel_splitting(&ring, &m, &source, &target).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let deg_e: i64 = source.iter().sum();
        let deg_im = deg_e - md.ker_degree;
        prop_assert_eq!(md.rank, generic_rank(&ring, &m));
        prop_assert_eq!(ker.rank() + md.rank, source.len());
        prop_assert_eq!(ker.degree(), md.ker_degree);
        prop_assert_eq!(ker.degree() + deg_im, deg_e);
        prop_assert!(deg_im <= md.sat_image_degree || md.rank == 0);
        Ok(())
    })
}

/// Summing the stratum counts of every label of one convention gives the
/// count of all nilpotent pairs in the window.
pub fn census_partition(cases: u32) -> Result<(), String> {
    let strat = (prop::sample::select(vec![2u64, 3]), 1i64..=2, -2i64..=2, 0i64..=3);
    check(cases, 15, strat, |(q, d, e, window)| {
        let sw = census_sweep(q, d, 2, e, window).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for conv in [Convention::Sat, Convention::Unsat] {
            let sum: hitchin_core::BigRational = sw.labels(conv).iter().map(|l| sw.stratum_count(l, conv).value).sum();
            prop_assert_eq!(&sum, &sw.total());
        }
        let nilpotent: u64 = sw.splittings.iter().map(|s| s.tally.nilpotent).sum();
        let labelled: u64 = sw.splittings.iter().flat_map(|s| s.tally.labels.values()).sum();
        prop_assert_eq!(nilpotent, labelled);
        Ok(())
    })
}

/// Sweeps and their serialized stratum counts agree between one and four
/// workers.
pub fn determinism_across_workers(cases: u32) -> Result<(), String> {
    let strat = (prop::sample::select(vec![2u64, 3]), 1i64..=2, -1i64..=1, 0i64..=2);
    check(cases, 16, strat, |(q, d, e, window)| {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                let sw = census_sweep(q, d, 2, e, window).unwrap();
                let rendered: Vec<String> = sw
                    .labels(Convention::Sat)
                    .iter()
                    .map(|l| format!("{:?} {}", l, sw.stratum_count(l, Convention::Sat).value_string()))
                    .collect();
                (sw, rendered)
            })
        };
        let (a, ra) = run(1);
        let (b, rb) = run(4);
        prop_assert_eq!(a, b);
        prop_assert_eq!(ra, rb);
        Ok(())
    })
}

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

pub const SUITES: [Suite; 6] = [
    ("gcd/squarefree reassembly", gcd_squarefree_reassembly),
    ("discriminant vs gcd", discriminant_iff_gcd),
    ("profile reassembly", profile_reassembly),
    ("kernel bookkeeping", kernel_bookkeeping),
    ("census partition", census_partition),
    ("determinism across workers", determinism_across_workers),
];
