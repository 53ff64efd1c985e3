//! Groupoid point counts of nilpotent Higgs pairs on the projective line.
//!
//! * [`bundles`]: splitting types, `|Aut E|` and closed forms for
//!   `sum 1/|Aut E|`.
//! * [`pairs`]: pairs `(E, theta)` with `theta: E -> E(d)`, kernel splitting
//!   types and flag invariants in both degree conventions.
//! * [`sweep`]: exhaustive enumeration and stratum counts with tail bounds.
//! * [`identity`]: the chain identity, calibration and growth checks.

pub mod bundles;
pub mod identity;
pub mod pairs;
pub mod sweep;

pub use bundles::{aut_bundle_size, splittings, SplittingType};
pub use identity::{
    bun_calibration, leading_exponent, symbolic_form, verify_count_identity, verify_with_sweep, CalibrationReport,
    Growth, IdentityReport, LeadingExponent, QFunction,
};
pub use pairs::{extract_invariants, kernel_splitting, Convention, FlagInvariants, HitchinPairP1};
pub use sweep::{
    bun_count, census_sweep, count_chain_stack, count_stratum, CensusSweep, StackyCount, TailKind,
};
