//! Field contexts.
//!
//! Finite fields here carry their modulus at runtime (q is a command-line
//! parameter), so elements are plain values and every operation goes through
//! a context implementing [`Field`].

use std::fmt::Debug;

use crate::error::{Error, Result};

/// Largest prime accepted as a base field.
pub const MAX_PRIME: u32 = 1 << 15;

/// Largest extension-field order for which log tables are built.
pub const MAX_EXTENSION_ORDER: u32 = 1 << 16;

/// Arithmetic context for a field whose elements are `Self::Elem`.
pub trait Field: Clone + Debug {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u32;
    /// Image of an integer under the canonical map.
    fn from_int(&self, k: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// A finite field `F_{p^k}`.
///
/// Elements are `u32` in `0..order`. For `k = 1` the value is the residue;
/// for `k > 1` the value packs the coefficients of a polynomial in the
/// generator as base-`p` digits (lowest digit = constant term), so the prime
/// subfield keeps the same encoding.
#[derive(Clone)]
pub struct Fq {
    p: u32,
    k: u32,
    order: u32,
    /// Monic defining polynomial (lowest first, length k + 1); empty for k = 1.
    modulus: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
}

impl Debug for Fq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} (modulus {:?})", self.p, self.k, self.modulus)
        }
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Fq {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl Fq {
    /// The prime field `F_q`; rejects composite `q` and `q > 2^15`.
    pub fn prime(q: u32) -> Result<Self> {
        if !is_prime(q as u64) {
            return Err(Error::InvalidField(format!("q = {q} is not prime")));
        }
        if q > MAX_PRIME {
            return Err(Error::InvalidField(format!("q = {q} exceeds {MAX_PRIME}")));
        }
        Ok(Fq {
            p: q,
            k: 1,
            order: q,
            modulus: Vec::new(),
            log: Vec::new(),
            exp: Vec::new(),
        })
    }

    /// The extension `F_{p^k}`, built from the first primitive monic
    /// polynomial of degree `k` in lexicographic order.
    pub fn extension(p: u32, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        if k == 1 {
            return Fq::prime(p);
        }
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        let order = (p as u64).checked_pow(k).filter(|&o| o <= MAX_EXTENSION_ORDER as u64);
        let order = order.ok_or_else(|| {
            Error::InvalidField(format!("F_{p}^{k} is larger than {MAX_EXTENSION_ORDER}"))
        })? as u32;

        // Search monic polynomials t^k + (lower digits) for one whose root
        // generates the multiplicative group.
        for lower in 0..order {
            let mut modulus = digits(lower, p, k as usize);
            modulus.push(1);
            if modulus[0] == 0 {
                continue;
            }
            if let Some((log, exp)) = build_tables(p, k, order, &modulus) {
                return Ok(Fq { p, k, order, modulus, log, exp });
            }
        }
        Err(Error::InvalidField(format!("no primitive polynomial found for F_{p}^{k}")))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    /// Inverse of the Frobenius `x -> x^p`.
    pub fn pth_root(&self, a: u32) -> u32 {
        if self.k == 1 {
            return a;
        }
        // x^(p^(k-1)) inverts Frobenius on F_{p^k}.
        let mut r = a;
        for _ in 0..self.k - 1 {
            r = self.pow(r, self.p as u64);
        }
        r
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Reduces an integer into the field.
    pub fn reduce(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiplies the packed element `x` by the generator modulo `modulus`.
fn times_generator(x: u32, p: u32, k: u32, modulus: &[u32]) -> u32 {
    let mut ds = digits(x, p, k as usize);
    let top = ds[k as usize - 1];
    for i in (1..k as usize).rev() {
        ds[i] = ds[i - 1];
    }
    ds[0] = 0;
    if top != 0 {
        for i in 0..k as usize {
            ds[i] = (ds[i] + p - (top * modulus[i]) % p) % p;
        }
    }
    undigits(&ds, p)
}

fn build_tables(p: u32, k: u32, order: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let n = (order - 1) as usize;
    let mut exp = vec![0u32; n];
    let mut log = vec![u32::MAX; order as usize];
    let mut x = 1u32;
    for (i, slot) in exp.iter_mut().enumerate() {
        if log[x as usize] != u32::MAX {
            return None;
        }
        *slot = x;
        log[x as usize] = i as u32;
        x = times_generator(x, p, k, modulus);
    }
    (x == 1).then_some((log, exp))
}

impl Field for Fq {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut x, mut y) = (*a, *b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.k {
                out += ((x % self.p + y % self.p) % self.p) * place;
                x /= self.p;
                y /= self.p;
                place *= self.p;
            }
            out
        }
    }

    fn neg(&self, a: &u32) -> u32 {
        if self.k == 1 {
            if *a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let ds: Vec<u32> =
                digits(*a, self.p, self.k as usize).into_iter().map(|d| (self.p - d) % self.p).collect();
            undigits(&ds, self.p)
        }
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if self.k == 1 {
            ((*a as u64 * *b as u64) % self.p as u64) as u32
        } else if *a == 0 || *b == 0 {
            0
        } else {
            let n = self.order as usize - 1;
            let l = (self.log[*a as usize] as usize + self.log[*b as usize] as usize) % n;
            self.exp[l]
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        if self.k == 1 {
            Some(self.pow(*a, self.p as u64 - 2))
        } else {
            let n = self.order as usize - 1;
            let l = (n - self.log[*a as usize] as usize) % n;
            Some(self.exp[l])
        }
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn from_int(&self, k: i64) -> u32 {
        self.reduce(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_large() {
        assert!(Fq::prime(4).is_err());
        assert!(Fq::prime(1).is_err());
        assert!(Fq::prime(32771).is_err()); // prime, but above 2^15
        assert!(Fq::prime(32749).is_ok());
    }

    #[test]
    fn inverses_exhaustive_small_primes() {
        for q in (2..=101).filter(|&q| is_prime(q)) {
            let f = Fq::prime(q as u32).unwrap();
            for a in 1..q as u32 {
                let b = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &b), 1, "q={q} a={a}");
            }
            assert_eq!(f.inv(&0), None);
        }
    }

    #[test]
    fn extension_fields_are_fields() {
        for (p, k) in [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4)] {
            let f = Fq::extension(p, k).unwrap();
            assert_eq!(f.order(), p.pow(k));
            for a in f.elements() {
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
                assert_eq!(f.pow(f.pth_root(a), p as u64), a);
            }
            // distributivity on a sample
            for a in f.elements().step_by(3) {
                for b in f.elements().step_by(5) {
                    for c in f.elements().step_by(7) {
                        let l = f.mul(&a, &f.add(&b, &c));
                        let r = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn prime_subfield_encoding_is_shared() {
        let f = Fq::extension(5, 2).unwrap();
        let g = Fq::prime(5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(f.mul(&a, &b), g.mul(&a, &b));
                assert_eq!(f.add(&a, &b), g.add(&a, &b));
            }
        }
    }
}
