//! Dense univariate polynomials over a [`Field`] context.

use serde::{Deserialize, Serialize};

use super::field::{Field, Fq};
use crate::error::{Error, Result};

/// Dense polynomial, lowest-degree coefficient first, no trailing zeros.
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `-1` standing in for the zero polynomial.
    pub fn degree_or_neg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

impl Poly<u32> {
    /// Coefficients as a comma-separated decimal list, lowest degree first.
    pub fn to_coeff_string(&self) -> String {
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Polynomial arithmetic over the field `F`.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(&self, c: F::Elem, k: usize) -> Poly<F::Elem> {
        let mut v = vec![self.field.zero(); k];
        v.push(c);
        self.from_coeffs(v)
    }

    pub fn x(&self) -> Poly<F::Elem> {
        self.monomial(self.field.one(), 1)
    }

    pub fn is_one(&self, a: &Poly<F::Elem>) -> bool {
        a.coeffs.len() == 1 && self.field.is_one(&a.coeffs[0])
    }

    pub fn is_constant(&self, a: &Poly<F::Elem>) -> bool {
        a.coeffs.len() <= 1
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = &self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = f.zero();
        let v = (0..n)
            .map(|i| f.add(a.coeffs.get(i).unwrap_or(&zero), b.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        self.from_coeffs(v)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly { coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect() }
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, a: &Poly<F::Elem>, k: usize) -> Poly<F::Elem> {
        if a.is_zero() {
            return a.clone();
        }
        let mut v = vec![self.field.zero(); k];
        v.extend(a.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let f = &self.field;
        let mut v = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(x, y));
            }
        }
        self.from_coeffs(v)
    }

    pub fn pow(&self, a: &Poly<F::Elem>, k: u32) -> Poly<F::Elem> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Euclidean division `a = q*b + r` with `deg r < deg b`.
    pub fn divrem(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> Result<(Poly<F::Elem>, Poly<F::Elem>)> {
        let f = &self.field;
        let lead = b.leading().ok_or(Error::ZeroPolynomial)?;
        let lead_inv = f.inv(lead).expect("nonzero leading coefficient");
        let db = b.coeffs.len() - 1;
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return Ok((self.zero(), a.clone()));
        }
        let mut q = vec![f.zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let c = f.mul(&r[i + db], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                r[i + j] = f.sub(&r[i + j], &f.mul(&c, bj));
            }
            q[i] = c;
        }
        r.truncate(db);
        Ok((self.from_coeffs(q), self.from_coeffs(r)))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
        Ok(self.divrem(a, b)?.1)
    }

    /// `a / b` when `b` divides `a` exactly.
    pub fn exact_div(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        let (q, r) = self.divrem(a, b).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, b: &Poly<F::Elem>, a: &Poly<F::Elem>) -> bool {
        if b.is_zero() {
            return a.is_zero();
        }
        self.rem(a, b).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.leading() {
            None => a.clone(),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero leading coefficient");
                self.scale(a, &inv)
            }
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = &self.field;
        let v = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
            .collect();
        self.from_coeffs(v)
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        a.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Truncation modulo `x^k`.
    pub fn truncate(&self, a: &Poly<F::Elem>, k: usize) -> Poly<F::Elem> {
        let mut v = a.coeffs.clone();
        v.truncate(k);
        self.from_coeffs(v)
    }
}

/// Polynomials over `F_q`, the coefficient type of sections of line bundles
/// on the projective line in the standard chart.
pub type PolyFq = Poly<u32>;

impl PolyRing<Fq> {
    pub fn from_ints(&self, coeffs: &[i64]) -> PolyFq {
        self.from_coeffs(coeffs.iter().map(|&c| self.field().reduce(c)).collect())
    }

    /// For `a` with nonzero coefficients only in degrees divisible by `p`,
    /// returns `b` with `b^p = a`.
    pub fn pth_root(&self, a: &PolyFq) -> PolyFq {
        let f = self.field();
        let p = f.p() as usize;
        debug_assert!(a.coeffs().iter().enumerate().all(|(i, c)| *c == 0 || i % p == 0));
        self.from_coeffs(a.coeffs().iter().step_by(p).map(|&c| f.pth_root(c)).collect())
    }

    /// Squarefree decomposition `a = unit * prod factor_k^mult_k` with monic,
    /// squarefree, pairwise coprime factors, sorted by multiplicity.
    pub fn squarefree_decomposition(&self, a: &PolyFq) -> Result<Vec<(PolyFq, u32)>> {
        if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        self.musser(&self.monic(a), 1, &mut out);
        out.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
        Ok(out)
    }

    fn musser(&self, a: &PolyFq, scale: u32, out: &mut Vec<(PolyFq, u32)>) {
        if self.is_constant(a) {
            return;
        }
        let p = self.field().p();
        let da = self.derivative(a);
        if da.is_zero() {
            let root = self.pth_root(a);
            self.musser(&root, scale * p, out);
            return;
        }
        let mut c = self.gcd(a, &da);
        let mut w = self.exact_div(a, &c).expect("gcd divides");
        let mut i = 1;
        while !self.is_constant(&w) {
            let y = self.gcd(&w, &c);
            let z = self.exact_div(&w, &y).expect("gcd divides");
            if !self.is_constant(&z) {
                push_factor(out, z, i * scale);
            }
            i += 1;
            c = self.exact_div(&c, &y).expect("gcd divides");
            w = y;
        }
        if !self.is_constant(&c) {
            let root = self.pth_root(&c);
            self.musser(&root, scale * p, out);
        }
    }
}

fn push_factor(out: &mut Vec<(PolyFq, u32)>, f: PolyFq, m: u32) {
    out.push((f, m));
}
