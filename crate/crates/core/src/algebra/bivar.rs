//! Polynomials in `u` with coefficients in `F_q[t]`: characteristic
//! polynomials of twisted endomorphisms on the projective line, read in the
//! standard chart.

use serde::{Deserialize, Serialize};

use super::field::{Field, Fq};
use super::linalg::determinant;
use super::poly::{Poly, PolyFq, PolyRing};
use super::ratfun::{FunctionField, RatFun};
use crate::error::{Error, Result};

/// `coeffs[k]` is the coefficient of `u^k`; no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BivarPoly {
    coeffs: Vec<PolyFq>,
}

impl BivarPoly {
    pub fn from_u_coeffs(mut coeffs: Vec<PolyFq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BivarPoly { coeffs }
    }

    /// `u^n + a_1 u^(n-1) + ... + a_n` for `a = (a_1, ..., a_n)`.
    pub fn monic_from_tail(ring: &PolyRing<Fq>, a: &[PolyFq]) -> Self {
        let n = a.len();
        let mut coeffs = vec![ring.zero(); n + 1];
        coeffs[n] = ring.one();
        for (i, ai) in a.iter().enumerate() {
            coeffs[n - 1 - i] = ai.clone();
        }
        BivarPoly::from_u_coeffs(coeffs)
    }

    pub fn u_coeffs(&self) -> &[PolyFq] {
        &self.coeffs
    }

    pub fn u_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self, ring: &PolyRing<Fq>) -> bool {
        self.coeffs.last().is_some_and(|c| ring.is_one(c))
    }

    /// Largest t-degree among the coefficients.
    pub fn t_degree(&self) -> i64 {
        self.coeffs.iter().map(|c| c.degree_or_neg()).max().unwrap_or(-1)
    }

    pub fn to_ku(&self, k: &FunctionField) -> Poly<RatFun> {
        let r = PolyRing::new(k.clone());
        r.from_coeffs(self.coeffs.iter().map(|c| k.from_poly(c.clone())).collect())
    }

    /// Inverse of [`BivarPoly::to_ku`]; `None` if a coefficient has a
    /// nontrivial denominator.
    pub fn from_ku(k: &FunctionField, p: &Poly<RatFun>) -> Option<Self> {
        let coeffs = p.coeffs().iter().map(|c| k.as_poly(c)).collect::<Option<Vec<_>>>()?;
        Some(BivarPoly::from_u_coeffs(coeffs))
    }

    pub fn mul(&self, ring: &PolyRing<Fq>, other: &BivarPoly) -> BivarPoly {
        if self.is_zero() || other.is_zero() {
            return BivarPoly { coeffs: Vec::new() };
        }
        let mut v = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = ring.add(&v[i + j], &ring.mul(a, b));
            }
        }
        BivarPoly::from_u_coeffs(v)
    }

    pub fn pow(&self, ring: &PolyRing<Fq>, k: u32) -> BivarPoly {
        let mut acc = BivarPoly::from_u_coeffs(vec![ring.one()]);
        for _ in 0..k {
            acc = acc.mul(ring, self);
        }
        acc
    }

    pub fn partial_u(&self, ring: &PolyRing<Fq>) -> BivarPoly {
        let f = ring.field();
        BivarPoly::from_u_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| ring.scale(c, &f.reduce(i as i64)))
                .collect(),
        )
    }

    pub fn partial_t(&self, ring: &PolyRing<Fq>) -> BivarPoly {
        BivarPoly::from_u_coeffs(self.coeffs.iter().map(|c| ring.derivative(c)).collect())
    }

    /// Division by a monic divisor in `F_q[t][u]`.
    pub fn divrem_monic(&self, ring: &PolyRing<Fq>, h: &BivarPoly) -> (BivarPoly, BivarPoly) {
        assert!(h.is_monic(ring), "divisor must be monic in u");
        let k = h.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= k {
            return (BivarPoly { coeffs: Vec::new() }, self.clone());
        }
        let mut q = vec![ring.zero(); r.len() - k];
        for i in (0..q.len()).rev() {
            let c = r[i + k].clone();
            if c.is_zero() {
                continue;
            }
            for (j, hj) in h.coeffs.iter().enumerate() {
                r[i + j] = ring.sub(&r[i + j], &ring.mul(&c, hj));
            }
            q[i] = c;
        }
        r.truncate(k);
        (BivarPoly::from_u_coeffs(q), BivarPoly::from_u_coeffs(r))
    }

    /// Coefficient lists (lowest t-degree first), lowest u-degree first.
    pub fn to_coeff_lists(&self) -> Vec<Vec<u32>> {
        self.coeffs.iter().map(|c| c.coeffs().to_vec()).collect()
    }
}

/// `Res_u(P, dP/du)` as the determinant of the Sylvester matrix of `P`
/// (degree n) and `dP/du` taken with formal degree `n - 1`, rows of `P`
/// first.
pub fn resultant_discriminant(ring: &PolyRing<Fq>, p: &BivarPoly) -> Result<PolyFq> {
    let n = match p.u_degree() {
        None | Some(0) => return Err(Error::ConstantInU),
        Some(n) => n,
    };
    let dp = p.partial_u(ring);
    let size = 2 * n - 1;
    let k = FunctionField::new(ring.field().clone());
    let zero = k.zero();
    // Highest u-degree first within each row.
    let p_hi: Vec<RatFun> = (0..=n).rev().map(|i| k.from_poly(p.coeffs[i].clone())).collect();
    let dp_hi: Vec<RatFun> = (0..n)
        .rev()
        .map(|i| dp.coeffs.get(i).map_or(zero.clone(), |c| k.from_poly(c.clone())))
        .collect();
    let mut rows = Vec::with_capacity(size);
    for s in 0..n - 1 {
        let mut row = vec![zero.clone(); size];
        row[s..s + n + 1].clone_from_slice(&p_hi);
        rows.push(row);
    }
    for s in 0..n {
        let mut row = vec![zero.clone(); size];
        row[s..s + n].clone_from_slice(&dp_hi);
        rows.push(row);
    }
    let det = determinant(&k, &rows);
    Ok(k.as_poly(&det).expect("Sylvester determinant of polynomials is a polynomial"))
}

/// Monic gcd in `F_q(t)[u]`, returned as a polynomial in `F_q[t][u]`.
pub fn gcd_u(ring: &PolyRing<Fq>, a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
    let k = FunctionField::new(ring.field().clone());
    let r = PolyRing::new(k.clone());
    let g = r.gcd(&a.to_ku(&k), &b.to_ku(&k));
    lower_monic(&k, &g)
}

fn lower_monic(k: &FunctionField, g: &Poly<RatFun>) -> BivarPoly {
    if g.is_zero() {
        return BivarPoly::from_u_coeffs(Vec::new());
    }
    // A monic divisor of a monic polynomial over F_q[t] has polynomial
    // coefficients; clear denominators otherwise (only reachable for
    // non-monic inputs).
    if let Some(b) = BivarPoly::from_ku(k, g) {
        return b;
    }
    let ring = k.poly_ring();
    let den = g.coeffs().iter().fold(ring.one(), |acc, c| {
        let gg = ring.gcd(&acc, &c.den);
        ring.mul(&acc, &ring.exact_div(&c.den, &gg).expect("gcd divides"))
    });
    BivarPoly::from_u_coeffs(
        g.coeffs()
            .iter()
            .map(|c| ring.mul(&c.num, &ring.exact_div(&den, &c.den).expect("divides")))
            .collect(),
    )
}

fn exact_div_u(ring: &PolyRing<Fq>, a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
    let (q, r) = a.divrem_monic(ring, b);
    debug_assert!(r.is_zero(), "inexact division in F_q[t][u]");
    q
}

fn is_constant_u(a: &BivarPoly) -> bool {
    a.u_degree().unwrap_or(0) == 0
}

fn pth_root_bivar(ring: &PolyRing<Fq>, a: &BivarPoly) -> BivarPoly {
    let p = ring.field().p() as usize;
    BivarPoly::from_u_coeffs(a.coeffs.iter().step_by(p).map(|c| ring.pth_root(c)).collect())
}

/// Squarefree decomposition in `u` over `F_q(t)` of a polynomial monic in
/// `u`: returns monic, squarefree, pairwise coprime factors with their
/// multiplicities, sorted by multiplicity.
///
/// In characteristic p the u-derivative alone misses factors whose
/// multiplicity is divisible by p and inseparable factors; the derivative in
/// t is used as well, and a polynomial with both partials zero is a p-th
/// power in `F_q[t^p, u^p]`.
pub fn squarefree_decomposition_u(ring: &PolyRing<Fq>, f: &BivarPoly) -> Result<Vec<(BivarPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic(ring) {
        return Err(Error::DegreeBound("polynomial must be monic in u".into()));
    }
    let mut out = Vec::new();
    musser_u(ring, f, 1, &mut out);
    out.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
    Ok(out)
}

fn musser_u(ring: &PolyRing<Fq>, a: &BivarPoly, scale: u32, out: &mut Vec<(BivarPoly, u32)>) {
    if is_constant_u(a) {
        return;
    }
    let p = ring.field().p();
    let du = a.partial_u(ring);
    let dt = a.partial_t(ring);
    if du.is_zero() && dt.is_zero() {
        musser_u(ring, &pth_root_bivar(ring, a), scale * p, out);
        return;
    }
    let mut c = gcd_u(ring, &gcd_u(ring, a, &du), &dt);
    let mut w = exact_div_u(ring, a, &c);
    let mut i = 1;
    while !is_constant_u(&w) {
        let y = gcd_u(ring, &w, &c);
        let z = exact_div_u(ring, &w, &y);
        if !is_constant_u(&z) {
            out.push((z, i * scale));
        }
        i += 1;
        c = exact_div_u(ring, &c, &y);
        w = y;
    }
    if !is_constant_u(&c) {
        musser_u(ring, &pth_root_bivar(ring, &c), scale * p, out);
    }
}

/// Remainder of `g` modulo the monic `h`, computed in
/// `(F_q[t]/t^prec)[u]`; coefficient vectors are truncated to `prec`.
fn rem_mod_t_power(f: &Fq, g: &[Vec<u32>], h: &[Vec<u32>], prec: usize) -> Vec<Vec<u32>> {
    let k = h.len() - 1;
    let mut r: Vec<Vec<u32>> = g.iter().map(|c| trunc(c, prec)).collect();
    for top in (k..r.len()).rev() {
        let c = std::mem::take(&mut r[top]);
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        for (j, hj) in h.iter().enumerate().take(k) {
            let prod = mul_trunc(f, &c, hj, prec);
            let slot = &mut r[top - k + j];
            for (s, x) in slot.iter_mut().zip(prod) {
                *s = f.sub(s, &x);
            }
        }
    }
    r.truncate(k);
    r
}

fn trunc(c: &[u32], prec: usize) -> Vec<u32> {
    let mut v = vec![0; prec];
    for (i, &x) in c.iter().enumerate().take(prec) {
        v[i] = x;
    }
    v
}

fn mul_trunc(f: &Fq, a: &[u32], b: &[u32], prec: usize) -> Vec<u32> {
    let mut v = vec![0; prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            v[i + j] = f.add(&v[i + j], &f.mul(x, y));
        }
    }
    v
}

/// Upper bound on the t-degree of the coefficient of `u^(k-i)` in any monic
/// factor of u-degree `k`: every root grows at most like `t^w` with
/// `w = max_i deg(g_(m-i)) / i`, so that coefficient has degree at most
/// `floor(i * w)`.
fn factor_degree_bounds(g: &BivarPoly, k: usize) -> Vec<usize> {
    let m = g.u_degree().unwrap_or(0);
    // w as a fraction num/den, maximized over i
    let (mut wn, mut wd) = (0i64, 1i64);
    for i in 1..=m {
        let d = g.coeffs[m - i].degree_or_neg();
        if d > 0 && d * wd > wn * i as i64 {
            wn = d;
            wd = i as i64;
        }
    }
    (1..=k).map(|i| ((i as i64 * wn) / wd) as usize).collect()
}

/// Finds a monic factor of u-degree `k` of the monic `g`, searching
/// t-adically coefficient by coefficient.
pub fn find_monic_factor(ring: &PolyRing<Fq>, g: &BivarPoly, k: usize) -> Option<BivarPoly> {
    let m = g.u_degree()?;
    if k == 0 || k > m {
        return None;
    }
    let f = ring.field();
    let bounds = factor_degree_bounds(g, k);
    let levels = bounds.iter().copied().max().unwrap_or(0) + 1;
    // h[k - i] has t-degree <= bounds[i - 1]; h[k] = 1
    let mut h: Vec<Vec<u32>> = (0..=k).map(|_| vec![0; levels]).collect();
    h[k][0] = 1;
    let g_lists = g.to_coeff_lists();
    search_level(ring, f, g, &g_lists, &bounds, &mut h, 0, levels)
}

#[allow(clippy::too_many_arguments)]
fn search_level(
    ring: &PolyRing<Fq>,
    f: &Fq,
    g: &BivarPoly,
    g_lists: &[Vec<u32>],
    bounds: &[usize],
    h: &mut Vec<Vec<u32>>,
    level: usize,
    levels: usize,
) -> Option<BivarPoly> {
    if level == levels {
        let cand = BivarPoly::from_u_coeffs(h.iter().map(|c| ring.from_coeffs(c.clone())).collect());
        let (_, r) = g.divrem_monic(ring, &cand);
        return r.is_zero().then_some(cand);
    }
    let k = h.len() - 1;
    let slots: Vec<usize> = (1..=k).filter(|&i| bounds[i - 1] >= level).map(|i| k - i).collect();
    let order = f.order() as u64;
    let combos = order.pow(slots.len() as u32);
    for code in 0..combos {
        let mut x = code;
        for &s in &slots {
            h[s][level] = (x % order) as u32;
            x /= order;
        }
        let r = rem_mod_t_power(f, g_lists, h, level + 1);
        if r.iter().all(|c| c.iter().all(|&x| x == 0)) {
            if let Some(found) = search_level(ring, f, g, g_lists, bounds, h, level + 1, levels) {
                return Some(found);
            }
        }
    }
    for &s in &slots {
        h[s][level] = 0;
    }
    None
}

/// Factorization of a monic squarefree polynomial into monic irreducible
/// factors over `F_q(t)`, sorted.
pub fn irreducible_factors(ring: &PolyRing<Fq>, g: &BivarPoly) -> Vec<BivarPoly> {
    let mut out = Vec::new();
    let mut rest = g.clone();
    'outer: while rest.u_degree().unwrap_or(0) > 0 {
        let m = rest.u_degree().unwrap();
        for k in 1..=m / 2 {
            if let Some(h) = find_monic_factor(ring, &rest, k) {
                rest = exact_div_u(ring, &rest, &h);
                out.push(h);
                continue 'outer;
            }
        }
        out.push(rest);
        break;
    }
    out.sort();
    out
}

/// Full factorization over `F_q(t)`: irreducible monic factors with
/// multiplicities.
pub fn factor_u(ring: &PolyRing<Fq>, f: &BivarPoly) -> Result<Vec<(BivarPoly, u32)>> {
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition_u(ring, f)? {
        for h in irreducible_factors(ring, &part) {
            out.push((h, mult));
        }
    }
    out.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
    Ok(out)
}
