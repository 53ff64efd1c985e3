//! Dense linear algebra over any [`Field`] context.

use super::field::{Field, Fq};
use super::poly::{PolyFq, PolyRing};
use super::ratfun::FunctionField;

/// Matrix with polynomial entries, row-major.
pub type PolyMatrix = Vec<Vec<PolyFq>>;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns.
pub fn row_reduce<F: Field>(f: &F, rows: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i == r || f.is_zero(&rows[i][c]) {
                continue;
            }
            let factor = rows[i][c].clone();
            for j in c..ncols {
                let t = f.mul(&factor, &rows[r][j]);
                rows[i][j] = f.sub(&rows[i][j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(f, &mut m).len()
}

/// Basis of the right null space `{v : M v = 0}`.
pub fn nullspace<F: Field>(f: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); ncols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m[r][fc]);
            }
            v
        })
        .collect()
}

pub fn determinant<F: Field>(f: &F, rows: &[Vec<F::Elem>]) -> F::Elem {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&m[i][c])) else {
            return f.zero();
        };
        if p != c {
            m.swap(p, c);
            det = f.neg(&det);
        }
        det = f.mul(&det, &m[c][c]);
        let inv = f.inv(&m[c][c]).expect("nonzero pivot");
        for i in c + 1..n {
            if f.is_zero(&m[i][c]) {
                continue;
            }
            let factor = f.mul(&m[i][c], &inv);
            for j in c..n {
                let t = f.mul(&factor, &m[c][j]);
                m[i][j] = f.sub(&m[i][j], &t);
            }
        }
    }
    det
}

/// Nullity of a matrix over `F_q`.
pub fn nullity_fq(f: &Fq, rows: &[Vec<u32>], ncols: usize) -> usize {
    ncols - rank(f, rows)
}

fn lift(k: &FunctionField, m: &PolyMatrix) -> Vec<Vec<super::ratfun::RatFun>> {
    m.iter().map(|row| row.iter().map(|p| k.from_poly(p.clone())).collect()).collect()
}

/// Rank over `F_q(t)` of a polynomial matrix (the rank on the generic fiber).
pub fn generic_rank(ring: &PolyRing<Fq>, m: &PolyMatrix) -> usize {
    let k = FunctionField::new(ring.field().clone());
    rank(&k, &lift(&k, m))
}

/// Determinant of a square polynomial matrix.
pub fn poly_determinant(ring: &PolyRing<Fq>, m: &PolyMatrix) -> PolyFq {
    let k = FunctionField::new(ring.field().clone());
    let d = determinant(&k, &lift(&k, m));
    k.as_poly(&d).expect("determinant of a polynomial matrix is a polynomial")
}

/// Basis of `{w : w M = 0}` over `F_q(t)`, each vector scaled to a primitive
/// polynomial vector.
pub fn left_kernel(ring: &PolyRing<Fq>, m: &PolyMatrix) -> Vec<Vec<PolyFq>> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let k = FunctionField::new(ring.field().clone());
    let transposed: Vec<Vec<_>> =
        (0..ncols).map(|j| (0..nrows).map(|i| k.from_poly(m[i][j].clone())).collect()).collect();
    let basis = if ncols == 0 {
        (0..nrows)
            .map(|i| (0..nrows).map(|j| if i == j { k.one() } else { k.zero() }).collect())
            .collect()
    } else {
        nullspace(&k, &transposed, nrows)
    };
    basis
        .into_iter()
        .map(|v| {
            let den = v.iter().fold(ring.one(), |acc, x| {
                let g = ring.gcd(&acc, &x.den);
                ring.mul(&acc, &ring.exact_div(&x.den, &g).expect("gcd divides"))
            });
            let polys: Vec<PolyFq> = v
                .iter()
                .map(|x| {
                    let scale = ring.exact_div(&den, &x.den).expect("common denominator");
                    ring.mul(&x.num, &scale)
                })
                .collect();
            let content = polys.iter().fold(ring.zero(), |acc, p| ring.gcd(&acc, p));
            polys.iter().map(|p| ring.exact_div(p, &content).expect("content divides")).collect()
        })
        .collect()
}

pub fn poly_mat_mul(ring: &PolyRing<Fq>, a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let inner = b.len();
    let ncols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    (0..inner).fold(ring.zero(), |acc, l| {
                        if row[l].is_zero() || b[l][j].is_zero() {
                            acc
                        } else {
                            ring.add(&acc, &ring.mul(&row[l], &b[l][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn is_zero_matrix(m: &PolyMatrix) -> bool {
    m.iter().all(|r| r.iter().all(|p| p.is_zero()))
}
