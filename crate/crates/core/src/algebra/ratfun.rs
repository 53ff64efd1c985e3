//! The rational function field `F_q(t)`.

use super::field::{Field, Fq};
use super::poly::{PolyFq, PolyRing};

/// A reduced fraction `num / den` with monic `den`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    pub num: PolyFq,
    pub den: PolyFq,
}

#[derive(Clone, Debug)]
pub struct FunctionField {
    ring: PolyRing<Fq>,
}

impl FunctionField {
    pub fn new(base: Fq) -> Self {
        FunctionField { ring: PolyRing::new(base) }
    }

    pub fn base(&self) -> &Fq {
        self.ring.field()
    }

    pub fn poly_ring(&self) -> &PolyRing<Fq> {
        &self.ring
    }

    pub fn from_poly(&self, p: PolyFq) -> RatFun {
        RatFun { num: p, den: self.ring.one() }
    }

    pub fn fraction(&self, num: PolyFq, den: PolyFq) -> RatFun {
        assert!(!den.is_zero(), "zero denominator");
        let r = &self.ring;
        if num.is_zero() {
            return self.zero();
        }
        let g = r.gcd(&num, &den);
        let mut n = r.exact_div(&num, &g).expect("gcd divides");
        let mut d = r.exact_div(&den, &g).expect("gcd divides");
        let lead = *d.leading().expect("nonzero");
        let inv = self.base().inv(&lead).expect("nonzero");
        n = r.scale(&n, &inv);
        d = r.scale(&d, &inv);
        RatFun { num: n, den: d }
    }

    /// The polynomial, when the denominator is 1.
    pub fn as_poly(&self, a: &RatFun) -> Option<PolyFq> {
        self.ring.is_one(&a.den).then(|| a.num.clone())
    }

    /// Derivative with respect to `t`.
    pub fn derivative(&self, a: &RatFun) -> RatFun {
        let r = &self.ring;
        let num = r.sub(
            &r.mul(&r.derivative(&a.num), &a.den),
            &r.mul(&a.num, &r.derivative(&a.den)),
        );
        self.fraction(num, r.mul(&a.den, &a.den))
    }
}

impl Field for FunctionField {
    type Elem = RatFun;

    fn zero(&self) -> RatFun {
        RatFun { num: self.ring.zero(), den: self.ring.one() }
    }

    fn one(&self) -> RatFun {
        RatFun { num: self.ring.one(), den: self.ring.one() }
    }

    fn is_zero(&self, a: &RatFun) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        let r = &self.ring;
        if a.den == b.den {
            return self.fraction(r.add(&a.num, &b.num), a.den.clone());
        }
        let num = r.add(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den));
        self.fraction(num, r.mul(&a.den, &b.den))
    }

    fn neg(&self, a: &RatFun) -> RatFun {
        RatFun { num: self.ring.neg(&a.num), den: a.den.clone() }
    }

    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        let r = &self.ring;
        self.fraction(r.mul(&a.num, &b.num), r.mul(&a.den, &b.den))
    }

    fn inv(&self, a: &RatFun) -> Option<RatFun> {
        (!a.num.is_zero()).then(|| self.fraction(a.den.clone(), a.num.clone()))
    }

    fn characteristic(&self) -> u32 {
        self.base().p()
    }

    fn from_int(&self, k: i64) -> RatFun {
        self.from_poly(self.ring.constant(self.base().reduce(k)))
    }
}
