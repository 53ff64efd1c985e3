//! Exact rationals for groupoid cardinalities.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
pub use num_rational::BigRational;

/// Decimal `"num/den"` form (always with a denominator, `"0/1"` for zero).
pub fn to_fraction_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_fraction(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

pub fn from_int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// `q^k` for any integer `k`.
pub fn q_power(q: u64, k: i64) -> BigRational {
    let base = BigInt::from(q);
    let mag = num_traits::pow(base, k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// True when `|x| <= 10^-exp10`.
pub fn at_most_ten_to_minus(x: &BigRational, exp10: u32) -> bool {
    let bound = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), exp10 as usize));
    x.abs() <= bound
}

/// Lossy conversion used only for diagnostics and growth fits.
pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Very large or very small magnitudes: scale through logarithms.
        let n = x.numer().to_f64().unwrap_or(f64::MAX);
        let d = x.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_round_trip() {
        let x = BigRational::new(BigInt::from(-6), BigInt::from(4));
        let s = to_fraction_string(&x);
        assert_eq!(s, "-3/2");
        assert_eq!(parse_fraction(&s), Some(x));
        assert_eq!(to_fraction_string(&BigRational::zero()), "0/1");
        assert_eq!(parse_fraction("1/0"), None);
    }

    #[test]
    fn powers_of_q() {
        assert_eq!(q_power(2, -3), BigRational::new(BigInt::one(), BigInt::from(8)));
        assert_eq!(q_power(3, 2), from_int(9));
        assert_eq!(q_power(5, 0), from_int(1));
    }
}
