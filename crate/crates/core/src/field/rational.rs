use alloc::string::{String, ToString};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::Field;
use crate::{Error, Result};

/// The rational numbers, with elements kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn normalize(&self, v: alloc::vec::Vec<BigRational>) -> alloc::vec::Vec<BigRational> {
        self.primitive(&v)
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> BigRational {
        let bound = bound.max(1);
        self.from_i64(rng.gen_range(-bound..=bound))
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let t = s.trim().replace('\u{2212}', "-");
        let v = BigRational::from_str(&t).map_err(|_| Error::ParseScalar(s.to_string()))?;
        Ok(v)
    }

    fn name(&self) -> String {
        "q".to_string()
    }

    fn sub_mul_assign(&self, acc: &mut BigRational, b: &BigRational, c: &BigRational) {
        if b.is_zero() || c.is_zero() {
            return;
        }
        *acc -= b * c;
    }

    fn add_mul_assign(&self, acc: &mut BigRational, b: &BigRational, c: &BigRational) {
        if b.is_zero() || c.is_zero() {
            return;
        }
        *acc += b * c;
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
}

impl Rationals {
    /// Smallest positive integer that clears all denominators of `v`.
    pub fn common_denominator<'a>(&self, v: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
        v.into_iter().fold(BigInt::one(), |acc, x| {
            let d = x.denom();
            let g = num_integer::Integer::gcd(&acc, d);
            acc / g * d
        })
    }

    /// Rescales `v` by a positive rational so that it becomes a primitive
    /// integer vector. Zero vectors are returned unchanged.
    pub fn primitive(&self, v: &[BigRational]) -> alloc::vec::Vec<BigRational> {
        let den = self.common_denominator(v.iter());
        let ints: alloc::vec::Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        if g.is_zero() {
            return v.to_vec();
        }
        ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
    }

    pub fn abs(&self, a: &BigRational) -> BigRational {
        a.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn lowest_terms_and_sign() {
        let q = Rationals;
        let a = q.parse("6/-14").unwrap();
        assert_eq!(format!("{a}"), "-3/7");
        assert!(a.denom() > &BigInt::zero());
        assert_eq!(q.parse("\u{2212}3/7").unwrap(), a);
    }

    #[test]
    fn primitive_vector() {
        let q = Rationals;
        let v = [q.parse("1/2").unwrap(), q.parse("-3/4").unwrap(), q.zero()];
        let p = q.primitive(&v);
        assert_eq!(p, [q.from_i64(2), q.from_i64(-3), q.zero()]);
    }

    #[test]
    fn bad_input() {
        assert!(Rationals.parse("1/0x").is_err());
    }
}
