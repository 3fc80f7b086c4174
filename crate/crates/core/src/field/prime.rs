use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;

use super::Field;
use crate::{Error, Result};

/// The prime field 𝔽_p for an odd or even prime `p < 2^31`; residues are
/// stored in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn from_u64(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    /// Image of a rational under ℤ_(p) → 𝔽_p, or `None` when `p` divides the
    /// denominator.
    pub fn reduce(&self, q: &BigRational) -> Option<u32> {
        let p = BigInt::from(self.p);
        let num = q.numer().mod_floor(&p).to_u64()?;
        let den = q.denom().mod_floor(&p).to_u64()?;
        let den = self.inv(&(den as u32))?;
        Some(self.mul(&(num as u32), &den))
    }

    /// Centered representative in `(-p/2, p/2]`.
    pub fn centered(&self, a: u32) -> i64 {
        let a = a as i64;
        if a > self.p as i64 / 2 {
            a - self.p as i64
        } else {
            a
        }
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on i64
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u32)
    }

    fn characteristic(&self) -> u64 {
        self.p as u64
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, _bound: i64) -> u32 {
        rng.gen_range(0..self.p)
    }

    fn parse(&self, s: &str) -> Result<u32> {
        let t = s.trim().replace('\u{2212}', "-");
        let v: i64 = t.parse().map_err(|_| Error::ParseScalar(s.to_string()))?;
        Ok(self.from_i64(v))
    }

    fn name(&self) -> String {
        format!("fp:{}", self.p)
    }

    fn sub_mul_assign(&self, acc: &mut u32, b: &u32, c: &u32) {
        let prod = (*b as u64 * *c as u64) % self.p as u64;
        *acc = ((*acc as u64 + self.p as u64 - prod) % self.p as u64) as u32;
    }

    fn add_mul_assign(&self, acc: &mut u32, b: &u32, c: &u32) {
        *acc = ((*acc as u64 + *b as u64 * *c as u64) % self.p as u64) as u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(32003).is_ok());
        assert_eq!(PrimeField::new(32001), Err(Error::NotPrime(32001)));
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(32003).unwrap();
        for a in [1u32, 2, 17, 32002, 12345] {
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), 1);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn residues_in_range() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.parse("-15").unwrap(), 6);
        assert_eq!(f.centered(6), -1);
    }

    #[test]
    fn reduce_rational() {
        let f = PrimeField::new(7).unwrap();
        let q = crate::field::Rationals.parse("3/2").unwrap();
        assert_eq!(f.mul(&f.reduce(&q).unwrap(), &2), 3);
        let bad = crate::field::Rationals.parse("1/14").unwrap();
        assert_eq!(f.reduce(&bad), None);
    }
}
