//! Exact fields and dense linear algebra over them.
//!
//! A [`Field`] is a context value; its elements are plain data. Keeping the
//! modulus in the context lets prime-field elements be bare `u32`s and lets
//! every algorithm be written once for ℚ and 𝔽_p.

mod linalg;
mod prime;
mod rational;

use alloc::string::String;
use core::fmt;

use rand::Rng;

pub use linalg::{det, identity, kernel_basis, mat_vec, matmul, rank, rref, solve, Mat};
pub use prime::PrimeField;
pub use rational::Rationals;

use crate::Result;

/// Default modulus for finite-field runs.
pub const DEFAULT_PRIME: u32 = 32003;

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// 0 for ℚ, `p` for 𝔽_p.
    fn characteristic(&self) -> u64;

    /// Random coefficient: an integer in `[-bound, bound]` over ℚ, a uniform
    /// residue over 𝔽_p.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Self::Elem;

    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// `q` or `fp:<p>`, the spelling used by the CLI and in files.
    fn name(&self) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `acc -= b * c`
    fn sub_mul_assign(&self, acc: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *acc = self.sub(acc, &self.mul(b, c));
    }

    /// `acc += b * c`
    fn add_mul_assign(&self, acc: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *acc = self.add(acc, &self.mul(b, c));
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Rescales a vector to a preferred representative of its line: primitive
    /// integers over ℚ, unchanged elsewhere.
    fn normalize(&self, v: alloc::vec::Vec<Self::Elem>) -> alloc::vec::Vec<Self::Elem> {
        v
    }
}
