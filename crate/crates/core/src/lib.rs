//! Exact-arithmetic engine for rank-2 bundles on the projective plane presented
//! by self-dual monads.
//!
//! The crate builds the cohomology spaces `E_k = H^1(F ⊗ Ω(k))` as Čech
//! hypercohomology of explicit complexes, the net of skew forms
//! `t_q : E_{-1} → E_1` parametrized by the `P^5` of plane conics, its
//! Pfaffian, and an independent restriction oracle that computes splitting
//! types of `F` on parametrized conics and lines.
//!
//! Everything is generic over a [`field::Field`]: the rationals
//! ([`field::Rationals`]) or a prime field ([`field::PrimeField`]).
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::wrong_self_convention)]

extern crate alloc;

pub mod cech;
pub mod cohom;
pub mod error;
pub mod field;
pub mod monad;
pub mod poly;
pub mod restrict;
pub mod skewnet;

pub use error::{Error, Result};
