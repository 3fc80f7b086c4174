//! Graded polynomial algebra: ternary forms (sections of `O(d)` on P²),
//! binary forms (sections on P¹) and truncated Laurent monomial spaces that
//! model sections on chart intersections.
//!
//! Monomials are ordered graded-lexicographically with `x0 > x1 > x2`
//! (respectively `s > t`). Every matrix produced here is relative to that
//! order.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Field, Mat};
use crate::{Error, Result};

/// Exponent vector. Binary forms use `[a_s, a_t, 0]`.
pub type Exps = [i32; 3];

/// Sparse list of `(exponent, coefficient)` pairs; the common currency
/// between polynomial types and the cohomology engine.
pub type Terms<E> = Vec<(Exps, E)>;

/// The projective line or plane together with its standard affine cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ambient {
    P1,
    P2,
}

impl Ambient {
    pub fn nvars(self) -> usize {
        match self {
            Ambient::P1 => 2,
            Ambient::P2 => 3,
        }
    }
}

/// All exponent vectors of total degree `degree` in `nvars` variables, in
/// graded-lex order (`x0^d` first).
pub fn monomials(nvars: usize, degree: u32) -> Vec<Exps> {
    let d = degree as i32;
    let mut out = Vec::new();
    match nvars {
        2 => {
            for a in (0..=d).rev() {
                out.push([a, d - a, 0]);
            }
        }
        3 => {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    out.push([a, b, d - a - b]);
                }
            }
        }
        _ => panic!("only 2 or 3 variables are supported"),
    }
    out
}

/// The basis `(x0², x0x1, x0x2, x1², x1x2, x2²)` of quadratic forms; conic
/// coefficient vectors are coordinates in this basis.
pub fn conic_basis() -> Vec<Exps> {
    monomials(3, 2)
}

fn add_exps(a: &Exps, b: &Exps) -> Exps {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Anything that can act on monomial spaces by multiplication.
pub trait Form<E> {
    fn degree(&self) -> i32;
    fn terms(&self) -> Terms<E>;
}

/// Homogeneous polynomial in `x0, x1, x2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPoly<E> {
    degree: u32,
    coeffs: BTreeMap<[u32; 3], E>,
}

impl<E: Clone> HPoly<E> {
    pub fn zero(degree: u32) -> Self {
        HPoly { degree, coeffs: BTreeMap::new() }
    }

    /// Builds a form from `(exponents, coefficient)` pairs, summing repeats and
    /// dropping zeros. Fails if some exponent triple has the wrong degree.
    pub fn from_terms<F: Field<Elem = E>>(
        f: &F,
        degree: u32,
        terms: impl IntoIterator<Item = ([u32; 3], E)>,
    ) -> Result<Self> {
        let mut p = HPoly::zero(degree);
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::Shape(alloc::format!("monomial {e:?} in a form of degree {degree}")));
            }
            p.add_term(f, e, &c);
        }
        Ok(p)
    }

    /// The monomial `x^e` with coefficient 1; `e` must be nonnegative.
    pub fn monomial<F: Field<Elem = E>>(f: &F, e: Exps) -> Self {
        assert!(e.iter().all(|&x| x >= 0), "negative exponent in a polynomial");
        let mut p = HPoly::zero(e.iter().sum::<i32>() as u32);
        p.add_term(f, [e[0] as u32, e[1] as u32, e[2] as u32], &f.one());
        p
    }

    pub fn var<F: Field<Elem = E>>(f: &F, i: usize) -> Self {
        let mut e = [0u32; 3];
        e[i] = 1;
        let mut p = HPoly::zero(1);
        p.coeffs.insert(e, f.one());
        p
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, c: E) -> Self {
        let mut p = HPoly::zero(0);
        p.add_term(f, [0, 0, 0], &c);
        p
    }

    /// Linear form `c0 x0 + c1 x1 + c2 x2`.
    pub fn linear<F: Field<Elem = E>>(f: &F, c: &[E; 3]) -> Self {
        let mut p = HPoly::zero(1);
        for (i, ci) in c.iter().enumerate() {
            let mut e = [0u32; 3];
            e[i] = 1;
            p.add_term(f, e, ci);
        }
        p
    }

    /// Quadratic form from a coefficient vector in [`conic_basis`] order.
    pub fn quadric<F: Field<Elem = E>>(f: &F, a: &[E]) -> Self {
        assert_eq!(a.len(), 6);
        let mut p = HPoly::zero(2);
        for (e, c) in conic_basis().iter().zip(a) {
            p.add_term(f, [e[0] as u32, e[1] as u32, e[2] as u32], c);
        }
        p
    }

    pub fn degree_u32(&self) -> u32 {
        self.degree
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, e: [u32; 3]) -> E {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| f.zero())
    }

    /// Coefficient vector in the graded-lex monomial basis of its degree.
    pub fn coeff_vector<F: Field<Elem = E>>(&self, f: &F) -> Vec<E> {
        monomials(3, self.degree).iter().map(|e| self.coeff(f, [e[0] as u32, e[1] as u32, e[2] as u32])).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in graded-lex order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u32; 3], &E)> {
        self.coeffs.iter().rev()
    }

    fn add_term<F: Field<Elem = E>>(&mut self, f: &F, e: [u32; 3], c: &E) {
        if f.is_zero(c) {
            return;
        }
        let v = match self.coeffs.get(&e) {
            Some(old) => f.add(old, c),
            None => c.clone(),
        };
        if f.is_zero(&v) {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, v);
        }
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(f, *e, c);
        }
        out
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.scale(f, &f.neg(&f.one())))
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        let mut out = HPoly::zero(self.degree);
        for (e, x) in &self.coeffs {
            out.add_term(f, *e, &f.mul(x, c));
        }
        out
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut out = HPoly::zero(self.degree + other.degree);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                out.add_term(f, [a[0] + b[0], a[1] + b[1], a[2] + b[2]], &f.mul(x, y));
            }
        }
        out
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, pt: &[E; 3]) -> E {
        let mut acc = f.zero();
        for (e, c) in &self.coeffs {
            let mut t = c.clone();
            for i in 0..3 {
                t = f.mul(&t, &f.pow(&pt[i], e[i] as u64));
            }
            acc = f.add(&acc, &t);
        }
        acc
    }
}

impl<E: Clone> Form<E> for HPoly<E> {
    fn degree(&self) -> i32 {
        self.degree as i32
    }

    fn terms(&self) -> Terms<E> {
        self.iter().map(|(e, c)| ([e[0] as i32, e[1] as i32, e[2] as i32], c.clone())).collect()
    }
}

/// Binary form `Σ c_i s^{d-i} t^i`; `coeffs[0]` is the coefficient of `s^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BForm<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> BForm<E> {
    /// Panics on an empty coefficient list (degree would be −1).
    pub fn new(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs degree+1 coefficients");
        BForm { coeffs }
    }

    pub fn zero<F: Field<Elem = E>>(f: &F, degree: u32) -> Self {
        BForm { coeffs: vec![f.zero(); degree as usize + 1] }
    }

    pub fn degree_u32(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.coeffs.iter().all(|c| f.is_zero(c))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "adding forms of different degree");
        BForm { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        BForm { coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect() }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                f.add_mul_assign(&mut out[i + j], a, b);
            }
        }
        BForm { coeffs: out }
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, s: &E, t: &E) -> E {
        let d = self.degree_u32() as u64;
        let mut acc = f.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = f.mul(&f.pow(s, d - i as u64), &f.pow(t, i as u64));
            f.add_mul_assign(&mut acc, c, &m);
        }
        acc
    }

    /// Dense univariate polynomial `p(t) = form(1, t)`, lowest degree first.
    pub fn dehomogenize(&self) -> Vec<E> {
        self.coeffs.clone()
    }
}

impl<E: Clone> Form<E> for BForm<E> {
    fn degree(&self) -> i32 {
        self.degree_u32() as i32
    }

    fn terms(&self) -> Terms<E> {
        let d = self.degree();
        self.coeffs.iter().enumerate().map(|(i, c)| ([d - i as i32, i as i32, 0], c.clone())).collect()
    }
}

/// `f(g0, g1, g2)` for binary forms `g_i` of a common degree `e`; the result
/// has degree `deg f · e`.
pub fn substitute<F: Field>(f: &F, poly: &HPoly<F::Elem>, g: &[BForm<F::Elem>; 3]) -> BForm<F::Elem> {
    let e = g[0].degree_u32();
    assert!(g.iter().all(|x| x.degree_u32() == e), "substituted forms must share a degree");
    let d = poly.degree_u32();
    // powers[i][k] = g_i^k
    let powers: Vec<Vec<BForm<F::Elem>>> = g
        .iter()
        .map(|gi| {
            let mut v = vec![BForm::new(vec![f.one()])];
            for k in 1..=d as usize {
                let next = v[k - 1].mul(f, gi);
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = BForm::zero(f, d * e);
    for (ex, c) in poly.iter() {
        let mut t = BForm::new(vec![c.clone()]);
        for i in 0..3 {
            t = t.mul(f, &powers[i][ex[i] as usize]);
        }
        out = out.add(f, &t);
    }
    out
}

/// Restriction of a ternary form to a conic parametrized by three binary
/// quadrics.
pub fn substitute_veronese<F: Field>(f: &F, poly: &HPoly<F::Elem>, nu: &[BForm<F::Elem>; 3]) -> BForm<F::Elem> {
    debug_assert!(nu.iter().all(|x| x.degree_u32() == 2));
    substitute(f, poly, nu)
}

/// Laurent monomials of a fixed degree on a chart intersection: exponents of
/// inverted variables are bounded below by `-bound`, the others are
/// nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LMonSpace {
    ambient: Ambient,
    inverted: u8,
    degree: i32,
    bound: i32,
    basis: Vec<Exps>,
    index: BTreeMap<Exps, usize>,
}

impl LMonSpace {
    /// `inverted` is a bit mask over the variables.
    pub fn new(ambient: Ambient, inverted: u8, degree: i32, bound: i32) -> Self {
        let n = ambient.nvars();
        let lo = |i: usize| if inverted & (1 << i) != 0 { -bound } else { 0 };
        let mut basis = Vec::new();
        match n {
            2 => {
                let mut a = degree - lo(1);
                while a >= lo(0) {
                    basis.push([a, degree - a, 0]);
                    a -= 1;
                }
            }
            _ => {
                let mut a = degree - lo(1) - lo(2);
                while a >= lo(0) {
                    let mut b = degree - a - lo(2);
                    while b >= lo(1) {
                        basis.push([a, b, degree - a - b]);
                        b -= 1;
                    }
                    a -= 1;
                }
            }
        }
        let index = basis.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        LMonSpace { ambient, inverted, degree, bound, basis, index }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn inverted(&self) -> u8 {
        self.inverted
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn bound(&self) -> i32 {
        self.bound
    }

    pub fn basis(&self) -> &[Exps] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, e: &Exps) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Whether `e` satisfies the chart condition but violates the truncation.
    fn below_bound(&self, e: &Exps) -> bool {
        (0..self.ambient.nvars()).any(|i| self.inverted & (1 << i) != 0 && e[i] < -self.bound)
    }
}

/// Matrix of multiplication by `form` from `src` to `dst`, together with the
/// number of products dropped because they fall below `dst`'s truncation.
///
/// A dropped product that is *not* below the truncation means the target
/// space cannot hold it; that is reported as [`Error::TruncationOverflow`].
pub fn mult_by<F: Field>(
    f: &F,
    form: &impl Form<F::Elem>,
    src: &LMonSpace,
    dst: &LMonSpace,
) -> Result<(Mat<F::Elem>, usize)> {
    if dst.degree != src.degree + form.degree() {
        return Err(Error::Shape(alloc::format!("target degree {} != {} + {}", dst.degree, src.degree, form.degree())));
    }
    if dst.inverted & src.inverted != src.inverted || dst.ambient != src.ambient {
        return Err(Error::Shape("target chart must contain the source chart".into()));
    }
    let terms = form.terms();
    let mut m = Mat::zeros(f, dst.dim(), src.dim());
    let mut dropped = 0;
    let mut overflow = 0;
    for (j, e) in src.basis.iter().enumerate() {
        for (t, c) in &terms {
            let p = add_exps(e, t);
            match dst.index_of(&p) {
                Some(i) => f.add_mul_assign(&mut m[(i, j)], &f.one(), c),
                None => {
                    dropped += 1;
                    if !dst.below_bound(&p) {
                        overflow += 1;
                    }
                }
            }
        }
    }
    if overflow > 0 {
        return Err(Error::TruncationOverflow(overflow));
    }
    Ok((m, dropped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{identity, matmul, Rationals};
    use num_rational::BigRational;

    fn qf(v: &[i64]) -> BForm<BigRational> {
        BForm::new(v.iter().map(|&x| Rationals.from_i64(x)).collect())
    }

    fn veronese() -> [BForm<BigRational>; 3] {
        [qf(&[1, 0, 0]), qf(&[0, 1, 0]), qf(&[0, 0, 1])]
    }

    #[test]
    fn grlex_order() {
        assert_eq!(conic_basis(), vec![[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]);
        assert_eq!(LMonSpace::new(Ambient::P2, 0, 2, 5).dim(), 6);
    }

    #[test]
    fn multiplication_by_x0() {
        let f = Rationals;
        let src = LMonSpace::new(Ambient::P2, 0, 1, 3);
        let dst = LMonSpace::new(Ambient::P2, 0, 2, 3);
        let (m, dropped) = mult_by(&f, &HPoly::var(&f, 0), &src, &dst).unwrap();
        assert_eq!(dropped, 0);
        let j = src.index_of(&[0, 1, 0]).unwrap();
        let i = dst.index_of(&[1, 1, 0]).unwrap();
        assert_eq!(m[(i, j)], f.one());
        assert_eq!(m.column(j).iter().filter(|x| !f.is_zero(x)).count(), 1);
    }

    #[test]
    fn multiplication_by_one_is_identity() {
        let f = Rationals;
        let s = LMonSpace::new(Ambient::P2, 0b011, -1, 2);
        let (m, _) = mult_by(&f, &HPoly::constant(&f, f.one()), &s, &s).unwrap();
        assert_eq!(m, identity(&f, s.dim()));
    }

    #[test]
    fn truncation_drops_are_counted() {
        let f = Rationals;
        let src = LMonSpace::new(Ambient::P1, 0b01, 0, 3);
        let dst = LMonSpace::new(Ambient::P1, 0b01, 1, 2);
        let (_, dropped) = mult_by(&f, &qf(&[1, 1]), &src, &dst).unwrap();
        // s^-3 t^3 · t = s^-3 t^4 falls below the target bound
        assert_eq!(dropped, 1);
    }

    #[test]
    fn composition_of_multiplications() {
        let f = Rationals;
        let a = HPoly::linear(&f, &[f.from_i64(1), f.from_i64(2), f.from_i64(-1)]);
        let b = HPoly::linear(&f, &[f.from_i64(0), f.from_i64(3), f.from_i64(5)]);
        let s0 = LMonSpace::new(Ambient::P2, 0b101, -2, 3);
        let s1 = LMonSpace::new(Ambient::P2, 0b101, -1, 3);
        let s2 = LMonSpace::new(Ambient::P2, 0b101, 0, 3);
        let (ma, _) = mult_by(&f, &a, &s0, &s1).unwrap();
        let (mb, _) = mult_by(&f, &b, &s1, &s2).unwrap();
        let (mab, _) = mult_by(&f, &a.mul(&f, &b), &s0, &s2).unwrap();
        assert_eq!(matmul(&f, &mb, &ma), mab);
    }

    #[test]
    fn veronese_substitution() {
        let f = Rationals;
        let one = f.one();
        let rel = HPoly::from_terms(&f, 2, [([1, 0, 1], one.clone()), ([0, 2, 0], f.neg(&one))]).unwrap();
        assert!(substitute_veronese(&f, &rel, &veronese()).is_zero(&f));
        let x0 = HPoly::var(&f, 0);
        assert_eq!(substitute_veronese(&f, &x0, &veronese()), qf(&[1, 0, 0]));
        let sum = HPoly::linear(&f, &[one.clone(), one.clone(), one.clone()]);
        let r = substitute_veronese(&f, &sum, &veronese());
        assert_eq!(r.eval(&f, &one, &one), f.from_i64(3));
    }
}

/// Dense univariate polynomials, lowest degree first, with no trailing zeros
/// after [`upoly::trim`].
pub mod upoly {
    use alloc::vec;
    use alloc::vec::Vec;

    use rand::Rng;

    use crate::field::Field;

    pub fn trim<F: Field>(f: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
        while a.last().is_some_and(|c| f.is_zero(c)) {
            a.pop();
        }
        a
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree<F: Field>(f: &F, a: &[F::Elem]) -> Option<usize> {
        a.iter().rposition(|c| !f.is_zero(c))
    }

    pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
        a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                f.add_mul_assign(&mut out[i + j], x, y);
            }
        }
        trim(f, out)
    }

    pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        trim(f, out)
    }

    pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
                let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
                f.sub(&x, &y)
            })
            .collect();
        trim(f, out)
    }

    /// Remainder of `a` modulo a nonzero `b`.
    pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let b = trim(f, b.to_vec());
        let db = b.len() - 1;
        let lead_inv = f.inv(&b[db]).expect("division by the zero polynomial");
        let mut r = trim(f, a.to_vec());
        while r.len() > db {
            let k = r.len() - 1 - db;
            let c = f.mul(&r[r.len() - 1], &lead_inv);
            for (i, bi) in b.iter().enumerate() {
                f.sub_mul_assign(&mut r[k + i], &c, bi);
            }
            r = trim(f, r);
        }
        r
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let mut x = trim(f, a.to_vec());
        let mut y = trim(f, b.to_vec());
        while !y.is_empty() {
            let r = rem(f, &x, &y);
            x = y;
            y = r;
        }
        monic(f, x)
    }

    pub fn monic<F: Field>(f: &F, a: Vec<F::Elem>) -> Vec<F::Elem> {
        match a.last() {
            None => a,
            Some(l) => {
                let li = f.inv(l).expect("leading coefficient is nonzero");
                a.iter().map(|c| f.mul(c, &li)).collect()
            }
        }
    }

    fn powmod<F: Field>(f: &F, base: &[F::Elem], mut e: u64, m: &[F::Elem]) -> Vec<F::Elem> {
        let mut acc = vec![f.one()];
        let mut b = rem(f, base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(f, &mul(f, &acc, &b), m);
            }
            b = rem(f, &mul(f, &b, &b), m);
            e >>= 1;
        }
        acc
    }

    /// All distinct roots in a prime field, sorted by their residue order of
    /// discovery. Panics in characteristic 0.
    pub fn roots<F: Field, R: Rng + ?Sized>(f: &F, a: &[F::Elem], rng: &mut R) -> Vec<F::Elem> {
        let p = f.characteristic();
        assert!(p > 0, "root finding needs a prime field");
        let a = trim(f, a.to_vec());
        if degree(f, &a).unwrap_or(0) == 0 {
            return Vec::new();
        }
        if p < 1000 {
            return (0..p as i64).map(|v| f.from_i64(v)).filter(|x| f.is_zero(&eval(f, &a, x))).collect();
        }
        // product of the distinct linear factors: gcd(a, x^p - x)
        let x = vec![f.zero(), f.one()];
        let xp = powmod(f, &x, p, &a);
        let g = gcd(f, &a, &sub(f, &xp, &x));
        let mut out = Vec::new();
        split(f, g, p, rng, &mut out);
        out
    }

    fn split<F: Field, R: Rng + ?Sized>(f: &F, g: Vec<F::Elem>, p: u64, rng: &mut R, out: &mut Vec<F::Elem>) {
        match degree(f, &g) {
            None | Some(0) => {}
            Some(1) => out.push(f.neg(&f.div(&g[0], &g[1]).unwrap())),
            Some(_) => loop {
                let d = f.sample(rng, 0);
                let h = powmod(f, &[d, f.one()], (p - 1) / 2, &g);
                let h1 = sub(f, &h, &[f.one()]);
                let c = gcd(f, &g, &h1);
                let dc = degree(f, &c).unwrap_or(0);
                if dc > 0 && dc < g.len() - 1 {
                    let other = quotient(f, &g, &c);
                    split(f, c, p, rng, out);
                    split(f, other, p, rng, out);
                    return;
                }
            },
        }
    }

    /// Exact quotient `a / b`.
    pub fn quotient<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let b = trim(f, b.to_vec());
        let db = b.len() - 1;
        let lead_inv = f.inv(&b[db]).unwrap();
        let mut r = trim(f, a.to_vec());
        if r.len() <= db {
            return Vec::new();
        }
        let mut q = vec![f.zero(); r.len() - db];
        while r.len() > db {
            let k = r.len() - 1 - db;
            let c = f.mul(&r[r.len() - 1], &lead_inv);
            for (i, bi) in b.iter().enumerate() {
                f.sub_mul_assign(&mut r[k + i], &c, bi);
            }
            q[k] = c;
            r = trim(f, r);
        }
        trim(f, q)
    }

    #[cfg(test)]
    mod tests {
        use super::*;
        use crate::field::PrimeField;
        use rand::SeedableRng;

        #[test]
        fn gcd_and_roots() {
            let f = PrimeField::new(32003).unwrap();
            let lin = |r: i64| vec![f.from_i64(-r), 1];
            let a = mul(&f, &mul(&f, &lin(3), &lin(5)), &lin(-7));
            let b = mul(&f, &lin(5), &[f.from_i64(2), 0, 1]);
            assert_eq!(gcd(&f, &a, &b), lin(5));
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
            let mut r = roots(&f, &mul(&f, &a, &[1, 0, 1]), &mut rng);
            r.sort();
            let mut want = vec![f.from_i64(3), 5, f.from_i64(-7)];
            want.sort();
            // x^2 + 1 has no roots since 32003 ≡ 3 mod 4
            assert_eq!(r, want);
        }
    }
}
