//! Restriction of `F` to parametrized conics and lines.
//!
//! A map `g: P¹ → P²` of degree `e` pulls the monad back to
//! `O(-e)^n → O^{2n+2} → O(e)^n` on P¹, whose middle cohomology is `g*F`.
//! Everything here is computed on P¹ and never touches the net of skew forms.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cech::{hypercohomology, stabilize, CohSpace, Complex, PolyMatrix, Term};
use crate::field::{det, kernel_basis, rank, Field, Mat};
use crate::monad::{bform_det, minor_gcd_degree, pull_back_alpha, Monad};
use crate::poly::{conic_basis, substitute, upoly, Ambient, BForm, Form, HPoly};
use crate::skewnet::PfPoly;
use crate::{Error, Result};

/// Smallest truncation tried on P¹.
const START_BOUND: i32 = 2;

/// A conic given by three binary quadrics with invertible coefficient matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicParam<E> {
    nu: [BForm<E>; 3],
}

impl<E: Clone> ConicParam<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, nu: [BForm<E>; 3]) -> Result<Self> {
        if nu.iter().any(|x| x.degree_u32() != 2) {
            return Err(Error::DegenerateParametrization);
        }
        let m = Mat::from_fn(3, 3, |i, j| nu[i].coeffs()[j].clone());
        if f.is_zero(&det(f, &m)) {
            return Err(Error::DegenerateParametrization);
        }
        Ok(ConicParam { nu })
    }

    pub fn nu(&self) -> &[BForm<E>; 3] {
        &self.nu
    }
}

/// Coefficients of a conic in the basis `(x0², x0x1, x0x2, x1², x1x2, x2²)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicCoeffs<E> {
    pub a: Vec<E>,
}

impl<E: Clone> ConicCoeffs<E> {
    pub fn new(a: Vec<E>) -> Self {
        assert_eq!(a.len(), 6, "a conic has six coefficients");
        ConicCoeffs { a }
    }

    pub fn poly<F: Field<Elem = E>>(&self, f: &F) -> HPoly<E> {
        HPoly::quadric(f, &self.a)
    }

    /// Gram matrix `2S` of the polarization, `q(x+y) - q(x) - q(y) = xᵀ(2S)y`.
    pub fn polar_matrix<F: Field<Elem = E>>(&self, f: &F) -> Mat<E> {
        let a = &self.a;
        let two = |x: &E| f.add(x, x);
        Mat::from_vec(
            3,
            3,
            vec![
                two(&a[0]),
                a[1].clone(),
                a[2].clone(),
                a[1].clone(),
                two(&a[3]),
                a[4].clone(),
                a[2].clone(),
                a[4].clone(),
                two(&a[5]),
            ],
        )
    }

    /// Nonsingular, tested by `det(2S) ≠ 0`; needs odd characteristic.
    pub fn is_smooth<F: Field<Elem = E>>(&self, f: &F) -> bool {
        !f.is_zero(&det(f, &self.polar_matrix(f)))
    }

    /// Whether two coefficient vectors span the same line.
    pub fn proportional<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        let m = Mat::from_fn(2, 6, |i, j| if i == 0 { self.a[j].clone() } else { other.a[j].clone() });
        rank(f, &m) <= 1
    }
}

/// The unique (up to scale) conic through the image of `ν`.
pub fn implicitize<F: Field>(f: &F, nu: &ConicParam<F::Elem>) -> Result<ConicCoeffs<F::Elem>> {
    let cols: Vec<Vec<F::Elem>> =
        conic_basis().iter().map(|e| substitute(f, &HPoly::monomial(f, *e), nu.nu()).coeffs().to_vec()).collect();
    let m = Mat::from_columns(5, &cols, f.zero());
    let k = kernel_basis(f, &m);
    if k.cols() != 1 {
        return Err(Error::DegenerateParametrization);
    }
    Ok(ConicCoeffs::new(f.normalize(k.column(0))))
}

/// The monad pulled back along `g` as a complex on P¹.
pub fn pullback<F: Field>(f: &F, m: &Monad<F::Elem>, g: &[BForm<F::Elem>; 3]) -> Result<Complex<F::Elem>> {
    let e = g[0].degree_u32() as i32;
    let alpha = pull_back_alpha(f, m, g);
    if minor_gcd_degree(f, &alpha) != Some(0) {
        return Err(Error::PullbackDegenerate);
    }
    let beta = m.beta(f);
    let beta: Vec<Vec<BForm<F::Elem>>> = beta.iter().map(|r| r.iter().map(|x| substitute(f, x, g)).collect()).collect();
    let n = m.n();
    let mut terms = BTreeMap::new();
    terms.insert(-1, Term::line(vec![-e; n]));
    terms.insert(0, Term::line(vec![0; m.width()]));
    terms.insert(1, Term::line(vec![e; n]));
    let mut diffs = BTreeMap::new();
    diffs.insert(-1, PolyMatrix::from_fn(m.width(), n, |i, j| alpha[i][j].terms()));
    diffs.insert(0, PolyMatrix::from_fn(n, m.width(), |i, j| beta[i][j].terms()));
    Complex::new(f, Ambient::P1, terms, diffs)
}

fn h_dims<F: Field>(f: &F, c: &Complex<F::Elem>, ceiling: i32) -> Result<[usize; 2]> {
    let s = stabilize(f, c, 0, START_BOUND, ceiling)?;
    let d = s.all_dims();
    Ok([d.get(&0).copied().unwrap_or(0), d.get(&1).copied().unwrap_or(0)])
}

/// `d` with `F|_q = O(d) ⊕ O(-d)`, read as `h^0(F|_q ⊗ O_{P¹}(-1))`.
pub fn splitting_conic<F: Field>(f: &F, m: &Monad<F::Elem>, nu: &ConicParam<F::Elem>, ceiling: i32) -> Result<usize> {
    Ok(h_dims(f, &pullback(f, m, nu.nu())?.twist(-1), ceiling)?[0])
}

/// `h^0(F ⊗ Ω(1)|_q)`, with `Ω(1)|_q` resolved by the pulled-back Euler
/// sequence `O³ --ν--> O_{P¹}(2)`.
pub fn h0_fomega1_on_conic<F: Field>(
    f: &F,
    m: &Monad<F::Elem>,
    nu: &ConicParam<F::Elem>,
    ceiling: i32,
) -> Result<usize> {
    let monad = pullback(f, m, nu.nu())?;
    let mut terms = BTreeMap::new();
    terms.insert(0, Term::line(vec![0; 3]));
    terms.insert(1, Term::line(vec![2]));
    let mut diffs = BTreeMap::new();
    diffs.insert(0, PolyMatrix::from_fn(1, 3, |_, j| nu.nu()[j].terms()));
    let euler = Complex::new(f, Ambient::P1, terms, diffs)?;
    Ok(h_dims(f, &monad.tensor(f, &euler)?, ceiling)?[0])
}

/// `(h^0, h^1)` of `F(k)|_q`, i.e. of the pullback twisted by `O_{P¹}(2k)`.
pub fn h_table<F: Field>(
    f: &F,
    m: &Monad<F::Elem>,
    nu: &ConicParam<F::Elem>,
    k: i32,
    ceiling: i32,
) -> Result<[usize; 2]> {
    h_dims(f, &pullback(f, m, nu.nu())?.twist(2 * k), ceiling)
}

/// Checks that three linear binary forms embed P¹ as a line.
pub fn check_line<F: Field>(f: &F, l: &[BForm<F::Elem>; 3]) -> Result<()> {
    if l.iter().any(|x| x.degree_u32() != 1) {
        return Err(Error::DegenerateParametrization);
    }
    let m = Mat::from_fn(3, 2, |i, j| l[i].coeffs()[j].clone());
    if rank(f, &m) != 2 {
        return Err(Error::DegenerateParametrization);
    }
    Ok(())
}

/// `a` with `F|_ℓ = O(a) ⊕ O(-a)`.
pub fn splitting_line<F: Field>(f: &F, m: &Monad<F::Elem>, l: &[BForm<F::Elem>; 3], ceiling: i32) -> Result<usize> {
    check_line(f, l)?;
    Ok(h_dims(f, &pullback(f, m, l)?.twist(-1), ceiling)?[0])
}

/// Random parametrized conic: three binary quadrics with coefficients
/// sampled at `bound`, redrawn until the coefficient matrix is invertible.
pub fn random_conic<F: Field, R: Rng + ?Sized>(f: &F, rng: &mut R, bound: i64) -> ConicParam<F::Elem> {
    loop {
        let nu = core::array::from_fn(|_| BForm::new((0..3).map(|_| f.sample(rng, bound)).collect()));
        if let Ok(c) = ConicParam::new(f, nu) {
            return c;
        }
    }
}

pub fn random_line<F: Field, R: Rng + ?Sized>(f: &F, rng: &mut R, bound: i64) -> [BForm<F::Elem>; 3] {
    loop {
        let l = core::array::from_fn(|_| BForm::new((0..2).map(|_| f.sample(rng, bound)).collect()));
        if check_line(f, &l).is_ok() {
            return l;
        }
    }
}

fn random_point<F: Field, R: Rng + ?Sized>(f: &F, rng: &mut R) -> [F::Elem; 3] {
    core::array::from_fn(|_| f.sample(rng, 50))
}

fn bilinear<F: Field>(f: &F, s2: &Mat<F::Elem>, u: &[F::Elem; 3], v: &[F::Elem; 3]) -> F::Elem {
    let mut acc = f.zero();
    for i in 0..3 {
        for j in 0..3 {
            f.add_mul_assign(&mut acc, &f.mul(&u[i], &s2[(i, j)]), &v[j]);
        }
    }
    acc
}

/// A point of the conic found on a random secant line; needs a prime field.
pub fn rational_point<F: Field, R: Rng + ?Sized>(
    f: &F,
    q: &ConicCoeffs<F::Elem>,
    rng: &mut R,
    budget: usize,
) -> Result<[F::Elem; 3]> {
    let poly = q.poly(f);
    let s2 = q.polar_matrix(f);
    for _ in 0..budget {
        let u = random_point(f, rng);
        let v = random_point(f, rng);
        if v.iter().all(|x| f.is_zero(x)) {
            continue;
        }
        // q(u + λv) = q(u) + λ·B(u, v) + λ²·q(v)
        let line = [poly.eval(f, &u), bilinear(f, &s2, &u, &v), poly.eval(f, &v)];
        if f.is_zero(&line[2]) {
            return Ok(v);
        }
        if let Some(lam) = upoly::roots(f, &line, rng).into_iter().next() {
            return Ok(core::array::from_fn(|i| f.add(&u[i], &f.mul(&lam, &v[i]))));
        }
    }
    Err(Error::NotFound(budget))
}

/// Parametrizes a smooth conic from one of its points `p`: with
/// `X = sA + tB` on a line missing `p`, the second intersection of the line
/// `pX` with the conic is `q(X)·p − B(p, X)·X`.
pub fn parametrize<F: Field, R: Rng + ?Sized>(
    f: &F,
    q: &ConicCoeffs<F::Elem>,
    rng: &mut R,
    budget: usize,
) -> Result<ConicParam<F::Elem>> {
    if !q.is_smooth(f) {
        return Err(Error::DegenerateParametrization);
    }
    let p = rational_point(f, q, rng, budget)?;
    let poly = q.poly(f);
    let s2 = q.polar_matrix(f);
    for _ in 0..budget {
        let a = random_point(f, rng);
        let b = random_point(f, rng);
        let qx = [poly.eval(f, &a), bilinear(f, &s2, &a, &b), poly.eval(f, &b)];
        let bp = [bilinear(f, &s2, &p, &a), bilinear(f, &s2, &p, &b)];
        let nu = core::array::from_fn(|i| {
            let x = BForm::new(vec![a[i].clone(), b[i].clone()]);
            let lhs = BForm::new(qx.to_vec()).scale(f, &p[i]);
            lhs.add(f, &BForm::new(bp.to_vec()).mul(f, &x).scale(f, &f.neg(&f.one())))
        });
        let Ok(c) = ConicParam::new(f, nu) else { continue };
        if implicitize(f, &c)?.proportional(f, q) {
            return Ok(c);
        }
    }
    Err(Error::NotFound(budget))
}

/// A conic as coefficients together with a parametrization.
pub type Conic<E> = (ConicCoeffs<E>, ConicParam<E>);

/// A smooth conic with a rational parametrization on the hypersurface
/// `Pf = 0`, found on random pencils. Needs a prime field.
pub fn find_jumping_conic<F: Field>(f: &F, pf: &PfPoly<F::Elem>, seed: u64, budget: usize) -> Result<Conic<F::Elem>> {
    if f.characteristic() < 3 {
        return Err(Error::NeedsPrimeField);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let q0: Vec<F::Elem> = (0..6).map(|_| f.sample(&mut rng, 0)).collect();
        let q1: Vec<F::Elem> = (0..6).map(|_| f.sample(&mut rng, 0)).collect();
        let restricted = pf.on_pencil(f, &q0, &q1);
        if restricted.is_empty() {
            continue;
        }
        for lam in upoly::roots(f, &restricted, &mut rng) {
            let q = ConicCoeffs::new(q0.iter().zip(&q1).map(|(a, b)| f.add(a, &f.mul(&lam, b))).collect());
            debug_assert!(f.is_zero(&pf.eval(f, &q.a)));
            if !q.is_smooth(f) {
                continue;
            }
            if let Ok(nu) = parametrize(f, &q, &mut rng, budget) {
                return Ok((q, nu));
            }
        }
    }
    Err(Error::NotFound(budget))
}

/// Multiplication by `x0, x1, x2` from `H^1(F(-2))` to `H^1(F(-1))`, both of
/// dimension `n`. A line `c·x = 0` is a jumping line exactly when
/// `Σ c_i B_i` is singular.
pub fn line_net<F: Field>(f: &F, m: &Monad<F::Elem>, ceiling: i32) -> Result<Vec<Mat<F::Elem>>> {
    let c = m.complex(f)?;
    let (lo, hi) = (c.twist(-2), c.twist(-1));
    let b = stabilize(f, &lo, 1, START_BOUND, ceiling)?
        .truncation()
        .max(stabilize(f, &hi, 1, START_BOUND, ceiling)?.truncation());
    let src: CohSpace<F::Elem> = hypercohomology(f, &lo, 1, b)?;
    let dst: CohSpace<F::Elem> = hypercohomology(f, &hi, 1, b)?;
    for (k, s) in [(-2, &src), (-1, &dst)] {
        if s.dim() != m.n() {
            return Err(Error::DimensionMismatch { k, found: s.dim(), expected: m.n() });
        }
    }
    (0..3)
        .map(|i| {
            let x = HPoly::var(f, i).terms();
            let cols = src
                .reps()
                .iter()
                .map(|r| Ok(dst.project(f, &src.total().multiply(f, 1, r, &x, dst.total())?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Mat::from_columns(m.n(), &cols, f.zero()))
        })
        .collect()
}

/// Two points spanning the line `c·x = 0`, as a parametrization.
pub fn line_through<F: Field>(f: &F, c: &[F::Elem; 3]) -> Result<[BForm<F::Elem>; 3]> {
    let k = kernel_basis(f, &Mat::from_fn(1, 3, |_, j| c[j].clone()));
    if k.cols() != 2 {
        return Err(Error::DegenerateParametrization);
    }
    let l = core::array::from_fn(|i| BForm::new(vec![k[(i, 0)].clone(), k[(i, 1)].clone()]));
    check_line(f, &l)?;
    Ok(l)
}

/// A line on the jumping-line curve `det(Σ c_i B_i) = 0`, found on random
/// pencils of lines. Needs a prime field.
pub fn find_jumping_line<F: Field>(f: &F, b: &[Mat<F::Elem>], seed: u64, budget: usize) -> Result<[BForm<F::Elem>; 3]> {
    if f.characteristic() == 0 {
        return Err(Error::NeedsPrimeField);
    }
    let n = b[0].rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let combine = |c: &[F::Elem; 3]| (0..3).fold(Mat::zeros(f, n, n), |acc, i| acc.add(f, &b[i].scale(f, &c[i])));
    for _ in 0..budget {
        let c0: [F::Elem; 3] = random_point(f, &mut rng);
        let c1: [F::Elem; 3] = random_point(f, &mut rng);
        let (m0, m1) = (combine(&c0), combine(&c1));
        let pencil: Vec<Vec<BForm<F::Elem>>> = (0..n)
            .map(|i| (0..n).map(|j| BForm::new(vec![m0[(i, j)].clone(), m1[(i, j)].clone()])).collect())
            .collect();
        let d = bform_det(f, &pencil).dehomogenize();
        if upoly::degree(f, &d).is_none() {
            continue;
        }
        for lam in upoly::roots(f, &d, &mut rng) {
            let c = core::array::from_fn(|i| f.add(&c0[i], &f.mul(&lam, &c1[i])));
            if let Ok(l) = line_through(f, &c) {
                return Ok(l);
            }
        }
    }
    Err(Error::NotFound(budget))
}

/// Binary quartic coefficients of `q(ν)`; zero exactly when `ν` lies on `q`.
pub fn restrict_form<F: Field>(f: &F, q: &HPoly<F::Elem>, nu: &ConicParam<F::Elem>) -> BForm<F::Elem> {
    substitute(f, q, nu.nu())
}
