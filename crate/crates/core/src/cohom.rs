//! The spaces `E_k = H^1(F ⊗ Ω(k))`, cup products with forms, and the duality
//! pairing between `E_{-1}` and `E_1`.
//!
//! `F ⊗ Ω(k)` is resolved by the complex `T_k`:
//! `Ω(k-1)^n --α--> Ω(k)^{2n+2} --β--> Ω(k+1)^n` in degrees −1, 0, 1, with
//! α and β acting on Euler triples componentwise. `E_k` is `ℍ^1(T_k)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cech::{h2_trace, hypercohomology, stabilize, Cochain, CohSpace, Complex, Term};
use crate::field::{kernel_basis, rank, Field, Mat};
use crate::monad::Monad;
use crate::poly::{Ambient, Exps, Form, HPoly};
use crate::{Error, Result};

/// Smallest truncation tried by [`compute_spaces`].
pub const START_BOUND: i32 = 2;

pub fn build_tk<F: Field>(f: &F, m: &Monad<F::Elem>, k: i32) -> Result<Complex<F::Elem>> {
    let n = m.n();
    let mut terms = BTreeMap::new();
    terms.insert(-1, Term::omega(vec![k - 1; n]));
    terms.insert(0, Term::omega(vec![k; m.width()]));
    terms.insert(1, Term::omega(vec![k + 1; n]));
    let mut diffs = BTreeMap::new();
    diffs.insert(-1, m.alpha_matrix());
    diffs.insert(0, m.beta_matrix(f));
    Complex::new(f, Ambient::P2, terms, diffs)
}

/// Expected `dim E_k`: `2n` for `k = ±1`, `2n + 2` for `k = 0`.
pub fn expected_dim(n: usize, k: i32) -> usize {
    if k == 0 {
        2 * n + 2
    } else {
        2 * n
    }
}

/// `E_k` with its cocycle representatives.
#[derive(Debug, Clone)]
pub struct EkSpace<E> {
    pub k: i32,
    pub space: CohSpace<E>,
}

impl<E: Clone> EkSpace<E> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

fn check_dim<E: Clone>(n: usize, e: EkSpace<E>) -> Result<EkSpace<E>> {
    let expected = expected_dim(n, e.k);
    if e.dim() != expected {
        return Err(Error::DimensionMismatch { k: e.k, found: e.dim(), expected });
    }
    Ok(e)
}

/// `E_k` by [`stabilize`], with the dimension checked.
pub fn compute_e<F: Field>(f: &F, m: &Monad<F::Elem>, k: i32, ceiling: i32) -> Result<EkSpace<F::Elem>> {
    let c = build_tk(f, m, k)?;
    let space = stabilize(f, &c, 1, START_BOUND, ceiling)?;
    check_dim(m.n(), EkSpace { k, space })
}

/// `E_k` at a fixed truncation, with the dimension checked.
pub fn compute_e_at<F: Field>(f: &F, m: &Monad<F::Elem>, k: i32, bound: i32) -> Result<EkSpace<F::Elem>> {
    let c = build_tk(f, m, k)?;
    let space = hypercohomology(f, &c, 1, bound)?;
    check_dim(m.n(), EkSpace { k, space })
}

/// `E_{-1}`, `E_0`, `E_1` at one common truncation, so cup products land
/// inside the target truncation.
#[derive(Debug, Clone)]
pub struct ESpaces<E> {
    pub e_m1: EkSpace<E>,
    pub e0: EkSpace<E>,
    pub e1: EkSpace<E>,
}

impl<E: Clone> ESpaces<E> {
    pub fn get(&self, k: i32) -> &EkSpace<E> {
        match k {
            -1 => &self.e_m1,
            0 => &self.e0,
            1 => &self.e1,
            _ => panic!("E_k is only built for k in -1..=1"),
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.e_m1.dim(), self.e0.dim(), self.e1.dim()]
    }

    pub fn bound(&self) -> i32 {
        self.e_m1.space.truncation()
    }
}

pub fn compute_spaces<F: Field>(f: &F, m: &Monad<F::Elem>, ceiling: i32) -> Result<ESpaces<F::Elem>> {
    let mut es: Vec<EkSpace<F::Elem>> = (-1..=1).map(|k| compute_e(f, m, k, ceiling)).collect::<Result<_>>()?;
    let bound = es.iter().map(|e| e.space.truncation()).max().unwrap();
    for e in es.iter_mut() {
        if e.space.truncation() != bound {
            *e = compute_e_at(f, m, e.k, bound)?;
        }
    }
    let e1 = es.pop().unwrap();
    let e0 = es.pop().unwrap();
    let e_m1 = es.pop().unwrap();
    Ok(ESpaces { e_m1, e0, e1 })
}

/// Class of `e ∪ form` in the target space, `e` given by coordinates.
pub fn cup<F: Field>(
    f: &F,
    src: &EkSpace<F::Elem>,
    coords: &[F::Elem],
    form: &HPoly<F::Elem>,
    target: &EkSpace<F::Elem>,
) -> Result<Vec<F::Elem>> {
    if target.k != src.k + form.degree() {
        return Err(Error::Shape("cup product lands in the wrong E_k".into()));
    }
    let x = src.space.lift(f, coords);
    let y = src.space.total().multiply(f, 1, &x, &form.terms(), target.space.total())?;
    Ok(target.space.project(f, &y))
}

/// Matrix of `e ↦ e ∪ form` in the representative bases.
pub fn cup_matrix<F: Field>(
    f: &F,
    src: &EkSpace<F::Elem>,
    form: &HPoly<F::Elem>,
    target: &EkSpace<F::Elem>,
) -> Result<Mat<F::Elem>> {
    let cols = (0..src.dim())
        .map(|b| {
            let mut e = vec![f.zero(); src.dim()];
            e[b] = f.one();
            cup(f, src, &e, form, target)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_columns(target.dim(), &cols, f.zero()))
}

/// Laurent polynomial in `x0, x1, x2`.
pub type Laurent<E> = BTreeMap<Exps, E>;

fn laurent_mul<F: Field>(f: &F, a: &Laurent<F::Elem>, b: &Laurent<F::Elem>) -> Laurent<F::Elem> {
    let mut out: Laurent<F::Elem> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let slot = out.entry(e).or_insert_with(|| f.zero());
            f.add_mul_assign(slot, ca, cb);
        }
    }
    out.retain(|_, v| !f.is_zero(v));
    out
}

fn laurent_sub<F: Field>(f: &F, a: &Laurent<F::Elem>, b: &Laurent<F::Elem>) -> Laurent<F::Elem> {
    let mut out = a.clone();
    for (e, c) in b {
        let slot = out.entry(*e).or_insert_with(|| f.zero());
        *slot = f.sub(slot, c);
    }
    out.retain(|_, v| !f.is_zero(v));
    out
}

fn shift<E: Clone>(a: &Laurent<E>, i: usize, by: i32) -> Laurent<E> {
    a.iter()
        .map(|(e, c)| {
            let mut e = *e;
            e[i] += by;
            (e, c.clone())
        })
        .collect()
}

/// The `u` with `f × g = u · (x0, x1, x2)` for two Euler triples
/// (`Σ x_i f_i = Σ x_i g_i = 0`).
pub fn eps2_cross<F: Field>(f: &F, a: &[Laurent<F::Elem>; 3], b: &[Laurent<F::Elem>; 3]) -> Result<Laurent<F::Elem>> {
    let cross = |i: usize, j: usize| laurent_sub(f, &laurent_mul(f, &a[i], &b[j]), &laurent_mul(f, &a[j], &b[i]));
    let h = [cross(1, 2), cross(2, 0), cross(0, 1)];
    let u: Laurent<F::Elem> = shift(&h[0], 0, -1);
    for i in 1..3 {
        if shift(&u, i, 1) != h[i] {
            return Err(Error::InconsistentDivision);
        }
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Solved,
    ChainLevel,
}

/// Matrix `P` of a pairing `E_{-1} ⊗ E_1 → k`: `<e, e'> = eᵀ P e'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingMatrix<E> {
    pub p: Mat<E>,
    pub provenance: Provenance,
    /// Dimension of the space of all `P` making every `P·M_k` skew.
    pub solution_dim: usize,
}

/// Solves `P·M_k + (P·M_k)ᵀ = 0` for all `k` and returns the first
/// nondegenerate solution among the kernel basis vectors and their running
/// sums.
pub fn pairing_solve<F: Field>(f: &F, ms: &[Mat<F::Elem>]) -> Result<PairingMatrix<F::Elem>> {
    let d = ms.first().map(|m| m.rows()).ok_or_else(|| Error::Shape("no net matrices".into()))?;
    let var = |a: usize, c: usize| a * d + c;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for m in ms {
        for a in 0..d {
            for b in a..d {
                // Σ_c P_ac M_cb + P_bc M_ca
                let mut row = vec![f.zero(); d * d];
                for c in 0..d {
                    row[var(a, c)] = f.add(&row[var(a, c)], &m[(c, b)]);
                    row[var(b, c)] = f.add(&row[var(b, c)], &m[(c, a)]);
                }
                rows.push(row);
            }
        }
    }
    let sys = Mat::from_fn(rows.len(), d * d, |i, j| rows[i][j].clone());
    let k = kernel_basis(f, &sys);
    let solution_dim = k.cols();
    if solution_dim == 0 {
        return Err(Error::NoPairing);
    }
    let to_mat = |v: &[F::Elem]| Mat::from_fn(d, d, |a, c| v[var(a, c)].clone());
    let mut acc = vec![f.zero(); d * d];
    let mut candidates = Vec::new();
    for c in 0..solution_dim {
        let col = k.column(c);
        acc = acc.iter().zip(&col).map(|(x, y)| f.add(x, y)).collect();
        candidates.push(col);
        candidates.push(acc.clone());
    }
    for v in candidates {
        let p = to_mat(&f.normalize(v));
        if rank(f, &p) == d {
            return Ok(PairingMatrix { p, provenance: Provenance::Solved, solution_dim });
        }
    }
    Err(Error::DegeneratePairing(solution_dim))
}

/// Chain-level pairing of total 1-cocycles `u` of `T_{-1}` and `v` of `T_1`.
///
/// The product of total cochains of bidegrees `(p, c)` and `(p', c')` is the
/// Alexander–Whitney cup with sign `(-1)^{c p'}`, which satisfies the Leibniz
/// rule for `D = d + (-1)^p δ`. On the chart triple only `(p, c) = (-1, 2),
/// (0, 1), (1, 0)` against `p' = -p` contribute, all with sign `+1`:
/// `u_{012} v_2`, `u_{01} v_{12}`, `u_0 v_{012}`. Monad indices are contracted
/// by `Σ a_s b_s` in degrees `∓1` and by `aᵀJb` in degree 0, Euler triples by
/// [`eps2_cross`], and the resulting class in `H^2(O(-3))` by [`h2_trace`].
pub fn pairing_chain<F: Field>(
    f: &F,
    es: &ESpaces<F::Elem>,
    u: &Cochain<F::Elem>,
    v: &Cochain<F::Elem>,
) -> Result<F::Elem> {
    let tu = es.e_m1.space.total();
    let tv = es.e1.space.total();
    let n = tu.complex().terms()[&-1].rank();
    let w = tu.complex().terms()[&0].rank();
    let one = f.one();
    let minus = f.neg(&one);
    let mut acc = f.zero();
    for (p, mu, mv) in [(-1, 0b111u8, 0b100u8), (0, 0b011, 0b110), (1, 0b001, 0b111)] {
        let du = tu.chart_data(f, 1, u, p);
        let dv = tv.chart_data(f, 1, v, -p);
        let pairs: Vec<(usize, usize, &F::Elem)> = if p == 0 {
            (0..w).map(|i| if i % 2 == 0 { (i, i + 1, &one) } else { (i, i - 1, &minus) }).collect()
        } else {
            (0..n).map(|s| (s, s, &one)).collect()
        };
        for (a, b, c) in pairs {
            let (Some(x), Some(y)) = (du.get(&(a, mu)), dv.get(&(b, mv))) else { continue };
            let t = h2_trace(f, &eps2_cross(f, x, y)?);
            f.add_mul_assign(&mut acc, c, &t);
        }
    }
    Ok(acc)
}

/// Gram matrix of [`pairing_chain`] on the representative bases.
pub fn pairing_chain_matrix<F: Field>(f: &F, es: &ESpaces<F::Elem>) -> Result<PairingMatrix<F::Elem>> {
    let (a, b) = (es.e_m1.space.reps(), es.e1.space.reps());
    let mut data = Vec::with_capacity(a.len() * b.len());
    for u in a {
        for v in b {
            data.push(pairing_chain(f, es, u, v)?);
        }
    }
    Ok(PairingMatrix { p: Mat::from_vec(a.len(), b.len(), data), provenance: Provenance::ChainLevel, solution_dim: 0 })
}

/// `Some(λ)` with `a = λ b`, `None` if no such scalar exists. Both zero gives
/// `Some(0)`.
pub fn scalar_multiple<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Option<F::Elem> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return None;
    }
    let pivot = b.entries().iter().position(|x| !f.is_zero(x));
    let lambda = match pivot {
        Some(i) => f.div(&a.entries()[i], &b.entries()[i])?,
        None => return if a.is_zero(f) { Some(f.zero()) } else { None },
    };
    (*a == b.scale(f, &lambda)).then_some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{matmul, PrimeField, Rationals};
    use crate::monad::random_selfdual;
    use crate::poly::conic_basis;

    fn lin<F: Field>(f: &F, c: [i64; 3]) -> Laurent<F::Elem> {
        (0..3)
            .filter(|&i| c[i] != 0)
            .map(|i| {
                let mut e = [0; 3];
                e[i] = 1;
                (e, f.from_i64(c[i]))
            })
            .collect()
    }

    #[test]
    fn tk_shapes() {
        let f = PrimeField::new(32003).unwrap();
        let m = random_selfdual(&f, 2, 4).unwrap();
        let t = build_tk(&f, &m, -1).unwrap();
        assert_eq!(t.terms()[&-1], Term::omega(vec![-2; 2]));
        assert_eq!(t.terms()[&0], Term::omega(vec![-1; 6]));
        assert_eq!(t.terms()[&1], Term::omega(vec![0; 2]));
        let t = build_tk(&f, &m, 1).unwrap();
        assert_eq!(t.terms()[&1], Term::omega(vec![2; 2]));
    }

    #[test]
    fn eps2_examples() {
        let f = Rationals;
        let z = Laurent::new();
        let a = [lin(&f, [0, 1, 0]), lin(&f, [-1, 0, 0]), z.clone()];
        let b = [lin(&f, [0, 0, 1]), z.clone(), lin(&f, [-1, 0, 0])];
        assert_eq!(eps2_cross(&f, &a, &b).unwrap(), lin(&f, [1, 0, 0]));
        let ba = eps2_cross(&f, &b, &a).unwrap();
        assert_eq!(ba, lin(&f, [-1, 0, 0]));
        assert!(eps2_cross(&f, &a, &a).unwrap().is_empty());
        let bad = [lin(&f, [1, 0, 0]), z.clone(), z.clone()];
        assert_eq!(eps2_cross(&f, &bad, &b), Err(Error::InconsistentDivision));
    }

    #[test]
    fn spaces_and_pairing_fp() {
        let f = PrimeField::new(32003).unwrap();
        let m = random_selfdual(&f, 2, 1).unwrap();
        let es = compute_spaces(&f, &m, 12).unwrap();
        assert_eq!(es.dims(), [4, 6, 4]);
        let ms: Vec<_> =
            conic_basis().iter().map(|e| cup_matrix(&f, &es.e_m1, &HPoly::monomial(&f, *e), &es.e1).unwrap()).collect();
        let p = pairing_solve(&f, &ms).unwrap();
        for mk in &ms {
            assert!(matmul(&f, &p.p, mk).is_skew(&f));
        }
        // associativity of the cup product through E_0
        let x0 = HPoly::var(&f, 0);
        let x1 = HPoly::var(&f, 1);
        let l = cup_matrix(&f, &es.e_m1, &x1, &es.e0).unwrap();
        let r = cup_matrix(&f, &es.e0, &x0, &es.e1).unwrap();
        let direct = cup_matrix(&f, &es.e_m1, &x0.mul(&f, &x1), &es.e1).unwrap();
        assert_eq!(matmul(&f, &r, &l), direct);
    }

    #[test]
    fn chain_pairing_matches_solved_pairing() {
        use rand::{Rng, SeedableRng};
        let f = PrimeField::new(32003).unwrap();
        let m = random_selfdual(&f, 2, 5).unwrap();
        let es = compute_spaces(&f, &m, 12).unwrap();
        let ms: Vec<_> =
            conic_basis().iter().map(|e| cup_matrix(&f, &es.e_m1, &HPoly::monomial(&f, *e), &es.e1).unwrap()).collect();
        let solved = pairing_solve(&f, &ms).unwrap();
        let chain = pairing_chain_matrix(&f, &es).unwrap();
        let lambda = scalar_multiple(&f, &chain.p, &solved.p).expect("proportional");
        assert!(!f.is_zero(&lambda));
        // perturb by coboundaries of random degree-0 cochains
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let tu = es.e_m1.space.total();
        let size = tu.layout().size(0);
        let u = &es.e_m1.space.reps()[1];
        let v = &es.e1.space.reps()[2];
        let base = pairing_chain(&f, &es, u, v).unwrap();
        for _ in 0..5 {
            let w: Cochain<u32> = (0..20).map(|_| (rng.gen_range(0..size), f.sample(&mut rng, 0))).collect();
            let dw = tu.apply(&f, 0, &w);
            let mut u2 = u.clone();
            for (g, c) in dw {
                let slot = u2.entry(g).or_insert(0);
                *slot = f.add(slot, &c);
            }
            assert_eq!(pairing_chain(&f, &es, &u2, v).unwrap(), base);
        }
    }
}
