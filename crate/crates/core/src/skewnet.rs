//! The net `q ↦ t_q` of maps `E_{-1} → E_1` over the `P^5` of conics, its
//! skew form `N(q) = P·t_q`, the Pfaffian, and the block matrix of `t''`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cohom::{cup_matrix, pairing_solve, ESpaces, PairingMatrix};
use crate::field::{matmul, rank, Field, Mat};
use crate::poly::{conic_basis, upoly, HPoly};
use crate::{Error, Result};

/// `t_q = Σ q_k M_k` in the representative bases, `N_k = P·M_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewNet<E> {
    pub n: usize,
    pub m: Vec<Mat<E>>,
    pub pairing: PairingMatrix<E>,
    pub nk: Vec<Mat<E>>,
}

pub fn build_net<F: Field>(f: &F, es: &ESpaces<F::Elem>) -> Result<SkewNet<F::Elem>> {
    let m = conic_basis()
        .iter()
        .map(|e| cup_matrix(f, &es.e_m1, &HPoly::monomial(f, *e), &es.e1))
        .collect::<Result<Vec<_>>>()?;
    let pairing = pairing_solve(f, &m)?;
    net_from_parts(f, es.e_m1.dim() / 2, m, pairing)
}

/// Assembles a net from its coefficient matrices and a pairing, checking
/// that every `N_k` is skew.
pub fn net_from_parts<F: Field>(
    f: &F,
    n: usize,
    m: Vec<Mat<F::Elem>>,
    pairing: PairingMatrix<F::Elem>,
) -> Result<SkewNet<F::Elem>> {
    if m.len() != 6 || m.iter().any(|x| x.rows() != 2 * n || x.cols() != 2 * n) {
        return Err(Error::Shape("a net needs six 2n × 2n matrices".into()));
    }
    let nk: Vec<_> = m.iter().map(|x| matmul(f, &pairing.p, x)).collect();
    if let Some(k) = nk.iter().position(|x| !x.is_skew(f)) {
        return Err(Error::Shape(alloc::format!("N_{k} is not skew")));
    }
    Ok(SkewNet { n, m, pairing, nk })
}

fn combine<F: Field>(f: &F, ms: &[Mat<F::Elem>], q: &[F::Elem]) -> Mat<F::Elem> {
    assert_eq!(q.len(), 6, "conic coefficient vectors have six entries");
    let mut acc = Mat::zeros(f, ms[0].rows(), ms[0].cols());
    for (m, c) in ms.iter().zip(q) {
        if !f.is_zero(c) {
            acc = acc.add(f, &m.scale(f, c));
        }
    }
    acc
}

impl<E: Clone> SkewNet<E> {
    /// `t_q = Σ q_k M_k`.
    pub fn t_q<F: Field<Elem = E>>(&self, f: &F, q: &[E]) -> Mat<E> {
        combine(f, &self.m, q)
    }

    /// `N(q) = Σ q_k N_k`, a skew matrix.
    pub fn n_q<F: Field<Elem = E>>(&self, f: &F, q: &[E]) -> Mat<E> {
        combine(f, &self.nk, q)
    }

    /// `dim ker N(q)`, always even.
    pub fn kernel_dim_at<F: Field<Elem = E>>(&self, f: &F, q: &[E]) -> usize {
        2 * self.n - rank(f, &self.n_q(f, q))
    }
}

/// Exponent vector in `a0..a5`.
pub type PfExps = [u8; 6];

/// Homogeneous polynomial in the conic coefficients `a0..a5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfPoly<E> {
    degree: u32,
    terms: BTreeMap<PfExps, E>,
}

fn pf_add<F: Field>(f: &F, acc: &mut BTreeMap<PfExps, F::Elem>, e: PfExps, c: &F::Elem) {
    let slot = acc.entry(e).or_insert_with(|| f.zero());
    *slot = f.add(slot, c);
    if f.is_zero(slot) {
        acc.remove(&e);
    }
}

fn pf_mul<F: Field>(f: &F, a: &BTreeMap<PfExps, F::Elem>, b: &BTreeMap<PfExps, F::Elem>) -> BTreeMap<PfExps, F::Elem> {
    let mut out = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: PfExps = core::array::from_fn(|i| ea[i] + eb[i]);
            pf_add(f, &mut out, e, &f.mul(ca, cb));
        }
    }
    out
}

impl<E: Clone> PfPoly<E> {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<PfExps, E> {
        &self.terms
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().all(|e| e.iter().map(|&x| x as u32).sum::<u32>() == self.degree)
    }

    pub fn from_terms<F: Field<Elem = E>>(f: &F, degree: u32, terms: impl IntoIterator<Item = (PfExps, E)>) -> Self {
        let mut acc = BTreeMap::new();
        for (e, c) in terms {
            pf_add(f, &mut acc, e, &c);
        }
        PfPoly { degree, terms: acc }
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, q: &[E]) -> E {
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..6 {
                t = f.mul(&t, &f.pow(&q[i], e[i] as u64));
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// `λ ↦ Pf(q0 + λ q1)` as a dense univariate polynomial.
    pub fn on_pencil<F: Field<Elem = E>>(&self, f: &F, q0: &[E], q1: &[E]) -> Vec<E> {
        let mut acc: Vec<E> = Vec::new();
        for (e, c) in &self.terms {
            let mut t = vec![c.clone()];
            for i in 0..6 {
                let lin = [q0[i].clone(), q1[i].clone()];
                for _ in 0..e[i] {
                    t = upoly::mul(f, &t, &lin);
                }
            }
            acc = upoly::add(f, &acc, &t);
        }
        upoly::trim(f, acc)
    }
}

/// Symbolic Pfaffian of `Σ a_k N_k`, expanded along the first row with
/// memoization on index subsets; `Pf(J) = 1` for the standard symplectic `J`.
pub fn pfaffian_of<F: Field>(f: &F, nk: &[Mat<F::Elem>]) -> PfPoly<F::Elem> {
    let d = nk[0].rows();
    assert!(d % 2 == 0 && d <= 32, "Pfaffians need an even size");
    // entries as linear polynomials
    let entry = |i: usize, j: usize| -> BTreeMap<PfExps, F::Elem> {
        let mut out = BTreeMap::new();
        for (k, m) in nk.iter().enumerate() {
            let mut e = [0u8; 6];
            e[k] = 1;
            pf_add(f, &mut out, e, &m[(i, j)]);
        }
        out
    };
    let mut memo: BTreeMap<u32, BTreeMap<PfExps, F::Elem>> = BTreeMap::new();
    memo.insert(0, BTreeMap::from([([0u8; 6], f.one())]));
    let full: u32 = if d == 32 { u32::MAX } else { (1u32 << d) - 1 };
    let value = pf_rec(f, full, &entry, &mut memo);
    PfPoly { degree: (d / 2) as u32, terms: value }
}

fn pf_rec<F: Field>(
    f: &F,
    set: u32,
    entry: &dyn Fn(usize, usize) -> BTreeMap<PfExps, F::Elem>,
    memo: &mut BTreeMap<u32, BTreeMap<PfExps, F::Elem>>,
) -> BTreeMap<PfExps, F::Elem> {
    if let Some(v) = memo.get(&set) {
        return v.clone();
    }
    let i = set.trailing_zeros() as usize;
    let rest = set & !(1 << i);
    let mut acc = BTreeMap::new();
    let mut pos = 0;
    for j in 0..32 {
        if rest & (1 << j) == 0 {
            continue;
        }
        let sub = pf_rec(f, rest & !(1 << j), entry, memo);
        let term = pf_mul(f, &entry(i, j), &sub);
        let negate = pos % 2 == 1;
        for (e, c) in term {
            pf_add(f, &mut acc, e, &if negate { f.neg(&c) } else { c });
        }
        pos += 1;
    }
    memo.insert(set, acc.clone());
    acc
}

/// Pfaffian of a net; an identically zero result is an error.
pub fn pfaffian<F: Field>(f: &F, net: &SkewNet<F::Elem>) -> Result<PfPoly<F::Elem>> {
    let pf = pfaffian_of(f, &net.nk);
    if pf.is_zero() {
        return Err(Error::ZeroPfaffian);
    }
    Ok(pf)
}

/// Pfaffian of a constant skew matrix.
pub fn pfaffian_value<F: Field>(f: &F, m: &Mat<F::Elem>) -> F::Elem {
    let zero = Mat::zeros(f, m.rows(), m.cols());
    let nk = [m.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero];
    let mut q = vec![f.zero(); 6];
    q[0] = f.one();
    pfaffian_of(f, &nk).eval(f, &q)
}

/// Index of `x_i x_j` in [`conic_basis`].
pub fn conic_index(i: usize, j: usize) -> usize {
    let mut e = [0i32; 3];
    e[i] += 1;
    e[j] += 1;
    conic_basis().iter().position(|b| *b == e).unwrap()
}

/// The `6n × 6n` matrix of `t''` with its structural checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDoublePrime<E> {
    /// Block `(i, j)` is `A_ij = P·M_{x_i x_j}`.
    pub a: Mat<E>,
    pub rank: usize,
    /// Rank of the composite `E_{-1}⊗V* → E_0 → E_1⊗V` built from the two
    /// degree-one cup maps.
    pub rank_via_e0: usize,
    /// `R_i L_j = M_{x_i x_j}` for all `i, j`.
    pub factorization_holds: bool,
    pub skew: bool,
    pub blocks_skew: bool,
    pub blocks_symmetric: bool,
}

impl<E> TDoublePrime<E> {
    pub fn all_hold(&self, n: usize) -> bool {
        self.rank == 2 * n + 2
            && self.rank_via_e0 == self.rank
            && self.factorization_holds
            && self.skew
            && self.blocks_skew
            && self.blocks_symmetric
    }
}

pub fn t_doubleprime<F: Field>(f: &F, es: &ESpaces<F::Elem>, net: &SkewNet<F::Elem>) -> Result<TDoublePrime<F::Elem>> {
    let d = 2 * net.n;
    let xs: Vec<HPoly<F::Elem>> = (0..3).map(|i| HPoly::var(f, i)).collect();
    let l: Vec<Mat<F::Elem>> = xs.iter().map(|x| cup_matrix(f, &es.e_m1, x, &es.e0)).collect::<Result<_>>()?;
    let r: Vec<Mat<F::Elem>> = xs.iter().map(|x| cup_matrix(f, &es.e0, x, &es.e1)).collect::<Result<_>>()?;
    let block = |i: usize, j: usize| net.nk[conic_index(i, j)].clone();
    let a = Mat::from_fn(3 * d, 3 * d, |u, v| block(u / d, v / d)[(u % d, v % d)].clone());
    let mut factorization_holds = true;
    for i in 0..3 {
        for j in 0..3 {
            factorization_holds &= matmul(f, &r[i], &l[j]) == net.m[conic_index(i, j)];
        }
    }
    // [P R_0; P R_1; P R_2] · [L_0 L_1 L_2]
    let e0 = es.e0.dim();
    let left = Mat::from_fn(3 * d, e0, |u, c| matmul(f, &net.pairing.p, &r[u / d])[(u % d, c)].clone());
    let right = Mat::from_fn(e0, 3 * d, |c, v| l[v / d][(c, v % d)].clone());
    let rank_via_e0 = rank(f, &matmul(f, &left, &right));
    let mut blocks_skew = true;
    let mut blocks_symmetric = true;
    for i in 0..3 {
        for j in 0..3 {
            let b = a.block(i * d, j * d, d, d);
            blocks_skew &= b.is_skew(f);
            blocks_symmetric &= b == a.block(j * d, i * d, d, d);
        }
    }
    let tdp = TDoublePrime {
        rank: rank(f, &a),
        rank_via_e0,
        factorization_holds,
        skew: a.is_skew(f),
        blocks_skew,
        blocks_symmetric,
        a,
    };
    Ok(tdp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{det, PrimeField, Rationals};
    use crate::monad::j_matrix;

    #[test]
    fn pfaffian_normalization() {
        let f = Rationals;
        for size in [2, 4, 6, 8] {
            assert_eq!(pfaffian_value(&f, &j_matrix(&f, size)), f.one());
        }
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for size in [2, 4, 6] {
            let nk: Vec<_> = (0..6)
                .map(|_| {
                    let raw = Mat::from_fn(size, size, |_, _| f.sample(&mut rng, 0));
                    raw.add(&f, &raw.transpose().scale(&f, &f.neg(&f.one())))
                })
                .collect();
            let pf = pfaffian_of(&f, &nk);
            assert!(pf.is_homogeneous());
            assert_eq!(pf.degree(), size as u32 / 2);
            for _ in 0..5 {
                let q: Vec<u32> = (0..6).map(|_| f.sample(&mut rng, 0)).collect();
                let v = pf.eval(&f, &q);
                assert_eq!(f.mul(&v, &v), det(&f, &combine(&f, &nk, &q)));
                let lam = f.sample(&mut rng, 0);
                let scaled: Vec<u32> = q.iter().map(|x| f.mul(x, &lam)).collect();
                assert_eq!(pf.eval(&f, &scaled), f.mul(&v, &f.pow(&lam, size as u64 / 2)));
                let q1: Vec<u32> = (0..6).map(|_| f.sample(&mut rng, 0)).collect();
                let pencil = pf.on_pencil(&f, &q, &q1);
                let on: Vec<u32> = q.iter().zip(&q1).map(|(a, b)| f.add(a, &f.mul(&lam, b))).collect();
                assert_eq!(upoly::eval(&f, &pencil, &lam), pf.eval(&f, &on));
            }
        }
    }

    #[test]
    fn conic_indices() {
        assert_eq!(conic_index(0, 0), 0);
        assert_eq!(conic_index(2, 1), 4);
        assert_eq!(conic_index(2, 2), 5);
    }
}
