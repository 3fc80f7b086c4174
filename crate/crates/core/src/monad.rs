//! Self-dual monads `O(-1)^n --α--> O^{2n+2} --β--> O(1)^n` with
//! `β = αᵀJ`, their validation and random generation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cech::{stabilize, Complex, PolyMatrix, Term};
use crate::field::{kernel_basis, Field, Mat};
use crate::poly::{upoly, Ambient, BForm, Form, HPoly};
use crate::{Error, Result};

/// Truncation ceiling used when a caller does not choose one.
pub const DEFAULT_CEILING: i32 = 14;

/// Retry budget of [`random_selfdual`].
pub const DEFAULT_ATTEMPTS: usize = 64;

/// A monad `O(-1)^n → O^{2n+2} → O(1)^n` with `β = αᵀJ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monad<E> {
    n: usize,
    /// `(2n+2) × n`, row major.
    alpha: Vec<HPoly<E>>,
}

/// `J = diag([[0,1],[-1,0]], …)` of size `2m`.
pub fn j_matrix<F: Field>(f: &F, size: usize) -> Mat<F::Elem> {
    Mat::from_fn(size, size, |i, j| {
        if i % 2 == 0 && j == i + 1 {
            f.one()
        } else if i % 2 == 1 && j + 1 == i {
            f.neg(&f.one())
        } else {
            f.zero()
        }
    })
}

impl<E: Clone> Monad<E> {
    /// Checks the shape of α and that every entry is linear. `βα = 0` is not
    /// required here; see [`validate`].
    pub fn new(n: usize, alpha: Vec<Vec<HPoly<E>>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("n must be at least 1".into()));
        }
        if alpha.len() != 2 * n + 2 || alpha.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("α must be {} × {n}", 2 * n + 2)));
        }
        if alpha.iter().flatten().any(|p| p.degree_u32() != 1) {
            return Err(Error::Shape("entries of α must be linear forms".into()));
        }
        Ok(Monad { n, alpha: alpha.into_iter().flatten().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the middle term, `2n + 2`.
    pub fn width(&self) -> usize {
        2 * self.n + 2
    }

    pub fn alpha(&self, i: usize, j: usize) -> &HPoly<E> {
        &self.alpha[i * self.n + j]
    }

    pub fn alpha_rows(&self) -> Vec<Vec<HPoly<E>>> {
        self.alpha.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// `β = αᵀJ`, an `n × (2n+2)` matrix of linear forms.
    pub fn beta<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<HPoly<E>>> {
        // (αᵀJ)_{k,i} = Σ_j α_{j,k} J_{j,i}; J_{i+1,i} = -1 for even i, J_{i-1,i} = 1 for odd i
        (0..self.n)
            .map(|k| {
                (0..self.width())
                    .map(|i| {
                        if i % 2 == 0 {
                            self.alpha(i + 1, k).scale(f, &f.neg(&f.one()))
                        } else {
                            self.alpha(i - 1, k).clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `βα`, an `n × n` matrix of quadrics.
    pub fn beta_alpha<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<HPoly<E>>> {
        let beta = self.beta(f);
        (0..self.n)
            .map(|a| {
                (0..self.n)
                    .map(|b| {
                        (0..self.width())
                            .fold(HPoly::zero(2), |acc, j| acc.add(f, &beta[a][j].mul(f, self.alpha(j, b))))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn alpha_matrix(&self) -> PolyMatrix<E> {
        PolyMatrix::from_fn(self.width(), self.n, |i, j| self.alpha(i, j).terms())
    }

    pub fn beta_matrix<F: Field<Elem = E>>(&self, f: &F) -> PolyMatrix<E> {
        let beta = self.beta(f);
        PolyMatrix::from_fn(self.n, self.width(), |i, j| beta[i][j].terms())
    }

    /// The monad itself as a complex of line bundles in degrees −1, 0, 1;
    /// its `ℍ^0` is `H^0(F)`.
    pub fn complex<F: Field<Elem = E>>(&self, f: &F) -> Result<Complex<E>> {
        let n = self.n;
        let mut terms = BTreeMap::new();
        terms.insert(-1, Term::line(vec![-1; n]));
        terms.insert(0, Term::line(vec![0; self.width()]));
        terms.insert(1, Term::line(vec![1; n]));
        let mut diffs = BTreeMap::new();
        diffs.insert(-1, self.alpha_matrix());
        diffs.insert(0, self.beta_matrix(f));
        Complex::new(f, Ambient::P2, terms, diffs)
    }

    /// `(c1, c2)` from the twists of the display, by the Whitney formula in
    /// `ℤ[h]/h³`.
    pub fn chern(&self) -> (i64, i64) {
        let mut c = [1i64, 0, 0];
        let mul = |c: [i64; 3], d: i64| [c[0], c[1] + d * c[0], c[2] + d * c[1]];
        // (1 + dh)^{-1} = 1 - dh + d²h²
        let div = |c: [i64; 3], d: i64| {
            let inv = [1, -d, d * d];
            [c[0] * inv[0], c[1] * inv[0] + c[0] * inv[1], c[2] * inv[0] + c[1] * inv[1] + c[0] * inv[2]]
        };
        for _ in 0..self.width() {
            c = mul(c, 0);
        }
        for _ in 0..self.n {
            c = div(c, -1);
            c = div(c, 1);
        }
        (c[1], c[2])
    }
}

/// Result of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub beta_alpha_zero: bool,
    pub pointwise_exactness: bool,
    pub lines_tested: usize,
    /// Degree of the gcd of the maximal minors of α on each tested line; a
    /// common zero at `t = ∞` counts as one more degree.
    pub gcd_degrees: Vec<usize>,
    /// `None` when the monad complex could not be formed or did not stabilize.
    pub h0_f: Option<usize>,
    pub h0_f1: Option<usize>,
}

impl ValidityReport {
    /// `βα = 0` and α injective at every tested point.
    pub fn is_monad(&self) -> bool {
        self.beta_alpha_zero && self.pointwise_exactness
    }

    /// Monad conditions plus `H^0(F) = 0`, i.e. `F` is stable.
    pub fn is_stable(&self) -> bool {
        self.is_monad() && self.h0_f == Some(0)
    }

    /// Stability plus the literal condition `H^0(F(1)) = 0`. Riemann–Roch
    /// gives `h^0(F(1)) ≥ 6 - n`, so this fails for every `n < 6`.
    pub fn satisfies_h0_f1_vanishing(&self) -> bool {
        self.is_stable() && self.h0_f1 == Some(0)
    }
}

/// Determinant of a small square matrix of binary forms by cofactor expansion.
pub(crate) fn bform_det<F: Field>(f: &F, m: &[Vec<BForm<F::Elem>>]) -> BForm<F::Elem> {
    let k = m.len();
    if k == 1 {
        return m[0][0].clone();
    }
    let deg = m.iter().map(|r| r[0].degree_u32()).sum::<u32>();
    let mut acc = BForm::zero(f, deg);
    for j in 0..k {
        let minor: Vec<Vec<BForm<F::Elem>>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let mut term = m[0][j].mul(f, &bform_det(f, &minor));
        if j % 2 == 1 {
            term = term.scale(f, &f.neg(&f.one()));
        }
        acc = acc.add(f, &term);
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Degree of the common zero locus on P¹ of the maximal minors of an
/// `r × c` matrix of binary forms (`r ≥ c`), or `None` if every minor
/// vanishes identically. Zero means the matrix is injective at every point.
pub fn minor_gcd_degree<F: Field>(f: &F, rows: &[Vec<BForm<F::Elem>>]) -> Option<usize> {
    let c = rows.first().map_or(0, |r| r.len());
    let mut gcd: Vec<F::Elem> = Vec::new();
    let mut all_vanish_at_infinity = true;
    let mut any_nonzero = false;
    for pick in subsets(rows.len(), c) {
        let sub: Vec<Vec<BForm<F::Elem>>> = pick.iter().map(|&r| rows[r].clone()).collect();
        let d = bform_det(f, &sub);
        if d.is_zero(f) {
            continue;
        }
        any_nonzero = true;
        // coefficient of t^deg is the value at (s, t) = (0, 1)
        if !f.is_zero(d.coeffs().last().unwrap()) {
            all_vanish_at_infinity = false;
        }
        gcd = upoly::gcd(f, &gcd, &d.dehomogenize());
    }
    if !any_nonzero {
        return None;
    }
    Some(upoly::degree(f, &gcd).unwrap_or(0) + usize::from(all_vanish_at_infinity))
}

/// α restricted along a map `P¹ → P²` given by three binary forms.
pub fn pull_back_alpha<F: Field>(f: &F, m: &Monad<F::Elem>, g: &[BForm<F::Elem>; 3]) -> Vec<Vec<BForm<F::Elem>>> {
    (0..m.width()).map(|i| (0..m.n).map(|j| crate::poly::substitute(f, m.alpha(i, j), g)).collect()).collect()
}

/// [`minor_gcd_degree`] of α on the line through `p` and `q`.
pub fn line_minor_gcd<F: Field>(f: &F, m: &Monad<F::Elem>, p: &[F::Elem; 3], q: &[F::Elem; 3]) -> Option<usize> {
    let g: [BForm<F::Elem>; 3] = core::array::from_fn(|i| BForm::new(vec![p[i].clone(), q[i].clone()]));
    minor_gcd_degree(f, &pull_back_alpha(f, m, &g))
}

fn random_point<F: Field, R: rand::Rng + ?Sized>(f: &F, rng: &mut R) -> [F::Elem; 3] {
    core::array::from_fn(|_| f.sample(rng, 50))
}

/// Validity checks on a monad; reproducible from `(monad, seed)`.
pub fn validate<F: Field>(f: &F, m: &Monad<F::Elem>, trials: usize, seed: u64) -> ValidityReport {
    validate_with(f, m, trials, seed, DEFAULT_CEILING)
}

/// [`validate`] with an explicit truncation ceiling for the `h^0` checks.
pub fn validate_with<F: Field>(f: &F, m: &Monad<F::Elem>, trials: usize, seed: u64, ceiling: i32) -> ValidityReport {
    let beta_alpha_zero = m.beta_alpha(f).iter().flatten().all(|q| q.is_zero());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gcd_degrees = Vec::with_capacity(trials);
    for _ in 0..trials {
        let p = random_point(f, &mut rng);
        let q = random_point(f, &mut rng);
        gcd_degrees.push(line_minor_gcd(f, m, &p, &q).unwrap_or(usize::MAX));
    }
    let pointwise_exactness = gcd_degrees.iter().all(|&d| d == 0);
    let (h0_f, h0_f1) = if beta_alpha_zero {
        match m.complex(f) {
            Ok(c) => {
                let h = |c: &Complex<F::Elem>| stabilize(f, c, 0, 2, ceiling).ok().map(|s| s.dim());
                (h(&c), h(&c.twist(1)))
            }
            Err(_) => (None, None),
        }
    } else {
        (None, None)
    };
    ValidityReport { beta_alpha_zero, pointwise_exactness, lines_tested: trials, gcd_degrees, h0_f, h0_f1 }
}

/// Linear conditions on a column `c` (coordinates `c[j][i]` = coefficient of
/// `x_i` in row `j`) expressing `cᵀ J d = 0` as a quadric.
fn orthogonality_rows<F: Field>(f: &F, d: &[HPoly<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let w = d.len();
    // (Jd)_j
    let jd: Vec<[F::Elem; 3]> = (0..w)
        .map(|j| {
            let (src, neg) = if j % 2 == 0 { (j + 1, false) } else { (j - 1, true) };
            core::array::from_fn(|i| {
                let mut e = [0u32; 3];
                e[i] = 1;
                let c = d[src].coeff(f, e);
                if neg {
                    f.neg(&c)
                } else {
                    c
                }
            })
        })
        .collect();
    let mut rows = Vec::new();
    for a in 0..3 {
        for b in a..3 {
            let mut row = vec![f.zero(); 3 * w];
            for j in 0..w {
                row[3 * j + a] = f.add(&row[3 * j + a], &jd[j][b]);
                if a != b {
                    row[3 * j + b] = f.add(&row[3 * j + b], &jd[j][a]);
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Options for [`random_selfdual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenOptions {
    pub attempts: usize,
    /// Lines tested per candidate.
    pub trials: usize,
    /// Also require `H^0(F) = 0`. Ignored for `n = 1`, where no monad of this
    /// shape is stable.
    pub require_stable: bool,
    pub ceiling: i32,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { attempts: DEFAULT_ATTEMPTS, trials: 8, require_stable: true, ceiling: DEFAULT_CEILING }
    }
}

/// Random self-dual monad, deterministic in `seed`.
pub fn random_selfdual<F: Field>(f: &F, n: usize, seed: u64) -> Result<Monad<F::Elem>> {
    random_selfdual_with(f, n, seed, GenOptions::default())
}

pub fn random_selfdual_with<F: Field>(f: &F, n: usize, seed: u64, opts: GenOptions) -> Result<Monad<F::Elem>> {
    if n == 0 {
        return Err(Error::Shape("n must be at least 1".into()));
    }
    let w = 2 * n + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..opts.attempts {
        let mut cols: Vec<Vec<HPoly<F::Elem>>> = Vec::with_capacity(n);
        for _ in 0..n {
            let rows: Vec<Vec<F::Elem>> = cols.iter().flat_map(|d| orthogonality_rows(f, d)).collect();
            let v: Vec<F::Elem> = if rows.is_empty() {
                (0..3 * w).map(|_| f.sample(&mut rng, 2)).collect()
            } else {
                let a = Mat::from_fn(rows.len(), 3 * w, |i, j| rows[i][j].clone());
                let k = kernel_basis(f, &a);
                let mut v = vec![f.zero(); 3 * w];
                for c in 0..k.cols() {
                    let s = f.sample(&mut rng, 1);
                    for (i, slot) in v.iter_mut().enumerate() {
                        f.add_mul_assign(slot, &s, &k[(i, c)]);
                    }
                }
                v
            };
            let v = f.normalize(v);
            cols.push(
                (0..w)
                    .map(|j| HPoly::linear(f, &[v[3 * j].clone(), v[3 * j + 1].clone(), v[3 * j + 2].clone()]))
                    .collect(),
            );
        }
        let alpha: Vec<Vec<HPoly<F::Elem>>> = (0..w).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let m = Monad::new(n, alpha)?;
        let report = validate_with(f, &m, opts.trials, rand::Rng::gen(&mut rng), opts.ceiling);
        let ok = if opts.require_stable && n > 1 { report.is_stable() } else { report.is_monad() };
        if ok {
            return Ok(m);
        }
    }
    Err(Error::GenerationFailed(opts.attempts))
}
