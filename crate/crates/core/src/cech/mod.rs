//! Čech cohomology and hypercohomology on P¹ and P² with the standard affine
//! covers.
//!
//! A [`Complex`] is a bounded complex whose terms are sums of line bundles
//! `O(d)` or of twisted cotangent sheaves `Ω(m)`, with polynomial matrices as
//! differentials. `Ω(m)` is modelled on every chart intersection as the
//! triples `(f0, f1, f2)` of Laurent sections of `O(m-1)` with
//! `Σ x_i f_i = 0`.
//!
//! Sections on the chart intersection `U_I` are truncated: a cochain is
//! supported on multidegrees `a` (the monomial itself for `O(d)`, the common
//! value of `exps(f_i) + e_i` for `Ω(m)`) with `a_i ≥ -N` for inverted `i`.
//! Each multidegree spans a subcomplex of the Čech complex of a single term
//! and multiplication by polynomials never lowers exponents, so the
//! truncation is a subcomplex of the total complex. Once `N` covers every
//! multidegree that carries cohomology of a single term the truncated
//! hypercohomology is exact; [`stabilize`] checks this empirically.
//!
//! Signs: the Čech differential on `I = (i_0 < … < i_c)` uses `(-1)^j` on the
//! omitted index `i_j`; the total differential is `δ_term + (-1)^p δ_Čech` on
//! the term of degree `p`.

mod reduce;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::field::{kernel_basis, Field, Mat};
pub use crate::poly::Ambient;
use crate::poly::{Exps, LMonSpace, Terms};
use crate::{Error, Result};

use reduce::{reduce, Reduction, SparseVec};

/// A sparse cochain of the total complex: generator index → coefficient.
pub type Cochain<E> = BTreeMap<usize, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    /// `⊕ O(d_s)`
    Line,
    /// `⊕ Ω(m_s)` through the Euler kernel model; P² only.
    Omega,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub kind: TermKind,
    pub twists: Vec<i32>,
}

impl Term {
    pub fn line(twists: Vec<i32>) -> Self {
        Term { kind: TermKind::Line, twists }
    }

    pub fn omega(twists: Vec<i32>) -> Self {
        Term { kind: TermKind::Omega, twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }
}

/// Matrix of polynomials; entry `(i, j)` maps source summand `j` to target
/// summand `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<Terms<E>>,
}

impl<E: Clone> PolyMatrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Terms<E>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Terms<E> {
        &self.entries[i * self.cols + j]
    }

    pub fn map<T>(&self, mut f: impl FnMut(&Terms<E>) -> Terms<T>) -> PolyMatrix<T> {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(&mut f).collect() }
    }
}

fn poly_mul<F: Field>(f: &F, a: &Terms<F::Elem>, b: &Terms<F::Elem>, acc: &mut BTreeMap<Exps, F::Elem>) {
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let slot = acc.entry(e).or_insert_with(|| f.zero());
            f.add_mul_assign(slot, ca, cb);
        }
    }
}

/// A bounded complex of sheaves on P¹ or P².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex<E> {
    ambient: Ambient,
    terms: BTreeMap<i32, Term>,
    diffs: BTreeMap<i32, PolyMatrix<E>>,
}

impl<E: Clone> Complex<E> {
    /// Validates shapes, entry degrees and `d∘d = 0`.
    pub fn new<F: Field<Elem = E>>(
        f: &F,
        ambient: Ambient,
        terms: BTreeMap<i32, Term>,
        diffs: BTreeMap<i32, PolyMatrix<E>>,
    ) -> Result<Self> {
        let nv = ambient.nvars();
        for t in terms.values() {
            if t.kind == TermKind::Omega && ambient != Ambient::P2 {
                return Err(Error::Shape("Ω terms are only modelled on P²".into()));
            }
        }
        for (p, d) in &diffs {
            let (Some(src), Some(dst)) = (terms.get(p), terms.get(&(p + 1))) else {
                return Err(Error::Shape(format!("differential at {p} without both terms")));
            };
            if src.kind != dst.kind {
                return Err(Error::Shape(format!("differential at {p} mixes term kinds")));
            }
            if d.rows != dst.rank() || d.cols != src.rank() {
                return Err(Error::Shape(format!("differential at {p} has the wrong size")));
            }
            for i in 0..d.rows {
                for j in 0..d.cols {
                    let deg = dst.twists[i] - src.twists[j];
                    for (e, _) in d.get(i, j) {
                        let ok = e.iter().take(nv).all(|&x| x >= 0)
                            && e.iter().skip(nv).all(|&x| x == 0)
                            && e.iter().sum::<i32>() == deg;
                        if !ok {
                            return Err(Error::Shape(format!(
                                "entry ({i},{j}) of the differential at {p} has monomial {e:?}, expected degree {deg}"
                            )));
                        }
                    }
                }
            }
        }
        let c = Complex { ambient, terms, diffs };
        for (p, d0) in &c.diffs {
            let Some(d1) = c.diffs.get(&(p + 1)) else { continue };
            for i in 0..d1.rows {
                for k in 0..d0.cols {
                    let mut acc = BTreeMap::new();
                    for j in 0..d0.rows {
                        poly_mul(f, d1.get(i, j), d0.get(j, k), &mut acc);
                    }
                    if acc.values().any(|v| !f.is_zero(v)) {
                        return Err(Error::NotAComplex(*p));
                    }
                }
            }
        }
        Ok(c)
    }

    /// A single sheaf placed in degree 0.
    pub fn single(ambient: Ambient, term: Term) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, term);
        Complex { ambient, terms, diffs: BTreeMap::new() }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn terms(&self) -> &BTreeMap<i32, Term> {
        &self.terms
    }

    pub fn differential(&self, p: i32) -> Option<&PolyMatrix<E>> {
        self.diffs.get(&p)
    }

    /// The same complex tensored with `O(d)`.
    pub fn twist(&self, d: i32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(p, t)| (*p, Term { kind: t.kind, twists: t.twists.iter().map(|x| x + d).collect() }))
            .collect();
        Complex { ambient: self.ambient, terms, diffs: self.diffs.clone() }
    }

    /// Total complex of the tensor product of two complexes of line bundles,
    /// with `d(x⊗y) = dx⊗y + (-1)^p x⊗dy`. Summands of degree `r` are ordered
    /// by `p`, then by the summand of `self`, then by the summand of `other`.
    pub fn tensor<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient
            || self.terms.values().chain(other.terms.values()).any(|t| t.kind != TermKind::Line)
        {
            return Err(Error::Shape("tensor products need line-bundle complexes on one space".into()));
        }
        // layout[r] = list of (p, s, e, s2)
        let mut layout: BTreeMap<i32, Vec<(i32, usize, i32, usize)>> = BTreeMap::new();
        for (p, t) in &self.terms {
            for (e, u) in &other.terms {
                let slot = layout.entry(p + e).or_default();
                for s in 0..t.rank() {
                    for s2 in 0..u.rank() {
                        slot.push((*p, s, *e, s2));
                    }
                }
            }
        }
        for v in layout.values_mut() {
            v.sort();
        }
        let mut terms = BTreeMap::new();
        for (r, v) in &layout {
            let tw = v.iter().map(|&(p, s, e, s2)| self.terms[&p].twists[s] + other.terms[&e].twists[s2]).collect();
            terms.insert(*r, Term::line(tw));
        }
        let mut diffs = BTreeMap::new();
        for (r, src) in &layout {
            let Some(dst) = layout.get(&(r + 1)) else { continue };
            let m = PolyMatrix::from_fn(dst.len(), src.len(), |i, j| {
                let (p1, s1, e1, t1) = dst[i];
                let (p0, s0, e0, t0) = src[j];
                if e1 == e0 && t1 == t0 && p1 == p0 + 1 {
                    self.diffs.get(&p0).map(|d| d.get(s1, s0).clone()).unwrap_or_default()
                } else if p1 == p0 && s1 == s0 && e1 == e0 + 1 {
                    let sign = if p0.rem_euclid(2) == 0 { f.one() } else { f.neg(&f.one()) };
                    other
                        .diffs
                        .get(&e0)
                        .map(|d| d.get(t1, t0).iter().map(|(x, c)| (*x, f.mul(c, &sign))).collect())
                        .unwrap_or_default()
                } else {
                    Vec::new()
                }
            });
            diffs.insert(*r, m);
        }
        Complex::new(f, self.ambient, terms, diffs)
    }

    /// Largest absolute twist of any summand; for `Ω(m)` the components'
    /// twist `m - 1` counts too.
    pub fn max_abs_twist(&self) -> i32 {
        self.terms
            .values()
            .flat_map(|t| {
                t.twists.iter().map(move |&d| match t.kind {
                    TermKind::Line => d.abs(),
                    TermKind::Omega => d.abs().max((d - 1).abs()),
                })
            })
            .max()
            .unwrap_or(0)
    }

    /// Euler characteristic `Σ_p (-1)^p Σ_s χ(summand)`.
    pub fn euler_characteristic(&self) -> i64 {
        self.terms
            .iter()
            .map(|(p, t)| {
                let s: i64 = t
                    .twists
                    .iter()
                    .map(|&d| match t.kind {
                        TermKind::Line => chi_line(self.ambient, d),
                        TermKind::Omega => chi_omega(d),
                    })
                    .sum();
                if p.rem_euclid(2) == 0 {
                    s
                } else {
                    -s
                }
            })
            .sum()
    }
}

/// `χ(O(d))`
pub fn chi_line(ambient: Ambient, d: i32) -> i64 {
    let d = d as i64;
    match ambient {
        Ambient::P1 => d + 1,
        Ambient::P2 => (d + 1) * (d + 2) / 2,
    }
}

/// `χ(Ω(m)) = 3χ(O(m-1)) - χ(O(m))` on P².
pub fn chi_omega(m: i32) -> i64 {
    3 * chi_line(Ambient::P2, m - 1) - chi_line(Ambient::P2, m)
}

/// Nonempty chart subsets (bit masks) with `size` elements, in increasing
/// numeric order.
fn chart_sets(ambient: Ambient, size: usize) -> Vec<u8> {
    let n = ambient.nvars();
    (1u8..(1 << n)).filter(|m| m.count_ones() as usize == size).collect()
}

/// Kernel of `Σ x_i f_i` on one multidegree: allowed components and the
/// resulting basis (ambient triples).
#[derive(Debug, Clone)]
struct Fiber<E> {
    /// free components; coordinates of a kernel vector are its values here
    free: Vec<usize>,
    basis: Vec<[E; 3]>,
}

fn fiber_table<F: Field>(f: &F) -> Vec<Fiber<F::Elem>> {
    (0u8..8)
        .map(|mask| {
            let comps: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
            if comps.is_empty() {
                return Fiber { free: Vec::new(), basis: Vec::new() };
            }
            let ones = Mat::filled(1, comps.len(), f.one());
            let k = kernel_basis(f, &ones);
            // the first component is the pivot, the others are free
            let free: Vec<usize> = comps[1..].to_vec();
            let basis: Vec<[F::Elem; 3]> = (0..k.cols())
                .map(|j| {
                    let mut v = [f.zero(), f.zero(), f.zero()];
                    for (r, &c) in comps.iter().enumerate() {
                        v[c] = k[(r, j)].clone();
                    }
                    v
                })
                .collect();
            debug_assert!(free.iter().enumerate().all(|(j, &c)| f.is_one(&basis[j][c])));
            Fiber { free, basis }
        })
        .collect()
}

/// Components of an `Ω` triple of multidegree `a` that are sections over
/// the chart intersection `charts`.
fn allowed_mask(charts: u8, a: &Exps) -> u8 {
    let mut m = charts;
    for j in 0..3 {
        if charts & (1 << j) == 0 && a[j] >= 1 {
            m |= 1 << j;
        }
    }
    m
}

#[derive(Debug, Clone)]
struct Block {
    p: i32,
    summand: usize,
    charts: u8,
    kind: TermKind,
    space: LMonSpace,
    /// generator offsets per multidegree (length `space.dim() + 1`)
    offsets: Vec<usize>,
    start: usize,
}

impl Block {
    fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }
}

/// Decoded generator of the total complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenInfo {
    pub p: i32,
    pub summand: usize,
    pub charts: u8,
    /// monomial (line) or multidegree (Ω)
    pub multideg: Exps,
    /// free component of the kernel basis (Ω only)
    pub comp: Option<usize>,
}

#[derive(Debug, Clone)]
struct DegreeLayout {
    blocks: Vec<Block>,
    index: BTreeMap<(i32, usize, u8), usize>,
    size: usize,
}

/// Generator bookkeeping of a truncated total complex.
#[derive(Debug, Clone)]
pub struct Layout {
    ambient: Ambient,
    bound: i32,
    lo: i32,
    degrees: Vec<DegreeLayout>,
}

impl Layout {
    pub fn new<E>(c: &Complex<E>, bound: i32) -> Self {
        let nv = c.ambient.nvars();
        let pmin = *c.terms.keys().next().unwrap_or(&0);
        let pmax = *c.terms.keys().last().unwrap_or(&0);
        let lo = pmin;
        let hi = pmax + nv as i32 - 1;
        let mut degrees = Vec::new();
        for t in lo..=hi {
            let mut blocks = Vec::new();
            let mut index = BTreeMap::new();
            let mut start = 0;
            for (p, term) in &c.terms {
                let q = t - p;
                if q < 0 || q >= nv as i32 {
                    continue;
                }
                for (s, &tw) in term.twists.iter().enumerate() {
                    for charts in chart_sets(c.ambient, q as usize + 1) {
                        let space = LMonSpace::new(c.ambient, charts, tw, bound);
                        let mut offsets = Vec::with_capacity(space.dim() + 1);
                        let mut acc = 0;
                        offsets.push(0);
                        for a in space.basis() {
                            acc += match term.kind {
                                TermKind::Line => 1,
                                TermKind::Omega => allowed_mask(charts, a).count_ones() as usize - 1,
                            };
                            offsets.push(acc);
                        }
                        index.insert((*p, s, charts), blocks.len());
                        let b = Block { p: *p, summand: s, charts, kind: term.kind, space, offsets, start };
                        start += b.len();
                        blocks.push(b);
                    }
                }
            }
            degrees.push(DegreeLayout { blocks, index, size: start });
        }
        Layout { ambient: c.ambient, bound, lo, degrees }
    }

    pub fn bound(&self) -> i32 {
        self.bound
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    /// Total degrees covered, inclusive.
    pub fn degree_range(&self) -> (i32, i32) {
        (self.lo, self.lo + self.degrees.len() as i32 - 1)
    }

    pub fn size(&self, t: i32) -> usize {
        self.slot(t).map(|d| d.size).unwrap_or(0)
    }

    fn slot(&self, t: i32) -> Option<&DegreeLayout> {
        let k = t - self.lo;
        if k < 0 {
            None
        } else {
            self.degrees.get(k as usize)
        }
    }

    fn locate(&self, t: i32, idx: usize) -> (&Block, usize, usize) {
        let d = self.slot(t).expect("degree in range");
        let bi = d.blocks.partition_point(|b| b.start <= idx) - 1;
        let b = &d.blocks[bi];
        let local = idx - b.start;
        let mi = b.offsets.partition_point(|&o| o <= local) - 1;
        (b, mi, local - b.offsets[mi])
    }

    pub fn decode(&self, t: i32, idx: usize) -> GenInfo {
        let (b, mi, j) = self.locate(t, idx);
        let a = b.space.basis()[mi];
        let comp = match b.kind {
            TermKind::Line => None,
            TermKind::Omega => {
                let mask = allowed_mask(b.charts, &a);
                let comps: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
                Some(comps[j + 1])
            }
        };
        GenInfo { p: b.p, summand: b.summand, charts: b.charts, multideg: a, comp }
    }

    /// Adds `coef · v` (an element of one multidegree, given as a scalar for
    /// line bundles or an ambient triple for Ω) to the cochain `out`.
    /// Returns `false` when the multidegree is not in the truncated space.
    fn add_element<F: Field>(
        &self,
        f: &F,
        fibers: &[Fiber<F::Elem>],
        t: i32,
        key: (i32, usize, u8),
        a: &Exps,
        v: &[F::Elem],
        coef: &F::Elem,
        out: &mut BTreeMap<usize, F::Elem>,
    ) -> bool {
        let Some(d) = self.slot(t) else { return false };
        let Some(&bi) = d.index.get(&key) else { return false };
        let b = &d.blocks[bi];
        let Some(mi) = b.space.index_of(a) else { return false };
        let base = b.start + b.offsets[mi];
        let mut push = |idx: usize, x: &F::Elem| {
            if f.is_zero(x) {
                return;
            }
            let slot = out.entry(idx).or_insert_with(|| f.zero());
            f.add_mul_assign(slot, coef, x);
            if f.is_zero(slot) {
                out.remove(&idx);
            }
        };
        match b.kind {
            TermKind::Line => push(base, &v[0]),
            TermKind::Omega => {
                let fib = &fibers[allowed_mask(b.charts, a) as usize];
                for (j, &c) in fib.free.iter().enumerate() {
                    push(base + j, &v[c]);
                }
            }
        }
        true
    }

    /// The element carried by generator `idx`: a scalar (line) or an ambient
    /// triple (Ω), together with its multidegree.
    fn element<F: Field>(&self, f: &F, fibers: &[Fiber<F::Elem>], t: i32, idx: usize) -> (GenInfo, Vec<F::Elem>) {
        let (b, mi, j) = self.locate(t, idx);
        let info = self.decode(t, idx);
        let v = match b.kind {
            TermKind::Line => vec![f.one()],
            TermKind::Omega => {
                let a = b.space.basis()[mi];
                fibers[allowed_mask(b.charts, &a) as usize].basis[j].to_vec()
            }
        };
        (info, v)
    }
}

fn sign<F: Field>(f: &F, odd: bool) -> F::Elem {
    if odd {
        f.neg(&f.one())
    } else {
        f.one()
    }
}

/// Assembled truncated total complex.
#[derive(Debug, Clone)]
pub struct TotalComplex<E> {
    complex: Complex<E>,
    layout: Layout,
    fibers: Vec<Fiber<E>>,
}

impl<E: Clone> TotalComplex<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, complex: &Complex<E>, bound: i32) -> Self {
        TotalComplex { complex: complex.clone(), layout: Layout::new(complex, bound), fibers: fiber_table(f) }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn complex(&self) -> &Complex<E> {
        &self.complex
    }

    /// Total differential of one generator of degree `t`.
    pub fn differential<F: Field<Elem = E>>(&self, f: &F, t: i32, idx: usize) -> Cochain<E> {
        let (info, v) = self.layout.element(f, &self.fibers, t, idx);
        let mut out = BTreeMap::new();
        let nv = self.layout.ambient.nvars();
        // Čech part
        let tsign = info.p.rem_euclid(2) == 1;
        for i in 0..nv {
            if info.charts & (1 << i) != 0 {
                continue;
            }
            let j = info.charts | (1 << i);
            let pos = (j & ((1 << i) - 1)).count_ones() as usize;
            let s = sign(f, (pos % 2 == 1) ^ tsign);
            let ok = self.layout.add_element(
                f,
                &self.fibers,
                t + 1,
                (info.p, info.summand, j),
                &info.multideg,
                &v,
                &s,
                &mut out,
            );
            debug_assert!(ok, "restriction stays inside the truncation");
        }
        // term differential
        if let Some(d) = self.complex.diffs.get(&info.p) {
            for target in 0..d.rows() {
                for (e, c) in d.get(target, info.summand) {
                    let a = [info.multideg[0] + e[0], info.multideg[1] + e[1], info.multideg[2] + e[2]];
                    let ok = self.layout.add_element(
                        f,
                        &self.fibers,
                        t + 1,
                        (info.p + 1, target, info.charts),
                        &a,
                        &v,
                        c,
                        &mut out,
                    );
                    debug_assert!(ok, "multiplication stays inside the truncation");
                }
            }
        }
        out
    }

    /// Total differential applied to a cochain.
    pub fn apply<F: Field<Elem = E>>(&self, f: &F, t: i32, x: &Cochain<E>) -> Cochain<E> {
        let mut out: Cochain<E> = BTreeMap::new();
        for (g, c) in x {
            for (h, v) in self.differential(f, t, *g) {
                let slot = out.entry(h).or_insert_with(|| f.zero());
                f.add_mul_assign(slot, c, &v);
                if f.is_zero(slot) {
                    out.remove(&h);
                }
            }
        }
        out
    }

    fn columns<F: Field<Elem = E>>(&self, f: &F, t: i32) -> Vec<SparseVec<E>> {
        (0..self.layout.size(t)).map(|g| self.differential(f, t, g).into_iter().collect()).collect()
    }

    /// Multiplies a degree-`t` cochain of this complex by a form, landing in
    /// `target`, whose terms must have the same shape with twists raised by
    /// the degree of the form.
    pub fn multiply<F: Field<Elem = E>>(
        &self,
        f: &F,
        t: i32,
        x: &Cochain<E>,
        form: &Terms<E>,
        target: &TotalComplex<E>,
    ) -> Result<Cochain<E>> {
        let mut out = BTreeMap::new();
        for (g, c) in x {
            let (info, v) = self.layout.element(f, &self.fibers, t, *g);
            for (e, fc) in form {
                let a = [info.multideg[0] + e[0], info.multideg[1] + e[1], info.multideg[2] + e[2]];
                let coef = f.mul(c, fc);
                if !target.layout.add_element(
                    f,
                    &target.fibers,
                    t,
                    (info.p, info.summand, info.charts),
                    &a,
                    &v,
                    &coef,
                    &mut out,
                ) {
                    return Err(Error::TruncationOverflow(1));
                }
            }
        }
        Ok(out)
    }

    /// Laurent data of a cochain on one term: for every `(summand, charts)`
    /// the components `(monomial exponents → coefficient)` of its line-bundle
    /// value (component 0) or of its Ω triple (components 0..3).
    pub fn chart_data<F: Field<Elem = E>>(
        &self,
        f: &F,
        t: i32,
        x: &Cochain<E>,
        p: i32,
    ) -> BTreeMap<(usize, u8), [BTreeMap<Exps, E>; 3]> {
        let mut out: BTreeMap<(usize, u8), [BTreeMap<Exps, E>; 3]> = BTreeMap::new();
        for (g, c) in x {
            let (info, v) = self.layout.element(f, &self.fibers, t, *g);
            if info.p != p {
                continue;
            }
            let slot = out.entry((info.summand, info.charts)).or_default();
            for (i, vi) in v.iter().enumerate() {
                if f.is_zero(vi) {
                    continue;
                }
                let mut e = info.multideg;
                if v.len() == 3 {
                    e[i] -= 1;
                }
                let s = slot[i].entry(e).or_insert_with(|| f.zero());
                f.add_mul_assign(s, c, vi);
                if f.is_zero(s) {
                    slot[i].remove(&e);
                }
            }
        }
        out
    }
}

/// A hypercohomology space `ℍ^m` with cocycle representatives and a
/// projection from cocycles to class coordinates.
#[derive(Debug, Clone)]
pub struct CohSpace<E> {
    degree: i32,
    total: TotalComplex<E>,
    reps: Vec<Cochain<E>>,
    survivors: Vec<usize>,
    reduction: Reduction<E>,
    all_dims: BTreeMap<i32, usize>,
}

impl<E: Clone> CohSpace<E> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn truncation(&self) -> i32 {
        self.total.layout.bound
    }

    pub fn reps(&self) -> &[Cochain<E>] {
        &self.reps
    }

    pub fn total(&self) -> &TotalComplex<E> {
        &self.total
    }

    /// Dimensions of `ℍ^t` for every degree of the total complex.
    pub fn all_dims(&self) -> &BTreeMap<i32, usize> {
        &self.all_dims
    }

    /// Coordinates of the class of a cocycle in the basis [`Self::reps`].
    /// The input must be a cocycle; coboundaries map to zero.
    pub fn project<F: Field<Elem = E>>(&self, f: &F, x: &Cochain<E>) -> Vec<E> {
        let off = (self.degree - self.total.layout.lo) as usize;
        let y = self.reduction.project(f, off, x);
        self.survivors.iter().map(|s| y.get(s).cloned().unwrap_or_else(|| f.zero())).collect()
    }

    /// Cocycle with the given class coordinates.
    pub fn lift<F: Field<Elem = E>>(&self, f: &F, coords: &[E]) -> Cochain<E> {
        assert_eq!(coords.len(), self.dim());
        let mut out = BTreeMap::new();
        for (c, r) in coords.iter().zip(&self.reps) {
            if f.is_zero(c) {
                continue;
            }
            for (g, v) in r {
                let slot = out.entry(*g).or_insert_with(|| f.zero());
                f.add_mul_assign(slot, c, v);
                if f.is_zero(slot) {
                    out.remove(g);
                }
            }
        }
        out
    }

    pub fn is_cocycle<F: Field<Elem = E>>(&self, f: &F, x: &Cochain<E>) -> bool {
        self.total.apply(f, self.degree, x).is_empty()
    }
}

/// `ℍ^m` of the complex truncated at `bound`, together with every other
/// degree's dimension.
pub fn hypercohomology<F: Field>(f: &F, c: &Complex<F::Elem>, m: i32, bound: i32) -> Result<CohSpace<F::Elem>> {
    if bound < 1 {
        return Err(Error::Shape("truncation bound must be at least 1".into()));
    }
    let total = TotalComplex::new(f, c, bound);
    let (lo, hi) = total.layout.degree_range();
    let sizes: Vec<usize> = (lo..=hi).map(|t| total.layout.size(t)).collect();
    let diffs: Vec<Vec<SparseVec<F::Elem>>> = (lo..hi).map(|t| total.columns(f, t)).collect();
    let tracked: Vec<usize> = if m >= lo && m <= hi { vec![(m - lo) as usize] } else { Vec::new() };
    let reduction = reduce(f, &sizes, diffs, &tracked);
    let all_dims: BTreeMap<i32, usize> = (lo..=hi).map(|t| (t, reduction.survivors[(t - lo) as usize].len())).collect();
    let (survivors, reps) = if let Some(&off) = tracked.first() {
        let s = reduction.survivors[off].clone();
        let reps = s.iter().map(|&g| reduction.include(f, off, g)).collect();
        (s, reps)
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(CohSpace { degree: m, total, reps, survivors, reduction, all_dims })
}

/// Default truncation: `6 + max |twist|`.
pub fn default_bound<E: Clone>(c: &Complex<E>) -> i32 {
    6 + c.max_abs_twist()
}

/// Hypercohomology at increasing truncation until two consecutive bounds
/// agree on every dimension and the alternating sum of dimensions equals the
/// Euler characteristic. Starts at `start` and gives up above `ceiling`.
pub fn stabilize<F: Field>(f: &F, c: &Complex<F::Elem>, m: i32, start: i32, ceiling: i32) -> Result<CohSpace<F::Elem>> {
    let chi = c.euler_characteristic();
    let mut n = start.max(1);
    let mut prev = hypercohomology(f, c, m, n)?;
    while n < ceiling {
        let next = hypercohomology(f, c, m, n + 1)?;
        let alt: i64 =
            next.all_dims.iter().map(|(t, d)| if t.rem_euclid(2) == 0 { *d as i64 } else { -(*d as i64) }).sum();
        if prev.all_dims == next.all_dims && alt == chi {
            return Ok(prev);
        }
        prev = next;
        n += 1;
    }
    Err(Error::Unstable { ceiling })
}

/// Dimensions and representative cocycles of `H^0, H^1, H^2` of `O(d)`.
#[derive(Debug, Clone)]
pub struct LineCohomology<E> {
    pub dims: [usize; 3],
    pub spaces: Vec<CohSpace<E>>,
}

/// Čech cohomology of a single line bundle, checked for stability under
/// `bound → bound + 1`.
pub fn line_cohomology<F: Field>(f: &F, d: i32, ambient: Ambient, bound: i32) -> Result<LineCohomology<F::Elem>> {
    let c = Complex::single(ambient, Term::line(vec![d]));
    let nv = ambient.nvars();
    let mut dims = [0usize; 3];
    let mut spaces = Vec::new();
    for m in 0..nv as i32 {
        let s = hypercohomology(f, &c, m, bound)?;
        let s1 = hypercohomology(f, &c, m, bound + 1)?;
        if s.dim() != s1.dim() {
            return Err(Error::Unstable { ceiling: bound + 1 });
        }
        dims[m as usize] = s.dim();
        spaces.push(s);
    }
    Ok(LineCohomology { dims, spaces })
}

/// Coefficient of `x0^-1 x1^-1 x2^-1` in a Laurent polynomial on the triple
/// intersection; this identifies `H^2(O(-3))` with the field.
pub fn h2_trace<F: Field>(f: &F, cocycle: &BTreeMap<Exps, F::Elem>) -> F::Elem {
    cocycle.get(&[-1, -1, -1]).cloned().unwrap_or_else(|| f.zero())
}

#[cfg(test)]
mod tests;
