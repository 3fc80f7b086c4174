//! Reduction of a based cochain complex by repeated cancellation of pairs
//! `(a, b)` with `⟨d a, b⟩ ≠ 0`.
//!
//! Cancelling a pair replaces the complex by a smaller homotopy-equivalent
//! one. When no nonzero entry is left, the surviving generators of degree
//! `t` form a basis of `H^t`. For a tracked degree the cancellation log is
//! kept so that the composite inclusion (survivor → cocycle) and projection
//! (cocycle → class coordinates) can be replayed afterwards.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::field::Field;

pub type SparseVec<E> = Vec<(usize, E)>;

#[derive(Debug, Clone)]
pub(crate) enum Event<E> {
    /// `a` (tracked degree) cancelled against `b` one degree up; `row` holds the
    /// `b`-coefficients of the differentials of the other degree-`t` generators.
    Incl { a: usize, lambda_inv: E, row: SparseVec<E> },
    /// `b` (tracked degree) cancelled against `a` one degree down; `col` is `d a`.
    Proj { b: usize, lambda_inv: E, col: SparseVec<E> },
}

#[derive(Debug, Clone)]
pub(crate) struct Reduction<E> {
    /// Surviving generators per degree offset.
    pub survivors: Vec<Vec<usize>>,
    pub events: BTreeMap<usize, Vec<Event<E>>>,
}

struct Reducer<'a, F: Field> {
    f: &'a F,
    // cols[t][g]: d of generator g of degree t, sorted by target index
    cols: Vec<Vec<SparseVec<F::Elem>>>,
    // rows[t][b]: generators of degree t-1 whose differential hits b
    rows: Vec<Vec<BTreeSet<usize>>>,
    alive: Vec<Vec<bool>>,
    tracked: BTreeSet<usize>,
    events: BTreeMap<usize, Vec<Event<F::Elem>>>,
}

fn lookup<E>(v: &SparseVec<E>, idx: usize) -> Option<&E> {
    v.binary_search_by_key(&idx, |(i, _)| *i).ok().map(|k| &v[k].1)
}

impl<F: Field> Reducer<'_, F> {
    fn unit_like(&self, x: &F::Elem) -> bool {
        self.f.is_one(x) || self.f.is_one(&self.f.neg(x))
    }

    fn cancel(&mut self, t: usize, a: usize, b: usize) {
        let f = self.f;
        let col_a = core::mem::take(&mut self.cols[t][a]);
        let lambda = lookup(&col_a, b).expect("pivot entry present").clone();
        let lambda_inv = f.inv(&lambda).expect("pivot is nonzero");
        let row_b: Vec<usize> = self.rows[t + 1][b].iter().copied().filter(|&x| x != a).collect();

        if self.tracked.contains(&t) {
            let row = row_b.iter().map(|&x| (x, lookup(&self.cols[t][x], b).unwrap().clone())).collect();
            self.events.entry(t).or_default().push(Event::Incl { a, lambda_inv: lambda_inv.clone(), row });
        }
        if self.tracked.contains(&(t + 1)) {
            self.events.entry(t + 1).or_default().push(Event::Proj {
                b,
                lambda_inv: lambda_inv.clone(),
                col: col_a.clone(),
            });
        }

        for x in row_b {
            let old = core::mem::take(&mut self.cols[t][x]);
            let cx = lookup(&old, b).unwrap().clone();
            let factor = f.mul(&cx, &lambda_inv);
            let mut merged = Vec::with_capacity(old.len() + col_a.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < col_a.len() {
                let take_old = j == col_a.len() || (i < old.len() && old[i].0 < col_a[j].0);
                let take_new = i == old.len() || (j < col_a.len() && col_a[j].0 < old[i].0);
                if take_old {
                    merged.push(old[i].clone());
                    i += 1;
                } else if take_new {
                    let (y, v) = &col_a[j];
                    let mut e = f.zero();
                    f.sub_mul_assign(&mut e, &factor, v);
                    if !f.is_zero(&e) {
                        merged.push((*y, e));
                        self.rows[t + 1][*y].insert(x);
                    }
                    j += 1;
                } else {
                    let (y, v) = &col_a[j];
                    let mut e = old[i].1.clone();
                    f.sub_mul_assign(&mut e, &factor, v);
                    if f.is_zero(&e) {
                        self.rows[t + 1][*y].remove(&x);
                    } else {
                        merged.push((*y, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
            self.cols[t][x] = merged;
        }

        for (y, _) in &col_a {
            self.rows[t + 1][*y].remove(&a);
        }
        if t > 0 {
            let into_a = core::mem::take(&mut self.rows[t][a]);
            for w in into_a {
                let c = &mut self.cols[t - 1][w];
                if let Ok(k) = c.binary_search_by_key(&a, |(i, _)| *i) {
                    c.remove(k);
                }
            }
        }
        if t + 1 < self.cols.len() {
            let out_b = core::mem::take(&mut self.cols[t + 1][b]);
            for (z, _) in out_b {
                self.rows[t + 2][z].remove(&b);
            }
        }
        debug_assert!(self.rows[t + 1][b].is_empty());
        self.alive[t][a] = false;
        self.alive[t + 1][b] = false;
    }

    fn pick(&self, t: usize, a: usize) -> Option<(usize, usize)> {
        let col = &self.cols[t][a];
        if col.is_empty() {
            return None;
        }
        let mut best: Option<(usize, bool, usize)> = None;
        for (b, v) in col {
            let r = self.rows[t + 1][*b].len();
            let unit = self.unit_like(v);
            let better = match best {
                None => true,
                Some((br, bu, _)) => r < br || (r == br && unit && !bu),
            };
            if better {
                best = Some((r, unit, *b));
            }
        }
        let (r, _, b) = best.unwrap();
        Some(((col.len() - 1) * (r - 1), b))
    }
}

/// Reduces the complex with generator counts `sizes[t]` and differentials
/// `diffs[t]` (columns of `d: C^t → C^{t+1}`, one per generator of degree `t`).
pub(crate) fn reduce<F: Field>(
    f: &F,
    sizes: &[usize],
    diffs: Vec<Vec<SparseVec<F::Elem>>>,
    tracked: &[usize],
) -> Reduction<F::Elem> {
    let nd = sizes.len();
    assert_eq!(diffs.len() + 1, nd.max(1));
    let mut rows: Vec<Vec<BTreeSet<usize>>> = sizes.iter().map(|&s| alloc::vec![BTreeSet::new(); s]).collect();
    for (t, cols) in diffs.iter().enumerate() {
        assert_eq!(cols.len(), sizes[t]);
        for (g, col) in cols.iter().enumerate() {
            for (b, _) in col {
                rows[t + 1][*b].insert(g);
            }
        }
    }
    let mut r = Reducer {
        f,
        cols: diffs,
        rows,
        alive: sizes.iter().map(|&s| alloc::vec![true; s]).collect(),
        tracked: tracked.iter().copied().collect(),
        events: BTreeMap::new(),
    };

    const THRESHOLDS: [usize; 9] = [0, 1, 2, 4, 8, 16, 64, 256, usize::MAX];
    for theta in THRESHOLDS {
        loop {
            let mut progress = false;
            for t in 0..r.cols.len() {
                for a in 0..r.cols[t].len() {
                    if let Some((cost, b)) = r.pick(t, a) {
                        if cost <= theta {
                            r.cancel(t, a, b);
                            progress = true;
                        }
                    }
                }
            }
            if !progress {
                break;
            }
        }
    }
    debug_assert!(r.cols.iter().all(|c| c.iter().all(|v| v.is_empty())));

    let survivors =
        r.alive.iter().map(|al| al.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect()).collect();
    Reduction { survivors, events: r.events }
}

impl<E: Clone> Reduction<E> {
    /// Cocycle of the original complex representing survivor `g` of degree `t`.
    pub(crate) fn include<F: Field<Elem = E>>(&self, f: &F, t: usize, g: usize) -> BTreeMap<usize, E> {
        let mut v: BTreeMap<usize, E> = BTreeMap::new();
        v.insert(g, f.one());
        if let Some(events) = self.events.get(&t) {
            for ev in events.iter().rev() {
                if let Event::Incl { a, lambda_inv, row } = ev {
                    let mut c = f.zero();
                    for (x, cx) in row {
                        if let Some(vx) = v.get(x) {
                            f.add_mul_assign(&mut c, vx, cx);
                        }
                    }
                    if !f.is_zero(&c) {
                        let mut e = v.remove(a).unwrap_or_else(|| f.zero());
                        f.sub_mul_assign(&mut e, &c, lambda_inv);
                        if !f.is_zero(&e) {
                            v.insert(*a, e);
                        }
                    }
                }
            }
        }
        v
    }

    /// Image of a degree-`t` cochain in the reduced complex, as a map on
    /// surviving generators.
    pub(crate) fn project<F: Field<Elem = E>>(&self, f: &F, t: usize, y: &BTreeMap<usize, E>) -> BTreeMap<usize, E> {
        let mut y = y.clone();
        if let Some(events) = self.events.get(&t) {
            for ev in events {
                match ev {
                    Event::Incl { a, .. } => {
                        y.remove(a);
                    }
                    Event::Proj { b, lambda_inv, col } => {
                        let Some(yb) = y.remove(b) else { continue };
                        let factor = f.mul(&yb, lambda_inv);
                        for (z, v) in col {
                            if z == b {
                                continue;
                            }
                            let mut e = y.remove(z).unwrap_or_else(|| f.zero());
                            f.sub_mul_assign(&mut e, &factor, v);
                            if !f.is_zero(&e) {
                                y.insert(*z, e);
                            }
                        }
                    }
                }
            }
        }
        y
    }
}
