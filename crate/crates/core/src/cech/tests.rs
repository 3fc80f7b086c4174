use super::*;
use crate::field::{PrimeField, Rationals};
use crate::poly::Form;
use crate::poly::HPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// h^0, h^1, h^2 of O(d) on P² from the closed forms.
fn line_dims_p2(d: i64) -> [usize; 3] {
    let h0 = if d >= 0 { binom2(d + 2) } else { 0 };
    let h2 = if d <= -3 { binom2(-d - 1) } else { 0 };
    [h0 as usize, 0, h2 as usize]
}

/// h^i(Ω(m)) from the Euler sequence 0 → Ω(m) → O(m-1)^3 → O(m) → 0.
fn omega_dims(m: i64) -> [usize; 3] {
    let l = |d| line_dims_p2(d);
    let h0 = if m >= 1 { 3 * l(m - 1)[0] - l(m)[0] } else { 0 };
    let h1 = if m == 0 { 1 } else { 0 };
    let h2 = 3 * l(m - 1)[2] - l(m)[2];
    [h0, h1, h2]
}

fn euler_complex<F: Field>(f: &F) -> Complex<F::Elem> {
    let mut terms = BTreeMap::new();
    terms.insert(0, Term::line(vec![-1, -1, -1]));
    terms.insert(1, Term::line(vec![0]));
    let mut diffs = BTreeMap::new();
    diffs.insert(0, PolyMatrix::from_fn(1, 3, |_, j| HPoly::var(f, j).terms()));
    Complex::new(f, Ambient::P2, terms, diffs).unwrap()
}

#[test]
fn line_bundles_on_p2_match_binomials() {
    let f = PrimeField::new(32003).unwrap();
    for d in -6..=3 {
        let lc = line_cohomology(&f, d, Ambient::P2, 6).unwrap();
        assert_eq!(lc.dims, line_dims_p2(d as i64), "O({d})");
    }
    let q = Rationals;
    assert_eq!(line_cohomology(&q, 2, Ambient::P2, 3).unwrap().dims[0], 6);
}

#[test]
fn canonical_class_is_the_inverse_monomial() {
    let f = Rationals;
    let lc = line_cohomology(&f, -3, Ambient::P2, 3).unwrap();
    assert_eq!(lc.dims, [0, 0, 1]);
    let s = &lc.spaces[2];
    let data = s.total().chart_data(&f, 2, &s.reps()[0], 0);
    assert_eq!(data.len(), 1);
    let comp = &data[&(0, 0b111)][0];
    assert_eq!(comp.keys().copied().collect::<Vec<_>>(), vec![[-1, -1, -1]]);
    assert!(!f.is_zero(&h2_trace(&f, comp)));
}

#[test]
fn line_bundles_on_p1() {
    let f = Rationals;
    assert_eq!(line_cohomology(&f, -1, Ambient::P1, 4).unwrap().dims, [0, 0, 0]);
    assert_eq!(line_cohomology(&f, 3, Ambient::P1, 4).unwrap().dims, [4, 0, 0]);
    assert_eq!(line_cohomology(&f, -4, Ambient::P1, 4).unwrap().dims, [0, 3, 0]);
}

#[test]
fn omega_matches_euler_sequence() {
    let f = PrimeField::new(32003).unwrap();
    for m in -3..=4 {
        let c = Complex::single(Ambient::P2, Term::omega(vec![m]));
        let s = stabilize(&f, &c, 0, 2, 12).unwrap();
        let got: Vec<usize> = (0..3).map(|t| s.all_dims()[&t]).collect();
        assert_eq!(got, omega_dims(m as i64).to_vec(), "Ω({m})");
    }
}

#[test]
fn euler_complex_has_one_dimensional_h1() {
    let f = Rationals;
    let c = euler_complex(&f);
    assert_eq!(c.euler_characteristic(), -1);
    let s = stabilize(&f, &c, 1, 2, 10).unwrap();
    assert_eq!(s.dim(), 1);
    assert_eq!(s.all_dims().values().sum::<usize>(), 1);
}

#[test]
fn canonical_bundle_h2() {
    let f = Rationals;
    let c = Complex::single(Ambient::P2, Term::line(vec![-3]));
    assert_eq!(hypercohomology(&f, &c, 2, 4).unwrap().dim(), 1);
}

#[test]
fn non_complex_is_rejected() {
    let f = Rationals;
    let mut terms = BTreeMap::new();
    terms.insert(0, Term::line(vec![0]));
    terms.insert(1, Term::line(vec![1]));
    terms.insert(2, Term::line(vec![2]));
    let mut diffs = BTreeMap::new();
    diffs.insert(0, PolyMatrix::from_fn(1, 1, |_, _| HPoly::var(&f, 0).terms()));
    diffs.insert(1, PolyMatrix::from_fn(1, 1, |_, _| HPoly::var(&f, 1).terms()));
    assert_eq!(Complex::new(&f, Ambient::P2, terms, diffs), Err(Error::NotAComplex(0)));
}

#[test]
fn total_differential_squares_to_zero() {
    let f = PrimeField::new(101).unwrap();
    let mut c = euler_complex(&f);
    c = c.twist(1);
    let total = TotalComplex::new(&f, &c, 3);
    let (lo, hi) = total.layout().degree_range();
    for t in lo..hi {
        for g in 0..total.layout().size(t) {
            let d = total.differential(&f, t, g);
            assert!(total.apply(&f, t + 1, &d).is_empty());
        }
    }
    let om = Complex::single(Ambient::P2, Term::omega(vec![-1]));
    let total = TotalComplex::new(&f, &om, 3);
    for t in 0..2 {
        for g in 0..total.layout().size(t) {
            let d = total.differential(&f, t, g);
            assert!(total.apply(&f, t + 1, &d).is_empty());
        }
    }
}

#[test]
fn representatives_and_projection() {
    let f = PrimeField::new(32003).unwrap();
    let c = Complex::single(Ambient::P2, Term::omega(vec![-2]));
    let s = hypercohomology(&f, &c, 2, 3).unwrap();
    assert_eq!(s.dim(), 3);
    for (i, r) in s.reps().iter().enumerate() {
        assert!(s.is_cocycle(&f, r));
        let coords = s.project(&f, r);
        for (j, x) in coords.iter().enumerate() {
            assert_eq!(*x, if i == j { 1 } else { 0 });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n1 = s.total().layout().size(1);
    for _ in 0..5 {
        let mut z = BTreeMap::new();
        for _ in 0..10 {
            z.insert(rng.gen_range(0..n1), f.sample(&mut rng, 0));
        }
        z.retain(|_, v| *v != 0);
        let b = s.total().apply(&f, 1, &z);
        assert!(s.project(&f, &b).iter().all(|x| *x == 0));
    }
}

#[test]
fn dimensions_do_not_depend_on_truncation() {
    let f = PrimeField::new(32003).unwrap();
    let c = euler_complex(&f).twist(-1);
    let a = hypercohomology(&f, &c, 1, 3).unwrap();
    let b = hypercohomology(&f, &c, 1, 4).unwrap();
    assert_eq!(a.all_dims(), b.all_dims());
}

#[test]
fn trace_examples() {
    let f = Rationals;
    let mono = |e: Exps, c: i64| -> BTreeMap<Exps, _> { [(e, f.from_i64(c))].into_iter().collect() };
    assert_eq!(h2_trace(&f, &mono([-1, -1, -1], 1)), f.one());
    assert_eq!(h2_trace(&f, &mono([-2, 0, -1], 1)), f.zero());
    let mut m = mono([-1, -1, -1], 5);
    m.insert([-3, -1, 1], f.one());
    assert_eq!(h2_trace(&f, &m), f.from_i64(5));
}

#[test]
fn chi_formulas() {
    assert_eq!(chi_omega(0), -1);
    assert_eq!(chi_line(Ambient::P2, -3), 1);
    assert_eq!(chi_line(Ambient::P1, -3), -2);
}
