//! Acceptance suite: every criterion on a fixed family of bundles over ℚ and
//! 𝔽_32003. Prints one PASS/FAIL line per criterion and exits nonzero if any
//! fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::thread;

use jumpcon_core::cech::{hypercohomology, line_cohomology, stabilize, Ambient, Cochain, Complex, Term};
use jumpcon_core::cohom::{
    build_tk, compute_spaces, cup_matrix, pairing_chain, pairing_chain_matrix, pairing_solve, scalar_multiple,
};
use jumpcon_core::field::{det, mat_vec, matmul, rank, Field, Mat, PrimeField, Rationals};
use jumpcon_core::monad::{random_selfdual, validate, DEFAULT_CEILING};
use jumpcon_core::poly::{conic_basis, HPoly};
use jumpcon_core::restrict::{
    find_jumping_conic, h0_fomega1_on_conic, h_table, implicitize, random_conic, splitting_conic, ConicCoeffs,
    ConicParam,
};
use jumpcon_core::skewnet::{net_from_parts, pfaffian_of, t_doubleprime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 32003;
const N2_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const N3_SEEDS: [u64; 2] = [1, 2];
const GENERIC_CONICS_Q: usize = 50;
const GENERIC_CONICS_FP: usize = 10;
const JUMPING_CONICS: usize = 10;
const SPOT_CHECKS: usize = 20;

const TITLES: [&str; 10] = [
    "dimension law dim E_-1 = dim E_1 = 2n, dim E_0 = 2n+2",
    "pairing exists, N_k skew, <e, t_q e> = 0",
    "Pfaffian homogeneous of degree n and nonzero",
    "generic rational conics: d = 0, Pf != 0, ker = 0",
    "conics on Pf = 0 over F_p: d >= 1, d = 1 gives ker = 2",
    "ker t_q = 2d = h0(F (x) Omega(1)|_q) at every sampled conic",
    "t'' rank 2n+2, skew, skew blocks, A_ij = A_ji",
    "h-tables coincide for d in {0, 1}, k in {-1, 0, 1}",
    "Cech engine dims, truncation stability, Euler characteristics",
    "chain-level pairing is a nonzero multiple of P, coboundary invariant",
];

/// Outcome of one criterion on one bundle; `None` when it does not apply.
type Verdicts = [Option<Result<(), String>>; 10];

struct Row {
    d: usize,
    ker: usize,
    h0_fomega1: usize,
    table: [[usize; 2]; 3],
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

fn combine<F: Field>(f: &F, ms: &[Mat<F::Elem>], q: &[F::Elem]) -> Mat<F::Elem> {
    let mut out = Mat::zeros(f, ms[0].rows(), ms[0].cols());
    for (m, c) in ms.iter().zip(q) {
        out = out.add(f, &m.scale(f, c));
    }
    out
}

fn add_cochain<F: Field>(f: &F, a: &Cochain<F::Elem>, b: &Cochain<F::Elem>) -> Cochain<F::Elem> {
    let mut out = a.clone();
    for (g, c) in b {
        let slot = out.entry(*g).or_insert_with(|| f.zero());
        *slot = f.add(slot, c);
        if f.is_zero(slot) {
            out.remove(g);
        }
    }
    out
}

fn restriction_row<F: Field>(
    f: &F,
    m: &jumpcon_core::monad::Monad<F::Elem>,
    net: &jumpcon_core::skewnet::SkewNet<F::Elem>,
    q: &ConicCoeffs<F::Elem>,
    nu: &ConicParam<F::Elem>,
) -> Result<Row, String> {
    let c = DEFAULT_CEILING;
    let mut table = [[0; 2]; 3];
    for (slot, k) in table.iter_mut().zip(-1..=1) {
        *slot = h_table(f, m, nu, k, c).map_err(|e| e.to_string())?;
    }
    Ok(Row {
        d: splitting_conic(f, m, nu, c).map_err(|e| e.to_string())?,
        ker: net.kernel_dim_at(f, &q.a),
        h0_fomega1: h0_fomega1_on_conic(f, m, nu, c).map_err(|e| e.to_string())?,
        table,
    })
}

fn evaluate<F: Field>(f: &F, n: usize, seed: u64) -> Verdicts {
    let mut v: Verdicts = Default::default();
    let tag = format!("{} n={n} seed={seed}", f.name());
    let m = match random_selfdual(f, n, seed) {
        Ok(m) => m,
        Err(e) => {
            v[0] = Some(Err(format!("{tag}: generation failed: {e}")));
            return v;
        }
    };
    let report = validate(f, &m, 8, seed);
    if !(report.is_monad() && report.is_stable()) {
        v[0] = Some(Err(format!("{tag}: generated monad fails validation: {report:?}")));
        return v;
    }

    // 1. dimensions against 2n, 2n+2, 2n
    let es = match compute_spaces(f, &m, DEFAULT_CEILING) {
        Ok(es) => es,
        Err(e) => {
            v[0] = Some(Err(format!("{tag}: {e}")));
            return v;
        }
    };
    let dims = es.dims();
    v[0] = Some(require(dims == [2 * n, 2 * n + 2, 2 * n], || format!("{tag}: dims {dims:?}")));

    // 9 (bundle part). the T_k complexes are stable under N -> N+1 and
    // their alternating dimension sums equal the Euler characteristics
    v[8] = Some((|| {
        for k in -1..=1 {
            let c = build_tk(f, &m, k).map_err(|e| e.to_string())?;
            let b = es.bound();
            let a = hypercohomology(f, &c, 0, b).map_err(|e| e.to_string())?;
            let a1 = hypercohomology(f, &c, 0, b + 1).map_err(|e| e.to_string())?;
            require(a.all_dims() == a1.all_dims(), || format!("{tag}: T_{k} unstable at {b}"))?;
            let alt: i64 =
                a1.all_dims().iter().map(|(t, d)| if t.rem_euclid(2) == 0 { *d as i64 } else { -(*d as i64) }).sum();
            require(alt == c.euler_characteristic(), || format!("{tag}: T_{k} chi {alt}"))?;
        }
        Ok(())
    })());

    // 2. pairing and skewness, with an independent spot check on t_q
    let ms: Vec<_> = match conic_basis()
        .iter()
        .map(|e| cup_matrix(f, &es.e_m1, &HPoly::monomial(f, *e), &es.e1))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(ms) => ms,
        Err(e) => {
            v[1] = Some(Err(format!("{tag}: cup product: {e}")));
            return v;
        }
    };
    let pairing = match pairing_solve(f, &ms) {
        Ok(p) => p,
        Err(e) => {
            v[1] = Some(Err(format!("{tag}: {e}")));
            return v;
        }
    };
    let nk: Vec<_> = ms.iter().map(|mk| matmul(f, &pairing.p, mk)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    v[1] = Some((|| {
        require(pairing.solution_dim >= 1, || format!("{tag}: empty solution space"))?;
        require(rank(f, &pairing.p) == 2 * n, || format!("{tag}: degenerate P"))?;
        require(nk.iter().all(|x| x.is_skew(f)), || format!("{tag}: some N_k is not skew"))?;
        for i in 0..SPOT_CHECKS {
            let q: Vec<_> = (0..6).map(|_| f.sample(&mut rng, 50)).collect();
            let e: Vec<_> = (0..2 * n).map(|_| f.sample(&mut rng, 50)).collect();
            let te = mat_vec(f, &combine(f, &ms, &q), &e);
            let value = dot(f, &e, &mat_vec(f, &pairing.p, &te));
            require(f.is_zero(&value), || format!("{tag}: <e, t_q e> = {value} at sample {i}"))?;
        }
        Ok(())
    })());

    // 3. Pfaffian; Pf^2 = det N_q is an independent check on the expansion
    let pf = pfaffian_of(f, &nk);
    v[2] = Some((|| {
        require(!pf.is_zero(), || format!("{tag}: Pf = 0"))?;
        require(pf.is_homogeneous() && pf.degree() as usize == n, || {
            format!("{tag}: Pf degree {} homogeneous {}", pf.degree(), pf.is_homogeneous())
        })?;
        for _ in 0..SPOT_CHECKS {
            let q: Vec<_> = (0..6).map(|_| f.sample(&mut rng, 50)).collect();
            let x = pf.eval(f, &q);
            require(f.mul(&x, &x) == det(f, &combine(f, &nk, &q)), || format!("{tag}: Pf^2 != det"))?;
        }
        Ok(())
    })());

    let net = match net_from_parts(f, n, ms.clone(), pairing.clone()) {
        Ok(net) => net,
        Err(e) => {
            v[1] = Some(Err(format!("{tag}: {e}")));
            return v;
        }
    };

    // 7. t''
    v[6] = Some(match t_doubleprime(f, &es, &net) {
        Ok(t) => require(t.all_hold(n), || {
            format!(
                "{tag}: rank {} via E0 {} skew {} blocks skew {} symmetric {} factorization {}",
                t.rank, t.rank_via_e0, t.skew, t.blocks_skew, t.blocks_symmetric, t.factorization_holds
            )
        }),
        Err(e) => Err(format!("{tag}: {e}")),
    });

    // 4, 5. conics on both sides
    let mut rows = Vec::new();
    let mut generic_ok = Ok(());
    let generic = if f.characteristic() == 0 { GENERIC_CONICS_Q } else { GENERIC_CONICS_FP };
    for i in 0..generic {
        let nu = random_conic(f, &mut rng, 100);
        let r = implicitize(f, &nu).map_err(|e| e.to_string()).and_then(|q| {
            let pf_q = pf.eval(f, &q.a);
            restriction_row(f, &m, &net, &q, &nu).map(|row| (row, pf_q))
        });
        match r {
            Ok((row, pf_q)) => {
                if generic_ok.is_ok() && (row.d != 0 || row.ker != 0 || f.is_zero(&pf_q)) {
                    generic_ok = Err(format!("{tag}: conic {i}: d {} ker {} Pf {pf_q}", row.d, row.ker));
                }
                rows.push(row);
            }
            Err(e) => {
                generic_ok = Err(format!("{tag}: conic {i}: {e}"));
                break;
            }
        }
    }
    if f.characteristic() == 0 {
        v[3] = Some(generic_ok);
    } else {
        let mut jump_ok = Ok(());
        for i in 0..JUMPING_CONICS {
            let r = find_jumping_conic(f, &pf, seed * 1000 + i as u64, 200)
                .map_err(|e| e.to_string())
                .and_then(|(q, nu)| restriction_row(f, &m, &net, &q, &nu));
            match r {
                Ok(row) => {
                    if jump_ok.is_ok() && (row.d == 0 || (row.d == 1 && row.ker != 2)) {
                        jump_ok = Err(format!("{tag}: jumping conic {i}: d {} ker {}", row.d, row.ker));
                    }
                    rows.push(row);
                }
                Err(e) => {
                    jump_ok = Err(format!("{tag}: jumping conic {i}: {e}"));
                    break;
                }
            }
        }
        v[4] = Some(jump_ok);
    }

    // 6. kernel law at every conic
    v[5] = Some(
        rows.iter()
            .find(|r| !(r.ker == 2 * r.d && r.h0_fomega1 == 2 * r.d))
            .map_or(Ok(()), |r| Err(format!("{tag}: ker {} d {} h0 {}", r.ker, r.d, r.h0_fomega1))),
    );

    // 8. h-tables; both kinds of conic are only available over F_p
    v[7] = Some((|| {
        let tables: Vec<_> = rows.iter().filter(|r| r.d <= 1).map(|r| (r.d, r.table)).collect();
        if f.characteristic() > 0 {
            require(tables.iter().any(|t| t.0 == 0) && tables.iter().any(|t| t.0 == 1), || {
                format!("{tag}: missing d = 0 or d = 1 conics")
            })?;
        }
        require(tables.windows(2).all(|w| w[0].1 == w[1].1), || format!("{tag}: h-tables differ: {tables:?}"))
    })());

    // 10. chain-level pairing
    v[9] = Some((|| {
        let chain = pairing_chain_matrix(f, &es).map_err(|e| format!("{tag}: {e}"))?;
        let lambda = scalar_multiple(f, &chain.p, &pairing.p).ok_or_else(|| format!("{tag}: not proportional"))?;
        require(!f.is_zero(&lambda), || format!("{tag}: zero multiple"))?;
        let (tu, tv) = (es.e_m1.space.total(), es.e1.space.total());
        let (du, dv) = (es.e_m1.space.degree() - 1, es.e1.space.degree() - 1);
        let (su, sv) = (tu.layout().size(du), tv.layout().size(dv));
        for i in 0..2 * n {
            let (u, w) = (&es.e_m1.space.reps()[i], &es.e1.space.reps()[(i + 1) % (2 * n)]);
            let base = pairing_chain(f, &es, u, w).map_err(|e| e.to_string())?;
            let bu: Cochain<F::Elem> = (0..20).map(|_| (rng.gen_range(0..su), f.sample(&mut rng, 9))).collect();
            let bv: Cochain<F::Elem> = (0..20).map(|_| (rng.gen_range(0..sv), f.sample(&mut rng, 9))).collect();
            let u2 = add_cochain(f, u, &tu.apply(f, du, &bu));
            let w2 = add_cochain(f, w, &tv.apply(f, dv, &bv));
            require(es.e_m1.space.is_cocycle(f, &u2) && es.e1.space.is_cocycle(f, &w2), || {
                format!("{tag}: perturbed representative is not a cocycle")
            })?;
            let moved = pairing_chain(f, &es, &u2, &w2).map_err(|e| e.to_string())?;
            require(moved == base, || format!("{tag}: pairing changed under coboundary"))?;
        }
        Ok(())
    })());
    v
}

fn binom2(n: i64) -> usize {
    if n < 2 {
        0
    } else {
        (n * (n - 1) / 2) as usize
    }
}

fn line_dims(d: i64) -> [usize; 3] {
    [if d >= 0 { binom2(d + 2) } else { 0 }, 0, if d <= -3 { binom2(-d - 1) } else { 0 }]
}

fn omega_dims(m: i64) -> [usize; 3] {
    let (a, b) = (line_dims(m - 1), line_dims(m));
    let h1 = usize::from(m == 0);
    [3 * a[0] + h1 - b[0], h1, 3 * a[2] - b[2]]
}

fn engine<F: Field>(f: &F) -> Result<(), String> {
    let name = f.name();
    for d in -6..=3 {
        let lc = line_cohomology(f, d, Ambient::P2, 6).map_err(|e| e.to_string())?;
        require(lc.dims == line_dims(d as i64), || format!("{name}: O({d}) dims {:?}", lc.dims))?;
    }
    for m in -3..=4 {
        let c = Complex::single(Ambient::P2, Term::omega(vec![m]));
        let mut dims = [0; 3];
        for (t, slot) in dims.iter_mut().enumerate() {
            *slot = stabilize(f, &c, t as i32, 2, DEFAULT_CEILING).map_err(|e| e.to_string())?.dim();
        }
        require(dims == omega_dims(m as i64), || format!("{name}: Omega({m}) dims {dims:?}"))?;
        let chi = dims[0] as i64 - dims[1] as i64 + dims[2] as i64;
        require(chi == c.euler_characteristic(), || format!("{name}: Omega({m}) chi {chi}"))?;
    }
    Ok(())
}

fn family<F: Field + 'static>(f: F) -> Vec<Verdicts> {
    let jobs: Vec<(usize, u64)> = N2_SEEDS.iter().map(|s| (2, *s)).chain(N3_SEEDS.iter().map(|s| (3, *s))).collect();
    thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(n, seed)| {
                let f = f.clone();
                scope.spawn(move || evaluate(&f, n, seed))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("bundle evaluation panicked")).collect()
    })
}

fn main() -> ExitCode {
    let fp = PrimeField::new(P).unwrap();
    let (q_results, fp_results) = thread::scope(|s| {
        let q = s.spawn(|| family(Rationals));
        let p = s.spawn(|| family(fp));
        (q.join().unwrap(), p.join().unwrap())
    });
    let all: Vec<_> = q_results.iter().chain(&fp_results).collect();
    let engine_result = engine(&Rationals).and_then(|_| engine(&fp));

    let mut failed = 0;
    let mut summary = BTreeMap::new();
    for (i, title) in TITLES.iter().enumerate() {
        let mut applied = 0;
        let mut err = None;
        for v in &all {
            if let Some(r) = &v[i] {
                applied += 1;
                if let (Err(e), None) = (r, &err) {
                    err = Some(e.clone());
                }
            } else if i < 3 && err.is_none() {
                err = Some("a bundle did not reach this check".into());
            }
        }
        if i == 8 {
            if let Err(e) = &engine_result {
                err.get_or_insert(e.clone());
            }
        }
        if applied == 0 {
            err.get_or_insert("no bundle reached this check".into());
        }
        let line = match &err {
            None => format!("criterion {:>2} PASS  {title} ({applied} bundles)", i + 1),
            Some(e) => {
                failed += 1;
                format!("criterion {:>2} FAIL  {title}: {e}", i + 1)
            }
        };
        summary.insert(i + 1, line);
    }
    for line in summary.values() {
        println!("{line}");
    }
    if failed == 0 {
        println!("acceptance: all {} criteria pass", TITLES.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria fail", TITLES.len());
        ExitCode::FAILURE
    }
}
