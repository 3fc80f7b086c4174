//! The pipelines behind the subcommands, generic over the field.

use jumpcon_core::cohom::{compute_spaces, pairing_chain_matrix, scalar_multiple, ESpaces};
use jumpcon_core::field::{det, mat_vec, Field};
use jumpcon_core::monad::{random_selfdual_with, validate_with, GenOptions, Monad};
use jumpcon_core::restrict::{
    find_jumping_conic, h0_fomega1_on_conic, h_table, implicitize, random_conic, splitting_conic, ConicCoeffs,
    ConicParam,
};
use jumpcon_core::skewnet::{build_net, pfaffian, t_doubleprime, PfPoly, SkewNet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::format::{bform_to_json, pfaffian_to_json, scalars, MonadFile, SampleRow};

/// Parameters shared by every command; all randomness derives from `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    pub trials: usize,
    pub count: usize,
    pub ceiling: i32,
    pub on_pfaffian: bool,
}

/// Coefficient bound for random conics over ℚ.
pub const CONIC_BOUND: i64 = 100;

/// Attempts allowed to the Pfaffian root search per conic.
pub const SEARCH_BUDGET: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct TheoremReport {
    pub field: String,
    pub n: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing_solution_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pf_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pfaffian: Option<Vec<([u8; 6], String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_doubleprime_rank: Option<usize>,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl TheoremReport {
    fn check(&mut self, name: &str, pass: bool, detail: Value) -> bool {
        self.checks.push(Check { name: name.into(), pass, detail });
        if !pass && self.first_failure.is_none() {
            self.first_failure = Some(name.into());
        }
        pass
    }

    fn finish(mut self) -> Self {
        self.passed = self.checks.iter().all(|c| c.pass);
        self
    }
}

pub fn gen<F: Field>(f: &F, n: usize, s: &Settings) -> jumpcon_core::Result<MonadFile> {
    let opts = GenOptions { trials: s.trials, ceiling: s.ceiling, ..GenOptions::default() };
    let m = random_selfdual_with(f, n, s.seed, opts)?;
    let report = validate_with(f, &m, s.trials, s.seed, s.ceiling);
    Ok(MonadFile::new(f, &m, Some(s.seed), Some(&report)))
}

/// The net, its Pfaffian and the spaces they came from.
pub struct Pipeline<E> {
    pub spaces: ESpaces<E>,
    pub net: SkewNet<E>,
    pub pf: PfPoly<E>,
}

pub fn pipeline<F: Field>(f: &F, m: &Monad<F::Elem>, ceiling: i32) -> jumpcon_core::Result<Pipeline<F::Elem>> {
    let spaces = compute_spaces(f, m, ceiling)?;
    let net = build_net(f, &spaces)?;
    let pf = pfaffian(f, &net)?;
    Ok(Pipeline { spaces, net, pf })
}

/// Restriction data of one conic, checked against the net.
pub fn conic_row<F: Field>(
    f: &F,
    m: &Monad<F::Elem>,
    p: &Pipeline<F::Elem>,
    index: usize,
    q: &ConicCoeffs<F::Elem>,
    nu: &ConicParam<F::Elem>,
    ceiling: i32,
) -> jumpcon_core::Result<SampleRow> {
    let mut h = [[0; 2]; 3];
    for (slot, k) in h.iter_mut().zip(-1..=1) {
        *slot = h_table(f, m, nu, k, ceiling)?;
    }
    Ok(SampleRow {
        index,
        nu: nu.nu().each_ref().map(bform_to_json::<F>),
        conic: scalars::<F>(&q.a),
        d: splitting_conic(f, m, nu, ceiling)?,
        ker_dim: p.net.kernel_dim_at(f, &q.a),
        pf_value: p.pf.eval(f, &q.a).to_string(),
        h_table: h,
        h0_fomega1: h0_fomega1_on_conic(f, m, nu, ceiling)?,
    })
}

/// `count` conic rows: random parametrized conics, or conics on `Pf = 0`
/// (prime fields only).
pub fn sample<F: Field>(
    f: &F,
    m: &Monad<F::Elem>,
    p: &Pipeline<F::Elem>,
    s: &Settings,
    on_pfaffian: bool,
) -> jumpcon_core::Result<Vec<SampleRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    (0..s.count)
        .map(|i| {
            let (q, nu) = if on_pfaffian {
                find_jumping_conic(f, &p.pf, s.seed.wrapping_add(i as u64), SEARCH_BUDGET)?
            } else {
                let nu = random_conic(f, &mut rng, CONIC_BOUND);
                (implicitize(f, &nu)?, nu)
            };
            conic_row(f, m, p, i, &q, &nu, s.ceiling)
        })
        .collect()
}

fn failure(e: &jumpcon_core::Error) -> Value {
    json!({ "error": e.to_string() })
}

/// The whole verification: validity, dimensions, pairing, skewness, the
/// Pfaffian, `t''`, the chain-level pairing and conic sampling.
pub fn verify_theorem1<F: Field>(f: &F, m: &Monad<F::Elem>, s: &Settings) -> TheoremReport {
    let n = m.n();
    let mut r = TheoremReport { field: f.name(), n, seed: s.seed, ..Default::default() };
    let v = validate_with(f, m, s.trials, s.seed, s.ceiling);
    let detail = serde_json::to_value(crate::format::ValidityJson::from(&v)).unwrap();
    if !r.check("validity", v.is_monad(), detail.clone()) {
        return r.finish();
    }
    if !r.check("hypotheses", n >= 2 && v.is_stable(), json!({ "n": n, "h0_F": v.h0_f, "h0_F1": v.h0_f1 })) {
        return r.finish();
    }
    let p = match pipeline(f, m, s.ceiling) {
        Ok(p) => p,
        Err(e) => {
            let name = match e {
                jumpcon_core::Error::DimensionMismatch { .. } | jumpcon_core::Error::Unstable { .. } => "dims",
                jumpcon_core::Error::NoPairing | jumpcon_core::Error::DegeneratePairing(_) => "pairing",
                jumpcon_core::Error::ZeroPfaffian => "pfaffian_nonzero",
                _ => "pipeline",
            };
            r.check(name, false, failure(&e));
            return r.finish();
        }
    };
    let dims = p.spaces.dims();
    r.dims = Some(dims);
    r.truncation = Some(p.spaces.bound());
    r.check("dims", dims == [2 * n, 2 * n + 2, 2 * n], json!(dims));
    r.pairing_solution_dim = Some(p.net.pairing.solution_dim);
    r.check(
        "pairing",
        jumpcon_core::field::rank(f, &p.net.pairing.p) == 2 * n,
        json!({ "solution_dim": p.net.pairing.solution_dim }),
    );
    r.check("net_skew", p.net.nk.iter().all(|x| x.is_skew(f)), Value::Null);

    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut skew_ok = true;
    let mut pf_det_ok = true;
    for _ in 0..20 {
        let q: Vec<F::Elem> = (0..6).map(|_| f.sample(&mut rng, 20)).collect();
        let e: Vec<F::Elem> = (0..2 * n).map(|_| f.sample(&mut rng, 20)).collect();
        let e2: Vec<F::Elem> = (0..2 * n).map(|_| f.sample(&mut rng, 20)).collect();
        let nq = p.net.n_q(f, &q);
        let pair = |a: &[F::Elem], b: &[F::Elem]| {
            a.iter().zip(mat_vec(f, &nq, b)).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, &y)))
        };
        skew_ok &= f.is_zero(&pair(&e, &e)) && f.is_zero(&f.add(&pair(&e, &e2), &pair(&e2, &e)));
        let v = p.pf.eval(f, &q);
        pf_det_ok &= f.mul(&v, &v) == det(f, &nq);
    }
    r.check("skewness_samples", skew_ok, json!({ "samples": 20 }));
    r.pf_degree = Some(p.pf.degree());
    r.pfaffian = Some(pfaffian_to_json::<F>(&p.pf));
    r.check(
        "pfaffian_degree",
        p.pf.degree() as usize == n && p.pf.is_homogeneous() && !p.pf.is_zero(),
        json!({ "pf_degree": p.pf.degree(), "terms": p.pf.terms().len() }),
    );
    r.check("pfaffian_squared_is_det", pf_det_ok, json!({ "samples": 20 }));

    match t_doubleprime(f, &p.spaces, &p.net) {
        Ok(t) => {
            r.t_doubleprime_rank = Some(t.rank);
            r.check(
                "t_doubleprime",
                t.all_hold(n),
                json!({
                    "rank": t.rank, "expected_rank": 2 * n + 2, "rank_via_e0": t.rank_via_e0,
                    "factorization": t.factorization_holds, "skew": t.skew,
                    "blocks_skew": t.blocks_skew, "blocks_symmetric": t.blocks_symmetric,
                }),
            );
        }
        Err(e) => {
            r.check("t_doubleprime", false, failure(&e));
        }
    }

    match pairing_chain_matrix(f, &p.spaces) {
        Ok(g) => {
            let lambda = scalar_multiple(f, &g.p, &p.net.pairing.p);
            let ok = lambda.as_ref().is_some_and(|l| !f.is_zero(l));
            r.check("chain_pairing", ok, json!({ "scalar": lambda.map(|l| l.to_string()) }));
        }
        Err(e) => {
            r.check("chain_pairing", false, failure(&e));
        }
    }

    conic_checks(f, m, &p, s, &mut r);
    r.finish()
}

fn conic_checks<F: Field>(f: &F, m: &Monad<F::Elem>, p: &Pipeline<F::Elem>, s: &Settings, r: &mut TheoremReport) {
    let mut rows = Vec::new();
    match sample(f, m, p, s, false) {
        Ok(generic) => {
            let regular = generic.iter().filter(|x| x.d == 0 && x.ker_dim == 0 && x.pf_value != "0").count();
            r.check(
                "generic_conics_regular",
                regular == generic.len(),
                json!({ "sampled": generic.len(), "regular": regular }),
            );
            rows.extend(generic);
        }
        Err(e) => {
            r.check("generic_conics_regular", false, failure(&e));
        }
    }
    if f.characteristic() > 2 {
        match sample(f, m, p, s, true) {
            Ok(jumping) => {
                let jumps = jumping.iter().filter(|x| x.d >= 1 && x.pf_value == "0").count();
                let simple_ok = jumping.iter().filter(|x| x.d == 1).all(|x| x.ker_dim == 2);
                r.check(
                    "pfaffian_conics_jump",
                    jumps == jumping.len() && simple_ok,
                    json!({ "sampled": jumping.len(), "jumping": jumps, "d": jumping.iter().map(|x| x.d).collect::<Vec<_>>() }),
                );
                rows.extend(jumping);
            }
            Err(e) => {
                r.check("pfaffian_conics_jump", false, failure(&e));
            }
        }
    }
    let law = rows.iter().all(|x| x.ker_dim == 2 * x.d && x.h0_fomega1 == 2 * x.d);
    r.check("kernel_law", law, json!({ "conics": rows.len() }));
    let iff = rows.iter().all(|x| (x.pf_value == "0") == (x.d > 0));
    r.check("pfaffian_iff_jump", iff, Value::Null);
    let regular: Vec<_> = rows.iter().filter(|x| x.d == 0).map(|x| x.h_table).collect();
    let simple: Vec<_> = rows.iter().filter(|x| x.d == 1).map(|x| x.h_table).collect();
    let all: Vec<_> = regular.iter().chain(&simple).collect();
    let coincide = all.windows(2).all(|w| w[0] == w[1]);
    r.check("h_table_coincide", coincide, json!({ "regular": regular.first(), "simple_jump": simple.first() }));
}
