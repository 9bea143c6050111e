//! Identity suites run over a grid of parameters.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::field::{FieldSpec, Scalar};
use crate::krawtchouk::{
    difference_residual, generating_function_check, orthogonality_check, self_duality_check,
    three_term_residual, IdentityReport, KrawtchoukTable, Params,
};
use crate::leonard::{
    classify_krawtchouk, krawtchouk_spectrum, recognize_leonard_system, shift, Verdict,
};
use crate::linalg::Matrix;
use crate::module::{BasisTag, ModuleRealization};
use crate::sl2::{model_report, Sl2Model};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Eigenmatrix,
    Polynomials,
    Sl2,
    Module,
    RoundTrip,
    CrossRelations,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Eigenmatrix,
        Suite::Polynomials,
        Suite::Sl2,
        Suite::Module,
        Suite::RoundTrip,
        Suite::CrossRelations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Eigenmatrix => "eigenmatrix",
            Suite::Polynomials => "polynomials",
            Suite::Sl2 => "sl2",
            Suite::Module => "module",
            Suite::RoundTrip => "round-trip",
            Suite::CrossRelations => "cross-relations",
        }
    }
}

/// Options for the suites that take them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Single-entry perturbations of A tried per grid point.
    pub fuzz: usize,
    pub seed: u64,
    /// The basis theorem is checked for N up to this bound.
    pub basis_max_n: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            fuzz: 100,
            seed: 0x6b72_6177,
            basis_max_n: 6,
        }
    }
}

/// U, B, D, K and P identities.
pub fn eigenmatrix_suite(params: &Params) -> IdentityReport {
    let t = KrawtchoukTable::build(params);
    let mut r = t.eigenmatrix_identities();
    r.extend(t.p_identities());
    let f = params.field();
    let roots: Vec<Scalar> = (0..=params.n()).map(|i| f.from_i64(i as i64)).collect();
    r.checks.push((
        "char poly of B".into(),
        t.b.char_poly() == crate::linalg::Poly::from_roots(f, &roots),
    ));
    r.checks.push((
        "B irreducible tridiagonal".into(),
        t.b.is_irreducible_tridiagonal(),
    ));
    r
}

/// Orthogonality, recurrence, difference equation, generating function,
/// self-duality, weights and coefficients.
pub fn polynomial_suite(params: &Params) -> IdentityReport {
    let n = params.n();
    let grid = || (0..=n).flat_map(|i| (0..=n).map(move |x| (i, x)));
    let (ortho_deg, ortho_var) = orthogonality_check(params).expect("valid params");
    let coeffs_ok = (0..=n).all(|i| {
        let c = params.kraw_coeffs(i).expect("in range");
        c.degree() == Some(i)
            && (0..=n).all(|x| {
                c.eval(&params.field().from_i64(x as i64))
                    == params.kraw_at(i, x).expect("in range")
            })
    });
    IdentityReport::new(vec![
        ("orthogonality over degree", ortho_deg),
        ("orthogonality over variable", ortho_var),
        (
            "three-term recurrence",
            grid().all(|(i, x)| {
                three_term_residual(params, i, x)
                    .expect("in range")
                    .is_zero()
            }),
        ),
        (
            "difference equation",
            grid().all(|(i, x)| {
                difference_residual(params, i, x)
                    .expect("in range")
                    .is_zero()
            }),
        ),
        (
            "generating function",
            (0..=n).all(|x| generating_function_check(params, x).expect("in range")),
        ),
        (
            "self-duality",
            self_duality_check(params).expect("valid params"),
        ),
        (
            "weights two ways",
            (0..=n).all(|i| params.weight(i).ok() == params.weight_by_ratio(i).ok()),
        ),
        ("coefficients", coeffs_ok),
    ])
}

pub fn sl2_suite(params: &Params) -> IdentityReport {
    model_report(&Sl2Model::new(params.p().clone()).expect("valid params"))
}

pub fn module_suite(params: &Params) -> IdentityReport {
    ModuleRealization::build(params).report()
}

/// Classifying (NI − 2Bᵗ, NI − 2D) recovers p and the reference module;
/// seeded single-entry perturbations of A are all rejected.
pub fn round_trip_suite(params: &Params, opts: &SuiteOptions) -> IdentityReport {
    let m = ModuleRealization::build(params);
    let (a, a_s) = (shift(&m.a), shift(&m.a_star));
    let mut checks: Vec<(String, bool)> = Vec::new();
    match classify_krawtchouk(&a, &a_s) {
        Ok(c) => {
            checks.push(("verdict".into(), c.verdict == Verdict::KrawtchoukType));
            checks.push(("recovered p".into(), c.p.as_ref() == Some(params.p())));
            let ehf_ok = c.ehf.as_ref().is_some_and(|[e, h, f]| {
                let br = |x: &Matrix, y: &Matrix| &(x * y) - &(y * x);
                let two = params.field().from_i64(2);
                br(h, e) == e.scale(&two) && br(h, f) == f.scale(&-two) && br(e, f) == *h
            });
            checks.push(("rebuilt e, h, f".into(), ehf_ok));
            let iso_ok = c.iso.as_ref().is_some_and(|t| {
                let ti = t.inverse().expect("iso is invertible");
                let conj = |x: &Matrix| &(&ti * x) * t;
                let [e, h, f] = c.ehf.as_ref().expect("present with iso");
                conj(&a) == shift(&m.table.b.transpose())
                    && conj(&a_s) == shift(&m.table.d)
                    && conj(e) == m.rep_e
                    && conj(h) == m.rep_h
                    && conj(f) == m.rep_f
            });
            checks.push(("isomorphism onto reference module".into(), iso_ok));
        }
        Err(e) if params.n() == 0 => {
            checks.push((
                "N = 0 is degenerate".into(),
                e.code() == "degenerate-parameter",
            ));
        }
        Err(_) => checks.push(("verdict".into(), false)),
    }
    if opts.fuzz > 0 && params.n() > 0 {
        checks.push((
            "perturbations rejected".into(),
            fuzz_rejections(params, &a, &a_s, opts) == opts.fuzz,
        ));
    }
    IdentityReport::new(checks)
}

/// Number of perturbed copies of A that the classifier rejects.
pub fn fuzz_rejections(params: &Params, a: &Matrix, a_s: &Matrix, opts: &SuiteOptions) -> usize {
    let f = params.field();
    let dim = a.n();
    let key = (params.n() as u64) << 32
        ^ params
            .p()
            .to_string()
            .bytes()
            .fold(0u64, |h, b| h.wrapping_mul(31) ^ b as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ key);
    let mut rejected = 0;
    for _ in 0..opts.fuzz {
        let (i, j) = (rng.random_range(0..dim), rng.random_range(0..dim));
        let delta = loop {
            let num: i64 = rng.random_range(-9..=9);
            let den: i64 = rng.random_range(1..=9);
            if let Ok(d) = f.from_ratio(num, den) {
                if !d.is_zero() {
                    break d;
                }
            }
        };
        let mut perturbed = a.clone();
        perturbed.set(i, j, a.get(i, j) + &delta);
        if classify_krawtchouk(&perturbed, a_s).is_err() {
            rejected += 1;
        }
    }
    rejected
}

/// Cross relations of the recognized system and its relatives, plus the
/// basis theorem for small N.
pub fn cross_relation_suite(params: &Params, opts: &SuiteOptions) -> IdentityReport {
    let m = ModuleRealization::build(params);
    let (a, a_s) = (shift(&m.a), shift(&m.a_star));
    let spec = krawtchouk_spectrum(params.field(), params.n());
    let Ok(sys) = recognize_leonard_system(&a, &a_s, &spec, &spec) else {
        return IdentityReport::new(vec![("recognized", false)]);
    };
    let mut r = IdentityReport::new(vec![
        ("recognized", true),
        ("axioms", sys.axiom_failures().is_empty()),
    ]);
    r.extend(sys.cross_relations());
    let star = sys.relative(crate::leonard::Relative::Star);
    r.checks.push((
        "cross relations of the dual system".into(),
        star.cross_relations().all(),
    ));
    if params.n() <= opts.basis_max_n {
        let d = (params.n() + 1).pow(2);
        let (r1, r2) = sys.basis_ranks();
        r.checks.push(("rank of A^r E*_0 A^s".into(), r1 == d));
        r.checks.push(("rank of E_i E*_0 E_j".into(), r2 == d));
    }
    if params.n() > 0 {
        r.checks.push((
            "[A, A*] nonzero".into(),
            !(&(&a * &a_s) - &(&a_s * &a)).is_zero(),
        ));
    }
    r
}

pub fn run_suite(suite: Suite, params: &Params, opts: &SuiteOptions) -> IdentityReport {
    match suite {
        Suite::Eigenmatrix => eigenmatrix_suite(params),
        Suite::Polynomials => polynomial_suite(params),
        Suite::Sl2 => sl2_suite(params),
        Suite::Module => module_suite(params),
        Suite::RoundTrip => round_trip_suite(params, opts),
        Suite::CrossRelations => cross_relation_suite(params, opts),
    }
}

/// Compares every exported scalar for rational `params`, reduced mod q, with
/// the computation carried out directly in F_q, for each target field the
/// point reduces to.
pub fn field_consistency(params: &Params, targets: &[FieldSpec]) -> IdentityReport {
    let tq = KrawtchoukTable::build(params);
    let mq = ModuleRealization::build(params);
    let pairs = || {
        BasisTag::ALL
            .into_iter()
            .flat_map(|x| BasisTag::ALL.into_iter().map(move |y| (x, y)))
    };
    let grams: Vec<Matrix> = pairs().map(|(x, y)| mq.gram_matrix(x, y)).collect();
    let transitions: Vec<Matrix> = pairs().map(|(x, y)| mq.transition(x, y)).collect();
    let cq = classify_krawtchouk(&shift(&mq.a), &shift(&mq.a_star));
    let mut report = IdentityReport::default();
    for target in targets {
        let Ok(reduced) = params.reduce_to(target) else {
            continue;
        };
        let red = |m: &Matrix| m.reduce_to(target).expect("entries reduce");
        let tp = KrawtchoukTable::build(&reduced);
        let table_ok = red(&tq.u) == tp.u
            && red(&tq.b) == tp.b
            && red(&tq.d) == tp.d
            && red(&tq.k) == tp.k
            && red(&tq.p) == tp.p;
        let mp = ModuleRealization::build(&reduced);
        let module_ok = red(&mq.rep_e) == mp.rep_e
            && red(&mq.rep_h) == mp.rep_h
            && red(&mq.rep_f) == mp.rep_f
            && red(&mq.rep_es) == mp.rep_es
            && red(&mq.rep_hs) == mp.rep_hs
            && red(&mq.rep_fs) == mp.rep_fs
            && red(&mq.a) == mp.a
            && red(&mq.a_star) == mp.a_star
            && pairs()
                .zip(&grams)
                .all(|((x, y), g)| red(g) == mp.gram_matrix(x, y))
            && pairs()
                .zip(&transitions)
                .all(|((x, y), t)| red(t) == mp.transition(x, y));
        let cp = classify_krawtchouk(&shift(&mp.a), &shift(&mp.a_star));
        let rs = |x: &Option<Scalar>| x.as_ref().map(|v| v.reduce_to(target).expect("reduces"));
        let classify_ok = match (&cq, cp) {
            (Ok(a), Ok(b)) => {
                a.verdict == b.verdict
                    && rs(&a.p) == b.p
                    && rs(&a.alpha1) == b.alpha1
                    && a.iso.as_ref().map(red) == b.iso
            }
            (Err(a), Err(b)) => a.code() == b.code(),
            _ => false,
        };
        report
            .checks
            .push((format!("table entries mod {target}"), table_ok));
        report
            .checks
            .push((format!("module entries mod {target}"), module_ok));
        report
            .checks
            .push((format!("classification mod {target}"), classify_ok));
    }
    report
}

/// A parameter grid: every N in 0..=n_max feasible for the field, each p.
pub fn grid(field: FieldSpec, n_max: usize, ps: &[Scalar]) -> Vec<Params> {
    let mut out = Vec::new();
    for p in ps {
        for n in 0..=n_max {
            if let Ok(params) = Params::new(n as i64, p.clone()) {
                out.push(params);
            }
        }
    }
    debug_assert!(out.iter().all(|p| p.field() == field));
    out
}

/// Aggregated outcome of one identity across the grid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub total: usize,
    /// The first failing grid point, ordered by (N, p).
    pub first_failure: Option<String>,
}

pub type Summary = BTreeMap<(Suite, String), Tally>;

fn label(params: &Params) -> String {
    format!("N={} p={} field={}", params.n(), params.p(), params.field())
}

/// Runs `suites` over `points` in parallel and tallies the results by
/// identity name. Aggregation order does not depend on scheduling.
pub fn sweep(points: &[Params], suites: &[Suite], opts: &SuiteOptions) -> Summary {
    let mut jobs: Vec<(usize, Suite)> = Vec::new();
    for (k, _) in points.iter().enumerate() {
        for &s in suites {
            jobs.push((k, s));
        }
    }
    let mut results: Vec<(usize, Suite, IdentityReport)> = jobs
        .par_iter()
        .map(|&(k, s)| (k, s, run_suite(s, &points[k], opts)))
        .collect();
    results.sort_by_key(|(k, s, _)| (points[*k].n(), *k, *s));
    let mut summary = Summary::new();
    for (k, s, report) in results {
        for (name, ok) in report.checks {
            let t = summary.entry((s, name)).or_default();
            t.total += 1;
            if ok {
                t.passed += 1;
            } else if t.first_failure.is_none() {
                t.first_failure = Some(label(&points[k]));
            }
        }
    }
    summary
}

pub fn all_passed(summary: &Summary) -> bool {
    summary.values().all(|t| t.passed == t.total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes() {
        let f = FieldSpec::rational();
        let ps: Vec<Scalar> = ["1/2", "3"]
            .iter()
            .map(|s| f.parse_scalar(s).unwrap())
            .collect();
        let opts = SuiteOptions {
            fuzz: 5,
            ..Default::default()
        };
        let summary = sweep(&grid(f, 3, &ps), &Suite::ALL, &opts);
        let failing: Vec<_> = summary
            .iter()
            .filter(|(_, t)| t.passed != t.total)
            .collect();
        assert!(failing.is_empty(), "{failing:?}");
    }

    #[test]
    fn consistency_mod_11() {
        let f11 = FieldSpec::prime(11).unwrap();
        let f5 = FieldSpec::prime(5).unwrap();
        let p = Params::parse(4, "2/5", FieldSpec::rational()).unwrap();
        let report = field_consistency(&p, &[f11, f5]);
        assert_eq!(report.checks.len(), 3);
        assert!(report.all());
    }

    #[test]
    fn grid_skips_infeasible_n() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(grid(f7, 10, &[f7.from_i64(2)]).len(), 7);
    }
}
