//! Acceptance run: one line per criterion, exact equality throughout.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use krawtchouk_sl2::leonard::shift;
use krawtchouk_sl2::module::{BasisTag, ModuleRealization};
use krawtchouk_sl2::suites::{
    all_passed, field_consistency, grid, sweep, Suite, SuiteOptions, Summary,
};
use krawtchouk_sl2::{FieldSpec, Matrix, Params, Scalar};

const N_MAX: usize = 10;
const RATIONAL_P: [&str; 5] = ["1/2", "1/3", "2/5", "-1/2", "3"];
const F11_P: [&str; 5] = ["2", "3", "5", "6", "9"];
const F13_P: [&str; 5] = ["2", "4", "7", "9", "11"];

fn points_over(field: FieldSpec, ps: &[&str]) -> Vec<Params> {
    let ps: Vec<Scalar> = ps.iter().map(|p| field.parse_scalar(p).unwrap()).collect();
    grid(field, N_MAX, &ps)
}

fn rational_points() -> Vec<Params> {
    points_over(FieldSpec::rational(), &RATIONAL_P)
}

fn full_grid() -> Vec<Params> {
    let mut points = rational_points();
    points.extend(points_over(FieldSpec::prime(11).unwrap(), &F11_P));
    points.extend(points_over(FieldSpec::prime(13).unwrap(), &F13_P));
    points
}

fn failures(summary: &Summary) -> Vec<String> {
    summary
        .iter()
        .filter(|(_, t)| t.passed != t.total)
        .map(|((s, name), t)| {
            format!(
                "{}/{name} {}/{} first failing at {}",
                s.name(),
                t.passed,
                t.total,
                t.first_failure.as_deref().unwrap_or("?")
            )
        })
        .collect()
}

fn suite_over_grid(suite: Suite, opts: &SuiteOptions) -> Vec<String> {
    let summary = sweep(&full_grid(), &[suite], opts);
    assert!(!summary.is_empty());
    if all_passed(&summary) {
        Vec::new()
    } else {
        failures(&summary)
    }
}

fn s(x: &str) -> Scalar {
    FieldSpec::rational().parse_scalar(x).unwrap()
}

fn eigenmatrix() -> Vec<String> {
    suite_over_grid(Suite::Eigenmatrix, &SuiteOptions::default())
}

fn polynomials() -> Vec<String> {
    let mut out = suite_over_grid(Suite::Polynomials, &SuiteOptions::default());
    let params = Params::parse(2, "1/2", FieldSpec::rational()).unwrap();
    let quarter = s("1/4");
    let binom = [1, 2, 1];
    let sum = (0..=2).fold(s("0"), |acc, i| {
        let k = params.kraw_at(1, i).unwrap();
        acc + &k * &k * FieldSpec::rational().from_i64(binom[i]) * &quarter
    });
    if sum != s("1/2") {
        out.push(format!("sum K_1(i)^2 C(2,i)/4 = {sum}"));
    }
    out
}

fn sl2() -> Vec<String> {
    suite_over_grid(Suite::Sl2, &SuiteOptions::default())
}

fn module() -> Vec<String> {
    let mut out = suite_over_grid(Suite::Module, &SuiteOptions::default());
    let f = FieldSpec::rational();
    let m = ModuleRealization::build(&Params::parse(2, "1/2", f).unwrap());
    let e = Matrix::from_ratios(
        f,
        &[
            &[(0, 1), (1, 1), (0, 1)],
            &[(0, 1), (0, 1), (2, 1)],
            &[(0, 1), (0, 1), (0, 1)],
        ],
    )
    .unwrap();
    if m.rep_e != e {
        out.push("rep_e for N = 2".into());
    }
    let d = Matrix::diag(f, &[s("0"), s("1"), s("2")]);
    if m.operators_in(BasisTag::Star).0 != d {
        out.push("A in the starred basis".into());
    }
    out
}

fn round_trip() -> Vec<String> {
    suite_over_grid(
        Suite::RoundTrip,
        &SuiteOptions {
            fuzz: 100,
            ..Default::default()
        },
    )
}

fn cross_relations() -> Vec<String> {
    let mut out = suite_over_grid(Suite::CrossRelations, &SuiteOptions::default());
    let m = ModuleRealization::build(&Params::parse(3, "2/5", FieldSpec::rational()).unwrap());
    let (a, a_s) = (shift(&m.a), shift(&m.a_star));
    if (&(&a * &a_s) - &(&a_s * &a)).is_zero() {
        out.push("[A, A*] vanishes".into());
    }
    out
}

fn field_consistency_all() -> Vec<String> {
    let targets = [FieldSpec::prime(11).unwrap(), FieldSpec::prime(13).unwrap()];
    let mut out = Vec::new();
    let mut compared = 0;
    for params in rational_points() {
        let report = field_consistency(&params, &targets);
        compared += report.checks.len();
        for name in report.failures() {
            out.push(format!("{name} at N={} p={}", params.n(), params.p()));
        }
    }
    if compared == 0 {
        out.push("no grid point reduces".into());
    }
    out
}

type Criterion = (&'static str, Duration, fn() -> Vec<String>);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (
            "1 eigenmatrix identities",
            Duration::from_secs(10),
            eigenmatrix,
        ),
        (
            "2 orthogonality, recurrence, difference, generating function",
            Duration::from_secs(30),
            polynomials,
        ),
        ("3 sl2 model", Duration::from_secs(5), sl2),
        ("4 irreducible module", Duration::from_secs(30), module),
        (
            "5 classification round trip and fuzz",
            Duration::from_secs(60),
            round_trip,
        ),
        (
            "6 cross relations and basis ranks",
            Duration::from_secs(60),
            cross_relations,
        ),
        (
            "7 field consistency",
            Duration::from_secs(10),
            field_consistency_all,
        ),
    ];
    let mut ok = true;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let mut fails = run();
        let elapsed = start.elapsed();
        if elapsed > budget {
            fails.push(format!("took {elapsed:.2?}, budget {budget:?}"));
        }
        let verdict = if fails.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {name}: {verdict} ({elapsed:.2?})");
        for f in &fails {
            println!("    {f}");
        }
        ok &= fails.is_empty();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
