//! Runs every identity suite over a small grid and prints pass counts.
//!
//! Usage: `cargo run --example verify_sweep -- [Nmax]`

use krawtchouk_sl2::suites::{all_passed, grid, sweep, Suite, SuiteOptions};
use krawtchouk_sl2::FieldSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_max: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(5);
    let mut points = Vec::new();
    for (field, ps) in [
        (
            FieldSpec::rational(),
            &["1/2", "1/3", "2/5", "-1/2", "3"][..],
        ),
        (FieldSpec::prime(11)?, &["2", "3", "5", "6", "9"][..]),
    ] {
        let ps = ps
            .iter()
            .map(|p| field.parse_scalar(p))
            .collect::<Result<Vec<_>, _>>()?;
        points.extend(grid(field, n_max, &ps));
    }
    let opts = SuiteOptions {
        fuzz: 20,
        ..Default::default()
    };
    let summary = sweep(&points, &Suite::ALL, &opts);
    for ((suite, name), t) in &summary {
        println!("{:<16} {:<45} {}/{}", suite.name(), name, t.passed, t.total);
    }
    println!(
        "{} points: {}",
        points.len(),
        if all_passed(&summary) {
            "all pass"
        } else {
            "FAILED"
        }
    );
    Ok(())
}
