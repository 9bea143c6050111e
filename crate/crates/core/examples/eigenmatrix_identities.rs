//! Builds U, B, D, K and P for one parameter choice and checks the
//! identities tying them together.

use krawtchouk_sl2::{FieldSpec, KrawtchoukTable, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = Params::parse(3, "2/5", FieldSpec::rational())?;
    let t = KrawtchoukTable::build(&params);
    println!("U =\n{}", t.u);
    println!("B =\n{}", t.b);
    println!(
        "K = {}",
        t.weights
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );

    let mut report = t.eigenmatrix_identities();
    report.extend(t.p_identities());
    for (name, ok) in &report.checks {
        println!("{:<40} {}", name, if *ok { "ok" } else { "FAIL" });
    }
    assert!(report.all());
    Ok(())
}
