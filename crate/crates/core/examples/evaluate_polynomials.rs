//! Evaluates K_i(x) exactly and prints the table of values at x = 0..N.
//!
//! Usage: `cargo run --example evaluate_polynomials -- [N] [p]`

use krawtchouk_sl2::{FieldSpec, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: i64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let p = args.next().unwrap_or_else(|| "1/3".into());
    let params = Params::parse(n, &p, FieldSpec::rational())?;

    println!("K_i(x; {p}, {n})");
    for i in 0..=params.n() {
        let row: Vec<String> = (0..=params.n())
            .map(|x| params.kraw_at(i, x).map(|v| v.to_string()))
            .collect::<Result<_, _>>()?;
        println!("  i={i}: {}", row.join("  "));
    }

    let x = FieldSpec::rational().parse_scalar("5/7")?;
    println!("K_1(5/7) = {}", params.kraw_eval(1, &x)?);
    println!(
        "K_2 as a polynomial: {:?}",
        params
            .kraw_coeffs(2.min(params.n()))?
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    );
    println!(
        "weights k_i = {}",
        params
            .weights()
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(())
}
