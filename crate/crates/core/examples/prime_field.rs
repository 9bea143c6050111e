//! The same computations over F_q. Reducing the rational results mod q gives
//! the F_q results directly.

use krawtchouk_sl2::suites::field_consistency;
use krawtchouk_sl2::{FieldSpec, KrawtchoukTable, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f7: FieldSpec = "prime:7".parse()?;
    let params = Params::new(2, f7.from_i64(4))?;
    println!(
        "U over {f7} with p = 4:\n{}",
        KrawtchoukTable::build(&params).u
    );

    let rational = Params::parse(2, "1/2", FieldSpec::rational())?;
    println!(
        "U over Q with p = 1/2, reduced mod 7:\n{}",
        KrawtchoukTable::build(&rational).u.reduce_to(&f7)?
    );

    for q in [11, 13] {
        let target = FieldSpec::prime(q)?;
        let rational = Params::parse(6, "2/5", FieldSpec::rational())?;
        let report = field_consistency(&rational, &[target]);
        println!("N = 6, p = 2/5 against F_{q}: {:?}", report.checks);
    }

    println!(
        "N = 7 over F_7: {}",
        Params::new(7, f7.from_i64(2)).unwrap_err()
    );
    Ok(())
}
