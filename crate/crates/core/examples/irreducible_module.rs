//! The (N+1)-dimensional irreducible module: e, h, f on the monomial basis,
//! A and A* in each of the four bases, and the bilinear form.

use krawtchouk_sl2::module::{BasisTag, ModuleRealization};
use krawtchouk_sl2::{FieldSpec, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = Params::parse(2, "1/2", FieldSpec::rational())?;
    let m = ModuleRealization::build(&params);
    println!("e =\n{}", m.rep_e);
    println!("h =\n{}", m.rep_h);
    println!("f =\n{}", m.rep_f);

    for tag in BasisTag::ALL {
        let (a, a_star) = m.operators_in(tag);
        println!("in basis {tag}:\nA =\n{a}A* =\n{a_star}");
    }
    println!("Gram matrix on the monomial basis:\n{}", m.gram_mono());

    let report = m.report();
    println!(
        "{} checks, failures: {:?}",
        report.checks.len(),
        report.failures()
    );
    Ok(())
}
