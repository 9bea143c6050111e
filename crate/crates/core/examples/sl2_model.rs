//! The pair a, a* inside sl2, the maps star and dagger, and the Gram and
//! transition tables between the three bases.

use krawtchouk_sl2::sl2::{model_report, BasisKind, Sl2Model};
use krawtchouk_sl2::FieldSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = FieldSpec::rational().parse_scalar("1/3")?;
    let model = Sl2Model::new(p)?;
    let pair = model.pair();
    println!(
        "a  = {:?}",
        model
            .a()
            .coords()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    );
    println!(
        "a* = {:?}",
        model
            .a_star()
            .coords()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    );
    println!("Gram table of a, a*, [a,a*]:\n{}", pair.gram_table());
    println!("det = {}", pair.gram_table().det());
    println!(
        "star(a) == a*: {}",
        model.star(&model.a()) == model.a_star()
    );
    println!("dagger fixes a: {}", model.dagger(&model.a()) == model.a());

    for from in BasisKind::ALL {
        for to in BasisKind::ALL {
            if from != to {
                println!(
                    "transition {} -> {}:\n{}",
                    from.name(),
                    to.name(),
                    model.transition(from, to)
                );
            }
        }
    }
    let report = model_report(&model);
    println!(
        "{} checks, failures: {:?}",
        report.checks.len(),
        report.failures()
    );
    Ok(())
}
