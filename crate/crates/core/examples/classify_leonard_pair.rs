//! Classifies a pair of matrices. With a path argument the pair is read from
//! JSON ({"A": .., "Astar": ..}); otherwise the reference pair for N = 3,
//! p = 2/5 is used, written in a scrambled basis.

use krawtchouk_sl2::json;
use krawtchouk_sl2::leonard::{classify_krawtchouk, shift};
use krawtchouk_sl2::module::ModuleRealization;
use krawtchouk_sl2::{FieldSpec, Matrix, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, a_star) = match std::env::args().nth(1) {
        Some(path) => {
            let input =
                json::classify_input_from_json(&json::parse(&std::fs::read_to_string(path)?)?)?;
            (input.a, input.a_star)
        }
        None => {
            let f = FieldSpec::rational();
            let m = ModuleRealization::build(&Params::parse(3, "2/5", f)?);
            let t = Matrix::from_ratios(
                f,
                &[
                    &[(1, 1), (2, 1), (0, 1), (1, 1)],
                    &[(0, 1), (1, 1), (3, 1), (0, 1)],
                    &[(1, 2), (0, 1), (1, 1), (0, 1)],
                    &[(0, 1), (0, 1), (1, 1), (1, 1)],
                ],
            )?;
            let ti = t.inverse()?;
            let conj = |x: &Matrix| &(&ti * x) * &t;
            (conj(&shift(&m.a)), conj(&shift(&m.a_star)))
        }
    };

    match classify_krawtchouk(&a, &a_star) {
        Ok(c) => print!("{}", json::render(&json::classification_to_json(&c))),
        Err(e) => print!("{}", json::render(&json::classify_error_to_json(&e))),
    }
    Ok(())
}
