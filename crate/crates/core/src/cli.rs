//! The `kraw` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::field::{FieldSpec, Scalar};
use crate::json;
use crate::krawtchouk::{KrawtchoukTable, Params};
use crate::leonard::{classify_krawtchouk, classify_with_spectra, shift, Verdict};
use crate::module::ModuleRealization;
use crate::suites::{all_passed, grid, sweep, Suite, SuiteOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_LEONARD_NOT_KRAWTCHOUK: i32 = 2;
pub const EXIT_NOT_LEONARD: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "kraw",
    version,
    about = "Exact Krawtchouk polynomials and Leonard pairs of Krawtchouk type"
)]
pub struct Cli {
    /// rational or prime:q
    #[arg(long, global = true, default_value = "rational")]
    pub field: FieldSpec,
    /// Write JSON output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = SuiteOptions::default().seed)]
    pub seed: u64,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Replace A and A* by NI - 2A and NI - 2A* before classifying.
    #[arg(long, global = true)]
    pub shift: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate K_i(x).
    Eval {
        #[arg(long = "N")]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        i: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Export U, B, D, K and P.
    Table {
        #[arg(long = "N")]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Export the irreducible module: actions, Gram matrices, transitions.
    Module {
        #[arg(long = "N")]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Run every identity suite over a grid of N and p.
    Verify {
        #[arg(long = "Nmax")]
        n_max: usize,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        p: Vec<String>,
        /// Perturbations of A per grid point in the round-trip suite.
        #[arg(long, default_value_t = 10)]
        fuzz: usize,
    },
    /// Classify the pair in a JSON file.
    Classify { file: PathBuf },
}

struct Failure(i32, String);

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let res = match out {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure(EXIT_IO, format!("write failed: {e}")))
}

fn parse_p(p: &str, field: FieldSpec) -> Result<Scalar, Failure> {
    let p = field.parse_scalar(p).map_err(Failure::input)?;
    if p.is_zero() || p.is_one() {
        return Err(Failure::input(format!("p = {p} is excluded")));
    }
    Ok(p)
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let field = cli.field;
    match &cli.command {
        Command::Eval { n, p, i, x } => {
            let params = Params::parse(*n, p, field).map_err(Failure::input)?;
            let x = field.parse_scalar(x).map_err(Failure::input)?;
            let v = params.kraw_eval(*i, &x).map_err(Failure::input)?;
            emit(&None, &format!("{v}\n"), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Table { n, p } => {
            let params = Params::parse(*n, p, field).map_err(Failure::input)?;
            let v = json::table_to_json(&KrawtchoukTable::build(&params));
            emit(&cli.out, &json::render(&v), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Module { n, p } => {
            let params = Params::parse(*n, p, field).map_err(Failure::input)?;
            let v = json::module_to_json(&ModuleRealization::build(&params));
            emit(&cli.out, &json::render(&v), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify { n_max, p, fuzz } => {
            let ps = p
                .iter()
                .map(|p| parse_p(p, field))
                .collect::<Result<Vec<_>, _>>()?;
            let points = grid(field, *n_max, &ps);
            let opts = SuiteOptions {
                fuzz: *fuzz,
                seed: cli.seed,
                ..Default::default()
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.jobs.unwrap_or(0))
                .build()
                .map_err(Failure::input)?;
            let summary = pool.install(|| sweep(&points, &Suite::ALL, &opts));
            let mut report = String::new();
            for ((suite, name), t) in &summary {
                report.push_str(&format!(
                    "{}/{name}: {}/{}\n",
                    suite.name(),
                    t.passed,
                    t.total
                ));
                if let Some(at) = &t.first_failure {
                    report.push_str(&format!("  first failure at {at}\n"));
                }
            }
            let ok = all_passed(&summary);
            report.push_str(&format!(
                "{} grid points, {} identities: {}\n",
                points.len(),
                summary.len(),
                if ok { "all pass" } else { "FAILED" }
            ));
            emit(&cli.out, &report, stdout)?;
            Ok(if ok { EXIT_OK } else { EXIT_IDENTITY_FAILURE })
        }
        Command::Classify { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure(EXIT_IO, format!("cannot read {}: {e}", file.display())))?;
            let input =
                json::classify_input_from_json(&json::parse(&text).map_err(Failure::input)?)
                    .map_err(Failure::input)?;
            let (mut a, mut a_star) = (input.a, input.a_star);
            if cli.shift {
                if a.n() != a_star.n() {
                    return Err(Failure::input(format!(
                        "A and A* have orders {} and {}",
                        a.n(),
                        a_star.n()
                    )));
                }
                a = shift(&a);
                a_star = shift(&a_star);
            }
            let result = match (&input.theta, &input.theta_star) {
                (Some(t), Some(ts)) => classify_with_spectra(&a, &a_star, t, ts),
                (None, None) => classify_krawtchouk(&a, &a_star),
                _ => return Err(Failure::input("theta and thetaStar must be given together")),
            };
            let (v, code) = match &result {
                Ok(c) => (
                    json::classification_to_json(c),
                    match c.verdict {
                        Verdict::KrawtchoukType => EXIT_OK,
                        Verdict::LeonardNotKrawtchouk => EXIT_LEONARD_NOT_KRAWTCHOUK,
                        Verdict::NotLeonard => EXIT_NOT_LEONARD,
                    },
                ),
                Err(e) if e.is_input_error() => return Err(Failure::input(e)),
                Err(e) => (json::classify_error_to_json(e), EXIT_NOT_LEONARD),
            };
            emit(&cli.out, &json::render(&v), stdout)?;
            Ok(code)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "kraw: {msg}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("kraw").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_values() {
        assert_eq!(
            call(&["eval", "--N", "2", "--p", "1/2", "--i", "1", "--x", "1"]).1,
            "0\n"
        );
        assert_eq!(
            call(&["eval", "--N", "2", "--p", "1/2", "--i", "0", "--x", "5/7"]).1,
            "1\n"
        );
        assert_eq!(
            call(&["eval", "--N", "2", "--p", "0", "--i", "0", "--x", "1"]).0,
            EXIT_INPUT
        );
        assert_eq!(
            call(&["eval", "--N", "3", "--p", "-1/2", "--i", "1", "--x", "-1"]).0,
            EXIT_OK
        );
    }

    #[test]
    fn verify_rejects_p_one() {
        let (code, _, err) = call(&["verify", "--Nmax", "2", "--p", "1/2,1"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("excluded"));
    }

    #[test]
    fn bad_field_is_input_error() {
        assert_eq!(
            call(&["--field", "prime:9", "table", "--N", "2", "--p", "2"]).0,
            EXIT_INPUT
        );
    }
}
