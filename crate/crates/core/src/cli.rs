//! The `normlab` command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{LabError, Result};
use crate::extraction::{extract, minimality_probe, reconstruct, ProbeVerdict};
use crate::gind::{chain_compare, gind_eval, GIndPair};
use crate::io::{format_complex, parse_matrix, parse_norm_spec, parse_vector, NormSpec};
use crate::linalg::{Matrix, RandomStream, Vector};
use crate::matrix_norms::MatrixNormSpec;
use crate::sphere_opt::OptBudget;
use crate::verification::{
    paper_demo_suite, verify_lemma21, verify_lemma22, verify_theorem23, CaseStatus, SuiteReport,
    Witness,
};
use crate::vector_norms::{l1, l2, linf, VectorNormSpec};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "normlab",
    version,
    about = "Generalized induced matrix norms, norm extraction and minimality probes"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Matrix / vector dimension n.
    #[arg(long, global = true, default_value_t = 2)]
    dim: usize,
    #[arg(long, global = true)]
    budget_multistarts: Option<usize>,
    #[arg(long, global = true)]
    budget_max_iters: Option<usize>,
    #[arg(long, global = true)]
    budget_samples: Option<usize>,
    #[arg(long, global = true)]
    budget_step_init: Option<f64>,
    #[arg(long, global = true)]
    budget_tol: Option<f64>,
    /// Write a machine-readable JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a matrix norm at a matrix, or a vector norm at a vector.
    Eval {
        #[arg(long)]
        norm: String,
        #[arg(long, conflicts_with = "vector")]
        matrix: Option<String>,
        #[arg(long)]
        vector: Option<String>,
    },
    /// Evaluate the g-ind norm of (norm1, norm2) at a matrix.
    Gind {
        #[arg(long)]
        norm1: String,
        #[arg(long)]
        norm2: String,
        #[arg(long)]
        matrix: String,
    },
    /// Extract the two vector norms of a matrix norm and evaluate them.
    Extract {
        #[arg(long)]
        norm: String,
        /// Points to evaluate at (repeatable); defaults to the basis and all-ones.
        #[arg(long)]
        vector: Vec<String>,
        /// Also reconstruct the g-ind norm of the extracted pair at this matrix.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Search for a matrix where the extracted g-ind norm falls below N.
    ProbeMinimality {
        #[arg(long)]
        norm: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Compare the four operator norms built from a pair.
    Chain {
        #[arg(long)]
        norm1: String,
        #[arg(long)]
        norm2: String,
        #[arg(long)]
        matrix: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Matrix norm for theorem23 (default spectral).
        #[arg(long)]
        norm: Option<String>,
        /// Pair for lemma21 / first pair for lemma22.
        #[arg(long)]
        norm1: Option<String>,
        #[arg(long)]
        norm2: Option<String>,
        /// Second pair for lemma22.
        #[arg(long)]
        norm3: Option<String>,
        #[arg(long)]
        norm4: Option<String>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Lemma21,
    Lemma22,
    Theorem23,
    PaperDemos,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Lemma21 => "lemma21",
            Suite::Lemma22 => "lemma22",
            Suite::Theorem23 => "theorem23",
            Suite::PaperDemos => "paper-demos",
        }
    }
}

impl Common {
    fn budget(&self) -> OptBudget {
        let mut b = OptBudget::for_dim(self.dim).with_seed(self.seed);
        if let Some(v) = self.budget_multistarts {
            b.multistarts = v;
        }
        if let Some(v) = self.budget_max_iters {
            b.max_iters = v;
        }
        if let Some(v) = self.budget_samples {
            b.samples = v;
        }
        if let Some(v) = self.budget_step_init {
            b.step_init = v;
        }
        if let Some(v) = self.budget_tol {
            b.tol = v;
        }
        b
    }
}

/// A norm argument: a catalog name, inline JSON, or a path to a JSON file.
pub fn resolve_norm(arg: &str) -> Result<NormSpec> {
    let t = arg.trim();
    let catalog = |m: MatrixNormSpec| Ok(NormSpec::Matrix(m));
    match t {
        "sigma" => return catalog(MatrixNormSpec::EntrywiseSum),
        "entrywise-max" | "m" => return catalog(MatrixNormSpec::EntrywiseMax),
        "maxcolsum" | "C" => return catalog(MatrixNormSpec::MaxColSum),
        "maxrowsum" | "R" => return catalog(MatrixNormSpec::MaxRowSum),
        "spectral" | "S" => return catalog(MatrixNormSpec::Spectral),
        "max-c-r" => return catalog(MatrixNormSpec::max_col_row()),
        "l1" => return Ok(NormSpec::Vector(l1())),
        "l2" => return Ok(NormSpec::Vector(l2())),
        "linf" => return Ok(NormSpec::Vector(linf())),
        _ => {}
    }
    if let Some(p) = t.strip_prefix("lp:") {
        let p = if p == "inf" {
            f64::INFINITY
        } else {
            p.parse::<f64>()
                .map_err(|_| LabError::parse("lp", format!("bad exponent \"{p}\"")))?
        };
        return VectorNormSpec::lp(p).map(NormSpec::Vector);
    }
    if t.starts_with('{') {
        return parse_norm_spec(t);
    }
    let path = Path::new(t);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::parse(t, e.to_string()))?;
        return parse_norm_spec(&text);
    }
    Err(LabError::parse(t, "unknown norm name and no such file"))
}

fn vector_norm(arg: &str) -> Result<VectorNormSpec> {
    match resolve_norm(arg)? {
        NormSpec::Vector(v) => Ok(v),
        NormSpec::Matrix(_) => Err(LabError::parse(arg, "expected a vector norm")),
    }
}

fn matrix_norm(arg: &str) -> Result<MatrixNormSpec> {
    match resolve_norm(arg)? {
        NormSpec::Matrix(m) => Ok(m),
        NormSpec::Vector(_) => Err(LabError::parse(arg, "expected a matrix norm")),
    }
}

/// A matrix argument: a path to a CSV/JSON file, or the document itself with
/// rows separated by newlines or `;`.
pub fn resolve_matrix(arg: &str) -> Result<Matrix> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::parse(arg, e.to_string()))?;
        return parse_matrix(&text);
    }
    if arg.trim_start().starts_with('{') {
        parse_matrix(arg)
    } else {
        parse_matrix(&arg.replace(';', "\n"))
    }
}

fn matrix_text(a: &Matrix) -> String {
    a.rows()
        .map(|r| {
            format!(
                "  [{}]",
                r.iter().map(|z| format_complex(*z)).collect::<Vec<_>>().join(", ")
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn vector_text(x: &Vector) -> String {
    format!(
        "({})",
        x.iter().map(|z| format_complex(*z)).collect::<Vec<_>>().join(", ")
    )
}

struct Outcome {
    command: &'static str,
    result: Value,
    text: String,
    exit: i32,
}

fn run(cli: &Cli) -> Result<Outcome> {
    let common = &cli.common;
    if common.dim == 0 || common.dim > crate::linalg::MAX_DIM {
        return Err(LabError::InvalidBudget(format!(
            "dim must lie in 1..={}",
            crate::linalg::MAX_DIM
        )));
    }
    let budget = common.budget();
    budget.validate()?;
    let n = common.dim;
    match &cli.command {
        Command::Eval {
            norm,
            matrix,
            vector,
        } => match (resolve_norm(norm)?, matrix, vector) {
            (NormSpec::Matrix(spec), Some(m), None) => {
                let a = resolve_matrix(m)?;
                let value = spec.eval(&a, &budget)?;
                Ok(Outcome {
                    command: "eval",
                    result: json!({"norm": spec.label(), "value": value}),
                    text: format!("{}(A) = {value}", spec.label()),
                    exit: EXIT_OK,
                })
            }
            (NormSpec::Vector(spec), None, Some(v)) => {
                let x = parse_vector(v)?;
                let value = spec.eval(&x)?;
                Ok(Outcome {
                    command: "eval",
                    result: json!({"value": value}),
                    text: format!("norm(x) = {value}"),
                    exit: EXIT_OK,
                })
            }
            (NormSpec::Matrix(_), _, _) => Err(LabError::parse("--matrix", "a matrix norm needs --matrix")),
            (NormSpec::Vector(_), _, _) => Err(LabError::parse("--vector", "a vector norm needs --vector")),
        },
        Command::Gind {
            norm1,
            norm2,
            matrix,
        } => {
            let pair = GIndPair::new(vector_norm(norm1)?, vector_norm(norm2)?);
            let a = resolve_matrix(matrix)?;
            let r = gind_eval(&pair, &a, &budget)?;
            let text = format!(
                "g-ind value  {}\nexactness    {:?}\nwitness x    {}\nevaluations  {}",
                r.value,
                r.exactness,
                vector_text(&r.witness),
                r.evaluations
            );
            Ok(Outcome {
                command: "gind",
                result: serde_json::to_value(&r).expect("serializable"),
                text,
                exit: EXIT_OK,
            })
        }
        Command::Extract {
            norm,
            vector,
            matrix,
        } => {
            let spec = matrix_norm(norm)?;
            let ext = extract(&spec, &OptBudget::nested(n).with_seed(common.seed))?;
            let points: Vec<Vector> = if vector.is_empty() {
                let mut p: Vec<Vector> = (0..n).map(|j| Vector::basis(n, j)).collect();
                p.push(Vector::ones(n));
                p
            } else {
                vector.iter().map(|v| parse_vector(v)).collect::<Result<_>>()?
            };
            let mut rows = Vec::new();
            let mut text = format!("{:<28} {:>22} {:>22}", "x", "norm1(x)", "norm2(x)");
            for x in &points {
                let v1 = ext.norm1.eval(x)?;
                let v2 = ext.norm2.eval(x)?;
                text.push_str(&format!("\n{:<28} {v1:>22} {v2:>22}", vector_text(x)));
                rows.push(json!({"x": x, "norm1": v1, "norm2": v2}));
            }
            let mut result = json!({
                "source": crate::io::matrix_norm_to_value(&spec),
                "norm1": crate::io::vector_norm_to_value(&ext.norm1),
                "norm2": crate::io::vector_norm_to_value(&ext.norm2),
                "points": rows,
            });
            if let Some(m) = matrix {
                let a = resolve_matrix(m)?;
                let r = reconstruct(&ext, &a, &budget)?;
                let na = spec.eval(&a, &ext.budget)?;
                text.push_str(&format!("\nreconstruction {} vs N(A) = {na}", r.value));
                result["reconstruction"] = json!({"value": r.value, "witness": r.witness, "n_of_a": na});
            }
            Ok(Outcome {
                command: "extract",
                result,
                text,
                exit: EXIT_OK,
            })
        }
        Command::ProbeMinimality { norm, trials } => {
            let spec = matrix_norm(norm)?;
            let r = minimality_probe(&spec, n, *trials, &budget, &mut RandomStream::new(common.seed))?;
            let verdict = match r.verdict {
                ProbeVerdict::GapFound => "gap_found",
                ProbeVerdict::NoGapFound => "no_gap_found",
            };
            let text = format!(
                "verdict        {verdict}\nmin ratio      {}\ntrials         {}\nwitness\n{}",
                r.max_gap_ratio,
                r.trials,
                matrix_text(&r.witness)
            );
            Ok(Outcome {
                command: "probe-minimality",
                result: serde_json::to_value(&r).expect("serializable"),
                text,
                exit: EXIT_OK,
            })
        }
        Command::Chain {
            norm1,
            norm2,
            matrix,
        } => {
            let pair = GIndPair::new(vector_norm(norm1)?, vector_norm(norm2)?);
            let a = resolve_matrix(matrix)?;
            let r = chain_compare(&pair, &a, &budget)?;
            let text = format!(
                "v21 {}\nv11 {}\nv22 {}\nv12 {}\nchain holds: {} (slack {})",
                r.v21, r.v11, r.v22, r.v12, r.chain_holds, r.slack
            );
            Ok(Outcome {
                command: "chain",
                result: serde_json::to_value(&r).expect("serializable"),
                text,
                exit: EXIT_OK,
            })
        }
        Command::Verify {
            suite,
            trials,
            norm,
            norm1,
            norm2,
            norm3,
            norm4,
        } => {
            let mut rng = RandomStream::new(common.seed);
            let pick = |arg: &Option<String>, default: VectorNormSpec| match arg {
                Some(a) => vector_norm(a),
                None => Ok(default),
            };
            let report = match suite {
                Suite::Lemma21 => {
                    let pair = GIndPair::new(pick(norm1, linf())?, pick(norm2, l1())?);
                    verify_lemma21(&pair, n, *trials, &mut rng)?
                }
                Suite::Lemma22 => {
                    let s = |g: f64, v: VectorNormSpec| VectorNormSpec::Scaled {
                        gamma: g,
                        inner: Box::new(v),
                    };
                    let a = GIndPair::new(pick(norm1, s(3.0, linf()))?, pick(norm2, s(6.0, l2()))?);
                    let b = GIndPair::new(pick(norm3, linf())?, pick(norm4, s(2.0, l2()))?);
                    verify_lemma22(&a, &b, n, *trials, &mut rng)?
                }
                Suite::Theorem23 => {
                    let spec = match norm {
                        Some(a) => matrix_norm(a)?,
                        None => MatrixNormSpec::Spectral,
                    };
                    verify_theorem23(&spec, n, *trials, &budget, &mut rng)?
                }
                Suite::PaperDemos => paper_demo_suite(common.seed)?,
            };
            debug_assert_eq!(report.suite_name, suite.name());
            let exit = if report.has_failure() {
                EXIT_FAIL
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                command: "verify",
                text: suite_text(&report),
                result: serde_json::to_value(&report).expect("serializable"),
                exit,
            })
        }
    }
}

fn suite_text(r: &SuiteReport) -> String {
    let mut out = format!("suite {} (seed {})", r.suite_name, r.seed);
    for c in &r.cases {
        let status = match c.status {
            CaseStatus::Pass => "PASS",
            CaseStatus::Fail => "FAIL",
            CaseStatus::Inconclusive => "INCONCLUSIVE",
        };
        out.push_str(&format!("\n[{status:<12}] {}", c.description));
        for v in &c.values {
            out.push_str(&format!("\n    {:<26} {}", v.name, v.value));
        }
        match &c.witness {
            Some(Witness::Vector(x)) => out.push_str(&format!("\n    witness {}", vector_text(x))),
            Some(Witness::Matrix(a)) => out.push_str(&format!("\n    witness\n{}", matrix_text(a))),
            Some(Witness::Matrices(ms)) => {
                for (k, a) in ms.iter().enumerate() {
                    out.push_str(&format!("\n    witness {}\n{}", k + 1, matrix_text(a)));
                }
            }
            None => {}
        }
    }
    out
}

fn exit_code(e: &LabError) -> i32 {
    match e {
        LabError::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_USAGE,
    }
}

/// Build the report document. `elapsed_ms` fields are the only
/// run-dependent content.
fn report_document(cli: &Cli, outcome: &Outcome, elapsed_ms: u64) -> Value {
    let budget = cli.common.budget();
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": outcome.command,
        "header": {
            "dim": cli.common.dim,
            "seed": cli.common.seed,
            "budget": budget,
        },
        "result": outcome.result,
        "exit_code": outcome.exit,
        "elapsed_ms": elapsed_ms,
    })
}

/// Run the command line `argv` (including the program name), writing the
/// human-readable output to `out` and diagnostics to `err`.
pub fn run_with_output<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let _ = writeln!(out, "{}", outcome.text);
    if let Some(path) = &cli.common.report {
        let doc = report_document(&cli, &outcome, start.elapsed().as_millis() as u64);
        let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            let _ = writeln!(err, "error: cannot write report {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    outcome.exit
}

/// Run the command line with standard output and standard error.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_output(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["normlab"];
        argv.extend_from_slice(args);
        let code = run_with_output(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_spectral() {
        let (code, out, _) = run(&["eval", "--norm", "spectral", "--matrix", "1,2;3,4"]);
        assert_eq!(code, 0);
        assert!(out.contains("5.46498570"), "{out}");
    }

    #[test]
    fn eval_vector_norm() {
        let (code, out, _) = run(&["eval", "--norm", "lp:2", "--vector", "3,4"]);
        assert_eq!(code, 0);
        assert!(out.contains("= 5"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["eval", "--norm", "nonsense", "--matrix", "1"]).0, 2);
        assert_eq!(run(&["eval", "--norm", "spectral", "--matrix", "1,2;3"]).0, 2);
        assert_eq!(
            run(&["eval", "--norm", r#"{"kind":"lp","p":0.5}"#, "--vector", "1"]).0,
            2
        );
        assert_eq!(run(&["probe-minimality", "--norm", "sigma", "--budget-tol", "0.5"]).0, 2);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn gind_and_chain() {
        let (code, out, _) = run(&["gind", "--norm1", "l1", "--norm2", "linf", "--matrix", "1,2;3,4"]);
        assert_eq!(code, 0);
        assert!(out.contains("g-ind value  4"), "{out}");
        let (code, out, _) = run(&["chain", "--norm1", "linf", "--norm2", "l1", "--matrix", "1,0;0,1"]);
        assert_eq!(code, 0);
        assert!(out.contains("chain holds: true"), "{out}");
    }

    #[test]
    fn extract_defaults_to_basis_and_ones() {
        let (code, out, _) = run(&["extract", "--norm", "maxcolsum"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4, "{out}");
    }

    #[test]
    fn probe_sigma() {
        let (code, out, _) = run(&[
            "probe-minimality",
            "--norm",
            "sigma",
            "--dim",
            "2",
            "--trials",
            "100",
            "--seed",
            "7",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("gap_found"), "{out}");
        assert!(out.contains("[1, 1]\n  [1, -1]"), "{out}");
    }

    #[test]
    fn lemma21_failure_pair_still_passes() {
        let (code, out, _) = run(&[
            "verify", "--suite", "lemma21", "--norm1", "l1", "--norm2", "linf", "--trials", "10",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("violated at A = B"), "{out}");
    }
}
