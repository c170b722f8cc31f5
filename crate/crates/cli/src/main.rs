//! `hkr`: run the verification suites and small computations from the shell.
//!
//! Exit status: 0 success, 1 a gating check failed, 2 usage or input error,
//! 3 I/O failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hkr_core::atiyah::{det_square_legs, duflo_det, verify_chain, AtiyahTensor};
use hkr_core::harness::text::{parse_atiyah, parse_chain, parse_ext, parse_lie_basis};
use hkr_core::harness::{demo, run_suite, Suite, SuiteConfig, Topic};
use hkr_core::hochschild::{hkr, hoch_diff};
use hkr_core::lie::{bar_jacobians, dexp_direct, dexp_formula, exp_pullback_failure, jacobians, SquareMatrix};
use hkr_core::Error;

#[derive(Parser)]
#[command(name = "hkr", version, about = "Exact checks for odd symmetric algebras, Hochschild chains and Todd-class identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and print a report.
    Verify(VerifyArgs),
    /// Print a computed table: todd-table, hrr-table or dexp.
    Demo {
        topic: String,
        /// `key=value` parameters, e.g. `N=6` or `z=E12 w=E23`.
        params: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Normalize an exterior element such as `3/2*x{1,3} - x{2}`.
    Ext {
        expr: String,
        /// Number of generators; defaults to the largest index used.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print a Hochschild chain such as `w[x1; x2]`, its differential and HKR image.
    Chain {
        expr: String,
        /// Number of polynomial variables; defaults to the largest index used.
        #[arg(long)]
        nvars: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the Duflo determinant and the commutation-gated identities for a tensor file.
    Atiyah {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the bracket table of a Lie basis file and check its exponential identities.
    Lie {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated suite names or prefixes, or `all`.
    #[arg(long)]
    suite: Option<String>,
    /// Largest m for the odd-algebra and Atiyah suites (1..=4).
    #[arg(long)]
    dim: Option<usize>,
    /// Largest n for projective spaces.
    #[arg(long)]
    rr_dim: Option<usize>,
    /// Largest matrix size for the Lie suite.
    #[arg(long)]
    lie_dim: Option<usize>,
    /// Longest exhaustively enumerated Hochschild word.
    #[arg(long)]
    word_len: Option<usize>,
    /// Truncation order of formal series.
    #[arg(long)]
    order: Option<usize>,
    /// Override every random sample count.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Record wall time per check. Reports then differ between runs.
    #[arg(long)]
    timings: bool,
    /// `key = value` file with the same settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, hide = true)]
    inject_failure: bool,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn config(a: &VerifyArgs) -> Result<SuiteConfig, Failure> {
    let mut cfg = SuiteConfig::default();
    if let Some(p) = &a.config {
        cfg.apply_file_text(&read(p)?)?;
    }
    if let Some(s) = &a.suite {
        cfg.suites = Suite::parse_list(s)?;
    }
    let sizes = [(&mut cfg.dim, a.dim), (&mut cfg.rr_dim, a.rr_dim), (&mut cfg.lie_dim, a.lie_dim), (&mut cfg.word_len, a.word_len), (&mut cfg.order, a.order)];
    for (slot, v) in sizes {
        if let Some(v) = v {
            *slot = v;
        }
    }
    if a.samples.is_some() {
        cfg.samples = a.samples;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if a.out.is_some() {
        cfg.out = a.out.clone();
    }
    cfg.timings |= a.timings;
    cfg.inject_failure = a.inject_failure;
    cfg.validate()?;
    Ok(cfg)
}

fn verify(a: &VerifyArgs) -> Result<bool, Failure> {
    let cfg = config(a)?;
    let report = run_suite(&cfg)?;
    let json = report.to_json();
    if let Some(p) = &cfg.out {
        fs::write(p, &json).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?;
    }
    print!("{}", if a.json { json } else { report.to_text() });
    Ok(report.ok())
}

fn emit(as_json: bool, value: serde_json::Value, text: String) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json value serializes"));
    } else {
        print!("{text}");
    }
}

fn atiyah(path: &Path, as_json: bool) -> Result<(), Failure> {
    let a: AtiyahTensor = parse_atiyah(&read(path)?)?;
    let f = duflo_det(&a);
    let chain = verify_chain(&a);
    let (lhs, rhs) = det_square_legs(&a);
    let text = format!(
        "A: {a}\nf = det(At/(exp(At)−1)) = {f}\n1^m ∘ f = Φ_L^m ∘ 1: {}\nΦ_R and Φ_L commute: {}\n{}\n",
        lhs == rhs,
        chain.commutes,
        serde_json::to_string_pretty(&chain).expect("report serializes"),
    );
    let value = json!({"tensor": a.to_string(), "f": f.to_string(), "det_square": lhs == rhs, "chain": chain});
    emit(as_json, value, text);
    Ok(())
}

fn lie(path: &Path, as_json: bool) -> Result<(), Failure> {
    let basis = parse_lie_basis(&read(path)?)?;
    let table = basis.closure_table();
    // a generic point of the span: the sum of the basis elements
    let z = basis.elements().iter().fold(SquareMatrix::zero(basis.size()), |acc, x| acc.add(x));
    let dexp_ok = basis.elements().iter().all(|w| match (dexp_direct(&z, w), dexp_formula(&z, w)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    });
    let jac = jacobians(&z, &basis).map(|j| j.direct == j.formula).map_err(|e| e.to_string());
    let bar = bar_jacobians(&z, &basis).map(|j| j.direct == j.formula).map_err(|e| e.to_string());
    let pullback = exp_pullback_failure(&basis).is_none();
    let verdict = |r: &Result<bool, String>| match r {
        Ok(b) => b.to_string(),
        Err(e) => format!("not evaluated ({e})"),
    };
    let mut text = String::new();
    for line in &table {
        text += &format!("{line}\n");
    }
    text += &format!(
        "Z = {z}\nd(exp)_Z direct = formula on the basis: {dexp_ok}\nJacobian of exp: {}\nJacobian of exp(−·): {}\nleft-invariant fields in exponential coordinates: {pullback}\n",
        verdict(&jac),
        verdict(&bar)
    );
    let value = json!({
        "brackets": table, "z": z.to_string(), "dexp": dexp_ok,
        "jacobian": verdict(&jac), "bar_jacobian": verdict(&bar), "exp_pullback": pullback,
    });
    emit(as_json, value, text);
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.cmd {
        Cmd::Verify(a) => return verify(&a),
        Cmd::Demo { topic, params, json } => {
            let out = demo(topic.parse::<Topic>()?, &params)?;
            emit(json, out.json, out.text);
        }
        Cmd::Ext { expr, dim, json } => {
            let e = parse_ext(&expr, dim)?;
            let terms: Vec<_> = e.terms().map(|(l, c)| json!({"label": l.to_string(), "coeff": c.to_string(), "degree": l.len()})).collect();
            emit(json, json!({"element": e.to_string(), "terms": terms}), format!("{e}\n"));
        }
        Cmd::Chain { expr, nvars, json } => {
            let c = parse_chain(&expr, nvars)?;
            let (d, h) = (hoch_diff(&c), hkr(&c));
            emit(
                json,
                json!({"chain": c.to_string(), "differential": d.to_string(), "hkr": h.to_string()}),
                format!("c     = {c}\nb(c)  = {d}\nhkr(c) = {h}\n"),
            );
        }
        Cmd::Atiyah { tensor, json } => atiyah(&tensor, json)?,
        Cmd::Lie { basis, json } => lie(&basis, json)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("hkr: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("hkr: {m}");
            ExitCode::from(3)
        }
    }
}
