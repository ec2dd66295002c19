use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use toricmf::arith::qseries::SeriesJson;
use toricmf::arith::{sturm_bound, CyclotomicField, QSeries};
use toricmf::curve::{emit_equations, verify_equations_with};
use toricmf::eisenstein::basis::hecke_closed;
use toricmf::eisenstein::{eis_basis, hecke_classical};
use toricmf::modsym::{space_report, winding_analysis, Sign};
use toricmf::span::{span_report, Arithmetic, SpanOptions};
use toricmf::toric::{hecke_toric, toric_form, FanJson};
use toricmf::Error;

mod verify;

#[derive(Parser)]
#[command(name = "toricmf", version, about = "Toric modular forms, Manin symbols and equations of X_1(p)")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Add floating-point approximations of coefficients (display only).
    #[arg(long, global = true)]
    complex: bool,
    /// Log progress to standard error; repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Coefficient arithmetic for rank computations: exact, modular or auto.
    #[arg(long, global = true, default_value = "auto")]
    arith: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f_{N,deg} for a fan file.
    ToricForm {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Build the Eisenstein basis E_k(Γ_1(ℓ)).
    Eisenstein {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        precision: Option<usize>,
        /// Also check that T_p preserves the basis.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Apply T_p to a toric form by the lattice sum and compare with the
    /// classical coefficient action.
    Hecke {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Dimension of the toric span modulo Eisenstein series.
    Span {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: u32,
        /// Also test Hecke stability at this prime.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        precision: Option<usize>,
        /// Recompute at twice the precision and compare.
        #[arg(long)]
        check_doubling: bool,
    },
    /// Winding element analysis on Manin symbols.
    Modsym {
        #[arg(long)]
        level: u64,
        /// Sign quotient: + or -.  The winding analysis runs on the plus quotient.
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
        /// Restrict the Hecke polynomials to the cuspidal subspace.
        #[arg(long)]
        cuspidal: bool,
        #[arg(long, default_value_t = 7)]
        prime_bound: u64,
    },
    /// Emit (and optionally verify) the equations of X_1(p).
    X1Equations {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        precision: Option<usize>,
        /// Emit the relations as polynomial text instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Run every built-in check and report one verdict per check.
    VerifyAll,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Check(Value),
    Usage(String),
    Undecided(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CheckFailed(_) => Failure::Check(json!({ "verdict": "fail", "error": e.to_string() })),
            Error::Stabilization(_) | Error::HeckeSeparation(_) => Failure::Undecided(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Output {
    value: Value,
    text: Option<String>,
    passed: bool,
}

impl Output {
    fn report<T: Serialize>(v: &T) -> Self {
        let value = serde_json::to_value(v).expect("reports serialize");
        let passed = value.get("verdict").and_then(Value::as_str) != Some("fail");
        Output { value, text: None, passed }
    }
}

fn series_json(s: &QSeries<CyclotomicField>, complex: bool) -> SeriesJson {
    let j = s.to_json();
    if complex {
        j.with_complex(s)
    } else {
        j
    }
}

fn read_fan(path: &PathBuf) -> Result<FanJson, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(FanJson::parse(&text)?)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let arith: Arithmetic = cli.common.arith.parse()?;
    let complex = cli.common.complex;
    match &cli.command {
        Command::ToricForm { fan, precision } => {
            let fj = read_fan(fan)?;
            let (fan, deg) = fj.build()?;
            let ring = CyclotomicField::new(fj.level);
            let prec = precision.unwrap_or_else(|| sturm_bound(fj.rank as u32, fj.level));
            let f = toric_form(&ring, &fan, &deg, prec)?;
            Ok(Output::report(&json!({ "verdict": "computed", "series": series_json(&f, complex) })))
        }
        Command::Eisenstein { level, weight, precision, prime } => {
            let ring = CyclotomicField::new(*level);
            let bound = sturm_bound(*weight, *level);
            let prec = precision.unwrap_or(bound);
            let eb = eis_basis(&ring, *weight, prec)?;
            let closed = match prime {
                Some(p) => Some(hecke_closed(&ring, *weight, *p, prec.max(bound) * *p as usize)?),
                None => None,
            };
            let basis: Vec<SeriesJson> = eb.basis.iter().map(|b| series_json(b, complex)).collect();
            Ok(Output::report(&json!({
                "verdict": if closed == Some(false) { "fail" } else { "pass" },
                "level": level,
                "weight": weight,
                "dimension": eb.dim,
                "hecke_closed": closed,
                "basis": basis,
            })))
        }
        Command::Hecke { fan, prime, precision } => {
            let fj = read_fan(fan)?;
            let (fan, deg) = fj.build()?;
            let ring = CyclotomicField::new(fj.level);
            let k = fj.rank as u32;
            let prec = precision.unwrap_or_else(|| sturm_bound(k, fj.level));
            let lattice = hecke_toric(&ring, &fan, &deg, *prime, prec)?;
            let big = prec * *prime as usize;
            let form = toric_form(&ring, &fan, &deg, big)?;
            let diamond = toric_form(&ring, &fan, &deg.scaled(&fan, *prime as i64)?, big)?;
            let classical = hecke_classical(&form, &diamond, *prime, k).truncate(prec);
            Ok(Output::report(&json!({
                "verdict": if lattice == classical { "pass" } else { "fail" },
                "prime": prime,
                "series": series_json(&lattice, complex),
            })))
        }
        Command::Span { level, weight, prime, precision, check_doubling } => {
            let opts = SpanOptions {
                precision: *precision,
                arithmetic: Some(arith),
                hecke_prime: *prime,
                check_doubling: *check_doubling,
            };
            Ok(Output::report(&span_report(*weight, *level, &opts)?))
        }
        Command::Modsym { level, sign, cuspidal, prime_bound } => {
            let sign = match sign.as_str() {
                "+" | "plus" => Sign::Plus,
                "-" | "minus" => Sign::Minus,
                other => return Err(Failure::Usage(format!("sign must be + or -, got {other:?}"))),
            };
            let space = space_report(*level, sign, *prime_bound, *cuspidal)?;
            let winding = match sign {
                Sign::Plus => Some(winding_analysis(*level, *prime_bound)?),
                _ => None,
            };
            Ok(Output::report(&json!({
                "verdict": "computed",
                "space": space,
                "rank0_dimension": winding.as_ref().map(|w| w.rank0_dimension),
                "winding": winding,
            })))
        }
        Command::X1Equations { prime, verify, precision, text } => {
            let eqs = emit_equations(*prime)?;
            let mut out = if *verify {
                let prec = precision.unwrap_or_else(|| sturm_bound(2, *prime));
                let report = verify_equations_with(*prime, prec, arith)?;
                Output::report(&json!({ "equations": eqs, "verification": report, "verdict": report.verdict }))
            } else {
                Output::report(&json!({ "equations": eqs, "verdict": "emitted" }))
            };
            if *text {
                out.text = Some(eqs.to_text());
            }
            Ok(out)
        }
        Command::VerifyAll => Ok(Output::report(&verify::verify_all())),
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.common.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{body}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.common.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    if let Some(n) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("{}", json!({ "verdict": "error", "kind": "usage", "error": format!("could not configure {n} jobs: {e}") }));
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|o| {
        let body = match &o.text {
            Some(t) => t.clone(),
            None => serde_json::to_string_pretty(&o.value).expect("json"),
        };
        emit(&cli, &body)?;
        Ok(o.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(v)) => {
            let _ = emit(&cli, &serde_json::to_string_pretty(&v).expect("json"));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", json!({ "verdict": "error", "kind": "usage", "error": msg }));
            ExitCode::from(2)
        }
        Err(Failure::Undecided(msg)) => {
            eprintln!("{}", json!({ "verdict": "error", "kind": "resource", "error": msg }));
            ExitCode::from(3)
        }
    }
}
