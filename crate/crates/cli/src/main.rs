//! `rees-kit`: command-line front end for the Rees algebra toolkit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rees_core::instance::Instance;
use rees_core::rees::{Frame, Method, Target};
use rees_core::ring::{Field, MonomialOrder};

use rees_kit::commands::{run, Command, Opts, RunError};
use rees_kit::report::{self, FailureKind, RunReport, Status, Verdict};
use rees_kit::suite::{run_suite, suite_failure, summary_line, SuiteSpec};

const EXIT_VALIDATION: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "rees-kit",
    version,
    about = "Defining ideals of Rees algebras of almost linearly presented height two ideals"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Clone)]
struct Global {
    /// Coefficient field: `q` or `gf:<p>`.
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    field: Field,
    /// Monomial order: `degrevlex` or `lex`.
    #[arg(long, global = true, default_value = "degrevlex", value_parser = parse_order)]
    order: MonomialOrder,
    /// Abort after this many seconds (exit code 4).
    #[arg(long, global = true)]
    timeout: Option<f64>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Leave timings out so reports are byte-identical across runs.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the setting conditions.
    Validate { path: PathBuf },
    /// Normal shape, case and formula branch.
    Classify { path: PathBuf },
    /// Kronecker invariants of the linear part below the first row.
    Pencil { path: PathBuf },
    /// Symmetric algebra equations and their Gröbner basis.
    Sym { path: PathBuf },
    /// Jacobian dual for a frame (default: the frame of the case).
    Jdual {
        path: PathBuf,
        #[arg(long, value_parser = parse_frame)]
        frame: Option<Frame>,
    },
    /// The defining ideal.
    Defining {
        path: PathBuf,
        #[arg(long, default_value = "both")]
        method: Method,
    },
    /// Every check on one instance, including its expected values.
    Verify { path: PathBuf },
    /// The bundled corpus plus seeded random instances.
    Suite {
        #[arg(default_value = "instances")]
        dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Matrix sizes `n` for random instances.
        #[arg(long, value_delimiter = ',', default_values_t = [5usize, 6])]
        sizes: Vec<usize>,
        /// Restrict random instances to one branch, e.g. `casei_long_m`.
        #[arg(long, value_parser = parse_target)]
        target: Option<Target>,
        /// Skip the corpus directory.
        #[arg(long)]
        no_corpus: bool,
    },
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse(s).ok_or_else(|| format!("expected q or gf:<p>, got {s:?}"))
}

fn parse_order(s: &str) -> Result<MonomialOrder, String> {
    match MonomialOrder::parse(s) {
        Some(o @ (MonomialOrder::DegRevLex | MonomialOrder::Lex)) => Ok(o),
        _ => Err(format!("expected degrevlex or lex, got {s:?}")),
    }
}

fn parse_frame(s: &str) -> Result<Frame, String> {
    match s {
        "xyzw0" => Ok(Frame::XYZW0),
        "xyz2w0" => Ok(Frame::XYZ2W0),
        "xy" => Ok(Frame::XY),
        _ => Err(format!("expected xyzw0, xyz2w0 or xy, got {s:?}")),
    }
}

fn parse_target(s: &str) -> Result<Target, String> {
    Target::ALL
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| {
            let names: Vec<String> = Target::ALL.iter().map(Target::name).collect();
            format!("unknown target {s:?}; one of {}", names.join(", "))
        })
}

enum Outcome {
    Single(RunReport),
    Suite(report::SuiteReport),
}

fn load(path: &Path) -> Result<Instance, RunError> {
    Instance::load(path).map_err(|e| RunError::Io(e.to_string()))
}

fn execute(cmd: Cmd, opts: Opts) -> Result<Outcome, RunError> {
    let single = |path: &Path, c: Command, opts: &Opts| -> Result<Outcome, RunError> {
        Ok(Outcome::Single(run(&load(path)?, c, opts)?))
    };
    match cmd {
        Cmd::Validate { path } => single(&path, Command::Validate, &opts),
        Cmd::Classify { path } => single(&path, Command::Classify, &opts),
        Cmd::Pencil { path } => single(&path, Command::Pencil, &opts),
        Cmd::Sym { path } => single(&path, Command::Sym, &opts),
        Cmd::Jdual { path, frame } => single(&path, Command::Jdual, &Opts { frame, ..opts }),
        Cmd::Defining { path, method } => {
            single(&path, Command::Defining, &Opts { method, ..opts })
        }
        Cmd::Verify { path } => single(&path, Command::Verify, &opts),
        Cmd::Suite {
            dir,
            random,
            seed,
            sizes,
            target,
            no_corpus,
        } => {
            let corpus = if no_corpus {
                Vec::new()
            } else {
                Instance::load_dir(&dir).map_err(|e| RunError::Io(e.to_string()))?
            };
            let spec = SuiteSpec {
                corpus,
                random,
                seed,
                sizes,
                target,
            };
            Ok(Outcome::Suite(run_suite(&spec, &opts)?))
        }
    }
}

fn print_report(r: &RunReport) {
    println!(
        "{} [{}] n = {}, field {}, {}",
        r.instance, r.command, r.n, r.field, r.order
    );
    if let Some(c) = &r.case {
        let branch = r.branch.as_deref().unwrap_or("-");
        println!("  case {} ({}), branch {branch}", c.case, c.evidence);
    }
    if let Some(p) = &r.pencil {
        println!(
            "  pencil {:?}, invariant factors {:?}",
            p.summary, p.invariant_factors
        );
    }
    for op in &r.normalization {
        println!("  normalize: {op}");
    }
    for (name, m) in &r.matrices {
        println!("  {name}:");
        for row in m.entries.chunks(m.cols.max(1)) {
            println!("    [{}]", row.join(", "));
        }
    }
    for (name, gens) in &r.ideals {
        println!("  {name}:");
        for g in gens {
            println!("    {g}");
        }
    }
    if let Some(m) = r.saturation_exponent {
        println!("  saturation exponent {m}");
    }
    for c in &r.checks {
        let tag = match c.status {
            Status::Passed => "pass",
            Status::Failed => "FAIL",
            Status::Skipped => "skip",
            Status::Noted => "note",
        };
        match &c.detail {
            Some(d) => println!("  [{tag}] {}: {d}", c.name),
            None => println!("  [{tag}] {}", c.name),
        }
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
    println!("{}", summary_line(r));
}

fn write_json<T: serde::Serialize>(value: &T, dest: &Path) -> Result<(), RunError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    if dest == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(dest, text)
            .map_err(|e| RunError::Io(format!("cannot write {}: {e}", dest.display())))
    }
}

fn exit_for(kind: Option<FailureKind>, verdict: Verdict) -> u8 {
    match (kind, verdict) {
        (Some(FailureKind::Mismatch), _) => EXIT_MISMATCH,
        (Some(FailureKind::Validation), _) => EXIT_VALIDATION,
        (None, Verdict::Fail) => EXIT_MISMATCH,
        (None, Verdict::Pass) => 0,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let opts = Opts {
        field: g.field,
        order: g.order,
        method: Method::Both,
        frame: None,
        deterministic: g.deterministic,
    };
    let cmd = cli.command;
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(execute(cmd, opts));
    });
    let result = match g.timeout {
        Some(secs) => match rx.recv_timeout(Duration::from_secs_f64(secs)) {
            Ok(r) => r,
            Err(_) => {
                eprintln!("rees-kit: timed out after {secs} s");
                return ExitCode::from(EXIT_TIMEOUT);
            }
        },
        None => rx.recv().expect("worker finished"),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(RunError::Io(msg)) => {
            eprintln!("rees-kit: {msg}");
            return ExitCode::from(EXIT_IO);
        }
    };
    let to_stdout = g.json.as_deref() == Some(Path::new("-"));
    let (code, written) = match &outcome {
        Outcome::Single(r) => {
            if !to_stdout {
                print_report(r);
            }
            (
                exit_for(r.worst_failure(), r.verdict),
                g.json.as_ref().map(|p| write_json(r, p)),
            )
        }
        Outcome::Suite(s) => {
            if !to_stdout {
                for r in &s.reports {
                    println!("{}", summary_line(r));
                }
                println!("suite: {} passed, {} failed", s.passed, s.failed);
            }
            (
                exit_for(suite_failure(s), s.verdict),
                g.json.as_ref().map(|p| write_json(s, p)),
            )
        }
    };
    if let Some(Err(RunError::Io(msg))) = written {
        eprintln!("rees-kit: {msg}");
        return ExitCode::from(EXIT_IO);
    }
    ExitCode::from(code)
}
