//! Command-line front end.
//!
//! Exit codes: 0 success (halted, passed), 1 error or failed check, 2 fuel
//! exhausted.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bbc::barrec::{check_psi_unfolding, psi};
use bbc::compiler::{builtin_env, compile_str};
use bbc::fixture::{load_fixture, parse_fixture, Fixture};
use bbc::machine::{TraceEvent, TraceMode};
use bbc::oracle_lab::{extract_witness, WitnessError};
use bbc::suites::{run_suite, theorem5_fixtures, SuiteConfig, SUITE_NAMES};
use bbc::syntax::{Printer, TermParser};
use bbc::term::{mk_numeral, Term, DEFAULT_N};
use bbc::{Machine, Process, SeqRegistry, Status};

/// `println!` that ignores a closed stdout.
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

const OK: u8 = 0;
const FAILED: u8 = 1;
const OUT_OF_FUEL: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Trace {
    Off,
    Summary,
    Verbose,
    Jsonl,
}

#[derive(Parser, Debug)]
#[command(name = "bbc", version, about = "Run, compile and check terms of the B, C, I, K, W, cc machine")]
struct Cli {
    /// Step budget per run. Suites use their own budgets unless this is given.
    #[arg(long, global = true)]
    fuel: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "off")]
    trace: Trace,
    /// Fixture file whose closed sequences become oracles `@name`; repeatable.
    #[arg(long = "seq", global = true)]
    seq: Vec<PathBuf>,
    /// Seed for generated samples.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Draw a fresh seed instead (printed, so the run can be repeated).
    #[arg(long, global = true)]
    randomize: bool,
    /// Largest q-variable index.
    #[arg(long = "N", global = true, default_value_t = DEFAULT_N)]
    n: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Execute a process such as "C * q0 . q1 . q2 . pi0".
    Run { process: String },
    /// Compile a λ-term file to combinators.
    Compile {
        file: PathBuf,
        /// Use the η rule `λx (M)x = M`.
        #[arg(long)]
        eta: bool,
    },
    /// Extract a witness from a fixture defining `theta` and `f`.
    Witness { fixture: PathBuf },
    /// Run a property suite, or `all`.
    Suite {
        name: String,
        /// Override the suite's sample count.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Oracle-bound reproduction on fixtures defining `U` and `xs`; the
    /// bundled fixtures when none are given.
    Theorem5 {
        fixtures: Vec<PathBuf>,
        /// Candidates per fixture.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Show the bar recursion operator unfolding on variables.
    PsiDemo {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

struct Ctx {
    cli: Cli,
    registry: SeqRegistry,
}

impl Ctx {
    fn fuel(&self) -> usize {
        self.cli.fuel.unwrap_or(100_000)
    }

    fn seed(&self) -> u64 {
        if self.cli.randomize {
            let seed = rand::random();
            eprintln!("seed: {seed}");
            seed
        } else {
            self.cli.seed
        }
    }

    fn printer(&self) -> Printer<'_> {
        Printer::with_registry(&self.registry)
    }

    fn fixture(&self, path: &Path) -> Result<Fixture, String> {
        load_fixture(path, &self.registry, self.cli.n).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.fuel == Some(0) {
        eprintln!("error: --fuel must be positive");
        return ExitCode::from(FAILED);
    }
    let ctx = Ctx { cli, registry: SeqRegistry::new() };
    for path in &ctx.cli.seq {
        if let Err(e) = ctx.fixture(path) {
            eprintln!("error: {e}");
            return ExitCode::from(FAILED);
        }
    }
    let code = match &ctx.cli.command {
        Command::Run { process } => cmd_run(&ctx, process),
        Command::Compile { file, eta } => cmd_compile(&ctx, file, *eta),
        Command::Witness { fixture } => cmd_witness(&ctx, fixture),
        Command::Suite { name, samples } => cmd_suite(&ctx, name, *samples),
        Command::Theorem5 { fixtures, samples } => cmd_theorem5(&ctx, fixtures, *samples),
        Command::PsiDemo { k } => cmd_psi_demo(&ctx, *k),
    };
    ExitCode::from(code.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        FAILED
    }))
}

/// Runs with the configured trace, streaming events to stdout.
fn traced_run(ctx: &Ctx, process: &Process) -> Result<bbc::RunOutcome, String> {
    let machine = Machine::new(&ctx.registry);
    let printer = ctx.printer();
    let mode = match ctx.cli.trace {
        Trace::Off => TraceMode::Off,
        Trace::Summary => TraceMode::Summary,
        Trace::Verbose | Trace::Jsonl => TraceMode::Verbose,
    };
    let trace = ctx.cli.trace;
    let mut stdout = std::io::stdout().lock();
    // a closed pipe only ends the listing, not the run
    let mut sink = |ev: &TraceEvent| {
        let line = match trace {
            Trace::Jsonl => ev.json(&printer),
            Trace::Verbose => format!("{}   {}", ev.line(), ev.process.as_ref().map(|p| printer.process(p)).unwrap_or_default()),
            _ => ev.line(),
        };
        let _ = writeln!(stdout, "{line}");
    };
    machine.run_streaming(process, ctx.fuel(), mode, &mut sink).map_err(|e| e.to_string())
}

fn cmd_run(ctx: &Ctx, src: &str) -> Result<u8, String> {
    let process = TermParser::new(src, Some(&ctx.registry), ctx.cli.n)
        .and_then(TermParser::parse_process)
        .map_err(|e| e.to_string())?;
    let out = traced_run(ctx, &process)?;
    let printer = ctx.printer();
    let status = match out.status {
        Status::Halted(stuck) => format!("halted: {stuck}"),
        Status::FuelExhausted => "fuel exhausted".to_string(),
    };
    if ctx.cli.trace == Trace::Jsonl {
        out!("{}", json!({ "final": printer.process(&out.final_process), "status": status, "steps": out.steps }));
    } else {
        out!("final: {}", printer.process(&out.final_process));
        out!("status: {status}");
        out!("steps: {}", out.steps);
    }
    Ok(if out.halted() { OK } else { OUT_OF_FUEL })
}

fn cmd_compile(ctx: &Ctx, file: &Path, eta: bool) -> Result<u8, String> {
    let src = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let env = builtin_env().with_registry(&ctx.registry).with_n(ctx.cli.n).with_eta(eta);
    let term = compile_str(&src, &env).map_err(|e| format!("{}:{e}", file.display()))?;
    out!("{}", ctx.printer().term(&term));
    Ok(OK)
}

fn cmd_witness(ctx: &Ctx, path: &Path) -> Result<u8, String> {
    let fx = ctx.fixture(path)?;
    let theta = fx.term("theta").ok_or("fixture defines no 'term theta'")?;
    let f = fx.predicate.as_ref().ok_or("fixture defines no 'f { support: [...] }'")?;
    if !theta.is_proof_like() {
        eprintln!("warning: theta is not proof-like ({:?}); trying anyway", theta.classify());
    }
    let machine = Machine::new(&ctx.registry);
    match extract_witness(&machine, theta, f, ctx.fuel()) {
        Ok(w) => {
            out!("witness n={} {}", w.n, if w.cross_checked { "ok" } else { "unchecked" });
            out!("halted: {}", ctx.printer().process(&w.halted));
            out!("steps: {}", w.steps);
            Ok(if w.cross_checked { OK } else { FAILED })
        }
        Err(e @ WitnessError::FuelExhausted { .. }) => {
            out!("no witness: {e}");
            Ok(OUT_OF_FUEL)
        }
        Err(e) => {
            out!("no witness: {e}");
            Ok(FAILED)
        }
    }
}

fn suite_config(ctx: &Ctx, samples: Option<usize>) -> SuiteConfig {
    let base = SuiteConfig::default();
    SuiteConfig { seed: ctx.seed(), samples, fuel: ctx.cli.fuel.unwrap_or(base.fuel), n: ctx.cli.n }
}

fn cmd_suite(ctx: &Ctx, name: &str, samples: Option<usize>) -> Result<u8, String> {
    let cfg = suite_config(ctx, samples);
    let names: Vec<&str> = if name == "all" { SUITE_NAMES.to_vec() } else { vec![name] };
    // suites are independent; results are printed in suite order
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = names.iter().map(|n| s.spawn(|| run_suite(n, &cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut all_ok = true;
    for result in results {
        let report = result.map_err(|e| e.to_string())?;
        all_ok &= report.ok();
        out!("{} {report}", if report.ok() { "PASS" } else { "FAIL" });
    }
    Ok(if all_ok { OK } else { FAILED })
}

fn cmd_theorem5(ctx: &Ctx, files: &[PathBuf], samples: Option<usize>) -> Result<u8, String> {
    let cfg = suite_config(ctx, samples);
    let report = if files.is_empty() {
        run_suite("theorem5", &cfg)
    } else {
        let mut fixtures = Vec::new();
        for f in files {
            let src = std::fs::read_to_string(f).map_err(|e| format!("{}: {e}", f.display()))?;
            // parse once here so errors name the file
            parse_fixture(&src, &SeqRegistry::new(), ctx.cli.n).map_err(|e| format!("{}: {e}", f.display()))?;
            fixtures.push((f.display().to_string(), src));
        }
        theorem5_fixtures(fixtures, &cfg)
    }
    .map_err(|e| e.to_string())?;
    out!("{} {report}", if report.ok() { "PASS" } else { "FAIL" });
    Ok(if report.ok() { OK } else { FAILED })
}

fn cmd_psi_demo(ctx: &Ctx, k: usize) -> Result<u8, String> {
    let printer = ctx.printer();
    let start = Process::with_args(psi(), [Term::q(1), Term::q(0), mk_numeral(k), Term::q(2)]);
    out!("Ψ = {}", printer.term(&psi()));
    out!("run Ψ·g·u·k̄·f with g = q1, u = q0, f = q2, k = {k}");
    let out = traced_run(ctx, &start)?;
    if !out.halted() {
        out!("fuel exhausted after {} steps", out.steps);
        return Ok(OUT_OF_FUEL);
    }
    out!("halted after {} steps at u applied to one frame argument s:", out.steps);
    out!("  {}", printer.process(&out.final_process));
    let Some(s) = out.final_process.stack.top().cloned() else {
        out!("no frame argument");
        return Ok(FAILED);
    };
    let machine = Machine::new(&ctx.registry);
    for i in 0..=k + 1 {
        let probe = machine.run(&Process::with_args(s.clone(), [mk_numeral(i)]), ctx.fuel(), TraceMode::Off).map_err(|e| e.to_string())?;
        let note = if i < k { "reads f below k" } else { "enters g with the next stage" };
        out!("  s #{i} ≻ {}   ({note})", printer.process(&probe.final_process));
    }
    let mut ok = true;
    for j in 0..=k {
        let verdict = check_psi_unfolding(&machine, j, ctx.fuel()).map_err(|e| e.to_string())?;
        ok &= verdict.is_pass();
        out!("unfolding contract k={j}: {verdict}");
    }
    Ok(if ok { OK } else { FAILED })
}
