use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use discrepancy_core::report::{self, Command, Format, RunConfig};

/// Exact periodic discrepancy of rational point sets.
///
/// Exit status: 0 when every check holds or is inconclusive, 1 when a
/// verdict is VIOLATED or an identity check mismatches, 2 on usage or I/O
/// errors.
#[derive(Parser)]
#[command(name = "discrepancy", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate point sets and print them as JSON.
    Gen(Opts),
    /// L_inf, L_2, L_q and sub-torus means of each set.
    Eval(Opts),
    /// Check the mean-value identity at sampled anchors.
    Identity(Opts),
    /// Exact L_inf, L_inf* and every lambda*_J with witnesses.
    Extremal(Opts),
    /// L_q and certified bounds on the shifted norm L_q*.
    Lq(Opts),
    /// Verdicts for the inequality chain.
    Verify(Opts),
    /// Run verify over generator ranges and emit plot-ready CSV.
    Sweep(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Default)]
struct Opts {
    /// JSON config mirroring these flags; flags given here win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Point-set JSON file (one set or an array).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator spec, e.g. korobov:n=5..13,a=2,d=2 (repeatable).
    #[arg(long)]
    generator: Vec<String>,
    /// Exponents, comma separated, e.g. 1,2,4 or 1/2.
    #[arg(long)]
    q: Vec<String>,
    /// Inequalities, e.g. lemma1,lemma2[1,2],corollary or all.
    #[arg(long)]
    inequalities: Option<String>,
    /// Shifts evaluated (and grid nodes) for L_q* bounds in the first round.
    #[arg(long)]
    budget: Option<usize>,
    /// Extra L_q* search rounds before a verdict is left inconclusive.
    #[arg(long)]
    escalations: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo samples for non-even q.
    #[arg(long)]
    samples: Option<u64>,
    /// Anchors per set for the identity check.
    #[arg(long)]
    anchors: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report path for sweep.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Record wall-clock timings (makes output run-dependent).
    #[arg(long)]
    timing: bool,
    /// Corrupt one identity evaluation per set.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

impl Opts {
    fn into_config(self) -> Result<RunConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                RunConfig::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => RunConfig::default(),
        };
        if self.input.is_some() {
            cfg.input = self.input;
        }
        if !self.generator.is_empty() {
            cfg.generator = self.generator;
        }
        if !self.q.is_empty() {
            cfg.q = self.q;
        }
        if let Some(s) = self.inequalities {
            cfg.inequalities = s;
        }
        if let Some(b) = self.budget {
            cfg.verify.shift_evaluations = b;
            cfg.verify.upper_nodes = b;
        }
        if let Some(e) = self.escalations {
            cfg.verify.escalations = e;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(s) = self.samples {
            cfg.samples = s;
        }
        if let Some(a) = self.anchors {
            cfg.anchors = a;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if self.report.is_some() {
            cfg.report = self.report;
        }
        if let Some(f) = self.format {
            cfg.format = Some(match f {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            });
        }
        cfg.timing |= self.timing;
        cfg.inject_fault |= self.inject_fault;
        Ok(cfg)
    }
}

fn write_output(path: Option<&PathBuf>, body: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).and_then(|_| out.flush()).map_err(|e| e.to_string())
        }
    }
}

fn execute(command: Command, opts: Opts) -> Result<i32, String> {
    let cfg = opts.into_config()?;
    if command == Command::Gen {
        let body = report::generate(&cfg).map_err(|e| e.to_string())?;
        write_output(cfg.out.as_ref(), &(body + "\n"))?;
        return Ok(0);
    }
    let outcome = report::run(command, &cfg).map_err(|e| e.to_string())?;
    let rep = &outcome.report;
    let json = rep.to_json().map_err(|e| e.to_string())? + "\n";
    match (&outcome.csv, cfg.format_for(command)) {
        (Some(csv), Format::Csv) => {
            write_output(cfg.out.as_ref(), csv)?;
            if let Some(p) = &cfg.report {
                write_output(Some(p), &json)?;
            }
        }
        _ => write_output(cfg.out.as_ref(), &json)?,
    }
    let s = &rep.summary;
    if s.inconclusive > 0 {
        eprintln!("warning: {} inconclusive verdicts", s.inconclusive);
    }
    if s.errors > 0 {
        eprintln!("warning: {} items failed; see their error fields", s.errors);
    }
    if s.violated > 0 {
        eprintln!("{} verdicts VIOLATED", s.violated);
    }
    if s.mismatches > 0 {
        eprintln!("{} identity mismatches", s.mismatches);
    }
    Ok(rep.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Cmd::Gen(o) => (Command::Gen, o),
        Cmd::Eval(o) => (Command::Eval, o),
        Cmd::Identity(o) => (Command::Identity, o),
        Cmd::Extremal(o) => (Command::Extremal, o),
        Cmd::Lq(o) => (Command::Lq, o),
        Cmd::Verify(o) => (Command::Verify, o),
        Cmd::Sweep(o) => (Command::Sweep, o),
    };
    match execute(command, opts) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
