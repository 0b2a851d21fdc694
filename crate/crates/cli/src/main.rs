use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use secant_quandle::braid::{apply_move, parse_move_script, plat_structure};
use secant_quandle::finite::{count_colorings, parse_quandle_spec};
use secant_quandle::harness::{run_verify, HarnessConfig, PipelineOptions};
use secant_quandle::presentation::{build_plat_presentation, simplify};
use secant_quandle::trace::build_secant_trace;
use secant_quandle::trisecant::realize_generic;
use secant_quandle::{parse_braid_word, BraidWord, Error};

/// Secant-quandle invariants of braids and plat closures.
#[derive(Parser, Debug)]
#[command(name = "sq", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Layout seed; 0 is the unperturbed layout.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Perturbation attempts before giving up on genericity.
    #[arg(long, global = true, default_value_t = 5)]
    retries: usize,
    /// One record per line, no headers.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the trisecant events of a braid word.
    Trace { word: String },
    /// Print the braid top-map.
    Sq { word: String },
    /// Print the plat-closure presentation.
    Plat {
        word: String,
        /// Apply the count-preserving reduction first.
        #[arg(long)]
        simplify: bool,
    },
    /// Count colorings of the plat closure.
    Color {
        word: String,
        /// `dihedral:m`, `trivial:m`, `tetrahedral` or a table file; repeatable.
        #[arg(long = "quandle")]
        quandles: Vec<String>,
    },
    /// Run the invariance harness.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Apply a move script (file, or `-` for stdin) to a word.
    Moves { word: String, script: PathBuf },
}

enum Failure {
    Usage(String),
    Exhausted(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GenericityExhausted { .. } | Error::Genericity(_) => Failure::Exhausted(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn read_arg(word: &str) -> Result<BraidWord, Failure> {
    if word == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(e.to_string()))?;
        return Ok(parse_braid_word(&s)?);
    }
    Ok(parse_braid_word(word)?)
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(e.to_string()))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let g = &cli.global;
    let opts = PipelineOptions { seed: g.seed, retries: g.retries };
    let io_err = |e: io::Error| Failure::Usage(e.to_string());
    match &cli.command {
        Command::Trace { word } => {
            let w = read_arg(word)?;
            let r = realize_generic(&w, opts.seed, opts.retries)?;
            if !g.porcelain {
                writeln!(out, "# {w}: {} events, {} retries", r.events.len(), r.retries).map_err(io_err)?;
            }
            for e in &r.events {
                writeln!(out, "{e}").map_err(io_err)?;
            }
        }
        Command::Sq { word } => {
            let w = read_arg(word)?;
            let p = secant_quandle::harness::run_braid(&w, opts)?;
            for line in p.sq.top_lines() {
                writeln!(out, "{line}").map_err(io_err)?;
            }
        }
        Command::Plat { word, simplify: reduce } => {
            let w = read_arg(word)?;
            let plat = plat_structure(&w)?;
            let r = realize_generic(&w, opts.seed, opts.retries)?;
            let trace = build_secant_trace(&r.events, w.strands())?;
            let mut p = build_plat_presentation(&trace, &plat)?;
            if *reduce {
                p = simplify(&p);
            }
            if !g.porcelain {
                writeln!(out, "# {w}: {} components, {} events", plat.components.len(), r.events.len()).map_err(io_err)?;
            }
            write!(out, "{p}").map_err(io_err)?;
        }
        Command::Color { word, quandles } => {
            let w = read_arg(word)?;
            let p = secant_quandle::harness::run_plat(&w, opts)?;
            let specs = if quandles.is_empty() { vec!["dihedral:3".to_string()] } else { quandles.clone() };
            for spec in specs {
                let q = parse_quandle_spec(&spec)?;
                let rep = count_colorings(&p.presentation, &q)?;
                if g.porcelain {
                    writeln!(out, "{spec} {} {}", rep.count, rep.search_nodes).map_err(io_err)?;
                } else {
                    writeln!(out, "{spec} {}", rep.count).map_err(io_err)?;
                }
            }
        }
        Command::Verify { config } => {
            let cfg = match config {
                Some(path) => read_file(path)?.parse::<HarnessConfig>()?,
                None => HarnessConfig::default(),
            };
            let rows = run_verify(&cfg, opts)?;
            let failed = rows.iter().filter(|r| !r.passed).count();
            for r in &rows {
                let status = if r.passed { "PASS" } else { "FAIL" };
                if g.porcelain {
                    writeln!(out, "{status}\t{}\t{}\t{}\t{}", r.check, r.seed, r.input, r.detail).map_err(io_err)?;
                } else {
                    writeln!(out, "{status} {:<12} seed={:<4} {} {}", r.check, r.seed, r.input, r.detail).map_err(io_err)?;
                }
            }
            if !g.porcelain {
                writeln!(out, "{} checks, {failed} failed", rows.len()).map_err(io_err)?;
            }
            if failed > 0 {
                return Err(Failure::Verify);
            }
        }
        Command::Moves { word, script } => {
            let w = parse_braid_word(word)?;
            let moves = parse_move_script(&read_file(script)?)?;
            let mut cur = w;
            for m in moves {
                cur = apply_move(&cur, m)?;
                if !g.porcelain {
                    writeln!(out, "# {m}: {cur}").map_err(io_err)?;
                }
            }
            writeln!(out, "{cur}").map_err(io_err)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("sq: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let res = run(cli, &mut out);
    let _ = out.flush();
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("sq: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Exhausted(msg)) => {
            eprintln!("sq: {msg}");
            ExitCode::from(3)
        }
    }
}
