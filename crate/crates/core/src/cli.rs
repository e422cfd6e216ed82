//! Command-line surface. Exit codes: 0 success or pass, 1 verification or
//! run failure, 2 usage or format error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::atam::{run as run_assembly, StopPolicy, Tileset, Trace};
use crate::compiler;
use crate::io::{self, Format, Snapshot};
use crate::oracle::stage_grid;
use crate::prefix::CodingPrefix;
use crate::verifier::{self, placement_ok};

/// Seed used when --seed is not given.
pub const DEFAULT_SEED: u64 = 1729;

const OK: i32 = 0;
const FAIL: i32 = 1;
const USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "sssst", version, about = "Self-assembly of the statistically self-similar Sierpinski triangle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile the tileset and write it as TOML.
    GenTileset {
        #[arg(long)]
        out: PathBuf,
    },
    /// Assemble to a completed stage and write a snapshot.
    Simulate {
        #[arg(long)]
        stages: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Forced decision trits, e.g. 213.
        #[arg(long)]
        decisions: Option<CodingPrefix>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the attachment trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Tileset file; the compiled tileset is used when absent.
        #[arg(long)]
        tileset: Option<PathBuf>,
    },
    /// Render the oracle grid of a coding prefix.
    Oracle {
        #[arg(long)]
        decisions: CodingPrefix,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
    },
    /// Check a snapshot or trace file.
    Verify {
        /// Snapshot or JSON trace.
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::All)]
        mode: Mode,
        #[arg(long)]
        tileset: Option<PathBuf>,
    },
    /// Chi-square test of realized prefixes over unforced runs.
    Fairness {
        #[arg(long)]
        stages: u32,
        #[arg(long)]
        runs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = verifier::DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long)]
        tileset: Option<PathBuf>,
    },
    /// Decision-set statistics of a JSON trace.
    Stats {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_enum)]
        what: What,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RenderFormat {
    Ascii,
    Pbm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Safety,
    Determinism,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum What {
    Zeta,
    Decisions,
}

/// An error with its exit code.
struct Exit(i32, String);

impl From<io::FormatError> for Exit {
    fn from(e: io::FormatError) -> Self {
        Exit(USAGE, e.to_string())
    }
}

fn fail(msg: impl ToString) -> Exit {
    Exit(FAIL, msg.to_string())
}

fn summary(v: serde_json::Value) {
    println!("summary {v}");
}

fn load_tileset(path: Option<&Path>) -> Result<Tileset, Exit> {
    match path {
        Some(p) => Ok(io::parse_tileset(&io::read_file(p)?)?),
        None => compiler::generate().map(|(ts, _)| ts).map_err(fail),
    }
}

enum Input {
    Trace(Trace),
    Snapshot(Snapshot),
}

fn load_input(path: &Path) -> Result<Input, Exit> {
    let text = io::read_file(path)?;
    if text.trim_start().starts_with('{') {
        Ok(Input::Trace(io::parse_trace(&text)?))
    } else {
        Ok(Input::Snapshot(Snapshot::parse(&text)?))
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, Exit> {
    match cmd {
        Command::GenTileset { out } => {
            let (ts, report) = compiler::generate().map_err(fail)?;
            io::write_file(&out, io::emit_tileset(&ts).as_bytes())?;
            println!("{report}");
            summary(json!({"command": "gen-tileset", "tiles": report.tiles, "families": report.families}));
            Ok(OK)
        }
        Command::Simulate { stages, seed, decisions, out, trace, tileset } => {
            if decisions.as_ref().is_some_and(|d| d.len() > stages as usize) {
                return Err(Exit(USAGE, format!("--decisions has more than {stages} trits")));
            }
            let ts = load_tileset(tileset.as_deref())?;
            let t = run_assembly(&ts, StopPolicy::StageComplete(stages), seed, decisions.as_ref()).map_err(fail)?;
            let snap = Snapshot::from_trace(&t, &ts).map_err(fail)?;
            io::write_file(&out, snap.emit().as_bytes())?;
            if let Some(p) = trace {
                io::write_file(&p, io::emit_trace(&t).as_bytes())?;
            }
            println!("stage {stages} complete: {} events, decisions {}", t.events.len(), snap.decisions);
            summary(json!({"command": "simulate", "stage": stages, "seed": seed, "decisions": snap.decisions.to_string(), "events": t.events.len()}));
            Ok(OK)
        }
        Command::Oracle { decisions, out, format } => {
            let fmt = match format {
                RenderFormat::Ascii => Format::Ascii,
                RenderFormat::Pbm => Format::Pbm,
            };
            let mut bytes = io::render(&stage_grid(&decisions), fmt);
            bytes.push(b'\n');
            io::write_file(&out, &bytes)?;
            Ok(OK)
        }
        Command::Verify { trace, mode, tileset } => verify(&trace, mode, tileset.as_deref()),
        Command::Fairness { stages, runs, seed, alpha, tileset } => {
            let ts = load_tileset(tileset.as_deref())?;
            let rep = verifier::fairness_test_at(&ts, runs, stages as usize, seed, alpha).map_err(|e| match e {
                verifier::VerifyError::NoRuns => Exit(USAGE, e.to_string()),
                e => fail(e),
            })?;
            println!("{rep}");
            summary(json!({"command": "fairness", "pass": rep.pass(), "chi_square": rep.chi_square, "df": rep.df, "p_value": rep.p_value}));
            Ok(if rep.pass() { OK } else { FAIL })
        }
        Command::Stats { trace, what } => {
            let Input::Trace(t) = load_input(&trace)? else {
                return Err(Exit(USAGE, "stats needs a JSON trace; snapshots carry no decision locations".into()));
            };
            let locs = verifier::decision_locations(&t);
            match what {
                What::Decisions => {
                    let mut ok = true;
                    for &(loc, k) in &locs {
                        let placed = placement_ok(loc, k);
                        ok &= placed;
                        println!("decision {k} at ({},{}) trit {} placement {}", loc.0, loc.1, t.decisions[k - 1].trit, if placed { "ok" } else { "OUT OF WINDOW" });
                    }
                    summary(json!({"command": "stats", "what": "decisions", "count": locs.len(), "pass": ok}));
                    Ok(if ok { OK } else { FAIL })
                }
                What::Zeta => {
                    let d: Vec<_> = locs.iter().map(|&(l, _)| l).collect();
                    let rep = verifier::zeta_report(&d, &[0.25, 0.5, 1.0], 8).map_err(fail)?;
                    println!("{rep}");
                    summary(json!({"command": "stats", "what": "zeta", "count": d.len(), "pass": rep.count_bound_holds()}));
                    Ok(if rep.count_bound_holds() { OK } else { FAIL })
                }
            }
        }
    }
}

fn verify(path: &Path, mode: Mode, tileset: Option<&Path>) -> Result<i32, Exit> {
    let mut pass = true;
    match load_input(path)? {
        Input::Snapshot(s) => {
            if mode == Mode::Determinism {
                return Err(Exit(USAGE, "determinism needs a JSON trace, not a snapshot".into()));
            }
            let rep = verifier::safety_check_grid(&s.grid(), &s.decisions);
            println!("{rep}");
            pass &= rep.pass();
            summary(json!({"command": "verify", "check": "safety", "pass": rep.pass()}));
        }
        Input::Trace(t) => {
            let ts = load_tileset(tileset)?;
            if mode != Mode::Determinism {
                let rep = verifier::safety_check(&t, &ts).map_err(fail)?;
                println!("{rep}");
                pass &= rep.pass();
                summary(json!({"command": "verify", "check": "safety", "pass": rep.pass()}));
            }
            if mode != Mode::Safety {
                let excluded: Vec<_> = verifier::decision_locations(&t).into_iter().map(|(l, _)| l).collect();
                let rep = verifier::check_local_determinism(&t, &ts, &excluded).map_err(fail)?;
                println!("{rep}");
                pass &= rep.pass();
                summary(json!({"command": "verify", "check": "determinism", "pass": rep.pass(), "violations": rep.violations.len()}));
            }
        }
    }
    Ok(if pass { OK } else { FAIL })
}
