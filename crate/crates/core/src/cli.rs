//! Command-line front end. `run` is the whole program; the binary only
//! forwards the process arguments and exit code.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::alpha::{alpha_interleaved, alpha_translate, ModelClass, Strategy};
use crate::error::{Error, Result};
use crate::formula::{Formula, Quant};
use crate::normalize::to_prenex;
use crate::oracle::{oracle, IntBackend};
use crate::presburger::pa_decide;
use crate::schema::{correctness_vc, parse_schema_with, SchemaOptions};
use crate::text::{parse_formula, print_formula};

#[derive(Debug, Parser)]
#[command(name = "bapa", version, about = "Decide sets-with-cardinalities formulas by reduction to Presburger arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print `valid` or `invalid`.
    Decide {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        alpha: AlphaArgs,
        /// alpha or interleaved (finite universes only).
        #[arg(long, default_value = "alpha")]
        strategy: Strategy,
    },
    /// Print the Presburger translation. `MAXC` stays free for finite universes
    /// unless `--closed` is given.
    Translate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long)]
        closed: bool,
    },
    /// Eliminate the set quantifiers of a pure Boolean-algebra formula.
    BaQe {
        #[command(flatten)]
        input: Input,
    },
    /// Eliminate the quantifiers of a Presburger formula.
    PaQe {
        #[command(flatten)]
        input: Input,
    },
    /// Print the verification condition of each procedure of a schema.
    Vcgen {
        #[command(flatten)]
        input: Input,
        /// Only this procedure.
        #[arg(long = "proc")]
        proc_name: Option<String>,
        /// Encode `assume F` as `F & skip`.
        #[arg(long)]
        assume_conjunctive: bool,
        /// Also decide each condition (finite universes).
        #[arg(long)]
        decide: bool,
    },
    /// Evaluate a sentence in finite universes by enumeration.
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Evaluate at this universe size only.
        #[arg(long)]
        universe: Option<u32>,
        /// Otherwise sweep the sizes 0..=N.
        #[arg(long, default_value_t = 4)]
        sweep: u32,
        /// Bound integer quantifiers by this value instead of eliminating them.
        #[arg(long)]
        bounded: Option<u64>,
        #[arg(long, default_value = "forall")]
        open_as: QuantArg,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// Input file, `-` for standard input.
    pub file: PathBuf,
    /// Append one JSON line with size and timing figures.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    /// Universes considered: finite, infinite or all.
    #[arg(long, default_value = "finite")]
    pub mode: ModelClass,
    /// Partition only set variables that share a cardinality term.
    #[arg(long)]
    pub optimize: bool,
    /// How free variables are closed.
    #[arg(long, default_value = "forall")]
    pub open_as: QuantArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantArg(pub Quant);

impl std::str::FromStr for QuantArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "forall" | "all" => Ok(QuantArg(Quant::Forall)),
            "exists" | "ex" => Ok(QuantArg(Quant::Exists)),
            _ => Err(format!("expected `forall` or `exists`, found `{s}`")),
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Stats {
    pub input_size: usize,
    pub set_vars: usize,
    pub alternations_in: usize,
    pub output_size: usize,
    pub alternations_out: usize,
    pub elapsed_ms: f64,
}

fn alternations(f: &Formula) -> usize {
    to_prenex(f).alternations()
}

fn read_input(path: &PathBuf) -> Result<String> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

struct Outcome {
    text: String,
    code: i32,
    input: Formula,
    output: Formula,
}

fn verdict(b: bool) -> &'static str {
    if b {
        "valid"
    } else {
        "invalid"
    }
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Decide { input, alpha, strategy } => {
            let f = parse_formula(&read_input(&input.file)?)?;
            let closed = f.close(alpha.open_as.0);
            let (valid, output) = match strategy {
                Strategy::Alpha => {
                    let g = alpha_translate(&closed, alpha.mode, alpha.optimize)?.sentence();
                    (pa_decide(&g)?, g)
                }
                Strategy::Interleaved => {
                    let v = alpha_interleaved(&closed, alpha.mode, alpha.optimize)?;
                    (v, if v { Formula::tt() } else { Formula::ff() })
                }
            };
            Ok(Outcome { text: verdict(valid).into(), code: if valid { 0 } else { 1 }, input: f, output })
        }
        Command::Translate { input, alpha, closed } => {
            let f = parse_formula(&read_input(&input.file)?)?;
            let t = alpha_translate(&f.close(alpha.open_as.0), alpha.mode, alpha.optimize)?;
            let g = if *closed { t.sentence() } else { t.formula };
            Ok(Outcome { text: print_formula(&g), code: 0, input: f, output: g })
        }
        Command::BaQe { input } => {
            let f = parse_formula(&read_input(&input.file)?)?;
            let g = crate::ba::ba_eliminate(&f)?;
            Ok(Outcome { text: print_formula(&g), code: 0, input: f, output: g })
        }
        Command::PaQe { input } => {
            let f = parse_formula(&read_input(&input.file)?)?;
            let g = crate::presburger::pa_qe(&f)?;
            Ok(Outcome { text: print_formula(&g), code: 0, input: f, output: g })
        }
        Command::Vcgen { input, proc_name, assume_conjunctive, decide } => {
            let schema =
                parse_schema_with(&read_input(&input.file)?, SchemaOptions { assume_conjunctive: *assume_conjunctive })?;
            let names: Vec<String> = match proc_name {
                Some(p) => vec![p.clone()],
                None => schema.procs.iter().map(|p| p.name.clone()).collect(),
            };
            let mut lines = Vec::new();
            let mut code = 0;
            let mut vcs = Vec::new();
            for n in &names {
                let vc = correctness_vc(&schema, n)?;
                if *decide {
                    let g = alpha_translate(&vc, ModelClass::FiniteUniverse, false)?.sentence();
                    let v = pa_decide(&g)?;
                    if !v {
                        code = 1;
                    }
                    lines.push(format!("# {n}: {}", verdict(v)));
                } else if names.len() > 1 {
                    lines.push(format!("# {n}"));
                }
                lines.push(print_formula(&vc));
                vcs.push(vc);
            }
            let all = Formula::and_all(vcs);
            Ok(Outcome { text: lines.join("\n"), code, input: all.clone(), output: all })
        }
        Command::Oracle { input, universe, sweep, bounded, open_as } => {
            let f = parse_formula(&read_input(&input.file)?)?;
            let closed = f.close(open_as.0);
            let backend = match bounded {
                Some(b) => IntBackend::Bounded(Some(*b)),
                None => IntBackend::PaExact,
            };
            let sizes: Vec<u32> = match universe {
                Some(u) => vec![*u],
                None => (0..=*sweep).collect(),
            };
            let mut lines = Vec::new();
            let mut all = true;
            for u in sizes {
                let v = oracle(&closed, u, backend)?;
                all &= v;
                lines.push(format!("u={u} {}", if v { "true" } else { "false" }));
            }
            let out = if all { Formula::tt() } else { Formula::ff() };
            Ok(Outcome { text: lines.join("\n"), code: if all { 0 } else { 1 }, input: f, output: out })
        }
    }
}

fn wants_stats(cmd: &Command) -> bool {
    match cmd {
        Command::Decide { input, .. }
        | Command::Translate { input, .. }
        | Command::BaQe { input }
        | Command::PaQe { input }
        | Command::Vcgen { input, .. }
        | Command::Oracle { input, .. } => input.stats,
    }
}

/// Runs one command. Exit code 0 means success (or `valid`), 1 `invalid`
/// or a failed check, 2 an error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let start = Instant::now();
    match execute(&cli.command) {
        Ok(o) => {
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            let _ = writeln!(out, "{}", o.text);
            if wants_stats(&cli.command) {
                let stats = Stats {
                    input_size: o.input.size(),
                    set_vars: o.input.quantifier_counts().0,
                    alternations_in: alternations(&o.input),
                    output_size: o.output.size(),
                    alternations_out: alternations(&o.output),
                    elapsed_ms,
                };
                let _ = writeln!(out, "{}", serde_json::to_string(&stats).expect("plain struct"));
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
