//! `itermem` command-line tool.
//!
//! Complexes, encodings and reports travel as JSON files. Exit status is 0 on
//! success, 1 when a verification fails, 2 on bad input and 3 when a resource
//! limit is hit.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use itermem::generators::{glued_fan, path_of_facets, random_complex, simplex};
use itermem::greedy::{stars_sound, verify_coded_cover};
use itermem::io::{export_named, from_json, to_json};
use itermem::setcover::{brute_force_set_cover, exact_min_sequence, set_cover_reduce, SetCoverInstance};
use itermem::sim::{bounded_protocol_complex, iterate_pipeline, equal_code_counterexample};
use itermem::{
    bounds_table, greedy_star, is_isomorphic, iterate_subdivide, protocol_complex, split_to_budget,
    verify_cover, BoundsReportExact, BoundsReportF64, ChromaticComplex, EncodingSequence, Error,
    Pattern,
};

#[derive(Parser, Debug)]
#[command(name = "itermem", version, about = "Chromatic complexes and bounded-register protocol simulation")]
struct Cli {
    /// Seed for randomized generators
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Refuse to build complexes with more facets than this
    #[arg(long, global = true, default_value_t = itermem::subdivision::DEFAULT_MAX_FACETS)]
    max_facets: usize,
    /// Also write a JSON summary of the run to this file
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a complex
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Iterated standard chromatic subdivision
    Subdivide {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full-information protocol complex
    Protocol {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        pattern: PatternArg,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Star-cover encoding sequence, optionally split to a bit budget
    GreedyStar {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the per-round star selection here
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Protocol complex of the bounded-register simulation
    Simulate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        encodings: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        verify_against: Option<VerifyArg>,
    },
    /// Check encodings cover a complex, or that two complexes are isomorphic
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        encodings: Option<PathBuf>,
        #[arg(long)]
        isomorphic_to: Option<PathBuf>,
    },
    /// Closed-form round bounds
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        b: u32,
        /// Evaluate the per-complex bounds and a measured run on this complex
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Report formulas as exact rationals
        #[arg(long)]
        exact: bool,
    },
    /// Build the covering complex of a set-cover instance
    ReduceSetcover {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the gluing choices
        #[arg(long)]
        explain: bool,
    },
    /// Shortest ⊥/1 encoding sequence covering a small complex
    ExactMin {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a complex to json, dot or csv-fvector
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// r simulated collect iterations with b-bit registers
    Pipeline {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long, default_value_t = 1)]
        bits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The two-triangle complex where equal codes break intersections
    Counterexample {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    Simplex { dim: usize },
    Glued { k: usize },
    Path { m: usize },
    /// Uses the global --seed
    Random { n: usize, facets: usize },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum PatternArg {
    Ic,
    Ias,
    Iis,
}

impl From<PatternArg> for Pattern {
    fn from(p: PatternArg) -> Self {
        match p {
            PatternArg::Ic => Pattern::IC,
            PatternArg::Ias => Pattern::IAS,
            PatternArg::Iis => Pattern::IIS,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum VerifyArg {
    Ic,
}

/// A check ran and came out negative.
#[derive(Debug)]
struct VerificationFailed(String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn read_complex(p: &Path) -> Result<ChromaticComplex> {
    let s = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    Ok(from_json(&s)?)
}

fn read_encodings(p: &Path) -> Result<EncodingSequence> {
    let s = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&s).with_context(|| format!("parsing encodings in {}", p.display()))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            if !bytes.ends_with(b"\n") {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    emit(out, serde_json::to_string_pretty(value)?.as_bytes())
}

fn emit_complex(out: Option<&Path>, c: &ChromaticComplex) -> Result<()> {
    emit(out, to_json(c).as_bytes())
}

fn complex_summary(c: &ChromaticComplex) -> serde_json::Value {
    serde_json::json!({
        "vertices": c.vertex_ids().len(),
        "facets": c.facets().len(),
        "f_vector": c.f_vector().counts,
        "max_degree": c.max_degree(),
    })
}

fn run(cli: &Cli) -> Result<serde_json::Value> {
    match &cli.command {
        Command::Gen { kind, out } => {
            let c = match kind {
                GenKind::Simplex { dim } => simplex(*dim),
                GenKind::Glued { k } => glued_fan(*k)?,
                GenKind::Path { m } => path_of_facets(*m)?,
                GenKind::Random { n, facets } => random_complex(cli.seed, *n, *facets)?,
            };
            emit_complex(out.as_deref(), &c)?;
            Ok(complex_summary(&c))
        }
        Command::Subdivide { input, rounds, out } => {
            let c = iterate_subdivide(&read_complex(input)?, *rounds, cli.max_facets)?;
            emit_complex(out.as_deref(), &c)?;
            Ok(complex_summary(&c))
        }
        Command::Protocol { input, pattern, rounds, out } => {
            let c = protocol_complex(&read_complex(input)?, (*pattern).into(), *rounds, cli.max_facets)?;
            emit_complex(out.as_deref(), &c)?;
            Ok(complex_summary(&c))
        }
        Command::GreedyStar { input, bits, out, trace } => {
            let c = read_complex(input)?;
            let (seq, tr) = greedy_star(&c);
            if !verify_cover(&c, &seq) || !stars_sound(&c, &tr) {
                return Err(VerificationFailed("greedy star cover is incomplete".into()).into());
            }
            let seq = match bits {
                Some(b) => split_to_budget(&seq, &c, *b),
                None => seq,
            };
            if let Some(t) = trace {
                emit_json(Some(t), &tr)?;
            }
            emit_json(out.as_deref(), &seq)?;
            Ok(serde_json::json!({ "greedy_rounds": tr.rounds.len(), "rounds": seq.len() }))
        }
        Command::Simulate { input, encodings, out, verify_against } => {
            let c = read_complex(input)?;
            let seq = read_encodings(encodings)?;
            let gs = bounded_protocol_complex(&c, &seq)?;
            emit_complex(out.as_deref(), &gs)?;
            let mut summary = complex_summary(&gs);
            if let Some(VerifyArg::Ic) = verify_against {
                let fi = protocol_complex(&c, Pattern::IC, 1, cli.max_facets)?;
                let iso = is_isomorphic(&gs, &fi);
                summary["isomorphic_to_ic"] = iso.into();
                if !iso {
                    return Err(VerificationFailed(
                        "simulated complex is not isomorphic to the collect protocol complex".into(),
                    )
                    .into());
                }
            }
            Ok(summary)
        }
        Command::Verify { input, encodings, isomorphic_to } => {
            if encodings.is_none() && isomorphic_to.is_none() {
                return Err(anyhow!("verify needs --encodings or --isomorphic-to"));
            }
            let c = read_complex(input)?;
            let mut summary = serde_json::json!({});
            if let Some(e) = encodings {
                let seq = read_encodings(e)?;
                let covered = verify_cover(&c, &seq);
                let decodable = verify_coded_cover(&c, &seq);
                summary["covers"] = covered.into();
                summary["coded_covers"] = decodable.into();
                if !covered {
                    return Err(VerificationFailed("encodings do not cover the complex".into()).into());
                }
            }
            if let Some(other) = isomorphic_to {
                let iso = is_isomorphic(&c, &read_complex(other)?);
                summary["isomorphic"] = iso.into();
                if !iso {
                    return Err(VerificationFailed("complexes are not isomorphic".into()).into());
                }
            }
            println!("ok");
            Ok(summary)
        }
        Command::Bounds { n, r, b, input, exact } => {
            let c = input.as_deref().map(read_complex).transpose()?;
            let measured = match &c {
                Some(c) => Some(iterate_pipeline(c, 1, *b, cli.max_facets)?.total_rounds),
                None => None,
            };
            let value = if *exact {
                let mut rep: BoundsReportExact = bounds_table(*n, *r, *b, c.as_ref())?;
                if let Some(m) = measured {
                    rep = rep.with_measured(m);
                }
                serde_json::to_value(&rep)?
            } else {
                let mut rep: BoundsReportF64 = bounds_table(*n, *r, *b, c.as_ref())?;
                if let Some(m) = measured {
                    rep = rep.with_measured(m);
                }
                serde_json::to_value(&rep)?
            };
            emit_json(None, &value)?;
            Ok(value)
        }
        Command::ReduceSetcover { input, out, explain } => {
            let s = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let inst: SetCoverInstance = serde_json::from_str(&s).context("parsing set-cover instance")?;
            let red = set_cover_reduce(&inst)?;
            if *explain {
                for line in &red.explain {
                    eprintln!("{line}");
                }
            }
            emit_complex(out.as_deref(), &red.complex)?;
            let mut summary = complex_summary(&red.complex);
            summary["set_cover_optimum"] = serde_json::json!(brute_force_set_cover(&inst));
            Ok(summary)
        }
        Command::ExactMin { input, out } => {
            let c = read_complex(input)?;
            let (len, seq) = exact_min_sequence(&c)?;
            emit_json(out.as_deref(), &seq)?;
            Ok(serde_json::json!({ "length": len }))
        }
        Command::Export { input, format, out } => {
            let c = read_complex(input)?;
            emit(out.as_deref(), &export_named(&c, format)?)?;
            Ok(serde_json::json!({ "format": format }))
        }
        Command::Pipeline { input, rounds, bits, out } => {
            let res = iterate_pipeline(&read_complex(input)?, *rounds, *bits, cli.max_facets)?;
            emit_complex(out.as_deref(), &res.complex)?;
            let mut summary = complex_summary(&res.complex);
            summary["total_rounds"] = res.total_rounds.into();
            summary["iterations"] = serde_json::to_value(&res.iterations)?;
            Ok(summary)
        }
        Command::Counterexample { out } => {
            let ce = equal_code_counterexample()?;
            emit_json(out.as_deref(), &ce)?;
            let broken = ce.evidence.as_ref().is_some_and(|e| !e.intersection_preserved);
            if !broken || !ce.repaired_isomorphic_to_collect {
                return Err(VerificationFailed("counterexample did not reproduce".into()).into());
            }
            Ok(serde_json::to_value(&ce.evidence)?)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<VerificationFailed>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::ResourceLimit { .. }) => 3,
        // the supplied encodings cannot be decoded unambiguously
        Some(Error::AmbiguousDecode { .. }) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let (status, summary) = match &outcome {
        Ok(v) => (0, v.clone()),
        Err(e) => (exit_code(e), serde_json::json!({ "error": e.to_string() })),
    };
    if let Some(p) = &cli.json_out {
        let doc = serde_json::json!({ "exit_code": status, "result": summary });
        if let Err(e) = fs::write(p, serde_json::to_string_pretty(&doc).unwrap_or_default()) {
            eprintln!("error: writing {}: {e}", p.display());
        }
    }
    if let Err(e) = outcome {
        eprintln!("error: {e:#}");
    }
    ExitCode::from(status)
}
