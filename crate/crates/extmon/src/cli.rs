//! Command-line front end. Every command reads a system (or generator
//! list) from a file, runs one analysis, and prints a deterministic report
//! on standard output, as text or as a single JSON object.
//!
//! Exit codes: 0 on success, 1 on domain errors (non-member arguments,
//! inadmissible supports, non-full-affine generator sets) with the witness
//! reported, 2 on parse or dimension errors.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::extnat::{ExtNat, ExtVector};
use crate::format::{
    generators_from_text, system_from_text, system_to_json, system_to_text, vector_to_json,
};
use crate::hilbert::{self, GeneratorSet};
use crate::order::{self, FullAffine, InvariantReport, MinimalMode};
use crate::realize::{self, TraceNode};
use crate::supports;
use crate::system::{pullback, SystemSpec};
use crate::Error;

#[derive(Parser)]
#[command(
    name = "extmon",
    version,
    about = "Exact analysis of monoids cut out by diophantine congruences and linear inequalities over the extended naturals",
    after_help = "System files are line oriented: `vars <k>`, optional `unit <n1> .. <nk>`,\n\
                  `cong <d1> .. <dk> mod <m>`, `ineq <a..> >= <b..>`, `eq <a..> = <b..>`;\n\
                  `#` starts a comment. Vector arguments are space-separated entries,\n\
                  `inf` for infinity."
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MinimalSet {
    /// Minimal members of W under the componentwise order.
    W,
    /// Minimal members of the semigroup W \ V.
    WMinusV,
}

#[derive(Subcommand)]
enum Command {
    /// Test membership of a vector in the system's monoid.
    Member { file: PathBuf, #[arg(required = true)] entries: Vec<String> },
    /// Classify a vector: not-member, V, W-minus-V or infinite-part.
    Classify { file: PathBuf, #[arg(required = true)] entries: Vec<String> },
    /// Generating set of the monoid over the extended naturals.
    Gens { file: PathBuf },
    /// Minimal generating set of the finite part W.
    WGens { file: PathBuf },
    /// Minimal generating set of V (every inequality tight).
    VGens { file: PathBuf },
    /// Print the dual system (inequalities reversed).
    Dual { file: PathBuf },
    /// All idempotent members (entries 0 or inf).
    Idempotents { file: PathBuf },
    /// Minimal elements of W or of W \ V.
    Minimals {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MinimalSet::W)]
        set: MinimalSet,
    },
    /// Whether a member is superdecomposable.
    Superdecomposable { file: PathBuf, #[arg(required = true)] entries: Vec<String> },
    /// Whether a generator list (one vector per line) is full affine.
    FullAffine { gens_file: PathBuf },
    /// Synthesize an equation system from a full affine generator list.
    Synthesize { gens_file: PathBuf },
    /// Pull an outer system back along a matrix into an inner system.
    Compose {
        outer: PathBuf,
        inner: PathBuf,
        /// One matrix row per outer variable, e.g. --map "1 1 0".
        #[arg(long = "map", required = true)]
        map_rows: Vec<String>,
    },
    /// Compile the system into its pullback construction tree.
    Realize { file: PathBuf },
    /// Verify the compiled tree against the system on a grid.
    VerifyRealize {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        bound: u64,
    },
    /// Invariant report for the system and its dual.
    Report { file: PathBuf },
    /// Enumerate all members within a box, directly from the semantics.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        bound: u64,
    },
}

struct Output {
    stdout: String,
    warnings: String,
}

impl Output {
    fn plain(stdout: String) -> Self {
        Output { stdout, warnings: String::new() }
    }
}

/// Runs the CLI against the given arguments, writing to the supplied
/// streams, and returns the exit code.
pub fn run<I>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", rendered);
                0
            } else {
                let _ = write!(stderr, "{}", rendered);
                2
            };
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let _ = write!(stderr, "{}", output.warnings);
            let _ = write!(stdout, "{}", output.stdout);
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e);
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Dimension { .. } | Error::Capacity(_) | Error::MissingUnit => 2,
        Error::NotMember(_) | Error::Inadmissible(_) | Error::NotFullAffine(_) | Error::Internal(_) => 1,
    }
}

fn load_system(path: &Path) -> Result<SystemSpec, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    system_from_text(&text).map_err(|e| prefix_path(path, e))
}

fn load_generators(path: &Path) -> Result<GeneratorSet, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    generators_from_text(&text).map_err(|e| prefix_path(path, e))
}

fn prefix_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {}", path.display(), msg)),
        other => other,
    }
}

fn parse_vector(entries: &[String], k: usize) -> Result<ExtVector, Error> {
    if entries.len() != k {
        return Err(Error::Dimension { expected: k, got: entries.len() });
    }
    let parsed = entries.iter().map(|t| ExtNat::from_str(t)).collect::<Result<Vec<_>, _>>()?;
    Ok(ExtVector::new(parsed))
}

fn require_finite(g: &GeneratorSet, what: &str) -> Result<(), Error> {
    if g.as_finite().is_none() {
        return Err(Error::Parse(format!("{} requires finite generators (no `inf` entries)", what)));
    }
    Ok(())
}

fn vector_lines(vs: &[ExtVector]) -> String {
    let mut out = String::new();
    for v in vs {
        let _ = writeln!(out, "{}", v);
    }
    out
}

fn vectors_json(vs: &[ExtVector]) -> Value {
    Value::Array(vs.iter().map(vector_to_json).collect())
}

fn json_line(v: Value) -> String {
    format!("{}\n", v)
}

fn system_output(format: OutputFormat, s: &SystemSpec) -> String {
    match format {
        OutputFormat::Text => system_to_text(s),
        OutputFormat::Json => json_line(json!({ "system": system_to_json(s) })),
    }
}

fn trace_json(node: &TraceNode) -> Value {
    match node {
        TraceNode::Leaf(block) => json!({"node": "leaf", "block": block.to_string()}),
        TraceNode::Pullback { matrix, inner } => json!({
            "node": "pullback",
            "matrix": matrix
                .iter()
                .map(|row| Value::Array(row.iter().map(|c| Value::String(c.to_string())).collect()))
                .collect::<Vec<_>>(),
            "inner": trace_json(inner),
        }),
        TraceNode::Intersection(children) => json!({
            "node": "intersection",
            "children": children.iter().map(trace_json).collect::<Vec<_>>(),
        }),
    }
}

fn report_json(r: &InvariantReport) -> Value {
    json!({
        "k": r.k,
        "idempotent_count": r.idempotent_count(),
        "idempotents": vectors_json(&r.idempotents),
        "minimal_w": vectors_json(&r.minimal_w),
        "minimal_w_minus_v": vectors_json(&r.minimal_w_minus_v),
        "supports": r.supports.iter().map(|s| Value::String(s.to_string())).collect::<Vec<_>>(),
        "extended_generator_count": r.extended_generator_count,
    })
}

fn unit_warning(s: &SystemSpec) -> String {
    match realize::validate_unit(s) {
        Ok(true) => String::new(),
        Ok(false) => "warning: declared order unit is not a tight positive solution; proceeding\n".into(),
        Err(Error::MissingUnit) => {
            "warning: system declares no order unit; the monoid-level check proceeds regardless\n".into()
        }
        Err(_) => String::new(),
    }
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    let format = cli.format;
    match &cli.command {
        Command::Member { file, entries } => {
            let s = load_system(file)?;
            let x = parse_vector(entries, s.k())?;
            let m = s.is_member(&x);
            Ok(Output::plain(match format {
                OutputFormat::Text => format!("{}\n", m),
                OutputFormat::Json => json_line(json!({"member": m})),
            }))
        }
        Command::Classify { file, entries } => {
            let s = load_system(file)?;
            let x = parse_vector(entries, s.k())?;
            let class = s.classify(&x);
            Ok(Output::plain(match format {
                OutputFormat::Text => format!("{}\n", class),
                OutputFormat::Json => json_line(json!({"class": class.to_string()})),
            }))
        }
        Command::Gens { file } => {
            let s = load_system(file)?;
            let g = supports::generators_extended(&s)?;
            Ok(Output::plain(match format {
                OutputFormat::Text => vector_lines(g.gens()),
                OutputFormat::Json => json_line(json!({"generators": vectors_json(g.gens())})),
            }))
        }
        Command::WGens { file } => {
            let s = load_system(file)?;
            let g = hilbert::solve_w(&s);
            Ok(Output::plain(match format {
                OutputFormat::Text => vector_lines(g.gens()),
                OutputFormat::Json => json_line(json!({"generators": vectors_json(g.gens())})),
            }))
        }
        Command::VGens { file } => {
            let s = load_system(file)?;
            let g = hilbert::solve_v(&s);
            Ok(Output::plain(match format {
                OutputFormat::Text => vector_lines(g.gens()),
                OutputFormat::Json => json_line(json!({"generators": vectors_json(g.gens())})),
            }))
        }
        Command::Dual { file } => {
            let s = load_system(file)?;
            Ok(Output::plain(system_output(format, &s.dual())))
        }
        Command::Idempotents { file } => {
            let s = load_system(file)?;
            let idems = order::idempotents(&s)?;
            Ok(Output::plain(match format {
                OutputFormat::Text => vector_lines(&idems),
                OutputFormat::Json => {
                    json_line(json!({"count": idems.len(), "idempotents": vectors_json(&idems)}))
                }
            }))
        }
        Command::Minimals { file, set } => {
            let s = load_system(file)?;
            let (mode, name) = match set {
                MinimalSet::W => (MinimalMode::W, "w"),
                MinimalSet::WMinusV => (MinimalMode::WMinusV, "w-minus-v"),
            };
            let minimals = order::minimal_elements(&s, mode);
            Ok(Output::plain(match format {
                OutputFormat::Text => vector_lines(&minimals),
                OutputFormat::Json => json_line(json!({"set": name, "minimal": vectors_json(&minimals)})),
            }))
        }
        Command::Superdecomposable { file, entries } => {
            let s = load_system(file)?;
            let x = parse_vector(entries, s.k())?;
            let answer = order::is_superdecomposable(&x, &s)?;
            Ok(Output::plain(match format {
                OutputFormat::Text => format!("{}\n", answer),
                OutputFormat::Json => json_line(json!({"superdecomposable": answer})),
            }))
        }
        Command::FullAffine { gens_file } => {
            let g = load_generators(gens_file)?;
            require_finite(&g, "full-affine")?;
            let outcome = order::is_full_affine(&g);
            Ok(Output::plain(match (&outcome, format) {
                (FullAffine::Yes, OutputFormat::Text) => "true\n".to_string(),
                (FullAffine::No { witness }, OutputFormat::Text) => {
                    format!("false\nwitness: {}\n", witness)
                }
                (FullAffine::Yes, OutputFormat::Json) => json_line(json!({"full_affine": true})),
                (FullAffine::No { witness }, OutputFormat::Json) => {
                    json_line(json!({"full_affine": false, "witness": vector_to_json(witness)}))
                }
            }))
        }
        Command::Synthesize { gens_file } => {
            let g = load_generators(gens_file)?;
            require_finite(&g, "synthesize")?;
            let s = order::synthesize_equations(&g)?;
            Ok(Output::plain(system_output(format, &s)))
        }
        Command::Compose { outer, inner, map_rows } => {
            let outer_s = load_system(outer)?;
            let inner_s = load_system(inner)?;
            if map_rows.len() != outer_s.k() {
                return Err(Error::Dimension { expected: outer_s.k(), got: map_rows.len() });
            }
            let mut map = Vec::with_capacity(map_rows.len());
            for row in map_rows {
                let parsed: Vec<BigUint> = row
                    .split_whitespace()
                    .map(|t| {
                        BigUint::from_str(t).map_err(|_| {
                            Error::Parse(format!("map entry `{}` is not a nonnegative integer", t))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if parsed.len() != inner_s.k() {
                    return Err(Error::Dimension { expected: inner_s.k(), got: parsed.len() });
                }
                map.push(parsed);
            }
            let composed = pullback(&outer_s, &map, &inner_s);
            Ok(Output::plain(system_output(format, &composed)))
        }
        Command::Realize { file } => {
            let s = load_system(file)?;
            let t = realize::compile(&s);
            Ok(Output {
                stdout: match format {
                    OutputFormat::Text => t.render(),
                    OutputFormat::Json => json_line(json!({"trace": trace_json(t.root())})),
                },
                warnings: unit_warning(&s),
            })
        }
        Command::VerifyRealize { file, bound } => {
            let s = load_system(file)?;
            let t = realize::compile(&s);
            let outcome = realize::verify(&t, &s, *bound);
            Ok(Output {
                stdout: match (&outcome, format) {
                    (None, OutputFormat::Text) => "verified\n".to_string(),
                    (Some(x), OutputFormat::Text) => format!("counterexample: {}\n", x),
                    (None, OutputFormat::Json) => {
                        json_line(json!({"verified": true, "bound": bound}))
                    }
                    (Some(x), OutputFormat::Json) => json_line(
                        json!({"verified": false, "bound": bound, "counterexample": vector_to_json(x)}),
                    ),
                },
                warnings: unit_warning(&s),
            })
        }
        Command::Report { file } => {
            let s = load_system(file)?;
            let r = order::invariant_report(&s)?;
            let rd = order::invariant_report(&s.dual())?;
            let distinguishable = r.distinguishes(&rd);
            Ok(Output::plain(match format {
                OutputFormat::Text => {
                    format!("[system]\n{}[dual]\n{}distinguishable: {}\n", r, rd, distinguishable)
                }
                OutputFormat::Json => json_line(json!({
                    "system": report_json(&r),
                    "dual": report_json(&rd),
                    "distinguishable": distinguishable,
                })),
            }))
        }
        Command::Oracle { file, bound } => {
            let s = load_system(file)?;
            let solutions = hilbert::brute_solutions(&s, *bound);
            Ok(Output::plain(match format {
                OutputFormat::Text => vector_lines(&solutions),
                OutputFormat::Json => {
                    json_line(json!({"bound": bound, "solutions": vectors_json(&solutions)}))
                }
            }))
        }
    }
}
