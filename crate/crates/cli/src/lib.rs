//! Command-line front end: graph ingestion, truncation exports, verification
//! suites, automorphism extension and the commensuration demo.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors.

use clap::{Parser, Subcommand, ValueEnum};
use rabkit_core::atlases::{commensuration_demo, extend_automorphism, sample_ball, standard_atlas, twisted_atlas, GroupTwist, TypedAtlas};
use rabkit_core::building::{Building, Chamber, Truncation};
use rabkit_core::catalog;
use rabkit_core::error::Error;
use rabkit_core::fuchsian::{classify_with_links, edge_cell_incidence, has_induced_4cycle, star_rigid};
use rabkit_core::graph::DefiningGraph;
use rabkit_core::parallel;
use rabkit_core::sets::{VertexPerm, VertexSet};
use rabkit_core::verify::{self, Suite, VerifyConfig};
use rabkit_core::word::Syllable;
use serde_json::{json, Value};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const THREADS_VAR: &str = "RABKIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rabkit", version, about = "Right-angled buildings of graph products: construction and verification")]
pub struct Cli {
    /// Graph spec: a JSON file, or `builtin:NAME`.
    #[arg(long, global = true, default_value = "builtin:running")]
    pub graph: String,
    /// Ball radius; each command has its own default.
    #[arg(long, global = true)]
    pub radius: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write outputs into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Dot)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Export the truncation of the building to a radius.
    Build,
    /// Run verification suites and print a JSON report.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Extend a type-matching chamber map to an atlas automorphism.
    Automorphism {
        /// Source atlas: `standard` or a twist spec.
        #[arg(long, default_value = "standard")]
        source: String,
        /// Target atlas: `standard` or a twist spec.
        #[arg(long, default_value = "standard")]
        target: String,
        /// Source chamber as a JSON word, e.g. `[[2,1]]` or `[["k",1]]`.
        #[arg(long, default_value = "[]")]
        from: String,
        /// Target chamber as a JSON word.
        #[arg(long, default_value = "[]")]
        to: String,
        /// Encoding of the seed map as a JSON list of vertex images.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Conjugate a twisted lattice back into the graph product.
    Demo {
        /// Twist spec: `identity`, `inversion[:V,..]` or `perm:IMAGES`.
        #[arg(long, default_value = "inversion")]
        twist: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Classify the graph against the generalized-polygon cases.
    Classify,
    /// List the built-in graphs.
    Graphs,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Input(_) | Error::Domain(_) => 2,
            Error::Validation { .. } | Error::Internal(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

/// Parses `RABKIT_THREADS`; unset means the default pool.
pub fn threads_from_env(value: Option<&str>) -> Result<Option<usize>, Failure> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage(format!("{THREADS_VAR} must be a positive integer, got {s:?}"))),
        },
    }
}

pub fn load_graph(spec: &str) -> Result<DefiningGraph, Failure> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return catalog::by_name(name)
            .ok_or_else(|| usage(format!("unknown builtin graph {name:?}; known: {}", catalog::NAMES.join(", "))));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| usage(format!("cannot read {spec}: {e}")))?;
    Ok(DefiningGraph::from_json(&text)?)
}

fn vertex_id(g: &DefiningGraph, v: &Value) -> Result<usize, Failure> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(|x| x as usize)
            .filter(|&x| x < g.n())
            .ok_or_else(|| usage(format!("vertex {n} out of range"))),
        Value::String(s) => g.names().iter().position(|x| x == s).ok_or_else(|| usage(format!("unknown vertex {s:?}"))),
        other => Err(usage(format!("expected a vertex id or name, got {other}"))),
    }
}

fn vertex_token(g: &DefiningGraph, s: &str) -> Result<usize, Failure> {
    match s.parse::<u64>() {
        Ok(n) => vertex_id(g, &json!(n)),
        Err(_) => vertex_id(g, &json!(s)),
    }
}

/// A chamber from a JSON list of `[vertex, element]` pairs.
pub fn parse_chamber(b: &Building, text: &str) -> Result<Chamber, Failure> {
    let g = b.graph();
    let value: Value = serde_json::from_str(text).map_err(|e| usage(format!("chamber word {text:?}: {e}")))?;
    let Value::Array(items) = value else {
        return Err(usage(format!("chamber word must be a list, got {text}")));
    };
    let mut word = Vec::with_capacity(items.len());
    for item in &items {
        let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| usage(format!("bad syllable {item}")))?;
        let v = vertex_id(g, &pair[0])?;
        let e = pair[1].as_u64().ok_or_else(|| usage(format!("bad element in {item}")))?;
        word.push(Syllable::new(v, e as u32));
    }
    Ok(b.chamber(&word)?)
}

/// `identity`, `inversion`, `inversion:V,..` or `perm:IMAGES`.
pub fn parse_twist(g: &DefiningGraph, spec: &str) -> Result<GroupTwist, Failure> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "identity" if rest.is_empty() => Ok(GroupTwist::identity(g)),
        "inversion" => {
            let vertices = if rest.is_empty() {
                VertexSet::from_iter((0..g.n()).filter(|&m| g.order(m) >= 3 && g.group(m).is_abelian()))
            } else {
                let ids = rest.split(',').map(|s| vertex_token(g, s.trim())).collect::<Result<Vec<_>, _>>()?;
                VertexSet::from_iter(ids)
            };
            Ok(GroupTwist::inversion(g, vertices)?)
        }
        "perm" => {
            let images = rest.split(',').map(|s| vertex_token(g, s.trim())).collect::<Result<Vec<_>, _>>()?;
            let perm = VertexPerm::from_images(images).ok_or_else(|| usage(format!("{rest:?} is not a permutation")))?;
            Ok(GroupTwist::graph_automorphism(g, perm)?)
        }
        _ => Err(usage(format!("unknown twist spec {spec:?}"))),
    }
}

pub fn parse_atlas(b: &Building, spec: &str) -> Result<TypedAtlas, Failure> {
    if spec == "standard" {
        return Ok(standard_atlas(b));
    }
    Ok(twisted_atlas(b, &parse_twist(b.graph(), spec)?))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Writes `contents` to `dir/name`, or to `stdout` without a directory.
fn emit(out: &Option<PathBuf>, name: &str, contents: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(dir) => write_file(dir, name, contents),
        None => Ok(stdout.write_all(contents.as_bytes())?),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, Failure> {
    if let Command::Graphs = cli.command {
        for name in catalog::NAMES {
            writeln!(stdout, "{name}")?;
        }
        return Ok(0);
    }
    let b = Building::new(load_graph(&cli.graph)?);
    match &cli.command {
        Command::Build => {
            let t = Truncation::new(&b, cli.radius.unwrap_or(1));
            match &cli.out {
                Some(dir) => {
                    write_file(dir, "truncation.dot", &t.to_dot())?;
                    write_file(dir, "truncation.json", &t.to_json())?;
                }
                None => match cli.format {
                    Format::Dot => stdout.write_all(t.to_dot().as_bytes())?,
                    Format::Json => stdout.write_all(t.to_json().as_bytes())?,
                },
            }
            Ok(0)
        }
        Command::Verify { suite } => {
            let suites = Suite::select(suite).ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                usage(format!("unknown suite {suite:?}; expected one of {}, all", names.join(", ")))
            })?;
            let cfg = VerifyConfig { radius: cli.radius.unwrap_or(2), seed: cli.seed };
            let report = verify::run(&b, &suites, &cfg);
            let text = pretty(&serde_json::to_value(&report).expect("serializable"));
            emit(&cli.out, "verify.json", &text, stdout)?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Automorphism { source, target, from, to, sigma } => {
            let a1 = parse_atlas(&b, source)?;
            let a2 = parse_atlas(&b, target)?;
            let c = parse_chamber(&b, from)?;
            let cprime = parse_chamber(&b, to)?;
            let seed = match sigma {
                Some(text) => {
                    let images: Vec<usize> =
                        serde_json::from_str(text).map_err(|e| usage(format!("sigma {text:?}: {e}")))?;
                    VertexPerm::from_images(images).ok_or_else(|| usage(format!("{text} is not a permutation")))?
                }
                None => a2.tau(&cprime)?.inverse().compose(&a1.tau(&c)?),
            };
            let ext = extend_automorphism(&seed, &c, &cprime, &a1, &a2, cli.radius.unwrap_or(2))?;
            let mut value = ext.to_json();
            value["source"] = json!(source);
            value["target"] = json!(target);
            emit(&cli.out, "automorphism.json", &pretty(&value), stdout)?;
            Ok(0)
        }
        Command::Demo { twist, samples } => {
            let t = parse_twist(b.graph(), twist)?;
            let radius = cli.radius.unwrap_or(3);
            let picked = sample_ball(&b, radius, *samples, cli.seed);
            let report = commensuration_demo(&b, &t, &picked, radius)?;
            let text = pretty(&serde_json::to_value(&report).expect("serializable"));
            emit(&cli.out, "demo.json", &text, stdout)?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Classify => {
            let g = b.graph();
            let radius = cli.radius.unwrap_or(1);
            let report = classify_with_links(g, radius);
            let incidence = match report.case {
                Some(c) => Some(edge_cell_incidence(&b, c, radius)?),
                None => None,
            };
            let value = json!({
                "classification": report,
                "incidence": incidence.as_ref().map(|i| json!({
                    "cells": i.cells,
                    "multiplicities": i.multiplicities(),
                    "sides": i.sides.iter().map(|((lo, hi), m)| json!({ "lo": lo, "hi": hi, "multiplicities": m })).collect::<Vec<_>>(),
                })),
                "star_rigid": star_rigid(g),
                "induced_4cycle": has_induced_4cycle(g),
            });
            emit(&cli.out, "classify.json", &pretty(&value), stdout)?;
            let links_ok = report.link_check.as_ref().map_or(true, |l| l.passed);
            Ok(if links_ok { 0 } else { 1 })
        }
        Command::Graphs => unreachable!("handled above"),
    }
}

/// Runs `cli` under the thread cap from the environment.
pub fn main_with(cli: &Cli, threads: Option<&str>, stdout: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    match threads_from_env(threads)? {
        Some(n) => parallel::with_threads(n, || run(cli, stdout)),
        None => run(cli, stdout),
    }
}
