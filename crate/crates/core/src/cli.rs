//! Command-line front end.
//!
//! Exit codes: 0 success, 2 malformed input (parse, label or dimension
//! mismatch), 3 impossible request or no embedding exists, 4 verification
//! failed, 5 search budget exhausted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::embedding::{EmbedError, Norm, PwaEmbedding};
use crate::l1::{embed_l1, min_dim_l1, star_embed_l1};
use crate::linf::{kuratowski_embed_linf, min_dim_linf_bounds, star_embed_linf};
use crate::newick::parse_newick;
use crate::rational::{int, parse_rational, Rational};
use crate::search::{search_embed_linf_with, PairScope, SearchConfig, SearchOutcome, DEFAULT_NODE_BUDGET};
use crate::sweep::{conjecture_sweep, SweepConfig, SweepError};
use crate::tree::{parse_edge_list, MetricTree, StarTree};
use crate::verify::{verify_isometry_with, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IMPOSSIBLE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;
pub const EXIT_INCONCLUSIVE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "mtree-embed", version, about = "Isometric embeddings of metric trees into l1 and l-infinity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leaf count and dimension bounds for a tree.
    Bounds(BoundsArgs),
    /// Construct and verify an embedding.
    Embed(EmbedArgs),
    /// Check a coordinate file against a tree.
    Verify(VerifyArgs),
    /// Search every small tree for an l-infinity embedding.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormArg {
    L1,
    Linf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::L1 => Norm::L1,
            NormArg::Linf => Norm::Linf,
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Edge list or Newick file.
    pub tree: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    pub tree: PathBuf,
    #[arg(long, value_enum)]
    pub norm: NormArg,
    /// Target dimension; defaults to the best available construction.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Use the exhaustive search at this dimension (l-infinity only).
    #[arg(long)]
    pub search_dim: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Seed for the sampled cross-check.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub tree: PathBuf,
    /// JSON coordinates: `{"coordinates": {label: [..]}}` or a bare map.
    pub coords: PathBuf,
    #[arg(long, value_enum)]
    pub norm: NormArg,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub max_leaves: usize,
    /// Comma-separated positive edge weights.
    #[arg(long, value_delimiter = ',', default_value = "1,2,1/2")]
    pub grid: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<EmbedError> for CliError {
    fn from(e: EmbedError) -> Self {
        let code = match e {
            EmbedError::TooManyArms { .. } | EmbedError::ZeroDimension => EXIT_IMPOSSIBLE,
            EmbedError::NotIsometric => EXIT_VERIFY,
            _ => EXIT_INPUT,
        };
        CliError::new(code, e.to_string())
    }
}

/// Runs a parsed command; output text is written to `--out` or `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Bounds(a) => cmd_bounds(&a, stdout),
        Command::Embed(a) => cmd_embed(&a, stdout),
        Command::Verify(a) => cmd_verify(&a, stdout),
        Command::Sweep(a) => cmd_sweep(&a, stdout),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

/// Newick if the first non-blank character is `(`, edge list otherwise.
pub fn parse_tree_text(text: &str) -> Result<MetricTree, CliError> {
    let parsed = if text.trim_start().starts_with('(') {
        parse_newick(text)
    } else {
        parse_edge_list(text)
    };
    parsed.map_err(|e| CliError::new(EXIT_INPUT, e.to_string()))
}

fn read_tree(path: &Path) -> Result<MetricTree, CliError> {
    parse_tree_text(&read_text(path)?)
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::new(EXIT_INPUT, format!("write failed: {e}"));
    match &output.out {
        None => stdout.write_all(text.as_bytes()).map_err(io_err),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
            tmp.write_all(text.as_bytes()).map_err(io_err)?;
            tmp.persist(path).map_err(|e| io_err(e.error))?;
            Ok(())
        }
    }
}

/// Pretty JSON with sorted keys.
fn to_json_text(value: &impl serde::Serialize) -> String {
    let v: Value = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_bounds(a: &BoundsArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let tree = read_tree(&a.tree)?;
    let (lower, upper) = min_dim_linf_bounds(&tree);
    let doc = json!({
        "leaves": tree.leaf_count(),
        "l1_min_dim": min_dim_l1(&tree),
        "linf_lower": lower,
        "linf_upper": upper,
        "is_star": tree.is_star() || tree.edge_count() == 1,
    });
    emit(&a.output, &to_json_text(&doc), stdout)?;
    Ok(EXIT_OK)
}

fn pad(emb: PwaEmbedding, n: usize) -> PwaEmbedding {
    let extra = n.saturating_sub(emb.dimension);
    if extra == 0 {
        return emb;
    }
    PwaEmbedding {
        norm: emb.norm,
        dimension: n,
        images: emb
            .images
            .into_iter()
            .map(|(l, mut x)| {
                x.extend(std::iter::repeat(int(0)).take(extra));
                (l, x)
            })
            .collect(),
    }
}

fn embed_by_search(tree: &MetricTree, n: usize, budget: u64) -> Result<PwaEmbedding, CliError> {
    let config = SearchConfig {
        node_budget: budget,
        scope: PairScope::Leaves,
    };
    let result = search_embed_linf_with(tree, n, &config)
        .map_err(|e| CliError::new(EXIT_IMPOSSIBLE, e.to_string()))?;
    match result.outcome {
        SearchOutcome::Found(emb, _) => Ok(emb),
        SearchOutcome::Exhausted => Err(CliError::new(
            EXIT_IMPOSSIBLE,
            format!("no isometric embedding into l-infinity dimension {n} exists"),
        )),
        SearchOutcome::Inconclusive => Err(CliError::new(
            EXIT_INCONCLUSIVE,
            format!("search inconclusive after {} nodes", result.nodes),
        )),
    }
}

fn cmd_embed(a: &EmbedArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let tree = read_tree(&a.tree)?;
    let star = StarTree::from_tree(&tree);
    let emb = match (Norm::from(a.norm), a.search_dim) {
        (Norm::L1, Some(_)) => {
            return Err(CliError::new(EXIT_INPUT, "--search-dim applies to linf only"));
        }
        (Norm::L1, None) => {
            let optimum = min_dim_l1(&tree);
            let n = a.dim.unwrap_or(optimum);
            if n < optimum {
                return Err(CliError::new(
                    EXIT_IMPOSSIBLE,
                    format!(
                        "a tree with {} leaves needs l1 dimension at least {optimum}",
                        tree.leaf_count()
                    ),
                ));
            }
            match &star {
                Some(s) => star_embed_l1(s, n)?,
                None => pad(embed_l1(&tree), n),
            }
        }
        (Norm::Linf, Some(n)) => embed_by_search(&tree, n, a.budget)?,
        (Norm::Linf, None) => {
            let (lower, _) = min_dim_linf_bounds(&tree);
            match (&star, a.dim) {
                (Some(s), dim) => star_embed_linf(s, dim.unwrap_or(lower))?,
                (None, None) => kuratowski_embed_linf(&tree),
                (None, Some(n)) if n < lower => {
                    return Err(CliError::new(
                        EXIT_IMPOSSIBLE,
                        format!(
                            "a tree with {} leaves needs l-infinity dimension at least {lower}",
                            tree.leaf_count()
                        ),
                    ));
                }
                (None, Some(n)) if n >= tree.leaf_count() => pad(kuratowski_embed_linf(&tree), n),
                (None, Some(n)) => embed_by_search(&tree, n, a.budget)?,
            }
        }
    };
    let mut emb = emb;
    for s in tree.suppressed() {
        let p = tree.locate(&s.label).expect("suppressed vertex is locatable");
        let x = emb.eval(&tree, &p)?;
        emb.images.insert(s.label.clone(), x);
    }
    let report = verify_isometry_with(
        &tree,
        &emb,
        &VerifyConfig {
            seed: a.seed,
            ..VerifyConfig::default()
        },
    )?;
    let passed = report.passed();
    let mut doc = serde_json::to_value(&emb).expect("serializable");
    doc["verification"] = serde_json::to_value(&report).expect("serializable");
    emit(&a.output, &to_json_text(&doc), stdout)?;
    if passed {
        Ok(EXIT_OK)
    } else {
        Err(CliError::new(EXIT_VERIFY, "constructed embedding failed verification"))
    }
}

/// Reads coordinates from either `{"coordinates": {...}, "dimension": n}`
/// or a bare `{label: [..]}` map.
pub fn parse_coordinates(text: &str, norm: Norm) -> Result<PwaEmbedding, CliError> {
    let bad = |m: String| CliError::new(EXIT_INPUT, m);
    let value: Value = serde_json::from_str(text).map_err(|e| bad(format!("coordinates: {e}")))?;
    let map = match value.get("coordinates") {
        Some(c) => c,
        None => &value,
    };
    let map = map
        .as_object()
        .ok_or_else(|| bad("coordinates must be a JSON object".into()))?;
    let mut emb = PwaEmbedding::new(norm, 0);
    for (label, v) in map {
        let items = v
            .as_array()
            .ok_or_else(|| bad(format!("coordinates of `{label}` must be an array")))?;
        let mut x = Vec::with_capacity(items.len());
        for item in items {
            let r: Rational = match item {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => return Err(bad(format!("non-numeric coordinate for `{label}`"))),
            }
            .map_err(|e| bad(format!("`{label}`: {e}")))?;
            x.push(r);
        }
        emb.images.insert(label.clone(), x);
    }
    emb.dimension = match value.get("dimension").and_then(Value::as_u64) {
        Some(d) => d as usize,
        None => emb.images.values().next().map_or(0, Vec::len),
    };
    Ok(emb)
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let tree = read_tree(&a.tree)?;
    let emb = parse_coordinates(&read_text(&a.coords)?, a.norm.into())?;
    let report = verify_isometry_with(
        &tree,
        &emb,
        &VerifyConfig {
            seed: a.seed,
            ..VerifyConfig::default()
        },
    )?;
    emit(&a.output, &to_json_text(&report), stdout)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let grid = a
        .grid
        .iter()
        .map(|s| parse_rational(s.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::new(EXIT_INPUT, format!("--grid: {e}")))?;
    let config = SweepConfig {
        search: SearchConfig {
            node_budget: a.budget,
            scope: PairScope::Leaves,
        },
        verify: VerifyConfig {
            seed: a.seed,
            ..VerifyConfig::default()
        },
    };
    let report = conjecture_sweep(a.dim, a.max_leaves, &grid, &config).map_err(|e| {
        let code = match e {
            SweepError::TooManyLeaves { .. } => EXIT_IMPOSSIBLE,
            _ => EXIT_INPUT,
        };
        CliError::new(code, e.to_string())
    })?;
    emit(&a.output, &report.to_jsonl(), stdout)?;

    let candidates: Vec<_> = report.counterexample_candidates().collect();
    for c in &candidates {
        eprintln!(
            "COUNTEREXAMPLE CANDIDATE: {} weights [{}] has no embedding in dimension {}",
            c.topology_id,
            c.weights.join(", "),
            c.dimension
        );
    }
    let unverified = report
        .records
        .iter()
        .filter(|r| r.outcome == crate::sweep::SweepOutcome::Found && !r.verified)
        .count();
    let inconclusive = report.inconclusive().count();
    eprintln!(
        "{} instances, {} counterexample candidates, {} inconclusive, {} unverified",
        report.records.len(),
        candidates.len(),
        inconclusive,
        unverified
    );
    Ok(if !candidates.is_empty() {
        EXIT_IMPOSSIBLE
    } else if unverified > 0 {
        EXIT_VERIFY
    } else if inconclusive > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}
