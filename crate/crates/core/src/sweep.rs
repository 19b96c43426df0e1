//! Exhaustive sweeps over small trees: does every tree with at most `2ⁿ`
//! leaves embed isometrically into `(ℝⁿ, d∞)`?
//!
//! Any tree for which the search is exhausted without finding an embedding
//! is a counterexample candidate and is surfaced, never dropped.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{enumerate_trees, WeightedTree};
use crate::rational::{format_rational, Rational};
use crate::search::{check_certificate, search_embed_linf_with, SearchConfig, SearchOutcome};
use crate::verify::{verify_isometry_with, VerifyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepConfig {
    pub search: SearchConfig,
    pub verify: VerifyConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("max leaves must be at least 2")]
    TooFewLeaves,
    #[error("{max_leaves} leaves exceed the 2^{dimension} = {bound} bound of the sweep")]
    TooManyLeaves {
        max_leaves: usize,
        dimension: usize,
        bound: usize,
    },
    #[error("weight grid must be nonempty and strictly positive")]
    BadGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepOutcome {
    Found,
    ExhaustedNone,
    Inconclusive,
}

/// One line of the sweep output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub topology_id: String,
    pub topology_index: usize,
    pub leaves: usize,
    pub weights: Vec<String>,
    pub dimension: usize,
    pub outcome: SweepOutcome,
    pub nodes: u64,
    /// Found embeddings passed both the isometry check and the
    /// certificate check.
    pub verified: bool,
    pub counterexample_candidate: bool,
    /// Edge-list text of the instance.
    pub tree: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub dimension: usize,
    pub max_leaves: usize,
    pub records: Vec<SweepRecord>,
}

impl SweepReport {
    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn counterexample_candidates(&self) -> impl Iterator<Item = &SweepRecord> {
        self.records.iter().filter(|r| r.counterexample_candidate)
    }

    pub fn inconclusive(&self) -> impl Iterator<Item = &SweepRecord> {
        self.records
            .iter()
            .filter(|r| r.outcome == SweepOutcome::Inconclusive)
    }

    pub fn all_found_and_verified(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.outcome == SweepOutcome::Found && r.verified)
    }
}

pub fn conjecture_sweep(
    n: usize,
    max_leaves: usize,
    grid: &[Rational],
    config: &SweepConfig,
) -> Result<SweepReport, SweepError> {
    if n == 0 {
        return Err(SweepError::ZeroDimension);
    }
    if max_leaves < 2 {
        return Err(SweepError::TooFewLeaves);
    }
    let bound = if n >= 63 { usize::MAX } else { 1usize << n };
    if max_leaves > bound {
        return Err(SweepError::TooManyLeaves {
            max_leaves,
            dimension: n,
            bound,
        });
    }
    if grid.is_empty() || grid.iter().any(|w| *w <= Rational::from_integer(0.into())) {
        return Err(SweepError::BadGrid);
    }

    let instances: Vec<WeightedTree> = enumerate_trees(max_leaves, grid).collect();
    let records = instances
        .par_iter()
        .map(|inst| run_one(inst, n, config))
        .collect();
    Ok(SweepReport {
        dimension: n,
        max_leaves,
        records,
    })
}

fn run_one(inst: &WeightedTree, n: usize, config: &SweepConfig) -> SweepRecord {
    let result =
        search_embed_linf_with(&inst.tree, n, &config.search).expect("dimension checked");
    let (outcome, verified, coordinates) = match &result.outcome {
        SearchOutcome::Found(emb, cert) => {
            let verified = check_certificate(&inst.tree, cert)
                && verify_isometry_with(&inst.tree, emb, &config.verify)
                    .map(|r| r.passed())
                    .unwrap_or(false);
            let coords = emb
                .images
                .iter()
                .map(|(l, x)| (l.clone(), x.iter().map(format_rational).collect()))
                .collect();
            (SweepOutcome::Found, verified, Some(coords))
        }
        SearchOutcome::Exhausted => (SweepOutcome::ExhaustedNone, false, None),
        SearchOutcome::Inconclusive => (SweepOutcome::Inconclusive, false, None),
    };
    SweepRecord {
        topology_id: inst.topology_id.clone(),
        topology_index: inst.topology,
        leaves: inst.tree.leaf_count(),
        weights: inst.weights.iter().map(format_rational).collect(),
        dimension: n,
        outcome,
        nodes: result.nodes,
        verified,
        counterexample_candidate: outcome == SweepOutcome::ExhaustedNone,
        tree: inst.tree.to_edge_list_text(),
        coordinates,
    }
}
