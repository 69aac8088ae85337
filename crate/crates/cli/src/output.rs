//! Report structures and their JSON/CSV renderings. Both formats are
//! byte-deterministic for identical inputs: field order is fixed, floats in
//! CSV are printed with 6 decimal places and a '.' separator, and JSON uses
//! shortest-round-trip float encoding.

use std::path::Path;

use anyhow::{Context, Result};
use posearch_core::{ScramblerRecord, SearchResult, BIT_CONVENTION_NOTE};
use serde::Serialize;

use crate::config::Experiment;

/// Paper-style success-probability bands, plus a catch-all below 0.50 so
/// the counts always partition the repetitions.
pub const BAND_LABELS: [&str; 7] = [
    "below_0.50",
    "0.50-0.59",
    "0.60-0.69",
    "0.70-0.79",
    "0.80-0.89",
    "0.90-0.99",
    "above_0.99",
];

pub fn band_index(p: f64) -> usize {
    if p > 0.99 {
        6
    } else if p >= 0.9 {
        5
    } else if p >= 0.8 {
        4
    } else if p >= 0.7 {
        3
    } else if p >= 0.6 {
        2
    } else if p >= 0.5 {
        1
    } else {
        0
    }
}

/// One sweep repetition.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n_shots: u64,
    pub rep: u64,
    pub success_prob: f64,
    pub verified: bool,
    pub total_circuit_queries: u64,
}

/// Band histogram for one shots value.
#[derive(Clone, Debug, Serialize)]
pub struct BandSummary {
    pub n_shots: u64,
    pub reps: u64,
    pub bands: Vec<BandCount>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BandCount {
    pub band: &'static str,
    pub count: u64,
}

pub fn summarize_bands(n_shots: u64, probs: &[f64]) -> BandSummary {
    let mut counts = [0u64; 7];
    for &p in probs {
        counts[band_index(p)] += 1;
    }
    BandSummary {
        n_shots,
        reps: probs.len() as u64,
        bands: BAND_LABELS
            .iter()
            .zip(counts)
            .map(|(&band, count)| BandCount { band, count })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct RunReport<'a> {
    pub command: &'static str,
    pub bit_convention: &'static str,
    pub config: &'a Experiment,
    pub spec: ScramblerRecord,
    pub result: &'a SearchResult,
}

#[derive(Serialize)]
pub struct SweepReport<'a> {
    pub command: &'static str,
    pub bit_convention: &'static str,
    pub config: &'a Experiment,
    pub spec: ScramblerRecord,
    pub rows: &'a [SweepRow],
    pub summary: &'a [BandSummary],
}

#[derive(Serialize)]
pub struct BaselineReport<'a> {
    pub command: &'static str,
    pub bit_convention: &'static str,
    pub config: &'a Experiment,
    pub spec: ScramblerRecord,
    pub partial: &'a SearchResult,
    pub baseline: &'a SearchResult,
    /// Textbook sqrt(N/M) query estimate quoted next to the exact count.
    pub baseline_query_estimate: f64,
}

impl<'a> RunReport<'a> {
    pub fn new(config: &'a Experiment, spec: ScramblerRecord, result: &'a SearchResult) -> Self {
        Self {
            command: "run",
            bit_convention: BIT_CONVENTION_NOTE,
            config,
            spec,
            result,
        }
    }
}

pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report).context("serializing report")?;
    text.push('\n');
    Ok(text)
}

/// Single-row CSV rendering of one run.
pub fn run_csv(exp: &Experiment, shots: u64, result: &SearchResult) -> String {
    let mut out = String::from(
        "n,shots,seed,found_key,verified,success_prob,total_circuit_queries,total_shot_queries\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{:.6},{},{}\n",
        exp.n,
        shots,
        exp.seed,
        result.found_key,
        result.verified,
        result.success_prob,
        result.total_circuit_queries,
        result.total_shot_queries
    ));
    out
}

/// Sweep CSV: one row per (shots, rep), then a blank line and the band
/// histogram in the fixed column layout.
pub fn sweep_csv(rows: &[SweepRow], summary: &[BandSummary]) -> String {
    let mut out = String::from("n_shots,rep,success_prob,verified,total_circuit_queries\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{:.6},{},{}\n",
            row.n_shots, row.rep, row.success_prob, row.verified, row.total_circuit_queries
        ));
    }
    out.push('\n');
    out.push_str(&format!("n_shots,reps,{}\n", BAND_LABELS.join(",")));
    for s in summary {
        let counts: Vec<String> = s.bands.iter().map(|b| b.count.to_string()).collect();
        out.push_str(&format!("{},{},{}\n", s.n_shots, s.reps, counts.join(",")));
    }
    out
}

/// Two-row comparison CSV for the baseline command.
pub fn baseline_csv(partial: &SearchResult, baseline: &SearchResult, estimate: f64) -> String {
    let mut out = String::from("method,circuit_queries,success_prob,verified,sqrt_nm_estimate\n");
    out.push_str(&format!(
        "partial,{},{:.6},{},\n",
        partial.total_circuit_queries, partial.success_prob, partial.verified
    ));
    out.push_str(&format!(
        "baseline,{},{:.6},{},{:.6}\n",
        baseline.total_circuit_queries, baseline.success_prob, baseline.verified, estimate
    ));
    out
}

/// Writes to the output path, or to stdout when none is configured.
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing report to {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// MSB-first bit string of an n-bit value, for summary lines.
pub fn bits(value: u64, n: usize) -> String {
    format!("{value:0n$b}")
}
