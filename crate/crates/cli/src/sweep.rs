//! Sweep execution: every (shots, repetition) pair is an independent search
//! with its own derived seed stream, so the grid can run on any number of
//! threads and still produce identical output. Rows come back keyed and are
//! sorted, never appended in completion order.

use anyhow::{Context, Result};
use posearch_core::{run_search_with, search_rng, ScramblerSpec, SearchOptions};
use rayon::prelude::*;

use crate::config::{Experiment, MAX_REPS};
use crate::output::{summarize_bands, BandSummary, SweepRow};

/// Seed stream for repetition `rep` of shots-index `si`.
fn rep_stream(si: usize, rep: u64) -> u64 {
    si as u64 * MAX_REPS + rep
}

pub fn execute(
    exp: &Experiment,
    spec: &ScramblerSpec,
) -> Result<(Vec<SweepRow>, Vec<BandSummary>)> {
    let opts_for = |shots: u64| SearchOptions {
        shots,
        bits_per_stage: exp.bits_per_stage,
        exact_models: false,
    };

    let jobs: Vec<(usize, u64, u64)> = exp
        .shots_list
        .iter()
        .enumerate()
        .flat_map(|(si, &shots)| (0..exp.reps).map(move |rep| (si, shots, rep)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(exp.threads)
        .build()
        .context("building worker pool")?;

    let mut rows: Vec<(usize, SweepRow)> = pool.install(|| {
        jobs.into_par_iter()
            .map(|(si, shots, rep)| {
                let rng = search_rng(exp.seed, rep_stream(si, rep));
                let result = run_search_with(spec, opts_for(shots), rng)?;
                Ok((
                    si,
                    SweepRow {
                        n_shots: shots,
                        rep,
                        success_prob: result.success_prob,
                        verified: result.verified,
                        total_circuit_queries: result.total_circuit_queries,
                    },
                ))
            })
            .collect::<posearch_core::Result<Vec<_>>>()
    })?;

    rows.sort_by_key(|(si, row)| (*si, row.rep));

    let summary = exp
        .shots_list
        .iter()
        .enumerate()
        .map(|(si, &shots)| {
            let probs: Vec<f64> = rows
                .iter()
                .filter(|(rsi, _)| *rsi == si)
                .map(|(_, r)| r.success_prob)
                .collect();
            summarize_bands(shots, &probs)
        })
        .collect();

    let rows: Vec<SweepRow> = rows.into_iter().map(|(_, row)| row).collect();
    Ok((rows, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OutputFormat;

    fn experiment(threads: usize) -> Experiment {
        Experiment {
            n: 6,
            shots_list: vec![100, 200],
            reps: 4,
            seed: 11,
            bits_per_stage: 1,
            key: None,
            perm_seed: None,
            out: None,
            format: OutputFormat::Csv,
            threads,
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let serial_exp = experiment(1);
        let spec = serial_exp.spec().unwrap();
        let (rows_serial, _) = execute(&serial_exp, &spec).unwrap();
        let (rows_parallel, _) = execute(&experiment(4), &spec).unwrap();
        assert_eq!(rows_serial.len(), rows_parallel.len());
        for (a, b) in rows_serial.iter().zip(&rows_parallel) {
            assert_eq!(a.n_shots, b.n_shots);
            assert_eq!(a.rep, b.rep);
            assert_eq!(a.success_prob, b.success_prob);
        }
    }

    #[test]
    fn duplicate_shots_values_reuse_distinct_streams() {
        let mut exp = experiment(1);
        exp.shots_list = vec![100, 100];
        let spec = exp.spec().unwrap();
        let (rows, summary) = execute(&exp, &spec).unwrap();
        assert_eq!(rows.len(), 8);
        // same shots value at different sweep positions draws fresh seeds
        assert_ne!(rows[0].success_prob, rows[4].success_prob);
        assert_eq!(summary.len(), 2);
        // summaries group by sweep position, not by shots value
        assert!(summary.iter().all(|s| s.reps == 4));
    }
}
