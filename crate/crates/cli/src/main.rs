//! Command-line harness for the partial-oracle key search: single runs,
//! shot sweeps, baseline comparisons, and a small-register verification
//! suite. All data output is deterministic for a given seed; summaries and
//! diagnostics go to stderr, reports to `--out` or stdout.

mod config;
mod output;
mod sweep;
mod verify;

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use posearch_core::{
    baseline_query_estimate, run_baseline, run_search_with, search_rng, SearchOptions,
    BIT_CONVENTION_NOTE,
};

use config::{resolve, CommonArgs, OutputFormat, UsageError};
use output::{bits, emit, to_json, BaselineReport, RunReport, SweepReport};

#[derive(Parser)]
#[command(
    name = "posearch",
    about = "Staged quantum key search from partial match oracles, simulated on a dense statevector",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One search run; writes a full JSON report
    Run(CommonArgs),
    /// Repeated runs over a list of shot counts; writes rows plus a
    /// success-probability band histogram
    Sweep(CommonArgs),
    /// Staged search vs the single-oracle search on the same instance
    Baseline(CommonArgs),
    /// Self-checks on small registers; nonzero exit on any failure
    Verify {
        /// Largest key width for the joint-register equivalence check
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..=6))]
        max_n: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Baseline(args) => cmd_baseline(&args),
        Command::Verify { max_n } => cmd_verify(max_n as usize),
    };
    match outcome {
        Ok(code) => code,
        Err(err) if err.is::<UsageError>() => {
            eprintln!("usage error: {err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_run(args: &CommonArgs) -> Result<ExitCode> {
    let exp = resolve(args, OutputFormat::Json)?;
    let shots = exp.single_shots()?;
    let spec = exp.spec()?;
    let opts = SearchOptions {
        shots,
        bits_per_stage: exp.bits_per_stage,
        exact_models: false,
    };
    let result = run_search_with(&spec, opts, search_rng(exp.seed, 0))?;

    eprintln!(
        "found_key={} (0x{:x}) verified={} success_prob={:.6} circuit_queries={} shot_queries={}",
        bits(result.found_key, exp.n),
        result.found_key,
        result.verified,
        result.success_prob,
        result.total_circuit_queries,
        result.total_shot_queries
    );

    let content = match exp.format {
        OutputFormat::Json => to_json(&RunReport::new(&exp, spec.record(), &result))?,
        OutputFormat::Csv => output::run_csv(&exp, shots, &result),
    };
    emit(exp.out.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: &CommonArgs) -> Result<ExitCode> {
    let exp = resolve(args, OutputFormat::Csv)?;
    let spec = exp.spec()?;
    let (rows, summary) = sweep::execute(&exp, &spec)?;

    for s in &summary {
        let counts: Vec<String> = s
            .bands
            .iter()
            .map(|b| format!("{}={}", b.band, b.count))
            .collect();
        eprintln!("shots={} reps={} {}", s.n_shots, s.reps, counts.join(" "));
    }

    let content = match exp.format {
        OutputFormat::Csv => output::sweep_csv(&rows, &summary),
        OutputFormat::Json => to_json(&SweepReport {
            command: "sweep",
            bit_convention: BIT_CONVENTION_NOTE,
            config: &exp,
            spec: spec.record(),
            rows: &rows,
            summary: &summary,
        })?,
    };
    emit(exp.out.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_baseline(args: &CommonArgs) -> Result<ExitCode> {
    let exp = resolve(args, OutputFormat::Json)?;
    let shots = exp.single_shots()?;
    let spec = exp.spec()?;
    let opts = SearchOptions {
        shots,
        bits_per_stage: exp.bits_per_stage,
        exact_models: false,
    };
    let partial = run_search_with(&spec, opts, search_rng(exp.seed, 0))?;
    let baseline = run_baseline(&spec)?;
    let estimate = baseline_query_estimate(exp.n);

    eprintln!(
        "partial:  circuit_queries={} verified={} success_prob={:.6}",
        partial.total_circuit_queries, partial.verified, partial.success_prob
    );
    eprintln!(
        "baseline: circuit_queries={} verified={} success_prob={:.6} sqrt_nm_estimate={:.1}",
        baseline.total_circuit_queries, baseline.verified, baseline.success_prob, estimate
    );

    let content = match exp.format {
        OutputFormat::Json => to_json(&BaselineReport {
            command: "baseline",
            bit_convention: BIT_CONVENTION_NOTE,
            config: &exp,
            spec: spec.record(),
            partial: &partial,
            baseline: &baseline,
            baseline_query_estimate: estimate,
        })?,
        OutputFormat::Csv => output::baseline_csv(&partial, &baseline, estimate),
    };
    emit(exp.out.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(max_n: usize) -> Result<ExitCode> {
    let outcomes = verify::run_all(max_n)?;
    let mut all_passed = true;
    for check in &outcomes {
        let status = if check.passed { "PASS" } else { "FAIL" };
        all_passed &= check.passed;
        println!("{status} {} ({})", check.name, check.detail);
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
