//! The `simulate` verb: seeded draws from the exact outcome table.

use std::fmt::Write as _;

use fr_protocol::{sample_until_halt, Scenario, TrialRecord};
use serde_json::json;

use crate::{CliError, Format};

/// One run's records, labelled by its seed.
struct Run {
    seed: u64,
    records: Vec<TrialRecord>,
}

impl Run {
    fn halted(&self) -> bool {
        self.records.last().is_some_and(|r| r.halted)
    }
}

pub(crate) fn run(
    seed: u64,
    max_trials: u64,
    jobs: Option<u64>,
    format: Format,
) -> Result<String, CliError> {
    let runs = match jobs {
        Some(0) => return Err(CliError::usage("--jobs must be at least 1")),
        Some(n) => n,
        None => 1,
    };
    let runs = collect_runs(seed, max_trials, runs)?;
    Ok(match format {
        Format::Text => render_text(&runs, max_trials),
        Format::Jsonl => render_jsonl(&runs),
    })
}

/// Draw every run; with more than one, fan out one worker per seed and
/// reassemble in seed order so output stays deterministic.
fn collect_runs(seed: u64, max_trials: u64, runs: u64) -> Result<Vec<Run>, CliError> {
    let seeds: Vec<u64> = (0..runs).map(|j| seed.wrapping_add(j)).collect();
    if runs == 1 {
        return Ok(vec![Run {
            seed,
            records: sample_until_halt(seed, max_trials)?,
        }]);
    }
    let results: Vec<Result<Vec<TrialRecord>, fr_protocol::Error>> =
        std::thread::scope(|scope| {
            let workers: Vec<_> = seeds
                .iter()
                .map(|&s| scope.spawn(move || sample_until_halt(s, max_trials)))
                .collect();
            workers
                .into_iter()
                .map(|w| w.join().expect("simulation worker panicked"))
                .collect()
        });
    seeds
        .into_iter()
        .zip(results)
        .map(|(seed, records)| Ok(Run {
            seed,
            records: records?,
        }))
        .collect()
}

fn probability_string(scenario: &Scenario) -> String {
    match scenario.probability.to_rational() {
        Some(r) => r.to_string(),
        None => scenario.probability.to_string(),
    }
}

fn render_text(runs: &[Run], max_trials: u64) -> String {
    let mut out = String::new();
    for run in runs {
        let _ = writeln!(out, "run seed={} cap={}", run.seed, max_trials);
        for record in &run.records {
            let s = &record.scenario;
            let _ = writeln!(
                out,
                "  trial {}: f1={} f2={} w1={} w2={} p={} {}",
                record.trial_index,
                s.f1,
                s.f2,
                s.w1,
                s.w2,
                probability_string(s),
                if record.halted { "halt" } else { "continue" }
            );
        }
        match run.records.last() {
            Some(last) if last.halted => {
                let _ = writeln!(out, "run seed={} halted at trial {}", run.seed, last.trial_index);
            }
            _ => {
                let _ = writeln!(
                    out,
                    "run seed={} did not halt within {} trials",
                    run.seed, max_trials
                );
            }
        }
    }
    out.push_str(&statistics_line(runs, Format::Text));
    out
}

fn render_jsonl(runs: &[Run]) -> String {
    let mut out = String::new();
    for run in runs {
        for record in &run.records {
            let s = &record.scenario;
            let line = json!({
                "type": "trial",
                "seed": run.seed,
                "trial": record.trial_index,
                "f1": s.f1.to_string(),
                "f2": s.f2.to_string(),
                "w1": s.w1.to_string(),
                "w2": s.w2.to_string(),
                "p": probability_string(s),
                "halted": record.halted,
            });
            let _ = writeln!(out, "{line}");
        }
    }
    out.push_str(&statistics_line(runs, Format::Jsonl));
    out
}

/// Aggregate halting statistics over all runs.
fn statistics_line(runs: &[Run], format: Format) -> String {
    let total_trials: u64 = runs.iter().map(|r| r.records.len() as u64).sum();
    let halted: Vec<&Run> = runs.iter().filter(|r| r.halted()).collect();
    let mean: Option<f64> = (!halted.is_empty()).then(|| {
        let rounds: u64 = halted.iter().map(|r| r.records.len() as u64).sum();
        rounds as f64 / halted.len() as f64
    });
    match format {
        Format::Text => {
            let mean = mean.map_or_else(|| "n/a".to_string(), |m| format!("{m:.3}"));
            format!(
                "halting statistics: runs={} halted={} trials={} mean-halting-trial={}\n",
                runs.len(),
                halted.len(),
                total_trials,
                mean
            )
        }
        Format::Jsonl => {
            let line = json!({
                "type": "summary",
                "runs": runs.len(),
                "halted_runs": halted.len(),
                "trials": total_trials,
                "mean_halting_trial": mean,
            });
            format!("{line}\n")
        }
    }
}
