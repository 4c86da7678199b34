//! Speedup and efficiency measurement, theta sweeps and CSV output.
//!
//! Every timed run is checked before its time is used: the pivot trace must
//! match the baseline run exactly and optimal runs must carry a valid
//! certificate.

use thiserror::Error;

use crate::engine::{run_simplex, EngineConfig, EngineError, EngineRun, ExecutionMode};
use crate::lp_core::{check_certificate, traces_identical, LpProblem, PivotRecord, SimplexOptions, Status};
use crate::partition::{split_theta, LaneLayout};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("times must be positive, got base {base} and p-time {time}")]
    NonPositiveTime { base: f64, time: f64 },
    #[error("lane count must be at least 1")]
    ZeroLanes,
    #[error("repetitions must be at least 1")]
    NoRepetitions,
    #[error("theta step {0} must lie in (0, 0.5]")]
    BadThetaStep(f64),
    #[error("{label}: pivot trace differs from the baseline run")]
    TraceMismatch { label: String },
    #[error("{label}: optimality certificate failed: {details}")]
    Certificate { label: String, details: String },
    #[error("{label}: solver finished {status}")]
    Unsolved { label: String, status: Status },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("csv: {0}")]
    Csv(String),
}

/// `Sp = t_base / t_p`.
pub fn compute_speedup(t_base: f64, t_p: f64) -> Result<f64, BenchError> {
    if !(t_base > 0.0 && t_p > 0.0) {
        return Err(BenchError::NonPositiveTime { base: t_base, time: t_p });
    }
    Ok(t_base / t_p)
}

/// `Ep = Sp / p`.
pub fn compute_efficiency(speedup: f64, p: usize) -> Result<f64, BenchError> {
    if p == 0 {
        return Err(BenchError::ZeroLanes);
    }
    Ok(speedup / p as f64)
}

/// Median; the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub label: String,
    pub p: usize,
    pub theta: f64,
    pub device_weights: Vec<f64>,
    /// Seconds.
    pub time_per_iter: f64,
    pub iterations: usize,
    pub speedup: f64,
    pub efficiency: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub label: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BenchRow>,
    pub baseline_time_per_iter: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub report: BenchReport,
    pub best_theta: f64,
}

/// Fails with [`BenchError::TraceMismatch`] unless the traces agree bit for bit.
pub fn verify_traces(baseline: &[PivotRecord], candidate: &[PivotRecord], label: &str) -> Result<(), BenchError> {
    if traces_identical(baseline, candidate) {
        Ok(())
    } else {
        Err(BenchError::TraceMismatch { label: label.to_string() })
    }
}

/// Phase-loop seconds per pivot, excluding parsing and phase one.
fn seconds_per_iter(run: &EngineRun) -> f64 {
    match run.stats.iterations() {
        0 => run.stats.phase_two.as_secs_f64(),
        _ => run.stats.time_per_iter().as_secs_f64(),
    }
}

struct Measured {
    time_per_iter: f64,
    iterations: usize,
    trace: Vec<PivotRecord>,
}

/// Runs `config` `reps` times, checking every run against `baseline` (or the
/// first run when there is none yet).
fn measure(
    problem: &LpProblem,
    config: &EngineConfig,
    reps: usize,
    label: &str,
    baseline: Option<&[PivotRecord]>,
) -> Result<Measured, BenchError> {
    let mut times = Vec::with_capacity(reps);
    let mut first: Option<(Vec<PivotRecord>, usize)> = None;
    for _ in 0..reps {
        let run = run_simplex(problem, config)?;
        let solution = &run.solution;
        match solution.status {
            Status::Optimal => {
                let tableau = run.tableau.as_ref().expect("optimal runs keep their tableau");
                let certificate = check_certificate(problem, tableau);
                if !certificate.is_valid() {
                    let details = certificate
                        .violations
                        .iter()
                        .take(3)
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("; ");
                    return Err(BenchError::Certificate {
                        label: label.to_string(),
                        details,
                    });
                }
            }
            // a capped run is still a valid timing sample
            Status::IterationLimit if config.options.max_iterations.is_some() => {}
            status => {
                return Err(BenchError::Unsolved {
                    label: label.to_string(),
                    status,
                })
            }
        }
        let reference = baseline.or(first.as_ref().map(|(t, _)| t.as_slice()));
        if let Some(reference) = reference {
            verify_traces(reference, &solution.pivot_trace, label)?;
        }
        times.push(seconds_per_iter(&run));
        if first.is_none() {
            first = Some((run.solution.pivot_trace, run.solution.iterations));
        }
    }
    let (trace, iterations) = first.expect("at least one repetition");
    Ok(Measured {
        time_per_iter: median(&times),
        iterations,
        trace,
    })
}

fn bench_config(options: &SimplexOptions, layout: &LaneLayout, theta: f64) -> EngineConfig {
    EngineConfig {
        options: *options,
        trace: true,
        mode: ExecutionMode::Threaded,
        ..EngineConfig::from_layout(layout, theta)
    }
}

/// Times the CPU pool at each lane count `p` (a `cpu:p` layout, theta 0),
/// always including `p = 1` as the baseline. Rows come out in ascending `p`.
pub fn run_bench(
    problem: &LpProblem,
    lane_counts: &[usize],
    reps: usize,
    options: &SimplexOptions,
) -> Result<BenchReport, BenchError> {
    if reps == 0 {
        return Err(BenchError::NoRepetitions);
    }
    if lane_counts.contains(&0) {
        return Err(BenchError::ZeroLanes);
    }
    let mut counts: Vec<usize> = lane_counts.to_vec();
    counts.push(1);
    counts.sort_unstable();
    counts.dedup();

    let mut baseline: Option<Measured> = None;
    let mut entries = Vec::with_capacity(counts.len());
    for &p in &counts {
        let label = format!("cpu:{p}");
        let config = bench_config(options, &LaneLayout::cpu_only(p), 0.0);
        let measured = measure(problem, &config, reps, &label, baseline.as_ref().map(|b| b.trace.as_slice()))?;
        let base_time = baseline.as_ref().map_or(measured.time_per_iter, |b| b.time_per_iter);
        let speedup = compute_speedup(base_time, measured.time_per_iter)?;
        entries.push(BenchRow {
            label,
            p,
            theta: 0.0,
            device_weights: Vec::new(),
            time_per_iter: measured.time_per_iter,
            iterations: measured.iterations,
            speedup,
            efficiency: compute_efficiency(speedup, p)?,
        });
        if baseline.is_none() {
            baseline = Some(measured);
        }
    }
    Ok(BenchReport {
        label: problem.name.clone(),
        rows: problem.num_rows(),
        cols: problem.num_cols(),
        entries,
        baseline_time_per_iter: baseline.expect("p = 1 always runs").time_per_iter,
    })
}

/// `0, step, 2 step, ...` up to and including 1.
pub fn theta_grid(step: f64) -> Result<Vec<f64>, BenchError> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(BenchError::BadThetaStep(step));
    }
    let mut grid = Vec::new();
    for k in 0.. {
        // rounding keeps 0.1 * 3 at 0.3
        let theta = ((k as f64 * step) * 1e9).round() / 1e9;
        if theta >= 1.0 - 1e-9 {
            break;
        }
        grid.push(theta);
    }
    grid.push(1.0);
    Ok(grid)
}

/// Times `layout` for every theta on the grid. Speedups are relative to the
/// theta = 0 row and `p` is the number of lanes.
pub fn run_theta_sweep(
    problem: &LpProblem,
    layout: &LaneLayout,
    step: f64,
    reps: usize,
    options: &SimplexOptions,
) -> Result<SweepReport, BenchError> {
    if reps == 0 {
        return Err(BenchError::NoRepetitions);
    }
    let grid = theta_grid(step)?;
    let capabilities = layout.device_capabilities();
    let p = layout.lanes.len();
    let mut baseline: Option<Measured> = None;
    let mut entries = Vec::with_capacity(grid.len());
    for theta in grid {
        let label = format!("{layout}@{theta:.1}");
        let device_weights = if capabilities.is_empty() {
            Vec::new()
        } else {
            split_theta(theta, &capabilities).map_err(EngineError::from)?
        };
        let config = bench_config(options, layout, theta);
        let measured = measure(problem, &config, reps, &label, baseline.as_ref().map(|b| b.trace.as_slice()))?;
        let base_time = baseline.as_ref().map_or(measured.time_per_iter, |b| b.time_per_iter);
        let speedup = compute_speedup(base_time, measured.time_per_iter)?;
        entries.push(BenchRow {
            label,
            p,
            theta,
            device_weights,
            time_per_iter: measured.time_per_iter,
            iterations: measured.iterations,
            speedup,
            efficiency: compute_efficiency(speedup, p)?,
        });
        if baseline.is_none() {
            baseline = Some(measured);
        }
    }
    let best_theta = entries
        .iter()
        .min_by(|a, b| a.time_per_iter.total_cmp(&b.time_per_iter))
        .map(|row| row.theta)
        .unwrap_or(0.0);
    Ok(SweepReport {
        report: BenchReport {
            label: problem.name.clone(),
            rows: problem.num_rows(),
            cols: problem.num_cols(),
            entries,
            baseline_time_per_iter: baseline.expect("grid starts at 0").time_per_iter,
        },
        best_theta,
    })
}

/// CSV with columns `label, p, theta, theta_1.., time_per_iter, iterations,
/// speedup, efficiency`. Times get 6 decimals, ratios 4. The efficiency
/// column is derived from the rendered speedup so the file is self-consistent.
pub fn emit_csv(report: &BenchReport) -> Result<String, BenchError> {
    let devices = report
        .entries
        .iter()
        .map(|r| r.device_weights.len())
        .max()
        .unwrap_or(0);
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["label".to_string(), "p".into(), "theta".into()];
    header.extend((1..=devices).map(|i| format!("theta_{i}")));
    header.extend(["time_per_iter", "iterations", "speedup", "efficiency"].map(String::from));
    writer.write_record(&header).map_err(|e| BenchError::Csv(e.to_string()))?;
    for row in &report.entries {
        let speedup = format!("{:.4}", row.speedup);
        let rendered: f64 = speedup.parse().expect("formatted float parses");
        let mut record = vec![row.label.clone(), row.p.to_string(), format!("{:.4}", row.theta)];
        record.extend((0..devices).map(|i| row.device_weights.get(i).map_or(String::new(), |w| format!("{w:.4}"))));
        record.push(format!("{:.6}", row.time_per_iter));
        record.push(row.iterations.to_string());
        record.push(format!("{:.4}", rendered / row.p as f64));
        record.insert(record.len() - 1, speedup);
        writer.write_record(&record).map_err(|e| BenchError::Csv(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| BenchError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
