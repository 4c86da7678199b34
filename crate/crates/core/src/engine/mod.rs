//! Lane-partitioned simplex iterations and the sequential reference solver.
//!
//! One iteration runs in five phases:
//!
//! 1. every lane picks its best entering column,
//! 2. all lanes merge the candidates into the same `k`,
//! 3. the lane owning `k` runs the ratio test,
//! 4. the owner stages the entering column and updates the rhs,
//! 5. every lane pivots its own columns against the staged column.
//!
//! Phase one (when some `b_i < 0`) runs sequentially before the lanes start.

mod driver;
mod kernels;
mod lane;

use std::time::{Duration, Instant};

use thiserror::Error;

pub use kernels::{eliminate_column, merge_candidates, ratio_test, select_entering_local, LocalCandidate};
pub use lane::LaneBlock;

use crate::lp_core::{
    build_tableau, extract_solution, iterate, phase_one, DenseTableau, LpProblem, PhaseOneFailure, PivotRecord,
    PivotRule, SimplexOptions, Solution, Status, Tolerances, Transform,
};
use crate::partition::{plan_partition, LaneLayout, LaneSpec, PartitionError, PartitionPlan};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("pivot {value:e} on row {row} is below the pivot tolerance")]
    NumericalPivot { row: usize, value: f64 },
    #[error("cpu pool needs at least one worker")]
    NoWorkers,
    #[error("could not start the worker pool: {0}")]
    ThreadPool(String),
    #[error("iteration {iteration}: {what}")]
    InvariantViolated { iteration: usize, what: String },
}

/// How lanes are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecutionMode {
    /// All lanes run in lane order on the calling thread.
    #[default]
    Serial,
    /// One thread per device lane; the CPU lane runs on the caller with a
    /// pool of `cpu_workers` threads.
    Threaded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub lanes: Vec<LaneSpec>,
    pub cpu_workers: usize,
    pub theta: f64,
    pub options: SimplexOptions,
    pub trace: bool,
    pub mode: ExecutionMode,
    /// Check rhs feasibility and objective monotonicity after every pivot.
    pub check_invariants: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            lanes: vec![LaneSpec::cpu()],
            cpu_workers: 1,
            theta: 0.0,
            options: SimplexOptions::default(),
            trace: true,
            mode: ExecutionMode::Serial,
            check_invariants: false,
        }
    }
}

impl EngineConfig {
    pub fn from_layout(layout: &LaneLayout, theta: f64) -> Self {
        EngineConfig {
            lanes: layout.lanes.clone(),
            cpu_workers: layout.cpu_workers,
            theta,
            ..EngineConfig::default()
        }
    }

    pub fn with_rule(mut self, rule: PivotRule) -> Self {
        self.options.rule = rule;
        self
    }

    pub fn with_mode(mut self, mode: ExecutionMode) -> Self {
        self.mode = mode;
        self
    }
}

/// Wall-clock breakdown of one run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IterationStats {
    pub phase_one: Duration,
    pub phase_two: Duration,
    /// One entry per phase-two pivot.
    pub per_iteration: Vec<Duration>,
    /// Columns owned by each lane.
    pub lane_columns: Vec<usize>,
}

impl IterationStats {
    pub fn iterations(&self) -> usize {
        self.per_iteration.len()
    }

    /// Mean phase-two time per pivot, zero when no pivot happened.
    pub fn time_per_iter(&self) -> Duration {
        match self.per_iteration.len() {
            0 => Duration::ZERO,
            n => self.per_iteration.iter().sum::<Duration>() / n as u32,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EngineRun {
    pub solution: Solution,
    pub stats: IterationStats,
    /// Final phase-two tableau, absent when phase one failed.
    pub tableau: Option<DenseTableau>,
    pub plan: Option<PartitionPlan>,
}

/// Solves `problem` with the lane-partitioned engine.
pub fn run_simplex(problem: &LpProblem, config: &EngineConfig) -> Result<EngineRun, EngineError> {
    if config.cpu_workers == 0 && config.theta < 1.0 {
        return Err(EngineError::NoWorkers);
    }
    let transform = Transform::identity(problem);
    let started = Instant::now();
    let start = build_tableau(problem);
    // validate the lane layout before doing any work
    plan_partition(start.rhs_col(), config.theta, &config.lanes)?;
    let phase_one_result = phase_one(start, &config.options);
    let phase_one_time = started.elapsed();
    let (tableau, p1_iters) = match phase_one_result {
        Ok(ok) => ok,
        Err(failure) => {
            return Ok(EngineRun {
                solution: phase_one_failure(failure),
                stats: IterationStats {
                    phase_one: phase_one_time,
                    ..IterationStats::default()
                },
                tableau: None,
                plan: None,
            })
        }
    };
    let plan = plan_partition(tableau.rhs_col(), config.theta, &config.lanes)?;
    let outcome = match config.mode {
        ExecutionMode::Serial => driver::run_serial(tableau, &plan, config)?,
        ExecutionMode::Threaded => driver::run_threaded(tableau, &plan, config)?,
    };
    let solution = finish(
        &outcome.tableau,
        &transform,
        outcome.status,
        outcome.iterations,
        p1_iters,
        outcome.trace,
    );
    Ok(EngineRun {
        solution,
        stats: IterationStats {
            phase_one: phase_one_time,
            phase_two: outcome.elapsed,
            per_iteration: outcome.per_iteration,
            lane_columns: plan.ranges.iter().map(|r| r.len()).collect(),
        },
        tableau: Some(outcome.tableau),
        plan: Some(plan),
    })
}

/// Straight-line sequential solve on the row-major tableau, used as the
/// determinism oracle for [`run_simplex`].
pub fn solve_reference(problem: &LpProblem, rule: PivotRule, tolerances: Tolerances) -> Solution {
    let options = SimplexOptions {
        rule,
        tolerances,
        max_iterations: None,
    };
    reference_run(problem, &options).0
}

/// Like [`solve_reference`] with full options, also returning the final tableau.
pub fn reference_run(problem: &LpProblem, options: &SimplexOptions) -> (Solution, Option<DenseTableau>) {
    let transform = Transform::identity(problem);
    let (mut tableau, p1_iters) = match phase_one(build_tableau(problem), options) {
        Ok(ok) => ok,
        Err(failure) => return (phase_one_failure(failure), None),
    };
    let outcome = iterate(&mut tableau, options, true);
    let solution = finish(
        &tableau,
        &transform,
        outcome.status,
        outcome.iterations,
        p1_iters,
        outcome.trace,
    );
    (solution, Some(tableau))
}

fn phase_one_failure(failure: PhaseOneFailure) -> Solution {
    match failure {
        PhaseOneFailure::Infeasible { iterations } => Solution::infeasible(iterations),
        PhaseOneFailure::IterationLimit { iterations } => Solution {
            status: Status::IterationLimit,
            ..Solution::infeasible(iterations)
        },
    }
}

/// Non-optimal runs report the last basis they reached.
fn finish(
    tableau: &DenseTableau,
    transform: &Transform,
    status: Status,
    iterations: usize,
    phase_one_iterations: usize,
    trace: Vec<PivotRecord>,
) -> Solution {
    Solution {
        status,
        iterations,
        phase_one_iterations,
        pivot_trace: trace,
        ..extract_solution(tableau, transform)
    }
}
