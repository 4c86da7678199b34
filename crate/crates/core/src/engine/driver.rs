//! Serial and threaded phase loops over lane blocks.

use std::sync::{Barrier, Mutex, RwLock};
use std::thread;
use std::time::{Duration, Instant};

use rayon::{ThreadPool, ThreadPoolBuilder};

use super::kernels::{eliminate_column, merge_candidates, ratio_test, LocalCandidate};
use super::lane::LaneBlock;
use super::{EngineConfig, EngineError};
use crate::lp_core::{DenseTableau, PivotRecord, PivotRule, Status};
use crate::partition::PartitionPlan;

pub(super) struct Outcome {
    pub tableau: DenseTableau,
    pub status: Status,
    pub iterations: usize,
    pub trace: Vec<PivotRecord>,
    pub per_iteration: Vec<Duration>,
    pub elapsed: Duration,
}

/// Data written by the owner lane in P4 and read by every lane in P5.
struct Staging {
    /// Pivots staged so far.
    iteration: usize,
    r: usize,
    pivot: f64,
    column: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    trace: Vec<PivotRecord>,
    stop: Option<Result<Status, EngineError>>,
}

impl Staging {
    fn new(tableau: &DenseTableau) -> Self {
        Staging {
            iteration: 0,
            r: 0,
            pivot: 0.0,
            column: vec![0.0; tableau.rows()],
            rhs: (0..tableau.rows()).map(|i| tableau.get(i, tableau.rhs_col())).collect(),
            basis: tableau.basis().to_vec(),
            trace: Vec::new(),
            stop: None,
        }
    }
}

struct Setup<'a> {
    plan: &'a PartitionPlan,
    config: &'a EngineConfig,
    cap: usize,
}

fn split_blocks(tableau: &DenseTableau, plan: &PartitionPlan) -> Vec<LaneBlock> {
    plan.ranges
        .iter()
        .enumerate()
        .map(|(lane, range)| LaneBlock::from_tableau(lane, range.clone(), tableau))
        .collect()
}

fn setup<'a>(tableau: &DenseTableau, plan: &'a PartitionPlan, config: &'a EngineConfig) -> Setup<'a> {
    Setup {
        plan,
        config,
        cap: config
            .options
            .iteration_cap(tableau.num_constraints(), tableau.num_structural()),
    }
}

/// P3 and P4 on the owner lane. Sets `stop` when the column is unbounded or an
/// invariant check fails.
fn stage_pivot(staging: &mut Staging, owner: &LaneBlock, k: usize, setup: &Setup<'_>) {
    let options = &setup.config.options;
    let tol = options.tolerances;
    let col = owner.column(k);
    let tie_basis = (options.rule == PivotRule::Bland).then_some(&staging.basis[..]);
    let Some(i) = ratio_test(&col[1..], &staging.rhs[1..], tol.pivot, tie_basis) else {
        staging.stop = Some(Ok(Status::Unbounded));
        return;
    };
    let r = i + 1;
    let pivot = col[r];
    staging.column.copy_from_slice(col);
    let before = staging.rhs[0];
    eliminate_column(&mut staging.rhs, &staging.column, r, pivot);
    staging.basis[r - 1] = k;
    staging.r = r;
    staging.pivot = pivot;
    staging.iteration += 1;
    let objective = staging.rhs[0];
    if setup.config.trace {
        staging.trace.push(PivotRecord {
            iteration: staging.iteration,
            entering_col: k,
            leaving_row: r,
            pivot_value: pivot,
            owner_lane: owner.lane_id,
            objective_after: objective,
        });
    }
    if setup.config.check_invariants {
        let worst = staging.rhs[1..].iter().copied().fold(0.0, f64::min);
        let what = if worst < -tol.feasibility {
            Some(format!("basic variable fell to {worst:e}"))
        } else if objective < before - tol.feasibility * (1.0 + before.abs()) {
            Some(format!("objective decreased from {before} to {objective}"))
        } else {
            None
        };
        if let Some(what) = what {
            staging.stop = Some(Err(EngineError::InvariantViolated {
                iteration: staging.iteration,
                what,
            }));
        }
    }
}

fn assemble(template: &DenseTableau, blocks: &[LaneBlock], staging: &Staging) -> DenseTableau {
    let (rows, cols) = (template.rows(), template.cols());
    let mut cells = vec![0.0; rows * cols];
    for block in blocks {
        block.scatter_into(&mut cells, cols);
    }
    let rhs_col = template.rhs_col();
    for (i, &v) in staging.rhs.iter().enumerate() {
        cells[i * cols + rhs_col] = v;
    }
    DenseTableau::from_parts(
        rows,
        cols,
        cells,
        staging.basis.clone(),
        template.num_structural(),
        template.num_slack(),
    )
}

pub(super) fn run_serial(
    tableau: DenseTableau,
    plan: &PartitionPlan,
    config: &EngineConfig,
) -> Result<Outcome, EngineError> {
    let started = Instant::now();
    let setup = setup(&tableau, plan, config);
    let rule = config.options.rule;
    let tol = config.options.tolerances;
    let mut blocks = split_blocks(&tableau, plan);
    let mut staging = Staging::new(&tableau);
    let mut per_iteration = Vec::new();
    let mut iterations = 0;
    let mut candidates = Vec::with_capacity(blocks.len());
    let status = loop {
        let t = Instant::now();
        candidates.clear();
        candidates.extend(blocks.iter().map(|b| b.select_entering(rule, tol.optimality, None)));
        let Some(k) = merge_candidates(&candidates, rule) else {
            break Status::Optimal;
        };
        if iterations >= setup.cap {
            break Status::IterationLimit;
        }
        stage_pivot(&mut staging, &blocks[plan.owner_of(k)], k, &setup);
        if let Some(stop) = staging.stop.take() {
            break stop?;
        }
        for block in &mut blocks {
            block.pivot_update(&staging.column, staging.r, tol.pivot, None)?;
        }
        iterations += 1;
        per_iteration.push(t.elapsed());
    };
    Ok(Outcome {
        tableau: assemble(&tableau, &blocks, &staging),
        status,
        iterations,
        trace: staging.trace,
        per_iteration,
        elapsed: started.elapsed(),
    })
}

struct Shared {
    barrier: Barrier,
    candidates: Mutex<Vec<LocalCandidate>>,
    staging: RwLock<Staging>,
    failure: Mutex<Option<EngineError>>,
}

pub(super) fn run_threaded(
    tableau: DenseTableau,
    plan: &PartitionPlan,
    config: &EngineConfig,
) -> Result<Outcome, EngineError> {
    let started = Instant::now();
    let setup = setup(&tableau, plan, config);
    let mut blocks = split_blocks(&tableau, plan);
    let lanes = blocks.len();
    let pool = if config.cpu_workers > 1 && !blocks[0].range().is_empty() {
        Some(
            ThreadPoolBuilder::new()
                .num_threads(config.cpu_workers)
                .build()
                .map_err(|e| EngineError::ThreadPool(e.to_string()))?,
        )
    } else {
        None
    };
    let shared = Shared {
        barrier: Barrier::new(lanes),
        candidates: Mutex::new((0..lanes).map(LocalCandidate::none).collect()),
        staging: RwLock::new(Staging::new(&tableau)),
        failure: Mutex::new(None),
    };
    let mut per_iteration = Vec::new();

    let (cpu, devices) = blocks.split_at_mut(1);
    let result = thread::scope(|scope| {
        let handles: Vec<_> = devices
            .iter_mut()
            .map(|block| {
                let (setup, shared) = (&setup, &shared);
                scope.spawn(move || lane_loop(block, setup, shared, None, None))
            })
            .collect();
        let cpu_result = lane_loop(&mut cpu[0], &setup, &shared, pool.as_ref(), Some(&mut per_iteration));
        for handle in handles {
            if let Err(panic) = handle.join() {
                std::panic::resume_unwind(panic);
            }
        }
        cpu_result
    });
    let (status, iterations) = result?;
    let staging = shared.staging.into_inner().expect("staging lock poisoned");
    Ok(Outcome {
        tableau: assemble(&tableau, &blocks, &staging),
        status,
        iterations,
        trace: staging.trace,
        per_iteration,
        elapsed: started.elapsed(),
    })
}

/// One lane's view of the phase loop. Every lane reaches the same decision at
/// each branch, so all lanes leave the loop on the same iteration.
fn lane_loop(
    block: &mut LaneBlock,
    setup: &Setup<'_>,
    shared: &Shared,
    pool: Option<&ThreadPool>,
    mut timings: Option<&mut Vec<Duration>>,
) -> Result<(Status, usize), EngineError> {
    let _guard = AbortOnPanic;
    let rule = setup.config.options.rule;
    let tol = setup.config.options.tolerances;
    let lane = block.lane_id;
    let mut iterations = 0;
    loop {
        let t = Instant::now();
        // P1
        let candidate = block.select_entering(rule, tol.optimality, pool);
        shared.candidates.lock().unwrap()[lane] = candidate;
        shared.barrier.wait();

        // P2, identical on every lane
        let merged = merge_candidates(&shared.candidates.lock().unwrap(), rule);
        let Some(k) = merged else {
            return Ok((Status::Optimal, iterations));
        };
        if iterations >= setup.cap {
            return Ok((Status::IterationLimit, iterations));
        }

        // P3 + P4
        if setup.plan.owner_of(k) == lane {
            let mut staging = shared.staging.write().unwrap();
            debug_assert_eq!(staging.iteration, iterations, "staging written twice in one iteration");
            stage_pivot(&mut staging, block, k, setup);
        }
        shared.barrier.wait();

        // P5
        {
            let staging = shared.staging.read().unwrap();
            if let Some(stop) = &staging.stop {
                return stop.clone().map(|status| (status, iterations));
            }
            debug_assert_eq!(staging.iteration, iterations + 1, "staging read before it was written");
            if let Err(e) = block.pivot_update(&staging.column, staging.r, tol.pivot, pool) {
                *shared.failure.lock().unwrap() = Some(e);
            }
        }
        shared.barrier.wait();

        iterations += 1;
        if let Some(e) = shared.failure.lock().unwrap().clone() {
            return Err(e);
        }
        if let Some(timings) = timings.as_deref_mut() {
            timings.push(t.elapsed());
        }
    }
}

/// A lane that unwinds would leave the others blocked on the barrier forever.
struct AbortOnPanic;

impl Drop for AbortOnPanic {
    fn drop(&mut self) {
        if thread::panicking() {
            eprintln!("lane panicked inside the phase loop; aborting");
            std::process::abort();
        }
    }
}
