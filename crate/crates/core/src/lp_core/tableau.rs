//! The full simplex tableau and the sequential pivot loop.
//!
//! Layout (row-major, `(m + 1) x (n + m [+ a] + 1)`):
//!
//! ```text
//!        x_1 .. x_n | s_1 .. s_m | (artificials) | rhs
//! row 0: -c         | 0          |               | z
//! row i: A          | I          |               | b
//! ```
//!
//! The objective value lives in the rhs cell of row 0.

use super::options::{PivotRule, SimplexOptions};
use super::problem::LpProblem;
use super::solution::{PivotRecord, Solution, Status};
use super::standardize::Transform;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseTableau {
    rows: usize,
    cols: usize,
    cells: Vec<f64>,
    basis: Vec<usize>,
    rhs_col: usize,
    num_structural: usize,
    num_slack: usize,
    num_artificial: usize,
}

impl DenseTableau {
    /// Assembles a tableau from raw parts. `cells` is row-major `rows x cols`
    /// and the rhs column is the last one.
    pub fn from_parts(
        rows: usize,
        cols: usize,
        cells: Vec<f64>,
        basis: Vec<usize>,
        num_structural: usize,
        num_slack: usize,
    ) -> Self {
        assert_eq!(cells.len(), rows * cols, "cell count must equal rows * cols");
        assert_eq!(basis.len() + 1, rows, "one basic column per constraint row");
        assert!(num_structural + num_slack < cols);
        DenseTableau {
            rows,
            cols,
            cells,
            basis,
            rhs_col: cols - 1,
            num_structural,
            num_slack,
            num_artificial: cols - 1 - num_structural - num_slack,
        }
    }

    /// Rows including the objective row.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Columns including the rhs column.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rhs_col(&self) -> usize {
        self.rhs_col
    }

    pub fn num_constraints(&self) -> usize {
        self.rows - 1
    }

    pub fn num_structural(&self) -> usize {
        self.num_structural
    }

    pub fn num_slack(&self) -> usize {
        self.num_slack
    }

    pub fn num_artificial(&self) -> usize {
        self.num_artificial
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.cells[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub fn objective_row(&self) -> &[f64] {
        &self.cells[..self.rhs_col]
    }

    /// Internal (maximization) objective value.
    pub fn objective_value(&self) -> f64 {
        self.cells[self.rhs_col]
    }

    /// Right-hand side of constraint rows `1..=m`.
    pub fn rhs(&self) -> Vec<f64> {
        (1..self.rows).map(|i| self.get(i, self.rhs_col)).collect()
    }

    /// True when the slack basis is infeasible (some `b_i < 0`).
    pub fn needs_phase_one(&self) -> bool {
        (1..self.rows).any(|i| self.get(i, self.rhs_col) < 0.0)
    }

    /// Rows whose basic column is not the matching unit vector within `tol`.
    pub fn unit_basis_violations(&self, tol: f64) -> Vec<usize> {
        let mut bad = Vec::new();
        for (r, &col) in self.basis.iter().enumerate() {
            let row = r + 1;
            let ok = (0..self.rows).all(|i| {
                let expected = if i == row { 1.0 } else { 0.0 };
                (self.get(i, col) - expected).abs() <= tol
            });
            if !ok {
                bad.push(row);
            }
        }
        bad
    }

    /// Values of the first `count` columns at the current basic solution.
    pub fn basic_solution(&self, count: usize) -> Vec<f64> {
        let mut x = vec![0.0; count];
        for (r, &col) in self.basis.iter().enumerate() {
            if col < count {
                x[col] = self.get(r + 1, self.rhs_col);
            }
        }
        x
    }

    /// Gauss-Jordan pivot on `(r, k)`: row `r` is divided by the pivot and
    /// column `k` is eliminated from every other row, objective included.
    pub fn pivot(&mut self, r: usize, k: usize) {
        let w = self.cols;
        let pivot = self.cells[r * w + k];
        let (head, tail) = self.cells.split_at_mut(r * w);
        let (pivot_row, after) = tail.split_at_mut(w);
        for v in pivot_row.iter_mut() {
            *v /= pivot;
        }
        for row in head.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let factor = row[k];
            if factor == 0.0 {
                continue;
            }
            for (cell, &p) in row.iter_mut().zip(pivot_row.iter()) {
                *cell -= factor * p;
            }
        }
        self.basis[r - 1] = k;
    }
}

/// `[-c | 0 | 0]` over `[A | I | b]` with the slack columns basic.
pub fn build_tableau(problem: &LpProblem) -> DenseTableau {
    let m = problem.num_rows();
    let n = problem.num_cols();
    let cols = n + m + 1;
    let mut cells = vec![0.0; (m + 1) * cols];
    for (j, c) in problem.max_costs().into_iter().enumerate() {
        cells[j] = -c;
    }
    for i in 0..m {
        let row = &mut cells[(i + 1) * cols..(i + 2) * cols];
        row[..n].copy_from_slice(problem.row(i));
        row[n + i] = 1.0;
        row[cols - 1] = problem.rhs()[i];
    }
    DenseTableau::from_parts(m + 1, cols, cells, (n..n + m).collect(), n, m)
}

/// How the sequential loop stopped.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopOutcome {
    pub status: Status,
    pub iterations: usize,
    pub trace: Vec<PivotRecord>,
}

/// Runs textbook simplex iterations on `tableau` until optimality,
/// unboundedness, or the iteration cap.
///
/// Entering: most negative objective-row entry below `-optimality` (Dantzig)
/// or the first such entry (Bland), ties to the lowest column. Leaving:
/// minimum `rhs / a` over `a > pivot`, exact ties to the lowest row (Dantzig)
/// or to the lowest basic column index (Bland).
pub fn iterate(tableau: &mut DenseTableau, options: &SimplexOptions, record_trace: bool) -> LoopOutcome {
    let tol = options.tolerances;
    let cap = options.iteration_cap(tableau.num_constraints(), tableau.num_structural());
    let rhs_col = tableau.rhs_col;
    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        let mut entering: Option<(usize, f64)> = None;
        for (j, &v) in tableau.objective_row().iter().enumerate() {
            if v < -tol.optimality {
                match options.rule {
                    PivotRule::Bland => {
                        entering = Some((j, v));
                        break;
                    }
                    PivotRule::Dantzig => {
                        if entering.is_none_or(|(_, best)| v < best) {
                            entering = Some((j, v));
                        }
                    }
                }
            }
        }
        let Some((k, _)) = entering else {
            return LoopOutcome {
                status: Status::Optimal,
                iterations,
                trace,
            };
        };
        if iterations >= cap {
            return LoopOutcome {
                status: Status::IterationLimit,
                iterations,
                trace,
            };
        }

        let mut leaving: Option<(usize, f64)> = None;
        for i in 1..tableau.rows {
            let a = tableau.get(i, k);
            if a <= tol.pivot {
                continue;
            }
            let ratio = tableau.get(i, rhs_col) / a;
            let better = match leaving {
                None => true,
                Some((best_row, best)) => {
                    ratio < best
                        || (ratio == best
                            && options.rule == PivotRule::Bland
                            && tableau.basis[i - 1] < tableau.basis[best_row - 1])
                }
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        let Some((r, _)) = leaving else {
            return LoopOutcome {
                status: Status::Unbounded,
                iterations,
                trace,
            };
        };

        let pivot_value = tableau.get(r, k);
        tableau.pivot(r, k);
        iterations += 1;
        if record_trace {
            trace.push(PivotRecord {
                iteration: iterations,
                entering_col: k,
                leaving_row: r,
                pivot_value,
                owner_lane: 0,
                objective_after: tableau.objective_value(),
            });
        }
    }
}

/// Why phase one did not produce a feasible basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseOneFailure {
    Infeasible { iterations: usize },
    IterationLimit { iterations: usize },
}

/// Finds a feasible basis when some `b_i < 0`.
///
/// Negative rows are negated and given an artificial column; the sum of
/// artificials is minimized with [`iterate`]. Artificials left basic at zero
/// are pivoted out where a non-artificial entry exists; rows where none exists
/// are redundant and dropped. The returned tableau has no artificial columns
/// and its objective row is re-priced for the original costs.
pub fn phase_one(
    tableau: DenseTableau,
    options: &SimplexOptions,
) -> Result<(DenseTableau, usize), PhaseOneFailure> {
    if !tableau.needs_phase_one() {
        return Ok((tableau, 0));
    }
    let tol = options.tolerances;
    let m = tableau.num_constraints();
    let base_cols = tableau.rhs_col; // structural + slack
    let negative: Vec<usize> = (1..tableau.rows)
        .filter(|&i| tableau.get(i, tableau.rhs_col) < 0.0)
        .collect();
    let num_art = negative.len();
    let cols = base_cols + num_art + 1;
    let rhs_col = cols - 1;

    let original_objective: Vec<f64> = tableau.row(0).to_vec();
    let mut cells = vec![0.0; (m + 1) * cols];
    for i in 1..=m {
        let src = tableau.row(i);
        let dst = &mut cells[i * cols..(i + 1) * cols];
        dst[..base_cols].copy_from_slice(&src[..base_cols]);
        dst[rhs_col] = src[tableau.rhs_col];
    }
    let mut basis = tableau.basis.clone();
    for (a, &i) in negative.iter().enumerate() {
        let row = &mut cells[i * cols..(i + 1) * cols];
        for v in row.iter_mut() {
            *v = -*v;
        }
        row[base_cols + a] = 1.0;
        basis[i - 1] = base_cols + a;
    }
    // maximize -sum(artificials), priced out against the artificial rows
    for a in 0..num_art {
        cells[base_cols + a] = 1.0;
    }
    for &i in &negative {
        for j in 0..cols {
            cells[j] -= cells[i * cols + j];
        }
    }
    let mut aux = DenseTableau {
        rows: m + 1,
        cols,
        cells,
        basis,
        rhs_col,
        num_structural: tableau.num_structural,
        num_slack: tableau.num_slack,
        num_artificial: num_art,
    };

    let outcome = iterate(&mut aux, options, false);
    let iterations = outcome.iterations;
    match outcome.status {
        Status::Optimal => {}
        Status::IterationLimit => return Err(PhaseOneFailure::IterationLimit { iterations }),
        // the auxiliary objective is bounded by zero
        Status::Unbounded | Status::Infeasible => return Err(PhaseOneFailure::Infeasible { iterations }),
    }
    if -aux.objective_value() > tol.phase_one {
        return Err(PhaseOneFailure::Infeasible { iterations });
    }

    let mut redundant = Vec::new();
    for r in 1..=m {
        if aux.basis[r - 1] < base_cols {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..base_cols {
            let mag = aux.get(r, j).abs();
            if mag > tol.pivot && best.is_none_or(|(_, b)| mag > b) {
                best = Some((j, mag));
            }
        }
        match best {
            Some((j, _)) => aux.pivot(r, j),
            None => redundant.push(r),
        }
    }

    let kept: Vec<usize> = (1..=m).filter(|r| !redundant.contains(r)).collect();
    let out_cols = base_cols + 1;
    let mut out = vec![0.0; (kept.len() + 1) * out_cols];
    out[..base_cols].copy_from_slice(&original_objective[..base_cols]);
    out[base_cols] = original_objective[tableau.rhs_col];
    let mut out_basis = Vec::with_capacity(kept.len());
    for (new_r, &r) in kept.iter().enumerate() {
        let dst = &mut out[(new_r + 1) * out_cols..(new_r + 2) * out_cols];
        dst[..base_cols].copy_from_slice(&aux.row(r)[..base_cols]);
        dst[base_cols] = aux.get(r, rhs_col);
        out_basis.push(aux.basis[r - 1]);
    }
    // re-price the original objective against the new basis
    for (new_r, &col) in out_basis.iter().enumerate() {
        let coef = out[col];
        if coef == 0.0 {
            continue;
        }
        let row_start = (new_r + 1) * out_cols;
        for j in 0..out_cols {
            out[j] -= coef * out[row_start + j];
        }
    }
    let result = DenseTableau::from_parts(
        kept.len() + 1,
        out_cols,
        out,
        out_basis,
        tableau.num_structural,
        tableau.num_slack,
    );
    Ok((result, iterations))
}

/// Reads the optimal basic solution and maps it back through `transform`.
///
/// Iteration counts and the pivot trace are left for the caller to fill in.
pub fn extract_solution(tableau: &DenseTableau, transform: &Transform) -> Solution {
    let std_x = tableau.basic_solution(transform.num_std_cols);
    Solution {
        status: Status::Optimal,
        objective: transform.objective(tableau.objective_value()),
        primal: transform.primal(&std_x),
        iterations: 0,
        phase_one_iterations: 0,
        pivot_trace: Vec::new(),
    }
}
