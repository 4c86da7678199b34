use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    Unbounded,
    Infeasible,
    IterationLimit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Unbounded => "unbounded",
            Status::Infeasible => "infeasible",
            Status::IterationLimit => "iteration limit",
        })
    }
}

/// One accepted pivot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PivotRecord {
    pub iteration: usize,
    /// Entering tableau column `k`.
    pub entering_col: usize,
    /// Leaving tableau row `r`, in `1..=m` (row 0 is the objective row).
    pub leaving_row: usize,
    pub pivot_value: f64,
    /// Lane that owned column `k` and ran the ratio test.
    pub owner_lane: usize,
    pub objective_after: f64,
}

impl PivotRecord {
    /// The lane-independent part of the record, compared bit for bit.
    pub fn key(&self) -> (usize, usize, u64, u64) {
        (
            self.entering_col,
            self.leaving_row,
            self.pivot_value.to_bits(),
            self.objective_after.to_bits(),
        )
    }
}

/// Two traces agree when every pivot has the same `(k, r)`, pivot value and
/// resulting objective, bit for bit. Owner lanes are allowed to differ.
pub fn traces_identical(a: &[PivotRecord], b: &[PivotRecord]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.key() == y.key())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub status: Status,
    /// Objective in the sense of the problem that was solved.
    pub objective: f64,
    /// Original variables only. Empty when infeasible.
    pub primal: Vec<f64>,
    /// Phase-two pivots.
    pub iterations: usize,
    pub phase_one_iterations: usize,
    pub pivot_trace: Vec<PivotRecord>,
}

impl Solution {
    pub fn infeasible(phase_one_iterations: usize) -> Self {
        Solution {
            status: Status::Infeasible,
            objective: f64::NAN,
            primal: Vec::new(),
            iterations: 0,
            phase_one_iterations,
            pivot_trace: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}
