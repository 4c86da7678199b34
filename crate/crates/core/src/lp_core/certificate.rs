//! Optimality certificate recomputed from the problem data.
//!
//! Independent of how the tableau was produced: primal feasibility is checked
//! against `A` and `b` directly, dual feasibility against the objective row,
//! and the basis against the unit-column invariant.

use std::fmt;

use super::problem::LpProblem;
use super::tableau::DenseTableau;

pub const FEASIBILITY_TOL: f64 = 1e-6;
pub const NONNEGATIVITY_TOL: f64 = 1e-9;
pub const REDUCED_COST_TOL: f64 = 1e-7;
pub const UNIT_COLUMN_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Row `i` of `A x <= b` exceeded by `excess`.
    RowInfeasible { row: usize, excess: f64 },
    /// Variable `column` is negative.
    NegativeVariable { column: usize, value: f64 },
    /// Objective-row entry below the reduced-cost tolerance.
    ReducedCost { column: usize, value: f64 },
    /// Basic column of tableau row `row` is not a unit vector.
    BasisColumn { row: usize, column: usize },
    /// `c.x` disagrees with the tableau objective cell.
    ObjectiveMismatch { tableau: f64, recomputed: f64 },
    /// Tableau and problem shapes do not line up.
    Shape(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowInfeasible { row, excess } => write!(f, "row {row} violated by {excess:e}"),
            Violation::NegativeVariable { column, value } => write!(f, "x[{column}] = {value:e} < 0"),
            Violation::ReducedCost { column, value } => {
                write!(f, "reduced cost of column {column} is {value:e}")
            }
            Violation::BasisColumn { row, column } => {
                write!(f, "basic column {column} of row {row} is not a unit vector")
            }
            Violation::ObjectiveMismatch { tableau, recomputed } => {
                write!(f, "objective cell {tableau} but c.x = {recomputed}")
            }
            Violation::Shape(msg) => write!(f, "shape: {msg}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Certificate {
    pub violations: Vec<Violation>,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_certificate(problem: &LpProblem, tableau: &DenseTableau) -> Certificate {
    let mut violations = Vec::new();
    let n = problem.num_cols();
    if tableau.num_structural() != n || tableau.num_slack() != problem.num_rows() {
        violations.push(Violation::Shape(format!(
            "tableau has {} structural / {} slack columns, problem is {}x{}",
            tableau.num_structural(),
            tableau.num_slack(),
            problem.num_rows(),
            n
        )));
        return Certificate { violations };
    }

    let x = tableau.basic_solution(n);
    for (column, &value) in x.iter().enumerate() {
        if value < -NONNEGATIVITY_TOL {
            violations.push(Violation::NegativeVariable { column, value });
        }
    }
    for row in 0..problem.num_rows() {
        let lhs: f64 = problem.row(row).iter().zip(&x).map(|(a, v)| a * v).sum();
        let excess = lhs - problem.rhs()[row];
        if excess > FEASIBILITY_TOL {
            violations.push(Violation::RowInfeasible { row, excess });
        }
    }

    for (column, &value) in tableau.objective_row().iter().enumerate() {
        if value < -REDUCED_COST_TOL {
            violations.push(Violation::ReducedCost { column, value });
        }
    }

    for row in tableau.unit_basis_violations(UNIT_COLUMN_TOL) {
        violations.push(Violation::BasisColumn {
            row,
            column: tableau.basis()[row - 1],
        });
    }

    let recomputed: f64 = problem.max_costs().iter().zip(&x).map(|(c, v)| c * v).sum();
    let cell = tableau.objective_value();
    if (recomputed - cell).abs() > FEASIBILITY_TOL * (1.0 + cell.abs()) {
        violations.push(Violation::ObjectiveMismatch {
            tableau: cell,
            recomputed,
        });
    }

    Certificate { violations }
}
