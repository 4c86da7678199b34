//! Conversion of a general LP into `max c.x, A x <= b, x >= 0`.
//!
//! Every rewrite is recorded in a [`Transform`] so that a standard-form
//! solution maps back onto the original variables and objective.

use super::problem::{LpError, LpProblem, RawLp, Relation, Sense};
use super::solution::Solution;

/// How one original variable is expressed in standard-form columns:
/// `x = offset + sum(coef * x_std[col])`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnMap {
    pub offset: f64,
    pub terms: Vec<(usize, f64)>,
}

/// Record of the standardization, used to undo it on solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct Transform {
    /// `+1` when the original problem maximizes, `-1` when it minimizes.
    pub objective_sign: f64,
    /// Constant added to the original objective (file constant plus bound shifts).
    pub objective_constant: f64,
    pub columns: Vec<ColumnMap>,
    pub num_std_cols: usize,
}

impl Transform {
    /// The transform of a problem already in standard form.
    pub fn identity(problem: &LpProblem) -> Self {
        Transform {
            objective_sign: problem.sense.sign(),
            objective_constant: 0.0,
            columns: (0..problem.num_cols())
                .map(|j| ColumnMap {
                    offset: 0.0,
                    terms: vec![(j, 1.0)],
                })
                .collect(),
            num_std_cols: problem.num_cols(),
        }
    }

    /// Original variable values from standard-form values.
    pub fn primal(&self, std_x: &[f64]) -> Vec<f64> {
        self.columns
            .iter()
            .map(|map| map.offset + map.terms.iter().map(|&(c, coef)| coef * std_x[c]).sum::<f64>())
            .collect()
    }

    /// Original objective from the internal maximization value.
    pub fn objective(&self, internal: f64) -> f64 {
        self.objective_sign * internal + self.objective_constant
    }

    /// Image of an original point in standard-form variables.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut std_x = vec![0.0; self.num_std_cols];
        for (map, &value) in self.columns.iter().zip(x) {
            match map.terms.as_slice() {
                [(c, _)] => std_x[*c] = value - map.offset,
                [(plus, _), (minus, _)] => {
                    std_x[*plus] = value.max(0.0);
                    std_x[*minus] = (-value).max(0.0);
                }
                _ => unreachable!("column maps have one or two terms"),
            }
        }
        std_x
    }

    /// Maps a standard-form solution (maximization value) back to the original problem.
    pub fn recover(&self, solution: &Solution) -> Solution {
        let primal = if solution.primal.is_empty() {
            Vec::new()
        } else {
            self.primal(&solution.primal)
        };
        Solution {
            objective: self.objective(solution.objective),
            primal,
            ..solution.clone()
        }
    }
}

/// A standard-form problem paired with the transform that produced it.
#[derive(Clone, Debug)]
pub struct Standardized {
    pub problem: LpProblem,
    pub transform: Transform,
}

pub fn standardize(raw: &RawLp) -> Result<Standardized, LpError> {
    if raw.num_rows == 0 || raw.num_cols == 0 {
        return Err(LpError::EmptyProblem);
    }
    let n = raw.num_cols;
    if raw.matrix.len() != raw.num_rows * n
        || raw.relations.len() != raw.num_rows
        || raw.rhs.len() != raw.num_rows
        || raw.costs.len() != n
        || raw.lower.len() != n
        || raw.upper.len() != n
    {
        return Err(LpError::DimensionMismatch("raw LP vectors disagree with its dimensions".into()));
    }

    let mut columns = Vec::with_capacity(n);
    // (std column terms, bound) rows coming from finite upper bounds
    let mut bound_rows: Vec<(Vec<(usize, f64)>, f64)> = Vec::new();
    let mut next = 0usize;
    for j in 0..n {
        let (lower, upper) = (raw.lower[j], raw.upper[j]);
        let valid = !lower.is_nan()
            && !upper.is_nan()
            && lower != f64::INFINITY
            && upper != f64::NEG_INFINITY
            && lower <= upper;
        if !valid {
            return Err(LpError::InconsistentBounds { column: j, lower, upper });
        }
        let map = if lower.is_finite() {
            let map = ColumnMap {
                offset: lower,
                terms: vec![(next, 1.0)],
            };
            next += 1;
            if upper.is_finite() {
                bound_rows.push((map.terms.clone(), upper - lower));
            }
            map
        } else {
            let map = ColumnMap {
                offset: 0.0,
                terms: vec![(next, 1.0), (next + 1, -1.0)],
            };
            next += 2;
            if upper.is_finite() {
                bound_rows.push((map.terms.clone(), upper));
            }
            map
        };
        columns.push(map);
    }
    let num_std_cols = next;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for i in 0..raw.num_rows {
        let mut row = vec![0.0; num_std_cols];
        let mut b = raw.rhs[i];
        for (j, &a) in raw.row(i).iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let map = &columns[j];
            for &(c, coef) in &map.terms {
                row[c] += a * coef;
            }
            b -= a * map.offset;
        }
        match raw.relations[i] {
            Relation::Le => {
                rows.push(row);
                rhs.push(b);
            }
            Relation::Ge => {
                rows.push(row.iter().map(|v| -v).collect());
                rhs.push(-b);
            }
            Relation::Eq => {
                let negated = row.iter().map(|v| -v).collect();
                rows.push(row);
                rhs.push(b);
                rows.push(negated);
                rhs.push(-b);
            }
        }
    }
    for (terms, bound) in bound_rows {
        let mut row = vec![0.0; num_std_cols];
        for (c, coef) in terms {
            row[c] = coef;
        }
        rows.push(row);
        rhs.push(bound);
    }

    let sign = raw.sense.sign();
    let mut costs = vec![0.0; num_std_cols];
    let mut constant = raw.objective_constant;
    for (j, &c) in raw.costs.iter().enumerate() {
        let map = &columns[j];
        for &(col, coef) in &map.terms {
            costs[col] += sign * c * coef;
        }
        constant += c * map.offset;
    }

    let problem = LpProblem::new(
        raw.name.clone(),
        rows.len(),
        num_std_cols,
        rows.into_iter().flatten().collect(),
        rhs,
        costs,
        Sense::Maximize,
    )?;
    Ok(Standardized {
        problem,
        transform: Transform {
            objective_sign: sign,
            objective_constant: constant,
            columns,
            num_std_cols,
        },
    })
}
