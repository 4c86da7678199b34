use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("problem has no rows or no columns")]
    EmptyProblem,
    #[error("variable {column} has lower bound {lower} above upper bound {upper}")]
    InconsistentBounds { column: usize, lower: f64, upper: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Sense {
    #[default]
    Maximize,
    Minimize,
}

impl Sense {
    /// `+1` for maximization, `-1` for minimization.
    pub fn sign(self) -> f64 {
        match self {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        }
    }
}

/// Row relation of a general (non-standard) constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// Standard-form LP: optimize `c.x` subject to `A x <= b`, `x >= 0`.
///
/// The matrix is dense and row-major. `standardize` always produces a
/// maximization; a directly constructed problem may carry either sense.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub name: String,
    num_rows: usize,
    num_cols: usize,
    matrix: Vec<f64>,
    rhs: Vec<f64>,
    costs: Vec<f64>,
    pub sense: Sense,
}

impl LpProblem {
    pub fn new(
        name: impl Into<String>,
        num_rows: usize,
        num_cols: usize,
        matrix: Vec<f64>,
        rhs: Vec<f64>,
        costs: Vec<f64>,
        sense: Sense,
    ) -> Result<Self, LpError> {
        if num_rows == 0 || num_cols == 0 {
            return Err(LpError::EmptyProblem);
        }
        if matrix.len() != num_rows * num_cols {
            return Err(LpError::DimensionMismatch(format!(
                "matrix has {} entries, expected {num_rows}x{num_cols}",
                matrix.len()
            )));
        }
        if rhs.len() != num_rows {
            return Err(LpError::DimensionMismatch(format!(
                "rhs has length {}, expected {num_rows}",
                rhs.len()
            )));
        }
        if costs.len() != num_cols {
            return Err(LpError::DimensionMismatch(format!(
                "costs have length {}, expected {num_cols}",
                costs.len()
            )));
        }
        if !matrix.iter().all(|v| v.is_finite()) {
            return Err(LpError::NonFinite("matrix"));
        }
        if !rhs.iter().all(|v| v.is_finite()) {
            return Err(LpError::NonFinite("rhs"));
        }
        if !costs.iter().all(|v| v.is_finite()) {
            return Err(LpError::NonFinite("costs"));
        }
        Ok(LpProblem {
            name: name.into(),
            num_rows,
            num_cols,
            matrix,
            rhs,
            costs,
            sense,
        })
    }

    /// Builds a problem from nested rows, mostly for tests and examples.
    pub fn from_rows(
        name: impl Into<String>,
        rows: &[Vec<f64>],
        rhs: Vec<f64>,
        costs: Vec<f64>,
        sense: Sense,
    ) -> Result<Self, LpError> {
        let num_cols = costs.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != num_cols) {
            return Err(LpError::DimensionMismatch(format!(
                "row has {} entries, expected {num_cols}",
                bad.len()
            )));
        }
        let matrix = rows.iter().flatten().copied().collect();
        LpProblem::new(name, rows.len(), num_cols, matrix, rhs, costs, sense)
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.matrix[i * self.num_cols..(i + 1) * self.num_cols]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.num_cols + j]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    /// Costs of the equivalent maximization (`c` or `-c`).
    pub fn max_costs(&self) -> Vec<f64> {
        let sign = self.sense.sign();
        self.costs.iter().map(|&c| sign * c).collect()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.costs.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of `A x <= b` and `x >= 0`; zero when feasible.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().fold(0.0_f64, |acc, &v| acc.max(-v));
        for i in 0..self.num_rows {
            let lhs: f64 = self.row(i).iter().zip(x).map(|(a, v)| a * v).sum();
            worst = worst.max(lhs - self.rhs[i]);
        }
        worst
    }
}

/// General LP as read from a model file: mixed relations, variable bounds and
/// an objective constant. Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RawLp {
    pub name: String,
    pub num_rows: usize,
    pub num_cols: usize,
    pub matrix: Vec<f64>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<f64>,
    pub costs: Vec<f64>,
    /// Per-variable lower bound; may be `-inf`.
    pub lower: Vec<f64>,
    /// Per-variable upper bound; may be `+inf`.
    pub upper: Vec<f64>,
    pub sense: Sense,
    pub objective_constant: f64,
    pub column_names: Vec<String>,
    pub row_names: Vec<String>,
}

impl RawLp {
    /// A raw LP with default bounds `[0, inf)` and generated names.
    pub fn new(
        name: impl Into<String>,
        rows: &[Vec<f64>],
        relations: Vec<Relation>,
        rhs: Vec<f64>,
        costs: Vec<f64>,
        sense: Sense,
    ) -> Self {
        let num_cols = costs.len();
        let num_rows = rows.len();
        RawLp {
            name: name.into(),
            num_rows,
            num_cols,
            matrix: rows.iter().flatten().copied().collect(),
            relations,
            rhs,
            lower: vec![0.0; num_cols],
            upper: vec![f64::INFINITY; num_cols],
            costs,
            sense,
            objective_constant: 0.0,
            column_names: (0..num_cols).map(|j| format!("X{}", j + 1)).collect(),
            row_names: (0..num_rows).map(|i| format!("R{}", i + 1)).collect(),
        }
    }

    pub fn with_bounds(mut self, column: usize, lower: f64, upper: f64) -> Self {
        self.lower[column] = lower;
        self.upper[column] = upper;
        self
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.matrix[i * self.num_cols..(i + 1) * self.num_cols]
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.costs.iter().zip(x).map(|(c, v)| c * v).sum::<f64>() + self.objective_constant
    }

    /// Largest violation of rows and bounds at `x`; zero when feasible.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0_f64;
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        for i in 0..self.num_rows {
            let lhs: f64 = self.row(i).iter().zip(x).map(|(a, v)| a * v).sum();
            let gap = match self.relations[i] {
                Relation::Le => lhs - self.rhs[i],
                Relation::Ge => self.rhs[i] - lhs,
                Relation::Eq => (lhs - self.rhs[i]).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }
}
