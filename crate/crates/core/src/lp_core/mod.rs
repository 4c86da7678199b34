//! Standard-form LP representation, the full tableau, phase one, solution
//! extraction and the optimality certificate.

mod certificate;
mod options;
mod problem;
mod solution;
mod standardize;
mod tableau;

pub use certificate::{
    check_certificate, Certificate, Violation, FEASIBILITY_TOL, NONNEGATIVITY_TOL, REDUCED_COST_TOL,
    UNIT_COLUMN_TOL,
};
pub use options::{PivotRule, SimplexOptions, Tolerances};
pub use problem::{LpError, LpProblem, RawLp, Relation, Sense};
pub use solution::{traces_identical, PivotRecord, Solution, Status};
pub use standardize::{standardize, ColumnMap, Standardized, Transform};
pub use tableau::{build_tableau, extract_solution, iterate, phase_one, DenseTableau, LoopOutcome, PhaseOneFailure};
