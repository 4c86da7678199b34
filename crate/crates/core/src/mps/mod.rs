//! Free-format MPS reading and writing.
//!
//! Fields are split on whitespace, so both fixed and free layouts are
//! accepted as long as names contain no spaces. The model is assembled into a
//! dense [`RawLp`](crate::lp_core::RawLp).

mod assemble;
mod parse;
mod write;

use std::io::Read;
use std::path::Path;

use thiserror::Error;

pub use assemble::to_raw_lp;
pub use parse::parse_mps;
pub use write::write_mps;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MpsError {
    #[error("line {line}: unknown section `{name}`")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: section {name} is out of order")]
    SectionOrder { line: usize, name: String },
    #[error("line {line}: undeclared {kind} `{name}`")]
    UndeclaredRowOrColumn { line: usize, kind: &'static str, name: String },
    #[error("line {line}: `{token}` is not a number")]
    MalformedNumeric { line: usize, token: String },
    #[error("line {line}: unknown bound type `{kind}`")]
    UnknownBoundType { line: usize, kind: String },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("no objective (N) row declared")]
    NoObjective,
    #[error("column `{column}` has lower bound {lower} above upper bound {upper}")]
    ConflictingBounds { column: String, lower: f64, upper: f64 },
    #[error("{0}")]
    Io(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Objective,
    /// Extra `N` rows beyond the first; carried but ignored.
    Free,
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Lo,
    Up,
    Fx,
    Fr,
    Mi,
    Pl,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpsRow {
    pub name: String,
    pub kind: RowKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpsBound {
    pub kind: BoundKind,
    pub column: usize,
    /// Zero for FR, MI and PL.
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MpsModel {
    pub name: String,
    pub objective_row: usize,
    pub maximize: bool,
    pub rows: Vec<MpsRow>,
    pub columns: Vec<String>,
    /// `(column, row, value)` with duplicates already summed.
    pub coefficients: Vec<(usize, usize, f64)>,
    pub rhs: Vec<(usize, f64)>,
    pub ranges: Vec<(usize, f64)>,
    pub bounds: Vec<MpsBound>,
    pub warnings: Vec<String>,
}

impl MpsModel {
    pub fn objective_row_name(&self) -> &str {
        &self.rows[self.objective_row].name
    }

    /// Rows other than `N` rows.
    pub fn num_constraint_rows(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| !matches!(r.kind, RowKind::Objective | RowKind::Free))
            .count()
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }
}

/// Reads and parses an MPS file, `-` meaning standard input.
pub fn read_mps(path: &Path) -> Result<MpsModel, MpsError> {
    let text = if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| MpsError::Io(format!("stdin: {e}")))?;
        text
    } else {
        std::fs::read_to_string(path).map_err(|e| MpsError::Io(format!("{}: {e}", path.display())))?
    };
    parse_mps(&text)
}
