//! Column blocks owned by a single lane.

use std::ops::Range;

use rayon::prelude::*;
use rayon::ThreadPool;

use super::kernels::{eliminate_column, select_entering_local, LocalCandidate};
use super::EngineError;
use crate::lp_core::{DenseTableau, PivotRule};

/// The tableau columns of one lane, column-major. Each column holds all
/// `rows` entries with the objective row at index 0. The rhs column is not
/// part of any block.
#[derive(Clone, Debug)]
pub struct LaneBlock {
    pub lane_id: usize,
    range: Range<usize>,
    rows: usize,
    data: Vec<f64>,
}

impl LaneBlock {
    pub fn from_tableau(lane_id: usize, range: Range<usize>, tableau: &DenseTableau) -> Self {
        assert!(range.end <= tableau.rhs_col());
        let rows = tableau.rows();
        let mut data = Vec::with_capacity(range.len() * rows);
        for j in range.clone() {
            data.extend((0..rows).map(|i| tableau.get(i, j)));
        }
        LaneBlock {
            lane_id,
            range,
            rows,
            data,
        }
    }

    pub fn range(&self) -> Range<usize> {
        self.range.clone()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn owns(&self, col: usize) -> bool {
        self.range.contains(&col)
    }

    /// Global column `col`, which must be owned by this lane.
    pub fn column(&self, col: usize) -> &[f64] {
        debug_assert!(self.owns(col), "lane {} does not own column {col}", self.lane_id);
        let local = col - self.range.start;
        &self.data[local * self.rows..(local + 1) * self.rows]
    }

    /// P1: best entering candidate in this lane's range.
    pub fn select_entering(&self, rule: PivotRule, optimality_tol: f64, pool: Option<&ThreadPool>) -> LocalCandidate {
        let start = self.range.start;
        let rows = self.rows;
        match pool {
            Some(pool) if !self.data.is_empty() => pool.install(|| {
                let values = self.data.par_chunks(rows).map(|c| c[0]).enumerate();
                let qualifies = |v: f64| v < -optimality_tol;
                let found = match rule {
                    PivotRule::Bland => values.find_first(|&(_, v)| qualifies(v)),
                    // (value, column) is a total order here, so the reduction is exact
                    PivotRule::Dantzig => values
                        .filter(|&(_, v)| qualifies(v))
                        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0))),
                };
                match found {
                    Some((j, value)) => LocalCandidate {
                        lane_id: self.lane_id,
                        col: Some(start + j),
                        value,
                    },
                    None => LocalCandidate::none(self.lane_id),
                }
            }),
            _ => select_entering_local(
                self.lane_id,
                self.data.chunks_exact(rows).enumerate().map(|(j, c)| (start + j, c[0])),
                rule,
                optimality_tol,
            ),
        }
    }

    /// P5: applies the pivot on row `r` to every owned column.
    pub fn pivot_update(
        &mut self,
        pivot_col: &[f64],
        r: usize,
        pivot_tol: f64,
        pool: Option<&ThreadPool>,
    ) -> Result<(), EngineError> {
        assert_eq!(pivot_col.len(), self.rows);
        let pivot = pivot_col[r];
        if pivot.abs() <= pivot_tol || !pivot.is_finite() {
            return Err(EngineError::NumericalPivot { row: r, value: pivot });
        }
        let rows = self.rows;
        match pool {
            Some(pool) => pool.install(|| {
                self.data
                    .par_chunks_mut(rows)
                    .for_each(|col| eliminate_column(col, pivot_col, r, pivot))
            }),
            None => self
                .data
                .chunks_exact_mut(rows)
                .for_each(|col| eliminate_column(col, pivot_col, r, pivot)),
        }
        Ok(())
    }

    /// Writes the block back into row-major cells of width `width`.
    pub fn scatter_into(&self, cells: &mut [f64], width: usize) {
        for (local, col) in self.data.chunks_exact(self.rows).enumerate() {
            let j = self.range.start + local;
            for (i, &v) in col.iter().enumerate() {
                cells[i * width + j] = v;
            }
        }
    }
}
