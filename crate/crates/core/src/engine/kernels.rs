//! Per-lane building blocks of one simplex iteration.

use crate::lp_core::PivotRule;

/// Best entering column a lane found in its own range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalCandidate {
    pub lane_id: usize,
    pub col: Option<usize>,
    /// Objective-row value of `col`, `0.0` when there is no candidate.
    pub value: f64,
}

impl LocalCandidate {
    pub fn none(lane_id: usize) -> Self {
        LocalCandidate {
            lane_id,
            col: None,
            value: 0.0,
        }
    }
}

/// Scans `(column, objective-row value)` pairs in ascending column order.
///
/// Dantzig keeps the most negative value below `-optimality_tol`, ties to the
/// lowest column. Bland stops at the first qualifying column.
pub fn select_entering_local<I>(lane_id: usize, entries: I, rule: PivotRule, optimality_tol: f64) -> LocalCandidate
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut best = LocalCandidate::none(lane_id);
    for (col, value) in entries {
        if value >= -optimality_tol || value.is_nan() {
            continue;
        }
        match rule {
            PivotRule::Bland => {
                return LocalCandidate {
                    lane_id,
                    col: Some(col),
                    value,
                }
            }
            PivotRule::Dantzig => {
                if best.col.is_none() || value < best.value {
                    best = LocalCandidate {
                        lane_id,
                        col: Some(col),
                        value,
                    };
                }
            }
        }
    }
    best
}

/// Combines per-lane candidates into the global entering column, `None`
/// meaning optimal. Comparison is exact so the result equals a sequential
/// scan of the whole row.
pub fn merge_candidates(candidates: &[LocalCandidate], rule: PivotRule) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for cand in candidates {
        let Some(col) = cand.col else { continue };
        let better = match best {
            None => true,
            Some((best_col, best_value)) => match rule {
                PivotRule::Bland => col < best_col,
                PivotRule::Dantzig => cand.value < best_value || (cand.value == best_value && col < best_col),
            },
        };
        if better {
            best = Some((col, cand.value));
        }
    }
    best.map(|(col, _)| col)
}

/// Minimum-ratio test over constraint rows. Returns an index into `column`.
///
/// Only entries above `pivot_tol` qualify. Exact ratio ties go to the lowest
/// index, or, when `basis` is given (Bland), to the row whose basic column
/// has the lowest index. `None` means the entering direction is unbounded.
pub fn ratio_test(column: &[f64], rhs: &[f64], pivot_tol: f64, basis: Option<&[usize]>) -> Option<usize> {
    debug_assert_eq!(column.len(), rhs.len());
    let mut best: Option<(usize, f64)> = None;
    for (i, (&a, &b)) in column.iter().zip(rhs).enumerate() {
        if a <= pivot_tol {
            continue;
        }
        let ratio = b / a;
        let better = match best {
            None => true,
            Some((j, best_ratio)) => {
                ratio < best_ratio || (ratio == best_ratio && basis.is_some_and(|basis| basis[i] < basis[j]))
            }
        };
        if better {
            best = Some((i, ratio));
        }
    }
    best.map(|(i, _)| i)
}

/// Applies a pivot on row `r` to one column.
///
/// `pivot_col` is the entering column before the pivot and `pivot` its row-`r`
/// entry. Row `r` is divided by the pivot, every other row `i` loses
/// `pivot_col[i]` times the normalized value. Rows with a zero factor are
/// skipped, which keeps the arithmetic identical to a row-major pivot.
#[inline]
pub fn eliminate_column(col: &mut [f64], pivot_col: &[f64], r: usize, pivot: f64) {
    let p = col[r] / pivot;
    col[r] = p;
    for (i, (cell, &f)) in col.iter_mut().zip(pivot_col).enumerate() {
        if i != r && f != 0.0 {
            *cell -= f * p;
        }
    }
}
