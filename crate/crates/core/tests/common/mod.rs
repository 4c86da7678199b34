//! Brute-force oracle and problem strategies shared by the integration tests.
#![allow(dead_code)]

use hybrid_simplex::lp_core::{LpProblem, RawLp, Relation, Sense};
use proptest::prelude::*;

const SINGULAR: f64 = 1e-10;
const SLACK: f64 = 1e-8;

#[allow(clippy::needless_range_loop)]
/// Solves a square system by Gaussian elimination with partial pivoting.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < SINGULAR {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            if f != 0.0 {
                for j in col..n {
                    a[i][j] -= f * a[col][j];
                }
                b[i] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

fn combinations(total: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, total: usize, k: usize, picked: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if picked.len() == k {
            visit(picked);
            return;
        }
        for i in start..=total - (k - picked.len()) {
            picked.push(i);
            rec(i + 1, total, k, picked, visit);
            picked.pop();
        }
    }
    if k <= total {
        rec(0, total, k, &mut Vec::with_capacity(k), visit);
    }
}

/// Best objective over all vertices of `{x : G x <= h}`, or `None` when no
/// vertex is feasible. Only meaningful when the polyhedron is pointed and the
/// objective is bounded on it.
fn best_vertex(g: &[Vec<f64>], h: &[f64], eval: impl Fn(&[f64]) -> f64, maximize: bool) -> Option<f64> {
    let n = g.first().map_or(0, Vec::len);
    let mut best: Option<f64> = None;
    combinations(g.len(), n, &mut |active| {
        let a = active.iter().map(|&i| g[i].clone()).collect();
        let b = active.iter().map(|&i| h[i]).collect();
        let Some(x) = solve_square(a, b) else { return };
        let feasible = g.iter().zip(h).all(|(row, &rhs)| {
            let lhs: f64 = row.iter().zip(&x).map(|(a, v)| a * v).sum();
            lhs <= rhs + SLACK * (1.0 + rhs.abs())
        });
        if feasible {
            let value = eval(&x);
            best = Some(match best {
                None => value,
                Some(b) if maximize => b.max(value),
                Some(b) => b.min(value),
            });
        }
    });
    best
}

/// Vertex-enumeration optimum of a standard-form problem.
pub fn oracle(problem: &LpProblem) -> Option<f64> {
    let n = problem.num_cols();
    let mut g: Vec<Vec<f64>> = (0..problem.num_rows()).map(|i| problem.row(i).to_vec()).collect();
    let mut h = problem.rhs().to_vec();
    for j in 0..n {
        let mut row = vec![0.0; n];
        row[j] = -1.0;
        g.push(row);
        h.push(0.0);
    }
    best_vertex(&g, &h, |x| problem.objective_value(x), problem.sense == Sense::Maximize)
}

/// Vertex-enumeration optimum of a general LP with finite bounds.
pub fn oracle_raw(raw: &RawLp) -> Option<f64> {
    let n = raw.num_cols;
    let mut g = Vec::new();
    let mut h = Vec::new();
    for i in 0..raw.num_rows {
        let row = raw.row(i).to_vec();
        let neg: Vec<f64> = row.iter().map(|v| -v).collect();
        match raw.relations[i] {
            Relation::Le => {
                g.push(row);
                h.push(raw.rhs[i]);
            }
            Relation::Ge => {
                g.push(neg);
                h.push(-raw.rhs[i]);
            }
            Relation::Eq => {
                g.push(row);
                h.push(raw.rhs[i]);
                g.push(neg);
                h.push(-raw.rhs[i]);
            }
        }
    }
    for j in 0..n {
        let mut unit = vec![0.0; n];
        if raw.lower[j].is_finite() {
            unit[j] = -1.0;
            g.push(unit.clone());
            h.push(-raw.lower[j]);
        }
        if raw.upper[j].is_finite() {
            unit[j] = 1.0;
            g.push(unit);
            h.push(raw.upper[j]);
        }
    }
    best_vertex(&g, &h, |x| raw.objective_value(x), raw.sense == Sense::Maximize)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// The three-constraint textbook LP: optimum 36 at (2, 6).
pub fn classic() -> LpProblem {
    LpProblem::from_rows(
        "classic",
        &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
        vec![4.0, 12.0, 18.0],
        vec![3.0, 5.0],
        Sense::Maximize,
    )
    .unwrap()
}

/// Beale's cycling example; optimum 1.25.
pub fn beale() -> LpProblem {
    LpProblem::from_rows(
        "beale",
        &[
            vec![0.25, -8.0, -1.0, 9.0],
            vec![0.5, -12.0, -0.5, 3.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ],
        vec![0.0, 0.0, 1.0],
        vec![0.75, -20.0, 0.5, -6.0],
        Sense::Maximize,
    )
    .unwrap()
}

/// Half-integers in `[-3, 5]`; repeated values make ties and degeneracy common.
fn coef() -> impl Strategy<Value = f64> {
    (-6i32..=10).prop_map(|v| f64::from(v) / 2.0)
}

/// Small standard-form problems (`m + n <= 10`). The first row has strictly
/// positive coefficients, so the feasible set is bounded; negative right-hand
/// sides force phase one and may make the problem infeasible.
pub fn small_problem() -> impl Strategy<Value = LpProblem> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(1i32..=6, n),
            prop::collection::vec(coef(), (m - 1) * n),
            (2i32..=20).prop_map(f64::from),
            prop::collection::vec((-4i32..=16).prop_map(f64::from), m - 1),
            prop::collection::vec(coef(), n),
            any::<bool>(),
        )
            .prop_map(move |(first, rest, b0, b, c, maximize)| {
                let mut matrix: Vec<f64> = first.into_iter().map(f64::from).collect();
                matrix.extend(rest);
                let mut rhs = vec![b0];
                rhs.extend(b);
                let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
                LpProblem::new("prop", m, n, matrix, rhs, c, sense).unwrap()
            })
    })
}

/// Small general LPs with `<=`, `>=` and `=` rows and finite boxes, some of
/// them straddling zero.
pub fn small_raw() -> impl Strategy<Value = RawLp> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(m, n)| {
        let relation = prop_oneof![Just(Relation::Le), Just(Relation::Ge), Just(Relation::Eq)];
        (
            prop::collection::vec(coef(), m * n),
            prop::collection::vec(relation, m),
            prop::collection::vec((-8i32..=8).prop_map(|v| f64::from(v) / 2.0), m),
            prop::collection::vec(coef(), n),
            prop::collection::vec(((-4i32..=2), (1i32..=8)), n),
            any::<bool>(),
            (-3i32..=3).prop_map(f64::from),
        )
            .prop_map(move |(matrix, relations, rhs, costs, boxes, maximize, constant)| {
                let rows: Vec<Vec<f64>> = matrix.chunks(n).map(<[f64]>::to_vec).collect();
                let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
                let mut raw = RawLp::new("raw", &rows, relations, rhs, costs, sense);
                raw.objective_constant = constant;
                for (j, (lo, width)) in boxes.into_iter().enumerate() {
                    let lo = f64::from(lo) / 2.0;
                    raw = raw.with_bounds(j, lo, lo + f64::from(width) / 2.0);
                }
                raw
            })
    })
}
