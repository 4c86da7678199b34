use std::fmt::Write;

use crate::lp_core::{LpProblem, Sense};

/// Free-format MPS for a standard-form problem. Rows are `R1..Rm` (all `L`),
/// columns `X1..Xn`, the objective row `COST`. Maximization is written with
/// an `OBJSENSE MAX` section. Zero coefficients are omitted and values use the
/// shortest round-trip decimal form.
pub fn write_mps(problem: &LpProblem) -> String {
    let (m, n) = (problem.num_rows(), problem.num_cols());
    let mut out = String::new();
    let name = if problem.name.is_empty() { "LP" } else { problem.name.as_str() };
    let _ = writeln!(out, "NAME {}", name.split_whitespace().collect::<Vec<_>>().join("_"));
    if problem.sense == Sense::Maximize {
        out.push_str("OBJSENSE\n    MAX\n");
    }
    out.push_str("ROWS\n N  COST\n");
    for i in 0..m {
        let _ = writeln!(out, " L  R{}", i + 1);
    }
    out.push_str("COLUMNS\n");
    for j in 0..n {
        let c = problem.costs()[j];
        let empty = c == 0.0 && (0..m).all(|i| problem.entry(i, j) == 0.0);
        // an explicit zero keeps an empty column declared
        if c != 0.0 || empty {
            let _ = writeln!(out, "    X{} COST {c:?}", j + 1);
        }
        for i in 0..m {
            let a = problem.entry(i, j);
            if a != 0.0 {
                let _ = writeln!(out, "    X{} R{} {a:?}", j + 1, i + 1);
            }
        }
    }
    out.push_str("RHS\n");
    for (i, &b) in problem.rhs().iter().enumerate() {
        if b != 0.0 {
            let _ = writeln!(out, "    RHS R{} {b:?}", i + 1);
        }
    }
    out.push_str("ENDATA\n");
    out
}
