use super::{BoundKind, MpsError, MpsModel, RowKind};
use crate::lp_core::{RawLp, Relation, Sense};

/// Dense raw LP from a parsed model.
///
/// Constraint rows keep declaration order. A ranged row becomes a `>=` row
/// followed by a `<=` row named `<row>~UP`, with the interval
///
/// | row | range `R` | interval |
/// |-----|-----------|----------|
/// | L   | any       | `[rhs - abs(R), rhs]` |
/// | G   | any       | `[rhs, rhs + abs(R)]` |
/// | E   | `R > 0`   | `[rhs, rhs + R]` |
/// | E   | `R < 0`   | `[rhs + R, rhs]` |
///
/// An RHS entry on the objective row sets the objective constant to minus
/// that value.
pub fn to_raw_lp(model: &MpsModel) -> Result<RawLp, MpsError> {
    let n = model.columns.len();
    let mut rhs = vec![0.0; model.rows.len()];
    for &(row, value) in &model.rhs {
        rhs[row] = value;
    }
    let mut range: Vec<Option<f64>> = vec![None; model.rows.len()];
    for &(row, value) in &model.ranges {
        range[row] = Some(value);
    }

    // dense copy of every declared row, objective included
    let mut dense = vec![vec![0.0; n]; model.rows.len()];
    for &(col, row, value) in &model.coefficients {
        dense[row][col] = value;
    }

    let mut matrix = Vec::new();
    let mut relations = Vec::new();
    let mut b = Vec::new();
    let mut row_names = Vec::new();
    let mut emit = |coefs: &[f64], relation, value, name: String| {
        matrix.extend_from_slice(coefs);
        relations.push(relation);
        b.push(value);
        row_names.push(name);
    };
    for (i, row) in model.rows.iter().enumerate() {
        let relation = match row.kind {
            RowKind::Objective | RowKind::Free => continue,
            RowKind::Le => Relation::Le,
            RowKind::Ge => Relation::Ge,
            RowKind::Eq => Relation::Eq,
        };
        let interval = range[i].and_then(|r| match row.kind {
            RowKind::Le => Some((rhs[i] - r.abs(), rhs[i])),
            RowKind::Ge => Some((rhs[i], rhs[i] + r.abs())),
            RowKind::Eq if r > 0.0 => Some((rhs[i], rhs[i] + r)),
            RowKind::Eq if r < 0.0 => Some((rhs[i] + r, rhs[i])),
            _ => None,
        });
        match interval {
            Some((lo, hi)) => {
                emit(&dense[i], Relation::Ge, lo, row.name.clone());
                emit(&dense[i], Relation::Le, hi, format!("{}~UP", row.name));
            }
            None => emit(&dense[i], relation, rhs[i], row.name.clone()),
        }
    }

    let mut lower = vec![0.0; n];
    let mut upper = vec![f64::INFINITY; n];
    let mut warnings = Vec::new();
    for bound in &model.bounds {
        let j = bound.column;
        match bound.kind {
            BoundKind::Lo => lower[j] = bound.value,
            BoundKind::Up => {
                upper[j] = bound.value;
                if bound.value < 0.0 && lower[j] == 0.0 {
                    lower[j] = f64::NEG_INFINITY;
                    warnings.push(model.columns[j].clone());
                }
            }
            BoundKind::Fx => {
                lower[j] = bound.value;
                upper[j] = bound.value;
            }
            BoundKind::Fr => {
                lower[j] = f64::NEG_INFINITY;
                upper[j] = f64::INFINITY;
            }
            BoundKind::Mi => lower[j] = f64::NEG_INFINITY,
            BoundKind::Pl => {}
        }
    }
    for j in 0..n {
        if lower[j] > upper[j] {
            return Err(MpsError::ConflictingBounds {
                column: model.columns[j].clone(),
                lower: lower[j],
                upper: upper[j],
            });
        }
    }

    let objective = model.objective_row;
    Ok(RawLp {
        name: model.name.clone(),
        num_rows: relations.len(),
        num_cols: n,
        matrix,
        relations,
        rhs: b,
        costs: dense[objective].clone(),
        lower,
        upper,
        sense: if model.maximize { Sense::Maximize } else { Sense::Minimize },
        objective_constant: -rhs[objective],
        column_names: model.columns.clone(),
        row_names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::parse_mps;

    const MINIMAL: &str = "NAME TEST\nROWS\n N COST\n L LIM1\nCOLUMNS\n X1 COST 1.0\n X1 LIM1 1.0\nRHS\n R LIM1 4.0\nENDATA\n";

    fn with_sections(extra: &str) -> RawLp {
        let text = MINIMAL.replace("ENDATA", &format!("{extra}ENDATA"));
        to_raw_lp(&parse_mps(&text).unwrap()).unwrap()
    }

    #[test]
    fn minimal_assembles() {
        let raw = with_sections("");
        assert_eq!(raw.matrix, vec![1.0]);
        assert_eq!(raw.rhs, vec![4.0]);
        assert_eq!(raw.relations, vec![Relation::Le]);
        assert_eq!(raw.costs, vec![1.0]);
        assert_eq!(raw.sense, Sense::Minimize);
        assert_eq!((raw.lower[0], raw.upper[0]), (0.0, f64::INFINITY));
    }

    #[test]
    fn bound_types() {
        let raw = with_sections("BOUNDS\n FX BND X1 2\n");
        assert_eq!((raw.lower[0], raw.upper[0]), (2.0, 2.0));
        let raw = with_sections("BOUNDS\n MI BND X1\n");
        assert_eq!((raw.lower[0], raw.upper[0]), (f64::NEG_INFINITY, f64::INFINITY));
        let raw = with_sections("BOUNDS\n FR BND X1\n PL BND X1\n");
        assert_eq!((raw.lower[0], raw.upper[0]), (f64::NEG_INFINITY, f64::INFINITY));
        let raw = with_sections("BOUNDS\n UP BND X1 -3\n");
        assert_eq!((raw.lower[0], raw.upper[0]), (f64::NEG_INFINITY, -3.0));
    }

    #[test]
    fn conflicting_bounds() {
        let text = MINIMAL.replace("ENDATA", "BOUNDS\n LO BND X1 5\n UP BND X1 1\nENDATA");
        assert!(matches!(
            to_raw_lp(&parse_mps(&text).unwrap()),
            Err(MpsError::ConflictingBounds { .. })
        ));
    }

    #[test]
    fn range_on_le_row() {
        let text = MINIMAL.replace("4.0", "10.0").replace("ENDATA", "RANGES\n RNG LIM1 5\nENDATA");
        let raw = to_raw_lp(&parse_mps(&text).unwrap()).unwrap();
        assert_eq!(raw.relations, vec![Relation::Ge, Relation::Le]);
        assert_eq!(raw.rhs, vec![5.0, 10.0]);
        assert_eq!(raw.row_names, vec!["LIM1".to_string(), "LIM1~UP".to_string()]);
    }

    #[test]
    fn range_on_eq_row_follows_sign() {
        let base = "NAME\nROWS\n N c\n E e\nCOLUMNS\n x c 1 e 1\nRHS\n e 3\nRANGES\n e VALUE\nENDATA\n";
        let raw = to_raw_lp(&parse_mps(&base.replace("VALUE", "2")).unwrap()).unwrap();
        assert_eq!(raw.rhs, vec![3.0, 5.0]);
        let raw = to_raw_lp(&parse_mps(&base.replace("VALUE", "-2")).unwrap()).unwrap();
        assert_eq!(raw.rhs, vec![1.0, 3.0]);
    }

    #[test]
    fn objective_rhs_is_negated_constant() {
        let text = MINIMAL.replace(" R LIM1 4.0", " R LIM1 4.0 COST 7");
        let raw = to_raw_lp(&parse_mps(&text).unwrap()).unwrap();
        assert_eq!(raw.objective_constant, -7.0);
    }

    #[test]
    fn extra_n_rows_are_dropped() {
        let text = MINIMAL
            .replace(" L LIM1", " N SPARE\n L LIM1")
            .replace(" X1 LIM1 1.0", " X1 LIM1 1.0 SPARE 9");
        let raw = to_raw_lp(&parse_mps(&text).unwrap()).unwrap();
        assert_eq!(raw.num_rows, 1);
        assert_eq!(raw.costs, vec![1.0]);
    }
}
