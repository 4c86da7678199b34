use std::collections::HashMap;

use super::{BoundKind, MpsBound, MpsError, MpsModel, MpsRow, RowKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    End,
}

impl Section {
    fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "NAME" => Section::Name,
            "OBJSENSE" => Section::ObjSense,
            "ROWS" => Section::Rows,
            "COLUMNS" => Section::Columns,
            "RHS" => Section::Rhs,
            "RANGES" => Section::Ranges,
            "BOUNDS" => Section::Bounds,
            "ENDATA" => Section::End,
            _ => return None,
        })
    }
}

fn number(token: &str, line: usize) -> Result<f64, MpsError> {
    token
        .parse::<f64>()
        .or_else(|_| token.replace(['D', 'd'], "E").parse::<f64>())
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| MpsError::MalformedNumeric {
            line,
            token: token.to_string(),
        })
}

struct Parser {
    model: MpsModel,
    row_index: HashMap<String, usize>,
    col_index: HashMap<String, usize>,
    coef_index: HashMap<(usize, usize), usize>,
    has_objective: bool,
}

impl Parser {
    fn row(&self, name: &str, line: usize) -> Result<usize, MpsError> {
        self.row_index
            .get(name)
            .copied()
            .ok_or_else(|| MpsError::UndeclaredRowOrColumn {
                line,
                kind: "row",
                name: name.to_string(),
            })
    }

    fn column(&self, name: &str, line: usize) -> Result<usize, MpsError> {
        self.col_index
            .get(name)
            .copied()
            .ok_or_else(|| MpsError::UndeclaredRowOrColumn {
                line,
                kind: "column",
                name: name.to_string(),
            })
    }

    fn add_row(&mut self, tokens: &[&str], line: usize) -> Result<(), MpsError> {
        let [kind, name] = tokens else {
            return Err(MpsError::MalformedLine {
                line,
                reason: "ROWS entries are `<type> <name>`".into(),
            });
        };
        let kind = match kind.to_ascii_uppercase().as_str() {
            "N" if !self.has_objective => {
                self.has_objective = true;
                self.model.objective_row = self.model.rows.len();
                RowKind::Objective
            }
            "N" => RowKind::Free,
            "L" => RowKind::Le,
            "G" => RowKind::Ge,
            "E" => RowKind::Eq,
            other => {
                return Err(MpsError::MalformedLine {
                    line,
                    reason: format!("unknown row type `{other}`"),
                })
            }
        };
        if self.row_index.contains_key(*name) {
            return Err(MpsError::MalformedLine {
                line,
                reason: format!("row `{name}` declared twice"),
            });
        }
        self.row_index.insert(name.to_string(), self.model.rows.len());
        self.model.rows.push(MpsRow {
            name: name.to_string(),
            kind,
        });
        Ok(())
    }

    fn add_column_entries(&mut self, tokens: &[&str], line: usize) -> Result<(), MpsError> {
        if tokens.iter().any(|t| t.contains("MARKER")) {
            self.model
                .warnings
                .push(format!("line {line}: integer marker ignored"));
            return Ok(());
        }
        if tokens.len() != 3 && tokens.len() != 5 {
            return Err(MpsError::MalformedLine {
                line,
                reason: "COLUMNS entries are `<column> <row> <value> [<row> <value>]`".into(),
            });
        }
        let name = tokens[0];
        let col = match self.col_index.get(name) {
            Some(&c) => c,
            None => {
                let c = self.model.columns.len();
                self.col_index.insert(name.to_string(), c);
                self.model.columns.push(name.to_string());
                c
            }
        };
        for pair in tokens[1..].chunks_exact(2) {
            let row = self.row(pair[0], line)?;
            let value = number(pair[1], line)?;
            match self.coef_index.get(&(col, row)) {
                Some(&at) => self.model.coefficients[at].2 += value,
                None => {
                    self.coef_index.insert((col, row), self.model.coefficients.len());
                    self.model.coefficients.push((col, row, value));
                }
            }
        }
        Ok(())
    }

    /// RHS and RANGES lines: an optional set name followed by name/value pairs.
    fn row_values(&self, tokens: &[&str], line: usize) -> Result<Vec<(usize, f64)>, MpsError> {
        let pairs = match tokens.len() {
            2 | 4 => tokens,
            3 | 5 => &tokens[1..],
            _ => {
                return Err(MpsError::MalformedLine {
                    line,
                    reason: "expected `[<set>] <row> <value> [<row> <value>]`".into(),
                })
            }
        };
        pairs
            .chunks_exact(2)
            .map(|p| Ok((self.row(p[0], line)?, number(p[1], line)?)))
            .collect()
    }

    fn add_bound(&mut self, tokens: &[&str], line: usize) -> Result<(), MpsError> {
        let kind = match tokens[0].to_ascii_uppercase().as_str() {
            "LO" => BoundKind::Lo,
            "UP" => BoundKind::Up,
            "FX" => BoundKind::Fx,
            "FR" => BoundKind::Fr,
            "MI" => BoundKind::Mi,
            "PL" => BoundKind::Pl,
            other => {
                return Err(MpsError::UnknownBoundType {
                    line,
                    kind: other.to_string(),
                })
            }
        };
        let needs_value = matches!(kind, BoundKind::Lo | BoundKind::Up | BoundKind::Fx);
        let (column, value) = match (needs_value, tokens.len()) {
            (true, 4) => (tokens[2], number(tokens[3], line)?),
            (true, 3) => (tokens[1], number(tokens[2], line)?),
            // a trailing value on FR/MI/PL is tolerated and ignored
            (false, 3 | 4) => (tokens[2], 0.0),
            (false, 2) => (tokens[1], 0.0),
            _ => {
                return Err(MpsError::MalformedLine {
                    line,
                    reason: "expected `<type> [<set>] <column> [<value>]`".into(),
                })
            }
        };
        let column = self.column(column, line)?;
        self.model.bounds.push(MpsBound { kind, column, value });
        Ok(())
    }
}

/// Parses MPS text. A missing ENDATA is recorded in
/// [`MpsModel::warnings`](super::MpsModel) rather than rejected.
pub fn parse_mps(text: &str) -> Result<MpsModel, MpsError> {
    let mut p = Parser {
        model: MpsModel::default(),
        row_index: HashMap::new(),
        col_index: HashMap::new(),
        coef_index: HashMap::new(),
        has_objective: false,
    };
    let mut section = Section::Start;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let is_header = !raw.starts_with([' ', '\t']);
        if is_header {
            let keyword = tokens[0].to_ascii_uppercase();
            let next = Section::from_keyword(&keyword).ok_or_else(|| MpsError::UnknownSection {
                line,
                name: tokens[0].to_string(),
            })?;
            if next <= section {
                return Err(MpsError::SectionOrder { line, name: keyword });
            }
            section = next;
            match section {
                Section::Name => p.model.name = tokens.get(1).unwrap_or(&"").to_string(),
                Section::ObjSense if tokens.len() > 1 => p.model.maximize = parse_sense(tokens[1], line)?,
                Section::End => break,
                _ => {}
            }
            continue;
        }
        match section {
            Section::ObjSense => p.model.maximize = parse_sense(tokens[0], line)?,
            Section::Rows => p.add_row(&tokens, line)?,
            Section::Columns => p.add_column_entries(&tokens, line)?,
            Section::Rhs => {
                for (row, value) in p.row_values(&tokens, line)? {
                    p.model.rhs.push((row, value));
                }
            }
            Section::Ranges => {
                for (row, value) in p.row_values(&tokens, line)? {
                    p.model.ranges.push((row, value));
                }
            }
            Section::Bounds => p.add_bound(&tokens, line)?,
            Section::Start | Section::Name | Section::End => {
                return Err(MpsError::MalformedLine {
                    line,
                    reason: "data line outside a section".into(),
                })
            }
        }
    }
    if section != Section::End {
        p.model.warnings.push("missing ENDATA".into());
    }
    if !p.has_objective {
        return Err(MpsError::NoObjective);
    }
    Ok(p.model)
}

fn parse_sense(token: &str, line: usize) -> Result<bool, MpsError> {
    match token.to_ascii_uppercase().as_str() {
        "MAX" | "MAXIMIZE" => Ok(true),
        "MIN" | "MINIMIZE" => Ok(false),
        other => Err(MpsError::MalformedLine {
            line,
            reason: format!("unknown objective sense `{other}`"),
        }),
    }
}
