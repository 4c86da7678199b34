use std::fmt;
use std::str::FromStr;

/// Entering-column selection rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PivotRule {
    /// Most negative reduced cost, ties to the lowest column index.
    #[default]
    Dantzig,
    /// Lowest-index negative reduced cost; leaving ties go to the lowest basic index.
    Bland,
}

impl fmt::Display for PivotRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PivotRule::Dantzig => f.write_str("dantzig"),
            PivotRule::Bland => f.write_str("bland"),
        }
    }
}

impl FromStr for PivotRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dantzig" => Ok(PivotRule::Dantzig),
            "bland" => Ok(PivotRule::Bland),
            other => Err(format!("unknown pivot rule `{other}` (expected dantzig or bland)")),
        }
    }
}

/// Numerical thresholds shared by every solve path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// A reduced cost must be below `-optimality` to enter.
    pub optimality: f64,
    /// A pivot candidate must exceed this magnitude.
    pub pivot: f64,
    /// Slack allowed when checking `Ax <= b`.
    pub feasibility: f64,
    /// Largest auxiliary optimum still accepted as feasible after phase one.
    pub phase_one: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            optimality: 1e-7,
            pivot: 1e-10,
            feasibility: 1e-6,
            phase_one: 1e-7,
        }
    }
}

/// Options for the sequential pivot loop (phase one and the reference solver).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SimplexOptions {
    pub rule: PivotRule,
    pub tolerances: Tolerances,
    /// `None` means `20 * (m + n)`.
    pub max_iterations: Option<usize>,
}

impl SimplexOptions {
    pub fn iteration_cap(&self, rows: usize, cols: usize) -> usize {
        self.max_iterations.unwrap_or(20 * (rows + cols))
    }
}
