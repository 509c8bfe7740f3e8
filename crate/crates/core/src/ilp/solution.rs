//! Solver assignments: reading, rounding, verification and reconstruction of
//! the decomposition they select.

use std::fmt::Write as _;

use super::{objective_x2, violated_constraint, IlpModel};
use crate::decomposition::{induce_decomposition, CapMatching, HalfInteger, ScoredDecomposition, SiblingSet};
use crate::diagram::{MultiDiagram, Side};
use crate::error::{Error, Result};

/// Values within this distance of an integer are taken as exact.
pub const CLEAN_TOLERANCE: f64 = 1e-6;
/// Values farther than this from an integer are rejected.
pub const ROUNDING_LIMIT: f64 = 0.1;

/// Raw values read from a solution file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolverSolution {
    /// `(variable index, value)` in file order; later entries win.
    pub entries: Vec<(usize, f64)>,
    /// Objective reported in a comment, if any.
    pub objective: Option<f64>,
    /// Model fingerprint reported in a comment, if any.
    pub fingerprint: Option<String>,
}

/// Integral values for every model variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<i64>,
    /// Values that needed rounding beyond the clean tolerance.
    pub noisy: usize,
}

impl SolverSolution {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value(&self, index: usize) -> Option<f64> {
        self.entries.iter().rev().find(|e| e.0 == index).map(|e| e.1)
    }

    /// Rounds every value; missing variables are 0.
    pub fn integral(&self, m: &IlpModel) -> Result<Assignment> {
        let mut values = vec![0i64; m.variables().len()];
        let mut noisy = vec![false; values.len()];
        for &(i, v) in &self.entries {
            let r = v.round();
            let gap = (v - r).abs();
            if gap > ROUNDING_LIMIT {
                return Err(Error::InfeasibleAssignment(format!(
                    "{} = {v} is not integral",
                    m.variables()[i].name
                )));
            }
            values[i] = r as i64;
            noisy[i] = gap > CLEAN_TOLERANCE;
        }
        Ok(Assignment {
            values,
            noisy: noisy.iter().filter(|&&n| n).count(),
        })
    }
}

fn comment_value<'a>(comment: &'a str, key: &str) -> Option<&'a str> {
    let lower = comment.to_ascii_lowercase();
    let at = lower.find(key)? + key.len();
    let rest = comment[at..].trim_start();
    let rest = rest.strip_prefix(['=', ':']).unwrap_or(rest);
    rest.split_whitespace().next()
}

/// Reads whitespace-separated `name value` lines; `#` starts a comment.
pub fn read_solution(text: &str, m: &IlpModel) -> Result<SolverSolution> {
    let mut sol = SolverSolution::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (content, comment) = match raw.split_once('#') {
            Some((c, rest)) => (c, Some(rest)),
            None => (raw, None),
        };
        if let Some(comment) = comment {
            if let Some(v) = comment_value(comment, "objective value") {
                sol.objective = v.parse().ok();
            }
            if let Some(v) = comment_value(comment, "fingerprint") {
                sol.fingerprint = Some(v.to_string());
            }
        }
        let mut tokens = content.split_whitespace();
        let Some(name) = tokens.next() else {
            continue;
        };
        let index = m.variable_index(name).ok_or_else(|| Error::UnknownVariable {
            line: line_no,
            name: name.to_string(),
        })?;
        let text = tokens.next().unwrap_or("");
        let value: f64 = text
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::UnparsableValue {
                line: line_no,
                text: text.to_string(),
            })?;
        sol.entries.push((index, value));
    }
    Ok(sol)
}

/// Writes an assignment in the format accepted by [`read_solution`].
pub fn write_solution(m: &IlpModel, values: &[i64], fingerprint: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(fp) = fingerprint {
        let _ = writeln!(out, "# fingerprint: {fp}");
    }
    let _ = writeln!(out, "# Objective value = {}", HalfInteger(objective_x2(m, values)));
    for (var, v) in m.variables().iter().zip(values) {
        let _ = writeln!(out, "{} {v}", var.name);
    }
    out
}

#[derive(Debug, Clone)]
pub struct IlpResult {
    pub distance: i64,
    pub objective_x2: i64,
    pub sibling_set: SiblingSet,
    pub cap_matching: CapMatching,
    pub decomposition: ScoredDecomposition,
    pub noisy: usize,
}

/// Verifies a solver assignment against the model, recovers the sibling set
/// and cap matching it selects and checks the objective against an
/// independent rescoring of the induced decomposition.
pub fn extract_result(m: &IlpModel, sol: &SolverSolution, d: &MultiDiagram) -> Result<IlpResult> {
    let Assignment { values, noisy } = sol.integral(m)?;
    if let Some(c) = violated_constraint(m, &values) {
        return Err(Error::InfeasibleAssignment(format!("violates {}", c.label)));
    }
    let objective_x2 = objective_x2(m, &values);
    let x = |e: usize| values[m.x(e)] == 1;

    let pairs: Vec<usize> = d
        .pairs()
        .iter()
        .enumerate()
        .filter(|(_, p)| x(p.tail))
        .map(|(i, _)| i)
        .collect();
    let sibling_set = SiblingSet::new(d, pairs)?;
    let n_caps = d.caps(Side::A).len();
    let partner = (0..n_caps)
        .map(|i| {
            (0..n_caps)
                .find(|&j| d.cap_edge(i, j).is_some_and(x))
                .ok_or_else(|| Error::InfeasibleAssignment(format!("A cap {} is unmatched", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let cap_matching = CapMatching::new(partner)?;

    let decomposition = induce_decomposition(d, &sibling_set, Some(&cap_matching))
        .map_err(|e| Error::InfeasibleAssignment(e.to_string()))?;
    let mut selected: Vec<usize> = (0..d.edge_count()).filter(|&e| x(e)).collect();
    let mut induced = decomposition.edges.clone();
    selected.sort_unstable();
    induced.sort_unstable();
    if selected != induced {
        return Err(Error::InfeasibleAssignment(
            "selected edges differ from the decomposition induced by the sibling set".into(),
        ));
    }

    let total_x2 = 2 * (m.n_star() + m.p_star()) as i64;
    let distance_x2 = total_x2 - objective_x2;
    if objective_x2 != decomposition.weight_x2 {
        return Err(Error::ScoreMismatch {
            objective_distance: HalfInteger(distance_x2).to_string(),
            rescored: decomposition.distance.to_string(),
        });
    }
    Ok(IlpResult {
        distance: distance_x2 / 2,
        objective_x2,
        sibling_set,
        cap_matching,
        decomposition,
        noisy,
    })
}
