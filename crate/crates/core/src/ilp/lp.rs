//! LP text format: `Maximize`, `Subject To`, `Bounds`, `Binaries`,
//! `Generals` and `End` sections. The first line carries a SHA-256
//! fingerprint of everything after it.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{Domain, IlpModel, Sense};
use crate::error::{Error, Result};

const FINGERPRINT_TAG: &str = "\\ fingerprint: ";

fn term_text(first: bool, coef: i64, name: &str) -> String {
    let sign = if coef < 0 { "-" } else { "+" };
    let mag = coef.unsigned_abs();
    let body = if mag == 1 {
        name.to_string()
    } else {
        format!("{mag} {name}")
    };
    if first && coef > 0 {
        body
    } else {
        format!("{sign} {body}")
    }
}

fn objective_term(first: bool, coef_x2: i64, name: &str) -> String {
    let sign = if coef_x2 < 0 { "-" } else { "+" };
    let mag = coef_x2.unsigned_abs();
    let body = match mag {
        2 => name.to_string(),
        1 => format!("0.5 {name}"),
        _ if mag.is_multiple_of(2) => format!("{} {name}", mag / 2),
        _ => format!("{}.5 {name}", mag / 2),
    };
    if first && coef_x2 > 0 {
        body
    } else {
        format!("{sign} {body}")
    }
}

fn body(m: &IlpModel) -> String {
    let names: Vec<&str> = m.variables().iter().map(|v| v.name.as_str()).collect();
    let mut out = String::from("Maximize\n obj:");
    for (k, &(v, c)) in m.objective_x2().iter().enumerate() {
        out.push(' ');
        out.push_str(&objective_term(k == 0, c, names[v]));
    }
    out.push_str("\nSubject To\n");
    for c in m.constraints() {
        let _ = write!(out, " {}:", c.label);
        for (k, &(v, coef)) in c.terms.iter().enumerate() {
            out.push(' ');
            out.push_str(&term_text(k == 0, coef, names[v]));
        }
        let _ = writeln!(out, " {} {}", c.sense.symbol(), c.rhs);
    }
    out.push_str("Bounds\n");
    for v in m.variables() {
        if let Domain::Integer { upper } = v.domain {
            let _ = writeln!(out, " 0 <= {} <= {upper}", v.name);
        }
    }
    for (section, want_binary) in [("Binaries", true), ("Generals", false)] {
        out.push_str(section);
        out.push('\n');
        for v in m.variables() {
            if (v.domain == Domain::Binary) == want_binary {
                let _ = writeln!(out, " {}", v.name);
            }
        }
    }
    out.push_str("End\n");
    out
}

/// Hex SHA-256 of a model body.
pub fn fingerprint_of(body: &str) -> String {
    let digest = Sha256::digest(body.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Serializes the model; the first line holds its fingerprint.
pub fn write_lp(m: &IlpModel) -> String {
    let body = body(m);
    format!("{FINGERPRINT_TAG}{}\n{body}", fingerprint_of(&body))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConstraint {
    pub label: String,
    pub terms: Vec<(String, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Structure recovered from an LP file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LpStructure {
    /// Declared fingerprint and whether it matches the body.
    pub fingerprint: Option<(String, bool)>,
    pub objective: Vec<(String, f64)>,
    pub constraints: Vec<ParsedConstraint>,
    pub bounds: Vec<(f64, String, f64)>,
    pub binaries: Vec<String>,
    pub generals: Vec<String>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Generals,
    End,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::LpSyntax {
        line,
        message: message.into(),
    }
}

fn parse_expr(tokens: &[&str], line: usize) -> Result<Vec<(String, f64)>> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for &tok in tokens {
        match tok {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            _ => {
                if let Ok(v) = tok.parse::<f64>() {
                    if coef.is_some() {
                        return Err(syntax(line, format!("two coefficients before '{tok}'")));
                    }
                    coef = Some(v);
                } else {
                    terms.push((tok.to_string(), sign * coef.take().unwrap_or(1.0)));
                    sign = 1.0;
                }
            }
        }
    }
    if coef.is_some() {
        return Err(syntax(line, "dangling coefficient"));
    }
    Ok(terms)
}

fn flush(
    pending: &mut Option<(usize, String)>,
    section: Section,
    out: &mut LpStructure,
) -> Result<()> {
    let Some((line, text)) = pending.take() else {
        return Ok(());
    };
    let (label, expr) = text
        .split_once(':')
        .ok_or_else(|| syntax(line, "missing label"))?;
    let label = label.trim().to_string();
    let tokens: Vec<&str> = expr.split_whitespace().collect();
    match section {
        Section::Objective => out.objective = parse_expr(&tokens, line)?,
        Section::Constraints => {
            let at = tokens
                .iter()
                .position(|t| matches!(*t, "<=" | ">=" | "=" | "=<" | "=>"))
                .ok_or_else(|| syntax(line, format!("constraint '{label}' has no sense")))?;
            let sense = match tokens[at] {
                "<=" | "=<" => Sense::Le,
                ">=" | "=>" => Sense::Ge,
                _ => Sense::Eq,
            };
            let rhs_tokens = &tokens[at + 1..];
            let rhs = match rhs_tokens {
                [v] => v.parse::<f64>().ok(),
                ["-", v] => v.parse::<f64>().ok().map(|x| -x),
                _ => None,
            }
            .ok_or_else(|| syntax(line, format!("bad right-hand side in '{label}'")))?;
            out.constraints.push(ParsedConstraint {
                label,
                terms: parse_expr(&tokens[..at], line)?,
                sense,
                rhs,
            });
        }
        _ => unreachable!("labels only appear in objective and constraints"),
    }
    Ok(())
}

/// Parses the LP dialect written by [`write_lp`].
pub fn parse_lp_structure(text: &str) -> Result<LpStructure> {
    let mut out = LpStructure::default();
    let mut lines = text.lines();
    let mut offset = 0;
    if let Some(first) = text.lines().next() {
        if let Some(fp) = first.strip_prefix(FINGERPRINT_TAG) {
            let body_start = first.len() + 1;
            let body = text.get(body_start..).unwrap_or("");
            let fp = fp.trim().to_string();
            let ok = fingerprint_of(body) == fp;
            out.fingerprint = Some((fp, ok));
            lines.next();
            offset = 1;
        }
    }

    let mut section = Section::None;
    let mut pending: Option<(usize, String)> = None;
    for (idx, raw) in lines.enumerate() {
        let line_no = idx + 1 + offset;
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let header = match line.to_ascii_lowercase().as_str() {
            "maximize" | "max" | "minimize" | "min" => Some(Section::Objective),
            "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binaries" | "binary" | "bin" => Some(Section::Binaries),
            "generals" | "general" | "gen" => Some(Section::Generals),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(h) = header {
            flush(&mut pending, section, &mut out)?;
            section = h;
            continue;
        }
        match section {
            Section::None | Section::End => {
                return Err(syntax(line_no, "content outside of a section"));
            }
            Section::Objective | Section::Constraints => {
                if line.contains(':') {
                    flush(&mut pending, section, &mut out)?;
                    pending = Some((line_no, line.to_string()));
                } else if let Some((_, text)) = pending.as_mut() {
                    text.push(' ');
                    text.push_str(line);
                } else {
                    return Err(syntax(line_no, "expression without a label"));
                }
            }
            Section::Bounds => {
                let t: Vec<&str> = line.split_whitespace().collect();
                match t.as_slice() {
                    [lo, "<=", name, "<=", hi] => {
                        let lo = lo.parse().map_err(|_| syntax(line_no, "bad lower bound"))?;
                        let hi = hi.parse().map_err(|_| syntax(line_no, "bad upper bound"))?;
                        out.bounds.push((lo, name.to_string(), hi));
                    }
                    _ => return Err(syntax(line_no, "expected 'lo <= name <= hi'")),
                }
            }
            Section::Binaries => out.binaries.extend(line.split_whitespace().map(String::from)),
            Section::Generals => out.generals.extend(line.split_whitespace().map(String::from)),
        }
    }
    flush(&mut pending, section, &mut out)?;
    if section != Section::End {
        return Err(syntax(text.lines().count(), "missing End"));
    }
    Ok(out)
}
