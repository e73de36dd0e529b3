//! LP-format model export and import, plus the plain-text solution file
//! format used by the external-engine adapter.
//!
//! The dialect is the common CPLEX-style subset: objective, `Subject To`,
//! `Bounds`, `Generals`, `Binaries`, `End`. Variable and constraint names
//! pass through verbatim (including brackets and commas), so exported
//! models keep the `family[indices]` naming scheme bit for bit.

use super::milp::{MilpCol, MilpProblem, MilpRow, Sense};
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpTextError {
    #[error("lp parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate column {0}")]
    DuplicateColumn(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub fn write_lp(problem: &MilpProblem) -> String {
    let mut out = String::new();
    out.push_str("\\ tramp-fleet model export\n");
    out.push_str("Minimize\n");
    out.push_str(" obj:");
    let mut line_len = 5;
    let mut first = true;
    for (j, c) in problem.cols.iter().enumerate() {
        if c.objective == 0.0 {
            continue;
        }
        push_term(&mut out, &mut line_len, &mut first, c.objective, &c.name, j == 0);
    }
    out.push('\n');
    out.push_str("Subject To\n");
    for row in &problem.rows {
        let mut line = format!(" {}:", row.name);
        let mut len = line.len();
        let mut first = true;
        for &(j, a) in &row.terms {
            push_term(&mut line, &mut len, &mut first, a, &problem.cols[j].name, false);
        }
        if row.terms.is_empty() {
            line.push_str(" 0");
        }
        write!(line, " {} {}", row.sense.symbol(), fmt_num(row.rhs)).unwrap();
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("Bounds\n");
    for c in &problem.cols {
        if c.integer && c.lower == 0.0 && c.upper == 1.0 {
            continue; // implied by Binaries
        }
        let lo_inf = c.lower == f64::NEG_INFINITY;
        let hi_inf = c.upper == f64::INFINITY;
        match (lo_inf, hi_inf) {
            (true, true) => writeln!(out, " {} free", c.name).unwrap(),
            (false, true) => {
                if c.lower != 0.0 {
                    writeln!(out, " {} >= {}", c.name, fmt_num(c.lower)).unwrap();
                }
            }
            (true, false) => {
                writeln!(out, " -inf <= {} <= {}", c.name, fmt_num(c.upper)).unwrap()
            }
            (false, false) => {
                if c.lower == c.upper {
                    writeln!(out, " {} = {}", c.name, fmt_num(c.lower)).unwrap();
                } else {
                    writeln!(
                        out,
                        " {} <= {} <= {}",
                        fmt_num(c.lower),
                        c.name,
                        fmt_num(c.upper)
                    )
                    .unwrap();
                }
            }
        }
    }
    let generals: Vec<&str> = problem
        .cols
        .iter()
        .filter(|c| c.integer && !(c.lower == 0.0 && c.upper == 1.0))
        .map(|c| c.name.as_str())
        .collect();
    if !generals.is_empty() {
        out.push_str("Generals\n");
        for name in generals {
            writeln!(out, " {name}").unwrap();
        }
    }
    let binaries: Vec<&str> = problem
        .cols
        .iter()
        .filter(|c| c.integer && c.lower == 0.0 && c.upper == 1.0)
        .map(|c| c.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for name in binaries {
            writeln!(out, " {name}").unwrap();
        }
    }
    out.push_str("End\n");
    out
}

fn push_term(
    out: &mut String,
    line_len: &mut usize,
    first: &mut bool,
    coef: f64,
    name: &str,
    _lead: bool,
) {
    let mut piece = String::new();
    if *first {
        *first = false;
        if coef < 0.0 {
            piece.push_str(" -");
        } else {
            piece.push(' ');
        }
    } else if coef < 0.0 {
        piece.push_str(" -");
    } else {
        piece.push_str(" +");
    }
    let mag = coef.abs();
    if mag != 1.0 {
        write!(piece, " {}", fmt_num(mag)).unwrap();
    }
    write!(piece, " {name}").unwrap();
    if *line_len + piece.len() > 230 {
        out.push_str("\n   ");
        *line_len = 3;
    }
    out.push_str(&piece);
    *line_len += piece.len();
}

fn fmt_num(v: f64) -> String {
    // Display for f64 round-trips and never uses exponent notation.
    format!("{v}")
}

/// A parsed LP file. The problem is always stored as a minimization; when
/// the source said `Maximize`, `maximize` is set and the stored objective
/// is the negated one.
#[derive(Debug, Clone)]
pub struct ParsedLp {
    pub problem: MilpProblem,
    pub maximize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Objective,
    Constraints,
    Bounds,
    Generals,
    Binaries,
    Done,
}

pub fn parse_lp(text: &str) -> Result<ParsedLp, LpTextError> {
    let mut cols: Vec<MilpCol> = Vec::new();
    let mut col_ids: HashMap<String, usize> = HashMap::new();
    let mut rows: Vec<MilpRow> = Vec::new();
    let mut maximize = false;
    let mut section: Option<Section> = None;

    // Accumulator for a constraint spanning multiple lines.
    let mut pending: Vec<String> = Vec::new();
    let mut pending_line = 0usize;

    let mut intern =
        |cols: &mut Vec<MilpCol>, col_ids: &mut HashMap<String, usize>, name: &str| -> usize {
            if let Some(&j) = col_ids.get(name) {
                return j;
            }
            let j = cols.len();
            cols.push(MilpCol {
                name: name.to_string(),
                lower: 0.0,
                upper: f64::INFINITY,
                integer: false,
                objective: 0.0,
            });
            col_ids.insert(name.to_string(), j);
            j
        };

    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0usize;
    while i <= lines.len() {
        let (raw, line_no) = if i < lines.len() {
            (lines[i], i + 1)
        } else {
            ("", lines.len() + 1)
        };
        i += 1;
        let stripped = match raw.find('\\') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = stripped.trim();
        let lowered = trimmed.to_ascii_lowercase();

        let new_section = match lowered.as_str() {
            "minimize" | "min" | "minimise" => Some((Section::Objective, false)),
            "maximize" | "max" | "maximise" => Some((Section::Objective, true)),
            "subject to" | "such that" | "st" | "s.t." => Some((Section::Constraints, maximize)),
            "bounds" => Some((Section::Bounds, maximize)),
            "generals" | "general" | "integers" | "integer" | "gen" => {
                Some((Section::Generals, maximize))
            }
            "binaries" | "binary" | "bin" => Some((Section::Binaries, maximize)),
            "end" => Some((Section::Done, maximize)),
            _ => None,
        };

        let flush = new_section.is_some() || i > lines.len();
        if flush && !pending.is_empty() {
            let all = pending.join(" ");
            pending.clear();
            match section {
                Some(Section::Objective) => {
                    parse_objective(&all, pending_line, &mut cols, &mut col_ids, &mut intern)?
                }
                Some(Section::Constraints) => {
                    let row =
                        parse_constraint(&all, pending_line, &mut cols, &mut col_ids, &mut intern)?;
                    rows.push(row);
                }
                _ => {}
            }
        }

        if let Some((sec, is_max)) = new_section {
            section = Some(sec);
            maximize = is_max;
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }

        match section {
            None => {
                return Err(LpTextError::Parse {
                    line: line_no,
                    message: "content before objective section".into(),
                })
            }
            Some(Section::Objective) => {
                if pending.is_empty() {
                    pending_line = line_no;
                }
                pending.push(trimmed.to_string());
            }
            Some(Section::Constraints) => {
                // A new constraint starts when the accumulated text already
                // contains a sense and rhs; otherwise keep accumulating.
                if !pending.is_empty() && has_complete_relation(&pending.join(" ")) {
                    let all = pending.join(" ");
                    pending.clear();
                    let row =
                        parse_constraint(&all, pending_line, &mut cols, &mut col_ids, &mut intern)?;
                    rows.push(row);
                }
                if pending.is_empty() {
                    pending_line = line_no;
                }
                pending.push(trimmed.to_string());
            }
            Some(Section::Bounds) => {
                parse_bound_line(trimmed, line_no, &mut cols, &mut col_ids, &mut intern)?
            }
            Some(Section::Generals) => {
                for tok in trimmed.split_whitespace() {
                    let j = intern(&mut cols, &mut col_ids, tok);
                    cols[j].integer = true;
                }
            }
            Some(Section::Binaries) => {
                for tok in trimmed.split_whitespace() {
                    let j = intern(&mut cols, &mut col_ids, tok);
                    cols[j].integer = true;
                    cols[j].lower = 0.0;
                    cols[j].upper = 1.0;
                }
            }
            Some(Section::Done) => {}
        }
    }

    if maximize {
        for c in cols.iter_mut() {
            c.objective = -c.objective;
        }
    }
    for row in &mut rows {
        row.terms.sort_by_key(|t| t.0);
    }
    Ok(ParsedLp {
        problem: MilpProblem { cols, rows },
        maximize,
    })
}

fn has_complete_relation(text: &str) -> bool {
    let senses = ["<=", ">=", "=<", "=>"];
    let pos = senses
        .iter()
        .filter_map(|s| text.find(s))
        .min()
        .or_else(|| text.rfind('='));
    match pos {
        None => false,
        Some(p) => text[p..]
            .trim_start_matches(['<', '>', '='])
            .trim()
            .split_whitespace()
            .next()
            .map_or(false, |tok| parse_number(tok).is_some()),
    }
}

fn split_label(text: &str) -> (Option<&str>, &str) {
    // A label is the first token when it ends with ':' (possibly detached).
    let t = text.trim_start();
    if let Some(colon) = t.find(':') {
        let (head, tail) = t.split_at(colon);
        if !head.contains("<=") && !head.contains(">=") && !head.contains(' ') {
            return (Some(head.trim()), &tail[1..]);
        }
        let head_tokens: Vec<&str> = head.split_whitespace().collect();
        if head_tokens.len() == 1 {
            return (Some(head_tokens[0]), &tail[1..]);
        }
    }
    (None, t)
}

fn parse_number(tok: &str) -> Option<f64> {
    let t = tok.to_ascii_lowercase();
    match t.as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" | "1e30" => Some(f64::INFINITY),
        "-inf" | "-infinity" | "-1e30" => Some(f64::NEG_INFINITY),
        _ => tok.parse::<f64>().ok(),
    }
}

/// Parses `[+|-] [coef] name` sequences. Returns (column, coefficient)
/// pairs in order of appearance.
fn parse_terms(
    text: &str,
    line: usize,
    cols: &mut Vec<MilpCol>,
    col_ids: &mut HashMap<String, usize>,
    intern: &mut impl FnMut(&mut Vec<MilpCol>, &mut HashMap<String, usize>, &str) -> usize,
) -> Result<Vec<(usize, f64)>, LpTextError> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for tok in text.split_whitespace() {
        match tok {
            "+" => {}
            "-" => sign = -sign,
            _ => {
                let (tok_sign, body) = match tok.strip_prefix('-') {
                    Some(rest) => (-1.0, rest),
                    None => (1.0, tok.strip_prefix('+').unwrap_or(tok)),
                };
                if body.is_empty() {
                    sign *= tok_sign;
                    continue;
                }
                if let Some(v) = parse_number(body) {
                    if coef.is_some() {
                        return Err(LpTextError::Parse {
                            line,
                            message: format!("two consecutive numbers near '{tok}'"),
                        });
                    }
                    coef = Some(sign * tok_sign * v);
                    sign = 1.0;
                } else {
                    let j = intern(cols, col_ids, body);
                    let value = match coef.take() {
                        Some(c) => c * tok_sign,
                        None => sign * tok_sign,
                    };
                    out.push((j, value));
                    sign = 1.0;
                }
            }
        }
    }
    if coef.is_some() {
        return Err(LpTextError::Parse {
            line,
            message: "dangling coefficient".into(),
        });
    }
    // Merge duplicates.
    let mut merged: HashMap<usize, f64> = HashMap::new();
    let mut order: Vec<usize> = Vec::new();
    for (j, a) in out {
        if !merged.contains_key(&j) {
            order.push(j);
        }
        *merged.entry(j).or_insert(0.0) += a;
    }
    Ok(order.into_iter().map(|j| (j, merged[&j])).collect())
}

fn parse_objective(
    text: &str,
    line: usize,
    cols: &mut Vec<MilpCol>,
    col_ids: &mut HashMap<String, usize>,
    intern: &mut impl FnMut(&mut Vec<MilpCol>, &mut HashMap<String, usize>, &str) -> usize,
) -> Result<(), LpTextError> {
    let (_label, body) = split_label(text);
    for (j, a) in parse_terms(body, line, cols, col_ids, intern)? {
        cols[j].objective += a;
    }
    Ok(())
}

fn parse_constraint(
    text: &str,
    line: usize,
    cols: &mut Vec<MilpCol>,
    col_ids: &mut HashMap<String, usize>,
    intern: &mut impl FnMut(&mut Vec<MilpCol>, &mut HashMap<String, usize>, &str) -> usize,
) -> Result<MilpRow, LpTextError> {
    let (label, body) = split_label(text);
    let (sense, pos, width) = find_sense(body).ok_or_else(|| LpTextError::Parse {
        line,
        message: "constraint without relational operator".into(),
    })?;
    let lhs = &body[..pos];
    let rhs_text = body[pos + width..].trim();
    let rhs = parse_number(rhs_text).ok_or_else(|| LpTextError::Parse {
        line,
        message: format!("bad right-hand side '{rhs_text}'"),
    })?;
    let terms = parse_terms(lhs, line, cols, col_ids, intern)?;
    Ok(MilpRow {
        name: label
            .map(str::to_string)
            .unwrap_or_else(|| format!("r{line}")),
        terms,
        sense,
        rhs,
    })
}

fn find_sense(text: &str) -> Option<(Sense, usize, usize)> {
    for (pat, sense) in [
        ("<=", Sense::Le),
        ("=<", Sense::Le),
        (">=", Sense::Ge),
        ("=>", Sense::Ge),
    ] {
        if let Some(p) = text.find(pat) {
            return Some((sense, p, 2));
        }
    }
    // Lone '=' that is not part of <= / >=.
    text.find('=').map(|p| (Sense::Eq, p, 1))
}

fn parse_bound_line(
    text: &str,
    line: usize,
    cols: &mut Vec<MilpCol>,
    col_ids: &mut HashMap<String, usize>,
    intern: &mut impl FnMut(&mut Vec<MilpCol>, &mut HashMap<String, usize>, &str) -> usize,
) -> Result<(), LpTextError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let err = |message: String| LpTextError::Parse { line, message };
    match tokens.as_slice() {
        [name, kw] if kw.eq_ignore_ascii_case("free") => {
            let j = intern(cols, col_ids, name);
            cols[j].lower = f64::NEG_INFINITY;
            cols[j].upper = f64::INFINITY;
            Ok(())
        }
        [lo, le1, name, le2, hi]
            if (*le1 == "<=" || *le1 == "<") && (*le2 == "<=" || *le2 == "<") =>
        {
            let j = intern(cols, col_ids, name);
            cols[j].lower =
                parse_number(lo).ok_or_else(|| err(format!("bad lower bound '{lo}'")))?;
            cols[j].upper =
                parse_number(hi).ok_or_else(|| err(format!("bad upper bound '{hi}'")))?;
            Ok(())
        }
        [name, op, v] => {
            let j = intern(cols, col_ids, name);
            let value = parse_number(v).ok_or_else(|| err(format!("bad bound '{v}'")))?;
            match *op {
                "<=" | "<" => cols[j].upper = value,
                ">=" | ">" => cols[j].lower = value,
                "=" => {
                    cols[j].lower = value;
                    cols[j].upper = value;
                }
                _ => return Err(err(format!("bad bound operator '{op}'"))),
            }
            Ok(())
        }
        _ => Err(err(format!("unrecognized bounds line '{text}'"))),
    }
}

/// Writes a solution file: `# key = value` headers then `name value` lines.
pub fn write_solution(
    status: &str,
    objective: Option<f64>,
    values: &[(String, f64)],
) -> String {
    let mut out = String::new();
    writeln!(out, "# Status = {status}").unwrap();
    if let Some(obj) = objective {
        writeln!(out, "# Objective value = {obj}").unwrap();
    }
    for (name, v) in values {
        writeln!(out, "{name} {v}").unwrap();
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct ParsedSolution {
    pub status: Option<String>,
    pub objective: Option<f64>,
    pub values: HashMap<String, f64>,
}

pub fn parse_solution(text: &str) -> Result<ParsedSolution, LpTextError> {
    let mut out = ParsedSolution::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let lower = comment.to_ascii_lowercase();
            if let Some(eq) = comment.find('=') {
                let value = comment[eq + 1..].trim();
                if lower.contains("objective") {
                    out.objective = value.parse::<f64>().ok();
                } else if lower.contains("status") {
                    out.status = Some(value.to_string());
                }
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let name = parts.next().unwrap();
        let value = parts
            .next()
            .and_then(|v| v.parse::<f64>().ok())
            .ok_or_else(|| LpTextError::Parse {
                line: i + 1,
                message: format!("bad solution line '{line}'"),
            })?;
        out.values.insert(name.to_string(), value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::bnb::{solve_milp, BnbOptions};
    use crate::solve::milp::MilpStatus;

    fn sample() -> MilpProblem {
        MilpProblem {
            cols: vec![
                MilpCol {
                    name: "x_p1[0,1,0]".into(),
                    lower: 0.0,
                    upper: 4.0,
                    integer: true,
                    objective: -5.0,
                },
                MilpCol {
                    name: "y1[0,1]".into(),
                    lower: 0.0,
                    upper: 1.0,
                    integer: true,
                    objective: 2.5,
                },
                MilpCol {
                    name: "t_port_p1[0]".into(),
                    lower: 0.0,
                    upper: f64::INFINITY,
                    integer: false,
                    objective: 0.125,
                },
            ],
            rows: vec![
                MilpRow {
                    name: "cap[0,1]".into(),
                    terms: vec![(0, 1.0), (1, -4.0)],
                    sense: Sense::Le,
                    rhs: 0.0,
                },
                MilpRow {
                    name: "budget[0]".into(),
                    terms: vec![(0, 30.0), (2, 1.0)],
                    sense: Sense::Eq,
                    rhs: 120.0,
                },
            ],
        }
    }

    #[test]
    fn round_trip_preserves_model_and_optimum() {
        let p = sample();
        let text = write_lp(&p);
        let parsed = parse_lp(&text).unwrap();
        assert!(!parsed.maximize);
        assert_eq!(parsed.problem.cols.len(), 3);
        assert_eq!(parsed.problem.rows.len(), 2);
        let a = solve_milp(&p, &BnbOptions::default());
        let b = solve_milp(&parsed.problem, &BnbOptions::default());
        assert_eq!(a.status, MilpStatus::Optimal);
        assert_eq!(b.status, MilpStatus::Optimal);
        let names_a: Vec<&str> = p.cols.iter().map(|c| c.name.as_str()).collect();
        let names_b: Vec<&str> = parsed.problem.cols.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names_a, names_b);
        assert!((a.objective.unwrap() - b.objective.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn parses_handwritten_file() {
        let text = "\\ comment line\nMaximize\n obj: 3 x + 2 y \\ trailing comment\nSubject To\n c1: x + y <= 4\n c2: x + 3 y <= 6\nBounds\n x <= 10\nEnd\n";
        let parsed = parse_lp(text).unwrap();
        assert!(parsed.maximize);
        let out = solve_milp(&parsed.problem, &BnbOptions::default());
        // Stored as min of the negation: optimum -12 at (4, 0).
        assert!((out.objective.unwrap() + 12.0).abs() < 1e-9);
    }

    #[test]
    fn multiline_constraints_accumulate() {
        let text = "Minimize\n obj: x + y\nSubject To\n long:\n   x\n   + y\n   >= 3\nEnd\n";
        let parsed = parse_lp(text).unwrap();
        assert_eq!(parsed.problem.rows.len(), 1);
        assert_eq!(parsed.problem.rows[0].terms.len(), 2);
        assert_eq!(parsed.problem.rows[0].rhs, 3.0);
    }

    #[test]
    fn solution_file_round_trip() {
        let text = write_solution(
            "optimal",
            Some(-12.5),
            &[("x_p1[0,1,0]".into(), 3.0), ("y1[0,1]".into(), 1.0)],
        );
        let parsed = parse_solution(&text).unwrap();
        assert_eq!(parsed.status.as_deref(), Some("optimal"));
        assert_eq!(parsed.objective, Some(-12.5));
        assert_eq!(parsed.values["x_p1[0,1,0]"], 3.0);
    }
}
