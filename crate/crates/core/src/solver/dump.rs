//! Text dump of a covering problem.
//!
//! ```text
//! p cover <vars> <clauses>
//! c <id> <key>
//! w <id> <weight>
//! l <id> <label>
//! x <id> <family> <member>
//! <id> <id> ... 0
//! ```
//!
//! Ids are 1-based. `w` lines appear only for weights other than 1; `c`,
//! `l` and `x` lines only for variables that carry them.

use std::fmt::Write;

use super::{CoveringProblem, SolverError};

pub fn dump(problem: &CoveringProblem) -> String {
    let mut out = String::new();
    let n = problem.num_vars();
    let _ = writeln!(out, "p cover {n} {}", problem.clauses().len());
    for v in 0..n {
        if let Some(key) = problem.key(v) {
            let _ = writeln!(out, "c {} {key}", v + 1);
        }
    }
    for v in 0..n {
        if problem.weight(v) != 1 {
            let _ = writeln!(out, "w {} {}", v + 1, problem.weight(v));
        }
    }
    for v in 0..n {
        if let Some(label) = problem.label(v) {
            let _ = writeln!(out, "l {} {label}", v + 1);
        }
    }
    for v in 0..n {
        if let Some((family, member)) = problem.exclusion(v) {
            let _ = writeln!(out, "x {} {family} {member}", v + 1);
        }
    }
    for clause in problem.clauses() {
        for v in clause {
            let _ = write!(out, "{} ", v + 1);
        }
        out.push_str("0\n");
    }
    out
}

fn err(line: usize, reason: impl Into<String>) -> SolverError {
    SolverError::Dump {
        line,
        reason: reason.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, text: Option<&str>, what: &str) -> Result<T, SolverError> {
    let text = text.ok_or_else(|| err(line, format!("missing {what}")))?;
    text.parse()
        .map_err(|_| err(line, format!("invalid {what} `{text}`")))
}

fn var_id(line: usize, text: Option<&str>, n: usize) -> Result<usize, SolverError> {
    let id: usize = number(line, text, "variable id")?;
    if id == 0 || id > n {
        return Err(err(line, format!("variable id {id} out of range 1..={n}")));
    }
    Ok(id - 1)
}

/// Parses the output of [`dump`].
pub fn parse_dump(text: &str) -> Result<CoveringProblem, SolverError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (header_line, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| err(1, "missing `p cover` header"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("p") || parts.next() != Some("cover") {
        return Err(err(header_line, "expected `p cover <vars> <clauses>`"));
    }
    let n: usize = number(header_line, parts.next(), "variable count")?;
    let m: usize = number(header_line, parts.next(), "clause count")?;

    let mut clauses = Vec::with_capacity(m);
    let mut weights = Vec::new();
    let mut labels = Vec::new();
    let mut exclusions = Vec::new();
    let mut keys = Vec::new();
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.clone().next() {
            Some("c") => {
                parts.next();
                let v = var_id(no, parts.next(), n)?;
                let key = line.splitn(3, ' ').nth(2).unwrap_or("").trim();
                keys.push((v, key.to_string()));
            }
            Some("w") => {
                parts.next();
                let v = var_id(no, parts.next(), n)?;
                weights.push((v, number(no, parts.next(), "weight")?));
            }
            Some("l") => {
                parts.next();
                let v = var_id(no, parts.next(), n)?;
                labels.push((v, number(no, parts.next(), "label")?));
            }
            Some("x") => {
                parts.next();
                let v = var_id(no, parts.next(), n)?;
                let family = number(no, parts.next(), "family")?;
                exclusions.push((v, family, number(no, parts.next(), "member")?));
            }
            _ => {
                let mut clause = Vec::new();
                let mut terminated = false;
                for tok in parts {
                    if terminated {
                        return Err(err(no, "text after clause terminator 0"));
                    }
                    if tok == "0" {
                        terminated = true;
                    } else {
                        clause.push(var_id(no, Some(tok), n)?);
                    }
                }
                if !terminated {
                    return Err(err(no, "clause not terminated by 0"));
                }
                if clause.is_empty() {
                    return Err(err(no, "empty clause"));
                }
                clauses.push(clause);
            }
        }
    }
    if clauses.len() != m {
        return Err(err(
            header_line,
            format!("header announces {m} clauses, found {}", clauses.len()),
        ));
    }
    let mut problem = CoveringProblem::new(n, clauses)?;
    for (v, w) in weights {
        problem.set_weight(v, w)?;
    }
    for (v, l) in labels {
        problem.set_label(v, l)?;
    }
    for (v, f, m) in exclusions {
        problem.set_exclusion(v, f, m)?;
    }
    for (v, k) in keys {
        problem.set_key(v, k)?;
    }
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut p = CoveringProblem::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        p.set_weight(1, 0).unwrap();
        p.set_key(0, "jdk:java8:8:java.util.regex.Pattern").unwrap();
        p.set_label(2, 4).unwrap();
        p.set_exclusion(0, 1, 2).unwrap();
        let text = dump(&p);
        assert!(text.starts_with("p cover 3 2\n"));
        assert!(text.contains("c 1 jdk:java8:8:java.util.regex.Pattern\n"));
        assert!(text.contains("w 2 0\n"));
        assert!(text.contains("1 2 0\n3 0\n"));
        assert_eq!(parse_dump(&text).unwrap(), p);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_dump("").is_err());
        assert!(parse_dump("p cnf 1 1\n1 0\n").is_err());
        assert!(parse_dump("p cover 1 1\n2 0\n").is_err());
        assert!(parse_dump("p cover 1 1\n1\n").is_err());
        assert!(parse_dump("p cover 1 2\n1 0\n").is_err());
        assert!(parse_dump("p cover 1 1\n0\n").is_err());
    }
}
