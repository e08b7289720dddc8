//! The DIMACS CNF exchange format.

use std::fmt::Write;

use super::{CnfFormula, Lit};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for DimacsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for DimacsError {}

/// Writes `c` comment lines, the header and one clause per line.
pub fn write(formula: &CnfFormula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p cnf {} {}", formula.num_vars, formula.clauses.len());
    for clause in &formula.clauses {
        for l in clause {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut formula = CnfFormula::new();
    let mut declared: Option<(u32, usize)> = None;
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let err = |message: &str| DimacsError {
            line: i + 1,
            message: message.to_string(),
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" || declared.is_some() {
                return Err(err("malformed header"));
            }
            let vars = parts[1].parse().map_err(|_| err("bad variable count"))?;
            let clauses = parts[2].parse().map_err(|_| err("bad clause count"))?;
            declared = Some((vars, clauses));
            formula.num_vars = vars;
            continue;
        }
        let Some((vars, _)) = declared else {
            return Err(err("clause before header"));
        };
        for tok in line.split_whitespace() {
            let n: i64 = tok.parse().map_err(|_| err("bad literal"))?;
            if n == 0 {
                formula.clauses.push(std::mem::take(&mut current));
            } else {
                if n.unsigned_abs() > vars as u64 {
                    return Err(err("literal exceeds variable count"));
                }
                current.push(Lit::from_dimacs(n));
            }
        }
    }
    if !current.is_empty() {
        formula.clauses.push(current);
    }
    match declared {
        None => Err(DimacsError {
            line: 0,
            message: "missing header".into(),
        }),
        Some((_, n)) if n != formula.clauses.len() => Err(DimacsError {
            line: 0,
            message: format!("header declares {n} clauses, found {}", formula.clauses.len()),
        }),
        Some(_) => Ok(formula),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_clause() {
        let mut f = CnfFormula::new();
        f.num_vars = 2;
        f.clauses.push(vec![Lit::from_dimacs(1), Lit::from_dimacs(-2)]);
        assert_eq!(write(&f, &[]), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(write(&CnfFormula::new(), &[]), "p cnf 0 0\n");
    }

    #[test]
    fn round_trip() {
        let text = "c hello\np cnf 3 2\n1 -3 0\n2 3\n-1 0\n";
        let f = parse(text).unwrap();
        assert_eq!(f.clauses.len(), 2);
        assert_eq!(parse(&write(&f, &[])).unwrap(), f);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(parse("p cnf 1 1\n2 0\n").is_err());
    }
}
