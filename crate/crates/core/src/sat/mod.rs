//! Propositional logic: literals, CNF formulas and the embedded solver.

pub mod dimacs;
mod heap;
pub mod solver;

use std::fmt;
use std::ops::Not;

pub use solver::{SolveResult, Solver, Stats};

pub type Var = u32;

/// A literal encoded as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, negated: bool) -> Lit {
        Lit(var << 1 | negated as u32)
    }

    pub fn positive(var: Var) -> Lit {
        Lit::new(var, false)
    }

    pub fn var(self) -> Var {
        self.0 >> 1
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// DIMACS numbering starts variables at 1.
    pub fn from_dimacs(n: i64) -> Lit {
        assert!(n != 0, "0 is not a DIMACS literal");
        Lit::new((n.unsigned_abs() - 1) as Var, n < 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64 + 1;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    /// Truth value of the literal under a total assignment.
    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var() as usize] != self.is_negated()
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

impl CnfFormula {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        for l in &clause {
            if l.var() >= self.num_vars {
                self.num_vars = l.var() + 1;
            }
        }
        self.clauses.push(clause);
    }

    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(model)))
    }
}

/// The Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ... at index `i` (from 0).
pub fn luby(mut i: u64) -> u64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_encoding() {
        let l = Lit::from_dimacs(-3);
        assert_eq!(l.var(), 2);
        assert!(l.is_negated());
        assert_eq!((!l).to_dimacs(), 3);
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}
