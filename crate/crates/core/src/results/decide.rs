//! Iterative decision of all properties with one incremental solver.

use std::time::{Duration, Instant};

use crate::encode::Encoding;
use crate::sat::{Lit, SolveResult, Solver};
use crate::symex::Equation;

use super::trace::build_trace;
use super::{DecideError, PropertyResult, Status, VerificationResult};

pub fn load_solver(enc: &Encoding) -> Solver {
    let mut solver = Solver::new();
    solver.ensure_vars(enc.cnf().num_vars);
    for c in &enc.cnf().clauses {
        solver.add_clause(c);
    }
    solver
}

/// Solves for the disjunction of the undecided indicators until UNSAT. Every
/// indicator true in a model fails; whatever is left at the end holds.
pub fn decide_properties(eq: &Equation, enc: &Encoding) -> Result<VerificationResult, DecideError> {
    let start = Instant::now();
    let mut results: Vec<PropertyResult> = eq
        .properties
        .iter()
        .map(|p| PropertyResult {
            property: p.clone(),
            status: Status::Success,
            trace: None,
        })
        .collect();
    let mut iterations = 0;
    let mut solve_time = Duration::ZERO;
    let (num_vars, num_clauses) = (enc.cnf().num_vars, enc.cnf().clauses.len());
    if eq.vccs_remaining > 0 {
        let mut solver = load_solver(enc);
        let mut open: Vec<usize> = (0..results.len()).collect();
        loop {
            let act = Lit::positive(solver.new_var());
            let mut query = vec![!act];
            query.extend(open.iter().map(|&i| enc.indicators[&results[i].property.id]));
            solver.add_clause(&query);
            iterations += 1;
            let answer = solver.solve(&[act]);
            solve_time = solver.stats.solve_time;
            if answer == SolveResult::Unsat {
                break;
            }
            if !solver.model_is_valid() || !enc.cnf().satisfied_by(solver.model()) {
                return Err(DecideError::InvalidModel);
            }
            let model = solver.model().to_vec();
            solver.add_clause(&[!act]);
            let mut still_open = Vec::new();
            for i in open {
                let id = results[i].property.id.clone();
                if enc.indicators[&id].eval(&model) {
                    let trace = build_trace(eq, enc, &id, &model).ok_or(DecideError::NoViolatingStep(id))?;
                    results[i].status = Status::Failure;
                    results[i].trace = Some(trace);
                } else {
                    still_open.push(i);
                }
            }
            open = still_open;
        }
    }
    for p in &eq.unreachable_properties {
        if !results.iter().any(|r| r.property.id == p.id) {
            results.push(PropertyResult {
                property: p.clone(),
                status: Status::Success,
                trace: None,
            });
        }
    }
    super::sort_results(&mut results);
    Ok(VerificationResult {
        results,
        iterations,
        num_vars,
        num_clauses,
        solve_time,
        runtime: start.elapsed(),
    })
}
