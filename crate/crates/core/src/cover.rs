//! Coverage goals and greedy test-suite generation.
//!
//! Goals are assertions of class `coverage` whose condition is the negated
//! reach condition, so a goal "fails" exactly when a path covers it.

use std::collections::BTreeSet;
use std::fmt::{self, Write};
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value as Json};

use crate::encode::Encoding;
use crate::eval::Value;
use crate::frontend::expr::{BinaryOp, Expr, ExprKind, UnaryOp};
use crate::frontend::types::{CType, Ident, SourceLocation};
use crate::goto::convert::negate;
use crate::goto::{expand_body, GotoModel, InstrKind, Instruction, PropertyClass, INITIALIZE, START};
use crate::interp::{self, InterpOptions};
use crate::results::decide::load_solver;
use crate::results::render::short_value;
use crate::results::trace::concrete;
use crate::results::DecideError;
use crate::sat::{Lit, SolveResult};
use crate::symex::{Equation, StepKind, UnwindPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    Location,
    Branch,
    Condition,
    Mcdc,
    Cover,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::Location => "location",
            Criterion::Branch => "branch",
            Criterion::Condition => "condition",
            Criterion::Mcdc => "mcdc",
            Criterion::Cover => "cover",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "location" => Criterion::Location,
            "branch" => Criterion::Branch,
            "condition" => Criterion::Condition,
            "mcdc" => Criterion::Mcdc,
            "cover" => Criterion::Cover,
            _ => return Err(format!("unknown coverage criterion `{s}'")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageGoal {
    pub id: String,
    pub criterion: Criterion,
    pub description: String,
    pub loc: Option<Arc<SourceLocation>>,
    pub function: Ident,
    pub reach: Expr,
}

/// A decision: a Boolean expression that selects between control paths.
struct Decision {
    expr: Expr,
    /// Conditions under which the decision is evaluated at all.
    guards: Vec<Expr>,
    /// Whether the decision is the guard of a goto.
    branch: bool,
}

fn is_logical(e: &Expr) -> bool {
    matches!(&e.kind, ExprKind::Conditional(_, a, b) if e.ty.is_bool() && (b.is_false() || a.is_true()))
}

fn ternaries(e: &Expr, guards: &mut Vec<Expr>, out: &mut Vec<Decision>) {
    match &e.kind {
        ExprKind::Conditional(c, a, b) => {
            ternaries(c, guards, out);
            let logical = is_logical(e);
            if !logical {
                out.push(Decision {
                    expr: (**c).clone(),
                    guards: guards.clone(),
                    branch: false,
                });
            }
            // `c && a` evaluates `a` only when `c` holds, `c || b` only when it fails.
            if !(logical && a.is_true()) {
                guards.push((**c).clone());
                ternaries(a, guards, out);
                guards.pop();
            }
            if !(logical && b.is_false()) {
                guards.push(negate(c));
                ternaries(b, guards, out);
                guards.pop();
            }
        }
        _ => {
            for child in e.children() {
                ternaries(child, guards, out);
            }
        }
    }
}

fn decisions(ins: &Instruction) -> Vec<Decision> {
    let mut out = Vec::new();
    if matches!(ins.kind, InstrKind::Decl(_) | InstrKind::Dead(_)) {
        return out;
    }
    for e in ins.exprs() {
        ternaries(e, &mut Vec::new(), &mut out);
    }
    if let InstrKind::Goto { guard, .. } = &ins.kind {
        if !guard.is_constant() {
            let expr = match &guard.kind {
                ExprKind::Unary(UnaryOp::Not, inner) => (**inner).clone(),
                _ => guard.clone(),
            };
            out.push(Decision {
                expr,
                guards: Vec::new(),
                branch: true,
            });
        }
    }
    out
}

/// The atomic conditions of a decision, without repetition.
pub fn atoms(e: &Expr) -> Vec<Expr> {
    fn walk(e: &Expr, out: &mut Vec<Expr>) {
        match &e.kind {
            ExprKind::Constant(_) => {}
            ExprKind::Unary(UnaryOp::Not, a) => walk(a, out),
            ExprKind::Binary(BinaryOp::And | BinaryOp::Or, a, b) => {
                walk(a, out);
                walk(b, out);
            }
            ExprKind::Conditional(c, a, b) if is_logical(e) => {
                walk(c, out);
                walk(a, out);
                walk(b, out);
            }
            _ => {
                if !out.contains(e) {
                    out.push(e.clone());
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(e, &mut out);
    out
}

fn truth(e: &Expr) -> Expr {
    if e.ty.is_bool() {
        e.clone()
    } else {
        Expr::binary(BinaryOp::Ne, e.clone(), Expr::constant(0, e.ty.clone()))
    }
}

fn substitute(e: &Expr, atom: &Expr, value: bool) -> Expr {
    if e == atom {
        return Expr::constant(value as u64, atom.ty.clone());
    }
    let mut out = e.clone();
    for child in out.children_mut() {
        *child = substitute(child, atom, value);
    }
    out
}

fn word(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Goals for one decision as (reach condition, description).
fn decision_goals(d: &Decision, criterion: Criterion) -> Vec<(Expr, String)> {
    let dexpr = truth(&d.expr);
    let mut goals = Vec::new();
    let outcome_goals = |goals: &mut Vec<(Expr, String)>| {
        for v in [true, false] {
            let reach = if v { dexpr.clone() } else { Expr::not(dexpr.clone()) };
            goals.push((reach, format!("decision `{}' {}", d.expr, word(v))));
        }
    };
    match criterion {
        Criterion::Branch if d.branch => outcome_goals(&mut goals),
        Criterion::Condition => {
            for a in atoms(&d.expr) {
                for v in [true, false] {
                    let t = truth(&a);
                    let reach = if v { t } else { Expr::not(t) };
                    goals.push((reach, format!("condition `{a}' {}", word(v))));
                }
            }
        }
        Criterion::Mcdc => {
            let atoms = atoms(&d.expr);
            if atoms.len() > 1 {
                outcome_goals(&mut goals);
            }
            for a in &atoms {
                let flips = Expr::binary(
                    BinaryOp::Ne,
                    truth(&substitute(&d.expr, a, true)),
                    truth(&substitute(&d.expr, a, false)),
                );
                for v in [true, false] {
                    let t = truth(a);
                    let value = if v { t } else { Expr::not(t) };
                    goals.push((
                        Expr::and(value, flips.clone()),
                        format!(
                            "condition `{a}' {} independently affecting decision `{}'",
                            word(v),
                            d.expr
                        ),
                    ));
                }
            }
        }
        _ => {}
    }
    goals
        .into_iter()
        .map(|(reach, desc)| {
            let mut all = d.guards.clone();
            all.push(reach);
            (Expr::conjunction(all), desc)
        })
        .collect()
}

fn goal(reach: &Expr, description: String, loc: Option<Arc<SourceLocation>>) -> Instruction {
    Instruction::assertion(negate(reach), PropertyClass::Coverage, description, loc)
}

/// Indices that start a basic block, excluding the final END_FUNCTION.
fn leaders(body: &[Instruction]) -> BTreeSet<usize> {
    let mut out = BTreeSet::from([0]);
    for (i, ins) in body.iter().enumerate() {
        if let InstrKind::Goto { target, .. } = ins.kind {
            out.insert(target);
            out.insert(i + 1);
        }
    }
    out.retain(|&i| i < body.len() && body[i].kind != InstrKind::EndFunction);
    out
}

fn block_descriptions(body: &[Instruction]) -> Vec<(usize, String)> {
    let starts: Vec<usize> = leaders(body).into_iter().collect();
    starts
        .iter()
        .enumerate()
        .map(|(n, &s)| {
            let end = starts.get(n + 1).copied().unwrap_or(body.len());
            let lines: Vec<u32> = body[s..end]
                .iter()
                .filter_map(|i| i.loc.as_ref().map(|l| l.line))
                .collect();
            let desc = match (lines.iter().min(), lines.iter().max()) {
                (Some(lo), Some(hi)) if lo != hi => format!("block {} (lines {lo}-{hi})", n + 1),
                (Some(lo), _) => format!("block {} (line {lo})", n + 1),
                _ => format!("block {}", n + 1),
            };
            (s, desc)
        })
        .collect()
}

/// Turns assertions into assumptions and adds the goals of a criterion.
pub fn instrument_goals(model: &mut GotoModel, criterion: Criterion) -> Vec<CoverageGoal> {
    for f in model.functions.values_mut() {
        if matches!(f.name.as_ref(), START | INITIALIZE) {
            continue;
        }
        let Some(body) = f.body.take() else { continue };
        let blocks = block_descriptions(&body);
        let mut old = 0;
        f.body = Some(expand_body(body, |_, mut ins| {
            let index = old;
            old += 1;
            let mut out = Vec::new();
            if criterion == Criterion::Location {
                if let Some((_, desc)) = blocks.iter().find(|(s, _)| *s == index) {
                    out.push((goal(&Expr::true_expr(), desc.clone(), ins.loc.clone()), false));
                }
            }
            for d in decisions(&ins) {
                for (reach, desc) in decision_goals(&d, criterion) {
                    out.push((goal(&reach, desc, ins.loc.clone()), false));
                }
            }
            if let (InstrKind::Assert(c), Some(p)) = (&ins.kind, &ins.property) {
                if p.class == PropertyClass::Coverage {
                    if criterion != Criterion::Cover {
                        ins.kind = InstrKind::Skip;
                        ins.property = None;
                    }
                } else {
                    ins.kind = InstrKind::Assume(c.clone());
                    ins.property = None;
                }
            }
            out.push((ins, false));
            out
        }));
    }
    model.number_properties();
    collect_goals(model, criterion)
}

fn collect_goals(model: &GotoModel, criterion: Criterion) -> Vec<CoverageGoal> {
    let mut out = Vec::new();
    for f in model.functions.values() {
        for ins in f.instructions() {
            if let (InstrKind::Assert(c), Some(p)) = (&ins.kind, &ins.property) {
                if p.class == PropertyClass::Coverage {
                    out.push(CoverageGoal {
                        id: p.id.clone(),
                        criterion,
                        description: p.description.clone(),
                        loc: ins.loc.clone(),
                        function: f.name.clone(),
                        reach: negate(c),
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestInput {
    pub name: String,
    pub values: Vec<(Value, CType)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestCase {
    /// Inputs grouped by iteration of the input loop.
    pub iterations: Vec<Vec<TestInput>>,
    /// Every nondeterministic choice on the path, for replay.
    pub nondet: Vec<Value>,
    /// Goals covered by the test, including ones covered before.
    pub goals: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalStatus {
    pub goal: CoverageGoal,
    pub covered_by: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestSuite {
    pub tests: Vec<TestCase>,
    pub goals: Vec<GoalStatus>,
    /// Solver calls. The final unsatisfiable call is skipped when every goal is covered.
    pub iterations: usize,
}

impl TestSuite {
    pub fn covered(&self) -> usize {
        self.goals.iter().filter(|g| !g.covered_by.is_empty()).count()
    }

    pub fn total(&self) -> usize {
        self.goals.len()
    }

    pub fn percentage(&self) -> f64 {
        if self.goals.is_empty() {
            100.0
        } else {
            100.0 * self.covered() as f64 / self.total() as f64
        }
    }

    pub fn is_covered(&self, id: &str) -> bool {
        self.goals.iter().any(|g| g.goal.id == id && !g.covered_by.is_empty())
    }
}

/// Splits inputs into iterations: a name seen again starts a new one.
fn group_iterations(inputs: Vec<TestInput>) -> Vec<Vec<TestInput>> {
    let mut out = Vec::new();
    let mut current: Vec<TestInput> = Vec::new();
    for i in inputs {
        if current.iter().any(|c| c.name == i.name) {
            out.push(std::mem::take(&mut current));
        }
        current.push(i);
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

/// Inputs and choices along the path selected by the model, up to the first
/// assumption it violates.
fn path_inputs(eq: &Equation, enc: &Encoding, model: &[bool]) -> (Vec<TestInput>, Vec<Value>) {
    let mut inputs = Vec::new();
    let mut nondet = Vec::new();
    for (step, se) in eq.steps.iter().zip(&enc.steps) {
        if !se.guard.eval(model) {
            continue;
        }
        match &step.kind {
            StepKind::Assumption(_) => {
                if se.condition.is_some_and(|c| !c.eval(model)) {
                    break;
                }
            }
            StepKind::Assignment { rhs, .. } => {
                if matches!(rhs.kind, ExprKind::FreeSymbol(_)) {
                    nondet.extend(se.lhs.as_ref().map(|v| concrete(v, model)));
                }
            }
            StepKind::Input { name, values } => inputs.push(TestInput {
                name: name.to_string(),
                values: values
                    .iter()
                    .zip(&se.values)
                    .map(|(e, v)| (concrete(v, model), e.ty.clone()))
                    .collect(),
            }),
            StepKind::Output { .. } | StepKind::Assertion { .. } => {}
        }
    }
    (inputs, nondet)
}

/// Greedy suite: each solver model covers at least one open goal, and all
/// goals it covers are recorded.
pub fn generate_tests(eq: &Equation, enc: &Encoding, goals: &[CoverageGoal]) -> Result<TestSuite, DecideError> {
    let mut status: Vec<GoalStatus> = goals
        .iter()
        .map(|g| GoalStatus {
            goal: g.clone(),
            covered_by: Vec::new(),
        })
        .collect();
    let indicator = |i: usize| enc.indicators.get(&goals[i].id).copied();
    let mut open: Vec<usize> = (0..goals.len()).filter(|&i| indicator(i).is_some()).collect();
    let mut tests = Vec::new();
    let mut iterations = 0;
    if !open.is_empty() {
        let mut solver = load_solver(enc);
        while !open.is_empty() {
            let act = Lit::positive(solver.new_var());
            let mut query = vec![!act];
            query.extend(open.iter().filter_map(|&i| indicator(i)));
            solver.add_clause(&query);
            iterations += 1;
            if solver.solve(&[act]) == SolveResult::Unsat {
                break;
            }
            if !solver.model_is_valid() || !enc.cnf().satisfied_by(solver.model()) {
                return Err(DecideError::InvalidModel);
            }
            let model = solver.model().to_vec();
            solver.add_clause(&[!act]);
            let n = tests.len();
            let mut covers = Vec::new();
            for (i, g) in status.iter_mut().enumerate() {
                if indicator(i).is_some_and(|l| l.eval(&model)) {
                    g.covered_by.push(n);
                    covers.push(g.goal.id.clone());
                }
            }
            open.retain(|&i| status[i].covered_by.is_empty());
            let (inputs, nondet) = path_inputs(eq, enc, &model);
            tests.push(TestCase {
                iterations: group_iterations(inputs),
                nondet,
                goals: covers,
            });
        }
    }
    Ok(TestSuite {
        tests,
        goals: status,
        iterations,
    })
}

/// Goals the reference interpreter reaches when replaying a test.
pub fn replay_goals(model: &GotoModel, test: &TestCase, policy: &UnwindPolicy) -> BTreeSet<String> {
    let opts = InterpOptions {
        policy: policy.clone(),
        cover_mode: true,
        ..InterpOptions::default()
    };
    interp::replay(model, &test.nondet, &opts)
        .failures
        .into_iter()
        .filter(|f| f.class == PropertyClass::Coverage)
        .map(|f| f.id)
        .collect()
}

fn input_text(i: &TestInput) -> String {
    let values: Vec<String> = i.values.iter().map(|(v, t)| short_value(v, t)).collect();
    format!("{}={}", i.name, values.join(" "))
}

/// The suite as `Test suite:` followed by one block per test.
pub fn suite_text(suite: &TestSuite) -> String {
    let mut out = String::from("Test suite:\n");
    for (n, t) in suite.tests.iter().enumerate() {
        if n > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "Test {}.", n + 1);
        for (k, it) in t.iterations.iter().enumerate() {
            let parts: Vec<String> = it.iter().map(input_text).collect();
            let _ = writeln!(out, "  (iteration {}) {}", k + 1, parts.join(", "));
        }
    }
    out
}

pub fn goals_text(suite: &TestSuite) -> String {
    let mut out = String::from("\n** coverage results:\n");
    for g in &suite.goals {
        let status = if g.covered_by.is_empty() { "FAILED" } else { "SATISFIED" };
        match &g.goal.loc {
            Some(l) => {
                let _ = writeln!(
                    out,
                    "[{}] file {} line {} {}: {status}",
                    g.goal.id, l.file, l.line, g.goal.description
                );
            }
            None => {
                let _ = writeln!(out, "[{}] {}: {status}", g.goal.id, g.goal.description);
            }
        }
    }
    let _ = writeln!(
        out,
        "\n** {} of {} covered ({:.1}%)\n** Used {} iterations",
        suite.covered(),
        suite.total(),
        suite.percentage(),
        suite.iterations
    );
    out
}

pub fn suite_json(suite: &TestSuite) -> Json {
    let goals: Vec<Json> = suite
        .goals
        .iter()
        .map(|g| {
            json!({
                "goal": g.goal.id,
                "criterion": g.goal.criterion.name(),
                "description": g.goal.description,
                "status": if g.covered_by.is_empty() { "failed" } else { "satisfied" },
                "coveredBy": g.covered_by.iter().map(|n| n + 1).collect::<Vec<_>>(),
                "sourceLocation": g.goal.loc.as_ref().map(|l| json!({
                    "file": l.file.as_ref(),
                    "line": l.line,
                    "function": g.goal.function.as_ref(),
                })),
            })
        })
        .collect();
    let tests: Vec<Json> = suite
        .tests
        .iter()
        .map(|t| {
            let iterations: Vec<Json> = t
                .iterations
                .iter()
                .map(|it| {
                    let mut m = serde_json::Map::new();
                    for i in it {
                        let vals: Vec<String> = i.values.iter().map(|(v, ty)| short_value(v, ty)).collect();
                        m.insert(i.name.clone(), json!(vals.join(" ")));
                    }
                    Json::Object(m)
                })
                .collect();
            json!({ "coveredGoals": t.goals, "inputs": iterations })
        })
        .collect();
    json!({
        "goals": goals,
        "tests": tests,
        "summary": {
            "covered": suite.covered(),
            "total": suite.total(),
            "iterations": suite.iterations,
        },
    })
}
