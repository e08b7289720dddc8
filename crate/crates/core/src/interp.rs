//! Concrete reference interpreter for GOTO models.
//!
//! Nondeterministic choices are drawn from a caller-supplied source in the
//! order in which symbolic execution introduces them, so a counterexample
//! or test can be replayed from its recorded choices.

use std::collections::HashMap;
use std::sync::Arc;

use crate::eval::{self, Fault, Value};
use crate::frontend::expr::{mask, BinaryOp, Expr, ExprKind, UnaryOp};
use crate::frontend::types::{CType, Ident, SourceLocation};
use crate::goto::{return_value_name, GotoModel, InstrKind, PropertyClass, START};
use crate::symex::{UnwindMode, UnwindPolicy, GETCHAR};

#[derive(Clone, Debug)]
pub struct InterpOptions {
    pub policy: UnwindPolicy,
    pub no_assumptions: bool,
    /// Treat coverage goals as checks (reaching one records it).
    pub cover_mode: bool,
    pub max_steps: u64,
}

impl Default for InterpOptions {
    fn default() -> Self {
        InterpOptions {
            policy: UnwindPolicy::default(),
            no_assumptions: false,
            cover_mode: false,
            max_steps: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    /// An assumption was false; the run is not a valid execution.
    AssumptionFailed,
    /// The path left the unwinding bound or the depth limit.
    Bounded,
    StepLimit,
    Fault(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub id: String,
    pub class: PropertyClass,
    pub loc: Option<Arc<SourceLocation>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub outcome: Outcome,
    /// Failed checks in execution order; a property may fail repeatedly.
    pub failures: Vec<Failure>,
    pub inputs: Vec<(String, Vec<Value>)>,
    pub outputs: Vec<(String, Vec<Value>)>,
    pub nondet_used: usize,
}

impl Run {
    pub fn failed(&self, id: &str) -> bool {
        self.failures.iter().any(|f| f.id == id)
    }
}

struct Frame {
    function: Ident,
    pc: usize,
    locals: HashMap<Ident, Value>,
    counters: HashMap<usize, u32>,
    backjumped_to: Option<usize>,
}

struct Interp<'a> {
    model: &'a GotoModel,
    opts: &'a InterpOptions,
    globals: HashMap<Ident, Value>,
    frames: Vec<Frame>,
    nondet: &'a mut dyn FnMut(&CType) -> Value,
    run: Run,
    function_ids: HashMap<Ident, u64>,
    heads: HashMap<Ident, HashMap<usize, Vec<usize>>>,
    loop_numbers: HashMap<Ident, HashMap<usize, usize>>,
}

enum Stop {
    Outcome(Outcome),
}

impl From<Fault> for Stop {
    fn from(f: Fault) -> Self {
        Stop::Outcome(Outcome::Fault(format!("{f:?}")))
    }
}

/// Runs the model from its entry point.
pub fn run(model: &GotoModel, nondet: &mut dyn FnMut(&CType) -> Value, opts: &InterpOptions) -> Run {
    let mut heads = HashMap::new();
    let mut loop_numbers = HashMap::new();
    for f in model.functions.values() {
        let mut h: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut n = HashMap::new();
        for l in f.loops() {
            h.entry(l.head).or_default().push(l.number);
            n.insert(l.backjump, l.number);
        }
        heads.insert(f.name.clone(), h);
        loop_numbers.insert(f.name.clone(), n);
    }
    let mut it = Interp {
        model,
        opts,
        globals: HashMap::new(),
        frames: Vec::new(),
        nondet,
        run: Run {
            outcome: Outcome::Completed,
            failures: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            nondet_used: 0,
        },
        function_ids: model
            .functions
            .keys()
            .enumerate()
            .map(|(i, k)| (k.clone(), i as u64 + 1))
            .collect(),
        heads,
        loop_numbers,
    };
    let entry = model.entry.clone().unwrap_or_else(|| Arc::from(START));
    it.frames.push(Frame {
        function: entry,
        pc: 0,
        locals: HashMap::new(),
        counters: HashMap::new(),
        backjumped_to: None,
    });
    let outcome = match it.execute() {
        Ok(()) => Outcome::Completed,
        Err(Stop::Outcome(o)) => o,
    };
    it.run.outcome = outcome;
    it.run
}

/// Replays recorded nondeterministic choices; missing ones are zero.
pub fn replay(model: &GotoModel, choices: &[Value], opts: &InterpOptions) -> Run {
    let mut next = 0;
    let mut source = |ty: &CType| {
        let v = choices.get(next).cloned().unwrap_or_else(|| Value::zero(ty));
        next += 1;
        v
    };
    run(model, &mut source, opts)
}

fn scalar(v: &Value) -> u64 {
    match v {
        Value::Scalar(x) => *x,
        Value::Array(_) => 0,
    }
}

impl Interp<'_> {
    fn is_static(&self, name: &str) -> bool {
        self.model
            .symtab
            .get(name)
            .is_some_and(|s| s.is_static_lifetime || s.is_function)
    }

    fn fresh(&mut self, ty: &CType) -> Value {
        self.run.nondet_used += 1;
        let v = (self.nondet)(ty);
        normalize(v, ty)
    }

    fn load(&self, name: &Ident, ty: &CType) -> Value {
        let found = if self.is_static(name) {
            self.globals.get(name)
        } else {
            self.frames.last().and_then(|f| f.locals.get(name))
        };
        found.cloned().unwrap_or_else(|| Value::zero(ty))
    }

    fn store(&mut self, name: &Ident, v: Value) {
        if self.is_static(name) {
            self.globals.insert(name.clone(), v);
        } else if let Some(f) = self.frames.last_mut() {
            f.locals.insert(name.clone(), v);
        }
    }

    fn eval(&mut self, e: &Expr) -> Result<Value, Stop> {
        let ty = &e.ty;
        Ok(match &e.kind {
            ExprKind::Constant(v) => Value::Scalar(*v),
            ExprKind::Symbol(n) => self.load(n, ty),
            ExprKind::Nondet => self.fresh(ty),
            ExprKind::Unary(op, a) => {
                let x = scalar(&self.eval(a)?);
                let t = if *op == UnaryOp::Not { &a.ty } else { ty };
                Value::Scalar(eval::unary(*op, t, x))
            }
            ExprKind::Binary(BinaryOp::And, a, b) => {
                let r = scalar(&self.eval(a)?) != 0 && scalar(&self.eval(b)?) != 0;
                Value::Scalar(r as u64)
            }
            ExprKind::Binary(BinaryOp::Or, a, b) => {
                let r = scalar(&self.eval(a)?) != 0 || scalar(&self.eval(b)?) != 0;
                Value::Scalar(r as u64)
            }
            ExprKind::Binary(op, a, b) => {
                let x = scalar(&self.eval(a)?);
                let y = scalar(&self.eval(b)?);
                Value::Scalar(eval::binary(*op, x, &a.ty, y, &b.ty)?)
            }
            ExprKind::Index(a, i) => {
                let arr = self.eval(a)?;
                let idx = eval::to_i128(scalar(&self.eval(i)?), &i.ty);
                match arr {
                    Value::Array(items) if idx >= 0 && (idx as usize) < items.len() => items[idx as usize].clone(),
                    _ => return Err(Fault::OutOfBounds.into()),
                }
            }
            ExprKind::Typecast(a) => {
                let v = self.eval(a)?;
                match v {
                    Value::Scalar(x) => Value::Scalar(eval::cast(x, &a.ty, ty)),
                    arr => arr,
                }
            }
            ExprKind::Conditional(c, a, b) => {
                if scalar(&self.eval(c)?) != 0 {
                    self.eval(a)?
                } else {
                    self.eval(b)?
                }
            }
            ExprKind::ArrayLit(items) => {
                let mut out = Vec::with_capacity(items.len());
                for i in items {
                    out.push(self.eval(i)?);
                }
                Value::Array(out)
            }
            ExprKind::With(a, i, v) => {
                let arr = self.eval(a)?;
                let idx = eval::to_i128(scalar(&self.eval(i)?), &i.ty);
                let v = self.eval(v)?;
                update(arr, idx, v)
            }
            ExprKind::Overflow(op, a, b) => {
                let x = scalar(&self.eval(a)?);
                let y = scalar(&self.eval(b)?);
                Value::Scalar(eval::overflows(*op, &a.ty, x, y) as u64)
            }
            ExprKind::FunctionAddress(n) => Value::Scalar(self.function_ids.get(n).copied().unwrap_or(0)),
            ExprKind::StringLit(_) => Value::Scalar(0),
            ExprKind::SsaSymbol { .. } | ExprKind::FreeSymbol(_) | ExprKind::Assign { .. } | ExprKind::Call(..) => {
                return Err(Stop::Outcome(Outcome::Fault(format!("unexpected expression {e}"))));
            }
        })
    }

    fn assign(&mut self, lhs: &Expr, v: Value) -> Result<(), Stop> {
        match &lhs.kind {
            ExprKind::Symbol(n) => {
                self.store(n, v);
                Ok(())
            }
            ExprKind::Index(a, i) => {
                let idx = eval::to_i128(scalar(&self.eval(i)?), &i.ty);
                let arr = self.eval(a)?;
                let updated = update(arr, idx, v);
                self.assign(a, updated)
            }
            _ => Err(Stop::Outcome(Outcome::Fault(format!("unsupported lvalue {lhs}")))),
        }
    }

    fn fail(&mut self, id: String, class: PropertyClass, loc: Option<Arc<SourceLocation>>) {
        self.run.failures.push(Failure { id, class, loc });
    }

    fn execute(&mut self) -> Result<(), Stop> {
        let mut steps = 0u64;
        loop {
            steps += 1;
            if steps > self.opts.max_steps {
                return Err(Stop::Outcome(Outcome::StepLimit));
            }
            if self.opts.policy.depth.is_some_and(|d| steps > d as u64) {
                return Err(Stop::Outcome(Outcome::Bounded));
            }
            let (fname, pc) = {
                let f = self.frames.last().expect("frame");
                (f.function.clone(), f.pc)
            };
            let model = self.model;
            let body = model.functions[&fname].body.as_ref().expect("body");
            let ins = &body[pc];
            if let Some(numbers) = self.heads[&fname].get(&pc) {
                let frame = self.frames.last_mut().unwrap();
                if frame.backjumped_to != Some(pc) {
                    for n in numbers {
                        frame.counters.remove(n);
                    }
                }
            }
            self.frames.last_mut().unwrap().backjumped_to = None;
            match &ins.kind {
                InstrKind::Decl(sym) => {
                    let v = self.fresh(&sym.ty);
                    self.assign(sym, v)?;
                    self.advance();
                }
                InstrKind::Dead(_) | InstrKind::Skip => self.advance(),
                InstrKind::Assign { lhs, rhs } => {
                    let v = self.eval(rhs)?;
                    self.assign(lhs, v)?;
                    self.advance();
                }
                InstrKind::Assume(c) => {
                    if !self.opts.no_assumptions && scalar(&self.eval(c)?) == 0 {
                        return Err(Stop::Outcome(Outcome::AssumptionFailed));
                    }
                    self.advance();
                }
                InstrKind::Assert(c) => {
                    let class = ins.property.as_ref().map_or(PropertyClass::Assertion, |p| p.class);
                    if (class != PropertyClass::Coverage || self.opts.cover_mode) && scalar(&self.eval(c)?) == 0 {
                        let id = ins
                            .property
                            .as_ref()
                            .map_or_else(|| format!("{fname}.assertion.{pc}"), |p| p.id.clone());
                        self.fail(id, class, ins.loc.clone());
                    }
                    self.advance();
                }
                InstrKind::Goto { guard, target } => {
                    let taken = scalar(&self.eval(guard)?) != 0;
                    if *target > pc {
                        if taken {
                            self.frames.last_mut().unwrap().pc = *target;
                        } else {
                            self.advance();
                        }
                    } else if taken {
                        self.backjump(&fname, pc, *target, ins.loc.clone())?;
                    } else {
                        self.advance();
                    }
                }
                InstrKind::Call { function, args, .. } => {
                    let ExprKind::FunctionAddress(callee) = &function.kind else {
                        return Err(Stop::Outcome(Outcome::Fault("indirect call".into())));
                    };
                    let mut values = Vec::with_capacity(args.len());
                    for a in args {
                        values.push(self.eval(a)?);
                    }
                    self.call(callee.clone(), values, ins.loc.clone())?;
                }
                InstrKind::Return(_) => {
                    return Err(Stop::Outcome(Outcome::Fault("RETURN instruction".into())));
                }
                InstrKind::Input { name, args } | InstrKind::Output { name, args } => {
                    let mut values = Vec::with_capacity(args.len());
                    for a in args {
                        values.push(self.eval(a)?);
                    }
                    let entry = (name.to_string(), values);
                    if matches!(ins.kind, InstrKind::Input { .. }) {
                        self.run.inputs.push(entry);
                    } else {
                        self.run.outputs.push(entry);
                    }
                    self.advance();
                }
                InstrKind::EndFunction => {
                    self.frames.pop();
                    if self.frames.is_empty() {
                        return Ok(());
                    }
                }
            }
        }
    }

    fn advance(&mut self) {
        self.frames.last_mut().unwrap().pc += 1;
    }

    fn backjump(
        &mut self,
        fname: &Ident,
        pc: usize,
        head: usize,
        loc: Option<Arc<SourceLocation>>,
    ) -> Result<(), Stop> {
        let number = self.loop_numbers[fname][&pc];
        let frame = self.frames.last_mut().unwrap();
        let count = frame.counters.entry(number).or_insert(0);
        *count += 1;
        let count = *count;
        let take = self.opts.policy.bound(fname, number).is_none_or(|b| count < b);
        if take {
            frame.pc = head;
            frame.backjumped_to = Some(head);
            return Ok(());
        }
        match self.opts.policy.mode {
            UnwindMode::PartialLoops => {
                self.advance();
                Ok(())
            }
            UnwindMode::Assertions => {
                self.fail(format!("{fname}.unwind.{number}"), PropertyClass::Unwind, loc);
                Err(Stop::Outcome(Outcome::Bounded))
            }
            UnwindMode::Assumptions => Err(Stop::Outcome(Outcome::Bounded)),
        }
    }

    fn call(&mut self, callee: Ident, values: Vec<Value>, loc: Option<Arc<SourceLocation>>) -> Result<(), Stop> {
        let Some(f) = self.model.function(&callee) else {
            return Err(Stop::Outcome(Outcome::Fault(format!("unknown function {callee}"))));
        };
        let ret = f.return_type();
        if f.body.is_none() {
            if ret != CType::Void {
                let v = self.fresh(&ret);
                let rv: Ident = Arc::from(return_value_name(&callee));
                self.globals.insert(rv, v.clone());
                if callee.as_ref() == GETCHAR {
                    self.run.inputs.push((GETCHAR.to_string(), vec![v]));
                }
            }
            self.advance();
            return Ok(());
        }
        let active = self.frames.iter().filter(|fr| fr.function == callee).count() as u32;
        if active > 0 {
            if let Some(b) = self.opts.policy.global_bound {
                if active >= b {
                    return match self.opts.policy.mode {
                        UnwindMode::PartialLoops => {
                            self.advance();
                            Ok(())
                        }
                        UnwindMode::Assertions => {
                            self.fail(format!("{callee}.recursion"), PropertyClass::Unwind, loc);
                            Err(Stop::Outcome(Outcome::Bounded))
                        }
                        UnwindMode::Assumptions => Err(Stop::Outcome(Outcome::Bounded)),
                    };
                }
            }
        }
        self.advance();
        let mut frame = Frame {
            function: callee.clone(),
            pc: 0,
            locals: HashMap::new(),
            counters: HashMap::new(),
            backjumped_to: None,
        };
        for (p, v) in f.params.iter().zip(values) {
            frame.locals.insert(p.clone(), v);
        }
        self.frames.push(frame);
        Ok(())
    }
}

fn update(arr: Value, idx: i128, v: Value) -> Value {
    match arr {
        Value::Array(mut items) => {
            if idx >= 0 && (idx as usize) < items.len() {
                items[idx as usize] = v;
            }
            Value::Array(items)
        }
        other => other,
    }
}

/// Masks scalars to the width of their type and shapes arrays.
pub fn normalize(v: Value, ty: &CType) -> Value {
    match (v, ty) {
        (Value::Scalar(_), CType::Array { .. }) => Value::zero(ty),
        (Value::Scalar(x), _) => Value::Scalar(mask(x, ty.width().unwrap_or(64))),
        (Value::Array(items), CType::Array { element, size }) => {
            let mut items: Vec<Value> = items.into_iter().map(|i| normalize(i, element)).collect();
            items.resize(*size as usize, Value::zero(element));
            Value::Array(items)
        }
        (Value::Array(_), _) => Value::Scalar(0),
    }
}
