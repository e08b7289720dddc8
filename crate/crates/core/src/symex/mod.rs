//! Symbolic execution with bounded loop unwinding.

pub mod equation;
pub mod slice;
pub mod state;
pub mod vcc;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::frontend::expr::{Expr, ExprKind};
use crate::frontend::types::{CType, Ident, SourceLocation};
use crate::goto::convert::negate;
use crate::goto::{return_value_name, GotoModel, InstrKind, Loop, PropertyClass, START};
use crate::simplify::simplify;

pub use equation::{Equation, PropertyRef, Step, StepKind};
use state::{Frame, State};

/// Instruction steps one loop may take before automatic unwinding gives up.
pub const LOOP_BUDGET: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UnwindMode {
    #[default]
    Assumptions,
    Assertions,
    PartialLoops,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnwindPolicy {
    pub global_bound: Option<u32>,
    /// Keyed by `function.number`.
    pub per_loop: HashMap<String, u32>,
    pub depth: Option<usize>,
    pub mode: UnwindMode,
    /// Instruction steps one loop may take when no bound applies.
    pub budget: u64,
}

impl Default for UnwindPolicy {
    fn default() -> Self {
        UnwindPolicy {
            global_bound: None,
            per_loop: HashMap::new(),
            depth: None,
            mode: UnwindMode::default(),
            budget: LOOP_BUDGET,
        }
    }
}

impl UnwindPolicy {
    pub fn bound(&self, function: &str, number: usize) -> Option<u32> {
        self.per_loop
            .get(&format!("{function}.{number}"))
            .copied()
            .or(self.global_bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymexOptions {
    pub policy: UnwindPolicy,
    pub no_assumptions: bool,
    /// Keep coverage goals as assertions.
    pub cover_mode: bool,
    pub no_library: bool,
    pub slice: bool,
}

impl Default for SymexOptions {
    fn default() -> Self {
        SymexOptions {
            policy: UnwindPolicy::default(),
            no_assumptions: false,
            cover_mode: false,
            no_library: false,
            slice: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymexError {
    Unbounded {
        loop_id: String,
        loc: Option<Arc<SourceLocation>>,
    },
    Malformed(String),
}

impl fmt::Display for SymexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymexError::Unbounded { loop_id, loc } => {
                write!(f, "unwinding of loop {loop_id}")?;
                if let Some(l) = loc {
                    write!(f, " ({l})")?;
                }
                write!(
                    f,
                    " does not stop on its own; give a bound with --unwind or --unwindset"
                )
            }
            SymexError::Malformed(m) => write!(f, "malformed GOTO program: {m}"),
        }
    }
}

impl std::error::Error for SymexError {}

pub const GETCHAR: &str = "getchar";
const GUARD_SYMBOL: &str = "__CPROVER_guard";
/// Path conditions longer than twice this are folded into a guard symbol.
const GUARD_FOLD: usize = 8;

struct FunctionInfo {
    loops: Vec<Loop>,
    /// Loop numbers by backjump index.
    backjumps: HashMap<usize, usize>,
    /// Loop numbers by head index.
    heads: HashMap<usize, Vec<usize>>,
}

struct Symex<'a> {
    model: &'a GotoModel,
    opts: &'a SymexOptions,
    eq: Equation,
    next_version: HashMap<(Ident, u32), u32>,
    activations: HashMap<Ident, u32>,
    pending: BTreeMap<(usize, usize), Vec<State>>,
    statics: HashSet<Ident>,
    info: HashMap<Ident, FunctionInfo>,
    seen: HashSet<String>,
    types: HashMap<Ident, CType>,
    folds: HashMap<Vec<Expr>, Expr>,
}

pub fn symex(model: &GotoModel, opts: &SymexOptions) -> Result<Equation, SymexError> {
    let entry = model.entry.clone().unwrap_or_else(|| Arc::from(START));
    if model.function(&entry).and_then(|f| f.body.as_ref()).is_none() {
        return Err(SymexError::Malformed(format!("entry function `{entry}' has no body")));
    }
    let statics = model
        .symtab
        .iter()
        .filter(|s| s.is_static_lifetime || s.is_function)
        .map(|s| s.name.clone())
        .collect();
    let info = model
        .functions
        .values()
        .map(|f| {
            let loops = f.loops();
            let backjumps = loops.iter().map(|l| (l.backjump, l.number)).collect();
            let mut heads: HashMap<usize, Vec<usize>> = HashMap::new();
            for l in &loops {
                heads.entry(l.head).or_default().push(l.number);
            }
            (
                f.name.clone(),
                FunctionInfo {
                    loops,
                    backjumps,
                    heads,
                },
            )
        })
        .collect();
    let mut s = Symex {
        model,
        opts,
        eq: Equation::default(),
        next_version: HashMap::new(),
        activations: HashMap::new(),
        pending: BTreeMap::new(),
        statics,
        info,
        seen: HashSet::new(),
        types: HashMap::new(),
        folds: HashMap::new(),
    };
    s.run(entry)?;
    let mut eq = s.eq;
    eq.steps_before_slicing = eq.steps.len();
    if opts.slice {
        eq.sliced_assignments = slice::slice(&mut eq);
    }
    Ok(eq)
}

impl Symex<'_> {
    fn run(&mut self, entry: Ident) -> Result<(), SymexError> {
        let level = self.activate(&entry);
        let mut cur = Some(State::new(Frame::new(entry, level)));
        loop {
            let key = match &cur {
                Some(st) => (st.frames.len(), st.top().pc),
                None => {
                    let Some(depth) = self.pending.keys().map(|k| k.0).max() else {
                        break;
                    };
                    *self.pending.keys().find(|k| k.0 == depth).expect("pending state")
                }
            };
            if let Some(list) = self.pending.remove(&key) {
                cur = Some(self.merge(cur, list));
            }
            let Some(mut st) = cur.take() else { continue };
            if st.is_dead() {
                continue;
            }
            if st.frames.is_empty() {
                break;
            }
            let done = self.step(&mut st)?;
            if done {
                break;
            }
            if !st.is_dead() {
                cur = Some(st);
            }
        }
        Ok(())
    }

    fn activate(&mut self, f: &Ident) -> u32 {
        let n = self.activations.entry(f.clone()).or_insert(0);
        *n += 1;
        *n - 1
    }

    fn level_of(&self, st: &State, name: &Ident) -> u32 {
        if self.statics.contains(name) {
            0
        } else {
            st.top().level
        }
    }

    fn fresh_free(&mut self, ty: &CType) -> Expr {
        let n = self.eq.free_symbols;
        self.eq.free_symbols += 1;
        Expr::new(ExprKind::FreeSymbol(n), ty.clone())
    }

    /// Renames an expression to SSA form in the given state.
    fn read(&mut self, st: &State, e: &Expr) -> Expr {
        let renamed = e.clone().map(&mut |x| match &x.kind {
            ExprKind::Symbol(name) => {
                let level = self.level_of(st, name);
                let key = (name.clone(), level);
                match st.values.get(&key) {
                    Some(v) => v.clone(),
                    None => Expr::new(
                        ExprKind::SsaSymbol {
                            name: name.clone(),
                            level,
                            version: st.versions.get(&key).copied().unwrap_or(0),
                        },
                        x.ty.clone(),
                    ),
                }
            }
            ExprKind::Nondet => self.fresh_free(&x.ty),
            _ => x,
        });
        simplify(renamed)
    }

    fn guard_expr(st: &State) -> Expr {
        simplify(Expr::conjunction(st.guard.iter().cloned()))
    }

    fn emit(&mut self, st: &State, kind: StepKind, loc: Option<Arc<SourceLocation>>) {
        self.eq.steps.push(Step {
            kind,
            guard: Self::guard_expr(st),
            loc,
        });
    }

    fn new_version(&mut self, key: &(Ident, u32)) -> u32 {
        let v = self.next_version.entry(key.clone()).or_insert(0);
        *v += 1;
        *v
    }

    /// Assigns an already renamed value to an lvalue.
    fn assign(
        &mut self,
        st: &mut State,
        lhs: &Expr,
        rhs: Expr,
        display: Expr,
        hidden: bool,
        loc: Option<Arc<SourceLocation>>,
    ) {
        match &lhs.kind {
            ExprKind::Symbol(name) => {
                let level = self.level_of(st, name);
                let key = (name.clone(), level);
                self.types.entry(name.clone()).or_insert_with(|| lhs.ty.clone());
                let version = self.new_version(&key);
                st.versions.insert(key.clone(), version);
                let keep =
                    rhs.is_constant_tree() || matches!(rhs.kind, ExprKind::ArrayLit(_) | ExprKind::FunctionAddress(_));
                if keep {
                    st.values.insert(key, rhs.clone());
                } else {
                    st.values.remove(&key);
                }
                let ssa = Expr::new(
                    ExprKind::SsaSymbol {
                        name: name.clone(),
                        level,
                        version,
                    },
                    lhs.ty.clone(),
                );
                let hidden = hidden || name.starts_with("__CPROVER");
                self.emit(
                    st,
                    StepKind::Assignment {
                        lhs: ssa,
                        rhs,
                        display,
                        hidden,
                    },
                    loc,
                );
            }
            ExprKind::Index(a, i) => {
                let idx = self.read(st, i);
                let whole = self.read(st, a);
                let updated = simplify(Expr::with(whole, idx, rhs));
                self.assign(st, a, updated, display, hidden, loc);
            }
            _ => {
                self.emit(st, StepKind::Assumption(Expr::false_expr()), loc);
            }
        }
    }

    /// The assigned lvalue with its indexes renamed, for traces.
    fn display_lvalue(&mut self, st: &State, lhs: &Expr) -> Expr {
        match &lhs.kind {
            ExprKind::Index(a, i) => {
                let a = self.display_lvalue(st, a);
                let i = self.read(st, i);
                Expr::index(a, i)
            }
            _ => lhs.clone(),
        }
    }

    fn record_property(&mut self, p: &Arc<PropertyRef>) {
        if self.seen.insert(p.id.clone()) {
            self.eq.properties.push(p.clone());
        }
    }

    fn assertion(&mut self, st: &State, cond: Expr, property: Arc<PropertyRef>, loc: Option<Arc<SourceLocation>>) {
        self.record_property(&property);
        self.eq.vccs_generated += 1;
        if cond.is_true() {
            return;
        }
        self.eq.vccs_remaining += 1;
        self.emit(st, StepKind::Assertion { cond, property }, loc);
    }

    fn push_guard(&mut self, st: &mut State, g: Expr) {
        let g = simplify(g);
        if g.is_true() {
            return;
        }
        st.guard.push(g);
        if st.guard.len() > GUARD_FOLD * 2 {
            let folded: Vec<Expr> = st.guard.drain(..GUARD_FOLD).collect();
            if let Some(sym) = self.folds.get(&folded) {
                st.guard.insert(0, sym.clone());
                return;
            }
            let key: (Ident, u32) = (Arc::from(GUARD_SYMBOL), 0);
            let version = self.new_version(&key);
            let lhs = Expr::new(
                ExprKind::SsaSymbol {
                    name: key.0.clone(),
                    level: 0,
                    version,
                },
                CType::Bool,
            );
            self.folds.insert(folded.clone(), lhs.clone());
            self.eq.steps.push(Step {
                kind: StepKind::Assignment {
                    lhs: lhs.clone(),
                    rhs: Expr::conjunction(folded),
                    display: Expr::symbol(key.0, CType::Bool),
                    hidden: true,
                },
                guard: Expr::true_expr(),
                loc: None,
            });
            st.guard.insert(0, lhs);
        }
    }

    fn defer(&mut self, st: State, pc: usize) {
        let mut st = st;
        st.top_mut().pc = pc;
        if st.is_dead() {
            return;
        }
        self.pending.entry((st.frames.len(), pc)).or_default().push(st);
    }

    /// Executes one instruction. Returns true when the entry function ended.
    fn step(&mut self, st: &mut State) -> Result<bool, SymexError> {
        let fname = st.top().function.clone();
        let pc = st.top().pc;
        let f = self.model.function(&fname).expect("function exists");
        let body = f.body.as_ref().expect("function body");
        let ins = &body[pc];
        let loc = ins.loc.clone();

        if let Some(heads) = self.info[&fname].heads.get(&pc) {
            let heads = heads.clone();
            if st.backjumped_to != Some(pc) {
                for &n in &heads {
                    st.top_mut().counters.remove(&n);
                    st.top_mut().budget.remove(&n);
                }
            }
            if self.opts.policy.mode == UnwindMode::Assertions {
                for n in heads {
                    if self.opts.policy.bound(&fname, n).is_some() {
                        let p = self.unwind_property(&fname, n);
                        self.record_property(&p);
                    }
                }
            }
        }
        st.backjumped_to = None;

        st.depth += 1;
        if let Some(limit) = self.opts.policy.depth {
            if st.depth > limit {
                st.kill();
                return Ok(false);
            }
        }

        match &ins.kind {
            InstrKind::Decl(sym) => {
                let v = self.fresh_free(&sym.ty);
                let hidden = fname.as_ref() == START;
                self.assign(st, sym, v, sym.clone(), hidden, loc);
                st.top_mut().pc += 1;
            }
            InstrKind::Dead(_) | InstrKind::Skip => st.top_mut().pc += 1,
            InstrKind::Assign { lhs, rhs } => {
                let hidden = fname.as_ref() == START && matches!(rhs.kind, ExprKind::Nondet);
                let value = self.read(st, rhs);
                let display = self.display_lvalue(st, lhs);
                self.assign(st, lhs, value, display, hidden, loc);
                st.top_mut().pc += 1;
            }
            InstrKind::Assume(c) => {
                if !self.opts.no_assumptions {
                    let c = self.read(st, c);
                    if c.is_false() {
                        self.emit(st, StepKind::Assumption(c), loc);
                        st.kill();
                        return Ok(false);
                    }
                    if !c.is_true() {
                        self.emit(st, StepKind::Assumption(c), loc);
                    }
                }
                st.top_mut().pc += 1;
            }
            InstrKind::Assert(c) => {
                let info = ins.property.clone().unwrap_or_else(|| crate::goto::PropertyInfo {
                    id: format!("{fname}.assertion.{pc}"),
                    class: PropertyClass::Assertion,
                    description: "assertion".to_string(),
                });
                if info.class != PropertyClass::Coverage || self.opts.cover_mode {
                    let cond = self.read(st, c);
                    let p = Arc::new(PropertyRef {
                        id: info.id,
                        class: info.class,
                        description: info.description,
                        loc: loc.clone(),
                        condition: c.clone(),
                    });
                    self.assertion(st, cond, p, loc);
                }
                st.top_mut().pc += 1;
            }
            InstrKind::Goto { guard, target } => {
                let g = self.read(st, guard);
                let target = *target;
                if target > pc {
                    if g.is_false() {
                        st.top_mut().pc += 1;
                    } else if g.is_true() {
                        let moved = std::mem::replace(st, State::dead());
                        self.defer(moved, target);
                    } else {
                        let mut taken = st.clone();
                        self.push_guard(&mut taken, g.clone());
                        self.defer(taken, target);
                        self.push_guard(st, negate(&g));
                        st.top_mut().pc += 1;
                    }
                } else {
                    self.backjump(st, &fname, pc, target, g, loc)?;
                }
            }
            InstrKind::Call { lhs, function, args } => {
                if lhs.is_some() {
                    return Err(SymexError::Malformed(
                        "call with return value after return removal".into(),
                    ));
                }
                let ExprKind::FunctionAddress(callee) = &function.kind else {
                    return Err(SymexError::Malformed("call through a function pointer".into()));
                };
                let callee = callee.clone();
                let values: Vec<Expr> = args.iter().map(|a| self.read(st, a)).collect();
                self.call(st, &callee, values, loc)?;
            }
            InstrKind::Return(_) => {
                return Err(SymexError::Malformed("RETURN instruction in symbolic execution".into()));
            }
            InstrKind::Input { name, args } | InstrKind::Output { name, args } => {
                let values = args.iter().map(|a| self.read(st, a)).collect();
                let kind = if matches!(ins.kind, InstrKind::Input { .. }) {
                    StepKind::Input {
                        name: name.clone(),
                        values,
                    }
                } else {
                    StepKind::Output {
                        name: name.clone(),
                        values,
                    }
                };
                self.emit(st, kind, loc);
                st.top_mut().pc += 1;
            }
            InstrKind::EndFunction => {
                st.frames.pop();
                if st.frames.is_empty() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    #[allow(clippy::too_many_arguments)]
    fn backjump(
        &mut self,
        st: &mut State,
        fname: &Ident,
        pc: usize,
        head: usize,
        g: Expr,
        loc: Option<Arc<SourceLocation>>,
    ) -> Result<(), SymexError> {
        if g.is_false() {
            st.top_mut().pc += 1;
            return Ok(());
        }
        let number = self.info[fname].backjumps[&pc];
        let count = {
            let c = st.top_mut().counters.entry(number).or_insert(0);
            *c += 1;
            *c
        };
        let take = match self.opts.policy.bound(fname, number) {
            Some(bound) => count < bound,
            None => {
                let used = {
                    let b = st.top_mut().budget.entry(number).or_insert(0);
                    *b += (pc - head + 1) as u64;
                    *b
                };
                if used > self.opts.policy.budget {
                    return Err(SymexError::Unbounded {
                        loop_id: format!("{fname}.{number}"),
                        loc: self.info[fname].loops[number].loc.clone(),
                    });
                }
                true
            }
        };
        if take {
            if !g.is_true() {
                let mut exit = st.clone();
                self.push_guard(&mut exit, negate(&g));
                self.defer(exit, pc + 1);
                self.push_guard(st, g);
            }
            st.top_mut().pc = head;
            st.backjumped_to = Some(head);
            return Ok(());
        }
        let not_g = simplify(negate(&g));
        match self.opts.policy.mode {
            UnwindMode::PartialLoops => {}
            UnwindMode::Assumptions | UnwindMode::Assertions => {
                if self.opts.policy.mode == UnwindMode::Assertions {
                    let p = self.unwind_property(fname, number);
                    self.assertion(st, not_g.clone(), p, loc.clone());
                }
                if not_g.is_false() {
                    st.kill();
                    return Ok(());
                }
                if !not_g.is_true() {
                    self.emit(st, StepKind::Assumption(not_g.clone()), loc);
                    self.push_guard(st, not_g);
                }
            }
        }
        st.top_mut().pc += 1;
        Ok(())
    }

    fn unwind_property(&self, fname: &Ident, number: usize) -> Arc<PropertyRef> {
        let l = &self.info[fname].loops[number];
        let body = self.model.functions[fname].instructions();
        let InstrKind::Goto { guard, .. } = &body[l.backjump].kind else {
            unreachable!("loops end in a backjump")
        };
        Arc::new(PropertyRef {
            id: format!("{fname}.unwind.{number}"),
            class: PropertyClass::Unwind,
            description: format!("unwinding assertion loop {number}"),
            loc: l.loc.clone(),
            condition: negate(guard),
        })
    }

    fn call(
        &mut self,
        st: &mut State,
        callee: &Ident,
        values: Vec<Expr>,
        loc: Option<Arc<SourceLocation>>,
    ) -> Result<(), SymexError> {
        let Some(f) = self.model.function(callee) else {
            return Err(SymexError::Malformed(format!("call to unknown function `{callee}'")));
        };
        let ret = f.return_type();
        let Some(body) = &f.body else {
            if ret != CType::Void {
                let rv = Expr::symbol(Arc::from(return_value_name(callee)), ret.clone());
                let v = self.fresh_free(&ret);
                self.assign(st, &rv, v, rv.clone(), true, loc.clone());
                if callee.as_ref() == GETCHAR && !self.opts.no_library {
                    let lib_loc = Arc::new(SourceLocation::new("<builtin-library-getchar>", 15).with_function(GETCHAR));
                    let value = self.read(st, &rv);
                    self.emit(
                        st,
                        StepKind::Input {
                            name: Arc::from(GETCHAR),
                            values: vec![value],
                        },
                        Some(lib_loc),
                    );
                }
            }
            st.top_mut().pc += 1;
            return Ok(());
        };
        let active = st.frames.iter().filter(|fr| &fr.function == callee).count() as u32;
        if active > 0 {
            let limit = self.opts.policy.global_bound;
            let exceeded = match limit {
                Some(b) => active >= b,
                None => active as u64 * body.len() as u64 > self.opts.policy.budget,
            };
            if exceeded {
                if limit.is_none() {
                    return Err(SymexError::Unbounded {
                        loop_id: format!("{callee}.recursion"),
                        loc,
                    });
                }
                match self.opts.policy.mode {
                    UnwindMode::PartialLoops => {
                        st.top_mut().pc += 1;
                    }
                    mode => {
                        if mode == UnwindMode::Assertions {
                            let p = Arc::new(PropertyRef {
                                id: format!("{callee}.recursion"),
                                class: PropertyClass::Unwind,
                                description: format!("recursion unwinding assertion for {callee}"),
                                loc: loc.clone(),
                                condition: Expr::false_expr(),
                            });
                            self.assertion(st, Expr::false_expr(), p, loc);
                        }
                        st.kill();
                    }
                }
                return Ok(());
            }
        }
        let level = self.activate(callee);
        st.top_mut().pc += 1;
        st.frames.push(Frame::new(callee.clone(), level));
        let params = f.params.clone();
        for (p, v) in params.iter().zip(values) {
            let ty = self.model.symtab.get(p).map(|s| s.ty.clone()).unwrap_or(v.ty.clone());
            let sym = Expr::symbol(p.clone(), ty);
            self.assign(st, &sym, v, sym.clone(), false, loc.clone());
        }
        Ok(())
    }

    /// Joins the states that reach the same instruction.
    fn merge(&mut self, cur: Option<State>, list: Vec<State>) -> State {
        let mut states: Vec<State> = cur.into_iter().chain(list).filter(|s| !s.is_dead()).collect();
        if states.is_empty() {
            return State::dead();
        }
        if states.len() == 1 {
            return states.pop().unwrap();
        }
        let prefix_len = (0..)
            .take_while(|&i| {
                states
                    .iter()
                    .all(|s| i < s.guard.len() && s.guard[i] == states[0].guard[i])
            })
            .count();
        let suffixes: Vec<Expr> = states
            .iter()
            .map(|s| simplify(Expr::conjunction(s.guard[prefix_len..].iter().cloned())))
            .collect();
        let mut merged = states[0].clone();
        merged.guard.truncate(prefix_len);
        let disj = simplify(Expr::disjunction(suffixes.iter().cloned()));
        self.push_guard(&mut merged, disj);

        let mut keys: Vec<(Ident, u32)> = states
            .iter()
            .flat_map(|s| s.versions.keys().cloned())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        keys.sort();
        for key in keys {
            let same_version = states
                .iter()
                .all(|s| s.versions.get(&key) == states[0].versions.get(&key));
            let same_value = states.iter().all(|s| s.values.get(&key) == states[0].values.get(&key));
            if same_version && same_value {
                continue;
            }
            let ty = self.types[&key.0].clone();
            let values: Vec<Expr> = states.iter().map(|s| current_value(s, &key, &ty)).collect();
            if values.iter().all(|v| *v == values[0]) {
                merged
                    .versions
                    .insert(key.clone(), states[0].versions.get(&key).copied().unwrap_or(0));
                match states[0].values.get(&key) {
                    Some(v) if states.iter().all(|s| s.values.get(&key) == Some(v)) => {
                        merged.values.insert(key.clone(), v.clone());
                    }
                    _ => {
                        merged.values.remove(&key);
                    }
                }
                continue;
            }
            let mut rhs = values.last().unwrap().clone();
            for i in (0..values.len() - 1).rev() {
                rhs = Expr::conditional(suffixes[i].clone(), values[i].clone(), rhs);
            }
            let rhs = simplify(rhs);
            let version = self.new_version(&key);
            merged.versions.insert(key.clone(), version);
            merged.values.remove(&key);
            let lhs = Expr::new(
                ExprKind::SsaSymbol {
                    name: key.0.clone(),
                    level: key.1,
                    version,
                },
                ty.clone(),
            );
            let display = Expr::symbol(key.0.clone(), ty);
            self.eq.steps.push(Step {
                kind: StepKind::Assignment {
                    lhs,
                    rhs,
                    display,
                    hidden: true,
                },
                guard: Self::guard_expr(&merged),
                loc: None,
            });
        }
        for s in &states[1..] {
            for (fa, fb) in merged.frames.iter_mut().zip(&s.frames) {
                for (k, v) in &fb.counters {
                    let e = fa.counters.entry(*k).or_insert(0);
                    *e = (*e).max(*v);
                }
                for (k, v) in &fb.budget {
                    let e = fa.budget.entry(*k).or_insert(0);
                    *e = (*e).max(*v);
                }
            }
            merged.depth = merged.depth.max(s.depth);
        }
        merged
    }
}

fn current_value(st: &State, key: &(Ident, u32), ty: &CType) -> Expr {
    match st.values.get(key) {
        Some(v) => v.clone(),
        None => Expr::new(
            ExprKind::SsaSymbol {
                name: key.0.clone(),
                level: key.1,
                version: st.versions.get(key).copied().unwrap_or(0),
            },
            ty.clone(),
        ),
    }
}
