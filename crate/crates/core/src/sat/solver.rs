//! Conflict-driven clause learning with two watched literals.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::heap::VarHeap;
use super::{luby, Lit, Var};

pub const SEED: u64 = 91648253;
const RESTART_BASE: u64 = 64;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RANDOM_VAR_FREQ: f64 = 0.01;

type ClauseRef = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat,
    Unsat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
    pub solve_time: Duration,
}

#[derive(Debug)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    activity: f64,
    deleted: bool,
}

#[derive(Clone, Copy, Debug)]
struct Watcher {
    cref: ClauseRef,
    blocker: Lit,
}

#[derive(Debug)]
pub struct Solver {
    clauses: Vec<Clause>,
    learnts: Vec<ClauseRef>,
    /// Clauses as given, for model checking.
    original: Vec<Vec<Lit>>,
    /// Indexed by literal; clauses whose first two literals include it.
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<Option<ClauseRef>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    max_learnts: f64,
    rng: StdRng,
    model: Vec<bool>,
    /// Assumptions responsible for the last UNSAT answer, negated.
    failed: Vec<Lit>,
    pub stats: Stats,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            clauses: Vec::new(),
            learnts: Vec::new(),
            original: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            polarity: Vec::new(),
            seen: Vec::new(),
            ok: true,
            max_learnts: 0.0,
            rng: StdRng::seed_from_u64(SEED),
            model: Vec::new(),
            failed: Vec::new(),
            stats: Stats::default(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.assigns.len() as u32
    }

    pub fn new_var(&mut self) -> Var {
        let v = self.assigns.len() as Var;
        self.assigns.push(None);
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.polarity.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.grow(self.assigns.len());
        self.heap.insert(v, &self.activity);
        v
    }

    pub fn ensure_vars(&mut self, n: u32) {
        while self.num_vars() < n {
            self.new_var();
        }
    }

    fn value(&self, l: Lit) -> Option<bool> {
        self.assigns[l.var() as usize].map(|b| b != l.is_negated())
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause. Returns false once the clause set is known to be unsatisfiable.
    pub fn add_clause(&mut self, clause: &[Lit]) -> bool {
        if let Some(max) = clause.iter().map(|l| l.var()).max() {
            self.ensure_vars(max + 1);
        }
        self.original.push(clause.to_vec());
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        let mut lits = clause.to_vec();
        lits.sort();
        lits.dedup();
        let mut kept = Vec::with_capacity(lits.len());
        for (i, &l) in lits.iter().enumerate() {
            if i + 1 < lits.len() && lits[i + 1] == !l {
                return true;
            }
            match self.value(l) {
                Some(true) => return true,
                Some(false) => {}
                None => kept.push(l),
            }
        }
        match kept.len() {
            0 => {
                self.ok = false;
            }
            1 => {
                self.enqueue(kept[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                let cref = self.alloc(kept, false);
                self.attach(cref);
            }
        }
        self.ok
    }

    fn alloc(&mut self, lits: Vec<Lit>, learnt: bool) -> ClauseRef {
        self.clauses.push(Clause {
            lits,
            learnt,
            activity: 0.0,
            deleted: false,
        });
        self.clauses.len() - 1
    }

    fn attach(&mut self, cref: ClauseRef) {
        let c = &self.clauses[cref];
        let (a, b) = (c.lits[0], c.lits[1]);
        self.watches[a.code()].push(Watcher { cref, blocker: b });
        self.watches[b.code()].push(Watcher { cref, blocker: a });
    }

    fn enqueue(&mut self, l: Lit, reason: Option<ClauseRef>) {
        let v = l.var() as usize;
        self.assigns[v] = Some(!l.is_negated());
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause if one arises.
    fn propagate(&mut self) -> Option<ClauseRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.clauses[w.cref].deleted {
                    continue;
                }
                if self.value(w.blocker) == Some(true) {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let lits = &mut self.clauses[w.cref].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                if first != w.blocker
                    && self.assigns[first.var() as usize].map(|b| b != first.is_negated()) == Some(true)
                {
                    ws[j] = Watcher {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    let l = lits[k];
                    if self.assigns[l.var() as usize].map(|b| b != l.is_negated()) != Some(false) {
                        lits.swap(1, k);
                        self.watches[l.code()].push(Watcher {
                            cref: w.cref,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                j += 1;
                if self.value(first) == Some(false) {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for idx in (lim..self.trail.len()).rev() {
            let l = self.trail[idx];
            let v = l.var() as usize;
            self.assigns[v] = None;
            self.reason[v] = None;
            self.polarity[v] = l.is_negated();
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn bump_var(&mut self, v: Var) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: ClauseRef) {
        let c = &mut self.clauses[cref];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &r in &self.learnts {
                self.clauses[r].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backtrack level.
    fn analyze(&mut self, conflict: ClauseRef) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit::positive(0)];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let mut cref = conflict;
        loop {
            if self.clauses[cref].learnt {
                self.bump_clause(cref);
            }
            let start = if p.is_some() { 1 } else { 0 };
            for k in start..self.clauses[cref].lits.len() {
                let q = self.clauses[cref].lits[k];
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(q.var());
                    self.seen[v] = true;
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            self.seen[lit.var() as usize] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            cref = self.reason[lit.var() as usize].expect("implied literal has a reason");
        }
        learnt[0] = !p.unwrap();

        // Drop literals implied by the rest of the clause.
        let candidates: Vec<Lit> = learnt[1..].to_vec();
        let mut keep = vec![learnt[0]];
        for q in candidates {
            let redundant = match self.reason[q.var() as usize] {
                None => false,
                Some(r) => self.clauses[r].lits[1..].iter().all(|l| {
                    let v = l.var() as usize;
                    self.seen[v] || self.level[v] == 0
                }),
            };
            if !redundant {
                keep.push(q);
            }
        }
        for l in &learnt {
            self.seen[l.var() as usize] = false;
        }
        let mut learnt = keep;

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var() as usize]
        };
        (learnt, bt)
    }

    /// Collects the assumptions that imply `!p`.
    fn analyze_final(&mut self, p: Lit) {
        self.failed.clear();
        self.failed.push(p);
        if self.decision_level() == 0 {
            return;
        }
        self.seen[p.var() as usize] = true;
        for idx in (self.trail_lim[0]..self.trail.len()).rev() {
            let l = self.trail[idx];
            let v = l.var() as usize;
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                None => {
                    if self.level[v] > 0 {
                        self.failed.push(!l);
                    }
                }
                Some(r) => {
                    for k in 1..self.clauses[r].lits.len() {
                        let q = self.clauses[r].lits[k];
                        if self.level[q.var() as usize] > 0 {
                            self.seen[q.var() as usize] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[p.var() as usize] = false;
    }

    fn locked(&self, cref: ClauseRef) -> bool {
        let l = self.clauses[cref].lits[0];
        self.reason[l.var() as usize] == Some(cref) && self.value(l) == Some(true)
    }

    fn reduce_db(&mut self) {
        let mut learnts = std::mem::take(&mut self.learnts);
        learnts.sort_by(|&a, &b| self.clauses[a].activity.partial_cmp(&self.clauses[b].activity).unwrap());
        let half = learnts.len() / 2;
        let mut kept = Vec::with_capacity(learnts.len());
        for (i, cref) in learnts.into_iter().enumerate() {
            if i < half && self.clauses[cref].lits.len() > 2 && !self.locked(cref) {
                self.clauses[cref].deleted = true;
                self.clauses[cref].lits = Vec::new();
            } else {
                kept.push(cref);
            }
        }
        self.learnts = kept;
        for ws in &mut self.watches {
            ws.retain(|w| !self.clauses[w.cref].deleted);
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        if !self.heap.is_empty() && self.rng.gen_bool(RANDOM_VAR_FREQ) {
            let v = self.rng.gen_range(0..self.num_vars());
            if self.assigns[v as usize].is_none() {
                return Some(Lit::new(v, self.polarity[v as usize]));
            }
        }
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v as usize].is_none() {
                return Some(Lit::new(v, self.polarity[v as usize]));
            }
        }
        None
    }

    fn search(&mut self, conflicts_allowed: u64, assumptions: &[Lit]) -> Option<SolveResult> {
        let mut conflicts = 0;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(SolveResult::Unsat);
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.alloc(learnt, true);
                    self.attach(cref);
                    self.learnts.push(cref);
                    self.bump_clause(cref);
                    self.stats.learnt_clauses += 1;
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                continue;
            }
            if conflicts >= conflicts_allowed {
                self.cancel_until(0);
                return None;
            }
            if self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts {
                self.reduce_db();
            }
            let mut next = None;
            while (self.decision_level() as usize) < assumptions.len() {
                let a = assumptions[self.decision_level() as usize];
                match self.value(a) {
                    Some(true) => self.trail_lim.push(self.trail.len()),
                    Some(false) => {
                        self.analyze_final(!a);
                        return Some(SolveResult::Unsat);
                    }
                    None => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let decision = match next {
                Some(a) => a,
                None => {
                    self.stats.decisions += 1;
                    match self.pick_branch() {
                        Some(l) => l,
                        None => {
                            self.model = self.assigns.iter().map(|a| a.unwrap_or(false)).collect();
                            return Some(SolveResult::Sat);
                        }
                    }
                }
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(decision, None);
        }
    }

    /// Decides satisfiability of the clauses conjoined with the assumptions.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        let started = Instant::now();
        let result = self.solve_inner(assumptions);
        self.stats.solve_time += started.elapsed();
        result
    }

    fn solve_inner(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.failed.clear();
        if let Some(max) = assumptions.iter().map(|l| l.var()).max() {
            self.ensure_vars(max + 1);
        }
        if !self.ok {
            return SolveResult::Unsat;
        }
        self.cancel_until(0);
        self.max_learnts = (self.original.len() as f64 / 3.0).max(1000.0);
        let mut restarts = 0;
        loop {
            let budget = luby(restarts) * RESTART_BASE;
            match self.search(budget, assumptions) {
                Some(r) => {
                    self.cancel_until(0);
                    return r;
                }
                None => {
                    restarts += 1;
                    self.stats.restarts += 1;
                    self.max_learnts *= 1.1;
                }
            }
        }
    }

    /// Value of a variable in the last model.
    pub fn model_value(&self, v: Var) -> bool {
        self.model.get(v as usize).copied().unwrap_or(false)
    }

    pub fn model(&self) -> &[bool] {
        &self.model
    }

    /// Negations of the assumptions that made the last call unsatisfiable.
    pub fn failed_assumptions(&self) -> &[Lit] {
        &self.failed
    }

    /// Whether the last model satisfies every clause added so far.
    pub fn model_is_valid(&self) -> bool {
        self.original.iter().all(|c| {
            c.iter()
                .any(|l| self.model.get(l.var() as usize).copied().unwrap_or(false) != l.is_negated())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(v: &[i64]) -> Vec<Lit> {
        v.iter().map(|&n| Lit::from_dimacs(n)).collect()
    }

    #[test]
    fn forced_model() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1, 2]));
        s.add_clause(&lits(&[-1]));
        assert_eq!(s.solve(&[]), SolveResult::Sat);
        assert!(!s.model_value(0));
        assert!(s.model_value(1));
    }

    #[test]
    fn contradictory_units() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1]));
        s.add_clause(&lits(&[-1]));
        assert_eq!(s.solve(&[]), SolveResult::Unsat);
    }

    #[test]
    fn tautology_is_ignored() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1, -1]));
        assert_eq!(s.solve(&[]), SolveResult::Sat);
    }

    #[test]
    fn assumptions_are_temporary() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1]));
        s.add_clause(&lits(&[2, 3]));
        assert_eq!(s.solve(&lits(&[-1])), SolveResult::Unsat);
        assert_eq!(s.failed_assumptions(), &lits(&[1])[..]);
        assert_eq!(s.solve(&[]), SolveResult::Sat);
        assert_eq!(s.solve(&lits(&[-2])), SolveResult::Sat);
        assert!(s.model_value(2));
    }

    #[test]
    fn pigeonhole_four_into_three() {
        let var = |p: i64, h: i64| p * 3 + h + 1;
        let mut s = Solver::new();
        for p in 0..4 {
            s.add_clause(&lits(&[var(p, 0), var(p, 1), var(p, 2)]));
        }
        for h in 0..3 {
            for p in 0..4 {
                for q in p + 1..4 {
                    s.add_clause(&lits(&[-var(p, h), -var(q, h)]));
                }
            }
        }
        assert_eq!(s.solve(&[]), SolveResult::Unsat);
        assert!(s.stats.conflicts > 0);
    }
}
