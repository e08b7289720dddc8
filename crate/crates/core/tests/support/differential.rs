//! Random programs over 4-bit vectors: the SAT-based verdict of every
//! property must match exhaustive evaluation over all inputs, and every
//! counterexample must replay. `x` and `y` are left uninitialized, so they
//! are the first two nondeterministic choices of every run.

use std::collections::BTreeSet;

use minibmc::eval::Value;
use minibmc::frontend::types::PlatformConfig;
use minibmc::instrument::CheckOptions;
use minibmc::interp::{self, InterpOptions};
use minibmc::pipeline::{build, verify};
use minibmc::results::Status;
use minibmc::symex::{SymexOptions, UnwindMode};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const VARS: [&str; 4] = ["x", "y", "z", "w"];

#[derive(Clone, Debug)]
enum E {
    Var(usize),
    Const(i64),
    Neg(Box<E>),
    Not(Box<E>),
    BitNot(Box<E>),
    Bin(&'static str, Box<E>, Box<E>),
    Shift(&'static str, Box<E>, u32),
    Ite(Box<E>, Box<E>, Box<E>),
}

#[derive(Clone, Debug)]
enum S {
    Assign(usize, E),
    If(E, Vec<S>, Vec<S>),
    Assert(E),
    Assume(E),
    Loop(usize, i64, Vec<S>),
}

struct Program {
    signed: [bool; 4],
    body: Vec<S>,
    loops: usize,
}

struct Gen {
    rng: StdRng,
    loops: usize,
}

impl Gen {
    fn expr(&mut self, depth: u32) -> E {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return if self.rng.gen_bool(0.75) {
                E::Var(self.rng.gen_range(0..4))
            } else {
                E::Const(self.rng.gen_range(0..16))
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0 => E::Neg(Box::new(self.expr(d))),
            1 => E::Not(Box::new(self.expr(d))),
            2 => E::BitNot(Box::new(self.expr(d))),
            3 => {
                let op = ["<<", ">>"][self.rng.gen_range(0..2)];
                E::Shift(op, Box::new(self.expr(d)), self.rng.gen_range(0..4))
            }
            4 => E::Ite(Box::new(self.expr(d)), Box::new(self.expr(d)), Box::new(self.expr(d))),
            _ => {
                const OPS: [&str; 17] = [
                    "+", "-", "*", "/", "%", "&", "|", "^", "<", "<=", ">", ">=", "==", "!=", "&&", "||", "+",
                ];
                let op = OPS[self.rng.gen_range(0..OPS.len())];
                E::Bin(op, Box::new(self.expr(d)), Box::new(self.expr(d)))
            }
        }
    }

    fn block(&mut self, depth: u32, len: usize) -> Vec<S> {
        (0..len).map(|_| self.stmt(depth)).collect()
    }

    fn stmt(&mut self, depth: u32) -> S {
        let roll = self.rng.gen_range(0..20);
        match roll {
            0..=9 => S::Assign(self.rng.gen_range(0..4), self.expr(2)),
            10..=12 if depth > 0 => {
                let n = self.rng.gen_range(1..3);
                let m = self.rng.gen_range(0..3);
                S::If(self.expr(2), self.block(depth - 1, n), self.block(depth - 1, m))
            }
            13 if depth > 0 => {
                self.loops += 1;
                let n = self.rng.gen_range(1..3);
                S::Loop(self.loops - 1, self.rng.gen_range(1..4), self.block(depth - 1, n))
            }
            14 => S::Assume(self.expr(1)),
            _ => S::Assert(self.expr(2)),
        }
    }

    fn program(&mut self) -> Program {
        self.loops = 0;
        let signed = [(); 4].map(|_| self.rng.gen_bool(0.5));
        let n = self.rng.gen_range(3..8);
        let mut body = self.block(2, n);
        body.push(S::Assert(self.expr(2)));
        Program {
            signed,
            body,
            loops: self.loops,
        }
    }
}

fn type_name(signed: bool) -> &'static str {
    if signed {
        "signed __CPROVER_bitvector[4]"
    } else {
        "__CPROVER_bitvector[4]"
    }
}

fn render_expr(e: &E) -> String {
    match e {
        E::Var(v) => VARS[*v].to_string(),
        E::Const(c) => c.to_string(),
        E::Neg(a) => format!("(-{})", render_expr(a)),
        E::Not(a) => format!("(!{})", render_expr(a)),
        E::BitNot(a) => format!("(~{})", render_expr(a)),
        E::Bin(op @ ("/" | "%"), a, b) => format!("({} {op} ({} | 1))", render_expr(a), render_expr(b)),
        E::Bin(op, a, b) => format!("({} {op} {})", render_expr(a), render_expr(b)),
        E::Shift(op, a, k) => format!("({} {op} {k})", render_expr(a)),
        E::Ite(c, a, b) => format!("({} ? {} : {})", render_expr(c), render_expr(a), render_expr(b)),
    }
}

fn render_block(body: &[S], indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    for s in body {
        match s {
            S::Assign(v, e) => out.push_str(&format!("{pad}{} = {};\n", VARS[*v], render_expr(e))),
            S::Assert(e) => out.push_str(&format!("{pad}assert({});\n", render_expr(e))),
            S::Assume(e) => out.push_str(&format!("{pad}__CPROVER_assume({});\n", render_expr(e))),
            S::If(c, t, f) => {
                out.push_str(&format!("{pad}if({})\n{pad}{{\n", render_expr(c)));
                render_block(t, indent + 1, out);
                out.push_str(&format!("{pad}}}\n"));
                if !f.is_empty() {
                    out.push_str(&format!("{pad}else\n{pad}{{\n"));
                    render_block(f, indent + 1, out);
                    out.push_str(&format!("{pad}}}\n"));
                }
            }
            S::Loop(id, n, b) => {
                out.push_str(&format!("{pad}for(int i{id} = 0; i{id} < {n}; i{id}++)\n{pad}{{\n"));
                render_block(b, indent + 1, out);
                out.push_str(&format!("{pad}}}\n"));
            }
        }
    }
}

fn render(p: &Program) -> String {
    let mut out = String::new();
    out.push_str("int main()\n{\n");
    for (i, v) in VARS.iter().enumerate() {
        let init = if i < 2 { "" } else { " = 0" };
        out.push_str(&format!("  {} {v}{init};\n", type_name(p.signed[i])));
    }
    render_block(&p.body, 1, &mut out);
    out.push_str("  return 0;\n}\n");
    out
}

/// Value of a 4-bit variable after conversion from int.
fn narrow(v: i64, signed: bool) -> i64 {
    let low = v & 15;
    if signed && low >= 8 {
        low - 16
    } else {
        low
    }
}

struct Oracle<'a> {
    p: &'a Program,
    env: [i64; 4],
    failed: BTreeSet<usize>,
    next_assert: usize,
}

enum Halt {
    Assume,
}

impl Oracle<'_> {
    /// Integer-promoted evaluation; every intermediate fits in 32 bits.
    fn eval(&self, e: &E) -> i64 {
        let v = match e {
            E::Var(v) => self.env[*v],
            E::Const(c) => *c,
            E::Neg(a) => -self.eval(a),
            E::Not(a) => (self.eval(a) == 0) as i64,
            E::BitNot(a) => !self.eval(a),
            E::Shift("<<", a, k) => self.eval(a) << k,
            E::Shift(_, a, k) => self.eval(a) >> k,
            E::Ite(c, a, b) => {
                if self.eval(c) != 0 {
                    self.eval(a)
                } else {
                    self.eval(b)
                }
            }
            E::Bin("&&", a, b) => (self.eval(a) != 0 && self.eval(b) != 0) as i64,
            E::Bin("||", a, b) => (self.eval(a) != 0 || self.eval(b) != 0) as i64,
            E::Bin(op, a, b) => {
                let (a, b) = (self.eval(a), self.eval(b));
                match *op {
                    "+" => a + b,
                    "-" => a - b,
                    "*" => a * b,
                    "/" => a / (b | 1),
                    "%" => a % (b | 1),
                    "&" => a & b,
                    "|" => a | b,
                    "^" => a ^ b,
                    "<" => (a < b) as i64,
                    "<=" => (a <= b) as i64,
                    ">" => (a > b) as i64,
                    ">=" => (a >= b) as i64,
                    "==" => (a == b) as i64,
                    "!=" => (a != b) as i64,
                    _ => unreachable!(),
                }
            }
        };
        assert!(i32::try_from(v).is_ok(), "intermediate {v} leaves int");
        v
    }

    fn exec(&mut self, body: &[S]) -> Result<(), Halt> {
        for s in body {
            match s {
                S::Assign(v, e) => self.env[*v] = narrow(self.eval(e), self.p.signed[*v]),
                S::Assert(e) => {
                    let n = self.next_assert;
                    self.next_assert += 1;
                    if self.eval(e) == 0 {
                        self.failed.insert(n);
                    }
                }
                S::Assume(e) => {
                    if self.eval(e) == 0 {
                        return Err(Halt::Assume);
                    }
                }
                S::If(c, t, f) => {
                    let (taken, skipped) = if self.eval(c) != 0 { (t, f) } else { (f, t) };
                    let skipped_asserts = count_asserts(skipped);
                    let here = self.next_assert;
                    if std::ptr::eq(taken, f) {
                        self.next_assert += skipped_asserts;
                    }
                    self.exec(taken)?;
                    if std::ptr::eq(taken, t) {
                        self.next_assert += skipped_asserts;
                    }
                    debug_assert_eq!(self.next_assert, here + count_asserts(t) + count_asserts(f));
                }
                S::Loop(_, n, b) => {
                    let start = self.next_assert;
                    for _ in 0..*n {
                        self.next_assert = start;
                        self.exec(b)?;
                    }
                    self.next_assert = start + count_asserts(b);
                }
            }
        }
        Ok(())
    }
}

fn count_asserts(body: &[S]) -> usize {
    body.iter()
        .map(|s| match s {
            S::Assert(_) => 1,
            S::If(_, t, f) => count_asserts(t) + count_asserts(f),
            S::Loop(_, _, b) => count_asserts(b),
            _ => 0,
        })
        .sum()
}

/// Assertion indices (in source order) violated by the given inputs.
fn oracle_failures(p: &Program, x: i64, y: i64) -> BTreeSet<usize> {
    let mut o = Oracle {
        p,
        env: [x, y, 0, 0],
        failed: BTreeSet::new(),
        next_assert: 0,
    };
    let _ = o.exec(&p.body);
    o.failed
}

fn domain(signed: bool) -> impl Iterator<Item = i64> {
    if signed {
        -8..8
    } else {
        0..16
    }
}

fn bits(v: i64) -> Value {
    Value::Scalar((v & 15) as u64)
}

/// Checks `programs` random programs; returns the number of failing and
/// passing assertions seen.
pub fn check(programs: usize, seed: u64) -> (usize, usize) {
    let mut gen = Gen {
        rng: StdRng::seed_from_u64(seed),
        loops: 0,
    };
    let cfg = PlatformConfig::default();
    let mut failing_props = 0;
    let mut passing_props = 0;
    for n in 0..programs {
        let p = gen.program();
        let text = render(&p);
        let asserts = count_asserts(&p.body);

        let mut expected = BTreeSet::new();
        for x in domain(p.signed[0]) {
            for y in domain(p.signed[1]) {
                expected.extend(oracle_failures(&p, x, y));
            }
        }

        let model = build("random.c", &text, &CheckOptions::default(), "main", &cfg)
            .unwrap_or_else(|e| panic!("program {n}: {e}\n{text}"));
        let mut opts = SymexOptions::default();
        opts.policy.global_bound = Some(4);
        opts.policy.mode = UnwindMode::Assertions;
        let v = verify(&model, &opts).unwrap();

        let iopts = InterpOptions {
            policy: opts.policy.clone(),
            ..InterpOptions::default()
        };
        let mut interpreted = BTreeSet::new();
        for x in domain(p.signed[0]) {
            for y in domain(p.signed[1]) {
                let run = interp::replay(&model, &[bits(x), bits(y)], &iopts);
                interpreted.extend(run.failures.iter().map(|f| f.id.clone()));
            }
        }

        for k in 0..asserts {
            let id = format!("main.assertion.{}", k + 1);
            let status = v.result.status_of(&id);
            let want = expected.contains(&k);
            if status.is_none() {
                assert!(!want, "program {n}: {id} missing but violable\n{text}");
                continue;
            }
            let got = status == Some(Status::Failure);
            assert_eq!(got, want, "program {n}: {id}\n{text}");
            assert_eq!(
                interpreted.contains(&id),
                want,
                "program {n}: interpreter on {id}\n{text}"
            );
            if want {
                failing_props += 1;
            } else {
                passing_props += 1;
            }
        }
        for l in 0..p.loops {
            let id = format!("main.unwind.{l}");
            if let Some(s) = v.result.status_of(&id) {
                assert_eq!(s, Status::Success, "program {n}: {id}\n{text}");
            }
        }

        for r in v.result.results.iter().filter(|r| r.status == Status::Failure) {
            let trace = r.trace.as_ref().expect("failure without trace");
            let run = interp::replay(&model, &trace.nondet, &iopts);
            assert!(
                run.failed(&r.property.id),
                "program {n}: trace of {} does not replay\n{text}",
                r.property.id
            );
            let raw = |i: usize| trace.nondet.get(i).map_or(0, |v| v.scalar() as i64);
            let (x, y) = (narrow(raw(0), p.signed[0]), narrow(raw(1), p.signed[1]));
            let k: usize = r.property.id.rsplit('.').next().unwrap().parse().unwrap();
            assert!(
                oracle_failures(&p, x, y).contains(&(k - 1)),
                "program {n}: inputs x={x} y={y} do not violate {}\n{text}",
                r.property.id
            );
        }
    }
    (failing_props, passing_props)
}
