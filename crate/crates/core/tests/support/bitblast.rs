#![allow(dead_code)]

use minibmc::encode::{read_bits, BitBlaster};
use minibmc::frontend::expr::{BinaryOp, Expr, ExprKind, OverflowOp, UnaryOp};
use minibmc::frontend::types::{CType, IntKind};
use minibmc::sat::{CnfFormula, Lit, SolveResult, Solver};

fn ty(width: u32, signed: bool) -> CType {
    if signed {
        CType::signed(width, IntKind::BitVector)
    } else {
        CType::unsigned(width, IntKind::BitVector)
    }
}

fn var(name: &str, version: u32, t: &CType) -> Expr {
    Expr::new(
        ExprKind::SsaSymbol {
            name: name.into(),
            level: 0,
            version,
        },
        t.clone(),
    )
}

fn to_int(v: u64, width: u32, signed: bool) -> i128 {
    let m = v & ((1u64 << width) - 1);
    if signed && m >> (width - 1) & 1 == 1 {
        m as i128 - (1i128 << width)
    } else {
        m as i128
    }
}

fn wrap(v: i128, width: u32) -> u64 {
    (v.rem_euclid(1i128 << width)) as u64
}

/// Reference semantics on mathematical integers.
fn oracle_binary(op: BinaryOp, x: u64, y: u64, w: u32, signed: bool) -> Option<u64> {
    let a = to_int(x, w, signed);
    let b = to_int(y, w, signed);
    let bool_ = |c: bool| Some(c as u64);
    match op {
        BinaryOp::Add => Some(wrap(a + b, w)),
        BinaryOp::Sub => Some(wrap(a - b, w)),
        BinaryOp::Mul => Some(wrap(a * b, w)),
        BinaryOp::Div if b == 0 => None,
        BinaryOp::Mod if b == 0 => None,
        // Rust's i128 division truncates toward zero like C.
        BinaryOp::Div => Some(wrap(a / b, w)),
        BinaryOp::Mod => Some(wrap(a % b, w)),
        BinaryOp::Shl | BinaryOp::Shr => {
            let d = to_int(y, w, false);
            if op == BinaryOp::Shl {
                Some(if d >= w as i128 { 0 } else { wrap(a << d, w) })
            } else {
                let d = d.min(w as i128);
                Some(wrap(a >> d, w))
            }
        }
        BinaryOp::BitAnd => Some(wrap(a & b, w)),
        BinaryOp::BitOr => Some(wrap(a | b, w)),
        BinaryOp::BitXor => Some(wrap(a ^ b, w)),
        BinaryOp::Lt => bool_(a < b),
        BinaryOp::Le => bool_(a <= b),
        BinaryOp::Gt => bool_(a > b),
        BinaryOp::Ge => bool_(a >= b),
        BinaryOp::Eq => bool_(a == b),
        BinaryOp::Ne => bool_(a != b),
        BinaryOp::And | BinaryOp::Or => unreachable!(),
    }
}

/// Evaluates a Tseitin circuit by propagating clauses in creation order.
fn simulate(cnf: &CnfFormula, inputs: &[(Lit, bool)]) -> Vec<bool> {
    let mut val: Vec<Option<bool>> = vec![None; cnf.num_vars as usize];
    val[0] = Some(true);
    for &(l, b) in inputs {
        val[l.var() as usize] = Some(b != l.is_negated());
    }
    let lit_val = |val: &Vec<Option<bool>>, l: Lit| val[l.var() as usize].map(|b| b != l.is_negated());
    for _ in 0..2 {
        for c in &cnf.clauses {
            if c.iter().any(|&l| lit_val(&val, l) == Some(true)) {
                continue;
            }
            let open: Vec<Lit> = c.iter().copied().filter(|&l| lit_val(&val, l).is_none()).collect();
            if open.len() == 1 {
                val[open[0].var() as usize] = Some(!open[0].is_negated());
            }
        }
    }
    let model: Vec<bool> = val.iter().map(|v| v.unwrap_or(false)).collect();
    assert!(cnf.satisfied_by(&model), "propagated assignment violates the circuit");
    model
}

fn check_binary(op: BinaryOp, w: u32, signed: bool) {
    let t = ty(w, signed);
    let a = var("a", 1, &t);
    let b = var("b", 1, &t);
    let e = Expr::binary(op, a.clone(), b.clone());
    let mut bb = BitBlaster::new();
    let out = bb.convert(&e).bits().clone();
    let xa = bb.convert(&a).bits().clone();
    let xb = bb.convert(&b).bits().clone();
    let out_w = if op.is_relation() { 1 } else { w };
    for x in 0..1u64 << w {
        for y in 0..1u64 << w {
            let Some(expected) = oracle_binary(op, x, y, w, signed) else {
                continue;
            };
            let inputs: Vec<(Lit, bool)> = xa
                .iter()
                .enumerate()
                .map(|(i, &l)| (l, x >> i & 1 == 1))
                .chain(xb.iter().enumerate().map(|(i, &l)| (l, y >> i & 1 == 1)))
                .collect();
            let model = simulate(&bb.cnf, &inputs);
            assert_eq!(
                read_bits(&out, &model),
                expected,
                "{op:?} width {w} signed {signed}: {x} {y}"
            );
            assert_eq!(out.len() as u32, out_w);
        }
    }
}

const BINARY: [BinaryOp; 16] = [
    BinaryOp::Add,
    BinaryOp::Sub,
    BinaryOp::Mul,
    BinaryOp::Div,
    BinaryOp::Mod,
    BinaryOp::Shl,
    BinaryOp::Shr,
    BinaryOp::BitAnd,
    BinaryOp::BitOr,
    BinaryOp::BitXor,
    BinaryOp::Lt,
    BinaryOp::Le,
    BinaryOp::Gt,
    BinaryOp::Ge,
    BinaryOp::Eq,
    BinaryOp::Ne,
];

pub fn binary_operators_widths_1_4_8() {
    for w in [1, 4, 8] {
        for signed in [false, true] {
            for op in BINARY {
                check_binary(op, w, signed);
            }
        }
    }
}

pub fn unary_operators_and_overflow() {
    for w in [1u32, 4, 8] {
        for signed in [false, true] {
            let t = ty(w, signed);
            let a = var("a", 1, &t);
            let b = var("b", 1, &t);
            let mut bb = BitBlaster::new();
            let neg = bb.convert(&Expr::unary(UnaryOp::Neg, a.clone())).bits().clone();
            let not = bb.convert(&Expr::unary(UnaryOp::BitNot, a.clone())).bits().clone();
            let ovf: Vec<_> = [OverflowOp::Add, OverflowOp::Sub, OverflowOp::Mul]
                .into_iter()
                .map(|op| (op, bb.convert(&Expr::overflow(op, a.clone(), b.clone())).bits()[0]))
                .collect();
            let xa = bb.convert(&a).bits().clone();
            let xb = bb.convert(&b).bits().clone();
            let (lo, hi) = if signed {
                (-(1i128 << (w - 1)), (1i128 << (w - 1)) - 1)
            } else {
                (0, (1i128 << w) - 1)
            };
            for x in 0..1u64 << w {
                for y in 0..1u64 << w {
                    let inputs: Vec<(Lit, bool)> = xa
                        .iter()
                        .enumerate()
                        .map(|(i, &l)| (l, x >> i & 1 == 1))
                        .chain(xb.iter().enumerate().map(|(i, &l)| (l, y >> i & 1 == 1)))
                        .collect();
                    let m = simulate(&bb.cnf, &inputs);
                    let (p, q) = (to_int(x, w, signed), to_int(y, w, signed));
                    assert_eq!(read_bits(&neg, &m), wrap(-p, w));
                    assert_eq!(read_bits(&not, &m), wrap(!p, w));
                    for (op, l) in &ovf {
                        let exact = match op {
                            OverflowOp::Add => p + q,
                            OverflowOp::Sub => p - q,
                            OverflowOp::Mul => p * q,
                        };
                        assert_eq!(l.eval(&m), exact < lo || exact > hi, "{op:?} {w} {signed} {p} {q}");
                    }
                }
            }
        }
    }
}

pub fn casts_between_widths() {
    for from_w in [1u32, 4, 8] {
        for to_w in [1u32, 4, 8] {
            for fs in [false, true] {
                for ts in [false, true] {
                    let from = ty(from_w, fs);
                    let a = var("a", 1, &from);
                    let mut bb = BitBlaster::new();
                    let out = bb.convert(&Expr::typecast(a.clone(), ty(to_w, ts))).bits().clone();
                    let to_bool = bb.convert(&Expr::typecast(a.clone(), CType::Bool)).bits().clone();
                    let xa = bb.convert(&a).bits().clone();
                    for x in 0..1u64 << from_w {
                        let inputs: Vec<(Lit, bool)> =
                            xa.iter().enumerate().map(|(i, &l)| (l, x >> i & 1 == 1)).collect();
                        let m = simulate(&bb.cnf, &inputs);
                        assert_eq!(read_bits(&out, &m), wrap(to_int(x, from_w, fs), to_w));
                        assert_eq!(read_bits(&to_bool, &m), (x != 0) as u64);
                    }
                }
            }
        }
    }
}

pub fn unary_minus_overflow_only_at_minimum() {
    let t = ty(4, true);
    let x = var("x", 1, &t);
    let min = Expr::from_i64(-8, t.clone());
    let mut bb = BitBlaster::new();
    let violated = bb.convert(&Expr::eq(x.clone(), min)).bits()[0];
    let bits = bb.convert(&x).bits().clone();
    let mut s = Solver::new();
    for c in &bb.cnf.clauses {
        s.add_clause(c);
    }
    let mut solutions = Vec::new();
    loop {
        if s.solve(&[violated]) == SolveResult::Unsat {
            break;
        }
        let v = read_bits(&bits, s.model());
        solutions.push(to_int(v, 4, true));
        let block: Vec<Lit> = bits.iter().map(|&l| if l.eval(s.model()) { !l } else { l }).collect();
        s.add_clause(&block);
    }
    assert_eq!(solutions, vec![-8]);
}

pub fn solver_agrees_with_simulation_on_samples() {
    let t = ty(8, true);
    let a = var("a", 1, &t);
    let b = var("b", 1, &t);
    let mut bb = BitBlaster::new();
    let e = Expr::binary(BinaryOp::Mul, a.clone(), b.clone());
    let out = bb.convert(&e).bits().clone();
    let xa = bb.convert(&a).bits().clone();
    let xb = bb.convert(&b).bits().clone();
    let mut s = Solver::new();
    for c in &bb.cnf.clauses {
        s.add_clause(c);
    }
    for (x, y) in [(3u64, 5u64), (200, 77), (128, 255), (0, 9)] {
        let mut assume: Vec<Lit> = xa
            .iter()
            .enumerate()
            .map(|(i, &l)| if x >> i & 1 == 1 { l } else { !l })
            .collect();
        assume.extend(
            xb.iter()
                .enumerate()
                .map(|(i, &l)| if y >> i & 1 == 1 { l } else { !l }),
        );
        assert_eq!(s.solve(&assume), SolveResult::Sat);
        assert_eq!(
            read_bits(&out, s.model()),
            wrap(to_int(x, 8, true) * to_int(y, 8, true), 8)
        );
    }
}
