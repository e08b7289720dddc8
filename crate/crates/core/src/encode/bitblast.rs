//! Bit-level circuits for expressions, emitted as Tseitin clauses.

use std::collections::HashMap;

use crate::frontend::expr::{BinaryOp, Expr, ExprKind, OverflowOp, UnaryOp};
use crate::frontend::types::{CType, Ident};
use crate::sat::{CnfFormula, Lit};

/// Bits of a value, least significant first.
pub type Bv = Vec<Lit>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Bits(Bv),
    Array(Vec<Value>),
}

impl Value {
    pub fn bits(&self) -> &Bv {
        match self {
            Value::Bits(b) => b,
            Value::Array(_) => panic!("array used as scalar"),
        }
    }

    pub fn elements(&self) -> &[Value] {
        match self {
            Value::Array(items) => items,
            Value::Bits(_) => panic!("scalar used as array"),
        }
    }

    /// Every literal of the value in order.
    pub fn lits(&self) -> Vec<Lit> {
        match self {
            Value::Bits(b) => b.clone(),
            Value::Array(items) => items.iter().flat_map(Value::lits).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKey {
    Ssa { name: Ident, level: u32, version: u32 },
    Free(u32),
}

pub struct BitBlaster {
    pub cnf: CnfFormula,
    pub symbols: HashMap<SymbolKey, Value>,
    /// Symbols in allocation order.
    pub order: Vec<SymbolKey>,
    cache: HashMap<Expr, Value>,
    functions: HashMap<Ident, u64>,
}

impl Default for BitBlaster {
    fn default() -> Self {
        Self::new()
    }
}

pub fn width_of(ty: &CType) -> usize {
    ty.width().unwrap_or(0) as usize
}

impl BitBlaster {
    pub fn new() -> Self {
        let mut cnf = CnfFormula::new();
        let t = cnf.new_var();
        cnf.add_clause(vec![Lit::positive(t)]);
        BitBlaster {
            cnf,
            symbols: HashMap::new(),
            order: Vec::new(),
            cache: HashMap::new(),
            functions: HashMap::new(),
        }
    }

    pub fn true_lit(&self) -> Lit {
        Lit::positive(0)
    }

    pub fn false_lit(&self) -> Lit {
        !self.true_lit()
    }

    pub fn constant_bit(&self, b: bool) -> Lit {
        if b {
            self.true_lit()
        } else {
            self.false_lit()
        }
    }

    pub fn fresh(&mut self) -> Lit {
        Lit::positive(self.cnf.new_var())
    }

    fn is_const(&self, l: Lit) -> Option<bool> {
        if l.var() == 0 {
            Some(!l.is_negated())
        } else {
            None
        }
    }

    pub fn fresh_value(&mut self, ty: &CType) -> Value {
        match ty {
            CType::Array { element, size } => Value::Array((0..*size).map(|_| self.fresh_value(element)).collect()),
            _ => Value::Bits((0..width_of(ty)).map(|_| self.fresh()).collect()),
        }
    }

    pub fn const_bits(&self, v: u64, width: usize) -> Bv {
        (0..width)
            .map(|i| self.constant_bit(i < 64 && (v >> i) & 1 == 1))
            .collect()
    }

    // Gates.

    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
        match (self.is_const(a), self.is_const(b)) {
            (Some(false), _) | (_, Some(false)) => return self.false_lit(),
            (Some(true), _) => return b,
            (_, Some(true)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        if a == !b {
            return self.false_lit();
        }
        let o = self.fresh();
        self.cnf.add_clause(vec![!o, a]);
        self.cnf.add_clause(vec![!o, b]);
        self.cnf.add_clause(vec![o, !a, !b]);
        o
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        !self.and(!a, !b)
    }

    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        match (self.is_const(a), self.is_const(b)) {
            (Some(x), _) => return if x { !b } else { b },
            (_, Some(y)) => return if y { !a } else { a },
            _ => {}
        }
        if a == b {
            return self.false_lit();
        }
        if a == !b {
            return self.true_lit();
        }
        let o = self.fresh();
        self.cnf.add_clause(vec![!o, a, b]);
        self.cnf.add_clause(vec![!o, !a, !b]);
        self.cnf.add_clause(vec![o, !a, b]);
        self.cnf.add_clause(vec![o, a, !b]);
        o
    }

    /// `s ? a : b`
    pub fn mux(&mut self, s: Lit, a: Lit, b: Lit) -> Lit {
        match self.is_const(s) {
            Some(true) => return a,
            Some(false) => return b,
            None => {}
        }
        if a == b {
            return a;
        }
        match (self.is_const(a), self.is_const(b)) {
            (Some(true), _) => return self.or(s, b),
            (Some(false), _) => return self.and(!s, b),
            (_, Some(true)) => return self.or(!s, a),
            (_, Some(false)) => return self.and(s, a),
            _ => {}
        }
        let o = self.fresh();
        self.cnf.add_clause(vec![!s, !a, o]);
        self.cnf.add_clause(vec![!s, a, !o]);
        self.cnf.add_clause(vec![s, !b, o]);
        self.cnf.add_clause(vec![s, b, !o]);
        o
    }

    pub fn and_all(&mut self, lits: &[Lit]) -> Lit {
        lits.iter().fold(self.true_lit(), |acc, &l| self.and(acc, l))
    }

    pub fn or_all(&mut self, lits: &[Lit]) -> Lit {
        lits.iter().fold(self.false_lit(), |acc, &l| self.or(acc, l))
    }

    // Word-level circuits.

    pub fn mux_bits(&mut self, s: Lit, a: &[Lit], b: &[Lit]) -> Bv {
        a.iter().zip(b).map(|(&x, &y)| self.mux(s, x, y)).collect()
    }

    pub fn mux_value(&mut self, s: Lit, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Bits(x), Value::Bits(y)) => Value::Bits(self.mux_bits(s, x, y)),
            (Value::Array(x), Value::Array(y)) => {
                Value::Array(x.iter().zip(y).map(|(p, q)| self.mux_value(s, p, q)).collect())
            }
            _ => panic!("mux of mismatched values"),
        }
    }

    /// Ripple-carry adder; returns the sum and the carry out.
    pub fn add(&mut self, a: &[Lit], b: &[Lit], carry_in: Lit) -> (Bv, Lit) {
        let mut carry = carry_in;
        let mut sum = Vec::with_capacity(a.len());
        for (&x, &y) in a.iter().zip(b) {
            let t = self.xor(x, y);
            sum.push(self.xor(t, carry));
            let g = self.and(x, y);
            let p = self.and(t, carry);
            carry = self.or(g, p);
        }
        (sum, carry)
    }

    pub fn sub(&mut self, a: &[Lit], b: &[Lit]) -> Bv {
        let nb: Bv = b.iter().map(|&l| !l).collect();
        let t = self.true_lit();
        self.add(a, &nb, t).0
    }

    pub fn neg(&mut self, a: &[Lit]) -> Bv {
        let zero = self.const_bits(0, a.len());
        self.sub(&zero, a)
    }

    /// Shift-and-add multiplier, truncated to the operand width.
    pub fn mul(&mut self, a: &[Lit], b: &[Lit]) -> Bv {
        let w = a.len();
        let mut acc = self.const_bits(0, w);
        for i in 0..w {
            let mut partial = self.const_bits(0, w);
            for j in 0..w - i {
                partial[i + j] = self.and(a[j], b[i]);
            }
            let f = self.false_lit();
            acc = self.add(&acc, &partial, f).0;
        }
        acc
    }

    /// Restoring division of unsigned operands; quotient and remainder.
    /// The result for a zero divisor is unspecified.
    pub fn udivrem(&mut self, a: &[Lit], b: &[Lit]) -> (Bv, Bv) {
        let w = a.len();
        let f = self.false_lit();
        let mut rem = self.const_bits(0, w + 1);
        let mut wide_b: Bv = b.to_vec();
        wide_b.push(f);
        let mut q = vec![f; w];
        for i in (0..w).rev() {
            let mut shifted = vec![a[i]];
            shifted.extend_from_slice(&rem[..w]);
            let nb: Bv = wide_b.iter().map(|&l| !l).collect();
            let t = self.true_lit();
            let (diff, no_borrow) = self.add(&shifted, &nb, t);
            q[i] = no_borrow;
            rem = self.mux_bits(no_borrow, &diff, &shifted);
        }
        rem.truncate(w);
        (q, rem)
    }

    pub fn sdivrem(&mut self, a: &[Lit], b: &[Lit]) -> (Bv, Bv) {
        let w = a.len();
        let (sa, sb) = (a[w - 1], b[w - 1]);
        let na = self.neg(a);
        let nb = self.neg(b);
        let abs_a = self.mux_bits(sa, &na, a);
        let abs_b = self.mux_bits(sb, &nb, b);
        let (q, r) = self.udivrem(&abs_a, &abs_b);
        let flip = self.xor(sa, sb);
        let nq = self.neg(&q);
        let nr = self.neg(&r);
        (self.mux_bits(flip, &nq, &q), self.mux_bits(sa, &nr, &r))
    }

    pub fn eq_bits(&mut self, a: &[Lit], b: &[Lit]) -> Lit {
        let same: Vec<Lit> = a.iter().zip(b).map(|(&x, &y)| !self.xor(x, y)).collect();
        self.and_all(&same)
    }

    pub fn eq_value(&mut self, a: &Value, b: &Value) -> Lit {
        let (x, y) = (a.lits(), b.lits());
        self.eq_bits(&x, &y)
    }

    pub fn ult(&mut self, a: &[Lit], b: &[Lit]) -> Lit {
        let nb: Bv = b.iter().map(|&l| !l).collect();
        let t = self.true_lit();
        let (_, no_borrow) = self.add(a, &nb, t);
        !no_borrow
    }

    pub fn slt(&mut self, a: &[Lit], b: &[Lit]) -> Lit {
        let w = a.len();
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        x[w - 1] = !x[w - 1];
        y[w - 1] = !y[w - 1];
        self.ult(&x, &y)
    }

    /// Barrel shifter. Distances of at least the width fill with `fill`.
    pub fn shift(&mut self, a: &[Lit], dist: &[Lit], left: bool, fill: Lit) -> Bv {
        let w = a.len();
        let mut x = a.to_vec();
        let mut too_far = Vec::new();
        for (k, &d) in dist.iter().enumerate() {
            let amount = if k < 63 { 1usize << k } else { usize::MAX };
            if amount >= w {
                too_far.push(d);
                continue;
            }
            let shifted: Bv = (0..w)
                .map(|i| {
                    if left {
                        if i >= amount {
                            x[i - amount]
                        } else {
                            self.false_lit()
                        }
                    } else if i + amount < w {
                        x[i + amount]
                    } else {
                        fill
                    }
                })
                .collect();
            x = self.mux_bits(d, &shifted, &x);
        }
        let far = self.or_all(&too_far);
        let filled = vec![if left { self.false_lit() } else { fill }; w];
        self.mux_bits(far, &filled, &x)
    }

    pub fn extend(&self, a: &[Lit], width: usize, signed: bool) -> Bv {
        let mut out: Bv = a.iter().copied().take(width).collect();
        let fill = if signed && !a.is_empty() {
            a[a.len() - 1]
        } else {
            self.false_lit()
        };
        while out.len() < width {
            out.push(fill);
        }
        out
    }

    pub fn overflow(&mut self, op: OverflowOp, a: &[Lit], b: &[Lit], signed: bool) -> Lit {
        let w = a.len();
        let wide = 2 * w + 2;
        let x = self.extend(a, wide, signed);
        let y = self.extend(b, wide, signed);
        let exact = match op {
            OverflowOp::Add => {
                let f = self.false_lit();
                self.add(&x, &y, f).0
            }
            OverflowOp::Sub => self.sub(&x, &y),
            OverflowOp::Mul => self.mul(&x, &y),
        };
        let fits = if signed {
            let sign = exact[w - 1];
            let same: Vec<Lit> = exact[w..].iter().map(|&l| !self.xor(l, sign)).collect();
            self.and_all(&same)
        } else {
            let zero: Vec<Lit> = exact[w..].iter().map(|&l| !l).collect();
            self.and_all(&zero)
        };
        !fits
    }

    fn function_id(&mut self, name: &Ident) -> u64 {
        let next = self.functions.len() as u64 + 1;
        *self.functions.entry(name.clone()).or_insert(next)
    }

    pub fn symbol(&mut self, key: SymbolKey, ty: &CType) -> Value {
        if let Some(v) = self.symbols.get(&key) {
            return v.clone();
        }
        let v = self.fresh_value(ty);
        self.symbols.insert(key.clone(), v.clone());
        self.order.push(key);
        v
    }

    /// Binds a symbol to the value of its defining expression.
    pub fn define(&mut self, key: SymbolKey, value: Value) {
        if let Some(old) = self.symbols.get(&key).cloned() {
            let e = self.eq_value(&old, &value);
            self.cnf.add_clause(vec![e]);
            return;
        }
        self.symbols.insert(key.clone(), value);
        self.order.push(key);
    }

    pub fn convert_bool(&mut self, e: &Expr) -> Lit {
        let v = self.convert(e);
        let bits = v.bits();
        if e.ty.is_bool() {
            bits[0]
        } else {
            self.or_all(&bits.clone())
        }
    }

    pub fn convert(&mut self, e: &Expr) -> Value {
        if let Some(v) = self.cache.get(e) {
            return v.clone();
        }
        let v = self.convert_uncached(e);
        self.cache.insert(e.clone(), v.clone());
        v
    }

    fn convert_uncached(&mut self, e: &Expr) -> Value {
        let w = width_of(&e.ty);
        match &e.kind {
            ExprKind::Constant(v) => Value::Bits(self.const_bits(*v, w)),
            ExprKind::SsaSymbol { name, level, version } => self.symbol(
                SymbolKey::Ssa {
                    name: name.clone(),
                    level: *level,
                    version: *version,
                },
                &e.ty,
            ),
            ExprKind::FreeSymbol(n) => self.symbol(SymbolKey::Free(*n), &e.ty),
            ExprKind::Nondet => self.fresh_value(&e.ty),
            ExprKind::FunctionAddress(name) => {
                let id = self.function_id(name);
                Value::Bits(self.const_bits(id, w))
            }
            ExprKind::Unary(op, a) => {
                let x = self.convert(a).bits().clone();
                Value::Bits(match op {
                    UnaryOp::Neg => self.neg(&x),
                    UnaryOp::BitNot => x.iter().map(|&l| !l).collect(),
                    UnaryOp::Not => {
                        let b = self.convert_bool(a);
                        vec![!b]
                    }
                })
            }
            ExprKind::Binary(op, a, b) => self.binary(*op, a, b),
            ExprKind::Typecast(a) => {
                if e.ty.is_bool() {
                    let b = self.convert_bool(a);
                    return Value::Bits(vec![b]);
                }
                let x = self.convert(a).bits().clone();
                Value::Bits(self.extend(&x, w, a.ty.is_signed()))
            }
            ExprKind::Conditional(c, a, b) => {
                let s = self.convert_bool(c);
                let x = self.convert(a);
                let y = self.convert(b);
                self.mux_value(s, &x, &y)
            }
            ExprKind::ArrayLit(items) => Value::Array(items.iter().map(|i| self.convert(i)).collect()),
            ExprKind::Index(a, i) => {
                let arr = self.convert(a);
                let idx = self.convert(i).bits().clone();
                let elems = arr.elements().to_vec();
                // Out-of-bounds reads yield an unconstrained value.
                let mut out = self.fresh_value(&e.ty);
                for (k, elem) in elems.iter().enumerate().rev() {
                    if !idx_fits(k, idx.len()) {
                        continue;
                    }
                    let kb = self.const_bits(k as u64, idx.len());
                    let hit = self.eq_bits(&idx, &kb);
                    out = self.mux_value(hit, elem, &out);
                }
                out
            }
            ExprKind::With(a, i, v) => {
                let arr = self.convert(a);
                let idx = self.convert(i).bits().clone();
                let val = self.convert(v);
                let elems = arr.elements().to_vec();
                let mut out = Vec::with_capacity(elems.len());
                for (k, elem) in elems.iter().enumerate() {
                    let kb = self.const_bits(k as u64, idx.len());
                    let hit = if idx_fits(k, idx.len()) {
                        self.eq_bits(&idx, &kb)
                    } else {
                        self.false_lit()
                    };
                    out.push(self.mux_value(hit, &val, elem));
                }
                Value::Array(out)
            }
            ExprKind::Overflow(op, a, b) => {
                let x = self.convert(a).bits().clone();
                let y = self.convert(b).bits().clone();
                Value::Bits(vec![self.overflow(*op, &x, &y, a.ty.is_signed())])
            }
            _ => panic!("expression `{e}' cannot be bit-blasted"),
        }
    }

    fn binary(&mut self, op: BinaryOp, a: &Expr, b: &Expr) -> Value {
        if op.is_logical() {
            let x = self.convert_bool(a);
            let y = self.convert_bool(b);
            return Value::Bits(vec![if op == BinaryOp::And {
                self.and(x, y)
            } else {
                self.or(x, y)
            }]);
        }
        if matches!(op, BinaryOp::Eq | BinaryOp::Ne) {
            let x = self.convert(a);
            let y = self.convert(b);
            let e = self.eq_value(&x, &y);
            return Value::Bits(vec![if op == BinaryOp::Eq { e } else { !e }]);
        }
        let x = self.convert(a).bits().clone();
        let y = self.convert(b).bits().clone();
        let signed = a.ty.is_signed();
        let r = match op {
            BinaryOp::Add => {
                let f = self.false_lit();
                self.add(&x, &y, f).0
            }
            BinaryOp::Sub => self.sub(&x, &y),
            BinaryOp::Mul => self.mul(&x, &y),
            BinaryOp::Div | BinaryOp::Mod => {
                let (q, r) = if signed {
                    self.sdivrem(&x, &y)
                } else {
                    self.udivrem(&x, &y)
                };
                let result = if op == BinaryOp::Div { q } else { r };
                let zero = self.const_bits(0, y.len());
                let by_zero = self.eq_bits(&y, &zero);
                let any: Bv = (0..result.len()).map(|_| self.fresh()).collect();
                self.mux_bits(by_zero, &any, &result)
            }
            BinaryOp::Shl | BinaryOp::Shr => {
                let fill = if op == BinaryOp::Shr && signed {
                    x[x.len() - 1]
                } else {
                    self.false_lit()
                };
                self.shift(&x, &y, op == BinaryOp::Shl, fill)
            }
            BinaryOp::BitAnd => x.iter().zip(&y).map(|(&p, &q)| self.and(p, q)).collect(),
            BinaryOp::BitOr => x.iter().zip(&y).map(|(&p, &q)| self.or(p, q)).collect(),
            BinaryOp::BitXor => x.iter().zip(&y).map(|(&p, &q)| self.xor(p, q)).collect(),
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => {
                let (p, q, strict) = match op {
                    BinaryOp::Lt => (&x, &y, true),
                    BinaryOp::Gt => (&y, &x, true),
                    BinaryOp::Le => (&y, &x, false),
                    _ => (&x, &y, false),
                };
                let less = if signed { self.slt(p, q) } else { self.ult(p, q) };
                vec![if strict { less } else { !less }]
            }
            BinaryOp::Eq | BinaryOp::Ne | BinaryOp::And | BinaryOp::Or => unreachable!(),
        };
        Value::Bits(r)
    }
}

fn idx_fits(k: usize, width: usize) -> bool {
    width >= 64 || (k as u64) < (1u64 << width)
}

/// Reads a value from a model as an unsigned bit pattern.
pub fn read_bits(bits: &[Lit], model: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .filter(|(i, l)| *i < 64 && l.eval(model))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{SolveResult, Solver};

    fn solver_for(bb: &BitBlaster) -> Solver {
        let mut s = Solver::new();
        s.ensure_vars(bb.cnf.num_vars);
        for c in &bb.cnf.clauses {
            s.add_clause(c);
        }
        s
    }

    #[test]
    fn one_bit_equality_is_xnor() {
        let mut bb = BitBlaster::new();
        let a = bb.fresh();
        let b = bb.fresh();
        let e = bb.eq_bits(&[a], &[b]);
        let mut count = 0;
        for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
            let mut s = solver_for(&bb);
            let assume = [if x { a } else { !a }, if y { b } else { !b }];
            assert_eq!(s.solve(&assume), SolveResult::Sat);
            if e.eval(s.model()) {
                count += 1;
                assert_eq!(x, y);
            }
        }
        assert_eq!(count, 2);
    }

    #[test]
    fn constant_folding_avoids_variables() {
        let mut bb = BitBlaster::new();
        let a = bb.const_bits(5, 4);
        let b = bb.const_bits(6, 4);
        let f = bb.false_lit();
        let (sum, _) = bb.add(&a, &b, f);
        assert_eq!(bb.cnf.num_vars, 1);
        assert_eq!(read_bits(&sum, &[true]), 11);
    }
}
