//! Typed expressions shared by every stage after type checking.

use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::types::{CType, Ident, SourceLocation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnaryOp {
    Neg,
    /// Boolean negation; operand is `bool`.
    Not,
    BitNot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Shl,
    Shr,
    BitAnd,
    BitOr,
    BitXor,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    /// Boolean conjunction without short-circuit semantics.
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Mod => "%",
            BinaryOp::Shl => "<<",
            BinaryOp::Shr => ">>",
            BinaryOp::BitAnd => "&",
            BinaryOp::BitOr => "|",
            BinaryOp::BitXor => "^",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    pub fn is_relation(self) -> bool {
        matches!(
            self,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge | BinaryOp::Eq | BinaryOp::Ne
        )
    }

    pub fn is_logical(self) -> bool {
        matches!(self, BinaryOp::And | BinaryOp::Or)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OverflowOp {
    Add,
    Sub,
    Mul,
}

impl OverflowOp {
    pub fn symbol(self) -> &'static str {
        match self {
            OverflowOp::Add => "+",
            OverflowOp::Sub => "-",
            OverflowOp::Mul => "*",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExprKind {
    /// Two's-complement bit pattern, masked to the width of the type.
    Constant(u64),
    Symbol(Ident),
    SsaSymbol {
        name: Ident,
        level: u32,
        version: u32,
    },
    /// A fresh unconstrained value at every evaluation.
    Nondet,
    /// A specific unconstrained value introduced during symbolic execution.
    FreeSymbol(u32),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Index(Box<Expr>, Box<Expr>),
    Typecast(Box<Expr>),
    Conditional(Box<Expr>, Box<Expr>, Box<Expr>),
    ArrayLit(Vec<Expr>),
    /// Array `0` with element `1` replaced by `2`.
    With(Box<Expr>, Box<Expr>, Box<Expr>),
    /// True iff the mathematically exact result does not fit the operand type.
    Overflow(OverflowOp, Box<Expr>, Box<Expr>),
    FunctionAddress(Ident),
    StringLit(Arc<str>),
    /// Side effect: assigns `rhs` to `lhs`; evaluates to the old value when
    /// `post` is set, the new value otherwise.
    Assign {
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        post: bool,
    },
    Call(Box<Expr>, Vec<Expr>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Expr {
    pub kind: ExprKind,
    pub ty: CType,
    pub loc: Option<Arc<SourceLocation>>,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.ty == other.ty
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.ty.hash(state);
    }
}

/// Masks `v` to the low `width` bits.
pub fn mask(v: u64, width: u32) -> u64 {
    if width >= 64 {
        v
    } else {
        v & ((1u64 << width) - 1)
    }
}

/// Interprets the low `width` bits of `v` as a two's-complement number.
pub fn sign_extend(v: u64, width: u32) -> i64 {
    if width == 0 {
        return 0;
    }
    if width >= 64 {
        return v as i64;
    }
    let shift = 64 - width;
    ((v << shift) as i64) >> shift
}

impl Expr {
    pub fn new(kind: ExprKind, ty: CType) -> Expr {
        Expr { kind, ty, loc: None }
    }

    pub fn with_loc(mut self, loc: Option<Arc<SourceLocation>>) -> Expr {
        self.loc = loc;
        self
    }

    pub fn constant(value: u64, ty: CType) -> Expr {
        let w = ty.width().unwrap_or(64);
        Expr::new(ExprKind::Constant(mask(value, w)), ty)
    }

    pub fn from_i64(value: i64, ty: CType) -> Expr {
        Expr::constant(value as u64, ty)
    }

    pub fn bool_const(b: bool) -> Expr {
        Expr::constant(b as u64, CType::Bool)
    }

    pub fn true_expr() -> Expr {
        Expr::bool_const(true)
    }

    pub fn false_expr() -> Expr {
        Expr::bool_const(false)
    }

    pub fn symbol(name: Ident, ty: CType) -> Expr {
        Expr::new(ExprKind::Symbol(name), ty)
    }

    pub fn nondet(ty: CType) -> Expr {
        Expr::new(ExprKind::Nondet, ty)
    }

    pub fn unary(op: UnaryOp, a: Expr) -> Expr {
        let ty = a.ty.clone();
        Expr::new(ExprKind::Unary(op, Box::new(a)), ty)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Expr) -> Expr {
        Expr::new(ExprKind::Unary(UnaryOp::Not, Box::new(a)), CType::Bool)
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        let ty = if op.is_relation() || op.is_logical() {
            CType::Bool
        } else {
            a.ty.clone()
        };
        Expr::new(ExprKind::Binary(op, Box::new(a), Box::new(b)), ty)
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::And, a, b)
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Or, a, b)
    }

    pub fn eq(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Eq, a, b)
    }

    pub fn implies(a: Expr, b: Expr) -> Expr {
        Expr::or(Expr::not(a), b)
    }

    pub fn typecast(a: Expr, ty: CType) -> Expr {
        Expr::new(ExprKind::Typecast(Box::new(a)), ty)
    }

    pub fn index(a: Expr, i: Expr) -> Expr {
        let ty = a.ty.element().cloned().unwrap_or(CType::Void);
        Expr::new(ExprKind::Index(Box::new(a), Box::new(i)), ty)
    }

    pub fn conditional(c: Expr, a: Expr, b: Expr) -> Expr {
        let ty = a.ty.clone();
        Expr::new(ExprKind::Conditional(Box::new(c), Box::new(a), Box::new(b)), ty)
    }

    pub fn with(a: Expr, i: Expr, v: Expr) -> Expr {
        let ty = a.ty.clone();
        Expr::new(ExprKind::With(Box::new(a), Box::new(i), Box::new(v)), ty)
    }

    pub fn overflow(op: OverflowOp, a: Expr, b: Expr) -> Expr {
        Expr::new(ExprKind::Overflow(op, Box::new(a), Box::new(b)), CType::Bool)
    }

    /// Conjunction of a list, `TRUE` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut it = items.into_iter();
        match it.next() {
            None => Expr::true_expr(),
            Some(first) => it.fold(first, Expr::and),
        }
    }

    pub fn disjunction(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut it = items.into_iter();
        match it.next() {
            None => Expr::false_expr(),
            Some(first) => it.fold(first, Expr::or),
        }
    }

    pub fn as_constant(&self) -> Option<u64> {
        match self.kind {
            ExprKind::Constant(v) => Some(v),
            _ => None,
        }
    }

    /// Value of an integer constant, sign-extended for signed types.
    pub fn as_i128(&self) -> Option<i128> {
        let v = self.as_constant()?;
        let w = self.ty.width()?;
        Some(if self.ty.is_signed() {
            sign_extend(v, w) as i128
        } else {
            v as i128
        })
    }

    pub fn is_true(&self) -> bool {
        self.ty.is_bool() && self.as_constant() == Some(1)
    }

    pub fn is_false(&self) -> bool {
        self.ty.is_bool() && self.as_constant() == Some(0)
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, ExprKind::Constant(_))
    }

    /// Whether the tree (recursively) is made of constants only.
    pub fn is_constant_tree(&self) -> bool {
        match &self.kind {
            ExprKind::Constant(_) => true,
            ExprKind::ArrayLit(items) => items.iter().all(Expr::is_constant_tree),
            _ => false,
        }
    }

    pub fn has_side_effects(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if matches!(e.kind, ExprKind::Assign { .. } | ExprKind::Call(..) | ExprKind::Nondet) {
                found = true;
            }
        });
        found
    }

    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Constant(_)
            | ExprKind::Symbol(_)
            | ExprKind::SsaSymbol { .. }
            | ExprKind::Nondet
            | ExprKind::FreeSymbol(_)
            | ExprKind::FunctionAddress(_)
            | ExprKind::StringLit(_) => vec![],
            ExprKind::Unary(_, a) | ExprKind::Typecast(a) => vec![a],
            ExprKind::Binary(_, a, b) | ExprKind::Index(a, b) | ExprKind::Overflow(_, a, b) => vec![a, b],
            ExprKind::Conditional(a, b, c) | ExprKind::With(a, b, c) => vec![a, b, c],
            ExprKind::ArrayLit(items) => items.iter().collect(),
            ExprKind::Assign { lhs, rhs, .. } => vec![lhs, rhs],
            ExprKind::Call(f, args) => std::iter::once(&**f).chain(args.iter()).collect(),
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            ExprKind::Constant(_)
            | ExprKind::Symbol(_)
            | ExprKind::SsaSymbol { .. }
            | ExprKind::Nondet
            | ExprKind::FreeSymbol(_)
            | ExprKind::FunctionAddress(_)
            | ExprKind::StringLit(_) => vec![],
            ExprKind::Unary(_, a) | ExprKind::Typecast(a) => vec![a],
            ExprKind::Binary(_, a, b) | ExprKind::Index(a, b) | ExprKind::Overflow(_, a, b) => vec![a, b],
            ExprKind::Conditional(a, b, c) | ExprKind::With(a, b, c) => vec![a, b, c],
            ExprKind::ArrayLit(items) => items.iter_mut().collect(),
            ExprKind::Assign { lhs, rhs, .. } => vec![lhs, rhs],
            ExprKind::Call(f, args) => std::iter::once(&mut **f).chain(args.iter_mut()).collect(),
        }
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Bottom-up rewrite.
    pub fn map(mut self, f: &mut impl FnMut(Expr) -> Expr) -> Expr {
        for c in self.children_mut() {
            let taken = std::mem::replace(c, Expr::false_expr());
            *c = taken.map(f);
        }
        f(self)
    }

    pub fn symbols(&self) -> Vec<Ident> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let ExprKind::Symbol(n) = &e.kind {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
        });
        out
    }

    /// The root symbol of an lvalue such as `a[i][j]`.
    pub fn lvalue_root(&self) -> Option<&Ident> {
        match &self.kind {
            ExprKind::Symbol(n) => Some(n),
            ExprKind::Index(a, _) => a.lvalue_root(),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}
