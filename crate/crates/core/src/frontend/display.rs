//! C-like rendering of typed expressions.

use std::fmt;

use super::expr::{sign_extend, BinaryOp, Expr, ExprKind, UnaryOp};
use super::types::{CType, IntKind};

/// Source-level name of a mangled identifier: `abs::y` prints as `y`.
pub fn pretty_name(name: &str) -> &str {
    let base = match name.rfind("::") {
        Some(i) => &name[i + 2..],
        None => name,
    };
    match base.find('!') {
        Some(i) if !base.contains('#') => &base[..i],
        _ => base,
    }
}

/// Renders a constant bit pattern of the given type.
pub fn constant_text(value: u64, ty: &CType) -> String {
    match ty {
        CType::Bool => if value != 0 { "TRUE" } else { "FALSE" }.to_string(),
        CType::Int { signed, width, kind } => {
            let digits = if *signed {
                sign_extend(value, *width).to_string()
            } else {
                value.to_string()
            };
            let suffix = match (signed, kind) {
                (true, IntKind::Long) => "l",
                (true, IntKind::LongLong) => "ll",
                (false, IntKind::Int) => "u",
                (false, IntKind::Long) => "ul",
                (false, IntKind::LongLong) => "ull",
                _ => "",
            };
            format!("{digits}{suffix}")
        }
        CType::Pointer { .. } if value == 0 => "NULL".to_string(),
        _ => value.to_string(),
    }
}

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Constant(v) if e.ty.is_signed() && sign_extend(*v, e.ty.width().unwrap_or(64)) < 0 => 15,
        ExprKind::Unary(..) | ExprKind::Typecast(_) | ExprKind::FunctionAddress(_) => 15,
        ExprKind::Binary(op, ..) => binary_precedence(*op),
        ExprKind::Conditional(_, a, b) if e.ty.is_bool() && (b.is_false() || a.is_true()) => {
            if b.is_false() {
                5
            } else {
                4
            }
        }
        ExprKind::Conditional(..) => 3,
        ExprKind::With(..) => 3,
        ExprKind::Assign { .. } => 2,
        _ => 16,
    }
}

fn binary_precedence(op: BinaryOp) -> u8 {
    match op {
        BinaryOp::Mul | BinaryOp::Div | BinaryOp::Mod => 13,
        BinaryOp::Add | BinaryOp::Sub => 12,
        BinaryOp::Shl | BinaryOp::Shr => 11,
        BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 10,
        BinaryOp::Eq | BinaryOp::Ne => 9,
        BinaryOp::BitAnd => 8,
        BinaryOp::BitXor => 7,
        BinaryOp::BitOr => 6,
        BinaryOp::And => 5,
        BinaryOp::Or => 4,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn escape(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Constant(v) => f.write_str(&constant_text(*v, &self.ty)),
            ExprKind::Symbol(n) => f.write_str(pretty_name(n)),
            ExprKind::SsaSymbol { name, level, version } => {
                write!(f, "{}", pretty_name(name))?;
                if *level > 0 {
                    write!(f, "@{level}")?;
                }
                write!(f, "#{version}")
            }
            ExprKind::Nondet => write!(f, "NONDET({})", self.ty),
            ExprKind::FreeSymbol(n) => write!(f, "nondet#{n}"),
            ExprKind::Unary(op, a) => {
                let sym = match op {
                    UnaryOp::Neg => "-",
                    UnaryOp::Not => "!",
                    UnaryOp::BitNot => "~",
                };
                f.write_str(sym)?;
                write_operand(f, a, 16)
            }
            ExprKind::Binary(op, a, b) => {
                let p = binary_precedence(*op);
                write_operand(f, a, p)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, b, p + 1)
            }
            ExprKind::Index(a, i) => {
                write_operand(f, a, 16)?;
                write!(f, "[{i}]")
            }
            ExprKind::Typecast(a) => {
                write!(f, "({})", self.ty)?;
                write_operand(f, a, 15)
            }
            ExprKind::Conditional(c, a, b) if self.ty.is_bool() && b.is_false() => {
                write_operand(f, c, 5)?;
                f.write_str(" && ")?;
                write_operand(f, a, 6)
            }
            ExprKind::Conditional(c, a, b) if self.ty.is_bool() && a.is_true() => {
                write_operand(f, c, 4)?;
                f.write_str(" || ")?;
                write_operand(f, b, 5)
            }
            ExprKind::Conditional(c, a, b) => {
                write_operand(f, c, 4)?;
                f.write_str(" ? ")?;
                write_operand(f, a, 3)?;
                f.write_str(" : ")?;
                write_operand(f, b, 3)
            }
            ExprKind::ArrayLit(items) => {
                f.write_str("{ ")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(" }")
            }
            ExprKind::With(a, i, v) => {
                write_operand(f, a, 16)?;
                write!(f, " WITH [{i}:={v}]")
            }
            ExprKind::Overflow(op, a, b) => {
                write!(f, "overflow(\"{}\", {a}, {b})", op.symbol())
            }
            ExprKind::FunctionAddress(n) => write!(f, "&{n}"),
            ExprKind::StringLit(s) => write!(f, "\"{}\"", escape(s)),
            ExprKind::Assign { lhs, rhs, post } => {
                if *post {
                    write!(f, "{lhs} = {rhs} (post)")
                } else {
                    write!(f, "{lhs} = {rhs}")
                }
            }
            ExprKind::Call(func, args) => {
                match &func.kind {
                    ExprKind::FunctionAddress(n) => f.write_str(n)?,
                    _ => write_operand(f, func, 16)?,
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
