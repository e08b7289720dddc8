//! Automatically generated safety properties.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::frontend::display::pretty_name;
use crate::frontend::expr::{BinaryOp, Expr, ExprKind, OverflowOp, UnaryOp};
use crate::frontend::types::{CType, SourceLocation};
use crate::goto::{expand_body, GotoModel, InstrKind, Instruction, PropertyClass};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub bounds_check: bool,
    pub signed_overflow_check: bool,
    pub unsigned_overflow_check: bool,
    pub div_by_zero_check: bool,
    pub undefined_shift_check: bool,
    pub conversion_check: bool,
}

impl CheckOptions {
    pub fn all() -> Self {
        CheckOptions {
            bounds_check: true,
            signed_overflow_check: true,
            unsigned_overflow_check: true,
            div_by_zero_check: true,
            undefined_shift_check: true,
            conversion_check: true,
        }
    }
}

/// A property as listed by `--show-properties`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyListing {
    pub id: String,
    pub class: PropertyClass,
    pub description: String,
    pub loc: Option<Arc<SourceLocation>>,
    pub condition: Expr,
    pub function: Arc<str>,
}

pub fn generate_checks(model: &mut GotoModel, opts: &CheckOptions) {
    for f in model.functions.values_mut() {
        let Some(body) = f.body.take() else { continue };
        f.body = Some(expand_body(body, |_, ins| {
            let mut checks = Vec::new();
            if !matches!(ins.kind, InstrKind::Decl(_) | InstrKind::Dead(_)) {
                for e in ins.exprs() {
                    collect(e, &[], opts, &mut checks);
                }
            }
            let mut out: Vec<(Instruction, bool)> = checks
                .into_iter()
                .map(|(cond, class, description)| {
                    (Instruction::assertion(cond, class, description, ins.loc.clone()), false)
                })
                .collect();
            out.push((ins, false));
            out
        }));
    }
    model.number_properties();
}

/// Every property of the model in function and instruction order.
pub fn enumerate_properties(model: &GotoModel) -> Vec<PropertyListing> {
    let mut out = Vec::new();
    for f in model.functions.values() {
        for ins in f.instructions() {
            if let (Some(p), InstrKind::Assert(c)) = (&ins.property, &ins.kind) {
                out.push(PropertyListing {
                    id: p.id.clone(),
                    class: p.class,
                    description: p.description.clone(),
                    loc: ins.loc.clone(),
                    condition: c.clone(),
                    function: f.name.clone(),
                });
            }
        }
    }
    out
}

/// The range of values an expression can take, from its syntax alone.
pub fn value_range(e: &Expr) -> (i128, i128) {
    let full = (e.ty.min_value(), e.ty.max_value());
    match &e.kind {
        ExprKind::Constant(_) => {
            let v = e.as_i128().unwrap_or(0);
            (v, v)
        }
        ExprKind::Typecast(inner) if inner.ty.is_arithmetic() => {
            let (lo, hi) = value_range(inner);
            if lo >= full.0 && hi <= full.1 {
                (lo, hi)
            } else {
                full
            }
        }
        _ if e.ty.is_bool() => (0, 1),
        _ => full,
    }
}

type Check = (Expr, PropertyClass, String);

fn guarded(guards: &[Expr], cond: Expr) -> Expr {
    if guards.is_empty() {
        cond
    } else {
        Expr::implies(Expr::conjunction(guards.iter().cloned()), cond)
    }
}

fn collect(e: &Expr, guards: &[Expr], opts: &CheckOptions, out: &mut Vec<Check>) {
    if let ExprKind::Conditional(c, a, b) = &e.kind {
        collect(c, guards, opts, out);
        let mut g = guards.to_vec();
        g.push((**c).clone());
        collect(a, &g, opts, out);
        g.pop();
        g.push(Expr::not((**c).clone()));
        collect(b, &g, opts, out);
        return;
    }
    for child in e.children() {
        collect(child, guards, opts, out);
    }
    let mut push = |cond: Expr, class: PropertyClass, description: String| {
        if !cond.is_true() {
            out.push((guarded(guards, cond), class, description));
        }
    };
    match &e.kind {
        ExprKind::Index(a, i) if opts.bounds_check => {
            let CType::Array { size, .. } = &a.ty else { return };
            let name = match &a.kind {
                ExprKind::Symbol(n) => pretty_name(n).to_string(),
                _ => a.to_string(),
            };
            let (lo, hi) = value_range(i);
            if i.ty.is_signed() && lo < 0 {
                let zero = Expr::constant(0, i.ty.clone());
                push(
                    Expr::binary(BinaryOp::Ge, (**i).clone(), zero),
                    PropertyClass::ArrayBounds,
                    format!("array `{name}' lower bound in {e}"),
                );
            }
            if hi >= *size as i128 {
                let n = Expr::constant(*size, i.ty.clone());
                push(
                    Expr::not(Expr::binary(BinaryOp::Ge, (**i).clone(), n)),
                    PropertyClass::ArrayBounds,
                    format!("array `{name}' upper bound in {e}"),
                );
            }
        }
        ExprKind::Unary(UnaryOp::Neg, a) if a.ty.is_signed() && opts.signed_overflow_check => {
            let min = e.ty.min_value();
            let (lo, _) = value_range(a);
            if lo <= min {
                let m = Expr::from_i64(min as i64, a.ty.clone());
                push(
                    Expr::not(Expr::eq((**a).clone(), m)),
                    PropertyClass::Overflow,
                    format!("arithmetic overflow on signed unary minus in {e}"),
                );
            }
        }
        ExprKind::Binary(op @ (BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul), a, b) if e.ty.is_integer() => {
            let signed = e.ty.is_signed();
            if (signed && !opts.signed_overflow_check) || (!signed && !opts.unsigned_overflow_check) {
                return;
            }
            let (alo, ahi) = value_range(a);
            let (blo, bhi) = value_range(b);
            let (lo, hi) = match op {
                BinaryOp::Add => (alo + blo, ahi + bhi),
                BinaryOp::Sub => (alo - bhi, ahi - blo),
                _ => {
                    let p = [alo * blo, alo * bhi, ahi * blo, ahi * bhi];
                    (*p.iter().min().unwrap(), *p.iter().max().unwrap())
                }
            };
            if lo >= e.ty.min_value() && hi <= e.ty.max_value() {
                return;
            }
            let oop = match op {
                BinaryOp::Add => OverflowOp::Add,
                BinaryOp::Sub => OverflowOp::Sub,
                _ => OverflowOp::Mul,
            };
            let kind = if signed { "signed" } else { "unsigned" };
            push(
                Expr::not(Expr::overflow(oop, (**a).clone(), (**b).clone())),
                PropertyClass::Overflow,
                format!("arithmetic overflow on {kind} {} in {e}", op.symbol()),
            );
        }
        ExprKind::Binary(op @ (BinaryOp::Div | BinaryOp::Mod), a, b) => {
            let (blo, bhi) = value_range(b);
            if opts.div_by_zero_check && blo <= 0 && bhi >= 0 {
                let zero = Expr::constant(0, b.ty.clone());
                push(
                    Expr::binary(BinaryOp::Ne, (**b).clone(), zero),
                    PropertyClass::DivisionByZero,
                    format!("division by zero in {e}"),
                );
            }
            if opts.signed_overflow_check && e.ty.is_signed() {
                let (alo, _) = value_range(a);
                if alo <= e.ty.min_value() && blo <= -1 && bhi >= -1 {
                    let min = Expr::from_i64(e.ty.min_value() as i64, a.ty.clone());
                    let minus_one = Expr::from_i64(-1, b.ty.clone());
                    let what = if *op == BinaryOp::Div { "division" } else { "remainder" };
                    push(
                        Expr::not(Expr::and(
                            Expr::eq((**a).clone(), min),
                            Expr::eq((**b).clone(), minus_one),
                        )),
                        PropertyClass::Overflow,
                        format!("arithmetic overflow on signed {what} in {e}"),
                    );
                }
            }
        }
        ExprKind::Binary(BinaryOp::Shl | BinaryOp::Shr, a, d) if opts.undefined_shift_check => {
            let w = a.ty.width().unwrap_or(64) as i128;
            let (lo, hi) = value_range(d);
            if d.ty.is_signed() && lo < 0 {
                let zero = Expr::constant(0, d.ty.clone());
                push(
                    Expr::binary(BinaryOp::Ge, (**d).clone(), zero),
                    PropertyClass::UndefinedShift,
                    format!("shift distance is negative in {e}"),
                );
            }
            if hi >= w {
                let width = Expr::constant(w as u64, d.ty.clone());
                push(
                    Expr::binary(BinaryOp::Lt, (**d).clone(), width),
                    PropertyClass::UndefinedShift,
                    format!("shift distance too large in {e}"),
                );
            }
        }
        ExprKind::Typecast(a) if opts.conversion_check && e.ty.is_integer() && a.ty.is_integer() => {
            let (lo, hi) = value_range(a);
            let (tmin, tmax) = (e.ty.min_value(), e.ty.max_value());
            if lo >= tmin && hi <= tmax {
                return;
            }
            let mut conds = Vec::new();
            if lo < tmin {
                let m = Expr::from_i64(tmin as i64, a.ty.clone());
                conds.push(Expr::binary(BinaryOp::Ge, (**a).clone(), m));
            }
            if hi > tmax {
                let m = Expr::constant(tmax as u64, a.ty.clone());
                conds.push(Expr::binary(BinaryOp::Le, (**a).clone(), m));
            }
            let kind = if e.ty.is_signed() { "signed" } else { "unsigned" };
            push(
                Expr::conjunction(conds),
                PropertyClass::Conversion,
                format!("arithmetic overflow on {kind} type conversion in {e}"),
            );
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::types::PlatformConfig;
    use crate::frontend::{compile_source, PreprocessOptions};
    use crate::goto::convert::convert_program;

    fn props(src: &str, opts: CheckOptions) -> Vec<PropertyListing> {
        let p = compile_source("t.c", src, &PreprocessOptions::default(), &PlatformConfig::default()).unwrap();
        let mut m = convert_program(&p);
        generate_checks(&mut m, &opts);
        enumerate_properties(&m)
    }

    #[test]
    fn unary_minus() {
        let opts = CheckOptions {
            signed_overflow_check: true,
            ..Default::default()
        };
        let ps = props("int abs(int x) { int y = x; if(x < 0) { y = -x; } return y; }", opts);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].id, "abs.overflow.1");
        assert_eq!(ps[0].description, "arithmetic overflow on signed unary minus in -x");
        assert_eq!(ps[0].condition.to_string(), "!(x == -2147483648)");
    }

    #[test]
    fn array_bounds() {
        let opts = CheckOptions {
            bounds_check: true,
            ..Default::default()
        };
        let ps = props(
            "int main() { char buffer[16]; int index = 0; buffer[index] = 1; buffer[3] = 2; return 0; }",
            opts,
        );
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].id, "main.array_bounds.1");
        assert_eq!(
            ps[0].description,
            "array `buffer' lower bound in buffer[(signed long int)index]"
        );
        assert_eq!(ps[0].condition.to_string(), "(signed long int)index >= 0l");
        assert_eq!(ps[1].id, "main.array_bounds.2");
        assert_eq!(ps[1].condition.to_string(), "!((signed long int)index >= 16l)");
    }

    #[test]
    fn promoted_char_arithmetic_is_safe() {
        let ps = props("int f(char a, char b) { return a + b; }", CheckOptions::all());
        assert!(ps.is_empty(), "{ps:?}");
    }

    #[test]
    fn no_flags_no_properties() {
        let ps = props("int f(int a, int b) { return a / b + a * b; }", CheckOptions::default());
        assert!(ps.is_empty());
    }
}
