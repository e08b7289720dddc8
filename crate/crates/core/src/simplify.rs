//! Expression simplification: constant folding, algebraic identities and
//! read-over-write resolution for arrays.

use crate::eval;
use crate::frontend::expr::{BinaryOp, Expr, ExprKind, UnaryOp};
use crate::frontend::types::CType;

pub fn simplify(e: Expr) -> Expr {
    e.map(&mut simplify_node)
}

fn constant(v: u64, e: &Expr) -> Expr {
    Expr::constant(v, e.ty.clone()).with_loc(e.loc.clone())
}

fn simplify_node(e: Expr) -> Expr {
    match &e.kind {
        ExprKind::Unary(op, a) => {
            if let Some(v) = a.as_constant() {
                return constant(eval::unary(*op, &a.ty, v), &e);
            }
            if *op == UnaryOp::Not {
                if let ExprKind::Unary(UnaryOp::Not, inner) = &a.kind {
                    return (**inner).clone();
                }
            }
            e
        }
        ExprKind::Binary(op, a, b) => simplify_binary(*op, a, b, &e),
        ExprKind::Typecast(a) => {
            if a.ty == e.ty {
                return (**a).clone();
            }
            if e.ty.is_scalar() && a.ty.is_scalar() {
                if let Some(v) = a.as_constant() {
                    return constant(eval::cast(v, &a.ty, &e.ty), &e);
                }
            }
            e
        }
        ExprKind::Conditional(c, a, b) => {
            if let Some(v) = c.as_constant() {
                return if v != 0 { (**a).clone() } else { (**b).clone() };
            }
            if a == b {
                return (**a).clone();
            }
            if e.ty.is_bool() {
                if a.is_true() && b.is_false() {
                    return (**c).clone();
                }
                if a.is_false() && b.is_true() {
                    return simplify_node(Expr::not((**c).clone()));
                }
                if b.is_false() {
                    return simplify_binary(BinaryOp::And, c, a, &e);
                }
                if a.is_true() {
                    return simplify_binary(BinaryOp::Or, c, b, &e);
                }
            }
            e
        }
        ExprKind::Overflow(op, a, b) => match (a.as_constant(), b.as_constant()) {
            (Some(x), Some(y)) => Expr::bool_const(eval::overflows(*op, &a.ty, x, y)),
            _ => e,
        },
        ExprKind::Index(a, i) => {
            let Some(idx) = i.as_i128() else { return e };
            match &a.kind {
                ExprKind::ArrayLit(items) => {
                    if idx >= 0 && (idx as usize) < items.len() {
                        items[idx as usize].clone()
                    } else {
                        e
                    }
                }
                ExprKind::With(base, j, v) => match j.as_i128() {
                    Some(k) if k == idx => (**v).clone(),
                    Some(_) => simplify_node(Expr::index((**base).clone(), (**i).clone()).with_loc(e.loc.clone())),
                    None => e,
                },
                _ => e,
            }
        }
        ExprKind::With(base, i, v) => {
            let Some(idx) = i.as_i128() else { return e };
            if let ExprKind::ArrayLit(items) = &base.kind {
                if idx >= 0 && (idx as usize) < items.len() {
                    let mut items = items.clone();
                    items[idx as usize] = (**v).clone();
                    return Expr::new(ExprKind::ArrayLit(items), e.ty.clone()).with_loc(e.loc.clone());
                }
            }
            e
        }
        _ => e,
    }
}

fn is_zero(e: &Expr) -> bool {
    e.as_constant() == Some(0)
}

fn is_one(e: &Expr) -> bool {
    e.as_constant() == Some(1)
}

fn is_negation_of(a: &Expr, b: &Expr) -> bool {
    matches!(&a.kind, ExprKind::Unary(UnaryOp::Not, x) if **x == *b)
        || matches!(&b.kind, ExprKind::Unary(UnaryOp::Not, x) if **x == *a)
}

fn simplify_binary(op: BinaryOp, a: &Expr, b: &Expr, e: &Expr) -> Expr {
    if let (Some(x), Some(y)) = (a.as_constant(), b.as_constant()) {
        if let Ok(v) = eval::binary(op, x, &a.ty, y, &b.ty) {
            let ty = if op.is_relation() || op.is_logical() {
                CType::Bool
            } else {
                e.ty.clone()
            };
            return Expr::constant(v, ty).with_loc(e.loc.clone());
        }
        return e.clone();
    }
    let a_c = a.clone();
    let b_c = b.clone();
    match op {
        BinaryOp::And => {
            if a.is_false() || b.is_false() || is_negation_of(a, b) {
                return Expr::false_expr();
            }
            if a.is_true() {
                return b_c;
            }
            if b.is_true() || a == b {
                return a_c;
            }
        }
        BinaryOp::Or => {
            if a.is_true() || b.is_true() || is_negation_of(a, b) {
                return Expr::true_expr();
            }
            if a.is_false() {
                return b_c;
            }
            if b.is_false() || a == b {
                return a_c;
            }
        }
        BinaryOp::Add | BinaryOp::BitOr | BinaryOp::BitXor => {
            if is_zero(b) {
                return a_c;
            }
            if is_zero(a) {
                return b_c;
            }
        }
        BinaryOp::Sub | BinaryOp::Shl | BinaryOp::Shr => {
            if is_zero(b) {
                return a_c;
            }
        }
        BinaryOp::Mul => {
            if is_one(b) {
                return a_c;
            }
            if is_one(a) {
                return b_c;
            }
            if is_zero(a) || is_zero(b) {
                return constant(0, e);
            }
        }
        BinaryOp::Div => {
            if is_one(b) {
                return a_c;
            }
        }
        BinaryOp::BitAnd => {
            if is_zero(a) || is_zero(b) {
                return constant(0, e);
            }
        }
        BinaryOp::Eq | BinaryOp::Le | BinaryOp::Ge if a == b => return Expr::true_expr(),
        BinaryOp::Ne | BinaryOp::Lt | BinaryOp::Gt if a == b => return Expr::false_expr(),
        BinaryOp::Eq if a.ty.is_bool() => {
            if a.is_true() {
                return b_c;
            }
            if b.is_true() {
                return a_c;
            }
        }
        _ => {}
    }
    e.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::types::IntKind;

    fn int() -> CType {
        CType::signed(32, IntKind::Int)
    }

    #[test]
    fn folds_constants() {
        let e = Expr::binary(BinaryOp::Add, Expr::from_i64(2, int()), Expr::from_i64(3, int()));
        assert_eq!(simplify(e).as_i128(), Some(5));
        let y = Expr::symbol("y".into(), int());
        let e = Expr::eq(Expr::binary(BinaryOp::Mul, y.clone(), Expr::from_i64(1, int())), y);
        assert!(simplify(e).is_true());
    }

    #[test]
    fn division_by_zero_is_kept() {
        let e = Expr::binary(BinaryOp::Div, Expr::from_i64(2, int()), Expr::from_i64(0, int()));
        assert!(matches!(simplify(e).kind, ExprKind::Binary(..)));
    }

    #[test]
    fn read_over_write() {
        let arr_ty = CType::Array {
            element: Box::new(int()),
            size: 4,
        };
        let a = Expr::symbol("a".into(), arr_ty);
        let long = CType::signed(64, IntKind::Long);
        let x = Expr::symbol("x".into(), int());
        let w = Expr::with(a.clone(), Expr::from_i64(1, long.clone()), x.clone());
        assert_eq!(simplify(Expr::index(w.clone(), Expr::from_i64(1, long.clone()))), x);
        assert_eq!(
            simplify(Expr::index(w, Expr::from_i64(2, long.clone()))),
            Expr::index(a, Expr::from_i64(2, long))
        );
    }

    #[test]
    fn complementary_guards() {
        let c = Expr::symbol("c".into(), CType::Bool);
        assert!(simplify(Expr::or(c.clone(), Expr::not(c.clone()))).is_true());
        assert!(simplify(Expr::and(Expr::not(c.clone()), c)).is_false());
    }
}
