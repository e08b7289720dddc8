//! Concrete two's-complement semantics of the expression operators.

use serde::{Deserialize, Serialize};

use crate::frontend::expr::{mask, sign_extend, BinaryOp, OverflowOp, UnaryOp};
use crate::frontend::types::CType;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Value {
    Scalar(u64),
    Array(Vec<Value>),
}

impl Value {
    pub fn scalar(&self) -> u64 {
        match self {
            Value::Scalar(v) => *v,
            Value::Array(_) => panic!("array used as scalar"),
        }
    }

    /// All-zero value of a type.
    pub fn zero(ty: &CType) -> Value {
        match ty {
            CType::Array { element, size } => Value::Array(vec![Value::zero(element); *size as usize]),
            _ => Value::Scalar(0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    DivisionByZero,
    OutOfBounds,
}

fn width(ty: &CType) -> u32 {
    ty.width().unwrap_or(64)
}

/// Value as a mathematical integer according to its type.
pub fn to_i128(v: u64, ty: &CType) -> i128 {
    let w = width(ty);
    if ty.is_signed() {
        sign_extend(v, w) as i128
    } else {
        mask(v, w) as i128
    }
}

pub fn unary(op: UnaryOp, ty: &CType, a: u64) -> u64 {
    let w = width(ty);
    match op {
        UnaryOp::Neg => mask(a.wrapping_neg(), w),
        UnaryOp::BitNot => mask(!a, w),
        UnaryOp::Not => (a == 0) as u64,
    }
}

pub fn binary(op: BinaryOp, a: u64, a_ty: &CType, b: u64, b_ty: &CType) -> Result<u64, Fault> {
    let w = width(a_ty);
    let signed = a_ty.is_signed();
    let sa = to_i128(a, a_ty);
    let sb = to_i128(b, b_ty);
    let r = match op {
        BinaryOp::Add => mask(a.wrapping_add(b), w),
        BinaryOp::Sub => mask(a.wrapping_sub(b), w),
        BinaryOp::Mul => mask(a.wrapping_mul(b), w),
        BinaryOp::Div | BinaryOp::Mod => {
            if mask(b, w) == 0 {
                return Err(Fault::DivisionByZero);
            }
            let (q, r) = if signed {
                // i128 avoids the MIN / -1 trap; the quotient wraps below.
                (sa / sb, sa % sb)
            } else {
                ((mask(a, w) / mask(b, w)) as i128, (mask(a, w) % mask(b, w)) as i128)
            };
            let v = if op == BinaryOp::Div { q } else { r };
            mask(v as u64, w)
        }
        BinaryOp::Shl | BinaryOp::Shr => {
            let dist = mask(b, width(b_ty));
            if dist >= w as u64 {
                if op == BinaryOp::Shr && signed && sa < 0 {
                    mask(u64::MAX, w)
                } else {
                    0
                }
            } else if op == BinaryOp::Shl {
                mask(a << dist, w)
            } else if signed {
                mask((sign_extend(a, w) >> dist) as u64, w)
            } else {
                mask(a, w) >> dist
            }
        }
        BinaryOp::BitAnd => mask(a & b, w),
        BinaryOp::BitOr => mask(a | b, w),
        BinaryOp::BitXor => mask(a ^ b, w),
        BinaryOp::Lt => (sa < sb) as u64,
        BinaryOp::Le => (sa <= sb) as u64,
        BinaryOp::Gt => (sa > sb) as u64,
        BinaryOp::Ge => (sa >= sb) as u64,
        BinaryOp::Eq => (mask(a, w) == mask(b, w)) as u64,
        BinaryOp::Ne => (mask(a, w) != mask(b, w)) as u64,
        BinaryOp::And => ((a != 0) && (b != 0)) as u64,
        BinaryOp::Or => ((a != 0) || (b != 0)) as u64,
    };
    Ok(r)
}

pub fn cast(v: u64, from: &CType, to: &CType) -> u64 {
    if to.is_bool() {
        return (mask(v, width(from)) != 0) as u64;
    }
    let wide = if from.is_bool() {
        (v != 0) as u64
    } else {
        to_i128(v, from) as u64
    };
    mask(wide, width(to))
}

/// Whether the exact result of `a op b` is outside the range of `ty`.
pub fn overflows(op: OverflowOp, ty: &CType, a: u64, b: u64) -> bool {
    let sa = to_i128(a, ty);
    let sb = to_i128(b, ty);
    let exact = match op {
        OverflowOp::Add => sa + sb,
        OverflowOp::Sub => sa - sb,
        OverflowOp::Mul => sa * sb,
    };
    exact < ty.min_value() || exact > ty.max_value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::types::IntKind;

    fn s4() -> CType {
        CType::signed(4, IntKind::BitVector)
    }

    #[test]
    fn signed_division_truncates() {
        let t = s4();
        let m = |v: i64| mask(v as u64, 4);
        assert_eq!(binary(BinaryOp::Div, m(-7), &t, m(2), &t), Ok(m(-3)));
        assert_eq!(binary(BinaryOp::Mod, m(-7), &t, m(2), &t), Ok(m(-1)));
        assert_eq!(binary(BinaryOp::Div, m(-8), &t, m(-1), &t), Ok(m(-8)));
        assert_eq!(binary(BinaryOp::Mod, m(-8), &t, m(-1), &t), Ok(0));
        assert_eq!(binary(BinaryOp::Div, 3, &t, 0, &t), Err(Fault::DivisionByZero));
    }

    #[test]
    fn shifts() {
        let t = s4();
        assert_eq!(binary(BinaryOp::Shr, 0b1000, &t, 1, &t), Ok(0b1100));
        assert_eq!(binary(BinaryOp::Shr, 0b1000, &t, 4, &t), Ok(0b1111));
        assert_eq!(binary(BinaryOp::Shl, 0b0011, &t, 3, &t), Ok(0b1000));
        assert_eq!(binary(BinaryOp::Shl, 0b0011, &t, 0b1111, &t), Ok(0));
    }

    #[test]
    fn casts() {
        let t = s4();
        let u8t = CType::unsigned(8, IntKind::Char);
        assert_eq!(cast(0b1000, &t, &u8t), 0xf8);
        assert_eq!(cast(0x1f, &u8t, &t), 0xf);
        assert_eq!(cast(2, &t, &CType::Bool), 1);
        assert_eq!(cast(1, &CType::Bool, &t), 1);
    }

    #[test]
    fn overflow_detection() {
        let t = s4();
        assert!(overflows(OverflowOp::Add, &t, 7, 1));
        assert!(!overflows(OverflowOp::Add, &t, 6, 1));
        assert!(overflows(
            OverflowOp::Mul,
            &t,
            mask(-8i64 as u64, 4),
            mask(-1i64 as u64, 4)
        ));
        let u = CType::unsigned(4, IntKind::BitVector);
        assert!(overflows(OverflowOp::Sub, &u, 0, 1));
    }
}
