//! Decimal and byte-grouped binary rendering of concrete values.

use crate::eval::{to_i128, Value};
use crate::frontend::display::constant_text;
use crate::frontend::expr::mask;
use crate::frontend::types::CType;

/// Bits of `v`, most significant first, in groups of eight counted from the
/// least significant end.
pub fn binary_text(v: u64, width: u32) -> String {
    let v = mask(v, width);
    let mut out = String::with_capacity(width as usize + width as usize / 8);
    for i in (0..width).rev() {
        out.push(if v >> i & 1 == 1 { '1' } else { '0' });
        if i % 8 == 0 && i != 0 {
            out.push(' ');
        }
    }
    out
}

pub fn decimal_text(v: u64, ty: &CType) -> String {
    match ty {
        CType::Bool => if v & 1 == 1 { "TRUE" } else { "FALSE" }.to_string(),
        _ => to_i128(v, ty).to_string(),
    }
}

/// `<decimal> (<bytes>)` for scalars, a brace list for arrays.
pub fn render_value(value: &Value, ty: &CType) -> String {
    match (value, ty) {
        (Value::Scalar(v), CType::Bool) => format!("{} ({})", decimal_text(*v, ty), v & 1),
        (Value::Scalar(v), _) => match ty.width() {
            Some(w) => format!("{} ({})", decimal_text(*v, ty), binary_text(*v, w)),
            None => v.to_string(),
        },
        (Value::Array(items), _) => {
            let element = ty.element().cloned().unwrap_or(CType::Void);
            let parts: Vec<String> = items.iter().map(|i| short_value(i, &element)).collect();
            format!("{{ {} }}", parts.join(", "))
        }
    }
}

/// Decimal only; used inside arrays and test suites.
pub fn short_value(value: &Value, ty: &CType) -> String {
    match value {
        Value::Scalar(v) => decimal_text(*v, ty),
        Value::Array(items) => {
            let element = ty.element().cloned().unwrap_or(CType::Void);
            let parts: Vec<String> = items.iter().map(|i| short_value(i, &element)).collect();
            format!("{{ {} }}", parts.join(", "))
        }
    }
}

/// An index as a C constant of its type, e.g. `15l`.
pub fn index_text(v: u64, ty: &CType) -> String {
    constant_text(mask(v, ty.width().unwrap_or(64)), ty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::types::IntKind;

    #[test]
    fn grouping() {
        let int = CType::signed(32, IntKind::Int);
        let min = Value::Scalar(0x8000_0000);
        assert_eq!(
            render_value(&min, &int),
            "-2147483648 (10000000 00000000 00000000 00000000)"
        );
        assert_eq!(
            render_value(&Value::Scalar(9000), &int),
            "9000 (00000000 00000000 00100011 00101000)"
        );
        let short = CType::signed(16, IntKind::Short);
        assert_eq!(render_value(&Value::Scalar(0), &short), "0 (00000000 00000000)");
        assert_eq!(binary_text(0b1_0000_0001, 9), "1 00000001");
        assert_eq!(render_value(&Value::Scalar(1), &CType::Bool), "TRUE (1)");
    }
}
