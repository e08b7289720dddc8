//! Names with built-in meaning.

use super::types::{CType, IntKind, PlatformConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Intrinsic {
    Assert,
    CproverAssert,
    Assume,
    Cover,
    Input,
    Output,
    Printf,
}

pub fn intrinsic(name: &str) -> Option<Intrinsic> {
    Some(match name {
        "assert" => Intrinsic::Assert,
        "__CPROVER_assert" => Intrinsic::CproverAssert,
        "__CPROVER_assume" => Intrinsic::Assume,
        "__CPROVER_cover" => Intrinsic::Cover,
        "__CPROVER_input" => Intrinsic::Input,
        "__CPROVER_output" => Intrinsic::Output,
        "printf" | "puts" => Intrinsic::Printf,
        _ => return None,
    })
}

/// Library functions that are declared implicitly when used.
pub fn library_function(name: &str, cfg: &PlatformConfig) -> Option<CType> {
    match name {
        "getchar" => Some(CType::Code {
            params: vec![],
            ret: Box::new(cfg.int()),
        }),
        _ => None,
    }
}

/// Return type of an undeclared `nondet_<suffix>` function.
pub fn nondet_return_type(name: &str, cfg: &PlatformConfig) -> Option<CType> {
    let suffix = name.strip_prefix("nondet_")?;
    Some(match suffix {
        "bool" | "_Bool" => CType::Bool,
        "char" => cfg.char(),
        "uchar" | "unsigned_char" => CType::unsigned(8, IntKind::Char),
        "schar" | "signed_char" => CType::signed(8, IntKind::Char),
        "short" => CType::signed(16, IntKind::Short),
        "ushort" | "unsigned_short" => CType::unsigned(16, IntKind::Short),
        "uint" | "unsigned" | "unsigned_int" => cfg.uint(),
        "long" => cfg.long(),
        "ulong" | "unsigned_long" => cfg.ulong(),
        _ => cfg.int(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nondet_names() {
        let cfg = PlatformConfig::default();
        assert_eq!(nondet_return_type("nondet_bool", &cfg), Some(CType::Bool));
        assert_eq!(nondet_return_type("nondet_uint", &cfg), Some(cfg.uint()));
        assert_eq!(nondet_return_type("nondet_foo", &cfg), Some(cfg.int()));
        assert_eq!(nondet_return_type("foo", &cfg), None);
    }
}
