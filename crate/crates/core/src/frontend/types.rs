//! Bit-level C types, source locations and the target platform description.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Interned identifier. Cheap to clone and shared between the AST, the
/// symbol table and every IR built on top of them.
pub type Ident = Arc<str>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceLocation {
    pub file: Arc<str>,
    pub line: u32,
    pub function: Option<Arc<str>>,
    pub working_directory: Option<Arc<str>>,
}

impl SourceLocation {
    pub fn new(file: &str, line: u32) -> Self {
        SourceLocation {
            file: Arc::from(file),
            line,
            function: None,
            working_directory: None,
        }
    }

    /// Location for synthetic code that has no user-visible source.
    pub fn built_in(line: u32) -> Self {
        SourceLocation::new("<built-in-additions>", line)
    }

    pub fn with_function(mut self, function: &str) -> Self {
        self.function = Some(Arc::from(function));
        self
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "file {} line {}", self.file, self.line)?;
        if let Some(func) = &self.function {
            write!(f, " function {func}")?;
        }
        Ok(())
    }
}

/// The C integer type a bit-vector type was spelled as. Only used for
/// conversion ranks and for printing; the semantics live in width/signedness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IntKind {
    BitVector,
    Char,
    Short,
    Int,
    Long,
    LongLong,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CType {
    Bool,
    Int {
        signed: bool,
        width: u32,
        kind: IntKind,
    },
    Array {
        element: Box<CType>,
        size: u64,
    },
    Pointer {
        target: Box<CType>,
        width: u32,
    },
    Code {
        params: Vec<CType>,
        ret: Box<CType>,
    },
    Void,
    /// Type of string literals; only legal as arguments of intrinsics.
    String,
}

impl CType {
    pub fn signed(width: u32, kind: IntKind) -> CType {
        CType::Int {
            signed: true,
            width,
            kind,
        }
    }

    pub fn unsigned(width: u32, kind: IntKind) -> CType {
        CType::Int {
            signed: false,
            width,
            kind,
        }
    }

    /// Number of bits of a scalar value, `None` for aggregates and `void`.
    pub fn width(&self) -> Option<u32> {
        match self {
            CType::Bool => Some(1),
            CType::Int { width, .. } => Some(*width),
            CType::Pointer { width, .. } => Some(*width),
            _ => None,
        }
    }

    pub fn is_signed(&self) -> bool {
        matches!(self, CType::Int { signed: true, .. })
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, CType::Int { .. })
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, CType::Bool)
    }

    pub fn is_arithmetic(&self) -> bool {
        matches!(self, CType::Int { .. } | CType::Bool)
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self, CType::Int { .. } | CType::Bool | CType::Pointer { .. })
    }

    pub fn is_array(&self) -> bool {
        matches!(self, CType::Array { .. })
    }

    pub fn is_code_pointer(&self) -> bool {
        matches!(self, CType::Pointer { target, .. } if matches!(**target, CType::Code { .. }))
    }

    pub fn element(&self) -> Option<&CType> {
        match self {
            CType::Array { element, .. } => Some(element),
            _ => None,
        }
    }

    /// Smallest representable value of an integer type.
    pub fn min_value(&self) -> i128 {
        match self {
            CType::Int {
                signed: true, width, ..
            } => -(1i128 << (width - 1)),
            _ => 0,
        }
    }

    /// Largest representable value of an integer (or boolean) type.
    pub fn max_value(&self) -> i128 {
        match self {
            CType::Int {
                signed: true, width, ..
            } => (1i128 << (width - 1)) - 1,
            CType::Int { width, .. } | CType::Pointer { width, .. } => (1i128 << width) - 1,
            CType::Bool => 1,
            _ => 0,
        }
    }

    /// Conversion rank used by the usual arithmetic conversions.
    pub fn rank(&self) -> (u32, IntKind) {
        match self {
            CType::Bool => (1, IntKind::BitVector),
            CType::Int { width, kind, .. } => (*width, *kind),
            _ => (0, IntKind::BitVector),
        }
    }

    /// Textual form used in GOTO listings, e.g. `signed long int`.
    pub fn c_name(&self) -> String {
        match self {
            CType::Bool => "_Bool".into(),
            CType::Int { signed, width, kind } => {
                let sign = if *signed { "signed" } else { "unsigned" };
                match kind {
                    IntKind::Char => format!("{sign} char"),
                    IntKind::Short => format!("{sign} short int"),
                    IntKind::Int => format!("{sign} int"),
                    IntKind::Long => format!("{sign} long int"),
                    IntKind::LongLong => format!("{sign} long long int"),
                    IntKind::BitVector if *signed => format!("signed __CPROVER_bitvector[{width}]"),
                    IntKind::BitVector => format!("__CPROVER_bitvector[{width}]"),
                }
            }
            CType::Array { element, size } => format!("{} [{size}]", element.c_name()),
            CType::Pointer { target, .. } => match &**target {
                CType::Code { params, ret } => {
                    let ps: Vec<String> = params.iter().map(CType::c_name).collect();
                    format!("{} (*)({})", ret.c_name(), ps.join(", "))
                }
                other => format!("{} *", other.c_name()),
            },
            CType::Code { params, ret } => {
                let ps: Vec<String> = params.iter().map(CType::c_name).collect();
                format!("{} ({})", ret.c_name(), ps.join(", "))
            }
            CType::Void => "void".into(),
            CType::String => "const char *".into(),
        }
    }

    /// Internal type-kind name, as shown by symbol table and parse tree dumps.
    pub fn id_name(&self) -> &'static str {
        match self {
            CType::Bool => "bool",
            CType::Int { signed: true, .. } => "signedbv",
            CType::Int { signed: false, .. } => "unsignedbv",
            CType::Array { .. } => "array",
            CType::Pointer { .. } => "pointer",
            CType::Code { .. } => "code",
            CType::Void => "empty",
            CType::String => "string",
        }
    }
}

impl fmt::Display for CType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.c_name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endianness {
    Little,
    Big,
}

/// Bit widths and conventions of the target machine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlatformConfig {
    pub int_width: u32,
    pub long_width: u32,
    pub pointer_width: u32,
    pub char_signed: bool,
    pub endianness: Endianness,
}

impl Default for PlatformConfig {
    fn default() -> Self {
        PlatformConfig::lp64()
    }
}

impl PlatformConfig {
    pub fn lp64() -> Self {
        PlatformConfig {
            int_width: 32,
            long_width: 64,
            pointer_width: 64,
            char_signed: true,
            endianness: Endianness::Little,
        }
    }

    pub fn ilp64() -> Self {
        PlatformConfig {
            int_width: 64,
            ..PlatformConfig::lp64()
        }
    }

    pub fn llp64() -> Self {
        PlatformConfig {
            long_width: 32,
            ..PlatformConfig::lp64()
        }
    }

    pub fn ilp32() -> Self {
        PlatformConfig {
            long_width: 32,
            pointer_width: 32,
            ..PlatformConfig::lp64()
        }
    }

    pub fn lp32() -> Self {
        PlatformConfig {
            int_width: 16,
            long_width: 32,
            pointer_width: 32,
            ..PlatformConfig::lp64()
        }
    }

    /// `--16`/`--32`/`--64`: sets the width of `int`, widening `long` if needed.
    pub fn set_int_width(&mut self, width: u32) {
        self.int_width = width;
        if self.long_width < width {
            self.long_width = width;
        }
    }

    pub fn int(&self) -> CType {
        CType::signed(self.int_width, IntKind::Int)
    }

    pub fn uint(&self) -> CType {
        CType::unsigned(self.int_width, IntKind::Int)
    }

    pub fn long(&self) -> CType {
        CType::signed(self.long_width, IntKind::Long)
    }

    pub fn ulong(&self) -> CType {
        CType::unsigned(self.long_width, IntKind::Long)
    }

    pub fn char(&self) -> CType {
        CType::Int {
            signed: self.char_signed,
            width: 8,
            kind: IntKind::Char,
        }
    }

    pub fn code_pointer(&self, code: CType) -> CType {
        CType::Pointer {
            target: Box::new(code),
            width: self.pointer_width,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let int = CType::signed(32, IntKind::Int);
        assert_eq!(int.min_value(), -2147483648);
        assert_eq!(int.max_value(), 2147483647);
        let u4 = CType::unsigned(4, IntKind::BitVector);
        assert_eq!(u4.max_value(), 15);
        assert_eq!(u4.min_value(), 0);
    }

    #[test]
    fn names() {
        let cfg = PlatformConfig::default();
        assert_eq!(cfg.long().c_name(), "signed long int");
        assert_eq!(cfg.int().c_name(), "signed int");
        assert_eq!(
            CType::signed(4, IntKind::BitVector).c_name(),
            "signed __CPROVER_bitvector[4]"
        );
    }

    #[test]
    fn location_display() {
        let loc = SourceLocation::new("abs.c", 5).with_function("abs");
        assert_eq!(loc.to_string(), "file abs.c line 5 function abs");
    }
}
