use std::fmt::Write;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::types::{CType, Ident, SourceLocation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbol {
    pub name: Ident,
    pub base_name: Ident,
    pub ty: CType,
    pub value: Option<Expr>,
    pub loc: SourceLocation,
    /// Translation unit the symbol was declared in.
    pub module: Ident,
    pub is_static_lifetime: bool,
    pub is_parameter: bool,
    pub is_nondet_source: bool,
    pub is_function: bool,
    /// File-local linkage (`static` at file scope).
    pub is_file_local: bool,
    /// Declared `extern` without a definition in this unit.
    pub is_extern: bool,
}

impl Symbol {
    pub fn variable(name: Ident, base_name: Ident, ty: CType, loc: SourceLocation, module: Ident) -> Symbol {
        Symbol {
            name,
            base_name,
            ty,
            value: None,
            loc,
            module,
            is_static_lifetime: false,
            is_parameter: false,
            is_nondet_source: false,
            is_function: false,
            is_file_local: false,
            is_extern: false,
        }
    }
}

/// Symbols in insertion order; lookups by mangled name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTable {
    pub symbols: IndexMap<Ident, Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Symbol> {
        self.symbols.get_mut(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn insert(&mut self, sym: Symbol) {
        self.symbols.insert(sym.name.clone(), sym);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Text dump for `--show-symbol-table`, sorted by name.
    pub fn dump(&self) -> String {
        let mut syms: Vec<&Symbol> = self.symbols.values().collect();
        syms.sort_by(|a, b| a.name.cmp(&b.name));
        let mut out = String::from("Symbols:\n\n");
        for s in syms {
            let _ = writeln!(out, "Symbol......: {}", s.name);
            let _ = writeln!(out, "Base name...: {}", s.base_name);
            let _ = writeln!(out, "Module......: {}", s.module);
            let _ = writeln!(out, "Type........: {}", s.ty);
            match &s.value {
                Some(v) => {
                    let _ = writeln!(out, "Value.......: {v}");
                }
                None => out.push_str("Value.......: \n"),
            }
            let mut flags = Vec::new();
            if s.is_static_lifetime {
                flags.push("static_lifetime");
            }
            if s.is_parameter {
                flags.push("parameter");
            }
            if s.is_nondet_source {
                flags.push("nondet_source");
            }
            if s.is_function {
                flags.push("function");
            }
            if s.is_file_local {
                flags.push("file_local");
            }
            if s.is_extern {
                flags.push("extern");
            }
            let _ = writeln!(out, "Flags.......: {}", flags.join(" "));
            let _ = writeln!(out, "Location....: {}\n", s.loc);
        }
        out
    }
}
