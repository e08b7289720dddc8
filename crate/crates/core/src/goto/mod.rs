//! Guarded GOTO programs: the central intermediate representation.

pub mod convert;
pub mod fnptr;
pub mod harness;
pub mod link;
pub mod pretty;
pub mod returns;
pub mod serialize;

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::frontend::expr::Expr;
use crate::frontend::symbol::SymbolTable;
use crate::frontend::types::{CType, Ident, SourceLocation};

pub const INITIALIZE: &str = "__CPROVER_initialize";
pub const START: &str = "__CPROVER__start";
pub const ROUNDING_MODE: &str = "__CPROVER_rounding_mode";

pub fn return_value_name(function: &str) -> String {
    format!("{function}#return_value")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyClass {
    Assertion,
    ArrayBounds,
    Overflow,
    DivisionByZero,
    UndefinedShift,
    Conversion,
    Unwind,
    PointerDispatch,
    Coverage,
}

impl PropertyClass {
    pub fn name(self) -> &'static str {
        match self {
            PropertyClass::Assertion => "assertion",
            PropertyClass::ArrayBounds => "array_bounds",
            PropertyClass::Overflow => "overflow",
            PropertyClass::DivisionByZero => "division_by_zero",
            PropertyClass::UndefinedShift => "undefined_shift",
            PropertyClass::Conversion => "conversion",
            PropertyClass::Unwind => "unwind",
            PropertyClass::PointerDispatch => "pointer_dispatch",
            PropertyClass::Coverage => "coverage",
        }
    }
}

impl fmt::Display for PropertyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyInfo {
    /// Empty until the properties of the model are numbered.
    pub id: String,
    pub class: PropertyClass,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstrKind {
    Decl(Expr),
    Dead(Expr),
    Assign {
        lhs: Expr,
        rhs: Expr,
    },
    Assume(Expr),
    Assert(Expr),
    Goto {
        guard: Expr,
        target: usize,
    },
    Call {
        lhs: Option<Expr>,
        function: Expr,
        args: Vec<Expr>,
    },
    Return(Option<Expr>),
    Input {
        name: Arc<str>,
        args: Vec<Expr>,
    },
    Output {
        name: Arc<str>,
        args: Vec<Expr>,
    },
    Skip,
    EndFunction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction {
    pub kind: InstrKind,
    pub loc: Option<Arc<SourceLocation>>,
    pub labels: Vec<String>,
    pub property: Option<PropertyInfo>,
}

impl Instruction {
    pub fn new(kind: InstrKind, loc: Option<Arc<SourceLocation>>) -> Self {
        Instruction {
            kind,
            loc,
            labels: Vec::new(),
            property: None,
        }
    }

    pub fn assertion(cond: Expr, class: PropertyClass, description: String, loc: Option<Arc<SourceLocation>>) -> Self {
        Instruction {
            kind: InstrKind::Assert(cond),
            loc,
            labels: Vec::new(),
            property: Some(PropertyInfo {
                id: String::new(),
                class,
                description,
            }),
        }
    }

    pub fn is_backjump(&self, index: usize) -> bool {
        matches!(self.kind, InstrKind::Goto { target, .. } if target <= index)
    }

    /// Every expression the instruction reads or writes.
    pub fn exprs(&self) -> Vec<&Expr> {
        match &self.kind {
            InstrKind::Decl(e) | InstrKind::Dead(e) | InstrKind::Assume(e) | InstrKind::Assert(e) => vec![e],
            InstrKind::Assign { lhs, rhs } => vec![lhs, rhs],
            InstrKind::Goto { guard, .. } => vec![guard],
            InstrKind::Call { lhs, function, args } => {
                let mut v: Vec<&Expr> = lhs.iter().collect();
                v.push(function);
                v.extend(args);
                v
            }
            InstrKind::Return(e) => e.iter().collect(),
            InstrKind::Input { args, .. } | InstrKind::Output { args, .. } => args.iter().collect(),
            InstrKind::Skip | InstrKind::EndFunction => vec![],
        }
    }

    pub fn exprs_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            InstrKind::Decl(e) | InstrKind::Dead(e) | InstrKind::Assume(e) | InstrKind::Assert(e) => vec![e],
            InstrKind::Assign { lhs, rhs } => vec![lhs, rhs],
            InstrKind::Goto { guard, .. } => vec![guard],
            InstrKind::Call { lhs, function, args } => {
                let mut v: Vec<&mut Expr> = lhs.iter_mut().collect();
                v.push(function);
                v.extend(args.iter_mut());
                v
            }
            InstrKind::Return(e) => e.iter_mut().collect(),
            InstrKind::Input { args, .. } | InstrKind::Output { args, .. } => args.iter_mut().collect(),
            InstrKind::Skip | InstrKind::EndFunction => vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GotoFunction {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub ty: CType,
    /// `None` for functions that are only declared.
    pub body: Option<Vec<Instruction>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loop {
    pub number: usize,
    pub head: usize,
    pub backjump: usize,
    pub loc: Option<Arc<SourceLocation>>,
}

impl GotoFunction {
    pub fn instructions(&self) -> &[Instruction] {
        self.body.as_deref().unwrap_or(&[])
    }

    /// Loops are identified by their backjumps, numbered in instruction order.
    pub fn loops(&self) -> Vec<Loop> {
        self.instructions()
            .iter()
            .enumerate()
            .filter(|(i, ins)| ins.is_backjump(*i))
            .enumerate()
            .map(|(number, (i, ins))| {
                let InstrKind::Goto { target, .. } = ins.kind else {
                    unreachable!()
                };
                Loop {
                    number,
                    head: target,
                    backjump: i,
                    loc: ins.loc.clone(),
                }
            })
            .collect()
    }

    pub fn return_type(&self) -> CType {
        match &self.ty {
            CType::Code { ret, .. } => (**ret).clone(),
            _ => CType::Void,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GotoModel {
    pub symtab: SymbolTable,
    pub functions: IndexMap<Ident, GotoFunction>,
    pub entry: Option<Ident>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GotoError(pub String);

impl fmt::Display for GotoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for GotoError {}

impl GotoModel {
    /// Structural well-formedness: targets in range, one trailing END_FUNCTION.
    pub fn check_well_formed(&self) -> Result<(), GotoError> {
        for f in self.functions.values() {
            let Some(body) = &f.body else { continue };
            let ends = body.iter().filter(|i| i.kind == InstrKind::EndFunction).count();
            if ends != 1 || body.last().map(|i| &i.kind) != Some(&InstrKind::EndFunction) {
                return Err(GotoError(format!("function `{}' does not end in END_FUNCTION", f.name)));
            }
            for ins in body {
                if let InstrKind::Goto { target, .. } = ins.kind {
                    if target >= body.len() {
                        return Err(GotoError(format!("goto target {target} out of range in `{}'", f.name)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Assigns `<function>.<class>.<n>` ids to every property, counting per
    /// function and class in instruction order.
    pub fn number_properties(&mut self) {
        for f in self.functions.values_mut() {
            let mut counters: IndexMap<PropertyClass, usize> = IndexMap::new();
            let name = f.name.clone();
            for ins in f.body.iter_mut().flatten() {
                if let Some(p) = &mut ins.property {
                    let n = counters.entry(p.class).or_insert(0);
                    *n += 1;
                    p.id = format!("{name}.{}.{n}", p.class);
                }
            }
        }
    }

    pub fn function(&self, name: &str) -> Option<&GotoFunction> {
        self.functions.get(name)
    }
}

/// Rebuilds a body by replacing every instruction with a sequence.
///
/// The callback receives the index the replacement will start at. Jump
/// targets it marks as final are kept; all others refer to old indices and
/// are remapped to the start of the replacement of their old target.
pub fn expand_body(
    body: Vec<Instruction>,
    mut f: impl FnMut(usize, Instruction) -> Vec<(Instruction, bool)>,
) -> Vec<Instruction> {
    let mut out: Vec<Instruction> = Vec::new();
    let mut final_target = Vec::new();
    let mut start = Vec::with_capacity(body.len());
    for ins in body {
        start.push(out.len());
        let labels = ins.labels.clone();
        let mut repl = f(out.len(), ins);
        if let Some((first, _)) = repl.first_mut() {
            if first.labels.is_empty() {
                first.labels = labels;
            }
        }
        for (i, is_final) in repl {
            out.push(i);
            final_target.push(is_final);
        }
    }
    for (ins, is_final) in out.iter_mut().zip(final_target) {
        if let InstrKind::Goto { target, .. } = &mut ins.kind {
            if !is_final {
                *target = start[*target];
            }
        }
    }
    out
}
