//! Text rendering of GOTO programs.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use crate::frontend::display::pretty_name;
use crate::frontend::expr::{Expr, ExprKind};

use super::{GotoFunction, GotoModel, InstrKind, Instruction};

/// Label numbers of jump targets: 1, 2, ... in target order.
pub fn target_labels(body: &[Instruction]) -> HashMap<usize, usize> {
    let targets: BTreeSet<usize> = body
        .iter()
        .filter_map(|i| match i.kind {
            InstrKind::Goto { target, .. } => Some(target),
            _ => None,
        })
        .collect();
    targets.into_iter().enumerate().map(|(n, t)| (t, n + 1)).collect()
}

fn args_text(args: &[Expr]) -> String {
    args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")
}

fn callee_text(f: &Expr) -> String {
    match &f.kind {
        ExprKind::FunctionAddress(n) => n.to_string(),
        _ => f.to_string(),
    }
}

pub fn instruction_text(ins: &Instruction, labels: &HashMap<usize, usize>) -> String {
    match &ins.kind {
        InstrKind::Decl(s) => format!("{} {};", s.ty, s),
        InstrKind::Dead(s) => match &s.kind {
            ExprKind::Symbol(n) => format!("dead {};", pretty_name(n)),
            _ => format!("dead {s};"),
        },
        InstrKind::Assign { lhs, rhs } => format!("{lhs} = {rhs};"),
        InstrKind::Assume(c) => format!("ASSUME {c}"),
        InstrKind::Assert(c) => format!("ASSERT {c}"),
        InstrKind::Goto { guard, target } => {
            let t = labels.get(target).copied().unwrap_or(*target);
            if guard.is_true() {
                format!("GOTO {t}")
            } else {
                format!("IF {guard} THEN GOTO {t}")
            }
        }
        InstrKind::Call { lhs, function, args } => {
            let call = format!("{}({});", callee_text(function), args_text(args));
            match lhs {
                Some(l) => format!("{l} = {call}"),
                None => call,
            }
        }
        InstrKind::Return(Some(e)) => format!("RETURN {e}"),
        InstrKind::Return(None) => "RETURN".to_string(),
        InstrKind::Input { name, args } => format!("INPUT(\"{name}\", {});", args_text(args)),
        InstrKind::Output { name, args } => format!("OUTPUT(\"{name}\", {});", args_text(args)),
        InstrKind::Skip => "SKIP".to_string(),
        InstrKind::EndFunction => "END_FUNCTION".to_string(),
    }
}

pub fn function_text(f: &GotoFunction) -> String {
    let mut out = String::new();
    let body = f.instructions();
    let labels = target_labels(body);
    writeln!(out, "{}", f.name).unwrap();
    for (i, ins) in body.iter().enumerate() {
        match &ins.loc {
            Some(l) => writeln!(out, "   // {i} {l}").unwrap(),
            None => writeln!(out, "   // {i} no location").unwrap(),
        }
        if !ins.labels.is_empty() {
            writeln!(out, "   // Labels: {}", ins.labels.join(", ")).unwrap();
        }
        let prefix = match labels.get(&i) {
            Some(n) => format!("{n}: "),
            None => "   ".to_string(),
        };
        writeln!(out, "{prefix}{}", instruction_text(ins, &labels)).unwrap();
    }
    out
}

/// The `--show-goto-functions` dump: every function with a body.
pub fn show_goto_functions(model: &GotoModel) -> String {
    model
        .functions
        .values()
        .filter(|f| f.body.is_some())
        .map(function_text)
        .collect::<Vec<_>>()
        .join("\n")
}

/// The `--show-loop-ids` listing.
pub fn show_loop_ids(model: &GotoModel) -> String {
    let mut out = String::new();
    for f in model.functions.values() {
        for l in f.loops() {
            writeln!(out, "Loop {}.{}:", f.name, l.number).unwrap();
            match &l.loc {
                Some(loc) => writeln!(out, "  {loc}").unwrap(),
                None => writeln!(out, "  no location").unwrap(),
            }
            out.push('\n');
        }
    }
    out
}
