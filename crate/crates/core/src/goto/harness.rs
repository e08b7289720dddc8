//! Entry harness: static initialisation, nondeterministic arguments and the
//! call of the entry function.

use std::sync::Arc;

use crate::frontend::expr::Expr;
use crate::frontend::symbol::Symbol;
use crate::frontend::types::{CType, Ident, PlatformConfig, SourceLocation};

use super::{
    return_value_name, GotoError, GotoFunction, GotoModel, InstrKind, Instruction, INITIALIZE, ROUNDING_MODE, START,
};

pub const RETURN_PRIME: &str = "return'";

pub fn build_entry_harness(model: &mut GotoModel, entry: &str, cfg: &PlatformConfig) -> Result<(), GotoError> {
    let Some(f) = model.functions.get(entry).filter(|f| f.body.is_some()).cloned() else {
        return Err(GotoError(format!(
            "the program has no entry point; function `{entry}' not found"
        )));
    };
    build_initialize(model, cfg);

    let fsym = model.symtab.get(entry).cloned().expect("entry symbol");
    let mut loc = fsym.loc.clone();
    loc.function = None;
    let at: Option<Arc<SourceLocation>> = Some(Arc::new(loc));
    let init_ty = cfg.code_pointer(CType::Code {
        params: vec![],
        ret: Box::new(CType::Void),
    });
    let init = Expr::new(
        crate::frontend::expr::ExprKind::FunctionAddress(Arc::from(INITIALIZE)),
        init_ty,
    );
    let mut body = vec![Instruction::new(
        InstrKind::Call {
            lhs: None,
            function: init,
            args: vec![],
        },
        None,
    )];
    let mut params = Vec::new();
    for p in &f.params {
        let ty = model.symtab.get(p).expect("parameter symbol").ty.clone();
        let sym = Expr::symbol(p.clone(), ty.clone());
        body.push(Instruction::new(InstrKind::Decl(sym.clone()), at.clone()));
        body.push(Instruction::new(
            InstrKind::Assign {
                lhs: sym.clone(),
                rhs: Expr::nondet(ty.clone()),
            },
            at.clone(),
        ));
        let base = model.symtab.get(p).unwrap().base_name.clone();
        body.push(Instruction::new(
            InstrKind::Input {
                name: base,
                args: vec![sym.clone()],
            },
            at.clone(),
        ));
        params.push(sym);
    }
    let callee = Expr::new(
        crate::frontend::expr::ExprKind::FunctionAddress(f.name.clone()),
        cfg.code_pointer(f.ty.clone()),
    );
    body.push(Instruction::new(
        InstrKind::Call {
            lhs: None,
            function: callee,
            args: params.clone(),
        },
        at.clone(),
    ));
    let ret = f.return_type();
    if ret != CType::Void {
        let prime: Ident = Arc::from(RETURN_PRIME);
        if !model.symtab.contains(RETURN_PRIME) {
            let mut s = Symbol::variable(
                prime.clone(),
                prime.clone(),
                ret.clone(),
                fsym.loc.clone(),
                fsym.module.clone(),
            );
            s.is_static_lifetime = true;
            model.symtab.insert(s);
        }
        let rv = Expr::symbol(Arc::from(return_value_name(&f.name)), ret.clone());
        let p = Expr::symbol(prime, ret);
        body.push(Instruction::new(
            InstrKind::Assign {
                lhs: p.clone(),
                rhs: rv.clone(),
            },
            at.clone(),
        ));
        body.push(Instruction::new(InstrKind::Dead(rv), at.clone()));
        body.push(Instruction::new(
            InstrKind::Output {
                name: Arc::from("return"),
                args: vec![p],
            },
            at.clone(),
        ));
    }
    for p in params.iter().rev() {
        body.push(Instruction::new(InstrKind::Dead(p.clone()), None));
    }
    body.push(Instruction::new(InstrKind::EndFunction, None));
    let start: Ident = Arc::from(START);
    let code = CType::Code {
        params: vec![],
        ret: Box::new(CType::Void),
    };
    add_function_symbol(model, &start, &code);
    model.functions.insert(
        start.clone(),
        GotoFunction {
            name: start.clone(),
            params: vec![],
            ty: code,
            body: Some(body),
        },
    );
    model.entry = Some(start);
    Ok(())
}

fn add_function_symbol(model: &mut GotoModel, name: &Ident, ty: &CType) {
    if !model.symtab.contains(name) {
        let mut s = Symbol::variable(
            name.clone(),
            name.clone(),
            ty.clone(),
            SourceLocation::built_in(1),
            Arc::from(""),
        );
        s.is_function = true;
        model.symtab.insert(s);
    }
}

fn build_initialize(model: &mut GotoModel, cfg: &PlatformConfig) {
    let rounding: Ident = Arc::from(ROUNDING_MODE);
    let builtin = SourceLocation::built_in(20);
    if !model.symtab.contains(ROUNDING_MODE) {
        let mut s = Symbol::variable(
            rounding.clone(),
            rounding.clone(),
            cfg.int(),
            builtin.clone(),
            Arc::from(""),
        );
        s.is_static_lifetime = true;
        s.value = Some(Expr::constant(0, cfg.int()));
        model.symtab.insert(s);
    }
    let mut first = Instruction::new(
        InstrKind::Assign {
            lhs: Expr::symbol(rounding.clone(), cfg.int()),
            rhs: Expr::constant(0, cfg.int()),
        },
        Some(Arc::new(builtin)),
    );
    first.labels.push("__CPROVER_HIDE".to_string());
    let mut body = vec![first];
    for s in model.symtab.iter() {
        if s.is_function || !s.is_static_lifetime || s.name == rounding {
            continue;
        }
        if let Some(v) = &s.value {
            let loc = Some(Arc::new(s.loc.clone()));
            body.push(Instruction::new(
                InstrKind::Assign {
                    lhs: Expr::symbol(s.name.clone(), s.ty.clone()),
                    rhs: v.clone(),
                },
                loc,
            ));
        }
    }
    body.push(Instruction::new(InstrKind::EndFunction, None));
    let name: Ident = Arc::from(INITIALIZE);
    let code = CType::Code {
        params: vec![],
        ret: Box::new(CType::Void),
    };
    add_function_symbol(model, &name, &code);
    model.functions.insert(
        name.clone(),
        GotoFunction {
            name,
            params: vec![],
            ty: code,
            body: Some(body),
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{compile_source, PreprocessOptions};
    use crate::goto::convert::convert_program;

    #[test]
    fn unknown_entry() {
        let cfg = PlatformConfig::default();
        let p = compile_source("t.c", "int f() { return 0; }", &PreprocessOptions::default(), &cfg).unwrap();
        let mut m = convert_program(&p);
        assert!(build_entry_harness(&mut m, "main", &cfg).is_err());
    }

    #[test]
    fn globals_are_initialised() {
        let cfg = PlatformConfig::default();
        let p = compile_source(
            "t.c",
            "int balance = 1000; int main() { return balance; }",
            &PreprocessOptions::default(),
            &cfg,
        )
        .unwrap();
        let mut m = convert_program(&p);
        build_entry_harness(&mut m, "main", &cfg).unwrap();
        let init = m.functions[INITIALIZE].instructions();
        assert!(init.iter().any(|i| matches!(&i.kind, InstrKind::Assign { lhs, rhs } if lhs.to_string() == "balance" && rhs.to_string() == "1000")));
    }
}
