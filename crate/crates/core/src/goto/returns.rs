//! Return removal: `return e` becomes an assignment to `f#return_value`.

use std::sync::Arc;

use crate::frontend::expr::{Expr, ExprKind};

use super::{expand_body, return_value_name, GotoModel, InstrKind, Instruction};

pub fn remove_returns(model: &mut GotoModel) {
    let ret_types: Vec<(Arc<str>, crate::frontend::types::CType)> = model
        .functions
        .values()
        .map(|f| (f.name.clone(), f.return_type()))
        .collect();
    let ret_of = |name: &str| ret_types.iter().find(|(n, _)| &**n == name).map(|(_, t)| t.clone());
    for f in model.functions.values_mut() {
        let Some(body) = f.body.take() else { continue };
        let fname = f.name.clone();
        let own_ret = f.return_type();
        let new_body = expand_body(body, |_, mut ins| match ins.kind {
            InstrKind::Return(Some(e)) => {
                let lhs = Expr::symbol(Arc::from(return_value_name(&fname)), own_ret.clone()).with_loc(ins.loc.clone());
                ins.kind = InstrKind::Assign { lhs, rhs: e };
                vec![(ins, false)]
            }
            InstrKind::Return(None) => {
                ins.kind = InstrKind::Skip;
                vec![(ins, false)]
            }
            InstrKind::Call {
                lhs: Some(lhs),
                function,
                args,
            } => {
                let ExprKind::FunctionAddress(callee) = &function.kind else {
                    ins.kind = InstrKind::Call {
                        lhs: Some(lhs),
                        function,
                        args,
                    };
                    return vec![(ins, false)];
                };
                let ty = ret_of(callee).unwrap_or_else(|| lhs.ty.clone());
                let rv = Expr::symbol(Arc::from(return_value_name(callee)), ty).with_loc(ins.loc.clone());
                let assign = Instruction::new(InstrKind::Assign { lhs, rhs: rv }, ins.loc.clone());
                ins.kind = InstrKind::Call {
                    lhs: None,
                    function,
                    args,
                };
                vec![(ins, false), (assign, false)]
            }
            _ => vec![(ins, false)],
        });
        f.body = Some(new_body);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::types::PlatformConfig;
    use crate::frontend::{compile_source, PreprocessOptions};
    use crate::goto::convert::convert_program;

    #[test]
    fn no_returns_remain() {
        let p = compile_source(
            "t.c",
            "int g(int a) { if(a) return 1; return 2; } void h() { return; } int f() { int v = g(3); h(); return v; }",
            &PreprocessOptions::default(),
            &PlatformConfig::default(),
        )
        .unwrap();
        let mut m = convert_program(&p);
        remove_returns(&mut m);
        m.check_well_formed().unwrap();
        for f in m.functions.values() {
            for i in f.instructions() {
                assert!(!matches!(i.kind, InstrKind::Return(_)));
                assert!(!matches!(i.kind, InstrKind::Call { lhs: Some(_), .. }));
            }
        }
        let text: Vec<String> = m.functions["f"]
            .instructions()
            .iter()
            .map(|i| crate::goto::pretty::instruction_text(i, &Default::default()))
            .collect();
        assert!(text.contains(&"v = g#return_value;".to_string()), "{text:?}");
    }
}
