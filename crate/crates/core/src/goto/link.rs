//! Linking of separately compiled models.

use super::{GotoError, GotoModel};

pub fn link(models: Vec<GotoModel>) -> Result<GotoModel, GotoError> {
    let mut it = models.into_iter();
    let mut acc = it.next().unwrap_or_default();
    for m in it {
        link_into(&mut acc, m)?;
    }
    Ok(acc)
}

pub fn link_into(dest: &mut GotoModel, src: GotoModel) -> Result<(), GotoError> {
    for sym in src.symtab.symbols.into_values() {
        let Some(existing) = dest.symtab.get_mut(&sym.name) else {
            dest.symtab.insert(sym);
            continue;
        };
        if existing.is_function != sym.is_function || existing.ty != sym.ty {
            return Err(GotoError(format!("conflicting types for `{}'", sym.name)));
        }
        if sym.is_function {
            continue;
        }
        let existing_defines = existing.value.is_some() && !existing.is_extern;
        let src_defines = sym.value.is_some() && !sym.is_extern;
        if existing_defines && src_defines && existing.value != sym.value {
            return Err(GotoError(format!("conflicting definitions for `{}'", sym.name)));
        }
        if !existing_defines && src_defines {
            existing.value = sym.value;
            existing.is_extern = false;
            existing.loc = sym.loc;
        }
    }
    for (name, f) in src.functions {
        match dest.functions.get_mut(&name) {
            None => {
                dest.functions.insert(name, f);
            }
            Some(existing) => {
                if existing.ty != f.ty {
                    return Err(GotoError(format!("conflicting types for function `{name}'")));
                }
                match (&existing.body, &f.body) {
                    (Some(a), Some(b)) if a != b => {
                        return Err(GotoError(format!("conflicting definitions for function `{name}'")));
                    }
                    (None, Some(_)) => *existing = f,
                    _ => {}
                }
            }
        }
    }
    for f in dest.functions.values() {
        if let Some(sym) = dest.symtab.get_mut(&f.name) {
            sym.is_nondet_source = f.body.is_none();
        }
    }
    if dest.entry.is_none() {
        dest.entry = src.entry;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::types::PlatformConfig;
    use crate::frontend::{compile_source, PreprocessOptions};
    use crate::goto::convert::convert_program;

    fn model(file: &str, src: &str) -> GotoModel {
        let p = compile_source(file, src, &PreprocessOptions::default(), &PlatformConfig::default()).unwrap();
        convert_program(&p)
    }

    #[test]
    fn declaration_resolves_to_definition() {
        let a = model("a.c", "int f(int);\nint main() { return f(1); }");
        let b = model("b.c", "int f(int x) { return x + 1; }");
        let m = link(vec![a, b]).unwrap();
        assert!(m.functions["f"].body.is_some());
        assert!(!m.symtab.get("f").unwrap().is_nondet_source);
    }

    #[test]
    fn conflicting_bodies() {
        let a = model("a.c", "int f(int x) { return x; }");
        let b = model("b.c", "int f(int x) { return x + 1; }");
        let e = link(vec![a, b]).unwrap_err();
        assert!(e.0.contains("`f'"));
    }
}
