//! Lowering of typed statements to guarded GOTO instructions.

use std::sync::Arc;

use crate::frontend::expr::{Expr, ExprKind, UnaryOp};
use crate::frontend::symbol::{Symbol, SymbolTable};
use crate::frontend::typecheck::{Stmt, StmtKind, TypedFunction, TypedProgram};
use crate::frontend::types::{CType, Ident, SourceLocation};

use super::{return_value_name, GotoFunction, GotoModel, InstrKind, Instruction, PropertyClass};

type Loc = Option<Arc<SourceLocation>>;

pub fn convert_program(prog: &TypedProgram) -> GotoModel {
    let mut symtab = prog.symtab.clone();
    let mut functions = indexmap::IndexMap::new();
    let function_symbols: Vec<Symbol> = prog.symtab.iter().filter(|s| s.is_function).cloned().collect();
    for sym in &function_symbols {
        add_return_symbol(&mut symtab, sym);
    }
    for sym in &function_symbols {
        let (params, body) = match prog.functions.get(&sym.name) {
            Some(tf) => (tf.params.clone(), Some(convert_function(&mut symtab, tf))),
            None => (Vec::new(), None),
        };
        functions.insert(
            sym.name.clone(),
            GotoFunction {
                name: sym.name.clone(),
                params,
                ty: sym.ty.clone(),
                body,
            },
        );
    }
    GotoModel {
        symtab,
        functions,
        entry: None,
    }
}

/// Declares `f#return_value` for functions returning a value.
pub fn add_return_symbol(symtab: &mut SymbolTable, f: &Symbol) {
    let CType::Code { ret, .. } = &f.ty else { return };
    if **ret == CType::Void {
        return;
    }
    let name: Ident = Arc::from(return_value_name(&f.name));
    if symtab.contains(&name) {
        return;
    }
    let mut sym = Symbol::variable(name.clone(), name, (**ret).clone(), f.loc.clone(), f.module.clone());
    sym.is_static_lifetime = true;
    symtab.insert(sym);
}

struct LoopContext {
    break_label: usize,
    continue_label: usize,
    scope_depth: usize,
}

struct Converter<'a> {
    symtab: &'a mut SymbolTable,
    function: Ident,
    out: Vec<Instruction>,
    labels: Vec<Option<usize>>,
    scopes: Vec<Vec<Expr>>,
    loops: Vec<LoopContext>,
    end_label: usize,
    temps: usize,
}

pub fn convert_function(symtab: &mut SymbolTable, f: &TypedFunction) -> Vec<Instruction> {
    let mut c = Converter {
        symtab,
        function: f.name.clone(),
        out: Vec::new(),
        labels: Vec::new(),
        scopes: Vec::new(),
        loops: Vec::new(),
        end_label: 0,
        temps: 0,
    };
    c.end_label = c.new_label();
    c.function_body(&f.body);
    c.place(c.end_label);
    c.emit(InstrKind::EndFunction, Some(f.end_loc.clone()));
    c.finish()
}

/// `!c`, removing a double negation.
pub fn negate(c: &Expr) -> Expr {
    match &c.kind {
        ExprKind::Unary(UnaryOp::Not, inner) => (**inner).clone(),
        ExprKind::Constant(v) if c.ty.is_bool() => Expr::bool_const(*v == 0).with_loc(c.loc.clone()),
        _ => Expr::not(c.clone()).with_loc(c.loc.clone()),
    }
}

impl Converter<'_> {
    fn new_label(&mut self) -> usize {
        self.labels.push(None);
        self.labels.len() - 1
    }

    fn place(&mut self, label: usize) {
        self.labels[label] = Some(self.out.len());
    }

    fn emit(&mut self, kind: InstrKind, loc: Loc) -> usize {
        self.out.push(Instruction::new(kind, loc));
        self.out.len() - 1
    }

    fn goto(&mut self, guard: Expr, label: usize, loc: Loc) {
        self.emit(InstrKind::Goto { guard, target: label }, loc);
    }

    fn finish(mut self) -> Vec<Instruction> {
        for ins in &mut self.out {
            if let InstrKind::Goto { target, .. } = &mut ins.kind {
                *target = self.labels[*target].expect("unplaced label");
            }
        }
        self.out
    }

    fn function_body(&mut self, body: &Stmt) {
        match &body.kind {
            StmtKind::Block(items, end) => {
                self.scopes.push(Vec::new());
                let n = items.len();
                let mut returned = false;
                for (i, s) in items.iter().enumerate() {
                    let last = i + 1 == n;
                    if last && matches!(s.kind, StmtKind::Return(_)) {
                        self.return_stmt(s, true);
                        returned = true;
                    } else {
                        self.stmt(s);
                    }
                }
                let scope = self.scopes.pop().unwrap();
                if !returned {
                    self.deads(&scope, Some(end.clone()));
                }
            }
            _ => self.stmt(body),
        }
    }

    fn deads(&mut self, scope: &[Expr], loc: Loc) {
        for sym in scope.iter().rev() {
            self.emit(InstrKind::Dead(sym.clone()), loc.clone());
        }
    }

    /// Kills the locals of every scope deeper than `depth`, innermost first.
    fn deads_to(&mut self, depth: usize, loc: Loc) {
        let scopes: Vec<Vec<Expr>> = self.scopes[depth..].to_vec();
        for scope in scopes.iter().rev() {
            self.deads(scope, loc.clone());
        }
    }

    fn return_stmt(&mut self, s: &Stmt, last: bool) {
        let StmtKind::Return(e) = &s.kind else { unreachable!() };
        let loc = Some(s.loc.clone());
        let value = e.as_ref().map(|e| self.clean(e, &loc));
        self.emit(InstrKind::Return(value), loc.clone());
        self.deads_to(0, loc.clone());
        if !last {
            self.goto(Expr::true_expr(), self.end_label, loc);
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        let loc: Loc = Some(s.loc.clone());
        match &s.kind {
            StmtKind::Decl { symbol, init } => {
                let ty = self.symtab.get(symbol).expect("declared symbol").ty.clone();
                let sym = Expr::symbol(symbol.clone(), ty).with_loc(loc.clone());
                self.emit(InstrKind::Decl(sym.clone()), loc.clone());
                self.scopes.last_mut().expect("scope").push(sym.clone());
                if let Some(init) = init {
                    self.assign(sym, init, &loc);
                }
            }
            StmtKind::Expr(e) => self.expr_stmt(e, &loc),
            StmtKind::If { cond, then, els } => {
                let c = self.clean(cond, &loc);
                let else_label = self.new_label();
                self.goto(negate(&c), else_label, loc.clone());
                self.stmt(then);
                match els {
                    Some(els) => {
                        let end = self.new_label();
                        self.goto(Expr::true_expr(), end, loc.clone());
                        self.place(else_label);
                        self.stmt(els);
                        self.place(end);
                    }
                    None => self.place(else_label),
                }
            }
            StmtKind::While { cond, body } => {
                let head = self.new_label();
                let exit = self.new_label();
                let cont = self.new_label();
                self.place(head);
                let c = self.clean(cond, &loc);
                if !c.is_true() {
                    self.goto(negate(&c), exit, loc.clone());
                }
                self.loop_body(body, exit, cont);
                self.place(cont);
                self.goto(Expr::true_expr(), head, loc.clone());
                self.place(exit);
            }
            StmtKind::DoWhile { body, cond } => {
                let head = self.new_label();
                let exit = self.new_label();
                let cont = self.new_label();
                self.place(head);
                self.loop_body(body, exit, cont);
                self.place(cont);
                let c = self.clean(cond, &loc);
                if !c.is_false() {
                    self.goto(c, head, loc.clone());
                }
                self.place(exit);
            }
            StmtKind::For { init, cond, step, body } => {
                if let Some(init) = init {
                    self.stmt(init);
                }
                let head = self.new_label();
                let exit = self.new_label();
                let cont = self.new_label();
                self.place(head);
                if let Some(cond) = cond {
                    let c = self.clean(cond, &loc);
                    if !c.is_true() {
                        self.goto(negate(&c), exit, loc.clone());
                    }
                }
                self.loop_body(body, exit, cont);
                self.place(cont);
                for e in step {
                    let l = e.loc.clone().or(loc.clone());
                    self.expr_stmt(e, &l);
                }
                self.goto(Expr::true_expr(), head, loc.clone());
                self.place(exit);
            }
            StmtKind::Break | StmtKind::Continue => {
                let ctx = self.loops.last().expect("loop context");
                let (depth, label) = if s.kind == StmtKind::Break {
                    (ctx.scope_depth, ctx.break_label)
                } else {
                    (ctx.scope_depth, ctx.continue_label)
                };
                self.deads_to(depth, loc.clone());
                self.goto(Expr::true_expr(), label, loc);
            }
            StmtKind::Return(_) => self.return_stmt(s, false),
            StmtKind::Block(items, end) => {
                self.scopes.push(Vec::new());
                for item in items {
                    self.stmt(item);
                }
                let scope = self.scopes.pop().unwrap();
                self.deads(&scope, Some(end.clone()));
            }
            StmtKind::Seq(items) => {
                for item in items {
                    self.stmt(item);
                }
            }
            StmtKind::Skip => {}
            StmtKind::Assume(e) => {
                let c = self.clean(e, &loc);
                self.emit(InstrKind::Assume(c), loc);
            }
            StmtKind::Assert { cond, description } => {
                let c = self.clean(cond, &loc);
                self.out.push(Instruction::assertion(
                    c,
                    PropertyClass::Assertion,
                    description.clone(),
                    loc,
                ));
            }
            StmtKind::Cover(e) => {
                let c = self.clean(e, &loc);
                let description = format!("condition `{c}'");
                self.out.push(Instruction::assertion(
                    negate(&c),
                    PropertyClass::Coverage,
                    description,
                    loc,
                ));
            }
            StmtKind::Input { name, args } => {
                let args = args.iter().map(|a| self.clean(a, &loc)).collect();
                self.emit(
                    InstrKind::Input {
                        name: name.clone(),
                        args,
                    },
                    loc,
                );
            }
            StmtKind::Output { name, args } => {
                let args = args.iter().map(|a| self.clean(a, &loc)).collect();
                self.emit(
                    InstrKind::Output {
                        name: name.clone(),
                        args,
                    },
                    loc,
                );
            }
        }
    }

    fn loop_body(&mut self, body: &Stmt, exit: usize, cont: usize) {
        self.loops.push(LoopContext {
            break_label: exit,
            continue_label: cont,
            scope_depth: self.scopes.len(),
        });
        self.stmt(body);
        self.loops.pop();
    }

    fn expr_stmt(&mut self, e: &Expr, loc: &Loc) {
        match &e.kind {
            ExprKind::Assign { lhs, rhs, .. } => {
                let lhs = self.clean(lhs, loc);
                self.assign(lhs, rhs, loc);
            }
            ExprKind::Call(f, args) => {
                let f = self.clean(f, loc);
                let args = args.iter().map(|a| self.clean(a, loc)).collect();
                self.emit(
                    InstrKind::Call {
                        lhs: None,
                        function: f,
                        args,
                    },
                    loc.clone(),
                );
            }
            ExprKind::Typecast(inner) if e.ty == CType::Void => self.expr_stmt(inner, loc),
            _ if e.has_side_effects() => {
                self.clean(e, loc);
            }
            _ => {
                self.emit(InstrKind::Skip, loc.clone());
            }
        }
    }

    fn assign(&mut self, lhs: Expr, rhs: &Expr, loc: &Loc) {
        if let ExprKind::Call(f, args) = &rhs.kind {
            if rhs.ty == lhs.ty {
                let f = self.clean(f, loc);
                let args = args.iter().map(|a| self.clean(a, loc)).collect();
                self.emit(
                    InstrKind::Call {
                        lhs: Some(lhs),
                        function: f,
                        args,
                    },
                    loc.clone(),
                );
                return;
            }
        }
        let rhs = self.clean(rhs, loc);
        self.emit(InstrKind::Assign { lhs, rhs }, loc.clone());
    }

    fn temp(&mut self, base: &str, ty: CType, loc: &Loc) -> Expr {
        self.temps += 1;
        let name: Ident = Arc::from(format!("{}::$tmp::{base}${}", self.function, self.temps));
        let sym_loc = loc.as_deref().cloned().unwrap_or_else(|| SourceLocation::built_in(1));
        let sym = Symbol::variable(name.clone(), name.clone(), ty.clone(), sym_loc, Arc::from(""));
        self.symtab.insert(sym);
        Expr::symbol(name, ty).with_loc(loc.clone())
    }

    /// Moves calls, assignments and side-effecting conditionals out of an
    /// expression into preceding instructions.
    fn clean(&mut self, e: &Expr, loc: &Loc) -> Expr {
        if !e.has_side_effects() {
            return e.clone();
        }
        let eloc = e.loc.clone().or(loc.clone());
        match &e.kind {
            ExprKind::Call(f, _) => {
                let base = match &f.kind {
                    ExprKind::FunctionAddress(n) => format!("return_value_{n}"),
                    _ => "return_value".to_string(),
                };
                let tmp = self.temp(&base, e.ty.clone(), &eloc);
                self.assign(tmp.clone(), e, &eloc);
                tmp
            }
            ExprKind::Assign { lhs, rhs, post } => {
                let lhs = self.clean(lhs, &eloc);
                let old = if *post {
                    let t = self.temp("post", lhs.ty.clone(), &eloc);
                    self.emit(
                        InstrKind::Assign {
                            lhs: t.clone(),
                            rhs: lhs.clone(),
                        },
                        eloc.clone(),
                    );
                    Some(t)
                } else {
                    None
                };
                self.assign(lhs.clone(), rhs, &eloc);
                old.unwrap_or(lhs)
            }
            ExprKind::Conditional(c, a, b) if a.has_side_effects() || b.has_side_effects() => {
                let c = self.clean(c, &eloc);
                let tmp = self.temp("if_expr", e.ty.clone(), &eloc);
                let else_label = self.new_label();
                let end = self.new_label();
                self.goto(negate(&c), else_label, eloc.clone());
                self.assign(tmp.clone(), a, &eloc);
                self.goto(Expr::true_expr(), end, eloc.clone());
                self.place(else_label);
                self.assign(tmp.clone(), b, &eloc);
                self.place(end);
                tmp
            }
            _ => {
                let mut out = e.clone();
                for child in out.children_mut() {
                    *child = self.clean(child, &eloc);
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::types::PlatformConfig;
    use crate::frontend::{compile_source, PreprocessOptions};

    fn model(src: &str) -> GotoModel {
        let p = compile_source("t.c", src, &PreprocessOptions::default(), &PlatformConfig::default()).unwrap();
        convert_program(&p)
    }

    #[test]
    fn targets_are_in_range() {
        let m = model(
            "int f(int x) { int s = 0; for(int i = 0; i < x; i++) { if(i == 3) break; if(i == 1) continue; s += i; } \
             do { s--; } while(s > 10); while(1) { if(s) return s; s++; } }",
        );
        assert!(m.check_well_formed().is_ok());
        assert_eq!(m.functions["f"].loops().len(), 3);
    }

    #[test]
    fn decls_have_deads() {
        let m = model("void f() { int a; { int b; } }");
        let body = m.functions["f"].instructions();
        let kinds: Vec<String> = body
            .iter()
            .map(|i| match &i.kind {
                InstrKind::Decl(e) => format!("decl {e}"),
                InstrKind::Dead(e) => format!("dead {e}"),
                InstrKind::EndFunction => "end".into(),
                _ => "other".into(),
            })
            .collect();
        assert_eq!(kinds, ["decl a", "decl b", "dead b", "dead a", "end"]);
    }

    #[test]
    fn side_effects_are_hoisted() {
        let m = model("int g(); int f() { int t; while((t = g()) != 10) { t++; } return t; }");
        let body = m.functions["f"].instructions();
        assert!(matches!(&body[1].kind, InstrKind::Call { lhs: Some(_), .. }));
        assert!(matches!(&body[2].kind, InstrKind::Goto { .. }));
    }
}
