//! Type checking: resolves names and types, makes every conversion explicit
//! and lowers the parse tree to a small typed statement language.

use std::collections::HashMap;
use std::sync::Arc;

use indexmap::IndexMap;

use super::ast::*;
use super::builtins::{self, Intrinsic};
use super::expr::{BinaryOp, Expr, ExprKind, UnaryOp};
use super::symbol::{Symbol, SymbolTable};
use super::types::{CType, Ident, IntKind, PlatformConfig, SourceLocation};
use super::FrontendError;
use crate::eval;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub loc: Arc<SourceLocation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Decl {
        symbol: Ident,
        init: Option<Expr>,
    },
    Expr(Expr),
    If {
        cond: Expr,
        then: Box<Stmt>,
        els: Option<Box<Stmt>>,
    },
    While {
        cond: Expr,
        body: Box<Stmt>,
    },
    DoWhile {
        body: Box<Stmt>,
        cond: Expr,
    },
    For {
        init: Option<Box<Stmt>>,
        cond: Option<Expr>,
        step: Vec<Expr>,
        body: Box<Stmt>,
    },
    Break,
    Continue,
    Return(Option<Expr>),
    /// A scope; the location is that of the closing brace.
    Block(Vec<Stmt>, Arc<SourceLocation>),
    /// Statements without a scope of their own.
    Seq(Vec<Stmt>),
    Skip,
    Assume(Expr),
    Assert {
        cond: Expr,
        description: String,
    },
    Cover(Expr),
    Input {
        name: Arc<str>,
        args: Vec<Expr>,
    },
    Output {
        name: Arc<str>,
        args: Vec<Expr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedFunction {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub ty: CType,
    pub body: Stmt,
    pub loc: SourceLocation,
    pub end_loc: Arc<SourceLocation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypedProgram {
    pub file: Ident,
    pub symtab: SymbolTable,
    pub functions: IndexMap<Ident, TypedFunction>,
}

pub fn typecheck(tu: &TranslationUnit, cfg: &PlatformConfig) -> Result<TypedProgram, FrontendError> {
    let mut tc = Typechecker {
        cfg,
        file: Arc::from(tu.file.as_str()),
        symtab: SymbolTable::new(),
        functions: IndexMap::new(),
        scopes: Vec::new(),
        current_fn: None,
        current_ret: CType::Void,
        used_names: HashMap::new(),
        loop_depth: 0,
    };
    for item in &tu.items {
        match item {
            ExternalDecl::Decl(d) => tc.global_declaration(d)?,
            ExternalDecl::Function {
                name,
                ty,
                storage,
                body,
                loc,
            } => tc.function_definition(name, ty, *storage, body, loc)?,
        }
    }
    for sym in tc.symtab.symbols.values_mut() {
        if sym.is_function && !tc.functions.contains_key(&sym.name) {
            sym.is_nondet_source = true;
        }
    }
    Ok(TypedProgram {
        file: tc.file,
        symtab: tc.symtab,
        functions: tc.functions,
    })
}

struct Typechecker<'a> {
    cfg: &'a PlatformConfig,
    file: Ident,
    symtab: SymbolTable,
    functions: IndexMap<Ident, TypedFunction>,
    scopes: Vec<HashMap<String, Ident>>,
    current_fn: Option<Ident>,
    current_ret: CType,
    used_names: HashMap<String, u32>,
    loop_depth: usize,
}

fn err<T>(loc: &SourceLocation, msg: impl Into<String>) -> Result<T, FrontendError> {
    Err(FrontendError::at(loc.clone(), msg))
}

/// Folds an operator node whose operands are all constants.
pub fn fold(e: Expr) -> Expr {
    let folded = match &e.kind {
        ExprKind::Unary(op, a) => a.as_constant().map(|v| eval::unary(*op, &a.ty, v)),
        ExprKind::Binary(op, a, b) => match (a.as_constant(), b.as_constant()) {
            (Some(x), Some(y)) => eval::binary(*op, x, &a.ty, y, &b.ty).ok(),
            _ => None,
        },
        ExprKind::Typecast(a) if e.ty.is_scalar() && a.ty.is_scalar() => {
            a.as_constant().map(|v| eval::cast(v, &a.ty, &e.ty))
        }
        ExprKind::Conditional(c, a, b) => match c.as_constant() {
            Some(v) => {
                let pick = if v != 0 { a } else { b };
                return (**pick).clone().with_loc(e.loc.clone());
            }
            None => None,
        },
        _ => None,
    };
    match folded {
        Some(v) => Expr::constant(v, e.ty.clone()).with_loc(e.loc),
        None => e,
    }
}

fn byte_size(ty: &CType) -> u64 {
    match ty {
        CType::Bool => 1,
        CType::Int { width, .. } | CType::Pointer { width, .. } => (*width as u64).div_ceil(8),
        CType::Array { element, size } => byte_size(element) * size,
        _ => 1,
    }
}

impl Typechecker<'_> {
    fn loc(&self, loc: &SourceLocation) -> Arc<SourceLocation> {
        let mut l = loc.clone();
        if let Some(f) = &self.current_fn {
            l.function = Some(f.clone());
        }
        Arc::new(l)
    }

    // ---- types -------------------------------------------------------------

    fn resolve_type(&mut self, ty: &AstType, loc: &SourceLocation) -> Result<CType, FrontendError> {
        Ok(match ty {
            AstType::Base(b) => match b {
                BaseType::Void => CType::Void,
                BaseType::Bool => CType::Bool,
                BaseType::Char { signed: None } => self.cfg.char(),
                BaseType::Char { signed: Some(s) } => CType::Int {
                    signed: *s,
                    width: 8,
                    kind: IntKind::Char,
                },
                BaseType::Short { signed } => CType::Int {
                    signed: *signed,
                    width: 16,
                    kind: IntKind::Short,
                },
                BaseType::Int { signed } => CType::Int {
                    signed: *signed,
                    width: self.cfg.int_width,
                    kind: IntKind::Int,
                },
                BaseType::Long { signed } => CType::Int {
                    signed: *signed,
                    width: self.cfg.long_width,
                    kind: IntKind::Long,
                },
                BaseType::LongLong { signed } => CType::Int {
                    signed: *signed,
                    width: 64,
                    kind: IntKind::LongLong,
                },
                BaseType::BitVector { signed, width } => {
                    let w = self.constant_integer(width)?;
                    if !(1..=64).contains(&w) {
                        return err(loc, format!("bit-vector width {w} out of range"));
                    }
                    CType::Int {
                        signed: *signed,
                        width: w as u32,
                        kind: IntKind::BitVector,
                    }
                }
            },
            AstType::Pointer(t) => CType::Pointer {
                target: Box::new(self.resolve_type(t, loc)?),
                width: self.cfg.pointer_width,
            },
            AstType::Array(t, n) => {
                let element = self.resolve_type(t, loc)?;
                if matches!(element, CType::Void | CType::Code { .. }) {
                    return err(loc, "invalid array element type");
                }
                let size = match n {
                    Some(n) => self.constant_integer(n)?,
                    None => return err(loc, "array size missing"),
                };
                if size < 1 {
                    return err(loc, format!("array size {size} must be positive"));
                }
                CType::Array {
                    element: Box::new(element),
                    size: size as u64,
                }
            }
            AstType::Function(params, ret) => {
                let mut ps = Vec::new();
                for p in params {
                    ps.push(self.param_type(&p.ty, &p.loc)?);
                }
                CType::Code {
                    params: ps,
                    ret: Box::new(self.resolve_type(ret, loc)?),
                }
            }
        })
    }

    fn param_type(&mut self, ty: &AstType, loc: &SourceLocation) -> Result<CType, FrontendError> {
        // Array and function parameters decay to pointers.
        let t = match ty {
            AstType::Array(inner, _) => AstType::Pointer(inner.clone()),
            AstType::Function(..) => AstType::Pointer(Box::new(ty.clone())),
            other => other.clone(),
        };
        let ct = self.resolve_type(&t, loc)?;
        if ct == CType::Void {
            return err(loc, "parameter of type void");
        }
        Ok(ct)
    }

    fn constant_integer(&mut self, e: &AstExpr) -> Result<i128, FrontendError> {
        let typed = self.expr(e)?;
        match typed.as_i128() {
            Some(v) => Ok(v),
            None => err(&e.loc, "expression is not a compile-time constant"),
        }
    }

    fn promote(&self, e: Expr) -> Expr {
        let target = match &e.ty {
            CType::Bool => Some(self.cfg.int()),
            CType::Int { signed, width, kind }
                if matches!(kind, IntKind::Char | IntKind::Short | IntKind::BitVector)
                    && *width <= self.cfg.int_width =>
            {
                if *signed || *width < self.cfg.int_width {
                    Some(self.cfg.int())
                } else {
                    Some(self.cfg.uint())
                }
            }
            _ => None,
        };
        match target {
            Some(t) => self.convert(e, &t),
            None => e,
        }
    }

    fn common_type(&self, a: &CType, b: &CType) -> CType {
        if a == b {
            return a.clone();
        }
        if a.is_signed() == b.is_signed() {
            return if a.rank() >= b.rank() { a.clone() } else { b.clone() };
        }
        let (u, s) = if a.is_signed() { (b, a) } else { (a, b) };
        if u.rank() >= s.rank() {
            u.clone()
        } else if s.width() > u.width() {
            s.clone()
        } else if let CType::Int { width, kind, .. } = s {
            CType::unsigned(*width, *kind)
        } else {
            u.clone()
        }
    }

    fn convert(&self, e: Expr, to: &CType) -> Expr {
        if &e.ty == to {
            return e;
        }
        if to.is_bool() {
            return self.to_bool(e);
        }
        let loc = e.loc.clone();
        fold(Expr::typecast(e, to.clone()).with_loc(loc))
    }

    fn to_bool(&self, e: Expr) -> Expr {
        if e.ty.is_bool() {
            return e;
        }
        let loc = e.loc.clone();
        let zero = Expr::constant(0, e.ty.clone()).with_loc(loc.clone());
        fold(Expr::binary(BinaryOp::Ne, e, zero).with_loc(loc))
    }

    fn scalar_check(&self, e: &Expr, loc: &SourceLocation) -> Result<(), FrontendError> {
        if e.ty.is_scalar() {
            Ok(())
        } else {
            err(loc, format!("operand of type `{}' where a scalar is required", e.ty))
        }
    }

    fn arith_check(&self, e: &Expr, loc: &SourceLocation) -> Result<(), FrontendError> {
        if e.ty.is_arithmetic() {
            Ok(())
        } else {
            err(loc, format!("operand of type `{}' where an integer is required", e.ty))
        }
    }

    // ---- declarations ------------------------------------------------------

    fn declare_function(
        &mut self,
        name: &str,
        ty: CType,
        storage: StorageClass,
        loc: &SourceLocation,
    ) -> Result<Ident, FrontendError> {
        let ident: Ident = Arc::from(name);
        if let Some(existing) = self.symtab.get(name) {
            if !existing.is_function || existing.ty != ty {
                return err(loc, format!("conflicting types for `{name}'"));
            }
            return Ok(ident);
        }
        let mut sym = Symbol::variable(ident.clone(), ident.clone(), ty, loc.clone(), self.file.clone());
        sym.is_function = true;
        sym.is_file_local = storage == StorageClass::Static;
        self.symtab.insert(sym);
        Ok(ident)
    }

    fn global_declaration(&mut self, d: &Declaration) -> Result<(), FrontendError> {
        if let AstType::Function(..) = d.ty {
            let ty = self.resolve_type(&d.ty, &d.loc)?;
            self.declare_function(&d.name, ty, d.storage, &d.loc)?;
            return Ok(());
        }
        let ty = self.declared_type(&d.ty, d.init.as_ref(), &d.loc)?;
        if ty == CType::Void {
            return err(&d.loc, format!("variable `{}' declared void", d.name));
        }
        let value = match &d.init {
            Some(init) => Some(self.initializer(&ty, init)?),
            None if d.storage == StorageClass::Extern => None,
            None => Some(zero_value(&ty)),
        };
        let name: Ident = Arc::from(d.name.as_str());
        if let Some(existing) = self.symtab.get_mut(&d.name) {
            if existing.is_function || existing.ty != ty {
                return err(&d.loc, format!("conflicting types for `{}'", d.name));
            }
            if d.init.is_some() && existing.value.is_some() && !existing.is_extern {
                let tentative = existing.value.as_ref().is_some_and(|v| *v == zero_value(&ty));
                if !tentative {
                    return err(&d.loc, format!("redefinition of `{}'", d.name));
                }
            }
            if value.is_some() && (d.init.is_some() || existing.value.is_none()) {
                existing.value = value;
                existing.is_extern = false;
                existing.loc = d.loc.clone();
            }
            return Ok(());
        }
        let mut sym = Symbol::variable(name.clone(), name, ty, d.loc.clone(), self.file.clone());
        sym.is_static_lifetime = true;
        sym.is_file_local = d.storage == StorageClass::Static;
        sym.is_extern = d.storage == StorageClass::Extern && d.init.is_none();
        sym.value = value;
        self.symtab.insert(sym);
        Ok(())
    }

    /// Resolves a declared type, taking an unsized array's length from its initializer.
    fn declared_type(
        &mut self,
        ty: &AstType,
        init: Option<&AstExpr>,
        loc: &SourceLocation,
    ) -> Result<CType, FrontendError> {
        if let AstType::Array(elem, None) = ty {
            let n = match init.map(|i| &i.kind) {
                Some(AstExprKind::InitList(items)) => items.len() as u64,
                Some(AstExprKind::Str(s)) => s.len() as u64 + 1,
                _ => return err(loc, "array size missing"),
            };
            let element = self.resolve_type(elem, loc)?;
            return Ok(CType::Array {
                element: Box::new(element),
                size: n.max(1),
            });
        }
        self.resolve_type(ty, loc)
    }

    fn initializer(&mut self, ty: &CType, init: &AstExpr) -> Result<Expr, FrontendError> {
        let loc = self.loc(&init.loc);
        match (ty, &init.kind) {
            (CType::Array { element, size }, AstExprKind::InitList(items)) => {
                if items.len() as u64 > *size {
                    return err(&init.loc, "excess elements in array initializer");
                }
                let mut elems = Vec::new();
                for item in items {
                    elems.push(self.initializer(element, item)?);
                }
                while (elems.len() as u64) < *size {
                    elems.push(zero_value(element));
                }
                Ok(Expr::new(ExprKind::ArrayLit(elems), ty.clone()).with_loc(Some(loc)))
            }
            (CType::Array { element, size }, AstExprKind::Str(s)) if element.is_integer() => {
                let bytes = s.as_bytes();
                if bytes.len() as u64 > *size {
                    return err(&init.loc, "initializer string is too long");
                }
                let mut elems: Vec<Expr> = bytes
                    .iter()
                    .map(|b| Expr::constant(*b as u64, (**element).clone()))
                    .collect();
                while (elems.len() as u64) < *size {
                    elems.push(zero_value(element));
                }
                Ok(Expr::new(ExprKind::ArrayLit(elems), ty.clone()).with_loc(Some(loc)))
            }
            (CType::Array { .. }, _) => err(&init.loc, "array initializer must be a list"),
            (_, AstExprKind::InitList(items)) if items.len() == 1 => self.initializer(ty, &items[0]),
            (_, AstExprKind::InitList(_)) => err(&init.loc, "invalid scalar initializer"),
            _ => {
                let e = self.expr(init)?;
                self.assign_compatible(&e, ty, &init.loc)?;
                Ok(self.convert(e, ty))
            }
        }
    }

    fn assign_compatible(&self, e: &Expr, ty: &CType, loc: &SourceLocation) -> Result<(), FrontendError> {
        let ok = match (ty, &e.ty) {
            (CType::Pointer { .. }, CType::Pointer { .. }) => true,
            (CType::Pointer { .. }, t) => t.is_integer() && e.as_constant() == Some(0),
            (t, s) => t.is_arithmetic() && s.is_arithmetic(),
        };
        if ok {
            Ok(())
        } else {
            err(loc, format!("cannot convert `{}' to `{}'", e.ty, ty))
        }
    }

    fn function_definition(
        &mut self,
        name: &str,
        ty: &AstType,
        storage: StorageClass,
        body: &AstStmt,
        loc: &SourceLocation,
    ) -> Result<(), FrontendError> {
        let cty = self.resolve_type(ty, loc)?;
        let ident = self.declare_function(name, cty.clone(), storage, loc)?;
        if self.functions.contains_key(&ident) {
            return err(loc, format!("redefinition of function `{name}'"));
        }
        let AstType::Function(params, _) = ty else {
            unreachable!()
        };
        let CType::Code { params: ptys, ret } = &cty else {
            unreachable!()
        };
        self.current_fn = Some(ident.clone());
        self.current_ret = (**ret).clone();
        self.used_names.clear();
        self.scopes = vec![HashMap::new()];
        let mut param_names = Vec::new();
        for (i, (p, pty)) in params.iter().zip(ptys).enumerate() {
            let base = p.name.clone().unwrap_or_else(|| format!("#anon{i}"));
            let mangled = self.fresh_local(&base);
            let mut sym = Symbol::variable(
                mangled.clone(),
                Arc::from(base.as_str()),
                pty.clone(),
                (*self.loc(&p.loc)).clone(),
                self.file.clone(),
            );
            sym.is_parameter = true;
            self.symtab.insert(sym);
            self.scopes[0].insert(base, mangled.clone());
            param_names.push(mangled);
        }
        let body_stmt = self.stmt(body)?;
        let end_loc = match &body_stmt.kind {
            StmtKind::Block(_, end) => end.clone(),
            _ => body_stmt.loc.clone(),
        };
        self.scopes.clear();
        self.current_fn = None;
        self.functions.insert(
            ident.clone(),
            TypedFunction {
                name: ident,
                params: param_names,
                ty: cty,
                body: body_stmt,
                loc: loc.clone(),
                end_loc,
            },
        );
        Ok(())
    }

    fn fresh_local(&mut self, base: &str) -> Ident {
        let f = self.current_fn.as_deref().unwrap_or("");
        let key = format!("{f}::{base}");
        let n = self.used_names.entry(key.clone()).or_insert(0);
        let name = if *n == 0 { key } else { format!("{key}!{n}") };
        *n += 1;
        Arc::from(name)
    }

    fn lookup(&self, name: &str) -> Option<Ident> {
        for scope in self.scopes.iter().rev() {
            if let Some(m) = scope.get(name) {
                return Some(m.clone());
            }
        }
        self.symtab.get(name).map(|s| s.name.clone())
    }

    fn local_declaration(&mut self, d: &Declaration) -> Result<Stmt, FrontendError> {
        let loc = self.loc(&d.loc);
        if let AstType::Function(..) = d.ty {
            let ty = self.resolve_type(&d.ty, &d.loc)?;
            self.declare_function(&d.name, ty, d.storage, &d.loc)?;
            return Ok(Stmt {
                kind: StmtKind::Skip,
                loc,
            });
        }
        if d.storage == StorageClass::Extern {
            self.global_declaration(d)?;
            let ident: Ident = Arc::from(d.name.as_str());
            self.scopes.last_mut().unwrap().insert(d.name.clone(), ident);
            return Ok(Stmt {
                kind: StmtKind::Skip,
                loc,
            });
        }
        let ty = self.declared_type(&d.ty, d.init.as_ref(), &d.loc)?;
        if ty == CType::Void {
            return err(&d.loc, format!("variable `{}' declared void", d.name));
        }
        let mangled = self.fresh_local(&d.name);
        let sym = Symbol::variable(
            mangled.clone(),
            Arc::from(d.name.as_str()),
            ty.clone(),
            (*loc).clone(),
            self.file.clone(),
        );
        self.symtab.insert(sym);
        self.scopes.last_mut().unwrap().insert(d.name.clone(), mangled.clone());
        let init = match &d.init {
            Some(i) => Some(self.initializer(&ty, i)?),
            None => None,
        };
        if d.storage == StorageClass::Static {
            let sym = self.symtab.get_mut(&mangled).unwrap();
            sym.is_static_lifetime = true;
            sym.value = Some(init.unwrap_or_else(|| zero_value(&ty)));
            return Ok(Stmt {
                kind: StmtKind::Skip,
                loc,
            });
        }
        Ok(Stmt {
            kind: StmtKind::Decl { symbol: mangled, init },
            loc,
        })
    }

    // ---- statements --------------------------------------------------------

    fn stmt(&mut self, s: &AstStmt) -> Result<Stmt, FrontendError> {
        let loc = self.loc(&s.loc);
        let kind = match &s.kind {
            AstStmtKind::Decl(decls) => {
                let mut out = Vec::new();
                for d in decls {
                    out.push(self.local_declaration(d)?);
                }
                if out.len() == 1 {
                    return Ok(out.pop().unwrap());
                }
                StmtKind::Seq(out)
            }
            AstStmtKind::Expr(e) => return self.expr_stmt(e),
            AstStmtKind::If(c, t, e) => {
                let cond = self.condition(c)?;
                let then = Box::new(self.scoped_stmt(t)?);
                let els = match e {
                    Some(e) => Some(Box::new(self.scoped_stmt(e)?)),
                    None => None,
                };
                StmtKind::If { cond, then, els }
            }
            AstStmtKind::While(c, b) => {
                let cond = self.condition(c)?;
                self.loop_depth += 1;
                let body = self.scoped_stmt(b);
                self.loop_depth -= 1;
                StmtKind::While {
                    cond,
                    body: Box::new(body?),
                }
            }
            AstStmtKind::DoWhile(b, c) => {
                self.loop_depth += 1;
                let body = self.scoped_stmt(b);
                self.loop_depth -= 1;
                let cond = self.condition(c)?;
                StmtKind::DoWhile {
                    body: Box::new(body?),
                    cond,
                }
            }
            AstStmtKind::For { init, cond, step, body } => {
                self.scopes.push(HashMap::new());
                let result = self.for_stmt(init.as_deref(), cond.as_ref(), step.as_ref(), body);
                self.scopes.pop();
                let (init, cond, step, body) = result?;
                let for_stmt = Stmt {
                    kind: StmtKind::For {
                        init: init.map(Box::new),
                        cond,
                        step,
                        body: Box::new(body),
                    },
                    loc: loc.clone(),
                };
                // The init declaration gets its own scope around the loop.
                StmtKind::Block(vec![for_stmt], loc.clone())
            }
            AstStmtKind::Break | AstStmtKind::Continue if self.loop_depth == 0 => {
                return err(&s.loc, "break or continue outside of a loop");
            }
            AstStmtKind::Break => StmtKind::Break,
            AstStmtKind::Continue => StmtKind::Continue,
            AstStmtKind::Return(e) => {
                let ret = self.current_ret.clone();
                match (e, &ret) {
                    (None, CType::Void) => StmtKind::Return(None),
                    (None, _) => return err(&s.loc, "return without a value in a non-void function"),
                    (Some(e), CType::Void) => {
                        let v = self.expr(e)?;
                        if v.ty != CType::Void {
                            return err(&s.loc, "return with a value in a void function");
                        }
                        StmtKind::Expr(v)
                    }
                    (Some(e), _) => {
                        let v = self.expr(e)?;
                        self.assign_compatible(&v, &ret, &e.loc)?;
                        StmtKind::Return(Some(self.convert(v, &ret)))
                    }
                }
            }
            AstStmtKind::Block(items, end) => {
                self.scopes.push(HashMap::new());
                let mut out = Vec::new();
                let mut result = Ok(());
                for item in items {
                    match self.stmt(item) {
                        Ok(st) => out.push(st),
                        Err(e) => {
                            result = Err(e);
                            break;
                        }
                    }
                }
                self.scopes.pop();
                result?;
                StmtKind::Block(out, self.loc(end))
            }
            AstStmtKind::Empty => StmtKind::Skip,
        };
        Ok(Stmt { kind, loc })
    }

    /// Sub-statements of `if` and loops get a scope even without braces.
    fn scoped_stmt(&mut self, s: &AstStmt) -> Result<Stmt, FrontendError> {
        if matches!(s.kind, AstStmtKind::Decl(_)) {
            return err(&s.loc, "a declaration is not a statement");
        }
        self.stmt(s)
    }

    #[allow(clippy::type_complexity)]
    fn for_stmt(
        &mut self,
        init: Option<&AstStmt>,
        cond: Option<&AstExpr>,
        step: Option<&AstExpr>,
        body: &AstStmt,
    ) -> Result<(Option<Stmt>, Option<Expr>, Vec<Expr>, Stmt), FrontendError> {
        let init = match init {
            Some(i) => Some(self.stmt(i)?),
            None => None,
        };
        let cond = match cond {
            Some(c) => Some(self.condition(c)?),
            None => None,
        };
        let mut steps = Vec::new();
        if let Some(st) = step {
            for part in split_comma(st) {
                steps.push(self.expr(part)?);
            }
        }
        self.loop_depth += 1;
        let body = self.scoped_stmt(body);
        self.loop_depth -= 1;
        Ok((init, cond, steps, body?))
    }

    fn condition(&mut self, c: &AstExpr) -> Result<Expr, FrontendError> {
        let e = self.expr(c)?;
        self.scalar_check(&e, &c.loc)?;
        Ok(self.to_bool(e))
    }

    fn expr_stmt(&mut self, e: &AstExpr) -> Result<Stmt, FrontendError> {
        let loc = self.loc(&e.loc);
        let parts = split_comma(e);
        if parts.len() > 1 {
            let mut out = Vec::new();
            for p in parts {
                out.push(self.expr_stmt(p)?);
            }
            return Ok(Stmt {
                kind: StmtKind::Seq(out),
                loc,
            });
        }
        if let AstExprKind::Call(callee, args) = &e.kind {
            if let AstExprKind::Ident(name) = &callee.kind {
                if self.lookup(name).is_none() {
                    if let Some(which) = builtins::intrinsic(name) {
                        let kind = self.intrinsic(which, name, args, &e.loc)?;
                        return Ok(Stmt { kind, loc });
                    }
                }
            }
        }
        let typed = self.expr(e)?;
        Ok(Stmt {
            kind: StmtKind::Expr(typed),
            loc,
        })
    }

    fn intrinsic(
        &mut self,
        which: Intrinsic,
        name: &str,
        args: &[AstExpr],
        loc: &SourceLocation,
    ) -> Result<StmtKind, FrontendError> {
        let arity = |n: usize| -> Result<(), FrontendError> {
            if args.len() == n {
                Ok(())
            } else {
                err(
                    loc,
                    format!(
                        "wrong number of arguments for `{name}': expected {n}, got {}",
                        args.len()
                    ),
                )
            }
        };
        Ok(match which {
            Intrinsic::Assert => {
                arity(1)?;
                let c = self.expr(&args[0])?;
                self.scalar_check(&c, &args[0].loc)?;
                let description = format!("assertion {c}");
                StmtKind::Assert {
                    cond: self.to_bool(c),
                    description,
                }
            }
            Intrinsic::CproverAssert => {
                arity(2)?;
                let cond = self.condition(&args[0])?;
                let AstExprKind::Str(d) = &args[1].kind else {
                    return err(&args[1].loc, format!("second argument of `{name}' must be a string"));
                };
                StmtKind::Assert {
                    cond,
                    description: d.clone(),
                }
            }
            Intrinsic::Assume => {
                arity(1)?;
                StmtKind::Assume(self.condition(&args[0])?)
            }
            Intrinsic::Cover => {
                arity(1)?;
                StmtKind::Cover(self.condition(&args[0])?)
            }
            Intrinsic::Input | Intrinsic::Output => {
                if args.len() < 2 {
                    return err(loc, format!("`{name}' expects a name and at least one value"));
                }
                let AstExprKind::Str(label) = &args[0].kind else {
                    return err(&args[0].loc, format!("first argument of `{name}' must be a string"));
                };
                let mut values = Vec::new();
                for a in &args[1..] {
                    let v = self.expr(a)?;
                    if v.ty == CType::Void || v.ty == CType::String {
                        return err(&a.loc, format!("invalid argument to `{name}'"));
                    }
                    values.push(v);
                }
                let label: Arc<str> = Arc::from(label.as_str());
                if which == Intrinsic::Input {
                    StmtKind::Input {
                        name: label,
                        args: values,
                    }
                } else {
                    StmtKind::Output {
                        name: label,
                        args: values,
                    }
                }
            }
            Intrinsic::Printf => {
                let mut effects = Vec::new();
                for a in args {
                    if matches!(a.kind, AstExprKind::Str(_)) {
                        continue;
                    }
                    let v = self.expr(a)?;
                    if v.has_side_effects() {
                        effects.push(Stmt {
                            kind: StmtKind::Expr(v),
                            loc: self.loc(&a.loc),
                        });
                    }
                }
                if effects.is_empty() {
                    StmtKind::Skip
                } else {
                    StmtKind::Seq(effects)
                }
            }
        })
    }

    // ---- expressions -------------------------------------------------------

    fn expr(&mut self, e: &AstExpr) -> Result<Expr, FrontendError> {
        let loc = Some(self.loc(&e.loc));
        let typed = self.expr_inner(e)?;
        Ok(if typed.loc.is_none() {
            typed.with_loc(loc)
        } else {
            typed
        })
    }

    fn int_literal(&self, value: u64, unsigned: bool, long: bool, decimal: bool) -> Expr {
        let cfg = self.cfg;
        let fits = |t: &CType| (value as i128) <= t.max_value();
        let mut candidates: Vec<CType> = Vec::new();
        match (unsigned, long) {
            (false, false) => {
                candidates.push(cfg.int());
                if !decimal {
                    candidates.push(cfg.uint());
                }
                candidates.push(cfg.long());
                if !decimal {
                    candidates.push(cfg.ulong());
                }
            }
            (true, false) => {
                candidates.push(cfg.uint());
                candidates.push(cfg.ulong());
            }
            (false, true) => {
                candidates.push(cfg.long());
                if !decimal {
                    candidates.push(cfg.ulong());
                }
            }
            (true, true) => candidates.push(cfg.ulong()),
        }
        candidates.push(CType::signed(64, IntKind::LongLong));
        candidates.push(CType::unsigned(64, IntKind::LongLong));
        let ty = candidates.into_iter().find(fits).unwrap();
        Expr::constant(value, ty)
    }

    fn expr_inner(&mut self, e: &AstExpr) -> Result<Expr, FrontendError> {
        let loc = self.loc(&e.loc);
        let l = Some(loc.clone());
        match &e.kind {
            AstExprKind::Int {
                value,
                unsigned,
                long,
                decimal,
            } => Ok(self.int_literal(*value, *unsigned, *long, *decimal)),
            AstExprKind::Char(c) => {
                let v = eval::cast(*c as u64, &self.cfg.char(), &self.cfg.int());
                Ok(Expr::constant(v, self.cfg.int()))
            }
            AstExprKind::Str(s) => Ok(Expr::new(ExprKind::StringLit(Arc::from(s.as_str())), CType::String)),
            AstExprKind::Ident(name) => {
                let Some(ident) = self.lookup(name) else {
                    return err(&e.loc, format!("undeclared identifier `{name}'"));
                };
                let sym = self.symtab.get(&ident).unwrap();
                if sym.is_function {
                    let ty = self.cfg.code_pointer(sym.ty.clone());
                    return Ok(Expr::new(ExprKind::FunctionAddress(ident), ty));
                }
                Ok(Expr::symbol(ident, sym.ty.clone()))
            }
            AstExprKind::Unary(op, a) => self.unary(*op, a, &e.loc, l),
            AstExprKind::Binary(AstBinary::Comma, ..) => err(
                &e.loc,
                "the comma operator is only supported in statements and for-loop steps",
            ),
            AstExprKind::Binary(op, a, b) => self.binary(*op, a, b, &e.loc, l),
            AstExprKind::Assign(op, lhs, rhs) => {
                let target = self.expr(lhs)?;
                self.lvalue_check(&target, &lhs.loc)?;
                let value = match op {
                    None => self.expr(rhs)?,
                    Some(op) => self.binary(*op, lhs, rhs, &e.loc, l.clone())?,
                };
                self.assign_compatible(&value, &target.ty, &rhs.loc)?;
                let ty = target.ty.clone();
                let value = self.convert(value, &ty);
                Ok(Expr::new(
                    ExprKind::Assign {
                        lhs: Box::new(target),
                        rhs: Box::new(value),
                        post: false,
                    },
                    ty,
                ))
            }
            AstExprKind::Conditional(c, a, b) => {
                let cond = self.condition(c)?;
                let a = self.expr(a)?;
                let b = self.expr(b)?;
                let (a, b) = if a.ty.is_arithmetic() && b.ty.is_arithmetic() {
                    let (a, b) = (self.promote(a), self.promote(b));
                    let t = self.common_type(&a.ty, &b.ty);
                    (self.convert(a, &t), self.convert(b, &t))
                } else if a.ty == b.ty && a.ty.is_scalar() {
                    (a, b)
                } else {
                    return err(&e.loc, "incompatible operands of conditional expression");
                };
                Ok(fold(Expr::conditional(cond, a, b).with_loc(l)))
            }
            AstExprKind::Call(callee, args) => self.call(callee, args, &e.loc),
            AstExprKind::Index(a, i) => {
                let base = self.expr(a)?;
                if !base.ty.is_array() {
                    return err(&e.loc, format!("subscript of non-array type `{}'", base.ty));
                }
                let idx = self.expr(i)?;
                self.arith_check(&idx, &i.loc)?;
                let idx = self.promote(idx);
                let idx = self.convert(idx, &self.cfg.long());
                Ok(Expr::index(base, idx))
            }
            AstExprKind::Cast(t, a) => {
                let ty = self.resolve_type(t, &e.loc)?;
                let v = self.expr(a)?;
                if ty == CType::Void {
                    return Ok(Expr::typecast(v, CType::Void));
                }
                if !ty.is_scalar() || !v.ty.is_scalar() {
                    return err(&e.loc, format!("invalid cast from `{}' to `{}'", v.ty, ty));
                }
                Ok(fold(Expr::typecast(v, ty).with_loc(l)))
            }
            AstExprKind::SizeofType(t) => {
                let ty = self.resolve_type(t, &e.loc)?;
                Ok(Expr::constant(byte_size(&ty), self.cfg.ulong()))
            }
            AstExprKind::SizeofExpr(a) => {
                let v = self.expr(a)?;
                Ok(Expr::constant(byte_size(&v.ty), self.cfg.ulong()))
            }
            AstExprKind::InitList(_) => err(&e.loc, "initializer list in expression"),
        }
    }

    fn lvalue_check(&self, e: &Expr, loc: &SourceLocation) -> Result<(), FrontendError> {
        match e.lvalue_root() {
            Some(_) if !e.ty.is_array() => Ok(()),
            _ => err(loc, "assignment to something that is not a modifiable lvalue"),
        }
    }

    fn unary(
        &mut self,
        op: AstUnary,
        a: &AstExpr,
        loc: &SourceLocation,
        l: Option<Arc<SourceLocation>>,
    ) -> Result<Expr, FrontendError> {
        match op {
            AstUnary::Neg | AstUnary::Plus | AstUnary::BitNot => {
                let v = self.expr(a)?;
                self.arith_check(&v, &a.loc)?;
                let v = self.promote(v);
                Ok(match op {
                    AstUnary::Plus => v,
                    AstUnary::Neg => fold(Expr::unary(UnaryOp::Neg, v).with_loc(l)),
                    _ => fold(Expr::unary(UnaryOp::BitNot, v).with_loc(l)),
                })
            }
            AstUnary::Not => {
                let v = self.condition(a)?;
                Ok(fold(Expr::not(v).with_loc(l)))
            }
            AstUnary::AddrOf => {
                let v = self.expr(a)?;
                match v.kind {
                    ExprKind::FunctionAddress(_) => Ok(v),
                    _ => err(loc, "address-of is only supported on functions"),
                }
            }
            AstUnary::Deref => {
                let v = self.expr(a)?;
                if v.ty.is_code_pointer() {
                    Ok(v)
                } else {
                    err(loc, "dereferencing is only supported for function pointers")
                }
            }
            AstUnary::PreInc | AstUnary::PreDec | AstUnary::PostInc | AstUnary::PostDec => {
                let target = self.expr(a)?;
                self.lvalue_check(&target, &a.loc)?;
                self.arith_check(&target, &a.loc)?;
                let ty = target.ty.clone();
                let promoted = self.promote(target.clone());
                let one = Expr::constant(1, promoted.ty.clone());
                let bop = if matches!(op, AstUnary::PreInc | AstUnary::PostInc) {
                    BinaryOp::Add
                } else {
                    BinaryOp::Sub
                };
                let sum = Expr::binary(bop, promoted, one).with_loc(l.clone());
                let rhs = self.convert(sum, &ty);
                Ok(Expr::new(
                    ExprKind::Assign {
                        lhs: Box::new(target),
                        rhs: Box::new(rhs),
                        post: matches!(op, AstUnary::PostInc | AstUnary::PostDec),
                    },
                    ty,
                )
                .with_loc(l))
            }
        }
    }

    fn binary(
        &mut self,
        op: AstBinary,
        a: &AstExpr,
        b: &AstExpr,
        loc: &SourceLocation,
        l: Option<Arc<SourceLocation>>,
    ) -> Result<Expr, FrontendError> {
        if matches!(op, AstBinary::LogAnd | AstBinary::LogOr) {
            let x = self.condition(a)?;
            let y = self.condition(b)?;
            let e = if op == AstBinary::LogAnd {
                Expr::conditional(x, y, Expr::false_expr())
            } else {
                Expr::conditional(x, Expr::true_expr(), y)
            };
            return Ok(fold(e.with_loc(l)));
        }
        let x = self.expr(a)?;
        let y = self.expr(b)?;
        let bop = match op {
            AstBinary::Add => BinaryOp::Add,
            AstBinary::Sub => BinaryOp::Sub,
            AstBinary::Mul => BinaryOp::Mul,
            AstBinary::Div => BinaryOp::Div,
            AstBinary::Mod => BinaryOp::Mod,
            AstBinary::Shl => BinaryOp::Shl,
            AstBinary::Shr => BinaryOp::Shr,
            AstBinary::BitAnd => BinaryOp::BitAnd,
            AstBinary::BitOr => BinaryOp::BitOr,
            AstBinary::BitXor => BinaryOp::BitXor,
            AstBinary::Lt => BinaryOp::Lt,
            AstBinary::Le => BinaryOp::Le,
            AstBinary::Gt => BinaryOp::Gt,
            AstBinary::Ge => BinaryOp::Ge,
            AstBinary::Eq => BinaryOp::Eq,
            AstBinary::Ne => BinaryOp::Ne,
            AstBinary::LogAnd | AstBinary::LogOr | AstBinary::Comma => unreachable!(),
        };
        if matches!(bop, BinaryOp::Eq | BinaryOp::Ne) && (x.ty.is_code_pointer() || y.ty.is_code_pointer()) {
            let ty = if x.ty.is_code_pointer() {
                x.ty.clone()
            } else {
                y.ty.clone()
            };
            self.assign_compatible(&x, &ty, &a.loc)?;
            self.assign_compatible(&y, &ty, &b.loc)?;
            let (x, y) = (self.convert(x, &ty), self.convert(y, &ty));
            return Ok(fold(Expr::binary(bop, x, y).with_loc(l)));
        }
        self.arith_check(&x, &a.loc)?;
        self.arith_check(&y, &b.loc)?;
        let x = self.promote(x);
        let y = self.promote(y);
        let (x, y) = if matches!(bop, BinaryOp::Shl | BinaryOp::Shr) {
            let t = x.ty.clone();
            (x, self.convert(y, &t))
        } else {
            let t = self.common_type(&x.ty, &y.ty);
            (self.convert(x, &t), self.convert(y, &t))
        };
        let _ = loc;
        let e = Expr::binary(bop, x, y).with_loc(l);
        Ok(if matches!(bop, BinaryOp::Div | BinaryOp::Mod) {
            e
        } else {
            fold(e)
        })
    }

    fn call(&mut self, callee: &AstExpr, args: &[AstExpr], loc: &SourceLocation) -> Result<Expr, FrontendError> {
        if let AstExprKind::Ident(name) = &callee.kind {
            if self.lookup(name).is_none() {
                if builtins::intrinsic(name).is_some() {
                    return err(loc, format!("`{name}' cannot be used inside an expression"));
                }
                let implicit = builtins::library_function(name, self.cfg).or_else(|| {
                    builtins::nondet_return_type(name, self.cfg).map(|ret| CType::Code {
                        params: vec![],
                        ret: Box::new(ret),
                    })
                });
                match implicit {
                    Some(ty) => {
                        self.declare_function(name, ty, StorageClass::None, loc)?;
                    }
                    None => return err(&callee.loc, format!("undeclared identifier `{name}'")),
                }
            }
        }
        let f = self.expr(callee)?;
        let (params, ret) = match &f.ty {
            CType::Pointer { target, .. } => match &**target {
                CType::Code { params, ret } => (params.clone(), (**ret).clone()),
                _ => return err(loc, "called object is not a function"),
            },
            _ => return err(loc, "called object is not a function"),
        };
        if params.len() != args.len() {
            return err(
                loc,
                format!(
                    "wrong number of arguments: expected {}, got {}",
                    params.len(),
                    args.len()
                ),
            );
        }
        let mut typed_args = Vec::new();
        for (a, p) in args.iter().zip(&params) {
            let v = self.expr(a)?;
            self.assign_compatible(&v, p, &a.loc)?;
            typed_args.push(self.convert(v, p));
        }
        Ok(Expr::new(ExprKind::Call(Box::new(f), typed_args), ret))
    }
}

fn split_comma(e: &AstExpr) -> Vec<&AstExpr> {
    match &e.kind {
        AstExprKind::Binary(AstBinary::Comma, a, b) => {
            let mut v = split_comma(a);
            v.extend(split_comma(b));
            v
        }
        _ => vec![e],
    }
}

/// Zero value of a type: the implicit initializer of static storage.
pub fn zero_value(ty: &CType) -> Expr {
    match ty {
        CType::Array { element, size } => Expr::new(
            ExprKind::ArrayLit(vec![zero_value(element); *size as usize]),
            ty.clone(),
        ),
        _ => Expr::constant(0, ty.clone()),
    }
}
