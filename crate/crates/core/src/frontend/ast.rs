//! Untyped parse tree.

use std::fmt::Write;

use super::types::SourceLocation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseType {
    Void,
    Bool,
    Char { signed: Option<bool> },
    Short { signed: bool },
    Int { signed: bool },
    Long { signed: bool },
    LongLong { signed: bool },
    BitVector { signed: bool, width: Box<AstExpr> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AstType {
    Base(BaseType),
    Pointer(Box<AstType>),
    Array(Box<AstType>, Option<Box<AstExpr>>),
    Function(Vec<Param>, Box<AstType>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: Option<String>,
    pub ty: AstType,
    pub loc: SourceLocation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AstUnary {
    Neg,
    Plus,
    Not,
    BitNot,
    AddrOf,
    Deref,
    PreInc,
    PreDec,
    PostInc,
    PostDec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AstBinary {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Shl,
    Shr,
    BitAnd,
    BitOr,
    BitXor,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    LogAnd,
    LogOr,
    Comma,
}

impl AstBinary {
    pub fn symbol(self) -> &'static str {
        match self {
            AstBinary::Add => "+",
            AstBinary::Sub => "-",
            AstBinary::Mul => "*",
            AstBinary::Div => "/",
            AstBinary::Mod => "%",
            AstBinary::Shl => "<<",
            AstBinary::Shr => ">>",
            AstBinary::BitAnd => "&",
            AstBinary::BitOr => "|",
            AstBinary::BitXor => "^",
            AstBinary::Lt => "<",
            AstBinary::Le => "<=",
            AstBinary::Gt => ">",
            AstBinary::Ge => ">=",
            AstBinary::Eq => "==",
            AstBinary::Ne => "!=",
            AstBinary::LogAnd => "&&",
            AstBinary::LogOr => "||",
            AstBinary::Comma => ",",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AstExprKind {
    Int {
        value: u64,
        unsigned: bool,
        long: bool,
        decimal: bool,
    },
    Char(u8),
    Str(String),
    Ident(String),
    Unary(AstUnary, Box<AstExpr>),
    Binary(AstBinary, Box<AstExpr>, Box<AstExpr>),
    /// `lhs = rhs` or `lhs op= rhs`.
    Assign(Option<AstBinary>, Box<AstExpr>, Box<AstExpr>),
    Conditional(Box<AstExpr>, Box<AstExpr>, Box<AstExpr>),
    Call(Box<AstExpr>, Vec<AstExpr>),
    Index(Box<AstExpr>, Box<AstExpr>),
    Cast(AstType, Box<AstExpr>),
    SizeofType(AstType),
    SizeofExpr(Box<AstExpr>),
    InitList(Vec<AstExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AstExpr {
    pub kind: AstExprKind,
    pub loc: SourceLocation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StorageClass {
    #[default]
    None,
    Static,
    Extern,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: String,
    pub ty: AstType,
    pub storage: StorageClass,
    pub init: Option<AstExpr>,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AstStmtKind {
    Decl(Vec<Declaration>),
    Expr(AstExpr),
    If(AstExpr, Box<AstStmt>, Option<Box<AstStmt>>),
    While(AstExpr, Box<AstStmt>),
    DoWhile(Box<AstStmt>, AstExpr),
    For {
        init: Option<Box<AstStmt>>,
        cond: Option<AstExpr>,
        step: Option<AstExpr>,
        body: Box<AstStmt>,
    },
    Break,
    Continue,
    Return(Option<AstExpr>),
    /// Statements plus the location of the closing brace.
    Block(Vec<AstStmt>, SourceLocation),
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AstStmt {
    pub kind: AstStmtKind,
    pub loc: SourceLocation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExternalDecl {
    Function {
        name: String,
        ty: AstType,
        storage: StorageClass,
        body: AstStmt,
        loc: SourceLocation,
    },
    Decl(Declaration),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslationUnit {
    pub file: String,
    pub items: Vec<ExternalDecl>,
}

impl TranslationUnit {
    /// Indented dump used by `--show-parse-tree`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                ExternalDecl::Function {
                    name, ty, body, loc, ..
                } => {
                    let _ = writeln!(out, "function {name} : {} ({})", type_text(ty), loc_text(loc));
                    dump_stmt(&mut out, body, 1);
                }
                ExternalDecl::Decl(d) => dump_decl(&mut out, d, 0),
            }
        }
        out
    }
}

fn loc_text(loc: &SourceLocation) -> String {
    format!("file {} line {}", loc.file, loc.line)
}

pub fn type_text(ty: &AstType) -> String {
    match ty {
        AstType::Base(b) => match b {
            BaseType::Void => "void".into(),
            BaseType::Bool => "_Bool".into(),
            BaseType::Char { signed: None } => "char".into(),
            BaseType::Char { signed: Some(true) } => "signed char".into(),
            BaseType::Char { signed: Some(false) } => "unsigned char".into(),
            BaseType::Short { signed } => format!("{}short", sign_text(*signed)),
            BaseType::Int { signed } => format!("{}int", sign_text(*signed)),
            BaseType::Long { signed } => format!("{}long", sign_text(*signed)),
            BaseType::LongLong { signed } => format!("{}long long", sign_text(*signed)),
            BaseType::BitVector { signed, width } => {
                format!("{}__CPROVER_bitvector[{}]", sign_text(*signed), expr_text(width))
            }
        },
        AstType::Pointer(t) => format!("pointer({})", type_text(t)),
        AstType::Array(t, n) => match n {
            Some(n) => format!("array[{}]({})", expr_text(n), type_text(t)),
            None => format!("array[]({})", type_text(t)),
        },
        AstType::Function(params, ret) => {
            let ps: Vec<String> = params.iter().map(|p| type_text(&p.ty)).collect();
            format!("code({}) -> {}", ps.join(", "), type_text(ret))
        }
    }
}

fn sign_text(signed: bool) -> &'static str {
    if signed {
        ""
    } else {
        "unsigned "
    }
}

pub fn expr_text(e: &AstExpr) -> String {
    match &e.kind {
        AstExprKind::Int { value, .. } => value.to_string(),
        AstExprKind::Char(c) => format!("{c}"),
        AstExprKind::Str(s) => format!("{s:?}"),
        AstExprKind::Ident(s) => s.clone(),
        AstExprKind::Unary(op, a) => {
            let a = expr_text(a);
            match op {
                AstUnary::Neg => format!("-({a})"),
                AstUnary::Plus => format!("+({a})"),
                AstUnary::Not => format!("!({a})"),
                AstUnary::BitNot => format!("~({a})"),
                AstUnary::AddrOf => format!("&({a})"),
                AstUnary::Deref => format!("*({a})"),
                AstUnary::PreInc => format!("++({a})"),
                AstUnary::PreDec => format!("--({a})"),
                AstUnary::PostInc => format!("({a})++"),
                AstUnary::PostDec => format!("({a})--"),
            }
        }
        AstExprKind::Binary(op, a, b) => {
            format!("({} {} {})", expr_text(a), op.symbol(), expr_text(b))
        }
        AstExprKind::Assign(op, a, b) => {
            let sym = op.map(|o| o.symbol()).unwrap_or("");
            format!("({} {sym}= {})", expr_text(a), expr_text(b))
        }
        AstExprKind::Conditional(c, a, b) => {
            format!("({} ? {} : {})", expr_text(c), expr_text(a), expr_text(b))
        }
        AstExprKind::Call(f, args) => {
            let args: Vec<String> = args.iter().map(expr_text).collect();
            format!("{}({})", expr_text(f), args.join(", "))
        }
        AstExprKind::Index(a, i) => format!("{}[{}]", expr_text(a), expr_text(i)),
        AstExprKind::Cast(t, a) => format!("(({}) {})", type_text(t), expr_text(a)),
        AstExprKind::SizeofType(t) => format!("sizeof({})", type_text(t)),
        AstExprKind::SizeofExpr(a) => format!("sizeof({})", expr_text(a)),
        AstExprKind::InitList(items) => {
            let items: Vec<String> = items.iter().map(expr_text).collect();
            format!("{{ {} }}", items.join(", "))
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn dump_decl(out: &mut String, d: &Declaration, depth: usize) {
    indent(out, depth);
    let _ = write!(out, "decl {} : {}", d.name, type_text(&d.ty));
    if let Some(init) = &d.init {
        let _ = write!(out, " = {}", expr_text(init));
    }
    let _ = writeln!(out, " ({})", loc_text(&d.loc));
}

fn dump_stmt(out: &mut String, s: &AstStmt, depth: usize) {
    match &s.kind {
        AstStmtKind::Decl(ds) => {
            for d in ds {
                dump_decl(out, d, depth);
            }
            return;
        }
        AstStmtKind::Block(items, _) => {
            indent(out, depth);
            let _ = writeln!(out, "block ({})", loc_text(&s.loc));
            for item in items {
                dump_stmt(out, item, depth + 1);
            }
            return;
        }
        _ => {}
    }
    indent(out, depth);
    match &s.kind {
        AstStmtKind::Expr(e) => {
            let _ = writeln!(out, "expression {} ({})", expr_text(e), loc_text(&s.loc));
        }
        AstStmtKind::If(c, t, e) => {
            let _ = writeln!(out, "if {} ({})", expr_text(c), loc_text(&s.loc));
            dump_stmt(out, t, depth + 1);
            if let Some(e) = e {
                indent(out, depth);
                out.push_str("else\n");
                dump_stmt(out, e, depth + 1);
            }
        }
        AstStmtKind::While(c, b) => {
            let _ = writeln!(out, "while {} ({})", expr_text(c), loc_text(&s.loc));
            dump_stmt(out, b, depth + 1);
        }
        AstStmtKind::DoWhile(b, c) => {
            let _ = writeln!(out, "do-while {} ({})", expr_text(c), loc_text(&s.loc));
            dump_stmt(out, b, depth + 1);
        }
        AstStmtKind::For { init, cond, step, body } => {
            let c = cond.as_ref().map(expr_text).unwrap_or_default();
            let st = step.as_ref().map(expr_text).unwrap_or_default();
            let _ = writeln!(out, "for ; {c} ; {st} ({})", loc_text(&s.loc));
            if let Some(init) = init {
                dump_stmt(out, init, depth + 1);
            }
            dump_stmt(out, body, depth + 1);
        }
        AstStmtKind::Break => {
            let _ = writeln!(out, "break ({})", loc_text(&s.loc));
        }
        AstStmtKind::Continue => {
            let _ = writeln!(out, "continue ({})", loc_text(&s.loc));
        }
        AstStmtKind::Return(e) => {
            let e = e.as_ref().map(expr_text).unwrap_or_default();
            let _ = writeln!(out, "return {e} ({})", loc_text(&s.loc));
        }
        AstStmtKind::Empty => {
            let _ = writeln!(out, "skip ({})", loc_text(&s.loc));
        }
        AstStmtKind::Decl(_) | AstStmtKind::Block(..) => unreachable!(),
    }
}
