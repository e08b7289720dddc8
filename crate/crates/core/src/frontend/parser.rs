use super::ast::*;
use super::lexer::{Token, TokenKind};
use super::types::SourceLocation;
use super::FrontendError;

const TYPE_WORDS: &[&str] = &[
    "void",
    "_Bool",
    "char",
    "short",
    "int",
    "long",
    "signed",
    "unsigned",
    "const",
    "volatile",
    "static",
    "extern",
    "inline",
    "register",
    "auto",
    "__CPROVER_bitvector",
    "typedef",
    "struct",
    "union",
    "enum",
    "float",
    "double",
];

pub fn parse(file: &str, tokens: Vec<Token>) -> Result<TranslationUnit, FrontendError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        file: file.to_string(),
    };
    let mut items = Vec::new();
    while !p.at_end() {
        if p.eat(";") {
            continue;
        }
        p.external(&mut items)?;
    }
    Ok(TranslationUnit {
        file: file.to_string(),
        items,
    })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    file: String,
}

struct Declarator {
    name: Option<String>,
    loc: SourceLocation,
    pointers: usize,
    suffixes: Vec<Suffix>,
    inner: Option<Box<Declarator>>,
}

enum Suffix {
    Array(Option<Box<AstExpr>>),
    Function(Vec<Param>),
}

impl Declarator {
    fn build(self, base: AstType) -> (Option<String>, AstType, SourceLocation) {
        let mut t = base;
        for _ in 0..self.pointers {
            t = AstType::Pointer(Box::new(t));
        }
        for s in self.suffixes.into_iter().rev() {
            t = match s {
                Suffix::Array(n) => AstType::Array(Box::new(t), n),
                Suffix::Function(ps) => AstType::Function(ps, Box::new(t)),
            };
        }
        match self.inner {
            Some(inner) => {
                let (name, t, inner_loc) = inner.build(t);
                let loc = if name.is_some() { inner_loc } else { self.loc };
                (name, t, loc)
            }
            None => (self.name, t, self.loc),
        }
    }
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&Token> {
        self.tokens.get(self.pos + n)
    }

    fn loc(&self) -> SourceLocation {
        match self.peek().or_else(|| self.tokens.last()) {
            Some(t) => t.loc(),
            None => SourceLocation::new(&self.file, 1),
        }
    }

    fn error<T>(&self) -> Result<T, FrontendError> {
        match self.peek() {
            Some(t) => Err(FrontendError::at(t.loc(), format!("syntax error before `{}'", t.kind))),
            None => Err(FrontendError::at(self.loc(), "syntax error: unexpected end of file")),
        }
    }

    fn check(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.is_punct(p))
    }

    fn check_word(&self, w: &str) -> bool {
        self.peek().is_some_and(|t| t.is_ident(w))
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.check(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.check_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), FrontendError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.error()
        }
    }

    fn ident(&mut self) -> Result<String, FrontendError> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Ident(s)) if !TYPE_WORDS.contains(&s.as_str()) && !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error(),
        }
    }

    fn starts_type(&self, offset: usize) -> bool {
        matches!(self.peek_at(offset).map(|t| &t.kind),
            Some(TokenKind::Ident(s)) if TYPE_WORDS.contains(&s.as_str()))
    }

    fn specifiers(&mut self) -> Result<(AstType, StorageClass), FrontendError> {
        let mut storage = StorageClass::None;
        let mut signed: Option<bool> = None;
        let mut base: Option<&str> = None;
        let mut longs = 0;
        let mut bv_width: Option<Box<AstExpr>> = None;
        let mut any = false;
        while let Some(TokenKind::Ident(word)) = self.peek().map(|t| t.kind.clone()) {
            let loc = self.loc();
            match word.as_str() {
                "const" | "volatile" | "inline" | "register" | "auto" => {}
                "static" => storage = StorageClass::Static,
                "extern" => storage = StorageClass::Extern,
                "signed" => signed = Some(true),
                "unsigned" => signed = Some(false),
                "long" => longs += 1,
                "int" => {
                    if base.is_some_and(|b| b != "short") {
                        return Err(FrontendError::at(loc, "conflicting type specifiers"));
                    }
                    base.get_or_insert("int");
                }
                "void" | "_Bool" | "char" | "short" => {
                    let allowed = base.is_none() || (word == "short" && base == Some("int"));
                    if !allowed {
                        return Err(FrontendError::at(loc, "conflicting type specifiers"));
                    }
                    base = Some(match word.as_str() {
                        "void" => "void",
                        "_Bool" => "_Bool",
                        "char" => "char",
                        _ => "short",
                    });
                }
                "__CPROVER_bitvector" => {
                    self.pos += 1;
                    self.expect("[")?;
                    bv_width = Some(Box::new(self.conditional()?));
                    self.expect("]")?;
                    any = true;
                    continue;
                }
                "typedef" | "struct" | "union" | "enum" => {
                    return Err(FrontendError::at(loc, format!("`{word}' is not supported")));
                }
                "float" | "double" => {
                    return Err(FrontendError::at(
                        loc,
                        format!("floating-point type `{word}' is not supported"),
                    ));
                }
                _ => break,
            }
            any = true;
            self.pos += 1;
        }
        if !any {
            return self.error();
        }
        let s = signed.unwrap_or(true);
        let ty = if let Some(width) = bv_width {
            BaseType::BitVector {
                signed: signed.unwrap_or(false),
                width,
            }
        } else {
            match base {
                Some("void") => BaseType::Void,
                Some("_Bool") => BaseType::Bool,
                Some("char") => BaseType::Char { signed },
                Some("short") => BaseType::Short { signed: s },
                _ if longs >= 2 => BaseType::LongLong { signed: s },
                _ if longs == 1 => BaseType::Long { signed: s },
                _ => BaseType::Int { signed: s },
            }
        };
        Ok((AstType::Base(ty), storage))
    }

    fn declarator(&mut self, allow_abstract: bool) -> Result<Declarator, FrontendError> {
        let loc = self.loc();
        let mut pointers = 0;
        while self.eat("*") {
            pointers += 1;
            while self.eat_word("const") || self.eat_word("volatile") {}
        }
        let mut name = None;
        let mut inner = None;
        let mut name_loc = loc.clone();
        if self.check("(") && self.peek_at(1).is_some_and(|t| t.is_punct("*") || t.is_punct("(")) {
            self.pos += 1;
            inner = Some(Box::new(self.declarator(allow_abstract)?));
            self.expect(")")?;
        } else if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Ident(_))) && !self.starts_type(0) {
            name_loc = self.loc();
            name = Some(self.ident()?);
        } else if !allow_abstract {
            return self.error();
        }
        let mut suffixes = Vec::new();
        loop {
            if self.eat("[") {
                if self.eat("]") {
                    suffixes.push(Suffix::Array(None));
                } else {
                    let n = self.conditional()?;
                    self.expect("]")?;
                    suffixes.push(Suffix::Array(Some(Box::new(n))));
                }
            } else if self.check("(") {
                self.pos += 1;
                suffixes.push(Suffix::Function(self.params()?));
            } else {
                break;
            }
        }
        Ok(Declarator {
            name,
            loc: name_loc,
            pointers,
            suffixes,
            inner,
        })
    }

    fn params(&mut self) -> Result<Vec<Param>, FrontendError> {
        let mut params = Vec::new();
        if self.eat(")") {
            return Ok(params);
        }
        if self.check_word("void") && self.peek_at(1).is_some_and(|t| t.is_punct(")")) {
            self.pos += 2;
            return Ok(params);
        }
        loop {
            if self.check("...") {
                return Err(FrontendError::at(self.loc(), "variadic functions are not supported"));
            }
            let (base, _) = self.specifiers()?;
            let d = self.declarator(true)?;
            let (name, ty, loc) = d.build(base);
            params.push(Param { name, ty, loc });
            if self.eat(")") {
                return Ok(params);
            }
            self.expect(",")?;
        }
    }

    fn external(&mut self, items: &mut Vec<ExternalDecl>) -> Result<(), FrontendError> {
        let (base, storage) = self.specifiers()?;
        if self.eat(";") {
            return Ok(());
        }
        let first = self.declarator(false)?;
        let (name, ty, loc) = first.build(base.clone());
        let name = name.expect("named declarator");
        if matches!(ty, AstType::Function(..)) && self.check("{") {
            let body = self.block()?;
            items.push(ExternalDecl::Function {
                name,
                ty,
                storage,
                body,
                loc,
            });
            return Ok(());
        }
        let mut decls = Vec::new();
        self.finish_declaration(name, ty, storage, loc, &mut decls)?;
        while self.eat(",") {
            let d = self.declarator(false)?;
            let (name, ty, loc) = d.build(base.clone());
            self.finish_declaration(name.expect("named declarator"), ty, storage, loc, &mut decls)?;
        }
        self.expect(";")?;
        items.extend(decls.into_iter().map(ExternalDecl::Decl));
        Ok(())
    }

    fn finish_declaration(
        &mut self,
        name: String,
        ty: AstType,
        storage: StorageClass,
        loc: SourceLocation,
        out: &mut Vec<Declaration>,
    ) -> Result<(), FrontendError> {
        let init = if self.eat("=") { Some(self.initializer()?) } else { None };
        out.push(Declaration {
            name,
            ty,
            storage,
            init,
            loc,
        });
        Ok(())
    }

    fn initializer(&mut self) -> Result<AstExpr, FrontendError> {
        let loc = self.loc();
        if self.eat("{") {
            let mut items = Vec::new();
            while !self.eat("}") {
                items.push(self.initializer()?);
                if !self.eat(",") {
                    self.expect("}")?;
                    break;
                }
            }
            Ok(AstExpr {
                kind: AstExprKind::InitList(items),
                loc,
            })
        } else {
            self.assignment()
        }
    }

    fn local_declaration(&mut self) -> Result<AstStmt, FrontendError> {
        let loc = self.loc();
        let (base, storage) = self.specifiers()?;
        let mut decls = Vec::new();
        if !self.check(";") {
            loop {
                let d = self.declarator(false)?;
                let (name, ty, dloc) = d.build(base.clone());
                self.finish_declaration(name.expect("named declarator"), ty, storage, dloc, &mut decls)?;
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(";")?;
        Ok(AstStmt {
            kind: AstStmtKind::Decl(decls),
            loc,
        })
    }

    fn block(&mut self) -> Result<AstStmt, FrontendError> {
        let loc = self.loc();
        self.expect("{")?;
        let mut items = Vec::new();
        loop {
            if self.at_end() {
                return self.error();
            }
            if self.check("}") {
                break;
            }
            items.push(self.statement()?);
        }
        let end = self.loc();
        self.pos += 1;
        Ok(AstStmt {
            kind: AstStmtKind::Block(items, end),
            loc,
        })
    }

    fn statement(&mut self) -> Result<AstStmt, FrontendError> {
        let loc = self.loc();
        if self.check("{") {
            return self.block();
        }
        if self.starts_type(0) {
            return self.local_declaration();
        }
        let stmt = |kind| Ok(AstStmt { kind, loc: loc.clone() });
        if self.eat(";") {
            return stmt(AstStmtKind::Empty);
        }
        if self.eat_word("if") {
            self.expect("(")?;
            let c = self.expression()?;
            self.expect(")")?;
            let then = Box::new(self.statement()?);
            let els = if self.eat_word("else") {
                Some(Box::new(self.statement()?))
            } else {
                None
            };
            return stmt(AstStmtKind::If(c, then, els));
        }
        if self.eat_word("while") {
            self.expect("(")?;
            let c = self.expression()?;
            self.expect(")")?;
            let body = Box::new(self.statement()?);
            return stmt(AstStmtKind::While(c, body));
        }
        if self.eat_word("do") {
            let body = Box::new(self.statement()?);
            if !self.eat_word("while") {
                return self.error();
            }
            self.expect("(")?;
            let c = self.expression()?;
            self.expect(")")?;
            self.expect(";")?;
            return stmt(AstStmtKind::DoWhile(body, c));
        }
        if self.eat_word("for") {
            self.expect("(")?;
            let init = if self.eat(";") {
                None
            } else if self.starts_type(0) {
                Some(Box::new(self.local_declaration()?))
            } else {
                let iloc = self.loc();
                let e = self.expression()?;
                self.expect(";")?;
                Some(Box::new(AstStmt {
                    kind: AstStmtKind::Expr(e),
                    loc: iloc,
                }))
            };
            let cond = if self.check(";") {
                None
            } else {
                Some(self.expression()?)
            };
            self.expect(";")?;
            let step = if self.check(")") {
                None
            } else {
                Some(self.expression()?)
            };
            self.expect(")")?;
            let body = Box::new(self.statement()?);
            return stmt(AstStmtKind::For { init, cond, step, body });
        }
        if self.eat_word("break") {
            self.expect(";")?;
            return stmt(AstStmtKind::Break);
        }
        if self.eat_word("continue") {
            self.expect(";")?;
            return stmt(AstStmtKind::Continue);
        }
        if self.eat_word("return") {
            let e = if self.check(";") {
                None
            } else {
                Some(self.expression()?)
            };
            self.expect(";")?;
            return stmt(AstStmtKind::Return(e));
        }
        for unsupported in ["goto", "switch", "case", "default"] {
            if self.check_word(unsupported) {
                return Err(FrontendError::at(
                    loc,
                    format!("`{unsupported}' statements are not supported"),
                ));
            }
        }
        let e = self.expression()?;
        self.expect(";")?;
        stmt(AstStmtKind::Expr(e))
    }

    fn expression(&mut self) -> Result<AstExpr, FrontendError> {
        let mut e = self.assignment()?;
        while self.check(",") {
            let loc = self.loc();
            self.pos += 1;
            let r = self.assignment()?;
            e = AstExpr {
                kind: AstExprKind::Binary(AstBinary::Comma, Box::new(e), Box::new(r)),
                loc,
            };
        }
        Ok(e)
    }

    fn assignment(&mut self) -> Result<AstExpr, FrontendError> {
        let lhs = self.conditional()?;
        let ops: &[(&str, Option<AstBinary>)] = &[
            ("=", None),
            ("+=", Some(AstBinary::Add)),
            ("-=", Some(AstBinary::Sub)),
            ("*=", Some(AstBinary::Mul)),
            ("/=", Some(AstBinary::Div)),
            ("%=", Some(AstBinary::Mod)),
            ("<<=", Some(AstBinary::Shl)),
            (">>=", Some(AstBinary::Shr)),
            ("&=", Some(AstBinary::BitAnd)),
            ("|=", Some(AstBinary::BitOr)),
            ("^=", Some(AstBinary::BitXor)),
        ];
        for (p, op) in ops {
            if self.check(p) {
                let loc = lhs.loc.clone();
                self.pos += 1;
                let rhs = self.assignment()?;
                return Ok(AstExpr {
                    kind: AstExprKind::Assign(*op, Box::new(lhs), Box::new(rhs)),
                    loc,
                });
            }
        }
        Ok(lhs)
    }

    fn conditional(&mut self) -> Result<AstExpr, FrontendError> {
        let c = self.binary(0)?;
        if self.eat("?") {
            let a = self.expression()?;
            self.expect(":")?;
            let b = self.conditional()?;
            let loc = c.loc.clone();
            return Ok(AstExpr {
                kind: AstExprKind::Conditional(Box::new(c), Box::new(a), Box::new(b)),
                loc,
            });
        }
        Ok(c)
    }

    fn binary(&mut self, min_level: usize) -> Result<AstExpr, FrontendError> {
        const LEVELS: &[&[(&str, AstBinary)]] = &[
            &[("||", AstBinary::LogOr)],
            &[("&&", AstBinary::LogAnd)],
            &[("|", AstBinary::BitOr)],
            &[("^", AstBinary::BitXor)],
            &[("&", AstBinary::BitAnd)],
            &[("==", AstBinary::Eq), ("!=", AstBinary::Ne)],
            &[
                ("<", AstBinary::Lt),
                ("<=", AstBinary::Le),
                (">", AstBinary::Gt),
                (">=", AstBinary::Ge),
            ],
            &[("<<", AstBinary::Shl), (">>", AstBinary::Shr)],
            &[("+", AstBinary::Add), ("-", AstBinary::Sub)],
            &[("*", AstBinary::Mul), ("/", AstBinary::Div), ("%", AstBinary::Mod)],
        ];
        if min_level == LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary(min_level + 1)?;
        'outer: loop {
            for (p, op) in LEVELS[min_level] {
                if self.check(p) {
                    let loc = lhs.loc.clone();
                    self.pos += 1;
                    let rhs = self.binary(min_level + 1)?;
                    lhs = AstExpr {
                        kind: AstExprKind::Binary(*op, Box::new(lhs), Box::new(rhs)),
                        loc,
                    };
                    continue 'outer;
                }
            }
            return Ok(lhs);
        }
    }

    fn type_name(&mut self) -> Result<AstType, FrontendError> {
        let (base, storage) = self.specifiers()?;
        if storage != StorageClass::None {
            return self.error();
        }
        let d = self.declarator(true)?;
        let (name, ty, _) = d.build(base);
        if name.is_some() {
            return self.error();
        }
        Ok(ty)
    }

    fn unary(&mut self) -> Result<AstExpr, FrontendError> {
        let loc = self.loc();
        let prefix: &[(&str, AstUnary)] = &[
            ("++", AstUnary::PreInc),
            ("--", AstUnary::PreDec),
            ("-", AstUnary::Neg),
            ("+", AstUnary::Plus),
            ("!", AstUnary::Not),
            ("~", AstUnary::BitNot),
            ("&", AstUnary::AddrOf),
            ("*", AstUnary::Deref),
        ];
        for (p, op) in prefix {
            if self.check(p) {
                self.pos += 1;
                let a = self.unary()?;
                return Ok(AstExpr {
                    kind: AstExprKind::Unary(*op, Box::new(a)),
                    loc,
                });
            }
        }
        if self.eat_word("sizeof") {
            if self.check("(") && self.starts_type(1) {
                self.pos += 1;
                let t = self.type_name()?;
                self.expect(")")?;
                return Ok(AstExpr {
                    kind: AstExprKind::SizeofType(t),
                    loc,
                });
            }
            let a = self.unary()?;
            return Ok(AstExpr {
                kind: AstExprKind::SizeofExpr(Box::new(a)),
                loc,
            });
        }
        if self.check("(") && self.starts_type(1) {
            self.pos += 1;
            let t = self.type_name()?;
            self.expect(")")?;
            let a = self.unary()?;
            return Ok(AstExpr {
                kind: AstExprKind::Cast(t, Box::new(a)),
                loc,
            });
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<AstExpr, FrontendError> {
        let mut e = self.primary()?;
        loop {
            let loc = e.loc.clone();
            if self.eat("[") {
                let i = self.expression()?;
                self.expect("]")?;
                e = AstExpr {
                    kind: AstExprKind::Index(Box::new(e), Box::new(i)),
                    loc,
                };
            } else if self.eat("(") {
                let mut args = Vec::new();
                if !self.eat(")") {
                    loop {
                        args.push(self.assignment()?);
                        if self.eat(")") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                e = AstExpr {
                    kind: AstExprKind::Call(Box::new(e), args),
                    loc,
                };
            } else if self.eat("++") {
                e = AstExpr {
                    kind: AstExprKind::Unary(AstUnary::PostInc, Box::new(e)),
                    loc,
                };
            } else if self.eat("--") {
                e = AstExpr {
                    kind: AstExprKind::Unary(AstUnary::PostDec, Box::new(e)),
                    loc,
                };
            } else if self.check(".") || self.check("->") {
                return Err(FrontendError::at(self.loc(), "member access is not supported"));
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> Result<AstExpr, FrontendError> {
        let loc = self.loc();
        let tok = match self.peek() {
            Some(t) => t.kind.clone(),
            None => return self.error(),
        };
        let kind = match tok {
            TokenKind::Int {
                value,
                unsigned,
                long,
                decimal,
            } => AstExprKind::Int {
                value,
                unsigned,
                long,
                decimal,
            },
            TokenKind::Char(c) => AstExprKind::Char(c),
            TokenKind::Str(mut s) => {
                self.pos += 1;
                while let Some(TokenKind::Str(more)) = self.peek().map(|t| t.kind.clone()) {
                    s.push_str(&more);
                    self.pos += 1;
                }
                return Ok(AstExpr {
                    kind: AstExprKind::Str(s),
                    loc,
                });
            }
            TokenKind::Ident(_) => AstExprKind::Ident(self.ident()?),
            TokenKind::Punct("(") => {
                self.pos += 1;
                let e = self.expression()?;
                self.expect(")")?;
                return Ok(e);
            }
            TokenKind::Punct(_) => return self.error(),
        };
        if !matches!(kind, AstExprKind::Ident(_)) {
            self.pos += 1;
        }
        Ok(AstExpr { kind, loc })
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "if" | "else"
            | "while"
            | "do"
            | "for"
            | "break"
            | "continue"
            | "return"
            | "sizeof"
            | "goto"
            | "switch"
            | "case"
            | "default"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::preprocess::{preprocess, PreprocessOptions};

    fn parse_src(src: &str) -> Result<TranslationUnit, FrontendError> {
        let toks = preprocess("t.c", src, &PreprocessOptions::default())?;
        parse("t.c", toks)
    }

    #[test]
    fn abs_function() {
        let tu = parse_src("int abs(int x) {\n int y = x;\n if(x < 0) {\n y = -x;\n }\n return y;\n}\n").unwrap();
        assert_eq!(tu.items.len(), 1);
        match &tu.items[0] {
            ExternalDecl::Function { name, ty, .. } => {
                assert_eq!(name, "abs");
                assert_eq!(type_text(ty), "code(int) -> int");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input() {
        assert!(parse_src("").unwrap().items.is_empty());
    }

    #[test]
    fn malformed_reports_line() {
        let err = parse_src("int f( {").unwrap_err();
        assert_eq!(err.loc.as_ref().unwrap().line, 1);
    }

    #[test]
    fn declarators() {
        let tu = parse_src("int (*fp)(int);\nint *a[3];\nint m[2][3];\n").unwrap();
        let types: Vec<String> = tu
            .items
            .iter()
            .map(|i| match i {
                ExternalDecl::Decl(d) => type_text(&d.ty),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(types[0], "pointer(code(int) -> int)");
        assert_eq!(types[1], "array[3](pointer(int))");
        assert_eq!(types[2], "array[2](array[3](int))");
    }

    #[test]
    fn precedence() {
        let tu = parse_src("int x = 1 + 2 * 3 << 1 < 4 && 5;").unwrap();
        match &tu.items[0] {
            ExternalDecl::Decl(d) => {
                assert_eq!(expr_text(d.init.as_ref().unwrap()), "((((1 + (2 * 3)) << 1) < 4) && 5)")
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn rejects_structs() {
        assert!(parse_src("struct s { int a; };").is_err());
    }

    #[test]
    fn casts_and_sizeof() {
        let tu = parse_src("long z = (long)sizeof(int) + (unsigned char)-1;").unwrap();
        match &tu.items[0] {
            ExternalDecl::Decl(d) => assert_eq!(
                expr_text(d.init.as_ref().unwrap()),
                "(((long) sizeof(int)) + ((unsigned char) -(1)))"
            ),
            _ => unreachable!(),
        }
    }
}
