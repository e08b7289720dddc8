//! C front end: preprocessing, parsing and type checking.

pub mod ast;
pub mod builtins;
pub mod display;
pub mod expr;
pub mod lexer;
pub mod parser;
pub mod preprocess;
pub mod symbol;
pub mod typecheck;
pub mod types;

use std::fmt;

pub use preprocess::PreprocessOptions;
pub use typecheck::{Stmt, StmtKind, TypedFunction, TypedProgram};
use types::{PlatformConfig, SourceLocation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontendError {
    pub loc: Option<SourceLocation>,
    pub message: String,
}

impl FrontendError {
    pub fn new(message: impl Into<String>) -> Self {
        FrontendError {
            loc: None,
            message: message.into(),
        }
    }

    pub fn at(loc: SourceLocation, message: impl Into<String>) -> Self {
        FrontendError {
            loc: Some(loc),
            message: message.into(),
        }
    }
}

impl fmt::Display for FrontendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.loc {
            Some(l) => write!(f, "file {} line {}: {}", l.file, l.line, self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for FrontendError {}

pub fn parse_source(file: &str, text: &str, opts: &PreprocessOptions) -> Result<ast::TranslationUnit, FrontendError> {
    let tokens = preprocess::preprocess(file, text, opts)?;
    parser::parse(file, tokens)
}

/// Preprocesses, parses and type checks one translation unit.
pub fn compile_source(
    file: &str,
    text: &str,
    opts: &PreprocessOptions,
    cfg: &PlatformConfig,
) -> Result<TypedProgram, FrontendError> {
    let tu = parse_source(file, text, opts)?;
    typecheck::typecheck(&tu, cfg)
}
