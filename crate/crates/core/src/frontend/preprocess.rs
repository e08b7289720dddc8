//! A deliberately small preprocessor: object-like macros, conditional
//! inclusion on macro definedness, and quoted includes of user files.
//! System headers come from a fixed built-in table.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::lexer::{lex_line, strip_comments, Token, TokenKind};
use super::types::SourceLocation;
use super::FrontendError;

/// Built-in replacements for the system headers the subset accepts.
const SYSTEM_HEADERS: &[(&str, &str)] = &[
    ("assert.h", ""),
    ("stdio.h", "#define EOF (-1)\n"),
    ("pthread.h", ""),
    ("stdbool.h", "#define bool _Bool\n#define true 1\n#define false 0\n"),
];

#[derive(Clone, Debug, Default)]
pub struct PreprocessOptions {
    pub include_dirs: Vec<PathBuf>,
    /// `-D` definitions as `(name, value)`; a bare `-D name` maps to `1`.
    pub defines: Vec<(String, String)>,
    /// In-memory files consulted before the file system for quoted includes.
    pub virtual_files: HashMap<String, String>,
}

struct Preprocessor<'a> {
    opts: &'a PreprocessOptions,
    macros: HashMap<String, Vec<Token>>,
    include_stack: Vec<String>,
    out: Vec<Token>,
}

pub fn preprocess(file_name: &str, text: &str, opts: &PreprocessOptions) -> Result<Vec<Token>, FrontendError> {
    let mut pp = Preprocessor {
        opts,
        macros: HashMap::new(),
        include_stack: Vec::new(),
        out: Vec::new(),
    };
    let cmdline: Arc<str> = Arc::from("<command-line>");
    for (name, value) in &opts.defines {
        let body = lex_line(value, &cmdline, 1)?;
        pp.macros.insert(name.clone(), body);
    }
    pp.file(file_name, text)?;
    Ok(pp.out)
}

impl Preprocessor<'_> {
    fn file(&mut self, name: &str, text: &str) -> Result<(), FrontendError> {
        if self.include_stack.iter().any(|f| f == name) || self.include_stack.len() > 64 {
            return Err(FrontendError::new(format!("recursive inclusion of `{name}'")));
        }
        self.include_stack.push(name.to_string());
        let file: Arc<str> = Arc::from(name);
        let stripped = strip_comments(text);
        // (active, some branch taken) per open conditional
        let mut conds: Vec<(bool, bool)> = Vec::new();
        let mut lines = stripped.lines().enumerate().peekable();
        while let Some((idx, raw)) = lines.next() {
            let line_no = idx as u32 + 1;
            let mut logical = raw.to_string();
            while logical.ends_with('\\') {
                logical.pop();
                match lines.next() {
                    Some((_, more)) => logical.push_str(more),
                    None => break,
                }
            }
            let active = conds.iter().all(|c| c.0);
            let trimmed = logical.trim_start();
            if let Some(directive) = trimmed.strip_prefix('#') {
                let loc = SourceLocation::new(name, line_no);
                self.directive(directive.trim(), &file, line_no, &loc, &mut conds, active)?;
                continue;
            }
            if !active {
                continue;
            }
            let tokens = lex_line(&logical, &file, line_no)?;
            for tok in tokens {
                self.expand(tok, &mut Vec::new(), line_no, &file);
            }
        }
        if !conds.is_empty() {
            return Err(FrontendError::new(format!("unterminated conditional in `{name}'")));
        }
        self.include_stack.pop();
        Ok(())
    }

    fn expand(&mut self, tok: Token, active: &mut Vec<String>, line: u32, file: &Arc<str>) {
        if let TokenKind::Ident(name) = &tok.kind {
            if !active.contains(name) {
                if let Some(body) = self.macros.get(name).cloned() {
                    active.push(name.clone());
                    for t in body {
                        let t = Token {
                            kind: t.kind,
                            file: file.clone(),
                            line,
                        };
                        self.expand(t, active, line, file);
                    }
                    active.pop();
                    return;
                }
            }
        }
        self.out.push(tok);
    }

    fn directive(
        &mut self,
        text: &str,
        file: &Arc<str>,
        line: u32,
        loc: &SourceLocation,
        conds: &mut Vec<(bool, bool)>,
        active: bool,
    ) -> Result<(), FrontendError> {
        let (word, rest) = match text.find(|c: char| c.is_whitespace()) {
            Some(i) => (&text[..i], text[i..].trim()),
            None => (text, ""),
        };
        let err = |msg: String| FrontendError::at(loc.clone(), msg);
        match word {
            "ifdef" | "ifndef" => {
                let defined = self.macros.contains_key(rest);
                let take = if word == "ifdef" { defined } else { !defined };
                conds.push((take, take));
            }
            "else" => {
                let c = conds.last_mut().ok_or_else(|| err("#else without #if".into()))?;
                c.0 = !c.1;
                c.1 = true;
            }
            "endif" => {
                conds.pop().ok_or_else(|| err("#endif without #if".into()))?;
            }
            _ if !active => {}
            "" | "pragma" => {}
            "define" => {
                let name_end = rest
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(rest.len());
                let name = &rest[..name_end];
                if name.is_empty() {
                    return Err(err("macro name missing in #define".into()));
                }
                let body = &rest[name_end..];
                if body.starts_with('(') {
                    return Err(err(format!("function-like macro `{name}' is not supported")));
                }
                let tokens = lex_line(body, file, line)?;
                self.macros.insert(name.to_string(), tokens);
            }
            "undef" => {
                self.macros.remove(rest);
            }
            "include" => {
                if let Some(sys) = rest.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
                    let (_, body) = SYSTEM_HEADERS
                        .iter()
                        .find(|(n, _)| *n == sys)
                        .ok_or_else(|| err(format!("unsupported system header <{sys}>")))?;
                    self.file(&format!("<{sys}>"), body)?;
                } else if let Some(user) = rest.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
                    let (path, text) = self
                        .find_include(user, file)
                        .ok_or_else(|| err(format!("cannot find include file \"{user}\"")))?;
                    self.file(&path, &text)?;
                } else {
                    return Err(err(format!("malformed #include {rest}")));
                }
            }
            other => return Err(err(format!("unsupported preprocessor directive #{other}"))),
        }
        Ok(())
    }

    fn find_include(&self, name: &str, current: &str) -> Option<(String, String)> {
        if let Some(text) = self.opts.virtual_files.get(name) {
            return Some((name.to_string(), text.clone()));
        }
        let mut dirs: Vec<PathBuf> = Vec::new();
        if let Some(parent) = Path::new(current).parent() {
            dirs.push(parent.to_path_buf());
        }
        dirs.extend(self.opts.include_dirs.iter().cloned());
        let mut seen = HashSet::new();
        for dir in dirs {
            let candidate = dir.join(name);
            if !seen.insert(candidate.clone()) {
                continue;
            }
            if let Ok(text) = std::fs::read_to_string(&candidate) {
                return Some((candidate.to_string_lossy().into_owned(), text));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idents(src: &str, opts: &PreprocessOptions) -> Vec<String> {
        preprocess("t.c", src, opts)
            .unwrap()
            .into_iter()
            .map(|t| t.kind.to_string())
            .collect()
    }

    #[test]
    fn object_macros_expand() {
        let out = idents("#define N 16\nint a[N];\n", &PreprocessOptions::default());
        assert_eq!(out, vec!["int", "a", "[", "16", "]", ";"]);
    }

    #[test]
    fn command_line_defines() {
        let opts = PreprocessOptions {
            defines: vec![("SIZE".into(), "4".into())],
            ..Default::default()
        };
        assert_eq!(idents("SIZE", &opts), vec!["4"]);
    }

    #[test]
    fn system_headers() {
        let out = idents("#include <stdio.h>\nEOF", &PreprocessOptions::default());
        assert_eq!(out, vec!["(", "-", "1", ")"]);
        assert!(preprocess("t.c", "#include <stdlib.h>\n", &PreprocessOptions::default()).is_err());
    }

    #[test]
    fn conditionals() {
        let src = "#ifndef X\n#define X\nint a;\n#else\nint b;\n#endif\n";
        assert_eq!(idents(src, &PreprocessOptions::default()), vec!["int", "a", ";"]);
    }

    #[test]
    fn virtual_include() {
        let mut opts = PreprocessOptions::default();
        opts.virtual_files.insert("h.h".into(), "int f(int);".into());
        let out = idents("#include \"h.h\"\n", &opts);
        assert_eq!(out.len(), 6);
    }

    #[test]
    fn rejects_function_macros() {
        assert!(preprocess("t.c", "#define F(x) x\n", &PreprocessOptions::default()).is_err());
    }

    #[test]
    fn line_numbers_survive_block_comments() {
        let toks = preprocess("t.c", "/* a\n b */\nint x;", &PreprocessOptions::default()).unwrap();
        assert_eq!(toks[0].line, 3);
    }
}
