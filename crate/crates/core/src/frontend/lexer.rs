use std::fmt;
use std::sync::Arc;

use super::types::SourceLocation;
use super::FrontendError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int {
        value: u64,
        unsigned: bool,
        long: bool,
        decimal: bool,
    },
    Char(u8),
    Str(String),
    Punct(&'static str),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "{s}"),
            TokenKind::Int { value, .. } => write!(f, "{value}"),
            TokenKind::Char(c) => write!(f, "'{}'", *c as char),
            TokenKind::Str(s) => write!(f, "{s:?}"),
            TokenKind::Punct(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub file: Arc<str>,
    pub line: u32,
}

impl Token {
    pub fn loc(&self) -> SourceLocation {
        SourceLocation::new(&self.file, self.line)
    }

    pub fn is_punct(&self, p: &str) -> bool {
        matches!(&self.kind, TokenKind::Punct(q) if *q == p)
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(&self.kind, TokenKind::Ident(q) if q == s)
    }
}

// Longest first, so that maximal munch falls out of a linear scan.
const PUNCTS: &[&str] = &[
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "##", "+", "-", "*", "/", "%", "<", ">", "=", "!", "~", "&", "|", "^", "?", ":", ";", ",",
    "(", ")", "[", "]", "{", "}", "#", ".",
];

/// Replaces comments with whitespace, keeping line structure intact.
pub fn strip_comments(src: &str) -> String {
    let bytes = src.as_bytes();
    let mut out = String::with_capacity(src.len());
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'"' || c == b'\'' {
            let quote = c;
            let start = i;
            i += 1;
            while i < bytes.len() && bytes[i] != quote && bytes[i] != b'\n' {
                if bytes[i] == b'\\' {
                    i += 1;
                }
                i += 1;
            }
            i = (i + 1).min(bytes.len());
            out.push_str(&src[start..i]);
        } else if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c == b'/' && bytes.get(i + 1) == Some(&b'*') {
            i += 2;
            out.push_str("  ");
            while i < bytes.len() && !(bytes[i] == b'*' && bytes.get(i + 1) == Some(&b'/')) {
                out.push(if bytes[i] == b'\n' { '\n' } else { ' ' });
                i += 1;
            }
            i = (i + 2).min(bytes.len());
            out.push_str("  ");
        } else {
            let ch = src[i..].chars().next().unwrap();
            out.push(ch);
            i += ch.len_utf8();
        }
    }
    out
}

/// Tokenizes a single logical line.
pub fn lex_line(text: &str, file: &Arc<str>, line: u32) -> Result<Vec<Token>, FrontendError> {
    let err = |msg: String| FrontendError::at(SourceLocation::new(file, line), msg);
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let push = |tokens: &mut Vec<Token>, kind| {
        tokens.push(Token {
            kind,
            file: file.clone(),
            line,
        })
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            push(&mut tokens, TokenKind::Ident(text[start..i].to_string()));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'.') {
                i += 1;
            }
            push(
                &mut tokens,
                parse_int(&text[start..i])
                    .ok_or_else(|| err(format!("invalid integer constant `{}'", &text[start..i])))?,
            );
        } else if c == b'\'' {
            i += 1;
            let (value, next) = read_char(bytes, i).ok_or_else(|| err("bad character constant".into()))?;
            i = next;
            if bytes.get(i) != Some(&b'\'') {
                return Err(err("unterminated character constant".into()));
            }
            i += 1;
            push(&mut tokens, TokenKind::Char(value));
        } else if c == b'"' {
            i += 1;
            let mut s = Vec::new();
            loop {
                match bytes.get(i) {
                    None => return Err(err("unterminated string literal".into())),
                    Some(b'"') => {
                        i += 1;
                        break;
                    }
                    Some(_) => {
                        let (value, next) = read_char(bytes, i).ok_or_else(|| err("bad string literal".into()))?;
                        s.push(value);
                        i = next;
                    }
                }
            }
            push(&mut tokens, TokenKind::Str(String::from_utf8_lossy(&s).into_owned()));
        } else if let Some(p) = PUNCTS.iter().find(|p| text[i..].starts_with(**p)) {
            i += p.len();
            push(&mut tokens, TokenKind::Punct(p));
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(err(format!("unexpected character `{ch}'")));
        }
    }
    Ok(tokens)
}

fn read_char(bytes: &[u8], i: usize) -> Option<(u8, usize)> {
    let c = *bytes.get(i)?;
    if c != b'\\' {
        return Some((c, i + 1));
    }
    let e = *bytes.get(i + 1)?;
    let simple = match e {
        b'n' => Some(b'\n'),
        b't' => Some(b'\t'),
        b'r' => Some(b'\r'),
        b'a' => Some(7),
        b'b' => Some(8),
        b'f' => Some(12),
        b'v' => Some(11),
        b'\\' => Some(b'\\'),
        b'\'' => Some(b'\''),
        b'"' => Some(b'"'),
        b'?' => Some(b'?'),
        _ => None,
    };
    if let Some(v) = simple {
        return Some((v, i + 2));
    }
    if e == b'x' {
        let mut j = i + 2;
        let mut v: u32 = 0;
        while j < bytes.len() && bytes[j].is_ascii_hexdigit() {
            v = v * 16 + (bytes[j] as char).to_digit(16)?;
            j += 1;
        }
        return (j > i + 2).then_some(((v & 0xff) as u8, j));
    }
    if (b'0'..=b'7').contains(&e) {
        let mut j = i + 1;
        let mut v: u32 = 0;
        while j < bytes.len() && j < i + 4 && (b'0'..=b'7').contains(&bytes[j]) {
            v = v * 8 + (bytes[j] - b'0') as u32;
            j += 1;
        }
        return Some(((v & 0xff) as u8, j));
    }
    None
}

fn parse_int(s: &str) -> Option<TokenKind> {
    let lower = s.to_ascii_lowercase();
    let digits_end = lower.trim_end_matches(['u', 'l']).len();
    let (body, suffix) = lower.split_at(digits_end);
    let unsigned = suffix.contains('u');
    let long = suffix.contains('l');
    if suffix.len() > 3 {
        return None;
    }
    let (value, decimal) = if let Some(hex) = body.strip_prefix("0x") {
        (u64::from_str_radix(hex, 16).ok()?, false)
    } else if body.len() > 1 && body.starts_with('0') {
        (u64::from_str_radix(&body[1..], 8).ok()?, false)
    } else {
        (body.parse::<u64>().ok()?, true)
    };
    Some(TokenKind::Int {
        value,
        unsigned,
        long,
        decimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<TokenKind> {
        lex_line(s, &Arc::from("t.c"), 1)
            .unwrap()
            .into_iter()
            .map(|t| t.kind)
            .collect()
    }

    #[test]
    fn punctuation_is_maximal() {
        assert_eq!(
            kinds("a<<=b->c"),
            vec![
                TokenKind::Ident("a".into()),
                TokenKind::Punct("<<="),
                TokenKind::Ident("b".into()),
                TokenKind::Punct("->"),
                TokenKind::Ident("c".into()),
            ]
        );
    }

    #[test]
    fn literals() {
        assert_eq!(kinds("'\\n'"), vec![TokenKind::Char(b'\n')]);
        assert_eq!(kinds("'\\0'"), vec![TokenKind::Char(0)]);
        assert_eq!(
            kinds("0x10ul"),
            vec![TokenKind::Int {
                value: 16,
                unsigned: true,
                long: true,
                decimal: false
            }]
        );
        assert_eq!(kinds("\"a%s\\n\""), vec![TokenKind::Str("a%s\n".into())]);
    }

    #[test]
    fn comments_keep_lines() {
        let s = strip_comments("a /* x\ny */ b // c\n\"//\"");
        assert_eq!(s.lines().count(), 3);
        assert!(s.contains("\"//\""));
        assert!(!s.contains('x'));
    }

    #[test]
    fn bad_character() {
        assert!(lex_line("a @ b", &Arc::from("t.c"), 3).is_err());
    }
}
