use num_bigint::BigInt;

use super::{Diagnostic, DiagnosticKind, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    Arrow,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut it = src.char_indices().peekable();
    let span = |offset: usize, len: usize, line: usize, col: usize| SourceSpan {
        line,
        column: col,
        offset,
        length: len,
    };
    while let Some(&(i, c)) = it.peek() {
        if c == '\n' {
            it.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            it.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&(_, c)) = it.peek() {
                if c == '\n' {
                    break;
                }
                it.next();
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, c)) = it.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    end = j + c.len_utf8();
                    it.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(src[i..end].to_string()),
                span: span(i, end - i, line, start_col),
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, c)) = it.peek() {
                if c.is_ascii_digit() {
                    end = j + 1;
                    it.next();
                    col += 1;
                } else {
                    break;
                }
            }
            if let Some(&(j, '.')) = it.peek() {
                return Err(Diagnostic::new(
                    DiagnosticKind::Lexical,
                    span(j, 1, line, col),
                    "decimal numbers are not accepted; write a fraction a/b",
                ));
            }
            let n: BigInt = src[i..end].parse().expect("digits");
            out.push(Token {
                tok: Tok::Int(n),
                span: span(i, end - i, line, start_col),
            });
            continue;
        }
        it.next();
        col += 1;
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '-' => {
                if let Some(&(_, '>')) = it.peek() {
                    it.next();
                    col += 1;
                    out.push(Token {
                        tok: Tok::Arrow,
                        span: span(i, 2, line, start_col),
                    });
                    continue;
                }
                Tok::Minus
            }
            other => {
                return Err(Diagnostic::new(
                    DiagnosticKind::Lexical,
                    span(i, other.len_utf8(), line, start_col),
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Token {
            tok,
            span: span(i, c.len_utf8(), line, start_col),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(src.len(), 0, line, col),
    });
    Ok(out)
}
