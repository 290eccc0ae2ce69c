//! Tokenizer shared by the `.sleec` and `.gsl` front ends.
//!
//! Keywords are not distinguished here: both languages use contextual
//! keywords, so the parsers decide what an identifier means.

use std::fmt;

use crate::span::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    /// `:=`
    Assign,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    /// `=`
    Eq,
    /// `<>`
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    /// `&`, accepted as a synonym for `and` in goal-model conditions.
    Amp,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Assign => f.write_str("`:=`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Ne => f.write_str("`<>`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Ge => f.write_str("`>=`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// A syntax error with its location and the set of tokens that would have
/// been accepted there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn at(span: Span, message: impl Into<String>) -> Self {
        ParseError { line: span.line, col: span.col, message: message.into(), expected: Vec::new() }
    }

    pub fn expected(span: Span, found: &Tok, expected: &[&str]) -> Self {
        let mut expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        expected.sort();
        expected.dedup();
        ParseError { line: span.line, col: span.col, message: format!("unexpected {found}"), expected }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of: {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! bump {
        () => {{
            let (i, c) = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            (i, c)
        }};
    }

    while let Some(&(start, c)) = chars.peek() {
        let (sl, sc) = (line, col);
        let mk = |end: usize, tok: Tok| Token { tok, span: Span::new(start, end, sl, sc) };

        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' {
            bump!();
            match chars.peek() {
                Some(&(_, '/')) => {
                    while let Some(&(_, c)) = chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        bump!();
                    }
                    continue;
                }
                _ => return Err(ParseError::at(Span::new(start, start + 1, sl, sc), "unexpected character `/`")),
            }
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start;
            let mut s = String::new();
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    end = i + c.len_utf8();
                    bump!();
                } else {
                    break;
                }
            }
            out.push(mk(end, Tok::Ident(s)));
            continue;
        }
        if c.is_ascii_digit() || c == '-' {
            let mut s = String::new();
            let mut end = start;
            if c == '-' {
                s.push('-');
                end += 1;
                bump!();
                if !matches!(chars.peek(), Some(&(_, d)) if d.is_ascii_digit()) {
                    return Err(ParseError::at(Span::new(start, end, sl, sc), "expected digits after `-`"));
                }
            }
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    end = i + 1;
                    bump!();
                } else {
                    break;
                }
            }
            let n: i64 = s.parse().map_err(|_| {
                ParseError::at(Span::new(start, end, sl, sc), format!("integer literal `{s}` out of range"))
            })?;
            out.push(mk(end, Tok::Int(n)));
            continue;
        }
        if c == '"' {
            bump!();
            let mut s = String::new();
            let mut closed = false;
            let mut end = start + 1;
            while let Some(&(i, c)) = chars.peek() {
                bump!();
                end = i + c.len_utf8();
                match c {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => {
                        let Some(&(i, e)) = chars.peek() else { break };
                        bump!();
                        end = i + e.len_utf8();
                        match e {
                            'n' => s.push('\n'),
                            't' => s.push('\t'),
                            '"' => s.push('"'),
                            '\\' => s.push('\\'),
                            other => {
                                return Err(ParseError::at(
                                    Span::new(i, end, line, col),
                                    format!("unknown escape `\\{other}`"),
                                ))
                            }
                        }
                    }
                    '\n' => break,
                    c => s.push(c),
                }
            }
            if !closed {
                return Err(ParseError::at(Span::new(start, end, sl, sc), "unterminated string literal"));
            }
            out.push(mk(end, Tok::Str(s)));
            continue;
        }

        bump!();
        let next = chars.peek().map(|&(_, c)| c);
        let (tok, len) = match (c, next) {
            (':', Some('=')) => (Tok::Assign, 2),
            (':', _) => (Tok::Colon, 1),
            ('<', Some('>')) => (Tok::Ne, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('<', _) => (Tok::Lt, 1),
            ('>', Some('=')) => (Tok::Ge, 2),
            ('>', _) => (Tok::Gt, 1),
            ('=', _) => (Tok::Eq, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            ('&', _) => (Tok::Amp, 1),
            (c, _) => {
                return Err(ParseError::at(
                    Span::new(start, start + c.len_utf8(), sl, sc),
                    format!("unexpected character `{c}`"),
                ))
            }
        };
        if len == 2 {
            bump!();
        }
        out.push(mk(start + len, tok));
    }

    out.push(Token { tok: Tok::Eof, span: Span::new(src.len(), src.len(), line, col) });
    Ok(out)
}

/// Cursor over a token vector with the small helpers both parsers share.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    pub fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    pub fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    pub fn expect_kw(&mut self, kw: &str) -> Result<Span, ParseError> {
        if self.at_kw(kw) {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    pub fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::expected(self.span(), self.peek(), expected)
    }
}
