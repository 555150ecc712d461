use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub token: Token,
    pub pos: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let token = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b',' => Token::Comma,
            b'0'..=b'9' | b'.' => {
                let end = scan_number(bytes, i);
                let text = &src[i..end];
                let value =
                    text.parse::<f64>().map_err(|_| ParseError::new(i, format!("malformed number '{text}'")))?;
                i = end;
                out.push(Spanned { token: Token::Num(value), pos: start });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = i;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                let name = src[i..end].to_string();
                i = end;
                out.push(Spanned { token: Token::Ident(name), pos: start });
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(i, format!("unexpected character '{ch}'")));
            }
        };
        i += 1;
        out.push(Spanned { token, pos: start });
    }
    Ok(out)
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
        i += 1;
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            return j;
        }
    }
    i
}

/// Cursor over a token stream shared by the `z` parser and the real parser.
pub(crate) struct Cursor<'a> {
    tokens: Vec<Spanned>,
    idx: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Result<Self, ParseError> {
        if src.trim().is_empty() {
            return Err(ParseError::new(0, "empty expression"));
        }
        Ok(Cursor { tokens: tokenize(src)?, idx: 0, src })
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx).map(|s| &s.token)
    }

    /// Byte offset of the next token, clamped inside the source.
    pub fn pos(&self) -> usize {
        self.tokens.get(self.idx).map(|s| s.pos).unwrap_or_else(|| self.src.len().saturating_sub(1))
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).map(|s| s.token.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: &Token, what: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), format!("expected {what}")))
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::new(self.pos(), format!("unexpected trailing token {t:?}"))),
        }
    }

    /// Integer exponent after `^`: `-`? digits, optionally parenthesised.
    pub fn exponent(&mut self) -> Result<i32, ParseError> {
        let paren = self.eat(&Token::LParen);
        let pos = self.pos();
        let negative = self.eat(&Token::Minus);
        let value = match self.next() {
            Some(Token::Num(v)) if v.fract() == 0.0 && v.abs() <= 64.0 => v as i32,
            _ => return Err(ParseError::new(pos, "exponent must be an integer literal")),
        };
        if paren {
            self.expect(&Token::RParen, "')'")?;
        }
        Ok(if negative { -value } else { value })
    }
}
