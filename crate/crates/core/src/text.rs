//! Tokenizer and recursive-descent helpers shared by the text grammars.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Wedge,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Colon,
    Eq,
}

pub(crate) fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while let Some(&(_, d)) = it.peek() {
                let Some(x) = d.to_digit(10) else { break };
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(x as u64))
                    .ok_or_else(|| Error::Parse(format!("integer too large at {i}")))?;
                it.next();
            }
            out.push(Tok::Int(v));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&(_, d)) = it.peek() {
                if d.is_alphanumeric() || d == '_' || d == '\'' {
                    name.push(d);
                    it.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Ident(name));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '∧' => Tok::Wedge,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semicolon,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            _ => return Err(Error::Parse(format!("unexpected character '{c}' at {i}"))),
        };
        out.push(t);
        it.next();
    }
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    pub fn new(s: &str) -> Result<Self> {
        Ok(Parser { toks: tokenize(s)?, pos: 0 })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {t:?}")))
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }

    pub fn error(&self, msg: &str) -> Error {
        match self.peek() {
            Some(t) => Error::Parse(format!("{msg} near {t:?} (token {})", self.pos)),
            None => Error::Parse(format!("{msg} at end of input")),
        }
    }

    /// A possibly signed integer.
    pub fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        match self.next() {
            Some(Tok::Int(v)) => {
                let v = i64::try_from(v).map_err(|_| Error::Parse("integer too large".into()))?;
                Ok(if neg { -v } else { v })
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected integer"))
            }
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.error("expected identifier"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        let t = tokenize("3*t'^-2 + s∧d(s)").unwrap();
        assert_eq!(t[0], Tok::Int(3));
        assert_eq!(t[2], Tok::Ident("t'".into()));
        assert_eq!(t[4], Tok::Minus);
        assert!(t.contains(&Tok::Wedge));
        assert!(tokenize("t # s").is_err());
    }
}
