//! Tokenizer shared by the λ-term, rigid and resource surface syntaxes.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {message}")]
pub struct ParseError {
    /// Character offset into the input.
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError { pos, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Comma,
    Star,
    Plus,
    Name(String),
    Number(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lambda => "'\\'".into(),
            Tok::Dot => "'.'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LAngle => "'<'".into(),
            Tok::RAngle => "'>'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Star => "'*'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Name(n) => format!("name '{n}'"),
            Tok::Number(n) => format!("number '{n}'"),
        }
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let simple = match c {
            '\\' | 'λ' => Some(Tok::Lambda),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '<' | '⟨' => Some(Tok::LAngle),
            '>' | '⟩' => Some(Tok::RAngle),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '*' => Some(Tok::Star),
            '+' => Some(Tok::Plus),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((start, tok));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((start, Tok::Name(chars[start..i].iter().collect())));
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Number(chars[start..i].iter().collect())));
        } else {
            return Err(ParseError::new(start, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Self, ParseError> {
        let toks = tokenize(text)?;
        Ok(Cursor { toks, at: 0, end: text.chars().count() })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    pub(crate) fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.at).map(|(_, t)| t.clone());
        if tok.is_some() {
            self.at += 1;
        }
        tok
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn name(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(self.pos(), format!("expected {wanted}, found {}", t.describe())),
            None => ParseError::new(self.pos(), format!("expected {wanted}, found end of input")),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }
}

/// Binder scope used by every parser: resolves a name to a de Bruijn index
/// or to a free symbol.
#[derive(Default)]
pub(crate) struct Scope {
    names: Vec<String>,
}

impl Scope {
    pub(crate) fn push(&mut self, name: String) {
        self.names.push(name);
    }

    pub(crate) fn pop(&mut self) {
        self.names.pop();
    }

    pub(crate) fn resolve(&self, name: &str) -> crate::names::Var {
        match self.names.iter().rev().position(|n| n == name) {
            Some(i) => crate::names::Var::Bound(i as u32),
            None => crate::names::Var::free(name),
        }
    }
}
