//! Text formats (`.crn` networks, `.ode` polynomial systems) and reports.

pub mod crn;
pub mod ode;
pub mod report;

use std::fmt;

use thiserror::Error;

use crate::scalar::parse_rational;
use crate::Rational;

/// 1-based line and column in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ParseError {
    pub location: SourceLocation,
    pub message: String,
}

impl ParseError {
    pub fn new(location: SourceLocation, message: impl Into<String>) -> Self {
        Self { location, message: message.into() }
    }
}

/// Character cursor over one line of input.
pub(crate) struct Scanner<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    pub fn new(line: usize, text: &'a str) -> Self {
        Self { line, text, pos: 0 }
    }

    pub fn location(&self) -> SourceLocation {
        SourceLocation { line: self.line, column: self.text[..self.pos].chars().count() + 1 }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.location(), message)
    }

    pub fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    /// Consume `token` (after whitespace) if present.
    pub fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`, found {}", self.describe_next())))
        }
    }

    pub fn describe_next(&self) -> String {
        match self.rest().trim_start().chars().next() {
            None => "end of line".to_string(),
            Some(c) => format!("`{c}`"),
        }
    }

    pub fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        self.pos += end;
        Some(&rest[..end])
    }

    /// An unsigned rational literal: `12`, `1.5`, `3/4`.
    pub fn number(&mut self) -> Result<Option<Rational>, ParseError> {
        self.skip_ws();
        let start = self.location();
        let rest = self.rest();
        let digits = |s: &str| s.find(|c: char| !(c.is_ascii_digit() || c == '.')).unwrap_or(s.len());
        let mut end = digits(rest);
        if end == 0 {
            return Ok(None);
        }
        if rest[end..].starts_with('/') && rest[end + 1..].starts_with(|c: char| c.is_ascii_digit()) {
            end += 1 + digits(&rest[end + 1..]);
        }
        let literal = &rest[..end];
        let value = parse_rational(literal).ok_or_else(|| ParseError::new(start, format!("malformed number `{literal}`")))?;
        self.pos += end;
        Ok(Some(value))
    }
}

/// Split into (1-based line number, content without comment) pairs.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, line)| {
        let content = match line.find('#') {
            Some(idx) => &line[..idx],
            None => line,
        };
        (i + 1, content)
    })
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
