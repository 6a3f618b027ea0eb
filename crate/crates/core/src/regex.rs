//! Regular expressions over interned symbols.
//!
//! A token is one whole input symbol, so multi-character names and the
//! bracketed double symbols of sticker observers (`[a/t]`) are atoms.
//!
//! Syntax, loosest binding first: `p | q`, juxtaposition (whitespace
//! separated), postfix `*`, `+`, `?`. Parentheses group, and `~` or `()`
//! denote the empty word.

use std::fmt;

use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex {
    Epsilon,
    Symbol(Symbol),
    /// At least two parts.
    Concat(Vec<Regex>),
    /// At least two branches.
    Alt(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
    Optional(Box<Regex>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {}: {message}", position + 1)]
pub struct RegexError {
    /// 0-based character offset into the pattern.
    pub position: usize,
    pub message: String,
}

impl Regex {
    /// Parses `text`, resolving each symbol token through `resolve`.
    pub fn parse<F>(text: &str, resolve: F) -> Result<Regex, RegexError>
    where
        F: Fn(&str) -> Option<Symbol>,
    {
        let tokens = lex(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            end: text.chars().count(),
            resolve: &resolve,
        };
        let re = parser.alt()?;
        if let Some((at, tok)) = parser.tokens.get(parser.pos) {
            return Err(RegexError {
                position: *at,
                message: format!("unexpected `{}`", tok.text()),
            });
        }
        Ok(re)
    }

    /// Every symbol mentioned by the pattern.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Vec<Symbol>) {
        match self {
            Regex::Epsilon => {}
            Regex::Symbol(s) => out.push(*s),
            Regex::Concat(parts) | Regex::Alt(parts) => parts.iter().for_each(|p| p.collect_symbols(out)),
            Regex::Star(r) | Regex::Plus(r) | Regex::Optional(r) => r.collect_symbols(out),
        }
    }

    /// Renders the pattern so that parsing it back yields an equal tree.
    pub fn display<'a, F>(&'a self, name: F) -> impl fmt::Display + 'a
    where
        F: Fn(Symbol) -> &'a str + 'a,
    {
        Printer { re: self, name }
    }
}

struct Printer<'a, F> {
    re: &'a Regex,
    name: F,
}

impl<'a, F> Printer<'a, F>
where
    F: Fn(Symbol) -> &'a str,
{
    fn write(&self, re: &Regex, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match re {
            Regex::Epsilon => write!(f, "~"),
            Regex::Symbol(s) => write!(f, "{}", (self.name)(*s)),
            Regex::Alt(branches) => {
                for (i, b) in branches.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    self.write_grouped(b, matches!(b, Regex::Alt(_)), f)?;
                }
                Ok(())
            }
            Regex::Concat(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    self.write_grouped(p, matches!(p, Regex::Alt(_) | Regex::Concat(_)), f)?;
                }
                Ok(())
            }
            Regex::Star(r) | Regex::Plus(r) | Regex::Optional(r) => {
                self.write_grouped(r, matches!(**r, Regex::Alt(_) | Regex::Concat(_)), f)?;
                let op = match re {
                    Regex::Star(_) => '*',
                    Regex::Plus(_) => '+',
                    _ => '?',
                };
                write!(f, "{op}")
            }
        }
    }

    fn write_grouped(&self, re: &Regex, paren: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if paren {
            write!(f, "(")?;
            self.write(re, f)?;
            write!(f, ")")
        } else {
            self.write(re, f)
        }
    }
}

impl<'a, F> fmt::Display for Printer<'a, F>
where
    F: Fn(Symbol) -> &'a str,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.re, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Name(String),
    Epsilon,
    Open,
    Close,
    Bar,
    Star,
    Plus,
    Question,
}

impl Token {
    fn text(&self) -> &str {
        match self {
            Token::Name(n) => n,
            Token::Epsilon => "~",
            Token::Open => "(",
            Token::Close => ")",
            Token::Bar => "|",
            Token::Star => "*",
            Token::Plus => "+",
            Token::Question => "?",
        }
    }
}

fn is_special(c: char) -> bool {
    c.is_whitespace() || "()|*+?[]~".contains(c)
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, RegexError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let single = match c {
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            '|' => Some(Token::Bar),
            '*' => Some(Token::Star),
            '+' => Some(Token::Plus),
            '?' => Some(Token::Question),
            '~' => Some(Token::Epsilon),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((i, tok));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '[' {
            let close = chars[i..].iter().position(|&c| c == ']').ok_or(RegexError {
                position: i,
                message: "unclosed `[`".into(),
            })?;
            let inner: String = chars[i + 1..i + close].iter().filter(|c| !c.is_whitespace()).collect();
            out.push((i, Token::Name(format!("[{inner}]"))));
            i += close + 1;
        } else if c == ']' {
            return Err(RegexError {
                position: i,
                message: "unmatched `]`".into(),
            });
        } else {
            let start = i;
            while i < chars.len() && !is_special(chars[i]) {
                i += 1;
            }
            out.push((start, Token::Name(chars[start..i].iter().collect())));
        }
    }
    Ok(out)
}

struct Parser<'r> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    resolve: &'r dyn Fn(&str) -> Option<Symbol>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn alt(&mut self) -> Result<Regex, RegexError> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some(&Token::Bar) {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Regex::Alt(branches)
        })
    }

    fn concat(&mut self) -> Result<Regex, RegexError> {
        let mut parts = Vec::new();
        while matches!(self.peek(), Some(Token::Name(_) | Token::Epsilon | Token::Open)) {
            parts.push(self.postfix()?);
        }
        match parts.len() {
            0 => Err(RegexError {
                position: self.here(),
                message: "expected a pattern".into(),
            }),
            1 => Ok(parts.pop().unwrap()),
            _ => Ok(Regex::Concat(parts)),
        }
    }

    fn postfix(&mut self) -> Result<Regex, RegexError> {
        let mut re = self.atom()?;
        loop {
            re = match self.peek() {
                Some(Token::Star) => Regex::Star(Box::new(re)),
                Some(Token::Plus) => Regex::Plus(Box::new(re)),
                Some(Token::Question) => Regex::Optional(Box::new(re)),
                _ => return Ok(re),
            };
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<Regex, RegexError> {
        let at = self.here();
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Token::Name(name)) => (self.resolve)(&name).map(Regex::Symbol).ok_or(RegexError {
                position: at,
                message: format!("unknown symbol `{name}`"),
            }),
            Some(Token::Epsilon) => Ok(Regex::Epsilon),
            Some(Token::Open) => {
                if self.peek() == Some(&Token::Close) {
                    self.pos += 1;
                    return Ok(Regex::Epsilon);
                }
                let inner = self.alt()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(RegexError {
                        position: self.here(),
                        message: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => unreachable!("atom called on non-atom token"),
        }
    }
}
