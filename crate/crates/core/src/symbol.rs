//! Interned symbols and alphabets.
//!
//! Every basic system and observer works on small integer ids; names only
//! matter at the text boundary.

use std::collections::HashMap;
use std::fmt;

/// Characters that may never appear in a symbol name. They are used by the
/// pattern syntax, the text format or as reserved output markers.
pub const RESERVED_CHARS: &[char] = &[
    '(', ')', '|', '*', '+', '?', '[', ']', '~', '!', '#', '/', ':', '.', ',',
];

/// An interned symbol: an index into an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("unknown symbol `{0}`")]
    Unknown(String),
}

/// Checks that `name` can be used as a symbol in the text format.
pub fn validate_name(name: &str) -> Result<(), SymbolError> {
    let bad = name.is_empty()
        || name == "_"
        || name == "-"
        || name.contains("->")
        || name.contains("=>")
        || name.chars().any(|c| c.is_whitespace() || RESERVED_CHARS.contains(&c));
    if bad {
        Err(SymbolError::InvalidName(name.to_string()))
    } else {
        Ok(())
    }
}

/// An ordered, duplicate-free set of named symbols.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet from names, rejecting duplicates and invalid names.
    pub fn from_names<I, S>(names: I) -> Result<Self, SymbolError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut alphabet = Self::new();
        for name in names {
            alphabet.insert(name)?;
        }
        Ok(alphabet)
    }

    pub fn insert(&mut self, name: impl Into<String>) -> Result<Symbol, SymbolError> {
        let name = name.into();
        validate_name(&name)?;
        if self.index.contains_key(&name) {
            return Err(SymbolError::Duplicate(name));
        }
        Ok(self.insert_unchecked(name))
    }

    /// Inserts without validating the name. Used for derived alphabets whose
    /// names intentionally contain reserved characters (e.g. `[a/t]`).
    pub(crate) fn insert_unchecked(&mut self, name: String) -> Symbol {
        let sym = Symbol(self.names.len() as u32);
        self.index.insert(name.clone(), sym);
        self.names.push(name);
        sym
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<Symbol, SymbolError> {
        self.get(name).ok_or_else(|| SymbolError::Unknown(name.to_string()))
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        sym.index() < self.names.len()
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len() as u32).map(Symbol)
    }

    /// True when every name is a single character, so words can be written
    /// without separators.
    pub fn is_single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Splits a textual word into symbols.
    ///
    /// `~` (or an empty string) is the empty word. Whitespace separated
    /// tokens are looked up one by one; a single token that is not itself a
    /// symbol is split into characters.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Symbol>, SymbolError> {
        let text = text.trim();
        if text.is_empty() || text == "~" {
            return Ok(Vec::new());
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() > 1 {
            return tokens.iter().map(|t| self.lookup(t)).collect();
        }
        if let Some(sym) = self.get(text) {
            return Ok(vec![sym]);
        }
        let mut buf = [0u8; 4];
        text.chars().map(|c| self.lookup(c.encode_utf8(&mut buf))).collect()
    }

    /// Renders a word, `~` for the empty word.
    pub fn render_word(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return "~".to_string();
        }
        let sep = if self.is_single_char() { "" } else { " " };
        word.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(sep)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}
