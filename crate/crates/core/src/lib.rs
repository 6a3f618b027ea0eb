//! Computing by observing: basic systems (context-free grammars, simple
//! regular sticker systems) whose evolutions are read by monadic-transducer
//! observers, with bounded enumeration of the observed languages.
//!
//! ```
//! use observed::{examples, EnumerationBounds, Mode};
//!
//! let sys = examples::abc_system();
//! let lang = sys.enumerate(EnumerationBounds::steps(6), Mode::BottomFiltered).unwrap();
//! let words: Vec<String> = lang.words.iter().map(|w| sys.observer().render_word(w)).collect();
//! assert_eq!(words, ["abc", "aabbcc"]);
//! ```

mod dfa;
pub mod examples;
pub mod format;
pub mod go;
pub mod grammar;
pub mod observer;
pub mod regex;
pub mod search;
pub mod sticker;
pub mod symbol;

pub use format::{parse_description, parse_system, print_system, FormatError, System, SystemDescription};
pub use go::{EnumerationBounds, GoError, GoSystem, Membership, TraceRow};
pub use grammar::{Grammar, GrammarError, Rule, RuleApplication, SententialForm, SymbolKind};
pub use observer::{LintWarning, MonadicTransducer, ObserverError, ObserverSpec, OutputSymbol, PatternCase, Word};
pub use regex::{Regex, RegexError};
pub use search::{Mode, ObservedLanguage, SearchStats};
pub use sticker::{
    stick, Complementarity, ComputationBounds, DoubleSymbol, Molecule, ObservableStickerSystem, Side, SingleStrand,
    StickerError, StickerMembership, StickerSystem, StickerTraceRow,
};
pub use symbol::{Alphabet, Symbol, SymbolError};

/// Compiles an observer specification over `input`.
pub fn compile_observer(spec: &ObserverSpec, input: &Alphabet) -> Result<MonadicTransducer, ObserverError> {
    MonadicTransducer::compile(spec, input)
}
