//! Monadic transducers: deterministic, complete automata whose states carry
//! an output label. Reading a whole input string yields exactly one output:
//! a letter of `Σ`, `⊥` or the empty word.
//!
//! Observers are written as an ordered list of regular-expression cases with
//! a mandatory catch-all. [`MonadicTransducer::compile`] builds one DFA per
//! case and explores their product; a product state is labeled with the
//! output of the first case whose component accepts.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::dfa::Dfa;
use crate::regex::{Regex, RegexError};
use crate::symbol::{Alphabet, Symbol, SymbolError};

/// Spelling of the empty output word in text.
pub const LAMBDA_TEXT: &str = "~";
/// Spelling of the rejection marker in text.
pub const BOTTOM_TEXT: &str = "!";

/// One observation result. `Letter` indexes the output alphabet `Σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputSymbol {
    Letter(Symbol),
    Bottom,
    Lambda,
}

/// A word over `Σ ∪ {⊥}`. Never contains [`OutputSymbol::Lambda`].
///
/// Ordered by length first, then lexicographically (letters in `Σ`
/// declaration order, `⊥` after every letter).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<OutputSymbol>);

impl Word {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends `sym`; `Lambda` contributes nothing.
    pub fn push(&mut self, sym: OutputSymbol) {
        if sym != OutputSymbol::Lambda {
            self.0.push(sym);
        }
    }

    pub fn contains_bottom(&self) -> bool {
        self.0.contains(&OutputSymbol::Bottom)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.0.extend_from_slice(&other.0);
        out
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCase {
    pub pattern: Regex,
    pub output: OutputSymbol,
}

/// Surface form of an observer: ordered cases plus a catch-all output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObserverSpec {
    /// `Σ`, the letters the observer may emit.
    pub output: Alphabet,
    pub cases: Vec<PatternCase>,
    pub default: OutputSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObserverError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("case {case}: {source}")]
    Pattern {
        case: usize,
        #[source]
        source: RegexError,
    },
    #[error("case {case}: pattern uses symbol id {symbol} outside the input alphabet")]
    UnknownInputSymbol { case: usize, symbol: u32 },
    #[error("output letter id {0} is outside the output alphabet")]
    UnknownOutputLetter(u32),
    #[error("unknown output `{0}`")]
    UnknownOutput(String),
    #[error("symbol id {0} is outside the observer's input alphabet")]
    ForeignSymbol(u32),
}

impl ObserverSpec {
    /// Convenience constructor from text: `cases` are `(pattern, output)`
    /// pairs, outputs use `~` for λ and `!` for ⊥.
    pub fn from_text(
        output: &[&str],
        cases: &[(&str, &str)],
        default: &str,
        input: &Alphabet,
    ) -> Result<Self, ObserverError> {
        let output = Alphabet::from_names(output.iter().copied())?;
        let cases = cases
            .iter()
            .enumerate()
            .map(|(case, (pattern, out))| {
                Ok(PatternCase {
                    pattern: Regex::parse(pattern, |n| input.get(n))
                        .map_err(|source| ObserverError::Pattern { case, source })?,
                    output: parse_output(&output, out)?,
                })
            })
            .collect::<Result<_, ObserverError>>()?;
        let default = parse_output(&output, default)?;
        Ok(Self { output, cases, default })
    }

    /// Pairs of cases whose pattern languages intersect, with a shortest
    /// common word as witness.
    pub fn lint_disjointness(&self, input: &Alphabet) -> Result<Vec<LintWarning>, ObserverError> {
        self.check(input)?;
        let dfas: Vec<Dfa> = self
            .cases
            .iter()
            .map(|c| Dfa::from_regex(&c.pattern, input.len()))
            .collect();
        let mut warnings = Vec::new();
        for i in 0..dfas.len() {
            for j in i + 1..dfas.len() {
                if let Some(witness) = intersection_witness(&dfas[i], &dfas[j]) {
                    warnings.push(LintWarning {
                        first: i,
                        second: j,
                        witness,
                    });
                }
            }
        }
        Ok(warnings)
    }

    fn check(&self, input: &Alphabet) -> Result<(), ObserverError> {
        for (case, c) in self.cases.iter().enumerate() {
            if let Some(s) = c.pattern.symbols().into_iter().find(|s| !input.contains(*s)) {
                return Err(ObserverError::UnknownInputSymbol { case, symbol: s.0 });
            }
        }
        for out in self.cases.iter().map(|c| c.output).chain([self.default]) {
            if let OutputSymbol::Letter(l) = out {
                if !self.output.contains(l) {
                    return Err(ObserverError::UnknownOutputLetter(l.0));
                }
            }
        }
        Ok(())
    }

    pub fn render_output(&self, out: OutputSymbol) -> &str {
        render_output(&self.output, out)
    }
}

/// Parses `~`, `!` or a letter of `output`.
pub fn parse_output(output: &Alphabet, text: &str) -> Result<OutputSymbol, ObserverError> {
    match text {
        LAMBDA_TEXT => Ok(OutputSymbol::Lambda),
        BOTTOM_TEXT => Ok(OutputSymbol::Bottom),
        _ => output
            .get(text)
            .map(OutputSymbol::Letter)
            .ok_or_else(|| ObserverError::UnknownOutput(text.to_string())),
    }
}

fn render_output(output: &Alphabet, out: OutputSymbol) -> &str {
    match out {
        OutputSymbol::Letter(l) => output.name(l),
        OutputSymbol::Bottom => BOTTOM_TEXT,
        OutputSymbol::Lambda => LAMBDA_TEXT,
    }
}

/// Two cases of an observer that can match the same input word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintWarning {
    pub first: usize,
    pub second: usize,
    pub witness: Vec<Symbol>,
}

impl LintWarning {
    pub fn render(&self, input: &Alphabet) -> String {
        format!(
            "cases {} and {} overlap, e.g. on `{}`",
            self.first + 1,
            self.second + 1,
            input.render_word(&self.witness)
        )
    }
}

type StatePair = (usize, usize);

fn intersection_witness(a: &Dfa, b: &Dfa) -> Option<Vec<Symbol>> {
    let n = a.num_symbols;
    let mut parent: HashMap<StatePair, Option<(StatePair, usize)>> = HashMap::new();
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    parent.insert((0, 0), None);
    while let Some(pair @ (p, q)) = queue.pop_front() {
        if a.accepting[p] && b.accepting[q] {
            let mut word = Vec::new();
            let mut cur = pair;
            while let Some(Some((prev, sym))) = parent.get(&cur) {
                word.push(Symbol(*sym as u32));
                cur = *prev;
            }
            word.reverse();
            return Some(word);
        }
        for sym in 0..n {
            let next = (a.step(p, sym), b.step(q, sym));
            parent.entry(next).or_insert_with(|| {
                queue.push_back(next);
                Some((pair, sym))
            });
        }
    }
    None
}

/// A deterministic, complete, state-labeled automaton. State 0 is initial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadicTransducer {
    input: Alphabet,
    output: Alphabet,
    next: Vec<u32>,
    labels: Vec<OutputSymbol>,
}

impl MonadicTransducer {
    /// Compiles ordered cases into one transducer with first-match labels.
    pub fn compile(spec: &ObserverSpec, input: &Alphabet) -> Result<Self, ObserverError> {
        spec.check(input)?;
        let n = input.len();
        let dfas: Vec<Dfa> = spec.cases.iter().map(|c| Dfa::from_regex(&c.pattern, n)).collect();
        let label_of = |tuple: &[usize]| {
            dfas.iter()
                .zip(tuple)
                .position(|(d, &q)| d.accepting[q])
                .map_or(spec.default, |i| spec.cases[i].output)
        };

        let init = vec![0usize; dfas.len()];
        let mut ids: HashMap<Vec<usize>, u32> = HashMap::from([(init.clone(), 0)]);
        let mut tuples = vec![init];
        let mut next = Vec::new();
        let mut labels = Vec::new();
        let mut cursor = 0;
        while cursor < tuples.len() {
            let tuple = tuples[cursor].clone();
            labels.push(label_of(&tuple));
            for sym in 0..n {
                let succ: Vec<usize> = dfas.iter().zip(&tuple).map(|(d, &q)| d.step(q, sym)).collect();
                let id = *ids.entry(succ.clone()).or_insert_with(|| {
                    tuples.push(succ);
                    (tuples.len() - 1) as u32
                });
                next.push(id);
            }
            cursor += 1;
        }
        Ok(Self {
            input: input.clone(),
            output: spec.output.clone(),
            next,
            labels,
        })
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, state: usize) -> OutputSymbol {
        self.labels[state]
    }

    pub fn transition(&self, state: usize, sym: Symbol) -> usize {
        self.next[state * self.input.len() + sym.index()] as usize
    }

    /// The state reached from the initial state after reading `word`.
    pub fn run(&self, word: &[Symbol]) -> Result<usize, ObserverError> {
        let n = self.input.len();
        word.iter().try_fold(0usize, |q, s| {
            if s.index() < n {
                Ok(self.next[q * n + s.index()] as usize)
            } else {
                Err(ObserverError::ForeignSymbol(s.0))
            }
        })
    }

    pub fn observe(&self, word: &[Symbol]) -> Result<OutputSymbol, ObserverError> {
        Ok(self.labels[self.run(word)?])
    }

    /// Observes a word the caller guarantees to be over the input alphabet.
    #[inline]
    pub(crate) fn observe_iter(&self, word: impl IntoIterator<Item = Symbol>) -> OutputSymbol {
        let n = self.input.len();
        let q = word
            .into_iter()
            .fold(0usize, |q, s| self.next[q * n + s.index()] as usize);
        self.labels[q]
    }

    /// The catenation `A(w0) A(w1) ... A(wn)`.
    pub fn observe_sequence<W: AsRef<[Symbol]>>(&self, words: &[W]) -> Result<Word, ObserverError> {
        let mut out = Word::new();
        for w in words {
            out.push(self.observe(w.as_ref())?);
        }
        Ok(out)
    }

    /// Merges states with equal futures (Moore partition refinement).
    pub fn minimized(&self) -> Self {
        let n = self.input.len();
        let states = self.num_states();
        let mut class: Vec<usize> = {
            let mut ids: HashMap<OutputSymbol, usize> = HashMap::new();
            self.labels
                .iter()
                .map(|l| {
                    let k = ids.len();
                    *ids.entry(*l).or_insert(k)
                })
                .collect()
        };
        let mut count = class.iter().max().map_or(0, |m| m + 1);
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let refined: Vec<usize> = (0..states)
                .map(|q| {
                    let mut sig = Vec::with_capacity(n + 1);
                    sig.push(class[q]);
                    sig.extend((0..n).map(|s| class[self.next[q * n + s] as usize]));
                    let k = ids.len();
                    *ids.entry(sig).or_insert(k)
                })
                .collect();
            let refined_count = ids.len();
            class = refined;
            if refined_count == count {
                break;
            }
            count = refined_count;
        }

        // renumber classes in BFS order from the initial state
        let mut order: HashMap<usize, u32> = HashMap::from([(class[0], 0)]);
        let mut reps = vec![0usize];
        let mut cursor = 0;
        let mut next = Vec::new();
        while cursor < reps.len() {
            let q = reps[cursor];
            for s in 0..n {
                let t = self.next[q * n + s] as usize;
                let id = *order.entry(class[t]).or_insert_with(|| {
                    reps.push(t);
                    (reps.len() - 1) as u32
                });
                next.push(id);
            }
            cursor += 1;
        }
        let labels = reps.iter().map(|&q| self.labels[q]).collect();
        Self {
            input: self.input.clone(),
            output: self.output.clone(),
            next,
            labels,
        }
    }

    pub fn render_output(&self, out: OutputSymbol) -> &str {
        render_output(&self.output, out)
    }

    /// Renders an output word. Letters are joined without separators when
    /// every letter of `Σ` is a single character.
    pub fn render_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return LAMBDA_TEXT.to_string();
        }
        let sep = if self.output.is_single_char() { "" } else { " " };
        word.0
            .iter()
            .map(|&o| self.render_output(o))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parses a word over `Σ ∪ {⊥}` written like [`render_word`](Self::render_word) output.
    pub fn parse_word(&self, text: &str) -> Result<Word, ObserverError> {
        let text = text.trim();
        if text.is_empty() || text == LAMBDA_TEXT {
            return Ok(Word::new());
        }
        let tokens: Vec<String> = if text.contains(char::is_whitespace) {
            text.split_whitespace().map(str::to_string).collect()
        } else if self.output.get(text).is_some() {
            vec![text.to_string()]
        } else {
            text.chars().map(String::from).collect()
        };
        let mut word = Word::new();
        for t in &tokens {
            match parse_output(&self.output, t)? {
                OutputSymbol::Lambda => return Err(ObserverError::UnknownOutput(t.clone())),
                o => word.push(o),
            }
        }
        Ok(word)
    }
}

impl fmt::Display for OutputSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputSymbol::Letter(s) => write!(f, "#{}", s.0),
            OutputSymbol::Bottom => f.write_str(BOTTOM_TEXT),
            OutputSymbol::Lambda => f.write_str(LAMBDA_TEXT),
        }
    }
}
