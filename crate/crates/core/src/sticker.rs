//! Simple regular sticker systems and their observed languages.
//!
//! A molecule is a pair of left-aligned strands over `V`. It is well-started
//! when every position covered by both strands holds a complementary pair;
//! whichever strand is longer forms the overhang on the right. It is complete
//! when both strands have the same length. Sticking appends a single strand
//! to the right end of the upper or lower strand and is defined only if the
//! result is again well-started.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::observer::{MonadicTransducer, ObserverError, ObserverSpec, OutputSymbol, Word};
use crate::search::{self, BasicSystem, Mode, ObservedLanguage, SearchBounds};
use crate::symbol::{Alphabet, Symbol, SymbolError};

/// Spelling of an empty strand.
pub const EMPTY_STRAND: &str = "-";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StickerError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Observer(#[from] ObserverError),
    #[error("symbol id {0} is outside the sticker alphabet")]
    ForeignSymbol(u32),
    #[error("complementarity relation covers {rho} symbols but the alphabet has {alphabet}")]
    RhoSize { rho: usize, alphabet: usize },
    #[error("molecule is not well-started: position {0} is not a complementary pair")]
    NotWellStarted(usize),
    #[error("a single strand must not be empty")]
    EmptyStrand,
    #[error("`{0}` is not a single strand; write `x/-` or `-/x`")]
    NotSingleStrand(String),
    #[error("`{0}` is not a molecule; write `upper/lower`")]
    BadMolecule(String),
    #[error("observer input alphabet must be the double-symbol alphabet of the sticker system")]
    AlphabetMismatch,
    #[error("no axiom {0}")]
    NoSuchAxiom(String),
    #[error("no domino {0}")]
    NoSuchDomino(String),
    #[error("the system has several axioms; start the replay with `@UPPER/LOWER`")]
    AmbiguousAxiom,
    #[error("replay step {step}: sticking {domino} onto {molecule} is undefined")]
    Undefined {
        step: usize,
        domino: String,
        molecule: String,
    },
    #[error("query word contains `!`; only words over the output alphabet can be members")]
    BottomInQuery,
}

/// A symmetric relation `ρ ⊆ V × V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complementarity {
    size: usize,
    related: Vec<bool>,
}

impl Complementarity {
    /// Builds the symmetric closure of `pairs` over an alphabet of `size`
    /// symbols.
    pub fn new(size: usize, pairs: &[(Symbol, Symbol)]) -> Result<Self, StickerError> {
        let mut related = vec![false; size * size];
        for &(a, b) in pairs {
            for s in [a, b] {
                if s.index() >= size {
                    return Err(StickerError::ForeignSymbol(s.0));
                }
            }
            related[a.index() * size + b.index()] = true;
            related[b.index() * size + a.index()] = true;
        }
        Ok(Self { size, related })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, a: Symbol, b: Symbol) -> bool {
        self.related[a.index() * self.size + b.index()]
    }

    /// All related pairs in row-major order (both directions).
    pub fn pairs(&self) -> impl Iterator<Item = (Symbol, Symbol)> + '_ {
        (0..self.size).flat_map(move |a| {
            (0..self.size)
                .filter(move |&b| self.related[a * self.size + b])
                .map(move |b| (Symbol(a as u32), Symbol(b as u32)))
        })
    }

    fn check(&self, strand: &[Symbol]) -> Result<(), StickerError> {
        match strand.iter().find(|s| s.index() >= self.size) {
            Some(s) => Err(StickerError::ForeignSymbol(s.0)),
            None => Ok(()),
        }
    }
}

/// A well-started molecule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Molecule {
    upper: Vec<Symbol>,
    lower: Vec<Symbol>,
}

impl Molecule {
    pub fn new(rho: &Complementarity, upper: Vec<Symbol>, lower: Vec<Symbol>) -> Result<Self, StickerError> {
        rho.check(&upper)?;
        rho.check(&lower)?;
        if let Some(i) = (0..upper.len().min(lower.len())).find(|&i| !rho.contains(upper[i], lower[i])) {
            return Err(StickerError::NotWellStarted(i));
        }
        Ok(Self { upper, lower })
    }

    pub fn upper(&self) -> &[Symbol] {
        &self.upper
    }

    pub fn lower(&self) -> &[Symbol] {
        &self.lower
    }

    pub fn is_complete(&self) -> bool {
        self.upper.len() == self.lower.len()
    }

    /// Number of double symbols, i.e. the length of the longer strand.
    pub fn len(&self) -> usize {
        self.upper.len().max(self.lower.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reads the molecule left to right as double symbols.
    pub fn tokenize(&self) -> Vec<DoubleSymbol> {
        (0..self.len())
            .map(|i| match (self.upper.get(i), self.lower.get(i)) {
                (Some(&a), Some(&b)) => DoubleSymbol::Pair(a, b),
                (Some(&a), None) => DoubleSymbol::Upper(a),
                (None, Some(&b)) => DoubleSymbol::Lower(b),
                (None, None) => unreachable!(),
            })
            .collect()
    }

    /// Inverse of [`tokenize`](Self::tokenize).
    pub fn from_tokens(tokens: &[DoubleSymbol]) -> Self {
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for t in tokens {
            match *t {
                DoubleSymbol::Pair(a, b) => {
                    upper.push(a);
                    lower.push(b);
                }
                DoubleSymbol::Upper(a) => upper.push(a),
                DoubleSymbol::Lower(b) => lower.push(b),
            }
        }
        Self { upper, lower }
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!(
            "{}/{}",
            render_strand(alphabet, &self.upper),
            render_strand(alphabet, &self.lower)
        )
    }
}

/// An element of the double-symbol alphabet `V_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DoubleSymbol {
    Pair(Symbol, Symbol),
    Upper(Symbol),
    Lower(Symbol),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

/// A domino: a nonempty single strand to be pasted on one side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingleStrand {
    side: Side,
    content: Vec<Symbol>,
}

impl SingleStrand {
    pub fn new(side: Side, content: Vec<Symbol>) -> Result<Self, StickerError> {
        if content.is_empty() {
            return Err(StickerError::EmptyStrand);
        }
        Ok(Self { side, content })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn content(&self) -> &[Symbol] {
        &self.content
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        let c = render_strand(alphabet, &self.content);
        match self.side {
            Side::Upper => format!("{c}/{EMPTY_STRAND}"),
            Side::Lower => format!("{EMPTY_STRAND}/{c}"),
        }
    }
}

/// The sticking operation. `Ok(None)` means the result would not be
/// well-started; `Err` is reserved for symbols outside `ρ`'s alphabet.
pub fn stick(rho: &Complementarity, m: &Molecule, s: &SingleStrand) -> Result<Option<Molecule>, StickerError> {
    rho.check(&s.content)?;
    rho.check(&m.upper)?;
    rho.check(&m.lower)?;
    Ok(stick_unchecked(rho, m, s))
}

fn stick_unchecked(rho: &Complementarity, m: &Molecule, s: &SingleStrand) -> Option<Molecule> {
    let (grown, other) = match s.side {
        Side::Upper => (&m.upper, &m.lower),
        Side::Lower => (&m.lower, &m.upper),
    };
    // only positions newly covered by both strands need checking
    let start = grown.len();
    let end = (start + s.content.len()).min(other.len());
    for (&added, &facing) in s.content.iter().zip(other.get(start..end).unwrap_or_default()) {
        let ok = match s.side {
            Side::Upper => rho.contains(added, facing),
            Side::Lower => rho.contains(facing, added),
        };
        if !ok {
            return None;
        }
    }
    let mut result = m.clone();
    match s.side {
        Side::Upper => result.upper.extend_from_slice(&s.content),
        Side::Lower => result.lower.extend_from_slice(&s.content),
    }
    Some(result)
}

/// `γ = (V, ρ, X, D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StickerSystem {
    alphabet: Alphabet,
    rho: Complementarity,
    axioms: Vec<Molecule>,
    dominoes: Vec<SingleStrand>,
}

impl StickerSystem {
    pub fn new(
        alphabet: Alphabet,
        rho: Complementarity,
        axioms: Vec<Molecule>,
        dominoes: Vec<SingleStrand>,
    ) -> Result<Self, StickerError> {
        if rho.size() != alphabet.len() {
            return Err(StickerError::RhoSize {
                rho: rho.size(),
                alphabet: alphabet.len(),
            });
        }
        for m in &axioms {
            Molecule::new(&rho, m.upper.clone(), m.lower.clone())?;
        }
        for d in &dominoes {
            rho.check(&d.content)?;
        }
        Ok(Self {
            alphabet,
            rho,
            axioms,
            dominoes,
        })
    }

    /// Builds a system from text: `rho` like `a~t`, axioms like `a/t`,
    /// dominoes like `a/-` or `-/t`.
    pub fn from_text(
        alphabet: &[&str],
        rho: &[&str],
        axioms: &[&str],
        dominoes: &[&str],
    ) -> Result<Self, StickerError> {
        let alphabet = Alphabet::from_names(alphabet.iter().copied())?;
        let pairs = rho
            .iter()
            .map(|p| {
                let (a, b) = p
                    .split_once('~')
                    .ok_or_else(|| StickerError::BadMolecule(p.to_string()))?;
                Ok((alphabet.lookup(a.trim())?, alphabet.lookup(b.trim())?))
            })
            .collect::<Result<Vec<_>, StickerError>>()?;
        let rho = Complementarity::new(alphabet.len(), &pairs)?;
        let axioms = axioms
            .iter()
            .map(|t| parse_molecule(&alphabet, &rho, t))
            .collect::<Result<_, _>>()?;
        let dominoes = dominoes
            .iter()
            .map(|t| parse_single_strand(&alphabet, t))
            .collect::<Result<_, _>>()?;
        Self::new(alphabet, rho, axioms, dominoes)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rho(&self) -> &Complementarity {
        &self.rho
    }

    pub fn axioms(&self) -> &[Molecule] {
        &self.axioms
    }

    pub fn dominoes(&self) -> &[SingleStrand] {
        &self.dominoes
    }

    /// The double-symbol alphabet `V_d`: complementary pairs `[a/b]` in
    /// row-major order, then upper singles `[a/-]`, then lower singles `[-/b]`.
    pub fn double_alphabet(&self) -> Alphabet {
        let mut out = Alphabet::new();
        for t in self.double_symbols() {
            out.insert_unchecked(self.render_double(t));
        }
        out
    }

    fn double_symbols(&self) -> Vec<DoubleSymbol> {
        let mut out: Vec<DoubleSymbol> = self.rho.pairs().map(|(a, b)| DoubleSymbol::Pair(a, b)).collect();
        out.extend(self.alphabet.symbols().map(DoubleSymbol::Upper));
        out.extend(self.alphabet.symbols().map(DoubleSymbol::Lower));
        out
    }

    pub fn render_double(&self, t: DoubleSymbol) -> String {
        let name = |s: Symbol| self.alphabet.name(s);
        match t {
            DoubleSymbol::Pair(a, b) => format!("[{}/{}]", name(a), name(b)),
            DoubleSymbol::Upper(a) => format!("[{}/{EMPTY_STRAND}]", name(a)),
            DoubleSymbol::Lower(b) => format!("[{EMPTY_STRAND}/{}]", name(b)),
        }
    }

    pub fn parse_molecule(&self, text: &str) -> Result<Molecule, StickerError> {
        parse_molecule(&self.alphabet, &self.rho, text)
    }

    pub fn render_molecule(&self, m: &Molecule) -> String {
        m.render(&self.alphabet)
    }

    /// Upper strands of every complete molecule reachable from an axiom in at
    /// most `bounds.max_steps` sticking operations, sorted by length and then
    /// symbol order.
    pub fn classical_language(&self, bounds: ComputationBounds) -> Vec<Vec<Symbol>> {
        let mut seen: HashSet<Molecule> = HashSet::new();
        let mut queue: VecDeque<(Molecule, usize)> = VecDeque::new();
        for m in &self.axioms {
            if seen.insert(m.clone()) {
                queue.push_back((m.clone(), 0));
            }
        }
        let mut uppers: BTreeSet<(usize, Vec<Symbol>)> = BTreeSet::new();
        while let Some((m, depth)) = queue.pop_front() {
            if m.is_complete() {
                uppers.insert((m.upper.len(), m.upper.clone()));
            }
            if depth == bounds.max_steps {
                continue;
            }
            for d in &self.dominoes {
                if let Some(next) = stick_unchecked(&self.rho, &m, d) {
                    if seen.insert(next.clone()) {
                        queue.push_back((next, depth + 1));
                    }
                }
            }
        }
        uppers.into_iter().map(|(_, u)| u).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComputationBounds {
    /// Maximum number of sticking operations.
    pub max_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StickerTraceRow {
    pub step: usize,
    /// Index of the domino added at this step; `None` for the axiom.
    pub added: Option<usize>,
    pub molecule: Molecule,
    pub emitted: OutputSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StickerMembership {
    Found { axiom: usize, dominoes: Vec<usize> },
    NotFoundWithinBounds,
}

/// `φ = (γ, A)`: a sticker system read by an observer over `V_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservableStickerSystem {
    system: StickerSystem,
    observer: MonadicTransducer,
    // V_d symbol ids, indexed as in `double_symbols`
    pair_ids: Vec<Option<Symbol>>,
    single_base: u32,
}

impl ObservableStickerSystem {
    pub fn new(system: StickerSystem, observer: MonadicTransducer) -> Result<Self, StickerError> {
        if *observer.input_alphabet() != system.double_alphabet() {
            return Err(StickerError::AlphabetMismatch);
        }
        let n = system.alphabet.len();
        let mut pair_ids = vec![None; n * n];
        let mut next = 0u32;
        for (a, b) in system.rho.pairs() {
            pair_ids[a.index() * n + b.index()] = Some(Symbol(next));
            next += 1;
        }
        Ok(Self {
            system,
            observer,
            pair_ids,
            single_base: next,
        })
    }

    pub fn with_spec(system: StickerSystem, spec: &ObserverSpec) -> Result<Self, StickerError> {
        let observer = MonadicTransducer::compile(spec, &system.double_alphabet())?;
        Self::new(system, observer)
    }

    pub fn system(&self) -> &StickerSystem {
        &self.system
    }

    pub fn observer(&self) -> &MonadicTransducer {
        &self.observer
    }

    /// Maps a double symbol to its id in the observer's input alphabet.
    pub fn double_id(&self, t: DoubleSymbol) -> Symbol {
        let n = self.system.alphabet.len() as u32;
        match t {
            DoubleSymbol::Pair(a, b) => self.pair_ids[a.index() * n as usize + b.index()]
                .expect("well-started molecules only contain complementary pairs"),
            DoubleSymbol::Upper(a) => Symbol(self.single_base + a.0),
            DoubleSymbol::Lower(b) => Symbol(self.single_base + n + b.0),
        }
    }

    /// The molecule as a word over `V_d`.
    pub fn tokenize(&self, m: &Molecule) -> Vec<Symbol> {
        m.tokenize().into_iter().map(|t| self.double_id(t)).collect()
    }

    pub fn observe(&self, m: &Molecule) -> OutputSymbol {
        self.observer
            .observe_iter(m.tokenize().into_iter().map(|t| self.double_id(t)))
    }

    pub fn enumerate_observed(&self, bounds: ComputationBounds, mode: Mode) -> ObservedLanguage {
        self.enumerate_with_jobs(bounds, mode, 1)
    }

    pub fn enumerate_with_jobs(&self, bounds: ComputationBounds, mode: Mode, jobs: usize) -> ObservedLanguage {
        search::enumerate(self, &SearchBounds::steps(bounds.max_steps), mode, jobs)
    }

    pub fn member(&self, word: &Word, bounds: ComputationBounds) -> Result<StickerMembership, StickerError> {
        if word.contains_bottom() {
            return Err(StickerError::BottomInQuery);
        }
        Ok(match search::find(self, &SearchBounds::steps(bounds.max_steps), word) {
            Some(w) => StickerMembership::Found {
                axiom: w.origin,
                dominoes: w.steps,
            },
            None => StickerMembership::NotFoundWithinBounds,
        })
    }

    pub fn trace(&self, axiom: usize, dominoes: &[usize]) -> Result<Vec<StickerTraceRow>, StickerError> {
        let sys = &self.system;
        let mut m = sys
            .axioms
            .get(axiom)
            .ok_or_else(|| StickerError::NoSuchAxiom(axiom.to_string()))?
            .clone();
        let mut rows = vec![StickerTraceRow {
            step: 0,
            added: None,
            emitted: self.observe(&m),
            molecule: m.clone(),
        }];
        for (i, &d) in dominoes.iter().enumerate() {
            let domino = sys
                .dominoes
                .get(d)
                .ok_or_else(|| StickerError::NoSuchDomino(d.to_string()))?;
            m = stick_unchecked(&sys.rho, &m, domino).ok_or_else(|| StickerError::Undefined {
                step: i + 1,
                domino: domino.render(&sys.alphabet),
                molecule: m.render(&sys.alphabet),
            })?;
            rows.push(StickerTraceRow {
                step: i + 1,
                added: Some(d),
                emitted: self.observe(&m),
                molecule: m.clone(),
            });
        }
        Ok(rows)
    }

    /// Parses `[@UPPER/LOWER] DOMINO...`, e.g. `a/- -/t`. The axiom may be
    /// omitted when the system has exactly one.
    pub fn parse_replay(&self, text: &str) -> Result<(usize, Vec<usize>), StickerError> {
        let sys = &self.system;
        let mut tokens = text.split_whitespace().peekable();
        let axiom = match tokens.peek().and_then(|t| t.strip_prefix('@')) {
            Some(ax) => {
                tokens.next();
                let m = sys.parse_molecule(ax)?;
                sys.axioms
                    .iter()
                    .position(|a| *a == m)
                    .ok_or_else(|| StickerError::NoSuchAxiom(ax.to_string()))?
            }
            None if sys.axioms.len() == 1 => 0,
            None => return Err(StickerError::AmbiguousAxiom),
        };
        let dominoes = tokens
            .map(|t| {
                let d = parse_single_strand(&sys.alphabet, t)?;
                sys.dominoes
                    .iter()
                    .position(|x| *x == d)
                    .ok_or_else(|| StickerError::NoSuchDomino(t.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok((axiom, dominoes))
    }
}

impl BasicSystem for ObservableStickerSystem {
    type Config = Molecule;
    type Step = usize;

    fn initial(&self) -> Vec<Molecule> {
        self.system.axioms.clone()
    }

    fn successors(&self, m: &Molecule) -> Vec<(Molecule, usize)> {
        self.system
            .dominoes
            .iter()
            .enumerate()
            .filter_map(|(i, d)| stick_unchecked(&self.system.rho, m, d).map(|n| (n, i)))
            .collect()
    }

    fn is_final(&self, m: &Molecule) -> bool {
        m.is_complete()
    }

    fn observe(&self, m: &Molecule) -> OutputSymbol {
        ObservableStickerSystem::observe(self, m)
    }

    fn config_len(&self, m: &Molecule) -> usize {
        m.len()
    }
}

/// Parses a strand: `-` is empty; otherwise symbols separated by `.`, a
/// single symbol name, or one symbol per character.
pub fn parse_strand(alphabet: &Alphabet, text: &str) -> Result<Vec<Symbol>, StickerError> {
    let text = text.trim();
    if text == EMPTY_STRAND {
        return Ok(Vec::new());
    }
    if text.contains('.') {
        return text
            .split('.')
            .map(|t| alphabet.lookup(t).map_err(Into::into))
            .collect();
    }
    Ok(alphabet.parse_word(text)?)
}

pub fn render_strand(alphabet: &Alphabet, strand: &[Symbol]) -> String {
    if strand.is_empty() {
        return EMPTY_STRAND.to_string();
    }
    let sep = if alphabet.is_single_char() { "" } else { "." };
    strand.iter().map(|&s| alphabet.name(s)).collect::<Vec<_>>().join(sep)
}

fn split_pair(text: &str) -> Option<(&str, &str)> {
    let (u, l) = text.trim().split_once('/')?;
    (!u.trim().is_empty() && !l.trim().is_empty() && !l.contains('/')).then_some((u, l))
}

pub fn parse_molecule(alphabet: &Alphabet, rho: &Complementarity, text: &str) -> Result<Molecule, StickerError> {
    let (u, l) = split_pair(text).ok_or_else(|| StickerError::BadMolecule(text.to_string()))?;
    Molecule::new(rho, parse_strand(alphabet, u)?, parse_strand(alphabet, l)?)
}

pub fn parse_single_strand(alphabet: &Alphabet, text: &str) -> Result<SingleStrand, StickerError> {
    let bad = || StickerError::NotSingleStrand(text.to_string());
    let (u, l) = split_pair(text).ok_or_else(bad)?;
    match (u.trim() == EMPTY_STRAND, l.trim() == EMPTY_STRAND) {
        (false, true) => SingleStrand::new(Side::Upper, parse_strand(alphabet, u)?),
        (true, false) => SingleStrand::new(Side::Lower, parse_strand(alphabet, l)?),
        _ => Err(bad()),
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        })
    }
}
