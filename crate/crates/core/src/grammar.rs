//! Context-free grammars, sentential forms and the one-step derivation
//! relation.
//!
//! Derivations are free: any occurrence of any nonterminal may be rewritten
//! in a step, not just the leftmost one.

use std::collections::HashSet;
use std::fmt;

use crate::symbol::{Alphabet, Symbol, SymbolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Nonterminal,
    Terminal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Symbol,
    pub rhs: Vec<Symbol>,
}

/// A string over `N ∪ T`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SententialForm(pub Vec<Symbol>);

impl SententialForm {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<Symbol>> for SententialForm {
    fn from(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }
}

/// Witness for one derivation step: which rule was applied, and where.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleApplication {
    pub rule: usize,
    pub position: usize,
}

impl fmt::Display for RuleApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.rule, self.position)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("`{0}` is declared both as nonterminal and terminal")]
    Overlap(String),
    #[error("start symbol `{0}` is not a nonterminal")]
    StartNotNonterminal(String),
    #[error("rule {0}: left-hand side `{1}` is not a nonterminal")]
    LhsNotNonterminal(usize, String),
    #[error("rule {0}: duplicate of rule {1}")]
    DuplicateRule(usize, usize),
    #[error("symbol id {0} is not in the grammar's alphabet")]
    ForeignSymbol(u32),
    #[error("no rule {0}")]
    NoSuchRule(usize),
    #[error("rule {rule} does not apply at position {position}")]
    NotApplicable { rule: usize, position: usize },
}

/// A context-free grammar `(N, T, S, P)`.
///
/// Nonterminals and terminals share one alphabet; nonterminals come first in
/// declaration order, then terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    alphabet: Alphabet,
    kinds: Vec<SymbolKind>,
    start: Symbol,
    rules: Vec<Rule>,
    // rule indices grouped by lhs, ascending
    by_lhs: Vec<Vec<usize>>,
}

impl Grammar {
    /// Builds a grammar from symbol names.
    pub fn new(
        nonterminals: &[&str],
        terminals: &[&str],
        start: &str,
        rules: &[(&str, &[&str])],
    ) -> Result<Self, GrammarError> {
        let mut alphabet = Alphabet::new();
        for n in nonterminals {
            alphabet.insert(*n)?;
        }
        for t in terminals {
            match alphabet.insert(*t) {
                Err(SymbolError::Duplicate(name)) if nonterminals.contains(&name.as_str()) => {
                    return Err(GrammarError::Overlap(name))
                }
                other => other?,
            };
        }
        let start = alphabet.lookup(start)?;
        let rules = rules
            .iter()
            .map(|(lhs, rhs)| {
                Ok(Rule {
                    lhs: alphabet.lookup(lhs)?,
                    rhs: rhs.iter().map(|s| alphabet.lookup(s)).collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<Vec<_>, SymbolError>>()?;
        Self::from_parts(alphabet, nonterminals.len(), start, rules)
    }

    /// Builds a grammar over an alphabet whose first `num_nonterminals`
    /// symbols are the nonterminals.
    pub fn from_parts(
        alphabet: Alphabet,
        num_nonterminals: usize,
        start: Symbol,
        rules: Vec<Rule>,
    ) -> Result<Self, GrammarError> {
        let kinds: Vec<SymbolKind> = (0..alphabet.len())
            .map(|i| {
                if i < num_nonterminals {
                    SymbolKind::Nonterminal
                } else {
                    SymbolKind::Terminal
                }
            })
            .collect();
        if !alphabet.contains(start) {
            return Err(GrammarError::ForeignSymbol(start.0));
        }
        if kinds[start.index()] != SymbolKind::Nonterminal {
            return Err(GrammarError::StartNotNonterminal(alphabet.name(start).to_string()));
        }
        let mut seen: Vec<&Rule> = Vec::with_capacity(rules.len());
        let mut by_lhs = vec![Vec::new(); alphabet.len()];
        for (i, rule) in rules.iter().enumerate() {
            for &s in std::iter::once(&rule.lhs).chain(&rule.rhs) {
                if !alphabet.contains(s) {
                    return Err(GrammarError::ForeignSymbol(s.0));
                }
            }
            if kinds[rule.lhs.index()] != SymbolKind::Nonterminal {
                return Err(GrammarError::LhsNotNonterminal(i, alphabet.name(rule.lhs).to_string()));
            }
            if let Some(j) = seen.iter().position(|r| *r == rule) {
                return Err(GrammarError::DuplicateRule(i, j));
            }
            seen.push(rule);
            by_lhs[rule.lhs.index()].push(i);
        }
        Ok(Self {
            alphabet,
            kinds,
            start,
            rules,
            by_lhs,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn start(&self) -> Symbol {
        self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn kind(&self, sym: Symbol) -> SymbolKind {
        self.kinds[sym.index()]
    }

    pub fn is_nonterminal(&self, sym: Symbol) -> bool {
        self.kind(sym) == SymbolKind::Nonterminal
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.alphabet.symbols().filter(|&s| self.is_nonterminal(s))
    }

    pub fn terminals(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.alphabet.symbols().filter(|&s| !self.is_nonterminal(s))
    }

    pub fn start_form(&self) -> SententialForm {
        SententialForm(vec![self.start])
    }

    fn check_form(&self, w: &SententialForm) -> Result<(), GrammarError> {
        match w.0.iter().find(|s| !self.alphabet.contains(**s)) {
            Some(s) => Err(GrammarError::ForeignSymbol(s.0)),
            None => Ok(()),
        }
    }

    /// All one-step successors of `w`, ordered by rule index and then by
    /// position.
    pub fn successors(&self, w: &SententialForm) -> Result<Vec<(SententialForm, RuleApplication)>, GrammarError> {
        self.check_form(w)?;
        Ok(self.successors_unchecked(w))
    }

    pub(crate) fn successors_unchecked(&self, w: &SententialForm) -> Vec<(SententialForm, RuleApplication)> {
        // rule indices that can fire anywhere in w, ascending
        let present: HashSet<Symbol> = w.0.iter().copied().collect();
        let mut candidates: Vec<usize> = present
            .iter()
            .flat_map(|s| self.by_lhs[s.index()].iter().copied())
            .collect();
        candidates.sort_unstable();

        let mut out = Vec::new();
        for rule_idx in candidates {
            let rule = &self.rules[rule_idx];
            for (pos, _) in w.0.iter().enumerate().filter(|(_, &s)| s == rule.lhs) {
                let app = RuleApplication {
                    rule: rule_idx,
                    position: pos,
                };
                out.push((splice(w, rule, pos), app));
            }
        }
        out
    }

    /// Replays a single rule application on `w`.
    pub fn apply(&self, w: &SententialForm, app: RuleApplication) -> Result<SententialForm, GrammarError> {
        self.check_form(w)?;
        let rule = self.rules.get(app.rule).ok_or(GrammarError::NoSuchRule(app.rule))?;
        if w.0.get(app.position) != Some(&rule.lhs) {
            return Err(GrammarError::NotApplicable {
                rule: app.rule,
                position: app.position,
            });
        }
        Ok(splice(w, rule, app.position))
    }

    pub fn is_terminal_form(&self, w: &SententialForm) -> bool {
        w.0.iter().all(|&s| !self.is_nonterminal(s))
    }

    pub fn nonterminal_count(&self, w: &SententialForm) -> usize {
        w.0.iter().filter(|&&s| self.is_nonterminal(s)).count()
    }

    pub fn parse_form(&self, text: &str) -> Result<SententialForm, GrammarError> {
        Ok(SententialForm(self.alphabet.parse_word(text)?))
    }

    pub fn render_form(&self, w: &SententialForm) -> String {
        self.alphabet.render_word(&w.0)
    }

    /// Renders a rule as `X -> a b`, with `~` for an empty right side.
    pub fn render_rule(&self, rule: &Rule) -> String {
        let rhs = if rule.rhs.is_empty() {
            "~".to_string()
        } else {
            rule.rhs
                .iter()
                .map(|&s| self.alphabet.name(s))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{} -> {}", self.alphabet.name(rule.lhs), rhs)
    }
}

fn splice(w: &SententialForm, rule: &Rule, pos: usize) -> SententialForm {
    let mut next = Vec::with_capacity(w.0.len() + rule.rhs.len() - 1);
    next.extend_from_slice(&w.0[..pos]);
    next.extend_from_slice(&rule.rhs);
    next.extend_from_slice(&w.0[pos + 1..]);
    SententialForm(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> Grammar {
        Grammar::new(
            &["S", "A", "B", "C"],
            &["t", "p"],
            "S",
            &[
                ("S", &["p", "S"]),
                ("S", &["p"]),
                ("S", &["A"]),
                ("A", &["A", "B"]),
                ("A", &["C"]),
                ("B", &["C"]),
                ("C", &["t"]),
            ],
        )
        .unwrap()
    }

    fn rendered(g: &Grammar, w: &str) -> Vec<(String, usize, usize)> {
        g.successors(&g.parse_form(w).unwrap())
            .unwrap()
            .into_iter()
            .map(|(f, a)| (g.render_form(&f), a.rule, a.position))
            .collect()
    }

    #[test]
    fn successors_of_start() {
        let g = g();
        assert_eq!(
            rendered(&g, "S"),
            vec![("pS".into(), 0, 0), ("p".into(), 1, 0), ("A".into(), 2, 0)]
        );
    }

    #[test]
    fn successors_of_ab_and_terminal_forms() {
        let g = g();
        assert_eq!(
            rendered(&g, "AB"),
            vec![("ABB".into(), 3, 0), ("CB".into(), 4, 0), ("AC".into(), 5, 1)]
        );
        assert!(rendered(&g, "tt").is_empty());
    }

    #[test]
    fn successors_order_rule_then_position() {
        let g = g();
        let got = rendered(&g, "CAC");
        assert_eq!(
            got,
            vec![
                ("CABC".into(), 3, 1),
                ("CCC".into(), 4, 1),
                ("tAC".into(), 6, 0),
                ("CAt".into(), 6, 2),
            ]
        );
    }

    #[test]
    fn terminal_form_and_counts() {
        let g = g();
        let f = |s: &str| g.parse_form(s).unwrap();
        assert!(g.is_terminal_form(&f("ppp")));
        assert!(!g.is_terminal_form(&f("pS")));
        assert!(g.is_terminal_form(&f("")));
        assert_eq!(g.nonterminal_count(&f("ABB")), 3);
        assert_eq!(g.nonterminal_count(&f("t")), 0);
        assert_eq!(g.nonterminal_count(&f("pSB")), 2);
    }

    #[test]
    fn foreign_symbol_is_rejected() {
        let g = g();
        let w = SententialForm(vec![Symbol(0), Symbol(99)]);
        assert_eq!(g.successors(&w), Err(GrammarError::ForeignSymbol(99)));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Grammar::new(&["S"], &["S"], "S", &[]),
            Err(GrammarError::Overlap(_))
        ));
        assert!(matches!(
            Grammar::new(&["S"], &["a"], "a", &[]),
            Err(GrammarError::StartNotNonterminal(_))
        ));
        assert!(matches!(
            Grammar::new(&["S"], &["a"], "S", &[("a", &["S"])]),
            Err(GrammarError::LhsNotNonterminal(0, _))
        ));
        assert!(matches!(
            Grammar::new(&["S"], &["a"], "S", &[("S", &["a"]), ("S", &["a"])]),
            Err(GrammarError::DuplicateRule(1, 0))
        ));
        assert!(matches!(
            Grammar::new(&["S"], &["a"], "S", &[("S", &["b"])]),
            Err(GrammarError::Symbol(SymbolError::Unknown(_)))
        ));
    }

    #[test]
    fn erasing_rules_and_apply() {
        let g = Grammar::new(&["S"], &["a"], "S", &[("S", &[]), ("S", &["a", "S", "S"])]).unwrap();
        let w = g.parse_form("aSS").unwrap();
        let next = g.apply(&w, RuleApplication { rule: 0, position: 2 }).unwrap();
        assert_eq!(g.render_form(&next), "aS");
        assert_eq!(
            g.apply(&w, RuleApplication { rule: 0, position: 0 }),
            Err(GrammarError::NotApplicable { rule: 0, position: 0 })
        );
        assert_eq!(g.render_rule(&g.rules()[0]), "S -> ~");
    }
}
