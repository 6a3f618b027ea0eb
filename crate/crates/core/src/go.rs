//! Grammar/observer systems: a context-free grammar whose sentential forms
//! are read by a monadic transducer.
//!
//! The observed language collects `A(w0) A(w1) ... A(wn)` over every
//! derivation `S = w0 => ... => wn` ending in a terminal form. The start form
//! itself is observed.

use crate::grammar::{Grammar, GrammarError, RuleApplication, SententialForm};
use crate::observer::{MonadicTransducer, ObserverError, ObserverSpec, OutputSymbol, Word};
use crate::search::{self, BasicSystem, Mode, ObservedLanguage, SearchBounds};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GoError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Observer(#[from] ObserverError),
    #[error("observer input alphabet must equal the grammar's nonterminals and terminals")]
    AlphabetMismatch,
    #[error("max_steps must be at least 1")]
    ZeroSteps,
    #[error("query word contains `!`; only words over the output alphabet can be members")]
    BottomInQuery,
    #[error("replay step {step}: {source}")]
    Replay {
        step: usize,
        #[source]
        source: GrammarError,
    },
    #[error("replay step {step}: `{to}` is not reachable in one step from `{from}`")]
    NotAStep { step: usize, from: String, to: String },
    #[error("bad replay token `{0}`, expected RULE@POSITION")]
    BadReplayToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_steps: usize,
    pub max_form_len: Option<usize>,
    pub max_output_len: Option<usize>,
}

impl EnumerationBounds {
    pub fn steps(max_steps: usize) -> Self {
        Self {
            max_steps,
            max_form_len: None,
            max_output_len: None,
        }
    }

    fn to_search(self) -> Result<SearchBounds, GoError> {
        if self.max_steps == 0 {
            return Err(GoError::ZeroSteps);
        }
        Ok(SearchBounds {
            max_steps: self.max_steps,
            max_config_len: self.max_form_len,
            max_output_len: self.max_output_len,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Rule applications replaying a derivation that observes to the word.
    Found(Vec<RuleApplication>),
    /// Not a proof of non-membership.
    NotFoundWithinBounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub step: usize,
    pub form: SententialForm,
    pub applied: Option<RuleApplication>,
    pub emitted: OutputSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoSystem {
    grammar: Grammar,
    observer: MonadicTransducer,
}

impl GoSystem {
    pub fn new(grammar: Grammar, observer: MonadicTransducer) -> Result<Self, GoError> {
        if observer.input_alphabet() != grammar.alphabet() {
            return Err(GoError::AlphabetMismatch);
        }
        Ok(Self { grammar, observer })
    }

    /// Compiles `spec` over the grammar's alphabet and pairs the two.
    pub fn with_spec(grammar: Grammar, spec: &ObserverSpec) -> Result<Self, GoError> {
        let observer = MonadicTransducer::compile(spec, grammar.alphabet())?;
        Self::new(grammar, observer)
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn observer(&self) -> &MonadicTransducer {
        &self.observer
    }

    pub fn enumerate(&self, bounds: EnumerationBounds, mode: Mode) -> Result<ObservedLanguage, GoError> {
        self.enumerate_with_jobs(bounds, mode, 1)
    }

    pub fn enumerate_with_jobs(
        &self,
        bounds: EnumerationBounds,
        mode: Mode,
        jobs: usize,
    ) -> Result<ObservedLanguage, GoError> {
        Ok(search::enumerate(self, &bounds.to_search()?, mode, jobs))
    }

    pub fn member(&self, word: &Word, bounds: EnumerationBounds) -> Result<Membership, GoError> {
        if word.contains_bottom() {
            return Err(GoError::BottomInQuery);
        }
        Ok(match search::find(self, &bounds.to_search()?, word) {
            Some(w) => Membership::Found(w.steps),
            None => Membership::NotFoundWithinBounds,
        })
    }

    /// Replays `apps` from the start symbol and returns `w0 ... wn`.
    pub fn replay(&self, apps: &[RuleApplication]) -> Result<Vec<SententialForm>, GoError> {
        let mut forms = vec![self.grammar.start_form()];
        for (i, &app) in apps.iter().enumerate() {
            let next = self
                .grammar
                .apply(forms.last().unwrap(), app)
                .map_err(|source| GoError::Replay { step: i + 1, source })?;
            forms.push(next);
        }
        Ok(forms)
    }

    /// One row per form of the replayed derivation, with what the observer
    /// emitted for it.
    pub fn trace(&self, apps: &[RuleApplication]) -> Result<Vec<TraceRow>, GoError> {
        let forms = self.replay(apps)?;
        Ok(forms
            .into_iter()
            .enumerate()
            .map(|(step, form)| TraceRow {
                step,
                emitted: self.observe(&form),
                applied: step.checked_sub(1).map(|i| apps[i]),
                form,
            })
            .collect())
    }

    /// Parses a replay script: either `RULE@POSITION` tokens (0-based) or a
    /// chain of forms `S=>A=>C=>t`, in which case each step resolves to the
    /// first rule application producing the next form.
    pub fn parse_replay(&self, text: &str) -> Result<Vec<RuleApplication>, GoError> {
        let text = text.trim();
        if text.contains("=>") {
            let forms = text
                .split("=>")
                .map(|f| self.grammar.parse_form(f))
                .collect::<Result<Vec<_>, _>>()?;
            if forms.first() != Some(&self.grammar.start_form()) {
                return Err(GoError::NotAStep {
                    step: 0,
                    from: self.grammar.render_form(&self.grammar.start_form()),
                    to: self.grammar.render_form(&forms[0]),
                });
            }
            return forms
                .windows(2)
                .enumerate()
                .map(|(i, pair)| {
                    self.grammar
                        .successors(&pair[0])?
                        .into_iter()
                        .find(|(f, _)| *f == pair[1])
                        .map(|(_, app)| app)
                        .ok_or_else(|| GoError::NotAStep {
                            step: i + 1,
                            from: self.grammar.render_form(&pair[0]),
                            to: self.grammar.render_form(&pair[1]),
                        })
                })
                .collect();
        }
        text.split_whitespace()
            .map(|tok| {
                let (rule, pos) = tok
                    .split_once('@')
                    .ok_or_else(|| GoError::BadReplayToken(tok.to_string()))?;
                match (rule.parse(), pos.parse()) {
                    (Ok(rule), Ok(position)) => Ok(RuleApplication { rule, position }),
                    _ => Err(GoError::BadReplayToken(tok.to_string())),
                }
            })
            .collect()
    }

    fn observe(&self, form: &SententialForm) -> OutputSymbol {
        self.observer.observe_iter(form.0.iter().copied())
    }
}

impl BasicSystem for GoSystem {
    type Config = SententialForm;
    type Step = RuleApplication;

    fn initial(&self) -> Vec<SententialForm> {
        vec![self.grammar.start_form()]
    }

    fn successors(&self, form: &SententialForm) -> Vec<(SententialForm, RuleApplication)> {
        self.grammar.successors_unchecked(form)
    }

    fn is_final(&self, form: &SententialForm) -> bool {
        self.grammar.is_terminal_form(form)
    }

    fn observe(&self, form: &SententialForm) -> OutputSymbol {
        GoSystem::observe(self, form)
    }

    fn config_len(&self, form: &SententialForm) -> usize {
        form.len()
    }

    fn nonterminals(&self, form: &SententialForm) -> usize {
        self.grammar.nonterminal_count(form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn words(sys: &GoSystem, lang: &ObservedLanguage) -> Vec<String> {
        lang.words.iter().map(|w| sys.observer().render_word(w)).collect()
    }

    #[test]
    fn rejects_mismatched_alphabets() {
        let g = examples::example_grammar();
        let other = crate::grammar::Grammar::new(&["S"], &["a"], "S", &[("S", &["a"])]).unwrap();
        let spec = ObserverSpec::from_text(&["a"], &[], "a", other.alphabet()).unwrap();
        let t = MonadicTransducer::compile(&spec, other.alphabet()).unwrap();
        assert_eq!(GoSystem::new(g, t), Err(GoError::AlphabetMismatch));
    }

    #[test]
    fn zero_steps_rejected() {
        let sys = examples::abc_system();
        assert_eq!(
            sys.enumerate(EnumerationBounds::steps(0), Mode::Free),
            Err(GoError::ZeroSteps)
        );
    }

    #[test]
    fn a2_slices() {
        let sys = examples::abc_system();
        let lang = sys
            .enumerate(EnumerationBounds::steps(12), Mode::BottomFiltered)
            .unwrap();
        assert_eq!(words(&sys, &lang), ["abc", "aabbcc", "aaabbbccc", "aaaabbbbcccc"]);
        let lang = sys
            .enumerate(EnumerationBounds::steps(2), Mode::BottomFiltered)
            .unwrap();
        assert!(lang.words.is_empty());
    }

    #[test]
    fn a1_slice() {
        let sys = examples::a_per_form_system();
        let lang = sys
            .enumerate(EnumerationBounds::steps(6), Mode::BottomFiltered)
            .unwrap();
        assert_eq!(words(&sys, &lang), ["aa", "aaa", "aaaa", "aaaaa", "aaaaaa", "aaaaaaa"]);
    }

    #[test]
    fn membership() {
        let sys = examples::abc_system();
        let word = sys.observer().parse_word("aabbcc").unwrap();
        let Membership::Found(apps) = sys.member(&word, EnumerationBounds::steps(12)).unwrap() else {
            panic!("aabbcc not found");
        };
        let forms: Vec<String> = sys
            .replay(&apps)
            .unwrap()
            .iter()
            .map(|f| sys.grammar().render_form(f))
            .collect();
        assert_eq!(forms, ["S", "A", "AB", "CB", "CC", "tC", "tt"]);

        let word = sys.observer().parse_word("aabbc").unwrap();
        assert_eq!(
            sys.member(&word, EnumerationBounds::steps(20)).unwrap(),
            Membership::NotFoundWithinBounds
        );

        let sys = examples::a_per_form_system();
        let word = sys.observer().parse_word("a").unwrap();
        assert_eq!(
            sys.member(&word, EnumerationBounds::steps(10)).unwrap(),
            Membership::NotFoundWithinBounds
        );
        let bottom = Word(vec![OutputSymbol::Bottom]);
        assert_eq!(
            sys.member(&bottom, EnumerationBounds::steps(3)),
            Err(GoError::BottomInQuery)
        );
    }

    #[test]
    fn traces() {
        let sys = examples::abc_system();
        let apps = sys.parse_replay("S=>A=>C=>t").unwrap();
        let rows = sys.trace(&apps).unwrap();
        let emitted: Vec<&str> = rows.iter().map(|r| sys.observer().render_output(r.emitted)).collect();
        assert_eq!(emitted, ["~", "a", "b", "c"]);
        assert_eq!(rows[0].applied, None);

        let rows = sys.trace(&[]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].emitted, OutputSymbol::Lambda);

        let rows = sys.trace(&sys.parse_replay("0@0").unwrap()).unwrap();
        let emitted: Vec<&str> = rows.iter().map(|r| sys.observer().render_output(r.emitted)).collect();
        assert_eq!(emitted, ["~", "!"]);
    }

    #[test]
    fn replay_errors_name_the_step() {
        let sys = examples::abc_system();
        let err = sys.trace(&sys.parse_replay("2@0 3@1").unwrap()).unwrap_err();
        assert!(matches!(err, GoError::Replay { step: 2, .. }), "{err:?}");
        assert!(matches!(
            sys.parse_replay("S=>A=>t"),
            Err(GoError::NotAStep { step: 2, .. })
        ));
        assert!(matches!(sys.parse_replay("3"), Err(GoError::BadReplayToken(_))));
    }

    #[test]
    fn nonterminal_diagnostic_grows() {
        let sys = examples::a_per_form_system();
        let seen: Vec<usize> = [2, 4, 6, 8]
            .iter()
            .map(|&n| {
                sys.enumerate(EnumerationBounds::steps(n), Mode::Free)
                    .unwrap()
                    .stats
                    .max_nonterminals_seen
            })
            .collect();
        assert!(seen.windows(2).all(|w| w[0] < w[1]), "{seen:?}");
    }
}
