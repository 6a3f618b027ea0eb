//! Test-side oracles and random system generators. Nothing here goes
//! through the compiled transducer, the search engine or `stick`.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use observed::{
    Alphabet, GoSystem, Grammar, ObservableStickerSystem, ObserverSpec, OutputSymbol, PatternCase, Regex,
    StickerSystem, Symbol, Word,
};
use rand::rngs::StdRng;
use rand::Rng;

// ---------------------------------------------------------------- regexes

/// All positions `j` such that `re` matches `w[i..j]`.
fn ends(re: &Regex, w: &[Symbol], i: usize) -> BTreeSet<usize> {
    match re {
        Regex::Epsilon => BTreeSet::from([i]),
        Regex::Symbol(s) => {
            if w.get(i) == Some(s) {
                BTreeSet::from([i + 1])
            } else {
                BTreeSet::new()
            }
        }
        Regex::Concat(parts) => {
            let mut cur = BTreeSet::from([i]);
            for p in parts {
                cur = cur.iter().flat_map(|&k| ends(p, w, k)).collect();
            }
            cur
        }
        Regex::Alt(branches) => branches.iter().flat_map(|b| ends(b, w, i)).collect(),
        Regex::Star(inner) => repeat(inner, w, BTreeSet::from([i])),
        Regex::Plus(inner) => repeat(inner, w, ends(inner, w, i)),
        Regex::Optional(inner) => {
            let mut out = ends(inner, w, i);
            out.insert(i);
            out
        }
    }
}

fn repeat(inner: &Regex, w: &[Symbol], seed: BTreeSet<usize>) -> BTreeSet<usize> {
    let mut reached = seed.clone();
    let mut frontier: Vec<usize> = seed.into_iter().collect();
    while let Some(k) = frontier.pop() {
        for j in ends(inner, w, k) {
            if reached.insert(j) {
                frontier.push(j);
            }
        }
    }
    reached
}

pub fn regex_matches(re: &Regex, w: &[Symbol]) -> bool {
    ends(re, w, 0).contains(&w.len())
}

/// First-match evaluation of the raw specification.
pub fn observe_oracle(spec: &ObserverSpec, w: &[Symbol]) -> OutputSymbol {
    spec.cases
        .iter()
        .find(|c| regex_matches(&c.pattern, w))
        .map_or(spec.default, |c| c.output)
}

pub fn word_of(outputs: impl IntoIterator<Item = OutputSymbol>) -> Word {
    Word(outputs.into_iter().filter(|o| *o != OutputSymbol::Lambda).collect())
}

// --------------------------------------------------------------- grammars

/// Enumerates every derivation of at most `max_steps` steps by plain
/// recursion. Returns `None` once more than `budget` paths were visited.
pub fn naive_go(grammar: &Grammar, spec: &ObserverSpec, max_steps: usize, budget: usize) -> Option<BTreeSet<Word>> {
    struct Ctx<'a> {
        grammar: &'a Grammar,
        spec: &'a ObserverSpec,
        seen: HashMap<Vec<Symbol>, OutputSymbol>,
        out: BTreeSet<Word>,
        visited: usize,
        budget: usize,
    }
    impl Ctx<'_> {
        fn obs(&mut self, form: &[Symbol]) -> OutputSymbol {
            if let Some(&o) = self.seen.get(form) {
                return o;
            }
            let o = observe_oracle(self.spec, form);
            self.seen.insert(form.to_vec(), o);
            o
        }

        fn walk(&mut self, form: Vec<Symbol>, emitted: Vec<OutputSymbol>, left: usize) -> bool {
            self.visited += 1;
            if self.visited > self.budget {
                return false;
            }
            let mut emitted = emitted;
            emitted.push(self.obs(&form));
            let nts: Vec<usize> = (0..form.len())
                .filter(|&i| self.grammar.is_nonterminal(form[i]))
                .collect();
            if nts.is_empty() {
                self.out.insert(word_of(emitted));
                return true;
            }
            if left == 0 {
                return true;
            }
            for &i in &nts {
                for rule in self.grammar.rules() {
                    if rule.lhs != form[i] {
                        continue;
                    }
                    let mut next = form[..i].to_vec();
                    next.extend_from_slice(&rule.rhs);
                    next.extend_from_slice(&form[i + 1..]);
                    if !self.walk(next, emitted.clone(), left - 1) {
                        return false;
                    }
                }
            }
            true
        }
    }
    let mut ctx = Ctx {
        grammar,
        spec,
        seen: HashMap::new(),
        out: BTreeSet::new(),
        visited: 0,
        budget,
    };
    ctx.walk(vec![grammar.start()], Vec::new(), max_steps)
        .then_some(ctx.out)
}

// ---------------------------------------------------------------- stickers

/// A sticker system spelled out by symbol names.
#[derive(Clone, Debug)]
pub struct StickerText {
    pub alphabet: Vec<String>,
    pub rho: Vec<(String, String)>,
    pub axioms: Vec<(Vec<String>, Vec<String>)>,
    /// `(true, content)` sticks to the upper strand.
    pub dominoes: Vec<(bool, Vec<String>)>,
}

impl StickerText {
    pub fn complementary(&self, x: &str, y: &str) -> bool {
        self.rho.iter().any(|(a, b)| (a == x && b == y) || (a == y && b == x))
    }

    fn strand(s: &[String]) -> String {
        if s.is_empty() {
            "-".into()
        } else {
            s.join(".")
        }
    }

    pub fn build(&self) -> StickerSystem {
        let alphabet: Vec<&str> = self.alphabet.iter().map(String::as_str).collect();
        let rho: Vec<String> = self.rho.iter().map(|(a, b)| format!("{a}~{b}")).collect();
        let rho: Vec<&str> = rho.iter().map(String::as_str).collect();
        let axioms: Vec<String> = self
            .axioms
            .iter()
            .map(|(u, l)| format!("{}/{}", Self::strand(u), Self::strand(l)))
            .collect();
        let axioms: Vec<&str> = axioms.iter().map(String::as_str).collect();
        let dominoes: Vec<String> = self
            .dominoes
            .iter()
            .map(|(up, c)| {
                if *up {
                    format!("{}/-", Self::strand(c))
                } else {
                    format!("-/{}", Self::strand(c))
                }
            })
            .collect();
        let dominoes: Vec<&str> = dominoes.iter().map(String::as_str).collect();
        StickerSystem::from_text(&alphabet, &rho, &axioms, &dominoes).expect("generated system is valid")
    }

    /// Full recheck: the overlap must be complementary everywhere.
    pub fn well_started(&self, upper: &[String], lower: &[String]) -> bool {
        upper.iter().zip(lower).all(|(u, l)| self.complementary(u, l))
    }

    /// Double-symbol names of a molecule, e.g. `[a/t]`, `[a/-]`.
    pub fn token_names(upper: &[String], lower: &[String]) -> Vec<String> {
        let n = upper.len().max(lower.len());
        (0..n)
            .map(|i| match (upper.get(i), lower.get(i)) {
                (Some(u), Some(l)) => format!("[{u}/{l}]"),
                (Some(u), None) => format!("[{u}/-]"),
                (None, Some(l)) => format!("[-/{l}]"),
                (None, None) => unreachable!(),
            })
            .collect()
    }
}

/// Observes a molecule through the raw specification over `input`.
pub fn observe_molecule(spec: &ObserverSpec, input: &Alphabet, upper: &[String], lower: &[String]) -> OutputSymbol {
    let word: Vec<Symbol> = StickerText::token_names(upper, lower)
        .iter()
        .map(|n| input.get(n).expect("token is in the double alphabet"))
        .collect();
    observe_oracle(spec, &word)
}

/// Every sticking sequence of at most `max_steps` dominoes, no dedup.
pub fn naive_sticker(text: &StickerText, spec: &ObserverSpec, input: &Alphabet, max_steps: usize) -> BTreeSet<Word> {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        text: &StickerText,
        spec: &ObserverSpec,
        input: &Alphabet,
        upper: Vec<String>,
        lower: Vec<String>,
        emitted: Vec<OutputSymbol>,
        left: usize,
        out: &mut BTreeSet<Word>,
    ) {
        let mut emitted = emitted;
        emitted.push(observe_molecule(spec, input, &upper, &lower));
        if upper.len() == lower.len() {
            out.insert(word_of(emitted.clone()));
        }
        if left == 0 {
            return;
        }
        for (up, content) in &text.dominoes {
            let (mut u, mut l) = (upper.clone(), lower.clone());
            if *up {
                u.extend(content.iter().cloned());
            } else {
                l.extend(content.iter().cloned());
            }
            if text.well_started(&u, &l) {
                walk(text, spec, input, u, l, emitted.clone(), left - 1, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    for (u, l) in &text.axioms {
        walk(text, spec, input, u.clone(), l.clone(), Vec::new(), max_steps, &mut out);
    }
    out
}

// ------------------------------------------------------------ generators

pub fn random_regex(rng: &mut StdRng, symbols: &[Symbol], depth: u32) -> Regex {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        return if rng.gen_bool(0.1) {
            Regex::Epsilon
        } else {
            Regex::Symbol(symbols[rng.gen_range(0..symbols.len())])
        };
    }
    match rng.gen_range(0..5) {
        0 => Regex::Concat(
            (0..rng.gen_range(2..=3))
                .map(|_| random_regex(rng, symbols, depth - 1))
                .collect(),
        ),
        1 => Regex::Alt(
            (0..rng.gen_range(2..=3))
                .map(|_| random_regex(rng, symbols, depth - 1))
                .collect(),
        ),
        2 => Regex::Star(Box::new(random_regex(rng, symbols, depth - 1))),
        3 => Regex::Plus(Box::new(random_regex(rng, symbols, depth - 1))),
        _ => Regex::Optional(Box::new(random_regex(rng, symbols, depth - 1))),
    }
}

fn random_output(rng: &mut StdRng, letters: &[Symbol]) -> OutputSymbol {
    match rng.gen_range(0..letters.len() + 2) {
        0 => OutputSymbol::Lambda,
        1 => OutputSymbol::Bottom,
        k => OutputSymbol::Letter(letters[k - 2]),
    }
}

/// A random observer over `input` with output alphabet `{a, b}`.
pub fn random_spec(rng: &mut StdRng, input: &Alphabet, max_cases: usize) -> ObserverSpec {
    let output = Alphabet::from_names(["a", "b"]).unwrap();
    let letters: Vec<Symbol> = output.symbols().collect();
    let symbols: Vec<Symbol> = input.symbols().collect();
    let cases = (0..rng.gen_range(0..=max_cases))
        .map(|_| PatternCase {
            pattern: random_regex(rng, &symbols, 3),
            output: random_output(rng, &letters),
        })
        .collect();
    let default = random_output(rng, &letters);
    ObserverSpec { output, cases, default }
}

/// A random grammar over nonterminals `S A B` and terminals `x y` with at
/// most `max_rules` rules.
pub fn random_grammar(rng: &mut StdRng, max_rules: usize) -> Grammar {
    let nts = ["S", "A", "B"];
    let all = ["S", "A", "B", "x", "y"];
    loop {
        let mut rules: Vec<(&str, Vec<&str>)> = Vec::new();
        for _ in 0..rng.gen_range(1..=max_rules) {
            let lhs = nts[rng.gen_range(0..nts.len())];
            let rhs: Vec<&str> = (0..rng.gen_range(0..=3))
                .map(|_| all[rng.gen_range(0..all.len())])
                .collect();
            if !rules.iter().any(|(l, r)| *l == lhs && *r == rhs) {
                rules.push((lhs, rhs));
            }
        }
        if !rules.iter().any(|(l, _)| *l == "S") {
            continue;
        }
        let rules: Vec<(&str, &[&str])> = rules.iter().map(|(l, r)| (*l, r.as_slice())).collect();
        return Grammar::new(&nts, &["x", "y"], "S", &rules).expect("generated grammar is valid");
    }
}

/// A random sticker system over `a c g t` with `a~t c~g`.
pub fn random_sticker(rng: &mut StdRng) -> StickerText {
    let alphabet: Vec<String> = ["a", "c", "g", "t"].iter().map(|s| s.to_string()).collect();
    let rho = vec![("a".to_string(), "t".to_string()), ("c".to_string(), "g".to_string())];
    let partner = |s: &str| match s {
        "a" => "t",
        "t" => "a",
        "c" => "g",
        _ => "c",
    };
    let pick = |rng: &mut StdRng| alphabet[rng.gen_range(0..4)].clone();
    let mut axioms = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let upper: Vec<String> = (0..rng.gen_range(1..=2)).map(|_| pick(rng)).collect();
        let n = rng.gen_range(0..=upper.len() + 1);
        let lower: Vec<String> = (0..n)
            .map(|i| match upper.get(i) {
                Some(u) => partner(u).to_string(),
                None => pick(rng),
            })
            .collect();
        if !axioms.contains(&(upper.clone(), lower.clone())) {
            axioms.push((upper, lower));
        }
    }
    let mut dominoes = Vec::new();
    for _ in 0..rng.gen_range(2..=4) {
        let d = (
            rng.gen_bool(0.5),
            (0..rng.gen_range(1..=2)).map(|_| pick(rng)).collect::<Vec<_>>(),
        );
        if !dominoes.contains(&d) {
            dominoes.push(d);
        }
    }
    StickerText {
        alphabet,
        rho,
        axioms,
        dominoes,
    }
}

pub fn marker_text() -> StickerText {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    StickerText {
        alphabet: s(&["a", "c", "g", "t"]),
        rho: vec![("a".into(), "t".into()), ("c".into(), "g".into())],
        axioms: vec![(s(&["a"]), s(&["t"]))],
        dominoes: vec![
            (true, s(&["a"])),
            (false, s(&["t"])),
            (true, s(&["c"])),
            (false, s(&["g"])),
        ],
    }
}

pub fn go(grammar: Grammar, spec: &ObserverSpec) -> GoSystem {
    GoSystem::with_spec(grammar, spec).expect("observer compiles")
}

pub fn sticker(text: &StickerText, spec: &ObserverSpec) -> ObservableStickerSystem {
    ObservableStickerSystem::with_spec(text.build(), spec).expect("observer compiles")
}

/// Renders a word with `!` for bottom, one output letter name per symbol.
pub fn render(output: &Alphabet, w: &Word) -> String {
    w.0.iter()
        .map(|o| match o {
            OutputSymbol::Letter(s) => output.name(*s).to_string(),
            OutputSymbol::Bottom => "!".to_string(),
            OutputSymbol::Lambda => String::new(),
        })
        .collect()
}

/// A random word of `re`'s language, or `None` past `max_len`.
pub fn sample_regex(rng: &mut StdRng, re: &Regex, max_len: usize) -> Option<Vec<Symbol>> {
    fn go(rng: &mut StdRng, re: &Regex, out: &mut Vec<Symbol>, max_len: usize) -> bool {
        if out.len() > max_len {
            return false;
        }
        match re {
            Regex::Epsilon => true,
            Regex::Symbol(s) => {
                out.push(*s);
                out.len() <= max_len
            }
            Regex::Concat(parts) => parts.iter().all(|p| go(rng, p, out, max_len)),
            Regex::Alt(branches) => {
                let b = rng.gen_range(0..branches.len());
                go(rng, &branches[b], out, max_len)
            }
            Regex::Star(inner) | Regex::Plus(inner) | Regex::Optional(inner) => {
                let min = matches!(re, Regex::Plus(_)) as usize;
                let max = if matches!(re, Regex::Optional(_)) { 1 } else { 4 };
                let reps = rng.gen_range(min..=max);
                (0..reps).all(|_| go(rng, inner, out, max_len))
            }
        }
    }
    let mut out = Vec::new();
    go(rng, re, &mut out, max_len).then_some(out)
}

/// A test word for `spec`: uniform, sampled from a case, or a sampled word
/// with one symbol changed, inserted or removed.
pub fn probe_word(rng: &mut StdRng, spec: &ObserverSpec, symbols: &[Symbol], max_len: usize) -> Vec<Symbol> {
    let uniform = |rng: &mut StdRng| -> Vec<Symbol> {
        let len = rng.gen_range(0..=max_len);
        (0..len).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect()
    };
    if spec.cases.is_empty() || rng.gen_bool(1.0 / 3.0) {
        return uniform(rng);
    }
    let case = &spec.cases[rng.gen_range(0..spec.cases.len())];
    let Some(mut w) = sample_regex(rng, &case.pattern, max_len) else {
        return uniform(rng);
    };
    if rng.gen_bool(0.5) {
        let s = symbols[rng.gen_range(0..symbols.len())];
        match rng.gen_range(0..3) {
            0 if !w.is_empty() => {
                let i = rng.gen_range(0..w.len());
                w[i] = s;
            }
            1 if w.len() < max_len => w.insert(rng.gen_range(0..=w.len()), s),
            _ if !w.is_empty() => {
                w.remove(rng.gen_range(0..w.len()));
            }
            _ => {}
        }
    }
    w
}
