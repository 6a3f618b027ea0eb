//! Text format for observed systems.
//!
//! ```text
//! # comments run to the end of the line
//! [grammar]
//! nonterminals: S A
//! terminals: a
//! start: S
//! rules:
//!   S -> a S
//!   S -> ~
//! [observer]
//! output: x
//! cases:
//!   S => ~
//!   a* S? => x
//!   _ => !
//! ```
//!
//! A file has exactly one basic-system section, `[grammar]` or `[sticker]`,
//! and one `[observer]` section. A sticker section has the keys `alphabet:`,
//! `rho:` (pairs `a~t`), `axioms:` (`upper/lower`, `-` for an empty strand)
//! and `dominoes:` (`x/-` or `-/x`). Sticker observer patterns use the
//! double symbols `[a/t]`, `[a/-]` and `[-/t]`. In observer outputs `~` is
//! the empty word and `!` is `⊥`; the last case must be the catch-all `_`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::go::GoSystem;
use crate::grammar::{Grammar, Rule};
use crate::observer::{parse_output, ObserverSpec, PatternCase};
use crate::regex::Regex;
use crate::sticker::{parse_molecule, parse_single_strand, Complementarity, ObservableStickerSystem, StickerSystem};
use crate::symbol::{validate_name, Alphabet, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl fmt::Display) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasicDescription {
    Grammar(Grammar),
    Sticker(StickerSystem),
}

/// A validated system file before the observer is compiled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDescription {
    pub basic: BasicDescription,
    pub observer: ObserverSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum System {
    Go(GoSystem),
    Sticker(ObservableStickerSystem),
}

impl SystemDescription {
    /// The alphabet the observer reads: `N ∪ T` or `V_d`.
    pub fn observer_input(&self) -> Alphabet {
        match &self.basic {
            BasicDescription::Grammar(g) => g.alphabet().clone(),
            BasicDescription::Sticker(s) => s.double_alphabet(),
        }
    }

    pub fn build(&self) -> Result<System, FormatError> {
        // all references were resolved while parsing, so failures here are
        // internal inconsistencies rather than user errors
        let fail = |e: &dyn fmt::Display| FormatError {
            line: 0,
            message: e.to_string(),
        };
        Ok(match &self.basic {
            BasicDescription::Grammar(g) => {
                System::Go(GoSystem::with_spec(g.clone(), &self.observer).map_err(|e| fail(&e))?)
            }
            BasicDescription::Sticker(s) => {
                System::Sticker(ObservableStickerSystem::with_spec(s.clone(), &self.observer).map_err(|e| fail(&e))?)
            }
        })
    }
}

pub fn parse_system(text: &str) -> Result<System, FormatError> {
    parse_description(text)?.build()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SectionKind {
    Grammar,
    Sticker,
    Observer,
}

impl SectionKind {
    fn keys(self) -> &'static [&'static str] {
        match self {
            SectionKind::Grammar => &["nonterminals", "terminals", "start", "rules"],
            SectionKind::Sticker => &["alphabet", "rho", "axioms", "dominoes"],
            SectionKind::Observer => &["output", "cases"],
        }
    }

    /// Keys whose entries are whole lines rather than tokens.
    fn line_keys(self) -> &'static [&'static str] {
        match self {
            SectionKind::Grammar => &["rules"],
            SectionKind::Observer => &["cases"],
            SectionKind::Sticker => &[],
        }
    }
}

/// An entry (token or line) with the line it came from.
type Item = (usize, String);

struct Section {
    kind: SectionKind,
    line: usize,
    fields: HashMap<&'static str, (usize, Vec<Item>)>,
}

impl Section {
    fn field(&self, key: &str, last_line: usize) -> Result<&(usize, Vec<Item>), FormatError> {
        match self.fields.get(key) {
            Some(f) => Ok(f),
            None => err(
                last_line.max(self.line),
                format!("section [{}] is missing `{key}:`", self.name()),
            ),
        }
    }

    fn name(&self) -> &'static str {
        match self.kind {
            SectionKind::Grammar => "grammar",
            SectionKind::Sticker => "sticker",
            SectionKind::Observer => "observer",
        }
    }
}

fn section_header(line: &str) -> Option<&str> {
    let inner = line.strip_prefix('[')?.strip_suffix(']')?;
    inner
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_')
        .then_some(inner)
}

fn split_sections(text: &str) -> Result<(Vec<Section>, usize), FormatError> {
    let mut sections: Vec<Section> = Vec::new();
    let mut current_key: Option<&'static str> = None;
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = section_header(line) {
            let kind = match name {
                "grammar" => SectionKind::Grammar,
                "sticker" => SectionKind::Sticker,
                "observer" => SectionKind::Observer,
                other => return err(line_no, format!("unknown section [{other}]")),
            };
            sections.push(Section {
                kind,
                line: line_no,
                fields: HashMap::new(),
            });
            current_key = None;
            continue;
        }
        let Some(section) = sections.last_mut() else {
            return err(line_no, "expected a section header such as [grammar]");
        };
        let mut body = line;
        if let Some((key, rest)) = line.split_once(':') {
            let key = key.trim();
            if !key.is_empty() && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                let Some(&known) = section.kind.keys().iter().find(|k| **k == key) else {
                    return err(line_no, format!("unknown key `{key}` in [{}]", section.name()));
                };
                if section.fields.contains_key(known) {
                    return err(line_no, format!("`{known}:` given twice"));
                }
                section.fields.insert(known, (line_no, Vec::new()));
                current_key = Some(known);
                body = rest.trim();
                if body.is_empty() {
                    continue;
                }
            }
        }
        let Some(key) = current_key else {
            return err(line_no, format!("expected a key in [{}]", section.name()));
        };
        let items = &mut section.fields.get_mut(key).unwrap().1;
        if section.kind.line_keys().contains(&key) {
            items.push((line_no, body.to_string()));
        } else {
            items.extend(
                body.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| (line_no, t.to_string())),
            );
        }
    }
    Ok((sections, last_line))
}

/// Parses and validates a system file without compiling the observer.
pub fn parse_description(text: &str) -> Result<SystemDescription, FormatError> {
    let (sections, last_line) = split_sections(text)?;
    let mut basic: Option<&Section> = None;
    let mut observer: Option<&Section> = None;
    for s in &sections {
        let slot = match s.kind {
            SectionKind::Observer => &mut observer,
            _ => &mut basic,
        };
        if slot.is_some() {
            let what = if s.kind == SectionKind::Observer {
                "a second [observer] section"
            } else {
                "a second basic-system section ([grammar] or [sticker])"
            };
            return err(s.line, what);
        }
        *slot = Some(s);
    }
    let Some(basic) = basic else {
        return err(last_line, "missing [grammar] or [sticker] section");
    };
    let Some(observer) = observer else {
        return err(last_line, "missing [observer] section");
    };

    let basic = match basic.kind {
        SectionKind::Grammar => BasicDescription::Grammar(parse_grammar(basic, last_line)?),
        _ => BasicDescription::Sticker(parse_sticker(basic, last_line)?),
    };
    let input = match &basic {
        BasicDescription::Grammar(g) => g.alphabet().clone(),
        BasicDescription::Sticker(s) => s.double_alphabet(),
    };
    let observer = parse_observer(observer, &input, last_line)?;
    Ok(SystemDescription { basic, observer })
}

fn declare(alphabet: &mut Alphabet, (line, name): &Item) -> Result<Symbol, FormatError> {
    if let Err(e) = validate_name(name) {
        return err(*line, e);
    }
    if alphabet.get(name).is_some() {
        return err(*line, format!("symbol `{name}` declared twice"));
    }
    alphabet.insert(name.as_str()).or_else(|e| err(*line, e))
}

fn lookup(alphabet: &Alphabet, line: usize, name: &str) -> Result<Symbol, FormatError> {
    alphabet
        .get(name)
        .map_or_else(|| err(line, format!("undeclared symbol `{name}`")), Ok)
}

fn parse_grammar(s: &Section, last_line: usize) -> Result<Grammar, FormatError> {
    let mut alphabet = Alphabet::new();
    let nonterminals = &s.field("nonterminals", last_line)?.1;
    for item in nonterminals {
        declare(&mut alphabet, item)?;
    }
    for item in &s.field("terminals", last_line)?.1 {
        if alphabet
            .get(&item.1)
            .is_some_and(|sym| sym.index() < nonterminals.len())
        {
            return err(item.0, format!("`{}` is both a nonterminal and a terminal", item.1));
        }
        declare(&mut alphabet, item)?;
    }
    let (start_line, start) = s.field("start", last_line)?;
    let start = match start.as_slice() {
        [(line, name)] => {
            let sym = lookup(&alphabet, *line, name)?;
            if sym.index() >= nonterminals.len() {
                return err(*line, format!("start symbol `{name}` is not a nonterminal"));
            }
            sym
        }
        _ => return err(*start_line, "`start:` takes exactly one symbol"),
    };

    let mut rules: Vec<Rule> = Vec::new();
    for (line, text) in &s.field("rules", last_line)?.1 {
        let Some((lhs, rhs)) = text.split_once("->") else {
            return err(*line, format!("expected `X -> ...`, found `{text}`"));
        };
        let lhs_tokens: Vec<&str> = lhs.split_whitespace().collect();
        let [lhs] = lhs_tokens.as_slice() else {
            return err(*line, "a rule needs exactly one symbol on its left side");
        };
        let lhs = lookup(&alphabet, *line, lhs)?;
        if lhs.index() >= nonterminals.len() {
            return err(
                *line,
                format!("left side `{}` is not a nonterminal", alphabet.name(lhs)),
            );
        }
        let rhs_tokens: Vec<&str> = rhs.split_whitespace().collect();
        let rhs = match rhs_tokens.as_slice() {
            [] => return err(*line, "empty right side; write `~` for the empty word"),
            ["~"] => Vec::new(),
            tokens => tokens
                .iter()
                .map(|t| lookup(&alphabet, *line, t))
                .collect::<Result<_, _>>()?,
        };
        let rule = Rule { lhs, rhs };
        if rules.contains(&rule) {
            return err(*line, "duplicate rule");
        }
        rules.push(rule);
    }
    Grammar::from_parts(alphabet, nonterminals.len(), start, rules).or_else(|e| err(s.line, e))
}

fn parse_sticker(s: &Section, last_line: usize) -> Result<StickerSystem, FormatError> {
    let mut alphabet = Alphabet::new();
    for item in &s.field("alphabet", last_line)?.1 {
        declare(&mut alphabet, item)?;
    }
    let mut pairs = Vec::new();
    for (line, text) in &s.field("rho", last_line)?.1 {
        let Some((a, b)) = text.split_once('~') else {
            return err(*line, format!("expected a pair like `a~t`, found `{text}`"));
        };
        pairs.push((lookup(&alphabet, *line, a)?, lookup(&alphabet, *line, b)?));
    }
    let rho = Complementarity::new(alphabet.len(), &pairs).or_else(|e| err(s.line, e))?;
    let axioms = s
        .field("axioms", last_line)?
        .1
        .iter()
        .map(|(line, text)| parse_molecule(&alphabet, &rho, text).or_else(|e| err(*line, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut dominoes = Vec::new();
    for (line, text) in &s.field("dominoes", last_line)?.1 {
        let d = parse_single_strand(&alphabet, text).or_else(|e| err(*line, e))?;
        if dominoes.contains(&d) {
            return err(*line, format!("duplicate domino `{text}`"));
        }
        dominoes.push(d);
    }
    StickerSystem::new(alphabet, rho, axioms, dominoes).or_else(|e| err(s.line, e))
}

fn parse_observer(s: &Section, input: &Alphabet, last_line: usize) -> Result<ObserverSpec, FormatError> {
    let mut output = Alphabet::new();
    for item in &s.field("output", last_line)?.1 {
        declare(&mut output, item)?;
    }
    let (cases_line, items) = s.field("cases", last_line)?;
    let mut cases = Vec::new();
    let mut default = None;
    for (line, text) in items {
        if default.is_some() {
            return err(*line, "the catch-all `_ => ...` must be the last case");
        }
        let Some((pattern, out)) = text.rsplit_once("=>") else {
            return err(*line, format!("expected `PATTERN => OUTPUT`, found `{text}`"));
        };
        let out = out.trim();
        let out = parse_output(&output, out).or_else(|e| err(*line, e))?;
        let pattern = pattern.trim();
        if pattern == "_" {
            default = Some(out);
            continue;
        }
        let pattern = Regex::parse(pattern, |n| input.get(n)).or_else(|e| err(*line, format!("pattern {e}")))?;
        cases.push(PatternCase { pattern, output: out });
    }
    let Some(default) = default else {
        return err(
            items.last().map_or(*cases_line, |(l, _)| *l),
            "observer incomplete: add a final catch-all `_ => OUTPUT`",
        );
    };
    Ok(ObserverSpec { output, cases, default })
}

/// Renders a description in canonical form; parsing the result yields an
/// equal description.
pub fn print_system(desc: &SystemDescription) -> String {
    let mut out = String::new();
    let join = |names: &mut dyn Iterator<Item = String>| names.collect::<Vec<_>>().join(" ");
    match &desc.basic {
        BasicDescription::Grammar(g) => {
            let a = g.alphabet();
            let names = |it: &mut dyn Iterator<Item = Symbol>| join(&mut it.map(|s| a.name(s).to_string()));
            out.push_str("[grammar]\n");
            let _ = writeln!(out, "nonterminals: {}", names(&mut g.nonterminals()));
            let _ = writeln!(out, "terminals: {}", names(&mut g.terminals()));
            let _ = writeln!(out, "start: {}", a.name(g.start()));
            out.push_str("rules:\n");
            for r in g.rules() {
                let _ = writeln!(out, "  {}", g.render_rule(r));
            }
        }
        BasicDescription::Sticker(s) => {
            let a = s.alphabet();
            out.push_str("[sticker]\n");
            let _ = writeln!(out, "alphabet: {}", a);
            let rho = join(
                &mut s
                    .rho()
                    .pairs()
                    .filter(|(x, y)| x <= y)
                    .map(|(x, y)| format!("{}~{}", a.name(x), a.name(y))),
            );
            let _ = writeln!(out, "rho: {rho}");
            let _ = writeln!(out, "axioms: {}", join(&mut s.axioms().iter().map(|m| m.render(a))));
            let _ = writeln!(out, "dominoes: {}", join(&mut s.dominoes().iter().map(|d| d.render(a))));
        }
    }
    let input = desc.observer_input();
    let spec = &desc.observer;
    out.push_str("[observer]\n");
    let _ = writeln!(out, "output: {}", spec.output);
    out.push_str("cases:\n");
    for c in &spec.cases {
        let _ = writeln!(
            out,
            "  {} => {}",
            c.pattern.display(|s| input.name(s)),
            spec.render_output(c.output)
        );
    }
    let _ = writeln!(out, "  _ => {}", spec.render_output(spec.default));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    const ABC: &str = "\
# the example grammar with the abc observer
[grammar]
nonterminals: S A B C
terminals: t p
start: S
rules:
  S -> p S
  S -> p
  S -> A
  A -> A B
  A -> C
  B -> C
  C -> t
[observer]
output: a b c
cases:
  S => ~
  A B* => a
  C+ B* => b
  t+ C* => c
  _ => !
";

    const MARKERS: &str = "\
[sticker]
alphabet: a c g t
rho: a~t c~g
axioms: a/t
dominoes: a/- -/t c/- -/g
[observer]
output: b d
cases:
  [a/t]* ([a/-]* | [-/t]*) => b
  [a/t]* ([a/-]* [c/-] | [-/t]* [-/g]) => d
  _ => ~
";

    fn line_of(text: &str) -> usize {
        parse_description(text).unwrap_err().line
    }

    #[test]
    fn parses_go_example() {
        let System::Go(sys) = parse_system(ABC).unwrap() else {
            panic!("expected a grammar system");
        };
        assert_eq!(sys, examples::abc_system());
    }

    #[test]
    fn parses_sticker_example() {
        let System::Sticker(markers) = parse_system(MARKERS).unwrap() else {
            panic!("expected a sticker system");
        };
        assert_eq!(markers, examples::marker_system());
    }

    #[test]
    fn rho_listed_in_one_direction_is_closed() {
        let text = MARKERS.replace("rho: a~t c~g", "rho: t~a\n  g~c");
        let desc = parse_description(&text).unwrap();
        assert_eq!(desc, parse_description(MARKERS).unwrap());
    }

    #[test]
    fn printed_form_round_trips() {
        for text in [ABC, MARKERS] {
            let desc = parse_description(text).unwrap();
            let printed = print_system(&desc);
            assert_eq!(parse_description(&printed).unwrap(), desc, "{printed}");
        }
    }

    #[test]
    fn missing_catch_all() {
        let text = ABC.replace("  _ => !\n", "");
        let e = parse_description(&text).unwrap_err();
        assert!(e.message.contains("observer incomplete"), "{e}");
        assert_eq!(e.line, 20);
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(line_of(&ABC.replace("C -> t", "C -> q")), 13);
        assert_eq!(line_of(&ABC.replace("terminals: t p", "terminals: t S")), 4);
        assert_eq!(line_of(&ABC.replace("  C -> t", "  C -> t\n  C -> t")), 14);
        assert_eq!(line_of(&ABC.replace("  A B* => a", "  A D* => a")), 18);
        assert_eq!(line_of(&ABC.replace("  t+ C* => c", "  _ => c\n  t+ C* => c")), 21);
        assert_eq!(line_of(&format!("{ABC}[observer]\noutput:\ncases:\n _ => !\n")), 22);
        assert_eq!(line_of(&MARKERS.replace("a~t", "a~u")), 3);
        assert_eq!(line_of(&MARKERS.replace("axioms: a/t", "axioms: a/g")), 4);
        assert_eq!(line_of(&MARKERS.replace("-/g\n", "-/q\n")), 5);
        assert_eq!(line_of("nonterminals: S"), 1);
        assert_eq!(line_of("[grammar]\n[bogus]"), 2);
        assert_eq!(line_of("[grammar]\nfoo: x"), 2);
        let no_observer = ABC.split("[observer]").next().unwrap();
        assert!(parse_description(no_observer)
            .unwrap_err()
            .message
            .contains("missing [observer]"));
    }

    #[test]
    fn erasing_rule_and_multichar_names() {
        let text = "\
[grammar]
nonterminals: Expr Tail
terminals: num
start: Expr
rules:
  Expr -> num Tail
  Tail -> ~
[observer]
output: go stop
cases:
  Expr => go
  num Tail? => stop
  _ => !
";
        let desc = parse_description(text).unwrap();
        let BasicDescription::Grammar(g) = &desc.basic else {
            panic!()
        };
        assert!(g.rules()[1].rhs.is_empty());
        assert_eq!(parse_description(&print_system(&desc)).unwrap(), desc);
    }
}
