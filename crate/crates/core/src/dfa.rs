//! Thompson construction and subset construction for [`Regex`].

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::regex::Regex;
use crate::symbol::Symbol;

#[derive(Default)]
struct Nfa {
    eps: Vec<Vec<usize>>,
    moves: Vec<Vec<(Symbol, usize)>>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.moves.push(Vec::new());
        self.eps.len() - 1
    }

    /// Returns the (entry, exit) states of a fragment for `re`.
    fn build(&mut self, re: &Regex) -> (usize, usize) {
        match re {
            Regex::Epsilon => {
                let s = self.state();
                (s, s)
            }
            Regex::Symbol(sym) => {
                let (s, e) = (self.state(), self.state());
                self.moves[s].push((*sym, e));
                (s, e)
            }
            Regex::Concat(parts) => {
                let (first, mut last) = self.build(&parts[0]);
                for p in &parts[1..] {
                    let (s, e) = self.build(p);
                    self.eps[last].push(s);
                    last = e;
                }
                (first, last)
            }
            Regex::Alt(branches) => {
                let (s, e) = (self.state(), self.state());
                for b in branches {
                    let (bs, be) = self.build(b);
                    self.eps[s].push(bs);
                    self.eps[be].push(e);
                }
                (s, e)
            }
            Regex::Star(inner) | Regex::Plus(inner) | Regex::Optional(inner) => {
                let (s, e) = (self.state(), self.state());
                let (is, ie) = self.build(inner);
                self.eps[s].push(is);
                self.eps[ie].push(e);
                if !matches!(re, Regex::Plus(_)) {
                    self.eps[s].push(e);
                }
                if !matches!(re, Regex::Optional(_)) {
                    self.eps[ie].push(is);
                }
                (s, e)
            }
        }
    }

    fn closure(&self, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        let mut stack: Vec<usize> = seeds.into_iter().collect();
        while let Some(s) = stack.pop() {
            if set.insert(s) {
                stack.extend(self.eps[s].iter().copied());
            }
        }
        set
    }
}

/// A complete DFA over symbols `0..num_symbols`. State 0 is initial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Dfa {
    pub num_symbols: usize,
    pub next: Vec<usize>,
    pub accepting: Vec<bool>,
}

impl Dfa {
    /// Subset construction. Symbols outside `0..num_symbols` must not occur
    /// in `re`.
    pub fn from_regex(re: &Regex, num_symbols: usize) -> Dfa {
        let mut nfa = Nfa::default();
        let (start, accept) = nfa.build(re);

        let init = nfa.closure([start]);
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut sets = vec![init.clone()];
        ids.insert(init, 0);
        let mut next = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let mut row = vec![0usize; num_symbols];
            for (sym, slot) in row.iter_mut().enumerate() {
                let targets = sets[id].iter().flat_map(|&q| {
                    nfa.moves[q]
                        .iter()
                        .filter(move |(s, _)| s.index() == sym)
                        .map(|&(_, t)| t)
                });
                let target = nfa.closure(targets);
                *slot = *ids.entry(target.clone()).or_insert_with(|| {
                    sets.push(target);
                    queue.push_back(sets.len() - 1);
                    sets.len() - 1
                });
            }
            // states are numbered in BFS order, so rows arrive in order
            debug_assert_eq!(next.len(), id * num_symbols);
            next.extend(row);
        }
        let accepting = sets.iter().map(|s| s.contains(&accept)).collect();
        Dfa {
            num_symbols,
            next,
            accepting,
        }
    }

    #[cfg(test)]
    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    #[inline]
    pub fn step(&self, state: usize, sym: usize) -> usize {
        self.next[state * self.num_symbols + sym]
    }

    #[cfg(test)]
    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let end = word.iter().fold(0, |q, s| self.step(q, s.index()));
        self.accepting[end]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(i: u32) -> Regex {
        Regex::Symbol(Symbol(i))
    }

    fn w(s: &[u32]) -> Vec<Symbol> {
        s.iter().map(|&i| Symbol(i)).collect()
    }

    #[test]
    fn star_plus_optional() {
        let star = Dfa::from_regex(&Regex::Star(Box::new(sym(0))), 2);
        assert!(star.accepts(&w(&[])));
        assert!(star.accepts(&w(&[0, 0, 0])));
        assert!(!star.accepts(&w(&[0, 1])));

        let plus = Dfa::from_regex(&Regex::Plus(Box::new(sym(0))), 2);
        assert!(!plus.accepts(&w(&[])));
        assert!(plus.accepts(&w(&[0])));

        let opt = Dfa::from_regex(&Regex::Optional(Box::new(sym(1))), 2);
        assert!(opt.accepts(&w(&[])));
        assert!(opt.accepts(&w(&[1])));
        assert!(!opt.accepts(&w(&[1, 1])));
    }

    #[test]
    fn dfa_is_complete() {
        let re = Regex::Concat(vec![sym(0), Regex::Alt(vec![sym(1), sym(2)])]);
        let dfa = Dfa::from_regex(&re, 3);
        assert_eq!(dfa.next.len(), dfa.num_states() * 3);
        assert!(dfa.next.iter().all(|&t| t < dfa.num_states()));
        assert!(dfa.accepts(&w(&[0, 2])));
        assert!(!dfa.accepts(&w(&[0])));
        assert!(!dfa.accepts(&w(&[1, 2])));
    }
}
