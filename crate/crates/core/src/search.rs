//! Bounded breadth-first exploration of observed evolutions.
//!
//! A search node is a pair (configuration, output emitted so far). Two nodes
//! that agree on both have identical futures, so only the first arrival,
//! which in breadth-first order is the shallowest, is expanded. Deduplicating
//! on the configuration alone would be unsound because the output depends on
//! the path taken.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::Hash;

use rayon::prelude::*;

use crate::observer::{OutputSymbol, Word};

/// An evolving system whose configurations are read by an observer.
pub trait BasicSystem: Sync {
    type Config: Clone + Eq + Hash + Send + Sync;
    type Step: Copy + Send + Sync;

    /// Configurations an evolution may start from.
    fn initial(&self) -> Vec<Self::Config>;

    fn successors(&self, config: &Self::Config) -> Vec<(Self::Config, Self::Step)>;

    /// Whether an evolution may stop at `config` and contribute its output.
    fn is_final(&self, config: &Self::Config) -> bool;

    fn observe(&self, config: &Self::Config) -> OutputSymbol;

    /// Length measure checked against [`SearchBounds::max_config_len`].
    fn config_len(&self, config: &Self::Config) -> usize;

    /// Diagnostic reported as `max_nonterminals_seen`.
    fn nonterminals(&self, _config: &Self::Config) -> usize {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every output word, including those containing `⊥`.
    Free,
    /// Only words over `Σ`; a branch dies as soon as it emits `⊥`.
    BottomFiltered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Maximum number of evolution steps.
    pub max_steps: usize,
    pub max_config_len: Option<usize>,
    pub max_output_len: Option<usize>,
}

impl SearchBounds {
    pub fn steps(max_steps: usize) -> Self {
        Self {
            max_steps,
            max_config_len: None,
            max_output_len: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Distinct (configuration, output) nodes visited.
    pub forms_explored: usize,
    pub max_nonterminals_seen: usize,
    /// Some node at the step limit still had successors, so longer
    /// evolutions exist that were not explored.
    pub depth_limited: bool,
}

/// Result of a bounded enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservedLanguage {
    /// Sorted length-lexicographically, without duplicates.
    pub words: Vec<Word>,
    /// No branch was cut by the configuration-length or output-length
    /// bound: `words` is exactly the set of outputs of all evolutions with
    /// at most `max_steps` steps.
    pub exhausted: bool,
    pub stats: SearchStats,
}

type Node<C> = (C, Word);

struct Expansion<C> {
    children: Vec<Node<C>>,
    cut: bool,
}

/// Checks a freshly reached node against mode and bounds. `None` drops it;
/// the flag reports whether a bound (rather than `⊥`) dropped it.
fn admit<S: BasicSystem>(
    sys: &S,
    config: S::Config,
    prefix: &Word,
    bounds: &SearchBounds,
    mode: Mode,
) -> (Option<Node<S::Config>>, bool) {
    let emitted = sys.observe(&config);
    if mode == Mode::BottomFiltered && emitted == OutputSymbol::Bottom {
        return (None, false);
    }
    if bounds.max_config_len.is_some_and(|max| sys.config_len(&config) > max) {
        return (None, true);
    }
    let mut out = prefix.clone();
    out.push(emitted);
    if bounds.max_output_len.is_some_and(|max| out.len() > max) {
        return (None, true);
    }
    (Some((config, out)), false)
}

fn expand<S: BasicSystem>(sys: &S, node: &Node<S::Config>, bounds: &SearchBounds, mode: Mode) -> Expansion<S::Config> {
    let succ = sys.successors(&node.0);
    let mut cut = false;
    let mut children = Vec::with_capacity(succ.len());
    for (config, _) in succ {
        let (child, was_cut) = admit(sys, config, &node.1, bounds, mode);
        cut |= was_cut;
        children.extend(child);
    }
    Expansion { children, cut }
}

/// Enumerates the outputs of all final evolutions within `bounds`.
///
/// With `jobs > 1` each breadth-first layer is expanded on a thread pool;
/// children are merged in layer order, so the result does not depend on the
/// number of workers.
pub fn enumerate<S: BasicSystem>(sys: &S, bounds: &SearchBounds, mode: Mode, jobs: usize) -> ObservedLanguage {
    let pool = if jobs > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build().ok()
    } else {
        None
    };

    let mut exhausted = true;
    let mut stats = SearchStats::default();
    let mut words: BTreeSet<Word> = BTreeSet::new();
    let mut visited: HashSet<Node<S::Config>> = HashSet::new();

    let mut layer = Vec::new();
    for config in sys.initial() {
        let (node, cut) = admit(sys, config, &Word::new(), bounds, mode);
        exhausted &= !cut;
        if let Some(node) = node {
            if visited.insert(node.clone()) {
                layer.push(node);
            }
        }
    }

    for depth in 0..=bounds.max_steps {
        for (config, out) in &layer {
            stats.forms_explored += 1;
            stats.max_nonterminals_seen = stats.max_nonterminals_seen.max(sys.nonterminals(config));
            if sys.is_final(config) {
                words.insert(out.clone());
            }
        }
        if depth == bounds.max_steps {
            stats.depth_limited = layer.iter().any(|(c, _)| !sys.successors(c).is_empty());
            break;
        }
        let expansions: Vec<Expansion<S::Config>> = match &pool {
            Some(pool) => pool.install(|| layer.par_iter().map(|n| expand(sys, n, bounds, mode)).collect()),
            None => layer.iter().map(|n| expand(sys, n, bounds, mode)).collect(),
        };
        let mut next = Vec::new();
        for e in expansions {
            exhausted &= !e.cut;
            for child in e.children {
                if !visited.contains(&child) {
                    visited.insert(child.clone());
                    next.push(child);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }

    ObservedLanguage {
        words: words.into_iter().collect(),
        exhausted,
        stats,
    }
}

/// A shortest evolution whose observation is exactly `target`: the index of
/// the initial configuration it starts from and the steps taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<T> {
    pub origin: usize,
    pub steps: Vec<T>,
}

struct ArenaNode<S: BasicSystem> {
    parent: Option<usize>,
    step: Option<S::Step>,
    origin: usize,
}

/// Searches for an evolution observing to `target`.
///
/// `target` must not contain `⊥`; branches are pruned as soon as their output
/// is no longer a prefix of `target`.
pub fn find<S: BasicSystem>(sys: &S, bounds: &SearchBounds, target: &Word) -> Option<Witness<S::Step>> {
    let bounds = SearchBounds {
        max_output_len: Some(target.len()),
        ..*bounds
    };
    let keep = |node: &Node<S::Config>| node.1.is_prefix_of(target);

    let mut arena: Vec<ArenaNode<S>> = Vec::new();
    let mut visited: HashMap<Node<S::Config>, usize> = HashMap::new();
    let mut layer: Vec<usize> = Vec::new();
    let mut nodes: Vec<Node<S::Config>> = Vec::new();

    for (origin, config) in sys.initial().into_iter().enumerate() {
        if let (Some(node), _) = admit(sys, config, &Word::new(), &bounds, Mode::BottomFiltered) {
            if keep(&node) && !visited.contains_key(&node) {
                visited.insert(node.clone(), arena.len());
                layer.push(arena.len());
                arena.push(ArenaNode {
                    parent: None,
                    step: None,
                    origin,
                });
                nodes.push(node);
            }
        }
    }

    for depth in 0..=bounds.max_steps {
        for &id in &layer {
            let (config, out) = &nodes[id];
            if out == target && sys.is_final(config) {
                let mut steps = Vec::new();
                let mut cur = id;
                while let Some(parent) = arena[cur].parent {
                    steps.push(arena[cur].step.expect("non-root node has a step"));
                    cur = parent;
                }
                steps.reverse();
                return Some(Witness {
                    origin: arena[id].origin,
                    steps,
                });
            }
        }
        if depth == bounds.max_steps {
            break;
        }
        let mut next = Vec::new();
        for &id in &layer {
            let succ = sys.successors(&nodes[id].0);
            for (config, step) in succ {
                let (child, _) = admit(sys, config, &nodes[id].1, &bounds, Mode::BottomFiltered);
                let Some(child) = child.filter(|c| keep(c)) else {
                    continue;
                };
                if visited.contains_key(&child) {
                    continue;
                }
                let child_id = arena.len();
                visited.insert(child.clone(), child_id);
                arena.push(ArenaNode {
                    parent: Some(id),
                    step: Some(step),
                    origin: arena[id].origin,
                });
                nodes.push(child);
                next.push(child_id);
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    None
}
