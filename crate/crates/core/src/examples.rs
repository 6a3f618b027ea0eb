//! Worked example systems.
//!
//! * [`example_grammar`]: `S -> pS | p | A`, `A -> AB | C`, `B -> C`, `C -> t`.
//! * [`a_per_form_system`]: the example grammar observed by a transducer
//!   mapping every nonempty form to `a`; its filtered language is
//!   `{aⁱ | i ≥ 2}`.
//! * [`abc_system`]: the example grammar observed so that the filtered
//!   language is `{aⁿbⁿcⁿ | n > 0}`.
//! * [`marker_system`]: a simple regular sticker system over `{a, c, g, t}`
//!   where `c` and `g` act as markers. Its observed words have the shape
//!   `bᵐdⁿ` with `m ≥ n` and `m ≥ 1`; a complete molecule without a marker
//!   is itself observed as `b`, so `m` is odd when `n = 0`.
//!
//! The same systems ship as text files under `systems/` in the repository.

use crate::go::GoSystem;
use crate::grammar::Grammar;
use crate::observer::ObserverSpec;
use crate::sticker::{ObservableStickerSystem, StickerSystem};

pub fn example_grammar() -> Grammar {
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
    .expect("example grammar is well-formed")
}

pub fn a_per_form_observer() -> ObserverSpec {
    let g = example_grammar();
    ObserverSpec::from_text(&["a"], &[("(S | A | B | C | t | p)+", "a")], "!", g.alphabet())
        .expect("example observer is well-formed")
}

pub fn abc_observer() -> ObserverSpec {
    let g = example_grammar();
    ObserverSpec::from_text(
        &["a", "b", "c"],
        &[("S", "~"), ("A B*", "a"), ("C+ B*", "b"), ("t+ C*", "c")],
        "!",
        g.alphabet(),
    )
    .expect("example observer is well-formed")
}

pub fn a_per_form_system() -> GoSystem {
    GoSystem::with_spec(example_grammar(), &a_per_form_observer()).expect("alphabets agree")
}

pub fn abc_system() -> GoSystem {
    GoSystem::with_spec(example_grammar(), &abc_observer()).expect("alphabets agree")
}

pub fn marker_sticker_system() -> StickerSystem {
    StickerSystem::from_text(
        &["a", "c", "g", "t"],
        &["a~t", "c~g"],
        &["a/t"],
        &["a/-", "-/t", "c/-", "-/g"],
    )
    .expect("example sticker system is well-formed")
}

pub fn marker_observer() -> ObserverSpec {
    let base = marker_sticker_system();
    ObserverSpec::from_text(
        &["b", "d"],
        &[
            ("[a/t]* ([a/-]* | [-/t]*)", "b"),
            ("[a/t]* ([a/-]* [c/-] | [-/t]* [-/g])", "d"),
        ],
        "~",
        &base.double_alphabet(),
    )
    .expect("example observer is well-formed")
}

pub fn marker_system() -> ObservableStickerSystem {
    ObservableStickerSystem::with_spec(marker_sticker_system(), &marker_observer()).expect("alphabets agree")
}
