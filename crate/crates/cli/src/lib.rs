//! Command-line front end: `enumerate`, `member`, `trace` and `lint` over a
//! system file.
//!
//! Word lists and tables go to the output stream; summaries and errors go to
//! the diagnostic stream. Exit codes: 0 success, 1 word not found within
//! bounds, 2 usage, parse or validation error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use observed::{
    parse_description, ComputationBounds, EnumerationBounds, GoSystem, Membership, Mode, ObservableStickerSystem,
    ObservedLanguage, StickerMembership, SystemDescription, Word,
};

#[derive(Parser, Debug)]
#[command(name = "observed", version, about = "Enumerate and query observed languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the observed words of all terminating evolutions within bounds.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        mode: ModeArgs,
        /// Worker threads for the search.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
    },
    /// Search for an evolution observed as exactly WORD.
    Member {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bounds: Bounds,
        /// Target word over the output alphabet, `~` for the empty word.
        #[arg(long)]
        word: String,
    },
    /// Replay an evolution and print the observation table.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Grammar: `RULE@POS ...` or `S=>A=>C=>t`. Sticker: `[@AXIOM] DOMINO ...`.
        #[arg(long)]
        replay: String,
    },
    /// Report observer cases that overlap.
    Lint {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// System file.
    #[arg(long)]
    system: PathBuf,
}

#[derive(Args, Debug)]
struct Bounds {
    /// Maximum number of derivation or sticking steps.
    #[arg(long)]
    max_steps: usize,
    /// Maximum sentential form length (grammar systems only).
    #[arg(long)]
    max_form_len: Option<usize>,
    /// Maximum output length (grammar systems only).
    #[arg(long)]
    max_output_len: Option<usize>,
}

#[derive(Args, Debug)]
struct ModeArgs {
    /// Drop every word containing `!`.
    #[arg(long, conflicts_with = "mode")]
    filter_bottom: bool,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Free,
    Filtered,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        match (self.filter_bottom, self.mode) {
            (true, _) | (_, Some(ModeArg::Filtered)) => Mode::BottomFiltered,
            _ => Mode::Free,
        }
    }
}

/// A failure that ends the run with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn load(common: &Common) -> Result<SystemDescription, Failure> {
    let path = common.system.display();
    let text = std::fs::read_to_string(&common.system).map_err(|e| Failure(format!("{path}: {e}")))?;
    parse_description(&text).map_err(|e| Failure(format!("{path}: {e}")))
}

enum Loaded {
    Go(GoSystem),
    Sticker(ObservableStickerSystem),
}

fn build(desc: &SystemDescription) -> Result<Loaded, Failure> {
    Ok(match desc.build()? {
        observed::System::Go(g) => Loaded::Go(g),
        observed::System::Sticker(s) => Loaded::Sticker(s),
    })
}

fn sticker_bounds(b: &Bounds) -> Result<ComputationBounds, Failure> {
    if b.max_form_len.is_some() || b.max_output_len.is_some() {
        return Err(Failure(
            "--max-form-len and --max-output-len apply to grammar systems only".into(),
        ));
    }
    if b.max_steps == 0 {
        return Err(Failure("max_steps must be at least 1".into()));
    }
    Ok(ComputationBounds { max_steps: b.max_steps })
}

fn go_bounds(b: &Bounds) -> EnumerationBounds {
    EnumerationBounds {
        max_steps: b.max_steps,
        max_form_len: b.max_form_len,
        max_output_len: b.max_output_len,
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Enumerate {
            common,
            bounds,
            mode,
            jobs,
        } => {
            let desc = load(&common)?;
            let jobs = jobs as usize;
            let (lang, lines): (ObservedLanguage, Vec<String>) = match build(&desc)? {
                Loaded::Go(sys) => {
                    let lang = sys.enumerate_with_jobs(go_bounds(&bounds), mode.mode(), jobs)?;
                    let lines = lang.words.iter().map(|w| sys.observer().render_word(w)).collect();
                    (lang, lines)
                }
                Loaded::Sticker(sys) => {
                    let lang = sys.enumerate_with_jobs(sticker_bounds(&bounds)?, mode.mode(), jobs);
                    let lines = lang.words.iter().map(|w| sys.observer().render_word(w)).collect();
                    (lang, lines)
                }
            };
            for line in &lines {
                writeln!(out, "{line}")?;
            }
            let s = &lang.stats;
            writeln!(
                err,
                "words: {}, exhausted: {}, forms_explored: {}, max_nonterminals_seen: {}, depth_limited: {}",
                lang.words.len(),
                lang.exhausted,
                s.forms_explored,
                s.max_nonterminals_seen,
                s.depth_limited
            )?;
            Ok(0)
        }
        Command::Member { common, bounds, word } => {
            let desc = load(&common)?;
            match build(&desc)? {
                Loaded::Go(sys) => {
                    let target = sys.observer().parse_word(&word)?;
                    match sys.member(&target, go_bounds(&bounds))? {
                        Membership::Found(apps) => {
                            let g = sys.grammar();
                            let chain: Vec<String> = sys.replay(&apps)?.iter().map(|f| g.render_form(f)).collect();
                            writeln!(out, "{}", chain.join("=>"))?;
                            let script: Vec<String> = apps.iter().map(|a| a.to_string()).collect();
                            writeln!(out, "replay: {}", script.join(" "))?;
                            Ok(0)
                        }
                        Membership::NotFoundWithinBounds => not_found(err, &word),
                    }
                }
                Loaded::Sticker(sys) => {
                    let target = sys.observer().parse_word(&word)?;
                    match sys.member(&target, sticker_bounds(&bounds)?)? {
                        StickerMembership::Found { axiom, dominoes } => {
                            let st = sys.system();
                            let rows = sys.trace(axiom, &dominoes)?;
                            let chain: Vec<String> = rows.iter().map(|r| st.render_molecule(&r.molecule)).collect();
                            writeln!(out, "{}", chain.join("=>"))?;
                            let mut script = vec![format!("@{}", st.render_molecule(&st.axioms()[axiom]))];
                            script.extend(dominoes.iter().map(|&d| st.dominoes()[d].render(st.alphabet())));
                            writeln!(out, "replay: {}", script.join(" "))?;
                            Ok(0)
                        }
                        StickerMembership::NotFoundWithinBounds => not_found(err, &word),
                    }
                }
            }
        }
        Command::Trace { common, replay } => {
            let desc = load(&common)?;
            let mut emitted = Word::new();
            match build(&desc)? {
                Loaded::Go(sys) => {
                    let g = sys.grammar();
                    let rows = sys.trace(&sys.parse_replay(&replay)?)?;
                    writeln!(out, "step\trule\tform\toutput")?;
                    for r in &rows {
                        let applied = match r.applied {
                            Some(app) => format!("{} ({})", app, g.render_rule(&g.rules()[app.rule])),
                            None => "-".to_string(),
                        };
                        let o = sys.observer().render_output(r.emitted);
                        writeln!(out, "{}\t{}\t{}\t{}", r.step, applied, g.render_form(&r.form), o)?;
                        emitted.push(r.emitted);
                    }
                    writeln!(out, "output: {}", sys.observer().render_word(&emitted))?;
                }
                Loaded::Sticker(sys) => {
                    let st = sys.system();
                    let (axiom, dominoes) = sys.parse_replay(&replay)?;
                    let rows = sys.trace(axiom, &dominoes)?;
                    writeln!(out, "step\tadded\tmolecule\toutput")?;
                    for r in &rows {
                        let added = match r.added {
                            Some(d) => st.dominoes()[d].render(st.alphabet()),
                            None => "-".to_string(),
                        };
                        let o = sys.observer().render_output(r.emitted);
                        writeln!(out, "{}\t{}\t{}\t{}", r.step, added, st.render_molecule(&r.molecule), o)?;
                        emitted.push(r.emitted);
                    }
                    writeln!(out, "output: {}", sys.observer().render_word(&emitted))?;
                }
            }
            Ok(0)
        }
        Command::Lint { common } => {
            let desc = load(&common)?;
            let input = desc.observer_input();
            let warnings = desc.observer.lint_disjointness(&input)?;
            for w in &warnings {
                writeln!(out, "warning: {}", w.render(&input))?;
            }
            writeln!(err, "{} overlap warning(s)", warnings.len())?;
            Ok(0)
        }
    }
}

fn not_found(err: &mut dyn Write, word: &str) -> Outcome {
    writeln!(err, "`{word}` not found within bounds")?;
    Ok(1)
}
