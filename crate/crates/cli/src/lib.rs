//! The `nanophrase` command line: argument parsing and rendering of results.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use nanophrase::{
    build_atlas, canonical_form, classify_with_path, encode, homotopic, parse_etale, parse_phrase, reduce, render,
    signature, validate, Alphabet, ClassLabel, Error, GaussVerdict, HomotopyData, MoveDescriptor, Nanophrase,
    SearchBudget, SignedGaussCode, Verdict, Witness,
};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "nanophrase", version, about = "Homotopy of nanowords and nanophrases")]
pub struct Cli {
    /// `ab-swap` or a file with one `symbol tau(symbol)` pair per line.
    #[arg(long, global = true, default_value = "ab-swap")]
    pub alphabet: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Letters a search may add above the larger input's letter count.
    #[arg(long, global = true, default_value_t = SearchBudget::default().max_extra_letters)]
    pub max_extra_letters: usize,
    /// States (up to isomorphism) a search may discover.
    #[arg(long, global = true, default_value_t = SearchBudget::default().max_states)]
    pub max_states: usize,
    #[command(subcommand)]
    pub command: Command,
}

/// Phrase arguments are read from the named file if one exists, otherwise
/// taken literally, e.g. `"AB|AB ; A=a B=b"`.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that every letter occurs exactly twice.
    Validate { phrase: String },
    /// Print the canonical representative of the isomorphism class.
    Canon { phrase: String },
    /// Print parities, γ, T and the pairing.
    Invariants { phrase: String },
    /// Search for the smallest reachable phrase.
    Reduce { phrase: String },
    /// Decide homotopy of two phrases.
    Equiv { left: String, right: String },
    /// Normal form of a phrase with at most four entries.
    Classify { phrase: String },
    /// Encode a signed Gauss code (file or literal) as a phrase over {a, b}.
    EncodeCurve { code: String },
    /// Classes of irreducible curves with at most two crossings.
    Atlas {
        #[arg(long, default_value_t = 2)]
        max_crossings: usize,
        /// Worker threads; all cores when unset.
        #[arg(long, env = "NANO_ATLAS_JOBS")]
        jobs: Option<usize>,
    },
}

/// Successful runs exit 0; undecided searches exit 2. Errors exit 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Done => 0,
            Status::Inconclusive => 2,
        }
    }
}

pub struct Output {
    pub text: String,
    pub status: Status,
}

impl Output {
    fn done(text: String) -> Self {
        Output {
            text,
            status: Status::Done,
        }
    }
}

fn input(arg: &str) -> anyhow::Result<String> {
    let path = Path::new(arg);
    if !arg.is_empty() && path.is_file() {
        return std::fs::read_to_string(path).with_context(|| format!("reading {arg}"));
    }
    Ok(arg.to_string())
}

fn alphabet(spec: &str) -> anyhow::Result<Arc<Alphabet>> {
    if spec == "ab-swap" {
        return Ok(Arc::new(Alphabet::ab_swap()));
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading alphabet file {spec}"))?;
    Ok(Arc::new(Alphabet::parse(&text)?))
}

fn phrase(arg: &str, alphabet: &Arc<Alphabet>) -> anyhow::Result<Nanophrase> {
    Ok(parse_phrase(input(arg)?.trim(), alphabet)?)
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("outputs serialize");
    s.push('\n');
    s
}

fn path_lines(out: &mut String, path: &[MoveDescriptor]) {
    for mv in path {
        let _ = writeln!(out, "  {mv}");
    }
}

#[derive(Serialize)]
struct LabelRecord<'a> {
    label: String,
    #[serde(flatten)]
    parts: &'a ClassLabel,
    representative: String,
}

pub fn run(cli: &Cli) -> anyhow::Result<Output> {
    let budget = SearchBudget::new(cli.max_extra_letters, cli.max_states)?;
    let text_format = cli.format == Format::Text;
    match &cli.command {
        Command::Validate { phrase } => {
            let alphabet = alphabet(&cli.alphabet)?;
            let p = parse_etale(input(phrase)?.trim(), &alphabet)?;
            match validate(&p) {
                GaussVerdict::Valid => {
                    let text = if text_format {
                        format!("valid: {} component(s), {} letter(s)\n", p.len(), p.projections().len())
                    } else {
                        json(&serde_json::json!({ "valid": true }))
                    };
                    Ok(Output::done(text))
                }
                GaussVerdict::NotGauss { letter, count } => Err(Error::NotGauss { letter, count }.into()),
            }
        }
        Command::Canon { phrase: arg } => {
            let alphabet = alphabet(&cli.alphabet)?;
            let p = phrase(arg, &alphabet)?;
            let canon = render(&Nanophrase::from_canonical(alphabet, &canonical_form(&p)));
            Ok(Output::done(if text_format {
                format!("{canon}\n")
            } else {
                json(&serde_json::json!({ "canonical": canon }))
            }))
        }
        Command::Invariants { phrase: arg } => {
            let alphabet = alphabet(&cli.alphabet)?;
            let data = HomotopyData::diagonal(alphabet.clone());
            let p = phrase(arg, &alphabet)?;
            let sig = signature(&p, &data)?;
            if !text_format {
                return Ok(Output::done(json(&sig)));
            }
            let mut out = String::new();
            let list = |xs: Vec<String>| xs.join(" ");
            let _ = writeln!(
                out,
                "parity: {}",
                list(sig.parities.iter().map(u8::to_string).collect())
            );
            let _ = writeln!(
                out,
                "gamma: {}",
                list(sig.gamma.iter().map(|g| g.to_string()).collect())
            );
            let _ = writeln!(out, "T: {}", list(sig.t.iter().map(|t| t.to_string()).collect()));
            let _ = writeln!(
                out,
                "pairing: {}",
                list(sig.pairing.iter().map(|x| x.to_string()).collect())
            );
            Ok(Output::done(out))
        }
        Command::Reduce { phrase: arg } => {
            let alphabet = alphabet(&cli.alphabet)?;
            let data = HomotopyData::diagonal(alphabet.clone());
            let p = phrase(arg, &alphabet)?;
            let r = reduce(&p, &data, &budget)?;
            if !text_format {
                return Ok(Output::done(json(&serde_json::json!({
                    "phrase": render(&r.phrase),
                    "path": r.path,
                    "best_effort": r.best_effort,
                    "explored": r.explored,
                }))));
            }
            let mut out = format!("{}\n", r.phrase);
            let _ = writeln!(
                out,
                "{} move(s), {} state(s){}",
                r.path.len(),
                r.explored,
                if r.best_effort { ", state limit reached" } else { "" }
            );
            path_lines(&mut out, &r.path);
            Ok(Output::done(out))
        }
        Command::Equiv { left, right } => {
            let alphabet = alphabet(&cli.alphabet)?;
            let data = HomotopyData::diagonal(alphabet.clone());
            let (p1, p2) = (phrase(left, &alphabet)?, phrase(right, &alphabet)?);
            let verdict = homotopic(&p1, &p2, &data, &budget)?;
            let status = match verdict {
                Verdict::Inconclusive { .. } => Status::Inconclusive,
                _ => Status::Done,
            };
            let text = if text_format {
                verdict_text(&verdict)
            } else {
                json(&verdict)
            };
            Ok(Output { text, status })
        }
        Command::Classify { phrase: arg } => {
            let alphabet = alphabet(&cli.alphabet)?;
            let data = HomotopyData::diagonal(alphabet.clone());
            let p = phrase(arg, &alphabet)?;
            let label = match classify_with_path(&p, &data, &budget) {
                Ok((label, _)) => label,
                Err(Error::Unclassified { explored }) => {
                    return Ok(Output {
                        text: if text_format {
                            format!("unclassified after {explored} state(s)\n")
                        } else {
                            json(&serde_json::json!({ "unclassified": true, "explored": explored }))
                        },
                        status: Status::Inconclusive,
                    })
                }
                Err(e) => return Err(e.into()),
            };
            Ok(Output::done(if text_format {
                format!("{label}\n")
            } else {
                let representative = render(&label.representative(&alphabet, p.len())?);
                json(&LabelRecord {
                    label: label.to_string(),
                    parts: &label,
                    representative,
                })
            }))
        }
        Command::EncodeCurve { code } => {
            let code = SignedGaussCode::parse(&input(code)?)?;
            let p = encode(&code)?;
            Ok(Output::done(if text_format {
                format!("{p}\n")
            } else {
                json(&serde_json::json!({ "phrase": render(&p) }))
            }))
        }
        Command::Atlas { max_crossings, jobs } => {
            if cli.alphabet != "ab-swap" {
                return Err(anyhow!("the atlas is defined over the ab-swap alphabet only"));
            }
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = jobs {
                pool = pool.num_threads((*n).max(1));
            }
            let pool = pool.build().context("starting worker threads")?;
            let atlas = pool.install(|| build_atlas(*max_crossings, &budget))?;
            let status = if atlas.inconclusive.is_empty() {
                Status::Done
            } else {
                Status::Inconclusive
            };
            if !text_format {
                return Ok(Output {
                    text: json(&atlas.entries),
                    status,
                });
            }
            let width = atlas
                .entries
                .iter()
                .map(|e| e.label.to_string().len())
                .max()
                .unwrap_or(0);
            let mut out = String::new();
            for e in &atlas.entries {
                let _ = writeln!(
                    out,
                    "{:<width$}  {:<20}  {}",
                    e.label.to_string(),
                    e.representative,
                    e.family
                );
            }
            for p in &atlas.inconclusive {
                let _ = writeln!(out, "undecided: {p}");
            }
            let _ = writeln!(out, "{}", atlas.summary_line());
            Ok(Output { text: out, status })
        }
    }
}

fn verdict_text(verdict: &Verdict) -> String {
    match verdict {
        Verdict::Equivalent { path } => {
            let mut out = format!("Equivalent ({} move(s))\n", path.len());
            path_lines(&mut out, path);
            out
        }
        Verdict::Distinct {
            witness:
                Witness::Invariant {
                    name,
                    grouping,
                    left,
                    right,
                },
        } => {
            let blocks: Vec<String> = grouping
                .iter()
                .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join("+"))
                .collect();
            format!(
                "Distinct: {name} differs on components [{}]: {left} vs {right}\n",
                blocks.join(", ")
            )
        }
        Verdict::Distinct {
            witness: Witness::Catalog { left, right },
        } => format!("Distinct: normal forms {left} and {right}\n"),
        Verdict::Inconclusive { explored } => format!("Inconclusive after {explored} state(s)\n"),
    }
}
