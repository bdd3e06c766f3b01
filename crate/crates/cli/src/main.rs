use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use holam::bridge::{
    classical_derivative, dfa_to_recognizer, recognizer_to_dfa, recognizer_to_tree_automaton,
    tree_automaton_to_recognizer, Dfa,
};
use holam::brzozowski::{left_residual, right_residual, tree_context_residual, tree_singleton, word_residual, word_singleton, Side};
use holam::definability::{def_set, default_alphabet, AutoDefs, Exactness, Strategy};
use holam::formats::{
    def_set_to_json, dfa_from_json, dfa_to_json, language_from_json, language_to_json, recognizer_to_json,
    tree_automaton_from_json,
};
use holam::kernel::{normalize, typecheck_closed, Alphabet, Context, RankedAlphabet, RankedTree, SimpleType, Term};
use holam::reglang::{
    arrow_lang, contains, diagonal_non_openness_witness, lift_to_q, product_lang, pullback, quantify_along_projection,
    to_recognizer, Containment, Language, Quantifier,
};
use holam::semantics::{interpret_closed, ValueSpace};
use holam::syntax::{parse_term_with, parse_type, print_term, ParseOptions};
use holam::Limits;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

/// Higher-order regular languages of simply-typed λ-terms.
#[derive(Parser)]
#[command(name = "holam", version)]
struct Cli {
    /// Print machine-readable JSON
    #[arg(long, global = true)]
    json: bool,
    /// Largest finite space that may be enumerated (overrides HOLAM_BUDGET)
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Depth fuel for the generic term enumeration
    #[arg(long, global = true, default_value_t = 3)]
    fuel: u32,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the type of a closed term
    Check {
        #[arg(long)]
        term: String,
    },
    /// Print the βη-long normal form of a closed term
    Nf {
        #[arg(long)]
        term: String,
    },
    /// Print the index of a closed term's value at state count q
    Eval {
        #[arg(long)]
        term: String,
        #[arg(long)]
        q: u32,
    },
    /// Test whether a closed term belongs to a language
    Member {
        #[arg(long)]
        lang: PathBuf,
        #[arg(long)]
        term: String,
    },
    /// Build languages from languages
    Lang {
        #[command(subcommand)]
        op: LangOp,
    },
    /// Residual of a language by a divisor language
    Derive {
        /// `left`: div \ lang, `right`: lang / div
        #[arg(long, value_enum)]
        op: SideArg,
        #[arg(long)]
        div: PathBuf,
        #[arg(long)]
        lang: PathBuf,
        /// Binary term `A * B -> C` to residuate through (default: word concatenation)
        #[arg(long)]
        term: Option<String>,
        /// Residuate through grafting over this ranked alphabet, e.g. `f:1,c:0`
        #[arg(long)]
        ranked: Option<String>,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Recognizer of the language of a DFA
    Dfa2ho {
        #[arg(long)]
        dfa: PathBuf,
    },
    /// DFA of a language of words (minimized)
    Ho2dfa {
        #[arg(long)]
        lang: PathBuf,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Recognizer of the language of a bottom-up tree automaton
    Ta2ho {
        #[arg(long)]
        ta: PathBuf,
    },
    /// Tree automaton of a language of trees
    Ho2ta {
        #[arg(long)]
        lang: PathBuf,
        #[arg(long)]
        ranked: String,
    },
    /// Classical derivative of a DFA by a letter
    DfaDerive {
        #[arg(long)]
        dfa: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        letter: String,
    },
    /// Language containing a single word or tree
    Singleton {
        #[arg(long, conflicts_with = "tree")]
        word: Option<String>,
        #[arg(long)]
        tree: Option<String>,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        ranked: Option<String>,
    },
    /// List the definable values of a type at state count q
    EnumDef {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        q: u32,
        /// Use the fuel-bounded enumeration even where an exact closure exists
        #[arg(long)]
        generic: bool,
    },
    /// Two distinct numerals with the same value at q
    WitnessDiagonal {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 10_000)]
        search: u64,
    },
    /// Random DFAs from a seed
    GenDfa {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value = "ab")]
        alphabet: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum LangOp {
    Not {
        #[arg(long)]
        lang: PathBuf,
    },
    And {
        #[arg(long = "lang", required = true)]
        langs: Vec<PathBuf>,
    },
    Or {
        #[arg(long = "lang", required = true)]
        langs: Vec<PathBuf>,
    },
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    Arrow {
        #[arg(long)]
        dom: PathBuf,
        #[arg(long)]
        cod: PathBuf,
    },
    Pullback {
        #[arg(long)]
        term: String,
        #[arg(long)]
        lang: PathBuf,
    },
    Lift {
        #[arg(long)]
        lang: PathBuf,
        #[arg(long)]
        q: u32,
    },
    Quantify {
        #[arg(long)]
        lang: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    Contains {
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        sup: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exists,
    Forall,
}

/// Exit status 1 for domain errors, 2 for unusable input.
enum Failure {
    Domain(String),
    Input(String),
}

impl From<holam::Error> for Failure {
    fn from(e: holam::Error) -> Self {
        match e {
            holam::Error::Syntax { .. } | holam::Error::Format(_) => Failure::Input(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Out = Result<String, Failure>;

fn read_json(path: &Path) -> Result<Json, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_lang(path: &Path) -> Result<Language, Failure> {
    Ok(language_from_json(&read_json(path)?)?)
}

fn closed(src: &str, opts: &ParseOptions) -> Result<(Term, SimpleType), Failure> {
    let t = parse_term_with(src, opts)?;
    let ty = typecheck_closed(&t)?;
    Ok((t, ty))
}

fn show_term(t: &Term) -> String {
    print_term(t, &Context::new())
}

fn pretty(j: &Json) -> String {
    serde_json::to_string_pretty(j).expect("serializable")
}

fn lang_out(l: &Language, exactness: Exactness) -> Out {
    if let Exactness::FuelBounded(f) = exactness {
        eprintln!("note: result over-approximates: definable values enumerated with fuel {f}");
    }
    Ok(pretty(&language_to_json(l)?))
}

fn alphabet_for(ty: &SimpleType, given: Option<&str>) -> Result<Alphabet, Failure> {
    let n = ty
        .word_letters()
        .ok_or_else(|| Failure::Domain(format!("not a word type: {ty}")))?;
    let a = match given {
        Some(s) => Alphabet::parse(s)?,
        None => default_alphabet(n),
    };
    if a.len() != n {
        return Err(Failure::Domain(format!("alphabet {a} does not fit {ty}")));
    }
    Ok(a)
}

fn limits_from(cli: &Cli) -> Result<Limits, Failure> {
    let mut limits = Limits::default().with_fuel(cli.fuel);
    let env = std::env::var("HOLAM_BUDGET").ok();
    if let Some(b) = cli.budget {
        limits = limits.with_space_budget(b);
    } else if let Some(s) = env {
        let b = s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("HOLAM_BUDGET must be a natural number, got {s:?}")))?;
        limits = limits.with_space_budget(b);
    }
    Ok(limits)
}

fn run(cli: &Cli) -> Out {
    let limits = limits_from(cli)?;
    let defs = AutoDefs::new(limits.clone());
    match &cli.cmd {
        Cmd::Check { term } => {
            let (_, ty) = closed(term, &ParseOptions::default())?;
            Ok(if cli.json { json!({"type": ty.to_string()}).to_string() } else { ty.to_string() })
        }
        Cmd::Nf { term } => {
            let (t, ty) = closed(term, &ParseOptions::default())?;
            let nf = show_term(&normalize(&t, &Context::new())?);
            Ok(if cli.json { json!({"type": ty.to_string(), "normal_form": nf}).to_string() } else { nf })
        }
        Cmd::Eval { term, q } => {
            let (t, ty) = closed(term, &ParseOptions::default())?;
            let v = interpret_closed(&t, *q, &limits)?;
            let index = ValueSpace::new(&ty, *q)?.index_of(&v)?.to_string();
            Ok(if cli.json {
                json!({"type": ty.to_string(), "q": q, "value": index}).to_string()
            } else {
                index
            })
        }
        Cmd::Member { lang, term } => {
            let l = read_lang(lang)?;
            let opts = ParseOptions {
                word_letters: l.ty().word_letters(),
                ..Default::default()
            };
            let (t, _) = closed(term, &opts)?;
            let b = l.member(&t, &limits)?;
            Ok(if cli.json { json!({"member": b}).to_string() } else { b.to_string() })
        }
        Cmd::Lang { op } => run_lang(op, cli, &limits, &defs),
        Cmd::Derive {
            op,
            div,
            lang,
            term,
            ranked,
            alphabet,
        } => {
            let (d, l) = (read_lang(div)?, read_lang(lang)?);
            let side = Side::from(*op);
            let (res, ex) = match (term, ranked) {
                (Some(m), _) => {
                    let (m, _) = closed(m, &ParseOptions::default())?;
                    match side {
                        Side::Left => left_residual(&m, &d, &l, &defs, &limits)?,
                        Side::Right => right_residual(&m, &d, &l, &defs, &limits)?,
                    }
                }
                (None, Some(r)) => tree_context_residual(&RankedAlphabet::parse(r)?, side, &d, &l, &defs, &limits)?,
                (None, None) => {
                    let a = alphabet_for(l.ty(), alphabet.as_deref())?;
                    word_residual(&a, side, &d, &l, &defs, &limits)?
                }
            };
            lang_out(&res, ex)
        }
        Cmd::Dfa2ho { dfa } => {
            let d = dfa_from_json(&read_json(dfa)?)?;
            Ok(pretty(&recognizer_to_json(&dfa_to_recognizer(&d, &limits)?)?))
        }
        Cmd::Ho2dfa { lang, alphabet } => {
            let l = read_lang(lang)?;
            let a = alphabet_for(l.ty(), alphabet.as_deref())?;
            let d = recognizer_to_dfa(&to_recognizer(&l)?, &a, &limits)?.minimize();
            Ok(pretty(&dfa_to_json(&d)))
        }
        Cmd::Ta2ho { ta } => {
            let a = tree_automaton_from_json(&read_json(ta)?)?;
            Ok(pretty(&recognizer_to_json(&tree_automaton_to_recognizer(&a, &limits)?)?))
        }
        Cmd::Ho2ta { lang, ranked } => {
            let l = read_lang(lang)?;
            let a = recognizer_to_tree_automaton(&to_recognizer(&l)?, &RankedAlphabet::parse(ranked)?, &limits)?;
            Ok(pretty(&holam::formats::tree_automaton_to_json(&a)))
        }
        Cmd::DfaDerive { dfa, side, letter } => {
            let d = dfa_from_json(&read_json(dfa)?)?;
            Ok(pretty(&dfa_to_json(&classical_derivative(&d, (*side).into(), letter)?)))
        }
        Cmd::Singleton {
            word,
            tree,
            alphabet,
            ranked,
        } => {
            let r = match (word, tree) {
                (Some(w), None) => {
                    let a = Alphabet::parse(alphabet.as_deref().unwrap_or("ab"))?;
                    let w = if w == "ε" { Vec::new() } else { a.parse_word(w)? };
                    word_singleton(&a, &w, &limits)?
                }
                (None, Some(t)) => {
                    let r = ranked
                        .as_deref()
                        .ok_or_else(|| Failure::Input("--tree needs --ranked".into()))?;
                    tree_singleton(&RankedAlphabet::parse(r)?, &RankedTree::parse(t)?, &limits)?
                }
                _ => return Err(Failure::Input("give one of --word and --tree".into())),
            };
            Ok(pretty(&recognizer_to_json(&r)?))
        }
        Cmd::EnumDef { ty, q, generic } => {
            let ty = parse_type(ty)?;
            let strategy = if *generic { Strategy::ForceGeneric(cli.fuel) } else { Strategy::Auto };
            let d = def_set(&ty, *q, strategy, &limits)?;
            if cli.json {
                return Ok(pretty(&def_set_to_json(&d)?));
            }
            let space = ValueSpace::new(&ty, *q)?;
            let mut lines = vec![format!("{} values, {:?}", d.len(), d.exactness())];
            for (v, t) in d.entries() {
                lines.push(format!("{}\t{}", space.index_of(v)?, show_term(t)));
            }
            Ok(lines.join("\n"))
        }
        Cmd::WitnessDiagonal { q, search } => {
            let (n, m) = diagonal_non_openness_witness(*q, *search, &limits)?;
            Ok(if cli.json { json!({"q": q, "n": n, "m": m}).to_string() } else { format!("{n} {m}") })
        }
        Cmd::GenDfa {
            seed,
            states,
            alphabet,
            count,
        } => {
            if *states == 0 {
                return Err(Failure::Input("--states must be positive".into()));
            }
            let a = Alphabet::parse(alphabet)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let dfas: Vec<Json> = (0..*count).map(|_| dfa_to_json(&Dfa::random(&mut rng, a.clone(), *states))).collect();
            Ok(if *count == 1 { pretty(&dfas[0]) } else { pretty(&Json::Array(dfas)) })
        }
    }
}

fn run_lang(op: &LangOp, cli: &Cli, limits: &Limits, defs: &AutoDefs) -> Out {
    match op {
        LangOp::Not { lang } => lang_out(&read_lang(lang)?.not(), Exactness::Exact),
        LangOp::And { langs } | LangOp::Or { langs } => {
            let mut it = langs.iter();
            let mut acc = read_lang(it.next().expect("clap requires one"))?;
            for p in it {
                let l = read_lang(p)?;
                acc = if matches!(op, LangOp::And { .. }) { acc.and(&l)? } else { acc.or(&l)? };
            }
            lang_out(&acc, Exactness::Exact)
        }
        LangOp::Product { left, right } => lang_out(&product_lang(&read_lang(left)?, &read_lang(right)?)?, Exactness::Exact),
        LangOp::Arrow { dom, cod } => {
            let (l, ex) = arrow_lang(&read_lang(dom)?, &read_lang(cod)?, defs, limits)?;
            lang_out(&l, ex)
        }
        LangOp::Pullback { term, lang } => {
            let l = read_lang(lang)?;
            let (m, _) = closed(term, &ParseOptions::default())?;
            lang_out(&pullback(&m, &l)?, Exactness::Exact)
        }
        LangOp::Lift { lang, q } => {
            let r = to_recognizer(&read_lang(lang)?)?;
            let (lifted, ex) = lift_to_q(&r, *q, defs, limits)?;
            lang_out(&Language::leaf(lifted), ex)
        }
        LangOp::Quantify { lang, mode } => {
            let mode = match mode {
                ModeArg::Exists => Quantifier::Exists,
                ModeArg::Forall => Quantifier::Forall,
            };
            let (l, ex) = quantify_along_projection(&read_lang(lang)?, mode, defs)?;
            lang_out(&l, ex)
        }
        LangOp::Contains { sub, sup } => {
            let r = contains(&read_lang(sub)?, &read_lang(sup)?, defs, limits)?;
            let (verdict, witness) = match &r {
                Containment::True => ("true", None),
                Containment::False(t) => ("false", Some(show_term(t))),
                Containment::Unknown => ("unknown", None),
            };
            Ok(if cli.json {
                json!({"result": verdict, "witness": witness}).to_string()
            } else {
                match witness {
                    Some(w) => format!("{verdict}\t{w}"),
                    None => verdict.to_string(),
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
