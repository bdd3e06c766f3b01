//! Automata as recognizers and back.
//!
//! A DFA with `q` states becomes the recognizer at `q` that feeds each word value
//! the transition tables and the initial state. The way back observes which
//! argument tuples a recognizer's predicate actually inspects (the probes) and
//! builds the automaton whose states are word values restricted to the probes.
//! Evaluation is deterministic, so two words that agree on every probe the
//! predicate looked at for one of them get the same verdict; new probes found
//! while checking representatives trigger another round.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::{Dfa, TreeAutomaton};
use crate::error::{Error, Result};
use crate::kernel::{church_tree, church_word, Alphabet, RankedAlphabet, RankedTree, SimpleType};
use crate::limits::Limits;
use crate::reglang::{Accept, Recognizer};
use crate::semantics::{Engine, Value, ValueSpace};

fn endo_value(engine: &Engine, q: u32, table: impl Iterator<Item = usize>) -> Result<Value> {
    let space = engine.space(&SimpleType::endo(), q)?;
    space.table(table.map(|s| Value::Index(s as u64)).collect())
}

fn state_count(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::overflow("state count"))
}

/// The recognizer at `q = #states` agreeing with `d` on every word.
pub fn dfa_to_recognizer(d: &Dfa, limits: &Limits) -> Result<Recognizer> {
    let q = state_count(d.state_count())?;
    let ty = d.alphabet().word_type();
    if d.accepting().is_empty() {
        return Ok(Recognizer::none(ty, q));
    }
    if d.accepting().len() == d.state_count() {
        return Ok(Recognizer::all(ty, q));
    }
    let engine = Engine::new(limits);
    let mut args = Vec::new();
    for a in 0..d.alphabet().len() {
        args.push(endo_value(&engine, q, (0..d.state_count()).map(|s| d.step(s, a)))?);
    }
    args.push(Value::Index(d.initial() as u64));
    let then = Arc::new(Accept::set(d.accepting().iter().map(|&s| Value::Index(s as u64))));
    Recognizer::with_predicate(ty, q, Accept::Apply { args, then })
}

/// A probe for a word type: one endofunction table per letter and a start state.
#[derive(Clone, PartialEq, Eq, Hash)]
struct WordProbe {
    tables: Vec<Vec<u64>>,
    start: u64,
}

impl WordProbe {
    fn decode(endo: &ValueSpace, tuple: &[Value]) -> Result<Self> {
        let (start, fs) = tuple.split_last().ok_or_else(|| Error::ill_typed("empty probe"))?;
        let tables = fs
            .iter()
            .map(|f| Ok(endo.entries(f)?.iter().map(|v| v.as_index().unwrap()).collect()))
            .collect::<Result<_>>()?;
        Ok(WordProbe {
            tables,
            start: start.as_index().unwrap(),
        })
    }
}

/// The DFA over `alphabet` accepting the words whose Church encodings `r` accepts.
pub fn recognizer_to_dfa(r: &Recognizer, alphabet: &Alphabet, limits: &Limits) -> Result<Dfa> {
    let n = r.ty().word_letters().ok_or_else(|| Error::NotWordType(r.ty().clone()))?;
    if n != alphabet.len() {
        return Err(Error::BadParameters(format!(
            "{} has {n} letters, the alphabet {} has {}",
            r.ty(),
            alphabet,
            alphabet.len()
        )));
    }
    if r.accept().is_all() || r.accept().is_none() {
        return Ok(Dfa::constant(alphabet.clone(), r.accept().is_all()));
    }
    let q = r.q();
    let engine = Engine::new(limits);
    let endo = engine.space(&SimpleType::endo(), q)?;
    let mut arg_types = vec![SimpleType::endo(); n];
    arg_types.push(SimpleType::Base);
    let mut probes: Vec<WordProbe> = Vec::new();
    let mut known: HashSet<WordProbe> = HashSet::new();
    'refine: loop {
        limits.check_cancelled()?;
        // the word-value automaton restricted to the probes
        let initial: Vec<u64> = probes.iter().map(|p| p.start).collect();
        let mut ids: HashMap<Vec<u64>, usize> = HashMap::from([(initial.clone(), 0)]);
        let mut states = vec![initial];
        let mut reps: Vec<Vec<usize>> = vec![Vec::new()];
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            let mut row = Vec::with_capacity(n);
            for a in 0..n {
                let next: Vec<u64> = states[i]
                    .iter()
                    .zip(&probes)
                    .map(|(&s, p)| p.tables[a][s as usize])
                    .collect();
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= limits.class_limit {
                            return Err(Error::overflow("states of the word-value automaton"));
                        }
                        let id = states.len();
                        ids.insert(next.clone(), id);
                        states.push(next);
                        let mut w = reps[i].clone();
                        w.push(a);
                        reps.push(w);
                        queue.push_back(id);
                        id
                    }
                };
                row.push(id);
            }
            delta.push(row);
        }
        let mut accepting = Vec::new();
        let mut fresh = false;
        for (i, w) in reps.iter().enumerate() {
            let s = engine.eval_closed(&church_word(alphabet, w)?)?;
            let (watched, obs) = engine.observe(s, q, arg_types.clone());
            if r.accepts_sem(&engine, &watched)? {
                accepting.push(i);
            }
            for tuple in obs.take_log() {
                let p = WordProbe::decode(&endo, &tuple)?;
                if known.insert(p.clone()) {
                    probes.push(p);
                    fresh = true;
                }
            }
            if fresh {
                continue 'refine;
            }
        }
        return Dfa::new(alphabet.clone(), delta, 0, accepting);
    }
}

/// `idx` as `k` digits in base `radix`, most significant first.
fn digits(mut idx: usize, radix: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % radix;
        idx /= radix;
    }
    out
}

/// The value of a first-order function `o^k -> o` at `q` from its flattened table.
fn first_order_value(engine: &Engine, q: u32, k: usize, table: &[usize]) -> Result<Value> {
    if k == 0 {
        return Ok(Value::Index(table[0] as u64));
    }
    let space = engine.space(&SimpleType::first_order(k), q)?;
    let stride = table.len() / q as usize;
    let entries = (0..q as usize)
        .map(|i| first_order_value(engine, q, k - 1, &table[i * stride..(i + 1) * stride]))
        .collect::<Result<Vec<_>>>()?;
    space.table(entries)
}

fn bundle_value(engine: &Engine, q: u32, ranked: &RankedAlphabet, tables: &[Vec<usize>]) -> Result<Value> {
    let comps = ranked
        .arities()
        .iter()
        .zip(tables)
        .map(|(&k, t)| first_order_value(engine, q, k, t))
        .collect::<Result<Vec<_>>>()?;
    let Some((last, init)) = comps.split_last() else {
        return Ok(Value::Index(0));
    };
    let mut acc = last.clone();
    for (i, c) in init.iter().enumerate().rev() {
        let ty = SimpleType::tuple(
            ranked.arities()[i..]
                .iter()
                .map(|&k| SimpleType::first_order(k))
                .collect(),
        );
        acc = engine.space(&ty, q)?.pair(c.clone(), acc)?;
    }
    Ok(acc)
}

fn decode_bundle(engine: &Engine, q: u32, arities: &[usize], v: &Value) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut rest = v.clone();
    for (i, &k) in arities.iter().enumerate() {
        let comp = if i + 1 < arities.len() {
            let ty = SimpleType::tuple(arities[i..].iter().map(|&k| SimpleType::first_order(k)).collect());
            let (c, r) = engine.space(&ty, q)?.split(&rest)?;
            rest = r;
            c
        } else {
            rest.clone()
        };
        let size = (q as usize).pow(k as u32);
        let mut table = Vec::with_capacity(size);
        for idx in 0..size {
            let mut cur = comp.clone();
            for (j, d) in digits(idx, q as usize, k).into_iter().enumerate() {
                cur = engine.space(&SimpleType::first_order(k - j), q)?.apply_at(&cur, d as u64)?;
            }
            table.push(cur.as_index().unwrap());
        }
        out.push(table);
    }
    Ok(out)
}

/// The recognizer at `q = #states` agreeing with the bottom-up run of `a`.
pub fn tree_automaton_to_recognizer(a: &TreeAutomaton, limits: &Limits) -> Result<Recognizer> {
    let q = state_count(a.state_count())?;
    let ty = a.ranked().tree_type();
    if a.accepting().is_empty() {
        return Ok(Recognizer::none(ty, q));
    }
    if a.accepting().len() == a.state_count() {
        return Ok(Recognizer::all(ty, q));
    }
    let engine = Engine::new(limits);
    let bundle = bundle_value(&engine, q, a.ranked(), a.tables())?;
    let then = Arc::new(Accept::set(a.accepting().iter().map(|&s| Value::Index(s as u64))));
    Recognizer::with_predicate(ty, q, Accept::Apply { args: vec![bundle], then })
}

/// The tree automaton over `ranked` accepting the trees whose encodings `r` accepts.
pub fn recognizer_to_tree_automaton(r: &Recognizer, ranked: &RankedAlphabet, limits: &Limits) -> Result<TreeAutomaton> {
    let arities = r.ty().tree_arities().ok_or_else(|| Error::NotTreeType(r.ty().clone()))?;
    if arities != ranked.arities() {
        return Err(Error::BadParameters(format!("{} does not match the ranked alphabet {ranked}", r.ty())));
    }
    let letters = ranked.len();
    let build = |states: usize, tables: Vec<Vec<usize>>, accepting: Vec<usize>| {
        TreeAutomaton::new(states, ranked.clone(), tables, accepting)
    };
    if r.accept().is_all() || r.accept().is_none() {
        let tables = arities.iter().map(|_| vec![0]).collect();
        return build(1, tables, if r.accept().is_all() { vec![0] } else { vec![] });
    }
    let q = r.q();
    let engine = Engine::new(limits);
    let bundle_ty = ranked.bundle_type();
    let mut probes: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut known: HashSet<Vec<Vec<u64>>> = HashSet::new();
    'refine: loop {
        limits.check_cancelled()?;
        // bottom-up closure of the tree-value automaton restricted to the probes
        let mut ids: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut states: Vec<Vec<u64>> = Vec::new();
        let mut reps: Vec<RankedTree> = Vec::new();
        let mut transitions: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); letters];
        loop {
            let before = states.len();
            for (i, (label, k)) in ranked.letters().iter().enumerate() {
                for idx in 0..before.pow(*k as u32) {
                    let combo = digits(idx, before, *k);
                    if transitions[i].contains_key(&combo) {
                        continue;
                    }
                    let vec: Vec<u64> = probes
                        .iter()
                        .enumerate()
                        .map(|(p, tables)| {
                            let idx = combo.iter().fold(0usize, |acc, &c| acc * q as usize + states[c][p] as usize);
                            tables[i][idx]
                        })
                        .collect();
                    let id = match ids.get(&vec) {
                        Some(&id) => id,
                        None => {
                            if states.len() >= limits.class_limit {
                                return Err(Error::overflow("states of the tree-value automaton"));
                            }
                            ids.insert(vec.clone(), states.len());
                            states.push(vec);
                            reps.push(RankedTree::node(label, combo.iter().map(|&c| reps[c].clone()).collect()));
                            states.len() - 1
                        }
                    };
                    transitions[i].insert(combo, id);
                }
            }
            if states.len() == before {
                break;
            }
        }
        let mut accepting = Vec::new();
        let mut fresh = false;
        for (i, t) in reps.iter().enumerate() {
            let s = engine.eval_closed(&church_tree(ranked, t)?)?;
            let (watched, obs) = engine.observe(s, q, vec![bundle_ty.clone()]);
            if r.accepts_sem(&engine, &watched)? {
                accepting.push(i);
            }
            for tuple in obs.take_log() {
                let p = decode_bundle(&engine, q, &arities, &tuple[0])?;
                if known.insert(p.clone()) {
                    probes.push(p);
                    fresh = true;
                }
            }
            if fresh {
                continue 'refine;
            }
        }
        let n = states.len();
        let tables = ranked
            .letters()
            .iter()
            .enumerate()
            .map(|(i, (_, k))| {
                (0..n.pow(*k as u32))
                    .map(|idx| transitions[i][&digits(idx, n, *k)])
                    .collect()
            })
            .collect();
        return build(n, tables, accepting);
    }
}
