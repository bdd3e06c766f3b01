//! JSON forms of recognizers, languages, automata and definable-value sets.
//!
//! Types and terms are written in the surface syntax. Value indices are JSON
//! numbers, or decimal strings when they do not fit in a `u64`.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};

use crate::bridge::{Dfa, TreeAutomaton};
use crate::definability::{DefSet, Exactness};
use crate::error::{Error, Result};
use crate::kernel::{typecheck_closed, Alphabet, Context, RankedAlphabet, SimpleType, Term};
use crate::reglang::{Accept, Formula, Language, Recognizer};
use crate::semantics::{Value, ValueSpace};
use crate::syntax::{parse_term, parse_type, print_term};

fn term_json(t: &Term) -> Json {
    Json::String(print_term(t, &Context::new()))
}

fn type_json(ty: &SimpleType) -> Json {
    Json::String(ty.to_string())
}

fn value_json(space: &ValueSpace, v: &Value) -> Result<Json> {
    Ok(match v {
        Value::Index(i) => json!(i),
        _ => Json::String(space.index_of(v)?.to_string()),
    })
}

fn value_from(space: &ValueSpace, j: &Json) -> Result<Value> {
    let index = match j {
        Json::Number(n) => BigUint::from(n.as_u64().ok_or_else(|| Error::format(format!("bad index {n}")))?),
        Json::String(s) => s.parse::<BigUint>().map_err(|_| Error::format(format!("bad index {s:?}")))?,
        _ => return Err(Error::format(format!("expected a value index, got {j}"))),
    };
    space.value_at(&index)
}

fn field<'a>(obj: &'a Json, key: &str) -> Result<&'a Json> {
    obj.get(key).ok_or_else(|| Error::format(format!("missing field {key:?}")))
}

fn str_field<'a>(obj: &'a Json, key: &str) -> Result<&'a str> {
    field(obj, key)?
        .as_str()
        .ok_or_else(|| Error::format(format!("field {key:?} must be a string")))
}

fn u64_field(obj: &Json, key: &str) -> Result<u64> {
    field(obj, key)?
        .as_u64()
        .ok_or_else(|| Error::format(format!("field {key:?} must be a natural number")))
}

fn bool_field(obj: &Json, key: &str) -> Result<bool> {
    field(obj, key)?
        .as_bool()
        .ok_or_else(|| Error::format(format!("field {key:?} must be a boolean")))
}

fn array<'a>(obj: &'a Json, key: &str) -> Result<&'a Vec<Json>> {
    field(obj, key)?
        .as_array()
        .ok_or_else(|| Error::format(format!("field {key:?} must be an array")))
}

fn type_field(obj: &Json, key: &str) -> Result<SimpleType> {
    parse_type(str_field(obj, key)?)
}

fn closed_term(j: &Json) -> Result<Term> {
    let s = j.as_str().ok_or_else(|| Error::format(format!("expected a term, got {j}")))?;
    let t = parse_term(s)?;
    typecheck_closed(&t).map_err(|e| Error::ill_typed(e.to_string()))?;
    Ok(t)
}

fn terms(obj: &Json, key: &str) -> Result<Vec<Term>> {
    array(obj, key)?.iter().map(closed_term).collect()
}

fn q_field(obj: &Json) -> Result<u32> {
    let q = u64_field(obj, "q")?;
    u32::try_from(q)
        .ok()
        .filter(|&q| q > 0)
        .ok_or_else(|| Error::format(format!("q must be a positive 32-bit number, got {q}")))
}

fn predicate_json(a: &Accept, ty: &SimpleType, q: u32) -> Result<Json> {
    let space = || ValueSpace::new(ty, q);
    Ok(match a {
        Accept::Values { set, complement } => {
            let sp = space()?;
            let values = set.iter().map(|v| value_json(&sp, v)).collect::<Result<Vec<_>>>()?;
            json!({"kind": "values", "values": values, "complement": complement})
        }
        Accept::Not(x) => json!({"kind": "not", "arg": predicate_json(x, ty, q)?}),
        Accept::And(xs) | Accept::Or(xs) => {
            let args = xs.iter().map(|x| predicate_json(x, ty, q)).collect::<Result<Vec<_>>>()?;
            let kind = if matches!(a, Accept::And(_)) { "and" } else { "or" };
            json!({"kind": kind, "args": args})
        }
        Accept::Apply { args, then } => {
            let mut cur = ty.clone();
            let mut out = Vec::new();
            for v in args {
                let (dom, cod) = cur
                    .as_arrow()
                    .ok_or_else(|| Error::ill_typed("too many arguments in an accepting predicate"))?;
                out.push(value_json(&*ValueSpace::new(dom, q)?, v)?);
                cur = cod.clone();
            }
            json!({"kind": "apply", "args": out, "then": predicate_json(then, &cur, q)?})
        }
        Accept::Fst(x) | Accept::Snd(x) => {
            let (l, r) = ty
                .as_product()
                .ok_or_else(|| Error::ill_typed("projection predicate on a non-product"))?;
            if matches!(a, Accept::Fst(_)) {
                json!({"kind": "fst", "then": predicate_json(x, l, q)?})
            } else {
                json!({"kind": "snd", "then": predicate_json(x, r, q)?})
            }
        }
        Accept::Image { map, codomain, then } => json!({
            "kind": "image",
            "map": term_json(map),
            "codomain": type_json(codomain),
            "then": predicate_json(then, codomain, q)?,
        }),
        Accept::Lower { q: lo, then } => json!({"kind": "lower", "q": lo, "then": predicate_json(then, ty, *lo)?}),
        Accept::ForallAt { points, then } => {
            let (_, cod) = ty
                .as_arrow()
                .ok_or_else(|| Error::ill_typed("arrow predicate on a non-arrow"))?;
            json!({
                "kind": "forall_at",
                "points": points.iter().map(term_json).collect::<Vec<_>>(),
                "then": predicate_json(then, cod, q)?,
            })
        }
        Accept::Quantified {
            exists,
            witness_ty,
            witnesses,
            then,
        } => json!({
            "kind": "quantified",
            "exists": exists,
            "witness_type": type_json(witness_ty),
            "witnesses": witnesses.iter().map(term_json).collect::<Vec<_>>(),
            "then": predicate_json(then, &SimpleType::product(ty.clone(), witness_ty.clone()), q)?,
        }),
    })
}

fn predicate_from(j: &Json, ty: &SimpleType, q: u32) -> Result<Accept> {
    let then = |ty: &SimpleType, q: u32| -> Result<Arc<Accept>> { Ok(Arc::new(predicate_from(field(j, "then")?, ty, q)?)) };
    Ok(match str_field(j, "kind")? {
        "values" => {
            let sp = ValueSpace::new(ty, q)?;
            let set = array(j, "values")?
                .iter()
                .map(|v| value_from(&sp, v))
                .collect::<Result<_>>()?;
            Accept::Values {
                set,
                complement: bool_field(j, "complement")?,
            }
        }
        "not" => Accept::Not(Arc::new(predicate_from(field(j, "arg")?, ty, q)?)),
        kind @ ("and" | "or") => {
            let args = array(j, "args")?
                .iter()
                .map(|x| Ok(Arc::new(predicate_from(x, ty, q)?)))
                .collect::<Result<Vec<_>>>()?;
            if kind == "and" {
                Accept::And(args)
            } else {
                Accept::Or(args)
            }
        }
        "apply" => {
            let mut cur = ty.clone();
            let mut args = Vec::new();
            for v in array(j, "args")? {
                let (dom, cod) = match cur.as_arrow() {
                    Some((d, c)) => (d.clone(), c.clone()),
                    None => return Err(Error::format(format!("too many arguments for {ty}"))),
                };
                args.push(value_from(&*ValueSpace::new(&dom, q)?, v)?);
                cur = cod;
            }
            Accept::Apply { args, then: then(&cur, q)? }
        }
        kind @ ("fst" | "snd") => {
            let (l, r) = ty
                .as_product()
                .ok_or_else(|| Error::format(format!("projection predicate on {ty}")))?;
            if kind == "fst" {
                Accept::Fst(then(l, q)?)
            } else {
                Accept::Snd(then(r, q)?)
            }
        }
        "image" => {
            let map = closed_term(field(j, "map")?)?;
            let codomain = type_field(j, "codomain")?;
            let expected = SimpleType::arrow(ty.clone(), codomain.clone());
            let found = typecheck_closed(&map).map_err(|e| Error::ill_typed(e.to_string()))?;
            if found != expected {
                return Err(Error::TypeDisagreement {
                    left: found,
                    right: expected,
                });
            }
            Accept::Image {
                then: then(&codomain, q)?,
                map,
                codomain,
            }
        }
        "lower" => {
            let lo = u32::try_from(u64_field(j, "q")?).map_err(|_| Error::format("q out of range"))?;
            if lo == 0 || lo > q {
                return Err(Error::format(format!("cannot lower from {q} to {lo}")));
            }
            Accept::Lower { q: lo, then: then(ty, lo)? }
        }
        "forall_at" => {
            let (dom, cod) = ty
                .as_arrow()
                .ok_or_else(|| Error::format(format!("arrow predicate on {ty}")))?;
            let points = terms(j, "points")?;
            for p in &points {
                let pty = typecheck_closed(p).map_err(|e| Error::ill_typed(e.to_string()))?;
                if &pty != dom {
                    return Err(Error::TypeDisagreement {
                        left: pty,
                        right: dom.clone(),
                    });
                }
            }
            Accept::ForallAt {
                points,
                then: then(cod, q)?,
            }
        }
        "quantified" => {
            let witness_ty = type_field(j, "witness_type")?;
            let pair = SimpleType::product(ty.clone(), witness_ty.clone());
            Accept::Quantified {
                exists: bool_field(j, "exists")?,
                witnesses: terms(j, "witnesses")?,
                then: then(&pair, q)?,
                witness_ty,
            }
        }
        other => return Err(Error::format(format!("unknown predicate kind {other:?}"))),
    })
}

pub fn recognizer_to_json(r: &Recognizer) -> Result<Json> {
    let mut obj = Map::new();
    obj.insert("type".into(), type_json(r.ty()));
    obj.insert("q".into(), json!(r.q()));
    match r.explicit() {
        Some((set, false)) => {
            let sp = ValueSpace::new(r.ty(), r.q())?;
            let values = set.iter().map(|v| value_json(&sp, v)).collect::<Result<Vec<_>>>()?;
            obj.insert("accepting".into(), Json::Array(values));
        }
        _ => {
            obj.insert("predicate".into(), predicate_json(r.accept(), r.ty(), r.q())?);
        }
    }
    if let Some(s) = r.support() {
        obj.insert("support".into(), Json::Array(s.iter().map(term_json).collect()));
    }
    Ok(Json::Object(obj))
}

pub fn recognizer_from_json(j: &Json) -> Result<Recognizer> {
    let ty = type_field(j, "type")?;
    let q = q_field(j)?;
    let r = match (j.get("accepting"), j.get("predicate")) {
        (Some(acc), None) => {
            let sp = ValueSpace::new(&ty, q)?;
            let values = acc
                .as_array()
                .ok_or_else(|| Error::format("\"accepting\" must be an array"))?
                .iter()
                .map(|v| value_from(&sp, v))
                .collect::<Result<Vec<_>>>()?;
            Recognizer::new(ty.clone(), q, values)?
        }
        (None, Some(p)) => Recognizer::with_predicate(ty.clone(), q, predicate_from(p, &ty, q)?)?,
        _ => return Err(Error::format("a recognizer needs exactly one of \"accepting\" and \"predicate\"")),
    };
    Ok(match j.get("support") {
        Some(_) => {
            let support = terms(j, "support")?;
            for t in &support {
                let tt = typecheck_closed(t).map_err(|e| Error::ill_typed(e.to_string()))?;
                if tt != ty {
                    return Err(Error::TypeDisagreement { left: tt, right: ty });
                }
            }
            r.with_support(support)
        }
        None => r,
    })
}

pub fn language_to_json(l: &Language) -> Result<Json> {
    fn go(f: &Formula, ty: &SimpleType) -> Result<Json> {
        Ok(match f {
            Formula::All => json!({"op": "all", "type": type_json(ty)}),
            Formula::None => json!({"op": "none", "type": type_json(ty)}),
            Formula::Leaf(r) => json!({"op": "leaf", "recognizer": recognizer_to_json(r)?}),
            Formula::Not(a) => json!({"op": "not", "args": [go(a, ty)?]}),
            Formula::And(a, b) => json!({"op": "and", "args": [go(a, ty)?, go(b, ty)?]}),
            Formula::Or(a, b) => json!({"op": "or", "args": [go(a, ty)?, go(b, ty)?]}),
        })
    }
    go(l.formula(), l.ty())
}

pub fn language_from_json(j: &Json) -> Result<Language> {
    // a bare recognizer is accepted as a leaf
    if j.get("op").is_none() && j.get("q").is_some() {
        return Ok(Language::leaf(recognizer_from_json(j)?));
    }
    let args = || -> Result<Vec<Language>> { array(j, "args")?.iter().map(language_from_json).collect() };
    match str_field(j, "op")? {
        "all" => Ok(Language::all(type_field(j, "type")?)),
        "none" => Ok(Language::none(type_field(j, "type")?)),
        "leaf" => Ok(Language::leaf(recognizer_from_json(field(j, "recognizer")?)?)),
        "not" => match args()?.as_slice() {
            [a] => Ok(a.not()),
            _ => Err(Error::format("\"not\" takes one argument")),
        },
        op @ ("and" | "or") => {
            let mut it = args()?.into_iter();
            let first = it
                .next()
                .ok_or_else(|| Error::format(format!("{op:?} needs at least one argument")))?;
            it.try_fold(first, |acc, l| if op == "and" { acc.and(&l) } else { acc.or(&l) })
        }
        other => Err(Error::format(format!("unknown language op {other:?}"))),
    }
}

#[derive(Serialize, Deserialize)]
struct DfaJson {
    states: usize,
    alphabet: Vec<String>,
    delta: Vec<Vec<usize>>,
    initial: usize,
    accepting: Vec<usize>,
}

pub fn dfa_to_json(d: &Dfa) -> Json {
    serde_json::to_value(DfaJson {
        states: d.state_count(),
        alphabet: d.alphabet().letters().to_vec(),
        delta: d.delta().to_vec(),
        initial: d.initial(),
        accepting: d.accepting().iter().copied().collect(),
    })
    .expect("plain data")
}

pub fn dfa_from_json(j: &Json) -> Result<Dfa> {
    let raw: DfaJson = serde_json::from_value(j.clone()).map_err(|e| Error::format(e.to_string()))?;
    if raw.delta.len() != raw.states {
        return Err(Error::format(format!(
            "\"states\" is {} but \"delta\" has {} rows",
            raw.states,
            raw.delta.len()
        )));
    }
    Dfa::new(Alphabet::new(raw.alphabet)?, raw.delta, raw.initial, raw.accepting)
}

#[derive(Serialize, Deserialize)]
struct RankedLetter {
    letter: String,
    arity: usize,
}

#[derive(Serialize, Deserialize)]
struct TreeAutomatonJson {
    states: usize,
    ranked: Vec<RankedLetter>,
    tables: Vec<Json>,
    accepting: Vec<usize>,
}

/// Nested form of a flattened table: arity 0 is a number, arity `k` an array
/// indexed by the first child.
fn nest(table: &[usize], states: usize, k: usize) -> Json {
    if k == 0 {
        return json!(table[0]);
    }
    let stride = table.len() / states;
    Json::Array((0..states).map(|i| nest(&table[i * stride..(i + 1) * stride], states, k - 1)).collect())
}

fn flatten(j: &Json, states: usize, k: usize, out: &mut Vec<usize>) -> Result<()> {
    if k == 0 {
        let s = j.as_u64().ok_or_else(|| Error::format(format!("expected a state, got {j}")))?;
        out.push(s as usize);
        return Ok(());
    }
    let items = j
        .as_array()
        .filter(|a| a.len() == states)
        .ok_or_else(|| Error::format(format!("expected an array of {states} entries")))?;
    for x in items {
        flatten(x, states, k - 1, out)?;
    }
    Ok(())
}

pub fn tree_automaton_to_json(a: &TreeAutomaton) -> Json {
    let ranked = a
        .ranked()
        .letters()
        .iter()
        .map(|(l, k)| RankedLetter {
            letter: l.clone(),
            arity: *k,
        })
        .collect();
    let tables = a
        .tables()
        .iter()
        .zip(a.ranked().arities())
        .map(|(t, k)| nest(t, a.state_count(), k))
        .collect();
    serde_json::to_value(TreeAutomatonJson {
        states: a.state_count(),
        ranked,
        tables,
        accepting: a.accepting().iter().copied().collect(),
    })
    .expect("plain data")
}

pub fn tree_automaton_from_json(j: &Json) -> Result<TreeAutomaton> {
    let raw: TreeAutomatonJson = serde_json::from_value(j.clone()).map_err(|e| Error::format(e.to_string()))?;
    let ranked = RankedAlphabet::new(raw.ranked.iter().map(|l| (l.letter.clone(), l.arity)))?;
    if raw.tables.len() != ranked.len() {
        return Err(Error::format("one table per letter expected"));
    }
    let mut tables = Vec::new();
    for (t, k) in raw.tables.iter().zip(ranked.arities()) {
        let mut flat = Vec::new();
        flatten(t, raw.states, k, &mut flat)?;
        tables.push(flat);
    }
    TreeAutomaton::new(raw.states, ranked, tables, raw.accepting)
}

pub fn def_set_to_json(d: &DefSet) -> Result<Json> {
    let sp = ValueSpace::new(d.ty(), d.q())?;
    let values = d.values().map(|v| value_json(&sp, v)).collect::<Result<Vec<_>>>()?;
    let (exactness, fuel) = match d.exactness() {
        Exactness::Exact => ("exact", None),
        Exactness::FuelBounded(f) => ("fuel_bounded", Some(f)),
    };
    let mut obj = json!({
        "type": type_json(d.ty()),
        "q": d.q(),
        "exactness": exactness,
        "values": values,
        "representatives": d.representatives().map(term_json).collect::<Vec<_>>(),
    });
    if let Some(f) = fuel {
        obj["fuel"] = json!(f);
    }
    Ok(obj)
}

pub fn def_set_from_json(j: &Json) -> Result<DefSet> {
    let ty = type_field(j, "type")?;
    let q = q_field(j)?;
    let exactness = match str_field(j, "exactness")? {
        "exact" => Exactness::Exact,
        "fuel_bounded" => Exactness::FuelBounded(
            u32::try_from(u64_field(j, "fuel")?).map_err(|_| Error::format("fuel out of range"))?,
        ),
        other => return Err(Error::format(format!("unknown exactness {other:?}"))),
    };
    let sp = ValueSpace::new(&ty, q)?;
    let values = array(j, "values")?
        .iter()
        .map(|v| value_from(&sp, v))
        .collect::<Result<Vec<_>>>()?;
    let reps = terms(j, "representatives")?;
    if values.len() != reps.len() {
        return Err(Error::format("one representative per value expected"));
    }
    Ok(DefSet::from_entries(ty, q, exactness, values.into_iter().zip(reps).collect()))
}
