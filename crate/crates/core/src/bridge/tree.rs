use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kernel::{RankedAlphabet, RankedTree};

/// A complete bottom-up deterministic tree automaton.
///
/// `tables[i]` is the transition table of the `i`-th letter, flattened with the
/// first child as the most significant digit: for arity `k` it has `states^k`
/// entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAutomaton {
    states: usize,
    ranked: RankedAlphabet,
    tables: Vec<Vec<usize>>,
    accepting: BTreeSet<usize>,
}

impl TreeAutomaton {
    pub fn new(
        states: usize,
        ranked: RankedAlphabet,
        tables: Vec<Vec<usize>>,
        accepting: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        if states == 0 {
            return Err(Error::BadParameters("a tree automaton needs at least one state".into()));
        }
        if tables.len() != ranked.len() {
            return Err(Error::BadParameters(format!(
                "{} tables for {} letters",
                tables.len(),
                ranked.len()
            )));
        }
        for ((letter, k), table) in ranked.letters().iter().zip(&tables) {
            let expected = states
                .checked_pow(*k as u32)
                .ok_or_else(|| Error::overflow("tree automaton table"))?;
            if table.len() != expected {
                return Err(Error::BadParameters(format!(
                    "table of {letter} has {} entries, expected {expected}",
                    table.len()
                )));
            }
            if let Some(t) = table.iter().find(|&&t| t >= states) {
                return Err(Error::BadParameters(format!("transition to unknown state {t}")));
            }
        }
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        if let Some(s) = accepting.iter().find(|&&s| s >= states) {
            return Err(Error::BadParameters(format!("unknown accepting state {s}")));
        }
        Ok(TreeAutomaton {
            states,
            ranked,
            tables,
            accepting,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn ranked(&self) -> &RankedAlphabet {
        &self.ranked
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    /// The target of letter `i` on the given child states.
    pub fn step(&self, letter: usize, children: &[usize]) -> usize {
        let idx = children.iter().fold(0, |acc, &c| acc * self.states + c);
        self.tables[letter][idx]
    }

    pub fn run(&self, t: &RankedTree) -> Result<usize> {
        let i = self.ranked.index_of(&t.label)?;
        let (_, k) = &self.ranked.letters()[i];
        if *k != t.children.len() {
            return Err(Error::ArityMismatch {
                letter: t.label.clone(),
                expected: *k,
                found: t.children.len(),
            });
        }
        let children = t.children.iter().map(|c| self.run(c)).collect::<Result<Vec<_>>>()?;
        Ok(self.step(i, &children))
    }

    pub fn accepts(&self, t: &RankedTree) -> Result<bool> {
        Ok(self.accepting.contains(&self.run(t)?))
    }

    /// Trees whose root is labelled `letter`: state 1 records that.
    pub fn root_is(ranked: RankedAlphabet, letter: &str) -> Result<Self> {
        let target = ranked.index_of(letter)?;
        let tables = ranked
            .letters()
            .iter()
            .enumerate()
            .map(|(i, (_, k))| vec![usize::from(i == target); 2usize.pow(*k as u32)])
            .collect();
        TreeAutomaton::new(2, ranked, tables, [1])
    }

    /// Exactly the tree `t`: one state per distinct subtree plus a sink.
    pub fn singleton(ranked: RankedAlphabet, t: &RankedTree) -> Result<Self> {
        t.check(&ranked)?;
        let mut subtrees: Vec<RankedTree> = Vec::new();
        fn collect(t: &RankedTree, out: &mut Vec<RankedTree>) {
            for c in &t.children {
                collect(c, out);
            }
            if !out.contains(t) {
                out.push(t.clone());
            }
        }
        collect(t, &mut subtrees);
        let states = subtrees.len() + 1;
        let sink = subtrees.len();
        let mut tables = Vec::new();
        for (label, k) in ranked.letters() {
            let size = states
                .checked_pow(*k as u32)
                .ok_or_else(|| Error::overflow("tree automaton table"))?;
            let mut table = vec![sink; size];
            for (s, sub) in subtrees.iter().enumerate() {
                if &sub.label == label {
                    let idx = sub.children.iter().fold(0, |acc, c| {
                        acc * states + subtrees.iter().position(|x| x == c).unwrap()
                    });
                    table[idx] = s;
                }
            }
            tables.push(table);
        }
        let root = subtrees.iter().position(|x| x == t).unwrap();
        TreeAutomaton::new(states, ranked, tables, [root])
    }
}
