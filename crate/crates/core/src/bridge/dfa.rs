use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;

use crate::brzozowski::Side;
use crate::error::{Error, Result};
use crate::kernel::Alphabet;

/// A complete deterministic finite automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    states: usize,
    alphabet: Alphabet,
    delta: Vec<Vec<usize>>,
    initial: usize,
    accepting: BTreeSet<usize>,
}

/// Outcome of an equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DfaEquiv {
    Equivalent,
    /// A shortest word on which the two automata disagree.
    Differ(Vec<usize>),
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        initial: usize,
        accepting: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let states = delta.len();
        if states == 0 {
            return Err(Error::BadParameters("a DFA needs at least one state".into()));
        }
        for (s, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::BadParameters(format!(
                    "state {s} has {} transitions for {} letters",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(t) = row.iter().find(|&&t| t >= states) {
                return Err(Error::BadParameters(format!("transition to unknown state {t}")));
            }
        }
        if initial >= states {
            return Err(Error::BadParameters(format!("unknown initial state {initial}")));
        }
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        if let Some(s) = accepting.iter().find(|&&s| s >= states) {
            return Err(Error::BadParameters(format!("unknown accepting state {s}")));
        }
        Ok(Dfa {
            states,
            alphabet,
            delta,
            initial,
            accepting,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn delta(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn step(&self, s: usize, letter: usize) -> usize {
        self.delta[s][letter]
    }

    pub fn run_from(&self, s: usize, w: &[usize]) -> usize {
        w.iter().fold(s, |s, &a| self.delta[s][a])
    }

    pub fn run(&self, w: &[usize]) -> bool {
        self.accepting.contains(&self.run_from(self.initial, w))
    }

    /// Runs a word spelled out in the alphabet's letters.
    pub fn run_str(&self, w: &str) -> Result<bool> {
        Ok(self.run(&self.alphabet.parse_word(w)?))
    }

    /// The one-state automaton for `Σ*` (or `∅`).
    pub fn constant(alphabet: Alphabet, accept: bool) -> Self {
        let n = alphabet.len();
        Dfa::new(alphabet, vec![vec![0; n]], 0, accept.then_some(0)).unwrap()
    }

    /// Words with an even number of occurrences of `letter`.
    pub fn parity(alphabet: Alphabet, letter: usize) -> Self {
        let n = alphabet.len();
        let delta = (0..2)
            .map(|s| (0..n).map(|a| if a == letter { 1 - s } else { s }).collect())
            .collect();
        Dfa::new(alphabet, delta, 0, [0]).unwrap()
    }

    /// Exactly the word `w`: states are the prefixes of `w` plus a sink.
    pub fn singleton(alphabet: Alphabet, w: &[usize]) -> Self {
        let k = w.len();
        let sink = k + 1;
        let delta = (0..=sink)
            .map(|s| {
                (0..alphabet.len())
                    .map(|a| if s < k && w[s] == a { s + 1 } else { sink })
                    .collect()
            })
            .collect();
        Dfa::new(alphabet, delta, 0, [k]).unwrap()
    }

    /// Words containing `pattern` as a factor.
    pub fn contains_factor(alphabet: Alphabet, pattern: &[usize]) -> Self {
        let k = pattern.len();
        // state s: the longest suffix read so far that is a prefix of the pattern
        let delta = (0..=k)
            .map(|s| {
                (0..alphabet.len())
                    .map(|a| {
                        if s == k {
                            return k;
                        }
                        let mut read: Vec<usize> = pattern[..s].to_vec();
                        read.push(a);
                        (0..=read.len().min(k))
                            .rev()
                            .find(|&l| read[read.len() - l..] == pattern[..l])
                            .unwrap()
                    })
                    .collect()
            })
            .collect();
        Dfa::new(alphabet, delta, 0, [k]).unwrap()
    }

    pub fn complement(&self) -> Self {
        let accepting = (0..self.states).filter(|s| !self.accepting.contains(s));
        Dfa::new(self.alphabet.clone(), self.delta.clone(), self.initial, accepting).unwrap()
    }

    /// A uniformly random automaton with `1..=max_states` states.
    pub fn random(rng: &mut impl Rng, alphabet: Alphabet, max_states: usize) -> Self {
        let states = rng.gen_range(1..=max_states.max(1));
        let delta = (0..states)
            .map(|_| (0..alphabet.len()).map(|_| rng.gen_range(0..states)).collect())
            .collect();
        let accepting: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
        Dfa::new(alphabet, delta, 0, accepting).unwrap()
    }

    /// States reachable from the initial one, in breadth-first order.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            for &t in &self.delta[order[i]] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// The minimal equivalent automaton, by Moore partition refinement on the
    /// reachable part. States are numbered in breadth-first order from the
    /// initial state, so equal languages give identical automata.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let mut class: HashMap<usize, usize> =
            reach.iter().map(|&s| (s, usize::from(self.accepting.contains(&s)))).collect();
        loop {
            let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = HashMap::new();
            for &s in &reach {
                let mut sig = vec![class[&s]];
                sig.extend(self.delta[s].iter().map(|t| class[t]));
                let n = sigs.len();
                next.insert(s, *sigs.entry(sig).or_insert(n));
            }
            let stable = sigs.len() == class.values().collect::<BTreeSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // renumber classes in BFS order
        let mut number: HashMap<usize, usize> = HashMap::new();
        let mut rep = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        number.insert(class[&self.initial], 0);
        rep.push(self.initial);
        while let Some(s) = queue.pop_front() {
            for &t in &self.delta[s] {
                let c = class[&t];
                if let Entry::Vacant(e) = number.entry(c) {
                    e.insert(rep.len());
                    rep.push(t);
                    queue.push_back(t);
                }
            }
        }
        let delta = rep
            .iter()
            .map(|&s| self.delta[s].iter().map(|t| number[&class[t]]).collect())
            .collect();
        let accepting = rep
            .iter()
            .enumerate()
            .filter(|(_, s)| self.accepting.contains(s))
            .map(|(i, _)| i);
        Dfa::new(self.alphabet.clone(), delta, 0, accepting).unwrap()
    }

    /// Compares languages by a breadth-first search of the product automaton.
    pub fn equiv(&self, other: &Dfa) -> Result<DfaEquiv> {
        if self.alphabet != other.alphabet {
            return Err(Error::BadParameters(format!(
                "alphabets {} and {} differ",
                self.alphabet, other.alphabet
            )));
        }
        let start = (self.initial, other.initial);
        // each visited state pair points back to its predecessor and the letter read
        type Pair = (usize, usize);
        let mut parent: HashMap<Pair, Option<(Pair, usize)>> = HashMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some((a, b)) = queue.pop_front() {
            if self.accepting.contains(&a) != other.accepting.contains(&b) {
                let mut w = Vec::new();
                let mut cur = (a, b);
                while let Some((prev, letter)) = parent[&cur] {
                    w.push(letter);
                    cur = prev;
                }
                w.reverse();
                return Ok(DfaEquiv::Differ(w));
            }
            for l in 0..self.alphabet.len() {
                let next = (self.delta[a][l], other.delta[b][l]);
                if let Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some(((a, b), l)));
                    queue.push_back(next);
                }
            }
        }
        Ok(DfaEquiv::Equivalent)
    }

    /// `a\L = {w | aw ∈ L}` on the left, `L/a = {w | wa ∈ L}` on the right.
    pub fn derivative(&self, side: Side, letter: usize) -> Result<Dfa> {
        if letter >= self.alphabet.len() {
            return Err(Error::UnknownLetter(format!("#{letter}")));
        }
        Ok(match side {
            Side::Left => Dfa {
                initial: self.delta[self.initial][letter],
                ..self.clone()
            },
            Side::Right => Dfa {
                accepting: (0..self.states)
                    .filter(|&s| self.accepting.contains(&self.delta[s][letter]))
                    .collect(),
                ..self.clone()
            },
        })
    }
}

/// The classical derivative by a letter given by name.
pub fn classical_derivative(d: &Dfa, side: Side, letter: &str) -> Result<Dfa> {
    d.derivative(side, d.alphabet().index_of(letter)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn parity_runs() {
        let d = Dfa::parity(ab(), 0);
        assert!(d.run(&[]));
        assert!(!d.run_str("a").unwrap());
        assert!(d.run_str("abba").unwrap());
    }

    #[test]
    fn factor_automaton() {
        let d = Dfa::contains_factor(ab(), &[0, 1]);
        assert!(d.run_str("aab").unwrap());
        assert!(!d.run_str("bba").unwrap());
        let aab = Dfa::contains_factor(ab(), &[0, 0, 1]);
        assert!(aab.run_str("aaab").unwrap());
        assert!(!aab.run_str("abab").unwrap());
    }

    #[test]
    fn minimize_merges_duplicates() {
        // parity with state 1 duplicated as 2
        let d = Dfa::new(ab(), vec![vec![1, 0], vec![0, 2], vec![0, 1]], 0, [0]).unwrap();
        let m = d.minimize();
        assert_eq!(m.state_count(), 2);
        assert_eq!(m, m.minimize());
        assert_eq!(m, Dfa::parity(ab(), 0));
    }

    #[test]
    fn equivalence_with_witness() {
        let d = Dfa::parity(ab(), 0);
        assert_eq!(d.equiv(&d).unwrap(), DfaEquiv::Equivalent);
        assert_eq!(d.equiv(&d.complement()).unwrap(), DfaEquiv::Differ(vec![]));
        let other = Dfa::new(
            ab(),
            vec![vec![1, 0], vec![1, 2], vec![2, 2], vec![3, 3]],
            0,
            [2],
        )
        .unwrap();
        let ab_factor = Dfa::contains_factor(ab(), &[0, 1]);
        assert_eq!(other.equiv(&ab_factor).unwrap(), DfaEquiv::Equivalent);
    }

    #[test]
    fn derivatives() {
        let d = Dfa::parity(ab(), 0);
        let odd = classical_derivative(&d, Side::Left, "a").unwrap();
        assert!(odd.run_str("a").unwrap() && !odd.run(&[]));
        let ends_a = Dfa::new(ab(), vec![vec![1, 0], vec![1, 0]], 0, [1]).unwrap();
        let r = classical_derivative(&ends_a, Side::Right, "a").unwrap();
        assert_eq!(r.equiv(&Dfa::constant(ab(), true)).unwrap(), DfaEquiv::Equivalent);
        let empty = Dfa::constant(ab(), false);
        assert_eq!(empty.derivative(Side::Left, 0).unwrap(), empty);
        assert!(matches!(classical_derivative(&d, Side::Left, "z"), Err(Error::UnknownLetter(_))));
    }

    #[test]
    fn random_is_seeded() {
        let a = Dfa::random(&mut ChaCha8Rng::seed_from_u64(7), ab(), 4);
        let b = Dfa::random(&mut ChaCha8Rng::seed_from_u64(7), ab(), 4);
        assert_eq!(a, b);
        assert!(a.state_count() <= 4);
    }
}
