use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;

use super::Dfa;
use crate::error::{Error, Result};
use crate::kernel::{homomorphism_term, Alphabet, Term};

/// A monoid homomorphism `Σ* → Γ*`, given by the images of the letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Vec<usize>>,
}

impl Homomorphism {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Vec<usize>>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::BadParameters(format!(
                "expected {} images, got {}",
                source.len(),
                images.len()
            )));
        }
        if let Some(&c) = images.iter().flatten().find(|&&c| c >= target.len()) {
            return Err(Error::UnknownLetter(format!("#{c}")));
        }
        Ok(Homomorphism {
            source,
            target,
            images,
        })
    }

    /// Parses `a=cc,b=` (letters without an image map to ε).
    pub fn parse(source: Alphabet, target: Alphabet, spec: &str) -> Result<Self> {
        let mut images = vec![Vec::new(); source.len()];
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (l, img) = part
                .split_once('=')
                .ok_or_else(|| Error::BadParameters(format!("expected letter=image, got {part:?}")))?;
            images[source.index_of(l.trim())?] = target.parse_word(img.trim())?;
        }
        Homomorphism::new(source, target, images)
    }

    pub fn random(rng: &mut impl Rng, source: Alphabet, target: Alphabet, max_len: usize) -> Self {
        let images = (0..source.len())
            .map(|_| {
                let n = rng.gen_range(0..=max_len);
                (0..n).map(|_| rng.gen_range(0..target.len())).collect()
            })
            .collect();
        Homomorphism::new(source, target, images).unwrap()
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    pub fn apply(&self, w: &[usize]) -> Vec<usize> {
        w.iter().flat_map(|&a| self.images[a].iter().copied()).collect()
    }

    pub fn is_letter_to_letter(&self) -> bool {
        self.images.iter().all(|img| img.len() == 1)
    }

    /// The term `Word_Σ -> Word_Γ` sending `[w]` to `[h(w)]`.
    pub fn to_term(&self) -> Term {
        homomorphism_term(&self.source, &self.target, &self.images).expect("validated images")
    }

    /// `h⁻¹(L)` for `L` given by a DFA over the target alphabet.
    pub fn preimage(&self, d: &Dfa) -> Result<Dfa> {
        self.check_target(d)?;
        let delta = (0..d.state_count())
            .map(|s| self.images.iter().map(|img| d.run_from(s, img)).collect())
            .collect();
        Dfa::new(self.source.clone(), delta, d.initial(), d.accepting().iter().copied())
    }

    /// `h(L)` for a letter-to-letter `h`, by the subset construction.
    pub fn image(&self, d: &Dfa) -> Result<Dfa> {
        if d.alphabet() != &self.source {
            return Err(Error::BadParameters("DFA is not over the source alphabet".into()));
        }
        if !self.is_letter_to_letter() {
            return Err(Error::BadParameters("direct images need a letter-to-letter homomorphism".into()));
        }
        let start: BTreeSet<usize> = [d.initial()].into();
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut sets = vec![start];
        let mut delta = Vec::new();
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            let mut row = vec![0; self.target.len()];
            for (c, slot) in row.iter_mut().enumerate() {
                let next: BTreeSet<usize> = sets[i]
                    .iter()
                    .flat_map(|&s| {
                        (0..self.source.len())
                            .filter(move |&a| self.images[a][0] == c)
                            .map(move |a| d.step(s, a))
                    })
                    .collect();
                *slot = *ids.entry(next.clone()).or_insert_with(|| {
                    sets.push(next);
                    queue.push_back(sets.len() - 1);
                    sets.len() - 1
                });
            }
            if delta.len() <= i {
                delta.resize(i + 1, Vec::new());
            }
            delta[i] = row;
        }
        let accepting = sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.iter().any(|x| d.accepting().contains(x)))
            .map(|(i, _)| i);
        Dfa::new(self.target.clone(), delta, 0, accepting)
    }

    fn check_target(&self, d: &Dfa) -> Result<()> {
        if d.alphabet() != &self.target {
            return Err(Error::BadParameters(format!(
                "DFA over {} where {} was expected",
                d.alphabet(),
                self.target
            )));
        }
        Ok(())
    }
}
