//! Relabeling maps and their action on generators.
//!
//! A [`RelabelingMap`] `R : Σ → T` is total on its source alphabet, onto its
//! target alphabet, keeps controllability, and `Σ ∩ T = ∅`. Relabeling a
//! generator may introduce nondeterminism, which is removed by subset
//! construction; inverse relabeling never changes the state count.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ops::{language_equal, Nfa};
use crate::synthesis::{MultiAgentPlant, SimilarityMode};
use crate::{is_isomorphic, Alphabet, Error, EventId, Generator};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelabelingMap {
    map: BTreeMap<String, String>,
    source: Alphabet,
    target: Alphabet,
}

impl RelabelingMap {
    /// Builds a map from `(source event, target label)` pairs. Target
    /// controllability is inherited from the source events.
    pub fn new(pairs: impl IntoIterator<Item = (EventId, String)>) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        let mut sources = Vec::new();
        let mut targets: BTreeMap<String, bool> = BTreeMap::new();
        for (ev, tgt) in pairs {
            if let Some(prev) = map.get(ev.label()) {
                if *prev != tgt {
                    return Err(Error::ConflictingImage(ev.label().to_string()));
                }
                continue;
            }
            match targets.get(&tgt) {
                Some(&c) if c != ev.is_controllable() => {
                    return Err(Error::ControllabilityNotPreserved(tgt));
                }
                _ => {
                    targets.insert(tgt.clone(), ev.is_controllable());
                }
            }
            map.insert(ev.label().to_string(), tgt);
            sources.push(ev);
        }
        let source = Alphabet::new(sources)?;
        let target = Alphabet::new(targets.into_iter().map(|(l, c)| EventId::new(l, c)))?;
        if let Some(l) = source.first_shared(&target) {
            return Err(Error::AlphabetOverlap(l));
        }
        Ok(RelabelingMap {
            map,
            source,
            target,
        })
    }

    /// The map with no events.
    pub fn empty() -> Self {
        RelabelingMap {
            map: BTreeMap::new(),
            source: Alphabet::empty(),
            target: Alphabet::empty(),
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn image(&self, label: &str) -> Option<&str> {
        self.map.get(label).map(String::as_str)
    }

    /// Source events mapped onto `target`, in label order: the class `[σ]`.
    pub fn class(&self, target: &str) -> impl Iterator<Item = &EventId> + '_ {
        let target = target.to_string();
        self.source
            .iter()
            .filter(move |e| self.map[e.label()] == target)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&EventId, &str)> + '_ {
        self.source
            .iter()
            .map(move |e| (e, self.map[e.label()].as_str()))
    }

    /// Union of two maps with disjoint source alphabets.
    pub fn merge(&self, other: &RelabelingMap) -> Result<RelabelingMap, Error> {
        RelabelingMap::new(
            self.pairs()
                .chain(other.pairs())
                .map(|(e, t)| (e.clone(), t.to_string())),
        )
    }

    /// `R(a)` for an alphabet contained in the source.
    pub fn image_alphabet(&self, a: &Alphabet) -> Result<Alphabet, Error> {
        let mut out = Vec::with_capacity(a.len());
        for e in a.iter() {
            let t = self
                .image(e.label())
                .ok_or_else(|| Error::UnknownEvent(e.label().to_string()))?;
            out.push(self.target.find(t).unwrap().clone());
        }
        Alphabet::new(out)
    }

    /// `R⁻¹(a)` for an alphabet contained in the target.
    pub fn preimage_alphabet(&self, a: &Alphabet) -> Result<Alphabet, Error> {
        let mut out = Vec::new();
        for t in a.iter() {
            if self.target.find(t.label()) != Some(t) {
                return Err(Error::UnknownEvent(t.label().to_string()));
            }
            out.extend(self.class(t.label()).cloned());
        }
        Alphabet::new(out)
    }

    /// `R(s)` for a string over the source alphabet.
    pub fn relabel_word<S: AsRef<str>>(&self, word: &[S]) -> Option<Vec<String>> {
        word.iter()
            .map(|l| self.image(l.as_ref()).map(str::to_string))
            .collect()
    }
}

/// `R(g)`: relabel every transition, then determinize by subset construction.
/// A subset state is marked iff it contains a marked state. The result is
/// canonical and over `R(Σ_g)`.
pub fn relabel(g: &Generator, r: &RelabelingMap) -> Result<Generator, Error> {
    let alphabet = r.image_alphabet(g.alphabet())?;
    let Some(q0) = g.initial() else {
        return Ok(Generator::empty(alphabet));
    };
    let map: Vec<usize> = g
        .alphabet()
        .labels()
        .map(|l| alphabet.index_of(r.image(l).unwrap()).unwrap())
        .collect();
    let delta = (0..g.num_states())
        .map(|q| g.out(q).iter().map(|&(e, t)| (Some(map[e]), t)).collect())
        .collect();
    let marked = (0..g.num_states()).map(|q| g.is_marked(q)).collect();
    Ok(Nfa {
        alphabet,
        initial: q0,
        marked,
        delta,
    }
    .determinize())
}

/// `R⁻¹(h)`: each `τ`-transition is replaced by one transition per source
/// event in `[τ]`, all to the same target. Same states as `h`.
pub fn inverse_relabel(h: &Generator, r: &RelabelingMap) -> Result<Generator, Error> {
    let alphabet = r.preimage_alphabet(h.alphabet())?;
    let Some(q0) = h.initial() else {
        return Ok(Generator::empty(alphabet));
    };
    let classes: Vec<Vec<usize>> = h
        .alphabet()
        .labels()
        .map(|t| {
            r.class(t)
                .map(|e| alphabet.index_of(e.label()).unwrap())
                .collect()
        })
        .collect();
    let delta = (0..h.num_states())
        .map(|q| {
            h.out(q)
                .iter()
                .flat_map(|&(e, t)| classes[e].iter().map(move |&s| (s, t)))
                .collect()
        })
        .collect();
    let marked = (0..h.num_states()).map(|q| h.is_marked(q)).collect();
    Ok(Generator::from_parts(alphabet, Some(q0), marked, delta))
}

/// Whether `R⁻¹(R(e))` has the same closed and marked languages as `e`.
/// This implies that `Lm(e)` is normal with respect to the relabeling.
pub fn check_normality(e: &Generator, r: &RelabelingMap) -> Result<bool, Error> {
    let back = inverse_relabel(&relabel(e, r)?, r)?;
    Ok(language_equal(&back, e))
}

/// Checks that every agent of a group relabels to the same generator and
/// returns that template. `group` only names the group in errors.
pub fn check_similar_set(
    group: &str,
    agents: &[Generator],
    r: &RelabelingMap,
    mode: SimilarityMode,
) -> Result<Generator, Error> {
    let (first, rest) = agents
        .split_first()
        .ok_or_else(|| Error::EmptyGroup(group.to_string()))?;
    let template = relabel(first, r)?;
    for (j, agent) in rest.iter().enumerate() {
        let h = relabel(agent, r)?;
        let same = match mode {
            SimilarityMode::Language => language_equal(&h, &template),
            SimilarityMode::Isomorphism => is_isomorphic(&h, &template),
        };
        if !same {
            return Err(Error::SimilarityViolation {
                group: group.to_string(),
                agent: j + 1,
            });
        }
    }
    Ok(template)
}

/// Default two-way split of `n` agents: the first `⌊n/2⌋` and the rest.
/// A single agent stays in one part.
pub fn halves(n: usize) -> Vec<Vec<usize>> {
    if n < 2 {
        return alloc::vec![(0..n).collect()];
    }
    alloc::vec![(0..n / 2).collect(), (n / 2..n).collect()]
}

/// Suffix appended to target labels of part `p` (zero-based) of a group.
pub fn part_suffix(p: usize) -> String {
    "'".repeat(p)
}

/// Refines `r` so that the agents in part `p` of group `i` map to a fresh copy
/// of the group's target alphabet (labels suffixed with `p` primes). Part 0
/// keeps the original targets.
///
/// `parts[i]` must partition the agent indices `0..n_i` of group `i` into
/// nonempty parts.
pub fn refine_map(
    r: &RelabelingMap,
    plant: &MultiAgentPlant,
    parts: &[Vec<Vec<usize>>],
) -> Result<RelabelingMap, Error> {
    if parts.len() != plant.groups().len() {
        return Err(Error::InvalidPartition(alloc::format!(
            "{} partitions for {} groups",
            parts.len(),
            plant.groups().len()
        )));
    }
    let mut pairs: BTreeMap<String, (EventId, String)> = r
        .pairs()
        .map(|(e, t)| (e.label().to_string(), (e.clone(), t.to_string())))
        .collect();
    for (group, partition) in plant.groups().iter().zip(parts) {
        let n = group.agents().len();
        let mut seen = alloc::vec![false; n];
        for (p, part) in partition.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::EmptyGroup(alloc::format!(
                    "{}[part {p}]",
                    group.name()
                )));
            }
            for &j in part {
                if j >= n || core::mem::replace(&mut seen[j], true) {
                    return Err(Error::InvalidPartition(alloc::format!(
                        "agent index {j} in group `{}`",
                        group.name()
                    )));
                }
                if p == 0 {
                    continue;
                }
                for e in group.agents()[j].alphabet().iter() {
                    let base = r
                        .image(e.label())
                        .ok_or_else(|| Error::UnknownEvent(e.label().to_string()))?;
                    let fresh = alloc::format!("{base}{}", part_suffix(p));
                    if r.source().contains(&fresh) || r.target().contains(&fresh) {
                        return Err(Error::LabelCollision(fresh));
                    }
                    pairs.insert(e.label().to_string(), (e.clone(), fresh));
                }
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(alloc::format!(
                "agent {j} of group `{}` is in no part",
                group.name()
            )));
        }
    }
    RelabelingMap::new(pairs.into_values())
}
