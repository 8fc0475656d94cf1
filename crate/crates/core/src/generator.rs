//! Deterministic generators with marker states.

use alloc::collections::VecDeque;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::{Alphabet, Error, EventId};

/// A deterministic finite automaton `(Q, Σ, δ, q0, Qm)`.
///
/// States are the indices `0..num_states()`. The generator with zero states
/// has no initial state and represents the empty language; every operation in
/// this crate accepts it.
///
/// Outgoing transitions of a state are kept sorted by event index, which is
/// the same as sorted by event label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    alphabet: Alphabet,
    initial: Option<usize>,
    marked: Vec<bool>,
    delta: Vec<Vec<(usize, usize)>>,
}

impl Generator {
    /// The generator with no states over `alphabet`.
    pub fn empty(alphabet: Alphabet) -> Self {
        Generator {
            alphabet,
            initial: None,
            marked: Vec::new(),
            delta: Vec::new(),
        }
    }

    /// Builds and validates a generator from labelled transitions.
    ///
    /// With `num_states == 0` the result is the empty generator and `initial`
    /// is ignored.
    pub fn new<'a>(
        alphabet: Alphabet,
        num_states: usize,
        initial: usize,
        marked: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, &'a str, usize)>,
    ) -> Result<Self, Error> {
        if num_states == 0 {
            return Ok(Self::empty(alphabet));
        }
        if initial >= num_states {
            return Err(Error::InvalidState(initial));
        }
        let mut flags = vec![false; num_states];
        for m in marked {
            *flags.get_mut(m).ok_or(Error::InvalidState(m))? = true;
        }
        let mut delta = vec![Vec::new(); num_states];
        for (from, label, to) in transitions {
            if from >= num_states {
                return Err(Error::InvalidState(from));
            }
            if to >= num_states {
                return Err(Error::InvalidState(to));
            }
            let ev = alphabet
                .index_of(label)
                .ok_or_else(|| Error::UnknownEvent(label.to_string()))?;
            let row: &mut Vec<(usize, usize)> = &mut delta[from];
            match row.binary_search_by_key(&ev, |&(e, _)| e) {
                Ok(i) if row[i].1 == to => {}
                Ok(_) => {
                    return Err(Error::Nondeterministic {
                        state: from,
                        event: label.to_string(),
                    })
                }
                Err(i) => row.insert(i, (ev, to)),
            }
        }
        Ok(Generator {
            alphabet,
            initial: Some(initial),
            marked: flags,
            delta,
        })
    }

    /// Assembles a generator from index-level parts already known to be
    /// consistent. Rows are sorted here.
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        initial: Option<usize>,
        marked: Vec<bool>,
        mut delta: Vec<Vec<(usize, usize)>>,
    ) -> Self {
        debug_assert_eq!(marked.len(), delta.len());
        debug_assert_eq!(initial.is_none(), delta.is_empty());
        for row in &mut delta {
            row.sort_unstable();
            debug_assert!(row.windows(2).all(|w| w[0].0 != w[1].0));
        }
        Generator {
            alphabet,
            initial,
            marked,
            delta,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    /// True for the generator with no states.
    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn is_marked(&self, state: usize) -> bool {
        self.marked[state]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.marked
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    /// Outgoing `(event index, target)` pairs of `state`, sorted by event.
    pub fn out(&self, state: usize) -> &[(usize, usize)] {
        &self.delta[state]
    }

    pub fn next(&self, state: usize, event: usize) -> Option<usize> {
        let row = &self.delta[state];
        row.binary_search_by_key(&event, |&(e, _)| e)
            .ok()
            .map(|i| row[i].1)
    }

    pub fn next_label(&self, state: usize, label: &str) -> Option<usize> {
        self.alphabet
            .index_of(label)
            .and_then(|e| self.next(state, e))
    }

    /// All transitions as `(from, event, to)`, in state then label order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, &EventId, usize)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(move |(q, row)| row.iter().map(move |&(e, t)| (q, self.alphabet.get(e), t)))
    }

    /// Runs `word` from the initial state; `None` if it leaves `L(G)`.
    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> Option<usize> {
        let mut q = self.initial?;
        for l in word {
            q = self.next_label(q, l.as_ref())?;
        }
        Some(q)
    }

    /// Whether `word ∈ L(G)`.
    pub fn accepts_prefix<S: AsRef<str>>(&self, word: &[S]) -> bool {
        self.run(word).is_some()
    }

    /// Whether `word ∈ Lm(G)`.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        self.run(word).is_some_and(|q| self.marked[q])
    }

    /// Same automaton over a larger alphabet (no new transitions).
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Generator, Error> {
        let mut remap = Vec::with_capacity(self.alphabet.len());
        for e in self.alphabet.iter() {
            match alphabet.find(e.label()) {
                Some(f) if f == e => remap.push(alphabet.index_of(e.label()).unwrap()),
                Some(_) => return Err(Error::ControllabilityConflict(e.label().into())),
                None => return Err(Error::UnknownEvent(e.label().into())),
            }
        }
        let delta = self
            .delta
            .iter()
            .map(|row| row.iter().map(|&(e, t)| (remap[e], t)).collect())
            .collect();
        Ok(Generator::from_parts(
            alphabet,
            self.initial,
            self.marked.clone(),
            delta,
        ))
    }

    /// Sub-generator on the states with `keep[q]`; transitions touching
    /// dropped states vanish. Empty if the initial state is dropped.
    pub fn restrict(&self, keep: &[bool]) -> Generator {
        let Some(q0) = self.initial else {
            return self.clone();
        };
        if !keep[q0] {
            return Generator::empty(self.alphabet.clone());
        }
        let mut index = vec![usize::MAX; self.num_states()];
        let mut n = 0;
        for (q, &k) in keep.iter().enumerate() {
            if k {
                index[q] = n;
                n += 1;
            }
        }
        let mut marked = Vec::with_capacity(n);
        let mut delta = Vec::with_capacity(n);
        for q in (0..self.num_states()).filter(|&q| keep[q]) {
            marked.push(self.marked[q]);
            delta.push(
                self.delta[q]
                    .iter()
                    .filter(|&&(_, t)| keep[t])
                    .map(|&(e, t)| (e, index[t]))
                    .collect(),
            );
        }
        Generator::from_parts(self.alphabet.clone(), Some(index[q0]), marked, delta)
    }

    /// Renumbers the reachable states in breadth-first order from the initial
    /// state, exploring events in label order. Unreachable states are dropped.
    ///
    /// Two generators are isomorphic (on their reachable parts, with equal
    /// alphabets) iff their canonical forms are equal.
    pub fn canonical(&self) -> Generator {
        let Some(q0) = self.initial else {
            return self.clone();
        };
        let mut index = vec![usize::MAX; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        index[q0] = 0;
        order.push(q0);
        queue.push_back(q0);
        while let Some(q) = queue.pop_front() {
            for &(_, t) in &self.delta[q] {
                if index[t] == usize::MAX {
                    index[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let marked = order.iter().map(|&q| self.marked[q]).collect();
        let delta = order
            .iter()
            .map(|&q| self.delta[q].iter().map(|&(e, t)| (e, index[t])).collect())
            .collect();
        Generator::from_parts(self.alphabet.clone(), Some(0), marked, delta)
    }

    /// Adds a selfloop for every event of `events` not yet defined at each
    /// state; `events` is merged into the alphabet.
    pub fn selfloop(&self, events: &Alphabet) -> Result<Generator, Error> {
        let alphabet = self.alphabet.union(events)?;
        let g = self.with_alphabet(alphabet)?;
        let extra: Vec<usize> = events
            .labels()
            .map(|l| g.alphabet.index_of(l).unwrap())
            .collect();
        let mut delta = g.delta;
        for (q, row) in delta.iter_mut().enumerate() {
            for &e in &extra {
                if let Err(i) = row.binary_search_by_key(&e, |&(x, _)| x) {
                    row.insert(i, (e, q));
                }
            }
        }
        Ok(Generator::from_parts(
            g.alphabet, g.initial, g.marked, delta,
        ))
    }

    /// Labels of the events defined at `state`.
    pub fn enabled_labels(&self, state: usize) -> impl Iterator<Item = &str> + '_ {
        self.delta[state]
            .iter()
            .map(|&(e, _)| self.alphabet.get(e).label())
    }

    /// Human-readable one-line summary.
    pub fn summary(&self) -> String {
        alloc::format!(
            "{} states, {} transitions, {} marked, {} events",
            self.num_states(),
            self.num_transitions(),
            self.marked_states().count(),
            self.alphabet.len()
        )
    }
}
