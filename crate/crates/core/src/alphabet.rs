//! Events and controllability-partitioned alphabets.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::Error;

/// A single event label together with its controllability status.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId {
    label: String,
    controllable: bool,
}

impl EventId {
    pub fn new(label: impl Into<String>, controllable: bool) -> Self {
        EventId {
            label: label.into(),
            controllable,
        }
    }

    pub fn controllable(label: impl Into<String>) -> Self {
        Self::new(label, true)
    }

    pub fn uncontrollable(label: impl Into<String>) -> Self {
        Self::new(label, false)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_controllable(&self) -> bool {
        self.controllable
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// A finite event set, kept sorted by label.
///
/// The position of an event in the sorted order is its *index*; generators
/// key their transitions by these indices, so iteration in index order is
/// iteration in label order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    events: Vec<EventId>,
}

impl Alphabet {
    pub fn empty() -> Self {
        Alphabet { events: Vec::new() }
    }

    /// Builds an alphabet, rejecting duplicate labels with conflicting
    /// controllability. Exact duplicates are collapsed.
    pub fn new(events: impl IntoIterator<Item = EventId>) -> Result<Self, Error> {
        let mut events: Vec<EventId> = events.into_iter().collect();
        events.sort();
        events.dedup();
        for w in events.windows(2) {
            if w[0].label == w[1].label {
                return Err(Error::ControllabilityConflict(w[0].label.clone()));
            }
        }
        Ok(Alphabet { events })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[EventId] {
        &self.events
    }

    pub fn iter(&self) -> impl Iterator<Item = &EventId> + '_ {
        self.events.iter()
    }

    pub fn get(&self, index: usize) -> &EventId {
        &self.events[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.events
            .binary_search_by(|e| e.label.as_str().cmp(label))
            .ok()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    pub fn find(&self, label: &str) -> Option<&EventId> {
        self.index_of(label).map(|i| &self.events[i])
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.events.iter().map(|e| e.label.as_str())
    }

    pub fn controllable(&self) -> impl Iterator<Item = &EventId> + '_ {
        self.events.iter().filter(|e| e.controllable)
    }

    pub fn uncontrollable(&self) -> impl Iterator<Item = &EventId> + '_ {
        self.events.iter().filter(|e| !e.controllable)
    }

    pub fn union(&self, other: &Alphabet) -> Result<Alphabet, Error> {
        Alphabet::new(self.events.iter().chain(other.events.iter()).cloned())
    }

    pub fn intersection(&self, other: &Alphabet) -> Alphabet {
        Alphabet {
            events: self
                .events
                .iter()
                .filter(|e| other.find(&e.label) == Some(e))
                .cloned()
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Alphabet) -> bool {
        self.events.iter().all(|e| other.contains(&e.label))
    }

    /// First label present in both alphabets, if any.
    pub fn first_shared(&self, other: &Alphabet) -> Option<String> {
        self.events
            .iter()
            .find(|e| other.contains(&e.label))
            .map(|e| e.label.to_string())
    }
}

impl FromIterator<EventId> for Alphabet {
    /// Panics on a controllability conflict; use [`Alphabet::new`] for
    /// untrusted input.
    fn from_iter<I: IntoIterator<Item = EventId>>(iter: I) -> Self {
        Alphabet::new(iter).expect("conflicting controllability for one label")
    }
}
