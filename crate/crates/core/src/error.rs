use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A failed controllability check: `prefix` is in the closure of the
/// candidate language, `event` is uncontrollable, `prefix·event` is allowed by
/// the plant but leaves the closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub prefix: Vec<String>,
    pub event: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            f.write_str("t=ε")?;
        } else {
            write!(f, "t={}", self.prefix.join("."))?;
        }
        write!(f, ", τ={}", self.event)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// One label declared both controllable and uncontrollable.
    ControllabilityConflict(String),
    /// A label used by a transition or map is not part of the relevant alphabet.
    UnknownEvent(String),
    /// Two transitions leave the same state under the same event.
    Nondeterministic { state: usize, event: String },
    /// A state index out of range (or an initial state on an empty generator).
    InvalidState(usize),
    /// One source event mapped to two different targets.
    ConflictingImage(String),
    /// Source and target alphabets of a relabeling map overlap.
    AlphabetOverlap(String),
    /// Two source events map to one target with different controllability.
    ControllabilityNotPreserved(String),
    /// A freshly generated label already exists.
    LabelCollision(String),
    /// Plant needs at least two groups.
    TooFewGroups(usize),
    /// A group, or a part of a group partition, has no agents.
    EmptyGroup(String),
    /// Malformed group partition for the refined map.
    InvalidPartition(String),
    /// An agent's relabeling does not match its group template.
    SimilarityViolation { group: String, agent: usize },
    /// A product would exceed the configured state budget.
    ScaleLimit { budget: usize },
    /// The relabeled supervisor is empty.
    EmptySupervisor,
    /// The sufficient condition for scalability failed in a group.
    ConditionFailed { group: String, witness: Witness },
    /// The specification is not controllable with respect to the plant.
    SpecNotControllable(Witness),
    /// The local controllers could not be certified control equivalent.
    LocalizationFailed { group: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ControllabilityConflict(l) => {
                write!(f, "event `{l}` declared both controllable and uncontrollable")
            }
            Error::UnknownEvent(l) => write!(f, "unknown event `{l}`"),
            Error::Nondeterministic { state, event } => {
                write!(f, "state {state} has two transitions on `{event}`")
            }
            Error::InvalidState(s) => write!(f, "invalid state index {s}"),
            Error::ConflictingImage(l) => write!(f, "event `{l}` mapped to two targets"),
            Error::AlphabetOverlap(l) => {
                write!(f, "event `{l}` appears in both source and target alphabets")
            }
            Error::ControllabilityNotPreserved(l) => {
                write!(f, "relabeling onto `{l}` mixes controllable and uncontrollable events")
            }
            Error::LabelCollision(l) => write!(f, "generated label `{l}` is already in use"),
            Error::TooFewGroups(n) => write!(f, "plant has {n} group(s); at least two required"),
            Error::EmptyGroup(g) => write!(f, "group `{g}` has no agents"),
            Error::InvalidPartition(m) => write!(f, "invalid partition: {m}"),
            Error::SimilarityViolation { group, agent } => write!(
                f,
                "agent {agent} of group `{group}` does not relabel to the group template"
            ),
            Error::ScaleLimit { budget } => {
                write!(f, "product exceeds the state budget of {budget}")
            }
            Error::EmptySupervisor => f.write_str("relabeled supervisor is empty"),
            Error::ConditionFailed { group, witness } => write!(
                f,
                "template of group `{group}` is not controllable w.r.t. two relabeled agents ({witness})"
            ),
            Error::SpecNotControllable(w) => {
                write!(f, "specification is not controllable w.r.t. the plant ({w})")
            }
            Error::LocalizationFailed { group } => {
                write!(f, "local controller for group `{group}` failed certification")
            }
        }
    }
}

impl core::error::Error for Error {}
