//! Scalable supervisory control synthesis for multi-agent discrete-event
//! systems.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`Generator`]: deterministic automata with marker states over a
//!   controllability-partitioned [`Alphabet`], plus the usual language
//!   operations ([`ops`]).
//! * [`RelabelingMap`]: event relabeling, subset-construction relabeling of
//!   generators and inverse relabeling ([`relabel`]).
//! * Classical synthesis: controllability checks and the supremal
//!   controllable sublanguage ([`supcon`]).
//! * The template-based pipeline for plants made of groups of similar agents
//!   ([`synthesis`]) and its distributed counterpart ([`localize`]).
//!
//! All operations are pure functions on immutable values.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod alphabet;
pub mod generator;
pub mod localize;
pub mod ops;
pub mod relabel;
pub mod supcon;
pub mod synthesis;

mod error;

pub use alphabet::{Alphabet, EventId};
pub use error::{Error, Witness};
pub use generator::Generator;
pub use localize::{LocalControllerSet, LocalizationCertificate};
pub use ops::{
    is_isomorphic, is_nonblocking, language_equal, language_subset, marked_equal, marked_subset,
    natural_projection, sync_product, sync_product_all, trim,
};
pub use relabel::RelabelingMap;
pub use supcon::{is_controllable, is_nonconflicting, supcon, ControllabilityReport};
pub use synthesis::{
    AssumptionReport, Group, MultiAgentPlant, SimilarityMode, SynthesisArtifacts,
    DEFAULT_STATE_BUDGET,
};
