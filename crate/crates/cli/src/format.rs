//! JSON encoding of generators.
//!
//! ```json
//! {
//!   "format": 1,
//!   "events": [{"label": "11", "controllable": true}],
//!   "states": 2,
//!   "initial": 0,
//!   "marked": [0],
//!   "transitions": [[0, "11", 1]]
//! }
//! ```

use std::fs;
use std::path::Path;

use scalsup_core::{Alphabet, EventId, Generator};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDoc {
    pub label: String,
    pub controllable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    pub events: Vec<EventDoc>,
    pub states: usize,
    #[serde(default)]
    pub initial: Option<usize>,
    #[serde(default)]
    pub marked: Vec<usize>,
    #[serde(default)]
    pub transitions: Vec<(usize, String, usize)>,
}

impl GeneratorDoc {
    /// Canonical document for `g`.
    pub fn from_generator(g: &Generator) -> Self {
        let g = g.canonical();
        GeneratorDoc {
            format: Some(FORMAT_VERSION),
            events: g
                .alphabet()
                .iter()
                .map(|e| EventDoc {
                    label: e.label().to_string(),
                    controllable: e.is_controllable(),
                })
                .collect(),
            states: g.num_states(),
            initial: g.initial(),
            marked: g.marked_states().collect(),
            transitions: g
                .transitions()
                .map(|(p, e, q)| (p, e.label().to_string(), q))
                .collect(),
        }
    }

    /// `location` prefixes error messages (e.g. `spec[0]`).
    pub fn to_generator(&self, location: &str) -> Result<Generator, CliError> {
        if let Some(v) = self.format {
            if v != FORMAT_VERSION {
                return Err(CliError::parse(
                    format!("{location}.format"),
                    format!("unsupported format version {v}"),
                ));
            }
        }
        let alphabet = Alphabet::new(
            self.events
                .iter()
                .map(|e| EventId::new(e.label.clone(), e.controllable)),
        )
        .map_err(|e| CliError::parse(format!("{location}.events"), e.to_string()))?;
        if self.states == 0 {
            return Ok(Generator::empty(alphabet));
        }
        let initial = self.initial.ok_or_else(|| {
            CliError::parse(format!("{location}.initial"), "missing initial state")
        })?;
        Generator::new(
            alphabet,
            self.states,
            initial,
            self.marked.iter().copied(),
            self.transitions
                .iter()
                .map(|(p, l, q)| (*p, l.as_str(), *q)),
        )
        .map_err(|e| CliError::parse(location.to_string(), e.to_string()))
    }
}

pub fn generator_to_json(g: &Generator) -> String {
    let mut s = serde_json::to_string_pretty(&GeneratorDoc::from_generator(g))
        .expect("generator documents always serialize");
    s.push('\n');
    s
}

pub fn generator_from_json(text: &str, location: &str) -> Result<Generator, CliError> {
    let doc: GeneratorDoc = serde_json::from_str(text).map_err(|e| CliError::json(location, &e))?;
    doc.to_generator("generator")
}

pub fn save_generator(path: &Path, g: &Generator) -> Result<(), CliError> {
    fs::write(path, generator_to_json(g)).map_err(|e| CliError::io(path, e))
}

pub fn load_generator(path: &Path) -> Result<Generator, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    generator_from_json(&text, &path.display().to_string())
}
