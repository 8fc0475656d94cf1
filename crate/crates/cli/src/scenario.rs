//! Scenario files: groups of agents, the relabeling map and the
//! specification, as one JSON document.
//!
//! A group either lists its agents explicitly or gives one `template` whose
//! labels contain `{j}`; the template is instantiated for `j = 1..=count`.
//! Relabel keys may use the same scheme. In specification generators, a
//! label with `{j}` stands for every instantiated label it matches.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use scalsup_core::ops::sync_product_all;
use scalsup_core::{
    EventId, Generator, Group, MultiAgentPlant, RelabelingMap, SimilarityMode, DEFAULT_STATE_BUDGET,
};
use serde::Deserialize;

use crate::error::CliError;
use crate::format::{EventDoc, GeneratorDoc, FORMAT_VERSION};

const INDEX: &str = "{j}";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    format: u32,
    name: String,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    groups: Vec<GroupDoc>,
    spec: Vec<GeneratorDoc>,
    #[serde(default)]
    options: OptionsDoc,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    name: String,
    #[serde(default)]
    count: Option<usize>,
    #[serde(default)]
    parallelism: Option<usize>,
    #[serde(default)]
    template: Option<GeneratorDoc>,
    #[serde(default)]
    agents: Option<Vec<GeneratorDoc>>,
    relabel: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsDoc {
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    budget: Option<usize>,
    #[serde(default)]
    defaults: bool,
}

/// Command-line adjustments applied while loading.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    /// Agent counts per group (template groups instantiate this many agents,
    /// explicit groups keep their first `n`).
    pub sizes: Option<Vec<usize>>,
    /// Parallelism per group.
    pub parallelism: Option<Vec<usize>>,
    /// Missing parallelism defaults to 1.
    pub defaults: bool,
    pub budget: Option<usize>,
}

/// A loaded scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub plant: MultiAgentPlant,
    pub spec: Generator,
    pub budget: usize,
    pub warnings: Vec<String>,
}

pub fn load_scenario(path: &Path, overrides: &Overrides) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scenario(&text, &path.display().to_string(), overrides)
}

fn instantiate(label: &str, j: usize) -> String {
    label.replace(INDEX, &j.to_string())
}

fn instantiate_doc(doc: &GeneratorDoc, j: usize) -> GeneratorDoc {
    GeneratorDoc {
        format: doc.format,
        events: doc
            .events
            .iter()
            .map(|e| EventDoc {
                label: instantiate(&e.label, j),
                controllable: e.controllable,
            })
            .collect(),
        states: doc.states,
        initial: doc.initial,
        marked: doc.marked.clone(),
        transitions: doc
            .transitions
            .iter()
            .map(|(p, l, q)| (*p, instantiate(l, j), *q))
            .collect(),
    }
}

/// Expands `{j}` labels of a specification over `1..=max_index`, keeping
/// only labels the plant knows.
fn expand_spec(doc: &GeneratorDoc, max_index: usize, known: &dyn Fn(&str) -> bool) -> GeneratorDoc {
    let expand = |label: &str| -> Vec<String> {
        if label.contains(INDEX) {
            (1..=max_index)
                .map(|j| instantiate(label, j))
                .filter(|l| known(l))
                .collect()
        } else {
            vec![label.to_string()]
        }
    };
    GeneratorDoc {
        format: doc.format,
        events: doc
            .events
            .iter()
            .flat_map(|e| {
                expand(&e.label).into_iter().map(|label| EventDoc {
                    label,
                    controllable: e.controllable,
                })
            })
            .collect(),
        states: doc.states,
        initial: doc.initial,
        marked: doc.marked.clone(),
        transitions: doc
            .transitions
            .iter()
            .flat_map(|(p, l, q)| expand(l).into_iter().map(move |l| (*p, l, *q)))
            .collect(),
    }
}

pub fn parse_scenario(text: &str, file: &str, overrides: &Overrides) -> Result<Scenario, CliError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| CliError::json(file, &e))?;
    if doc.format != FORMAT_VERSION {
        return Err(CliError::parse(
            format!("{file}: format"),
            format!("unsupported format version {}", doc.format),
        ));
    }
    let n_groups = doc.groups.len();
    for (what, v) in [
        ("--sizes", &overrides.sizes),
        ("--k", &overrides.parallelism),
    ] {
        if let Some(v) = v {
            if v.len() != n_groups {
                return Err(CliError::parse(
                    what,
                    format!("{} values for {n_groups} groups", v.len()),
                ));
            }
        }
    }
    let defaults = doc.options.defaults || overrides.defaults;
    let mut warnings = Vec::new();
    let mut groups = Vec::new();
    let mut pairs: Vec<(EventId, String)> = Vec::new();
    for (i, g) in doc.groups.iter().enumerate() {
        let at = |field: &str| format!("{file}: groups[{i}].{field}");
        let agents: Vec<Generator> = match (&g.template, &g.agents) {
            (Some(t), None) => {
                let count = overrides
                    .sizes
                    .as_ref()
                    .map(|s| s[i])
                    .or(g.count)
                    .ok_or_else(|| CliError::parse(at("count"), "missing field `count`"))?;
                (1..=count)
                    .map(|j| instantiate_doc(t, j).to_generator(&at("template")))
                    .collect::<Result<_, _>>()?
            }
            (None, Some(list)) => {
                let keep = overrides.sizes.as_ref().map_or(list.len(), |s| s[i]);
                if keep > list.len() {
                    return Err(CliError::parse(
                        at("agents"),
                        format!("{keep} agents requested, {} listed", list.len()),
                    ));
                }
                list.iter()
                    .take(keep)
                    .enumerate()
                    .map(|(j, a)| a.to_generator(&at(&format!("agents[{j}]"))))
                    .collect::<Result<_, _>>()?
            }
            _ => {
                return Err(CliError::parse(
                    at("template"),
                    "exactly one of `template` and `agents` is required",
                ))
            }
        };
        let k = match overrides
            .parallelism
            .as_ref()
            .map(|k| k[i])
            .or(g.parallelism)
        {
            Some(k) => k,
            None if defaults => 1,
            None => {
                return Err(CliError::parse(
                    at("parallelism"),
                    "missing field `parallelism`",
                ))
            }
        };
        for (j, a) in agents.iter().enumerate() {
            for e in a.alphabet().iter() {
                let target = g
                    .relabel
                    .iter()
                    .find(|(key, _)| instantiate(key, j + 1) == e.label())
                    .map(|(_, t)| t.clone())
                    .ok_or_else(|| {
                        CliError::parse(
                            at("relabel"),
                            format!("no image for event `{}`", e.label()),
                        )
                    })?;
                pairs.push((e.clone(), target));
            }
        }
        let group = Group::new(g.name.clone(), agents, k)?;
        if group.was_clamped() {
            warnings.push(format!(
                "group `{}`: parallelism {} clamped to {}",
                group.name(),
                group.requested_parallelism(),
                group.parallelism()
            ));
        }
        groups.push(group);
    }
    let relabeling = RelabelingMap::new(pairs)?;
    let mode = match doc.options.mode.as_deref() {
        None | Some("language") => SimilarityMode::Language,
        Some("isomorphism") => SimilarityMode::Isomorphism,
        Some(other) => {
            return Err(CliError::parse(
                format!("{file}: options.mode"),
                format!("expected `language` or `isomorphism`, got `{other}`"),
            ))
        }
    };
    let plant = MultiAgentPlant::new(groups, relabeling)?.with_similarity_mode(mode);

    let max_index = plant.groups().iter().map(Group::count).max().unwrap_or(0);
    let known = |l: &str| plant.relabeling().source().contains(l);
    let specs = doc
        .spec
        .iter()
        .enumerate()
        .map(|(s, d)| expand_spec(d, max_index, &known).to_generator(&format!("{file}: spec[{s}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = sync_product_all(&specs)?;

    Ok(Scenario {
        name: doc.name,
        plant,
        spec,
        budget: overrides
            .budget
            .or(doc.options.budget)
            .unwrap_or(DEFAULT_STATE_BUDGET),
        warnings,
    })
}

/// Scenarios shipped with the tool, by file name.
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "small-factory.scn",
        include_str!("../scenarios/small-factory.scn"),
    ),
    (
        "transfer-line.scn",
        include_str!("../scenarios/transfer-line.scn"),
    ),
    (
        "mutual-exclusion.scn",
        include_str!("../scenarios/mutual-exclusion.scn"),
    ),
    ("fig4.scn", include_str!("../scenarios/fig4.scn")),
];

/// Text of a bundled scenario; the `.scn` extension is optional.
pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name || n.strip_suffix(".scn") == Some(name))
        .map(|(_, t)| *t)
}

/// Loads `name` from disk if it exists, otherwise from the bundled set.
pub fn resolve_scenario(name: &str, overrides: &Overrides) -> Result<Scenario, CliError> {
    let path = Path::new(name);
    if path.exists() {
        return load_scenario(path, overrides);
    }
    match bundled(name) {
        Some(text) => parse_scenario(text, name, overrides),
        None => Err(CliError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such scenario"),
        )),
    }
}
