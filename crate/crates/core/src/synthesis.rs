//! Template-based synthesis for plants made of groups of similar agents.
//!
//! The pipeline relabels the first `k_i` agents of each group onto the group
//! template alphabet, synthesizes a relabeled supervisor against that small
//! relabeled plant and inverse-relabels it. Nothing on the synthesis path
//! looks at agents past `max(k_i, 2)` in a group, so the supervisor and the
//! work to compute it do not depend on how many agents there are.
//!
//! The monolithic routines ([`full_plant`], [`monolithic_oracle`],
//! [`verify_sscsp`], [`check_condition_direct`]) build the whole plant and
//! exist to verify the scalable results on small instances. They stop with
//! [`Error::ScaleLimit`] past a state budget.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ops::{
    marked_equal, marked_subset, sync_product, sync_product_all, sync_product_all_bounded, trim,
};
use crate::relabel::{check_normality, check_similar_set, inverse_relabel, refine_map, relabel};
use crate::supcon::{is_controllable, meet_completed, supcon, ControllabilityReport};
use crate::{is_nonblocking, Alphabet, Error, EventId, Generator, RelabelingMap, Witness};

/// Default cap on product states for the monolithic routines.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

/// How agents of a group are compared with the group template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimilarityMode {
    /// Closed and marked languages of the relabeled agents coincide.
    #[default]
    Language,
    /// Relabeled agents have identical canonical forms.
    Isomorphism,
}

/// A group of similar agents and its parallelism budget `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    name: String,
    agents: Vec<Generator>,
    parallelism: usize,
    requested: usize,
}

impl Group {
    /// `parallelism` is clamped into `1..=agents.len()`; see
    /// [`Group::requested_parallelism`].
    pub fn new(
        name: impl Into<String>,
        agents: Vec<Generator>,
        parallelism: usize,
    ) -> Result<Self, Error> {
        let name = name.into();
        if agents.is_empty() {
            return Err(Error::EmptyGroup(name));
        }
        let requested = parallelism;
        let parallelism = parallelism.clamp(1, agents.len());
        Ok(Group {
            name,
            agents,
            parallelism,
            requested,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn agents(&self) -> &[Generator] {
        &self.agents
    }

    pub fn count(&self) -> usize {
        self.agents.len()
    }

    /// Effective `k`.
    pub fn parallelism(&self) -> usize {
        self.parallelism
    }

    pub fn requested_parallelism(&self) -> usize {
        self.requested
    }

    pub fn was_clamped(&self) -> bool {
        self.requested != self.parallelism
    }

    /// Union of the agent alphabets.
    pub fn alphabet(&self) -> Result<Alphabet, Error> {
        self.agents
            .iter()
            .try_fold(Alphabet::empty(), |acc, g| acc.union(g.alphabet()))
    }
}

/// `l ≥ 2` groups of agents and the relabeling map onto group templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiAgentPlant {
    groups: Vec<Group>,
    relabeling: RelabelingMap,
    mode: SimilarityMode,
}

impl MultiAgentPlant {
    pub fn new(groups: Vec<Group>, relabeling: RelabelingMap) -> Result<Self, Error> {
        if groups.len() < 2 {
            return Err(Error::TooFewGroups(groups.len()));
        }
        for g in &groups {
            for a in g.agents() {
                for e in a.alphabet().iter() {
                    if relabeling.source().find(e.label()) != Some(e) {
                        return Err(Error::UnknownEvent(e.label().to_string()));
                    }
                }
            }
        }
        Ok(MultiAgentPlant {
            groups,
            relabeling,
            mode: SimilarityMode::default(),
        })
    }

    pub fn with_similarity_mode(mut self, mode: SimilarityMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn relabeling(&self) -> &RelabelingMap {
        &self.relabeling
    }

    pub fn similarity_mode(&self) -> SimilarityMode {
        self.mode
    }

    /// Same plant with different parallelism budgets.
    pub fn with_parallelism(&self, ks: &[usize]) -> Result<Self, Error> {
        let groups = self
            .groups
            .iter()
            .zip(ks)
            .map(|(g, &k)| Group::new(g.name.clone(), g.agents.clone(), k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MultiAgentPlant {
            groups,
            ..self.clone()
        })
    }

    /// The plant with only the first `sizes[i]` agents of group `i`; the
    /// relabeling map is restricted to their events. Budgets are kept (and
    /// clamped).
    pub fn truncated(&self, sizes: &[usize]) -> Result<Self, Error> {
        let mut groups = Vec::new();
        let mut pairs = Vec::new();
        for (g, &n) in self.groups.iter().zip(sizes) {
            let agents: Vec<Generator> = g.agents.iter().take(n).cloned().collect();
            for a in &agents {
                for e in a.alphabet().iter() {
                    let t = self.relabeling.image(e.label()).unwrap();
                    pairs.push((e.clone(), t.to_string()));
                }
            }
            groups.push(Group::new(g.name.clone(), agents, g.requested)?);
        }
        let plant = MultiAgentPlant::new(groups, RelabelingMap::new(pairs)?)?;
        Ok(plant.with_similarity_mode(self.mode))
    }

    /// Group template `H_i = R(G_i1)`.
    pub fn template(&self, i: usize) -> Result<Generator, Error> {
        relabel(&self.groups[i].agents[0], &self.relabeling)
    }

    /// `M_i = R(G_i1 ∥ … ∥ G_ik_i)`.
    pub fn parallel_template(&self, i: usize) -> Result<Generator, Error> {
        let g = &self.groups[i];
        let prod = sync_product_all(&g.agents[..g.parallelism])?;
        relabel(&prod, &self.relabeling)
    }

    /// Union of all agent alphabets.
    pub fn alphabet(&self) -> Result<Alphabet, Error> {
        self.groups
            .iter()
            .try_fold(Alphabet::empty(), |acc, g| acc.union(&g.alphabet()?))
    }
}

/// Pass/fail of one assumption with an explanation on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionCheck {
    pub passed: bool,
    pub detail: Option<String>,
}

impl AssumptionCheck {
    fn ok() -> Self {
        AssumptionCheck {
            passed: true,
            detail: None,
        }
    }

    fn fail(detail: String) -> Self {
        AssumptionCheck {
            passed: false,
            detail: Some(detail),
        }
    }
}

/// Result of [`check_assumptions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionReport {
    /// Agents are nonblocking with pairwise disjoint alphabets.
    pub a1: AssumptionCheck,
    /// Group target alphabets are pairwise disjoint.
    pub a2: AssumptionCheck,
    /// The specification is unchanged by `R⁻¹R`.
    pub a3: AssumptionCheck,
    /// The one-agent-per-group supervisor is nonempty.
    pub a4: AssumptionCheck,
    /// Every group is a similar set under the map.
    pub similarity: AssumptionCheck,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed)
    }

    pub fn checks(&self) -> [(&'static str, &AssumptionCheck); 5] {
        [
            ("A1", &self.a1),
            ("A2", &self.a2),
            ("A3", &self.a3),
            ("A4", &self.a4),
            ("similar", &self.similarity),
        ]
    }
}

/// Completes `spec` over the plant alphabet `sigma` by selflooping the events
/// it does not mention.
pub fn complete_spec(spec: &Generator, sigma: &Alphabet) -> Result<Generator, Error> {
    if let Some(e) = spec
        .alphabet()
        .iter()
        .find(|e| sigma.find(e.label()) != Some(*e))
    {
        return Err(Error::UnknownEvent(e.label().to_string()));
    }
    let missing = Alphabet::new(
        sigma
            .iter()
            .filter(|e| !spec.alphabet().contains(e.label()))
            .cloned(),
    )?;
    spec.selfloop(&missing)
}

/// Checks A1–A4 and group similarity. Failures are reported, not returned.
pub fn check_assumptions(plant: &MultiAgentPlant, spec: &Generator) -> AssumptionReport {
    let agents: Vec<(usize, usize, &Generator)> = plant
        .groups()
        .iter()
        .enumerate()
        .flat_map(|(i, g)| g.agents().iter().enumerate().map(move |(j, a)| (i, j, a)))
        .collect();

    let mut a1 = AssumptionCheck::ok();
    'outer: for (n, &(i, j, a)) in agents.iter().enumerate() {
        if !is_nonblocking(a) {
            a1 = AssumptionCheck::fail(format!(
                "agent {} of group `{}` is blocking",
                j + 1,
                plant.groups()[i].name()
            ));
            break;
        }
        for &(i2, j2, b) in &agents[n + 1..] {
            if let Some(l) = a.alphabet().first_shared(b.alphabet()) {
                a1 = AssumptionCheck::fail(format!(
                    "event `{l}` shared by agent {} of `{}` and agent {} of `{}`",
                    j + 1,
                    plant.groups()[i].name(),
                    j2 + 1,
                    plant.groups()[i2].name()
                ));
                break 'outer;
            }
        }
    }

    let r = plant.relabeling();
    let mut a2 = AssumptionCheck::ok();
    let targets: Vec<Result<Alphabet, Error>> = plant
        .groups()
        .iter()
        .map(|g| r.image_alphabet(&g.alphabet()?))
        .collect();
    'a2: for (i, ti) in targets.iter().enumerate() {
        let ti = match ti {
            Ok(t) => t,
            Err(e) => {
                a2 = AssumptionCheck::fail(format!("{e}"));
                break;
            }
        };
        for (i2, tj) in targets.iter().enumerate().skip(i + 1) {
            if let Ok(tj) = tj {
                if let Some(l) = ti.first_shared(tj) {
                    a2 = AssumptionCheck::fail(format!(
                        "target event `{l}` used by groups `{}` and `{}`",
                        plant.groups()[i].name(),
                        plant.groups()[i2].name()
                    ));
                    break 'a2;
                }
            }
        }
    }

    let a3 = match plant
        .alphabet()
        .and_then(|sigma| complete_spec(spec, &sigma))
        .and_then(|e| check_normality(&e, r))
    {
        Ok(true) => AssumptionCheck::ok(),
        Ok(false) => AssumptionCheck::fail("R⁻¹(R(E)) differs from E".to_string()),
        Err(e) => AssumptionCheck::fail(format!("{e}")),
    };

    let a4 = match sup1(plant, spec) {
        Ok(s) if !s.is_empty() => AssumptionCheck::ok(),
        Ok(_) => AssumptionCheck::fail("supervisor with one agent per group is empty".into()),
        Err(e) => AssumptionCheck::fail(format!("{e}")),
    };

    let mut similarity = AssumptionCheck::ok();
    for g in plant.groups() {
        if let Err(e) = check_similar_set(g.name(), g.agents(), r, plant.similarity_mode()) {
            similarity = AssumptionCheck::fail(format!("{e}"));
            break;
        }
    }

    AssumptionReport {
        a1,
        a2,
        a3,
        a4,
        similarity,
    }
}

/// `M = ∥_i R(G_i1 ∥ … ∥ G_ik_i)`.
pub fn build_relabeled_plant(plant: &MultiAgentPlant) -> Result<Generator, Error> {
    let parts = (0..plant.groups().len())
        .map(|i| plant.parallel_template(i))
        .collect::<Result<Vec<_>, _>>()?;
    sync_product_all(&parts)
}

/// Modular check of one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCondition {
    pub group: String,
    pub report: ControllabilityReport,
    /// The group had one agent and was checked against a relabeled copy.
    pub cloned: bool,
}

/// Result of [`check_condition_modular`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularConditionReport {
    pub groups: Vec<GroupCondition>,
}

impl ModularConditionReport {
    pub fn passed(&self) -> bool {
        self.groups.iter().all(|g| g.report.controllable)
    }

    pub fn first_failure(&self) -> Option<&GroupCondition> {
        self.groups.iter().find(|g| !g.report.controllable)
    }
}

/// Fresh-label copy of `agent` and the map extended to the copy's events.
fn clone_agent(agent: &Generator, r: &RelabelingMap) -> Result<(Generator, RelabelingMap), Error> {
    let rename = |l: &str| {
        let mut s = format!("{l}#2");
        while r.source().contains(&s) || r.target().contains(&s) {
            s.push('#');
        }
        s
    };
    let alphabet = Alphabet::new(
        agent
            .alphabet()
            .iter()
            .map(|e| EventId::new(rename(e.label()), e.is_controllable())),
    )?;
    let labels: Vec<(String, usize, usize)> = agent
        .transitions()
        .map(|(p, e, q)| (rename(e.label()), p, q))
        .collect();
    let copy = Generator::new(
        alphabet.clone(),
        agent.num_states(),
        agent.initial().unwrap_or(0),
        agent.marked_states(),
        labels.iter().map(|(l, p, q)| (*p, l.as_str(), *q)),
    )?;
    let extra = RelabelingMap::new(agent.alphabet().iter().map(|e| {
        (
            EventId::new(rename(e.label()), e.is_controllable()),
            r.image(e.label()).unwrap().to_string(),
        )
    }))?;
    Ok((copy, r.merge(&extra)?))
}

/// For every group, whether `Lm(H_i)` is controllable with respect to
/// `R(L(G_i1 ∥ G_i2))`. A group with a single agent is checked against a
/// copy of that agent with fresh labels.
pub fn check_condition_modular(plant: &MultiAgentPlant) -> Result<ModularConditionReport, Error> {
    let r = plant.relabeling();
    let mut groups = Vec::new();
    for (i, g) in plant.groups().iter().enumerate() {
        let h = plant.template(i)?;
        let (pair, cloned) = if g.count() >= 2 {
            let p = sync_product(&g.agents()[0], &g.agents()[1])?;
            (relabel(&p, r)?, false)
        } else {
            let (copy, r2) = clone_agent(&g.agents()[0], r)?;
            let p = sync_product(&g.agents()[0], &copy)?;
            (relabel(&p, &r2)?, true)
        };
        groups.push(GroupCondition {
            group: g.name().to_string(),
            report: is_controllable(&h, &pair),
            cloned,
        });
    }
    Ok(ModularConditionReport { groups })
}

/// The whole plant `G = ∥_ij G_ij`, refusing to exceed `budget` states.
pub fn full_plant(plant: &MultiAgentPlant, budget: usize) -> Result<Generator, Error> {
    sync_product_all_bounded(plant.groups().iter().flat_map(|g| g.agents()), budget)
}

/// Whether `Lm(M)` is controllable with respect to `R(L(G))`, computed on the
/// whole plant.
pub fn check_condition_direct(
    plant: &MultiAgentPlant,
    budget: usize,
) -> Result<ControllabilityReport, Error> {
    let m = build_relabeled_plant(plant)?;
    let g = full_plant(plant, budget)?;
    let rg = relabel(&g, plant.relabeling())?;
    Ok(is_controllable(&m, &rg))
}

/// Monolithic supervisor for the plant with one agent per group.
pub fn sup1(plant: &MultiAgentPlant, spec: &Generator) -> Result<Generator, Error> {
    let g1 = sync_product_all(plant.groups().iter().map(|g| &g.agents()[0]))?;
    supcon(&g1, spec)
}

/// Monolithic supervisor for the whole plant.
pub fn monolithic_oracle(
    plant: &MultiAgentPlant,
    spec: &Generator,
    budget: usize,
) -> Result<Generator, Error> {
    let g = full_plant(plant, budget)?;
    supcon(&g, spec)
}

/// Everything produced by one run of the scalable pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisArtifacts {
    /// Relabeling used (the refined map for the refined pipeline).
    pub relabeling: RelabelingMap,
    /// Group names, aligned with `templates` and `parallel_templates`.
    pub groups: Vec<String>,
    /// `H_i`.
    pub templates: Vec<Generator>,
    /// `M_i`.
    pub parallel_templates: Vec<Generator>,
    /// Relabeled plant `M`.
    pub relabeled_plant: Generator,
    /// Relabeled specification `F = R(E)`.
    pub relabeled_spec: Generator,
    /// Relabeled supervisor.
    pub rsup: Generator,
    /// Scalable supervisor `R⁻¹(RSUP)`.
    pub ssup: Generator,
    /// Modular sufficient condition.
    pub condition: ModularConditionReport,
}

fn run_pipeline(
    plant: &MultiAgentPlant,
    spec: &Generator,
    relabeled_plant: Generator,
    parallel_templates: Vec<Generator>,
) -> Result<SynthesisArtifacts, Error> {
    let r = plant.relabeling();
    let spec = complete_spec(spec, r.source())?;
    let relabeled_spec = relabel(&spec, r)?;
    let rsup = supcon(&relabeled_plant, &relabeled_spec)?;
    if rsup.is_empty() {
        return Err(Error::EmptySupervisor);
    }
    let ssup = inverse_relabel(&rsup, r)?;
    let templates = (0..plant.groups().len())
        .map(|i| plant.template(i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SynthesisArtifacts {
        relabeling: r.clone(),
        groups: plant
            .groups()
            .iter()
            .map(|g| g.name().to_string())
            .collect(),
        templates,
        parallel_templates,
        relabeled_plant,
        relabeled_spec,
        rsup,
        ssup,
        condition: check_condition_modular(plant)?,
    })
}

/// Scalable supervisor: `F = R(E)`, `RSUP = supC(Lm(M) ∩ F)`,
/// `SSUP = R⁻¹(RSUP)`. The modular condition is recorded, not enforced.
pub fn synthesize_scalable(
    plant: &MultiAgentPlant,
    spec: &Generator,
) -> Result<SynthesisArtifacts, Error> {
    let parts = (0..plant.groups().len())
        .map(|i| plant.parallel_template(i))
        .collect::<Result<Vec<_>, _>>()?;
    let m = sync_product_all(&parts)?;
    run_pipeline(plant, spec, m, parts)
}

/// The plant regrouped by a partition of each group, under the refined map.
/// Every part becomes a group of its own with parallelism 1.
pub fn refined_plant(
    plant: &MultiAgentPlant,
    parts: &[Vec<Vec<usize>>],
) -> Result<MultiAgentPlant, Error> {
    let r2 = refine_map(plant.relabeling(), plant, parts)?;
    let mut groups = Vec::new();
    for (g, partition) in plant.groups().iter().zip(parts) {
        for (p, part) in partition.iter().enumerate() {
            let agents = part.iter().map(|&j| g.agents()[j].clone()).collect();
            let name = if partition.len() == 1 {
                g.name().to_string()
            } else {
                format!("{}{}", g.name(), crate::relabel::part_suffix(p))
            };
            groups.push(Group::new(name, agents, 1)?);
        }
    }
    Ok(MultiAgentPlant::new(groups, r2)?.with_similarity_mode(plant.similarity_mode()))
}

/// Refined pipeline: each group is split into parts with disjoint target
/// alphabets, one template per part, and the relabeled plant is the product
/// of all part templates. Fails if the modular condition fails for a part.
pub fn synthesize_refined(
    plant: &MultiAgentPlant,
    spec: &Generator,
    parts: &[Vec<Vec<usize>>],
) -> Result<SynthesisArtifacts, Error> {
    let refined = refined_plant(plant, parts)?;
    let cond = check_condition_modular(&refined)?;
    if let Some(f) = cond.first_failure() {
        return Err(Error::ConditionFailed {
            group: f.group.clone(),
            witness: f.report.witness.clone().unwrap(),
        });
    }
    synthesize_scalable(&refined, spec)
}

/// Pipeline with the relabeled plant replaced by `R(G)`. Requires
/// `E ∩ Lm(G)` to be controllable with respect to `L(G)`.
pub fn synthesize_corollary2(
    plant: &MultiAgentPlant,
    spec: &Generator,
    budget: usize,
) -> Result<SynthesisArtifacts, Error> {
    let g = full_plant(plant, budget)?;
    let (k, _) = meet_completed(&g, spec)?;
    let report = is_controllable(&k, &g);
    if let Some(w) = report.witness {
        return Err(Error::SpecNotControllable(w));
    }
    let m = relabel(&g, plant.relabeling())?;
    let parts = (0..plant.groups().len())
        .map(|i| plant.parallel_template(i))
        .collect::<Result<Vec<_>, _>>()?;
    run_pipeline(plant, spec, m, parts)
}

/// Result of [`verify_sscsp`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SscspReport {
    /// `Lm(SUP1) ⊆ Lm(SSUP) ∩ Lm(G)`.
    pub lower: bool,
    /// `Lm(SSUP) ∩ Lm(G) ⊆ Lm(SUP)`.
    pub upper: bool,
    /// `Lm(SSUP) ∩ Lm(G) = Lm(SUP)`.
    pub equal: bool,
    /// `R(Lm(SUP)) ⊆ Lm(RSUP)`.
    pub sup_relabel_in_rsup: bool,
    pub ssup_states: usize,
    pub controlled_states: usize,
    pub sup_states: usize,
    pub sup1_states: usize,
}

impl SscspReport {
    pub fn holds(&self) -> bool {
        self.lower && self.upper
    }
}

/// `Lm(SSUP) ∩ Lm(G)` as a trim generator.
pub fn controlled_behavior(ssup: &Generator, g: &Generator) -> Result<Generator, Error> {
    Ok(trim(&sync_product(ssup, g)?))
}

/// Checks `Lm(SUP1) ⊆ Lm(SSUP) ∩ Lm(G) ⊆ Lm(SUP)` against the monolithic
/// supervisors.
pub fn verify_sscsp(
    artifacts: &SynthesisArtifacts,
    plant: &MultiAgentPlant,
    spec: &Generator,
    budget: usize,
) -> Result<SscspReport, Error> {
    let g = full_plant(plant, budget)?;
    let sup = supcon(&g, spec)?;
    let sup_1 = sup1(plant, spec)?;
    let controlled = controlled_behavior(&artifacts.ssup, &g)?;
    let relabeled_sup = relabel(&sup, plant.relabeling())?;
    Ok(SscspReport {
        lower: marked_subset(&sup_1, &controlled),
        upper: marked_subset(&controlled, &sup),
        equal: marked_equal(&controlled, &sup),
        sup_relabel_in_rsup: marked_subset(&relabeled_sup, &artifacts.rsup),
        ssup_states: artifacts.ssup.num_states(),
        controlled_states: controlled.num_states(),
        sup_states: sup.num_states(),
        sup1_states: sup_1.num_states(),
    })
}

/// Shortest witness for `Lm(M)` failing controllability w.r.t. `R(L(G))`,
/// packaged as an error.
pub fn require_condition(report: &ModularConditionReport) -> Result<(), Error> {
    match report.first_failure() {
        None => Ok(()),
        Some(f) => Err(Error::ConditionFailed {
            group: f.group.clone(),
            witness: f.report.witness.clone().unwrap_or(Witness {
                prefix: Vec::new(),
                event: String::new(),
            }),
        }),
    }
}
