//! Seeded random multi-agent plants for self-checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scalsup_core::{Alphabet, EventId, Generator, Group, MultiAgentPlant, RelabelingMap};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Agent `j` of group `g`: `states` states, events `{g}{j}{e}` for each
/// entry of `controllable`, transitions from `edges` as `(from, event, to)`.
fn agent(
    g: usize,
    j: usize,
    states: usize,
    marked: &[usize],
    controllable: &[bool],
    edges: &[(usize, usize, usize)],
) -> Generator {
    let label = |e: usize| format!("{g}{j}{e}");
    let alphabet = Alphabet::new(
        controllable
            .iter()
            .enumerate()
            .map(|(e, &c)| EventId::new(label(e), c)),
    )
    .expect("distinct labels");
    let labels: Vec<(usize, String, usize)> =
        edges.iter().map(|&(p, e, q)| (p, label(e), q)).collect();
    Generator::new(
        alphabet,
        states,
        0,
        marked.iter().copied(),
        labels.iter().map(|(p, l, q)| (*p, l.as_str(), *q)),
    )
    .expect("valid random agent")
}

/// Two groups of up to `max_agents` similar agents with up to three states
/// and two or three events each. Agents of group `g` map `{g}{j}{e}` onto
/// `t{g}{e}`.
pub fn random_plant(rng: &mut impl Rng, max_agents: usize) -> MultiAgentPlant {
    let mut groups = Vec::new();
    let mut pairs = Vec::new();
    for g in 1..=2 {
        let states = rng.gen_range(1..=3);
        let events = rng.gen_range(2..=3);
        let controllable: Vec<bool> = (0..events).map(|_| rng.gen_bool(0.5)).collect();
        let mut edges = Vec::new();
        for p in 0..states {
            for e in 0..events {
                if rng.gen_bool(0.5) {
                    edges.push((p, e, rng.gen_range(0..states)));
                }
            }
        }
        let mut marked: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
        if marked.is_empty() {
            marked.push(0);
        }
        let n = rng.gen_range(1..=max_agents);
        let agents: Vec<Generator> = (1..=n)
            .map(|j| agent(g, j, states, &marked, &controllable, &edges))
            .collect();
        for a in &agents {
            for ev in a.alphabet().iter() {
                let idx = ev.label().chars().last().unwrap();
                pairs.push((ev.clone(), format!("t{g}{idx}")));
            }
        }
        let k = rng.gen_range(1..=n);
        groups.push(Group::new(format!("g{g}"), agents, k).expect("nonempty group"));
    }
    let map = RelabelingMap::new(pairs).expect("valid random map");
    MultiAgentPlant::new(groups, map).expect("two groups")
}
