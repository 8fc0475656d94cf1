//! Randomized property suites with a fixed seed. Each suite returns
//! `Err(message)` with the shrunk counterexample on failure.
//!
//! Also compiled into the acceptance harness of the command-line crate.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use proptest::collection::vec;
use proptest::option;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use scalsup_core::relabel::{inverse_relabel, relabel};
use scalsup_core::synthesis::{check_condition_direct, check_condition_modular};
use scalsup_core::{
    is_controllable, is_nonblocking, language_equal, language_subset, marked_equal, marked_subset,
    natural_projection, supcon, sync_product, trim, Alphabet, EventId, Generator, Group,
    MultiAgentPlant, RelabelingMap,
};

pub const CASES: u32 = 256;
pub const SEED: u64 = 0x5ca1_ab1e;

const LABELS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Up to six states over `events` events: marking flags and an optional
/// successor per (state, event).
#[derive(Debug, Clone)]
pub struct RawGen {
    pub marked: Vec<bool>,
    pub edges: Vec<Vec<Option<usize>>>,
}

pub fn raw_gen(events: usize, max_states: usize) -> impl Strategy<Value = RawGen> {
    (1..=max_states).prop_flat_map(move |n| {
        (
            vec(any::<bool>(), n),
            vec(vec(option::weighted(0.6, 0..n), events), n),
        )
            .prop_map(|(marked, edges)| RawGen { marked, edges })
    })
}

pub fn build(alphabet: &Alphabet, raw: &RawGen) -> Generator {
    let labels: Vec<&str> = alphabet.labels().collect();
    let mut transitions = Vec::new();
    for (p, row) in raw.edges.iter().enumerate() {
        for (e, t) in row.iter().enumerate() {
            if let Some(q) = t {
                transitions.push((p, labels[e], *q));
            }
        }
    }
    Generator::new(
        alphabet.clone(),
        raw.marked.len(),
        0,
        raw.marked
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(q, _)| q),
        transitions,
    )
    .unwrap()
}

/// A source alphabet of one to six events, a map collapsing it onto at most
/// three targets per controllability class, and two generators over it.
#[derive(Debug, Clone)]
pub struct Setup {
    pub alphabet: Alphabet,
    pub map: RelabelingMap,
    pub g1: Generator,
    pub g2: Generator,
}

pub fn setup() -> impl Strategy<Value = Setup> {
    (1..=6usize).prop_flat_map(|k| {
        (
            vec(any::<bool>(), k),
            vec(0..3usize, k),
            raw_gen(k, 6),
            raw_gen(k, 6),
        )
            .prop_map(move |(ctrl, image, r1, r2)| {
                let events: Vec<EventId> =
                    (0..k).map(|i| EventId::new(LABELS[i], ctrl[i])).collect();
                let alphabet = Alphabet::new(events.clone()).unwrap();
                let map = RelabelingMap::new(events.into_iter().zip(&image).map(|(e, &t)| {
                    let c = if e.is_controllable() { "c" } else { "u" };
                    (e, format!("T{t}{c}"))
                }))
                .unwrap();
                Setup {
                    g1: build(&alphabet, &r1),
                    g2: build(&alphabet, &r2),
                    alphabet,
                    map,
                }
            })
    })
}

/// A map as in [`setup`] and two generators over its target alphabet.
pub fn target_setup() -> impl Strategy<Value = (RelabelingMap, Generator, Generator)> {
    setup().prop_flat_map(|s| {
        let n = s.map.target().len();
        (Just(s.map), raw_gen(n, 6), raw_gen(n, 6)).prop_map(|(map, r1, r2)| {
            let t = map.target().clone();
            let h1 = build(&t, &r1);
            let h2 = build(&t, &r2);
            (map, h1, h2)
        })
    })
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    })
}

fn run<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner().run(&strategy, test).map_err(|e| e.to_string())
}

fn ensure(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

/// All states marked after trimming: a generator for the prefix closure of
/// the marked language.
pub fn closure(g: &Generator) -> Generator {
    let t = trim(g);
    let labels: Vec<(usize, String, usize)> = t
        .transitions()
        .map(|(p, e, q)| (p, e.label().to_string(), q))
        .collect();
    if t.is_empty() {
        return t;
    }
    Generator::new(
        t.alphabet().clone(),
        t.num_states(),
        t.initial().unwrap(),
        0..t.num_states(),
        labels.iter().map(|(p, l, q)| (*p, l.as_str(), *q)),
    )
    .unwrap()
}

/// Intersection of two generators over the same alphabet.
fn meet(a: &Generator, b: &Generator) -> Generator {
    assert_eq!(a.alphabet(), b.alphabet());
    sync_product(a, b).unwrap()
}

/// Words of length at most `depth` in `L(g)`, each with its marking.
pub fn words(g: &Generator, depth: usize) -> BTreeSet<(Vec<String>, bool)> {
    let mut out = BTreeSet::new();
    let Some(q0) = g.initial() else {
        return out;
    };
    let mut stack = vec![(q0, Vec::<String>::new())];
    while let Some((q, w)) = stack.pop() {
        out.insert((w.clone(), g.is_marked(q)));
        if w.len() == depth {
            continue;
        }
        for (p, e, t) in g.transitions() {
            if p == q {
                let mut w2 = w.clone();
                w2.push(e.label().to_string());
                stack.push((t, w2));
            }
        }
    }
    out
}

/// Supremal controllable sublanguage computed over the full pair space:
/// first restrict to pairs that can reach a marked pair, then delete pairs
/// where the plant has an uncontrollable event the pair cannot follow, and
/// repeat. Returns the surviving pairs reachable from the initial pair.
pub fn supcon_oracle(plant: &Generator, spec: &Generator) -> Generator {
    let alphabet = plant.alphabet().clone();
    assert_eq!(&alphabet, spec.alphabet());
    let (np, ns) = (plant.num_states(), spec.num_states());
    if np == 0 || ns == 0 {
        return Generator::empty(alphabet);
    }
    let labels: Vec<String> = alphabet.labels().map(str::to_string).collect();
    let step = |(p, s): (usize, usize), e: usize| -> Option<(usize, usize)> {
        Some((plant.next(p, e)?, spec.next(s, e)?))
    };
    let all: Vec<(usize, usize)> = (0..np).flat_map(|p| (0..ns).map(move |s| (p, s))).collect();
    let mut good: BTreeSet<(usize, usize)> = all.iter().copied().collect();
    loop {
        let before = good.len();
        let mut co: BTreeSet<(usize, usize)> = good
            .iter()
            .copied()
            .filter(|&(p, s)| plant.is_marked(p) && spec.is_marked(s))
            .collect();
        loop {
            let grown: Vec<(usize, usize)> = good
                .iter()
                .copied()
                .filter(|x| !co.contains(x))
                .filter(|&x| (0..labels.len()).any(|e| step(x, e).is_some_and(|y| co.contains(&y))))
                .collect();
            if grown.is_empty() {
                break;
            }
            co.extend(grown);
        }
        good = co
            .iter()
            .copied()
            .filter(|&(p, s)| {
                (0..labels.len()).all(|e| {
                    alphabet.get(e).is_controllable()
                        || plant.next(p, e).is_none()
                        || step((p, s), e).is_some_and(|y| co.contains(&y))
                })
            })
            .collect();
        if good.len() == before {
            break;
        }
    }
    let start = (plant.initial().unwrap(), spec.initial().unwrap());
    if !good.contains(&start) {
        return Generator::empty(alphabet);
    }
    let mut index = BTreeMap::new();
    index.insert(start, 0usize);
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    let mut transitions = Vec::new();
    while let Some(x) = queue.pop_front() {
        for (e, label) in labels.iter().enumerate() {
            if let Some(y) = step(x, e).filter(|y| good.contains(y)) {
                let next = index.len();
                let t = *index.entry(y).or_insert_with(|| {
                    order.push(y);
                    queue.push_back(y);
                    next
                });
                transitions.push((index[&x], label.as_str(), t));
            }
        }
    }
    let marked: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, &(p, s))| plant.is_marked(p) && spec.is_marked(s))
        .map(|(i, _)| i)
        .collect();
    Generator::new(alphabet.clone(), order.len(), 0, marked, transitions).unwrap()
}

pub fn relabel_closure() -> Result<(), String> {
    run(setup(), |s| {
        let lhs = relabel(&closure(&s.g1), &s.map).unwrap();
        let rhs = closure(&relabel(&s.g1, &s.map).unwrap());
        ensure(
            language_equal(&trim(&lhs), &rhs),
            "R(closure L) = closure R(L)",
        )
    })
}

pub fn relabel_intersection() -> Result<(), String> {
    run(setup(), |s| {
        let lhs = relabel(&meet(&s.g1, &s.g2), &s.map).unwrap();
        let r1 = relabel(&s.g1, &s.map).unwrap();
        let r2 = relabel(&s.g2, &s.map).unwrap();
        let rhs = meet(&r1, &r2);
        ensure(language_subset(&lhs, &rhs), "R(L1 ∩ L2) ⊆ R(L1) ∩ R(L2)")
    })
}

pub fn inverse_closure() -> Result<(), String> {
    run(target_setup(), |(map, h, _)| {
        let lhs = inverse_relabel(&closure(&h), &map).unwrap();
        let rhs = closure(&inverse_relabel(&h, &map).unwrap());
        ensure(
            language_equal(&trim(&lhs), &rhs),
            "R⁻¹(closure H) = closure R⁻¹(H)",
        )
    })
}

pub fn inverse_intersection() -> Result<(), String> {
    run(target_setup(), |(map, h1, h2)| {
        let lhs = inverse_relabel(&meet(&h1, &h2), &map).unwrap();
        let a = inverse_relabel(&h1, &map).unwrap();
        let b = inverse_relabel(&h2, &map).unwrap();
        ensure(
            language_equal(&lhs, &meet(&a, &b)),
            "R⁻¹(H1 ∩ H2) = R⁻¹(H1) ∩ R⁻¹(H2)",
        )
    })
}

pub fn relabel_inverse_identity() -> Result<(), String> {
    run(target_setup(), |(map, h, _)| {
        let back = relabel(&inverse_relabel(&h, &map).unwrap(), &map).unwrap();
        ensure(language_equal(&back, &h), "R(R⁻¹(H)) = H")
    })
}

pub fn inverse_relabel_contains() -> Result<(), String> {
    run(setup(), |s| {
        let back = inverse_relabel(&relabel(&s.g1, &s.map).unwrap(), &s.map).unwrap();
        ensure(language_subset(&s.g1, &back), "L ⊆ R⁻¹(R(L))")
    })
}

pub fn relabel_keeps_nonblocking() -> Result<(), String> {
    run(setup(), |s| {
        let g = trim(&s.g1);
        ensure(
            is_nonblocking(&relabel(&g, &s.map).unwrap()),
            "R(G) nonblocking",
        )
    })
}

pub fn inverse_keeps_state_count() -> Result<(), String> {
    run(target_setup(), |(map, h, _)| {
        let g = inverse_relabel(&h, &map).unwrap();
        ensure(g.num_states() == h.num_states(), "|R⁻¹(H)| = |H|")
    })
}

pub fn supcon_properties() -> Result<(), String> {
    run(setup(), |s| {
        let (plant, spec) = (&s.g1, &s.g2);
        let sup = supcon(plant, spec).unwrap();
        ensure(is_nonblocking(&sup), "nonblocking")?;
        ensure(is_controllable(&sup, plant).controllable, "controllable")?;
        ensure(
            marked_subset(&sup, &meet(plant, spec)),
            "within spec ∩ plant",
        )?;
        ensure(language_subset(&sup, plant), "within plant")?;
        let oracle = supcon_oracle(plant, spec);
        ensure(
            language_equal(&sup, &trim(&oracle)),
            "equals fixpoint oracle",
        )
    })
}

pub fn language_equal_matches_enumeration() -> Result<(), String> {
    let alphabet = Alphabet::new([
        EventId::controllable("a"),
        EventId::uncontrollable("b"),
        EventId::controllable("c"),
    ])
    .unwrap();
    run((raw_gen(3, 3), raw_gen(3, 3)), move |(r1, r2)| {
        let (a, b) = (trim(&build(&alphabet, &r1)), trim(&build(&alphabet, &r2)));
        // Two automata with n1 and n2 states that differ do so on a word of
        // length below n1 + n2.
        let depth = a.num_states() + b.num_states();
        let same = words(&a, depth) == words(&b, depth);
        let equal = language_equal(&a, &b) && marked_equal(&a, &b);
        ensure(equal == same, "language comparison agrees with enumeration")
    })
}

pub fn trim_and_canonical_idempotent() -> Result<(), String> {
    run(setup(), |s| {
        let t = trim(&s.g1);
        ensure(trim(&t) == t, "trim idempotent")?;
        let c = s.g1.canonical();
        ensure(c.canonical() == c, "canonical idempotent")?;
        ensure(language_equal(&c, &s.g1), "canonical keeps languages")
    })
}

pub fn product_laws() -> Result<(), String> {
    run(setup(), |s| {
        let half: Vec<EventId> = s
            .alphabet
            .iter()
            .take(s.alphabet.len().div_ceil(2))
            .cloned()
            .collect();
        let third = natural_projection(&s.g2, &Alphabet::new(half).unwrap());
        let ab = sync_product(&s.g1, &third).unwrap();
        let ba = sync_product(&third, &s.g1).unwrap();
        ensure(language_equal(&ab, &ba), "commutative")?;
        ensure(marked_equal(&ab, &ba), "commutative (marked)")?;
        let l = sync_product(&ab, &s.g2).unwrap();
        let r = sync_product(&s.g1, &sync_product(&third, &s.g2).unwrap()).unwrap();
        ensure(language_equal(&l, &r), "associative")?;
        ensure(marked_equal(&l, &r), "associative (marked)")
    })
}

/// Two groups of up to three similar agents with two or three events each.
pub fn random_plant() -> impl Strategy<Value = MultiAgentPlant> {
    let group = (2..=3usize)
        .prop_flat_map(|k| (vec(any::<bool>(), k), raw_gen(k, 3), 1..=3usize, 0..3usize));
    (group.clone(), group).prop_map(|(g1, g2)| {
        let mut groups = Vec::new();
        let mut pairs = Vec::new();
        for (gi, (ctrl, raw, n, k)) in [g1, g2].into_iter().enumerate() {
            let agents: Vec<Generator> = (1..=n)
                .map(|j| {
                    let events: Vec<EventId> = ctrl
                        .iter()
                        .enumerate()
                        .map(|(e, &c)| EventId::new(format!("g{gi}a{j}e{e}"), c))
                        .collect();
                    for ev in &events {
                        let e = ev.label().rsplit('e').next().unwrap();
                        pairs.push((ev.clone(), format!("T{gi}e{e}")));
                    }
                    build(&Alphabet::new(events).unwrap(), &raw)
                })
                .collect();
            groups.push(Group::new(format!("g{gi}"), agents, k % n + 1).unwrap());
        }
        MultiAgentPlant::new(groups, RelabelingMap::new(pairs).unwrap()).unwrap()
    })
}

pub fn modular_implies_direct() -> Result<(), String> {
    run(random_plant(), |plant| {
        if !check_condition_modular(&plant).unwrap().passed() {
            return Ok(());
        }
        let direct = check_condition_direct(&plant, 1_000_000).unwrap();
        ensure(direct.controllable, "modular pass implies direct pass")
    })
}

/// Every suite with its name.
pub type Suite = fn() -> Result<(), String>;

pub fn all() -> Vec<(&'static str, Suite)> {
    vec![
        ("R(closure L) = closure R(L)", relabel_closure),
        ("R(L1 ∩ L2) ⊆ R(L1) ∩ R(L2)", relabel_intersection),
        ("R⁻¹(closure H) = closure R⁻¹(H)", inverse_closure),
        ("R⁻¹(H1 ∩ H2) = R⁻¹(H1) ∩ R⁻¹(H2)", inverse_intersection),
        ("R(R⁻¹(H)) = H", relabel_inverse_identity),
        ("L ⊆ R⁻¹(R(L))", inverse_relabel_contains),
        ("relabeling keeps nonblocking", relabel_keeps_nonblocking),
        (
            "inverse relabeling keeps state count",
            inverse_keeps_state_count,
        ),
        ("supcon properties and fixpoint oracle", supcon_properties),
        (
            "language_equal vs enumeration",
            language_equal_matches_enumeration,
        ),
        (
            "trim and canonical idempotent",
            trim_and_canonical_idempotent,
        ),
        ("product commutative and associative", product_laws),
        ("modular condition implies direct", modular_implies_direct),
    ]
}
