//! Controllability checking and the supremal controllable sublanguage.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::ops::{is_nonblocking, sync_product, trim};
use crate::{Error, Generator, Witness};

/// Outcome of a controllability check. `witness` is present iff the language
/// is not controllable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllabilityReport {
    pub controllable: bool,
    pub witness: Option<Witness>,
}

impl ControllabilityReport {
    fn pass() -> Self {
        ControllabilityReport {
            controllable: true,
            witness: None,
        }
    }

    fn fail(witness: Witness) -> Self {
        ControllabilityReport {
            controllable: false,
            witness: Some(witness),
        }
    }
}

/// Whether `Lm(k)` is controllable with respect to `L(l)`, i.e.
/// `closure(Lm(k))·Σu ∩ L(l) ⊆ closure(Lm(k))`.
///
/// `k` is trimmed first; `l` is used as given. Uncontrollability of an event
/// is read from `l`'s alphabet. On failure the witness has the shortest
/// prefix, ties broken by label order.
pub fn is_controllable(k: &Generator, l: &Generator) -> ControllabilityReport {
    let k = trim(k);
    let (Some(p0), Some(q0)) = (k.initial(), l.initial()) else {
        return ControllabilityReport::pass();
    };
    let to_k: Vec<Option<usize>> = l
        .alphabet()
        .labels()
        .map(|lb| k.alphabet().index_of(lb))
        .collect();
    let to_l: Vec<Option<usize>> = k
        .alphabet()
        .labels()
        .map(|lb| l.alphabet().index_of(lb))
        .collect();

    // node -> (parent node, event label)
    let mut parent: Vec<Option<(usize, String)>> = vec![None];
    let mut nodes = vec![(p0, q0)];
    let mut seen = BTreeMap::new();
    seen.insert((p0, q0), 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let (p, q) = nodes[n];
        for &(e, _) in l.out(q) {
            let ev = l.alphabet().get(e);
            if ev.is_controllable() {
                continue;
            }
            if to_k[e].and_then(|f| k.next(p, f)).is_none() {
                let mut prefix = Vec::new();
                let mut cur = n;
                while let Some((par, lb)) = &parent[cur] {
                    prefix.push(lb.clone());
                    cur = *par;
                }
                prefix.reverse();
                return ControllabilityReport::fail(Witness {
                    prefix,
                    event: ev.label().to_string(),
                });
            }
        }
        for &(e, p2) in k.out(p) {
            let Some(q2) = to_l[e].and_then(|f| l.next(q, f)) else {
                continue;
            };
            if let alloc::collections::btree_map::Entry::Vacant(v) = seen.entry((p2, q2)) {
                v.insert(nodes.len());
                parent.push(Some((n, k.alphabet().get(e).label().to_string())));
                nodes.push((p2, q2));
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    ControllabilityReport::pass()
}

/// Product of `plant` with `spec` restricted to the plant alphabet: spec
/// events the plant does not know are dropped, plant events the spec does not
/// know are selflooped. Returns the product and the plant state of each
/// product state.
pub(crate) fn meet_completed(
    plant: &Generator,
    spec: &Generator,
) -> Result<(Generator, Vec<usize>), Error> {
    for e in spec.alphabet().iter() {
        if let Some(f) = plant.alphabet().find(e.label()) {
            if f != e {
                return Err(Error::ControllabilityConflict(e.label().to_string()));
            }
        }
    }
    let alphabet = plant.alphabet().clone();
    let (Some(p0), Some(s0)) = (plant.initial(), spec.initial()) else {
        return Ok((Generator::empty(alphabet), Vec::new()));
    };
    let in_spec: Vec<Option<usize>> = alphabet
        .labels()
        .map(|l| spec.alphabet().index_of(l))
        .collect();
    let mut index = BTreeMap::new();
    index.insert((p0, s0), 0usize);
    let mut states = vec![(p0, s0)];
    let mut delta = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (p, s) = states[next];
        next += 1;
        let mut row = Vec::new();
        for &(e, p2) in plant.out(p) {
            let s2 = match in_spec[e] {
                Some(f) => match spec.next(s, f) {
                    Some(s2) => s2,
                    None => continue,
                },
                None => s,
            };
            let t = *index.entry((p2, s2)).or_insert_with(|| {
                states.push((p2, s2));
                states.len() - 1
            });
            row.push((e, t));
        }
        delta.push(row);
    }
    let marked = states
        .iter()
        .map(|&(p, s)| plant.is_marked(p) && spec.is_marked(s))
        .collect();
    let plant_state = states.iter().map(|&(p, _)| p).collect();
    Ok((
        Generator::from_parts(alphabet, Some(0), marked, delta),
        plant_state,
    ))
}

/// Generator for `supC(Lm(spec) ∩ Lm(plant))` with respect to `L(plant)`.
///
/// The spec is completed by selflooping plant events it does not mention;
/// events it mentions but the plant lacks are dropped. On the product, states
/// where an uncontrollable plant event is blocked are deleted, then the
/// product is trimmed, alternating until nothing changes. The result is trim
/// and canonical, and empty when the supremal element is empty.
pub fn supcon(plant: &Generator, spec: &Generator) -> Result<Generator, Error> {
    let (prod, plant_state) = meet_completed(plant, spec)?;
    let n = prod.num_states();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for x in 0..n {
            if !alive[x] {
                continue;
            }
            let p = plant_state[x];
            let blocked = plant.out(p).iter().any(|&(e, _)| {
                !plant.alphabet().get(e).is_controllable()
                    && prod.next(x, e).is_none_or(|y| !alive[y])
            });
            if blocked {
                alive[x] = false;
                changed = true;
            }
        }
        let keep = trim_mask(&prod, &alive);
        if keep != alive {
            alive = keep;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let sup = prod.restrict(&alive).canonical();
    #[cfg(debug_assertions)]
    {
        debug_assert!(is_nonblocking(&sup));
        debug_assert!(is_controllable(&sup, plant).controllable);
        debug_assert!(crate::ops::language_subset(&sup, &prod));
    }
    Ok(sup)
}

/// States of `g` within `alive` that are reachable and coreachable using only
/// `alive` states.
fn trim_mask(g: &Generator, alive: &[bool]) -> Vec<bool> {
    let n = g.num_states();
    let mut reach = vec![false; n];
    if let Some(q0) = g.initial().filter(|&q| alive[q]) {
        reach[q0] = true;
        let mut stack = vec![q0];
        while let Some(q) = stack.pop() {
            for &(_, t) in g.out(q) {
                if alive[t] && !reach[t] {
                    reach[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for q in (0..n).filter(|&q| alive[q]) {
        for &(_, t) in g.out(q) {
            if alive[t] {
                pred[t].push(q);
            }
        }
    }
    let mut coreach = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&q| alive[q] && g.is_marked(q)).collect();
    for &q in &stack {
        coreach[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &pred[q] {
            if !coreach[p] {
                coreach[p] = true;
                stack.push(p);
            }
        }
    }
    (0..n).map(|q| reach[q] && coreach[q]).collect()
}

/// Whether `closure(Lm(a) ∥ Lm(b)) = closure(Lm(a)) ∥ closure(Lm(b))`, i.e.
/// the product of the trim forms is nonblocking.
pub fn is_nonconflicting(a: &Generator, b: &Generator) -> Result<bool, Error> {
    Ok(is_nonblocking(&sync_product(&trim(a), &trim(b))?))
}

/// Closed-loop behavior of `plant` under controllers that can only disable
/// controllable events.
///
/// A controllable event of the plant occurs iff every controller whose
/// alphabet contains it can execute it. Uncontrollable events always occur;
/// a controller that cannot follow one loses track and from then on disables
/// every controllable event of its alphabet. A state is marked iff the plant
/// and every controller (still tracking) are marked.
pub fn closed_loop(plant: &Generator, controllers: &[Generator]) -> Result<Generator, Error> {
    const LOST: usize = usize::MAX;
    let alphabet = plant.alphabet().clone();
    let Some(p0) = plant.initial() else {
        return Ok(Generator::empty(alphabet));
    };
    for c in controllers {
        alphabet.union(c.alphabet())?;
    }
    let maps: Vec<Vec<Option<usize>>> = controllers
        .iter()
        .map(|c| {
            alphabet
                .labels()
                .map(|l| c.alphabet().index_of(l))
                .collect()
        })
        .collect();
    let start: (usize, Vec<usize>) = (
        p0,
        controllers
            .iter()
            .map(|c| c.initial().unwrap_or(LOST))
            .collect(),
    );
    let mut index = BTreeMap::new();
    index.insert(start.clone(), 0usize);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (p, cs) = states[next].clone();
        next += 1;
        let mut row = Vec::new();
        'events: for &(e, p2) in plant.out(p) {
            let controllable = alphabet.get(e).is_controllable();
            let mut cs2 = cs.clone();
            for (k, c) in controllers.iter().enumerate() {
                let Some(f) = maps[k][e] else { continue };
                let step = if cs[k] == LOST {
                    None
                } else {
                    c.next(cs[k], f)
                };
                match step {
                    Some(t) => cs2[k] = t,
                    None if controllable => continue 'events,
                    None => cs2[k] = LOST,
                }
            }
            let key = (p2, cs2);
            let t = match index.get(&key) {
                Some(&t) => t,
                None => {
                    index.insert(key.clone(), states.len());
                    states.push(key);
                    states.len() - 1
                }
            };
            row.push((e, t));
        }
        delta.push(row);
    }
    let marked = states
        .iter()
        .map(|(p, cs)| {
            plant.is_marked(*p)
                && cs
                    .iter()
                    .zip(controllers)
                    .all(|(&q, c)| q != LOST && c.is_marked(q))
        })
        .collect();
    Ok(Generator::from_parts(alphabet, Some(0), marked, delta))
}
