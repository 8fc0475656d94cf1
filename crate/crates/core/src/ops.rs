//! Language-level primitives on generators: trim, synchronous product,
//! language comparison, natural projection and subset construction.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::{Alphabet, Error, Generator};

/// States reachable from the initial state.
pub fn reachable(g: &Generator) -> Vec<bool> {
    let mut seen = vec![false; g.num_states()];
    let Some(q0) = g.initial() else {
        return seen;
    };
    let mut stack = vec![q0];
    seen[q0] = true;
    while let Some(q) = stack.pop() {
        for &(_, t) in g.out(q) {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// States from which some marker state is reachable.
pub fn coreachable(g: &Generator) -> Vec<bool> {
    let n = g.num_states();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for q in 0..n {
        for &(_, t) in g.out(q) {
            pred[t].push(q);
        }
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = g.marked_states().collect();
    for &q in &stack {
        seen[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &pred[q] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Restriction to states that are both reachable and coreachable; empty if
/// the initial state is not coreachable. The result is canonical.
pub fn trim(g: &Generator) -> Generator {
    let r = reachable(g);
    let c = coreachable(g);
    let keep: Vec<bool> = r.iter().zip(&c).map(|(&a, &b)| a && b).collect();
    g.restrict(&keep).canonical()
}

/// Every reachable state can reach a marker state. Vacuously true when empty.
pub fn is_nonblocking(g: &Generator) -> bool {
    let r = reachable(g);
    let c = coreachable(g);
    r.iter().zip(&c).all(|(&a, &b)| !a || b)
}

/// Canonical forms are identical.
pub fn is_isomorphic(a: &Generator, b: &Generator) -> bool {
    a.canonical() == b.canonical()
}

/// Synchronous product of two generators: shared events synchronize, the
/// others interleave. Only reachable product states are built. The alphabet
/// is the union of the operand alphabets.
pub fn sync_product(a: &Generator, b: &Generator) -> Result<Generator, Error> {
    sync_product_bounded(a, b, usize::MAX)
}

/// [`sync_product`] that gives up with [`Error::ScaleLimit`] once more than
/// `budget` product states have been created.
pub fn sync_product_bounded(
    a: &Generator,
    b: &Generator,
    budget: usize,
) -> Result<Generator, Error> {
    let alphabet = a.alphabet().union(b.alphabet())?;
    let (Some(qa), Some(qb)) = (a.initial(), b.initial()) else {
        return Ok(Generator::empty(alphabet));
    };
    let map: Vec<(Option<usize>, Option<usize>)> = alphabet
        .labels()
        .map(|l| (a.alphabet().index_of(l), b.alphabet().index_of(l)))
        .collect();

    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut states = vec![(qa, qb)];
    index.insert((qa, qb), 0);
    let mut delta: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (p, q) = states[next];
        next += 1;
        let mut row = Vec::new();
        for (e, &(ea, eb)) in map.iter().enumerate() {
            let target = match (ea, eb) {
                (Some(x), Some(y)) => match (a.next(p, x), b.next(q, y)) {
                    (Some(p2), Some(q2)) => (p2, q2),
                    _ => continue,
                },
                (Some(x), None) => match a.next(p, x) {
                    Some(p2) => (p2, q),
                    None => continue,
                },
                (None, Some(y)) => match b.next(q, y) {
                    Some(q2) => (p, q2),
                    None => continue,
                },
                (None, None) => continue,
            };
            let t = match index.get(&target) {
                Some(&t) => t,
                None => {
                    if states.len() >= budget {
                        return Err(Error::ScaleLimit { budget });
                    }
                    let t = states.len();
                    index.insert(target, t);
                    states.push(target);
                    t
                }
            };
            row.push((e, t));
        }
        delta.push(row);
    }
    let marked = states
        .iter()
        .map(|&(p, q)| a.is_marked(p) && b.is_marked(q))
        .collect();
    Ok(Generator::from_parts(alphabet, Some(0), marked, delta))
}

/// Product of a list of generators. The product of no generators is the
/// one-state marked generator over the empty alphabet.
pub fn sync_product_all<'a>(
    gs: impl IntoIterator<Item = &'a Generator>,
) -> Result<Generator, Error> {
    sync_product_all_bounded(gs, usize::MAX)
}

pub fn sync_product_all_bounded<'a>(
    gs: impl IntoIterator<Item = &'a Generator>,
    budget: usize,
) -> Result<Generator, Error> {
    let mut acc: Option<Generator> = None;
    for g in gs {
        acc = Some(match acc {
            None => g.clone(),
            Some(p) => sync_product_bounded(&p, g, budget)?,
        });
    }
    Ok(acc.unwrap_or_else(unit))
}

/// One marked state, no events: the identity of the synchronous product.
pub fn unit() -> Generator {
    Generator::from_parts(Alphabet::empty(), Some(0), vec![true], vec![Vec::new()])
}

/// `L(a) ⊆ L(b)` and `Lm(a) ⊆ Lm(b)`, by synchronized traversal.
pub fn language_subset(a: &Generator, b: &Generator) -> bool {
    let Some(qa) = a.initial() else {
        return true;
    };
    let Some(qb) = b.initial() else {
        return false;
    };
    let map: Vec<Option<usize>> = a
        .alphabet()
        .labels()
        .map(|l| b.alphabet().index_of(l))
        .collect();
    let mut seen = BTreeMap::new();
    let mut queue = VecDeque::from([(qa, qb)]);
    seen.insert((qa, qb), ());
    while let Some((p, q)) = queue.pop_front() {
        if a.is_marked(p) && !b.is_marked(q) {
            return false;
        }
        for &(e, p2) in a.out(p) {
            let Some(q2) = map[e].and_then(|f| b.next(q, f)) else {
                return false;
            };
            if seen.insert((p2, q2), ()).is_none() {
                queue.push_back((p2, q2));
            }
        }
    }
    true
}

/// `L(a) = L(b)` and `Lm(a) = Lm(b)`.
pub fn language_equal(a: &Generator, b: &Generator) -> bool {
    language_subset(a, b) && language_subset(b, a)
}

/// `Lm(a) ⊆ Lm(b)`, ignoring blocking parts.
pub fn marked_subset(a: &Generator, b: &Generator) -> bool {
    language_subset(&trim(a), &trim(b))
}

/// `Lm(a) = Lm(b)`, ignoring blocking parts.
pub fn marked_equal(a: &Generator, b: &Generator) -> bool {
    language_equal(&trim(a), &trim(b))
}

/// Shortest word (ties broken by label order) in exactly one of `Lm(a)` and
/// `Lm(b)`, or `None` if the marked languages are equal.
pub fn marked_difference(a: &Generator, b: &Generator) -> Option<Vec<String>> {
    let (a, b) = (trim(a), trim(b));
    let alphabet = a.alphabet().union(b.alphabet()).ok()?;
    let map: Vec<(Option<usize>, Option<usize>)> = alphabet
        .labels()
        .map(|l| (a.alphabet().index_of(l), b.alphabet().index_of(l)))
        .collect();
    let start = (a.initial(), b.initial());
    if start == (None, None) {
        return None;
    }
    let mut nodes = vec![start];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut seen = BTreeMap::new();
    seen.insert(start, 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let (p, q) = nodes[n];
        let ma = p.is_some_and(|p| a.is_marked(p));
        let mb = q.is_some_and(|q| b.is_marked(q));
        if ma != mb {
            let mut word = Vec::new();
            let mut cur = n;
            while let Some((par, e)) = parent[cur] {
                word.push(alphabet.get(e).label().to_string());
                cur = par;
            }
            word.reverse();
            return Some(word);
        }
        for (e, &(ea, eb)) in map.iter().enumerate() {
            let p2 = p.zip(ea).and_then(|(p, x)| a.next(p, x));
            let q2 = q.zip(eb).and_then(|(q, y)| b.next(q, y));
            if (p2, q2) == (None, None) {
                continue;
            }
            if let alloc::collections::btree_map::Entry::Vacant(v) = seen.entry((p2, q2)) {
                v.insert(nodes.len());
                parent.push(Some((n, e)));
                nodes.push((p2, q2));
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    None
}

/// A nondeterministic transition system; `None` events are silent.
pub(crate) struct Nfa {
    pub alphabet: Alphabet,
    pub initial: usize,
    pub marked: Vec<bool>,
    pub delta: Vec<Vec<(Option<usize>, usize)>>,
}

impl Nfa {
    fn closure(&self, set: &mut Vec<usize>) {
        let mut stack = set.clone();
        while let Some(q) = stack.pop() {
            for &(e, t) in &self.delta[q] {
                if e.is_none() && !set.contains(&t) {
                    set.push(t);
                    stack.push(t);
                }
            }
        }
        set.sort_unstable();
    }

    /// Subset construction. A subset state is marked iff it contains a marked
    /// state. The result is canonical.
    pub fn determinize(&self) -> Generator {
        let mut start = vec![self.initial];
        self.closure(&mut start);
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(start.clone(), 0);
        let mut subsets = vec![start];
        let mut delta = Vec::new();
        let mut next = 0;
        while next < subsets.len() {
            let mut row = Vec::new();
            for e in 0..self.alphabet.len() {
                let mut succ: Vec<usize> = Vec::new();
                for &q in &subsets[next] {
                    for &(f, t) in &self.delta[q] {
                        if f == Some(e) && !succ.contains(&t) {
                            succ.push(t);
                        }
                    }
                }
                if succ.is_empty() {
                    continue;
                }
                self.closure(&mut succ);
                let t = *index.entry(succ.clone()).or_insert_with(|| {
                    subsets.push(succ);
                    subsets.len() - 1
                });
                row.push((e, t));
            }
            delta.push(row);
            next += 1;
        }
        let marked = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.marked[q]))
            .collect();
        Generator::from_parts(self.alphabet.clone(), Some(0), marked, delta).canonical()
    }
}

/// Natural projection onto `keep`: events outside `keep` are erased and the
/// result determinized, so `Lm(P(g)) = P(Lm(g))` and `L(P(g)) = P(L(g))`.
/// The result alphabet is `keep` restricted to events of `g`'s alphabet.
pub fn natural_projection(g: &Generator, keep: &Alphabet) -> Generator {
    let alphabet = g.alphabet().intersection(keep);
    let Some(q0) = g.initial() else {
        return Generator::empty(alphabet);
    };
    let map: Vec<Option<usize>> = g
        .alphabet()
        .labels()
        .map(|l| alphabet.index_of(l))
        .collect();
    let delta = (0..g.num_states())
        .map(|q| g.out(q).iter().map(|&(e, t)| (map[e], t)).collect())
        .collect();
    let marked = (0..g.num_states()).map(|q| g.is_marked(q)).collect();
    Nfa {
        alphabet,
        initial: q0,
        marked,
        delta,
    }
    .determinize()
}
