//! Localization of the relabeled supervisor into one local controller per
//! group, and inverse relabeling of those controllers back to the agents.
//!
//! A local controller for group `i` only needs to reproduce the disablements
//! of the group's own controllable events. States of the relabeled supervisor
//! are merged greedily whenever their enabled/disabled events and marking
//! agree (a control cover), and events that only selfloop in the quotient are
//! dropped from its alphabet.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ops::{marked_difference, sync_product, sync_product_all, sync_product_bounded, trim};
use crate::relabel::inverse_relabel;
use crate::synthesis::{full_plant, MultiAgentPlant, SynthesisArtifacts};
use crate::{Alphabet, Error, Generator, RelabelingMap};

/// Outcome of the certification done while localizing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationCertificate {
    /// `∥_i trim(RLOC_i ∥ M_i)` has the marked language of `RSUP`.
    pub relabeled_equal: bool,
    /// Alphabet reduction was kept.
    pub reduced: bool,
    /// The cover failed and every local controller is the whole `RSUP`.
    pub fallback: bool,
}

/// Relabeled and inverse-relabeled local controllers, one per group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalControllerSet {
    pub groups: Vec<String>,
    /// `RLOC_i` over the template alphabets.
    pub rlocs: Vec<Generator>,
    /// `SLOC_i = R⁻¹(trim(RLOC_i ∥ M_i))`; every agent of group `i` uses it.
    pub slocs: Vec<Generator>,
    pub certificate: LocalizationCertificate,
}

struct ControlData {
    enabled: Vec<bool>,
    disabled: Vec<bool>,
    marked: bool,
    plant_marked: bool,
}

fn control_data(rsup: &Generator, m: &Generator, ctrl: &[bool]) -> Vec<ControlData> {
    let n = rsup.num_states();
    let k = rsup.alphabet().len();
    let mut data: Vec<ControlData> = (0..n)
        .map(|x| ControlData {
            enabled: {
                let mut v = vec![false; k];
                for &(e, _) in rsup.out(x) {
                    v[e] = true;
                }
                v
            },
            disabled: vec![false; k],
            marked: rsup.is_marked(x),
            plant_marked: false,
        })
        .collect();
    let to_m: Vec<Option<usize>> = rsup
        .alphabet()
        .labels()
        .map(|l| m.alphabet().index_of(l))
        .collect();
    let (Some(x0), Some(m0)) = (rsup.initial(), m.initial()) else {
        return data;
    };
    let mut seen = alloc::collections::BTreeSet::new();
    seen.insert((x0, m0));
    let mut stack = vec![(x0, m0)];
    while let Some((x, q)) = stack.pop() {
        data[x].plant_marked |= m.is_marked(q);
        for &(f, _) in m.out(q) {
            let label = m.alphabet().get(f).label();
            if let Some(e) = rsup.alphabet().index_of(label) {
                if ctrl[e] && rsup.next(x, e).is_none() {
                    data[x].disabled[e] = true;
                }
            }
        }
        for &(e, x2) in rsup.out(x) {
            if let Some(q2) = to_m[e].and_then(|f| m.next(q, f)) {
                if seen.insert((x2, q2)) {
                    stack.push((x2, q2));
                }
            }
        }
    }
    data
}

fn consistent(a: &ControlData, b: &ControlData) -> bool {
    let clash =
        |x: &ControlData, y: &ControlData| x.enabled.iter().zip(&y.disabled).any(|(&e, &d)| e && d);
    if clash(a, b) || clash(b, a) {
        return false;
    }
    a.marked == b.marked || (a.marked && !b.plant_marked) || (b.marked && !a.plant_marked)
}

fn try_merge(
    rsup: &Generator,
    data: &[ControlData],
    cell: &[usize],
    a: usize,
    b: usize,
) -> Option<Vec<usize>> {
    let mut cell = cell.to_vec();
    let mut pending = vec![(a, b)];
    while let Some((x, y)) = pending.pop() {
        let (cx, cy) = (cell[x], cell[y]);
        if cx == cy {
            continue;
        }
        let mx: Vec<usize> = (0..cell.len()).filter(|&s| cell[s] == cx).collect();
        let my: Vec<usize> = (0..cell.len()).filter(|&s| cell[s] == cy).collect();
        for &p in &mx {
            for &q in &my {
                if !consistent(&data[p], &data[q]) {
                    return None;
                }
            }
        }
        let (keep, gone) = (cx.min(cy), cx.max(cy));
        for c in cell.iter_mut() {
            if *c == gone {
                *c = keep;
            }
        }
        for &p in &mx {
            for &q in &my {
                for &(e, p2) in rsup.out(p) {
                    if let Some(q2) = rsup.next(q, e) {
                        pending.push((p2, q2));
                    }
                }
            }
        }
    }
    Some(cell)
}

/// Control cover of `rsup` for the controllable events flagged in `ctrl`
/// (indexed by `rsup`'s alphabet), with `m` the plant it runs against.
/// With `reduce`, events other than the controlled ones whose transitions are
/// all selfloops are removed from the result's alphabet.
pub fn control_cover(rsup: &Generator, m: &Generator, ctrl: &[bool], reduce: bool) -> Generator {
    let n = rsup.num_states();
    if n == 0 {
        return rsup.clone();
    }
    let data = control_data(rsup, m, ctrl);
    let cell = greedy_cells(rsup, &data);
    quotient(rsup, &cell, ctrl, reduce)
}

/// Greedy merging of consistent state pairs in index order.
fn greedy_cells(rsup: &Generator, data: &[ControlData]) -> Vec<usize> {
    let n = rsup.num_states();
    let mut cell: Vec<usize> = (0..n).collect();
    for i in 0..n {
        if cell[i] != i {
            continue;
        }
        for j in i + 1..n {
            if cell[j] != j || cell[i] != i || !consistent(&data[i], &data[j]) {
                continue;
            }
            if let Some(c) = try_merge(rsup, data, &cell, i, j) {
                cell = c;
            }
        }
    }
    cell
}

fn quotient(rsup: &Generator, cell: &[usize], ctrl: &[bool], reduce: bool) -> Generator {
    let n = rsup.num_states();
    let mut ids = vec![usize::MAX; n];
    let mut count = 0;
    for x in 0..n {
        if ids[cell[x]] == usize::MAX {
            ids[cell[x]] = count;
            count += 1;
        }
    }
    let k = rsup.alphabet().len();
    let mut delta: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count];
    let mut marked = vec![false; count];
    let mut moves = vec![false; k];
    for x in 0..n {
        let c = ids[cell[x]];
        marked[c] |= rsup.is_marked(x);
        for &(e, y) in rsup.out(x) {
            let d = ids[cell[y]];
            if !delta[c].contains(&(e, d)) {
                delta[c].push((e, d));
            }
            moves[e] |= c != d;
        }
    }
    let keep: Vec<bool> = (0..k).map(|e| !reduce || moves[e] || ctrl[e]).collect();
    let alphabet = Alphabet::new(
        rsup.alphabet()
            .iter()
            .enumerate()
            .filter(|&(e, _)| keep[e])
            .map(|(_, ev)| ev.clone()),
    )
    .expect("subset of a valid alphabet");
    let remap: Vec<Option<usize>> = rsup
        .alphabet()
        .labels()
        .map(|l| alphabet.index_of(l))
        .collect();
    let delta = delta
        .into_iter()
        .map(|row| {
            row.into_iter()
                .filter_map(|(e, d)| remap[e].map(|f| (f, d)))
                .collect()
        })
        .collect();
    let initial = rsup.initial().map(|x| ids[cell[x]]);
    Generator::from_parts(alphabet, initial, marked, delta).canonical()
}

/// `trim(RLOC_i ∥ M_i)` for every group.
fn relabeled_locals(rlocs: &[Generator], parts: &[Generator]) -> Result<Vec<Generator>, Error> {
    rlocs
        .iter()
        .zip(parts)
        .map(|(c, m)| Ok(trim(&sync_product(c, m)?)))
        .collect()
}

fn certify(rsup: &Generator, rlocs: &[Generator], parts: &[Generator]) -> Result<bool, Error> {
    let locals = relabeled_locals(rlocs, parts)?;
    Ok(marked_difference(&sync_product_all(&locals)?, rsup).is_none())
}

/// One local controller per group for `rsup`, where `parts[i]` is the
/// relabeled parallel template `M_i`. Tries the reduced covers, then the
/// unreduced ones, then falls back to `rsup` itself.
pub fn localize_rsup(
    rsup: &Generator,
    parts: &[Generator],
) -> Result<(Vec<Generator>, LocalizationCertificate), Error> {
    let m = sync_product_all(parts)?;
    for reduce in [true, false] {
        let rlocs: Vec<Generator> = parts
            .iter()
            .map(|mi| {
                let ctrl: Vec<bool> = rsup
                    .alphabet()
                    .iter()
                    .map(|e| e.is_controllable() && mi.alphabet().contains(e.label()))
                    .collect();
                control_cover(rsup, &m, &ctrl, reduce)
            })
            .collect();
        if certify(rsup, &rlocs, parts)? {
            return Ok((
                rlocs,
                LocalizationCertificate {
                    relabeled_equal: true,
                    reduced: reduce,
                    fallback: false,
                },
            ));
        }
    }
    let rlocs = vec![rsup.clone(); parts.len()];
    let relabeled_equal = certify(rsup, &rlocs, parts)?;
    Ok((
        rlocs,
        LocalizationCertificate {
            relabeled_equal,
            reduced: false,
            fallback: true,
        },
    ))
}

/// `R⁻¹(trim(RLOC_i ∥ M_i))`.
pub fn build_sloc(
    rloc: &Generator,
    part: &Generator,
    r: &RelabelingMap,
) -> Result<Generator, Error> {
    inverse_relabel(&trim(&sync_product(rloc, part)?), r)
}

/// Local controllers for the result of a synthesis run.
pub fn localize(artifacts: &SynthesisArtifacts) -> Result<LocalControllerSet, Error> {
    let parts = &artifacts.parallel_templates;
    let (rlocs, certificate) = localize_rsup(&artifacts.rsup, parts)?;
    if !certificate.relabeled_equal {
        return Err(Error::LocalizationFailed {
            group: artifacts.groups.first().cloned().unwrap_or_default(),
        });
    }
    let slocs = rlocs
        .iter()
        .zip(parts)
        .map(|(c, m)| build_sloc(c, m, &artifacts.relabeling))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LocalControllerSet {
        groups: artifacts.groups.clone(),
        rlocs,
        slocs,
        certificate,
    })
}

/// Result of [`verify_control_equivalence`]. Witnesses are shortest words in
/// exactly one of the compared marked languages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub relabeled_witness: Option<Vec<String>>,
    /// `None` when the whole plant exceeded the budget.
    pub full: Option<Option<Vec<String>>>,
}

impl EquivalenceReport {
    pub fn relabeled_equal(&self) -> bool {
        self.relabeled_witness.is_none()
    }

    pub fn full_equal(&self) -> Option<bool> {
        self.full.as_ref().map(|w| w.is_none())
    }
}

/// Checks `∥_i trim(RLOC_i ∥ M_i) ≡ RSUP` and, when the whole plant fits in
/// `budget`, `(∥_i SLOC_i) ∥ G ≡ SSUP ∥ G` on marked languages.
pub fn verify_control_equivalence(
    set: &LocalControllerSet,
    artifacts: &SynthesisArtifacts,
    plant: &MultiAgentPlant,
    budget: usize,
) -> Result<EquivalenceReport, Error> {
    let locals = relabeled_locals(&set.rlocs, &artifacts.parallel_templates)?;
    let relabeled_witness = marked_difference(&sync_product_all(&locals)?, &artifacts.rsup);
    let full = match full_plant(plant, budget) {
        Ok(g) => {
            let mut lhs = g.clone();
            for s in &set.slocs {
                lhs = sync_product_bounded(&lhs, s, budget)?;
            }
            let rhs = sync_product_bounded(&artifacts.ssup, &g, budget)?;
            Some(marked_difference(&lhs, &rhs))
        }
        Err(Error::ScaleLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(EquivalenceReport {
        relabeled_witness,
        full,
    })
}

/// Along every string of `rsup`, `rloc` permits every event outside `ctrl`
/// that `rsup` permits. `ctrl` holds labels of the group's controllable
/// events.
pub fn authority_respected(rloc: &Generator, rsup: &Generator, ctrl: &Alphabet) -> bool {
    let (Some(x0), Some(c0)) = (rsup.initial(), rloc.initial()) else {
        return rsup.is_empty();
    };
    let mut seen = alloc::collections::BTreeSet::new();
    seen.insert((x0, c0));
    let mut stack = vec![(x0, c0)];
    while let Some((x, c)) = stack.pop() {
        for &(e, x2) in rsup.out(x) {
            let label = rsup.alphabet().get(e).label();
            let c2 = match rloc.alphabet().index_of(label) {
                None => Some(c),
                Some(f) => rloc.next(c, f),
            };
            match c2 {
                Some(c2) => {
                    if seen.insert((x2, c2)) {
                        stack.push((x2, c2));
                    }
                }
                None if !ctrl.contains(label) => return false,
                None => {}
            }
        }
    }
    true
}

/// Labels of the controllable events of `part`.
pub fn controlled_events(part: &Generator) -> Alphabet {
    Alphabet::new(part.alphabet().controllable().cloned()).expect("subset of a valid alphabet")
}
