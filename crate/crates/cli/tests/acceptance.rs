//! Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

#[path = "../../core/tests/props/mod.rs"]
mod props;

use std::collections::BTreeSet;
use std::process::ExitCode;

use scalsup::{resolve_scenario, Overrides, Scenario};
use scalsup_core::localize::{localize, verify_control_equivalence};
use scalsup_core::relabel::{halves, inverse_relabel, relabel};
use scalsup_core::supcon::closed_loop;
use scalsup_core::synthesis::{
    check_condition_modular, complete_spec, full_plant, refined_plant, synthesize_refined,
    synthesize_scalable, verify_sscsp,
};
use scalsup_core::{
    is_isomorphic, is_nonblocking, language_equal, language_subset, marked_equal, marked_subset,
    sync_product, trim, Alphabet, EventId, Generator, RelabelingMap, DEFAULT_STATE_BUDGET,
};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn check(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn scenario(name: &str, sizes: Option<Vec<usize>>) -> Result<Scenario, String> {
    let overrides = Overrides {
        sizes,
        ..Overrides::default()
    };
    resolve_scenario(name, &overrides).map_err(|e| e.to_string())
}

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

/// Words of `g` of each length up to `depth`, with marking, as event
/// indices.
fn words(g: &Generator, depth: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let Some(q0) = g.initial() else {
        return out;
    };
    let mut stack = vec![(q0, Vec::new())];
    while let Some((q, w)) = stack.pop() {
        out.push((w.clone(), g.is_marked(q)));
        if w.len() < depth {
            for &(e, t) in g.out(q) {
                let mut w2 = w.clone();
                w2.push(e);
                stack.push((t, w2));
            }
        }
    }
    out
}

fn labels_of(g: &Generator, w: &[usize]) -> Vec<String> {
    w.iter()
        .map(|&e| g.alphabet().get(e).label().to_string())
        .collect()
}

/// Two agents `i1 i2` cycling between an idle marked state and a busy one,
/// composed into one generator; both collapse onto events `1` and `2`.
fn relabel_example() -> Result<(Generator, RelabelingMap), String> {
    let alphabet = Alphabet::new([
        EventId::controllable("11"),
        EventId::uncontrollable("12"),
        EventId::controllable("21"),
        EventId::uncontrollable("22"),
    ])
    .map_err(err)?;
    let g = Generator::new(
        alphabet,
        4,
        0,
        [0],
        [
            (0, "11", 1),
            (0, "21", 2),
            (1, "12", 0),
            (1, "21", 3),
            (2, "22", 0),
            (2, "11", 3),
            (3, "12", 2),
            (3, "22", 1),
        ],
    )
    .map_err(err)?;
    let map = RelabelingMap::new([
        (EventId::controllable("11"), "1".to_string()),
        (EventId::controllable("21"), "1".to_string()),
        (EventId::uncontrollable("12"), "2".to_string()),
        (EventId::uncontrollable("22"), "2".to_string()),
    ])
    .map_err(err)?;
    Ok((g, map))
}

fn relabel_roundtrip() -> Outcome {
    const DEPTH: usize = 10;
    let (g, map) = relabel_example()?;
    let h = relabel(&g, &map).map_err(err)?;
    let g2 = inverse_relabel(&h, &map).map_err(err)?;

    // Every word of G relabels into H with the same marking, and every word
    // of H of length at most DEPTH has a preimage in G with that marking.
    let image: BTreeSet<(Vec<String>, bool)> = words(&g, DEPTH)
        .into_iter()
        .map(|(w, m)| (map.relabel_word(&labels_of(&g, &w)).unwrap(), m))
        .collect();
    let mut h_words = BTreeSet::new();
    for (w, m) in words(&h, DEPTH) {
        h_words.insert((labels_of(&h, &w), m));
    }
    let image_marked: BTreeSet<_> = image
        .iter()
        .filter(|(_, m)| *m)
        .map(|(w, _)| w.clone())
        .collect();
    let h_marked: BTreeSet<_> = h_words
        .iter()
        .filter(|(_, m)| *m)
        .map(|(w, _)| w.clone())
        .collect();
    let image_closed: BTreeSet<_> = image.iter().map(|(w, _)| w.clone()).collect();
    let h_closed: BTreeSet<_> = h_words.iter().map(|(w, _)| w.clone()).collect();
    check(image_marked == h_marked, "Lm(H) differs from R(Lm(G))")?;
    check(image_closed == h_closed, "L(H) differs from R(L(G))")?;

    // Every word of G' relabels onto a word of H with the same marking, and
    // G' has exactly as many words per length as the preimage of H.
    let mut g2_count = [0usize; DEPTH + 1];
    for (w, m) in words(&g2, DEPTH) {
        let image = map.relabel_word(&labels_of(&g2, &w)).unwrap();
        check(h_words.contains(&(image, m)), "word of G' outside R⁻¹(H)")?;
        g2_count[w.len()] += 1;
    }
    let mut pre_count = [0usize; DEPTH + 1];
    for w in &h_closed {
        pre_count[w.len()] += 1 << w.len();
    }
    check(g2_count == pre_count, "G' misses words of R⁻¹(L(H))")?;
    check(
        g2.num_states() == h.num_states(),
        "G' and H differ in state count",
    )?;
    Ok(format!(
        "G {} states, H {} states, G' {} states, words to depth {DEPTH} agree",
        g.num_states(),
        h.num_states(),
        g2.num_states()
    ))
}

fn small_factory_scaling() -> Outcome {
    let mut ssups = Vec::new();
    let mut rsups = Vec::new();
    for sizes in [vec![3, 2], vec![5, 4], vec![8, 6]] {
        let sc = scenario("small-factory", Some(sizes))?;
        let ks: Vec<usize> = sc.plant.groups().iter().map(|g| g.parallelism()).collect();
        check(ks == [2, 1], "parallelism is not (2, 1)")?;
        let a = synthesize_scalable(&sc.plant, &sc.spec).map_err(err)?;
        check(is_nonblocking(&a.ssup), "SSUP blocking")?;
        rsups.push(a.rsup.canonical());
        ssups.push((a.ssup.clone(), a.relabeling.clone()));
    }
    check(
        rsups.windows(2).all(|w| w[0] == w[1]),
        "RSUP depends on the sizes",
    )?;
    for (i, (small, r_small)) in ssups.iter().enumerate() {
        for (large, _) in &ssups[i..] {
            check(
                small.num_states() == large.num_states(),
                "SSUP state counts differ",
            )?;
        }
        // Restricting any larger SSUP's structure to the smaller alphabet
        // gives the smaller SSUP.
        for rsup in &rsups[i..] {
            let back = inverse_relabel(rsup, r_small).map_err(err)?;
            check(is_isomorphic(&back, small), "SSUP structures differ")?;
        }
    }
    let sc = scenario("small-factory", Some(vec![3, 2]))?;
    let a = synthesize_scalable(&sc.plant, &sc.spec).map_err(err)?;
    let rep = verify_sscsp(&a, &sc.plant, &sc.spec, DEFAULT_STATE_BUDGET).map_err(err)?;
    check(rep.lower, "SUP1 not within SSUP∩G")?;
    check(rep.upper, "SSUP∩G not within SUP")?;
    Ok(format!(
        "SSUP {} states for (3,2), (5,4), (8,6); SUP1 ⊆ SSUP∩G ⊆ SUP at (3,2)",
        ssups[0].0.num_states()
    ))
}

fn counterexample() -> Outcome {
    let sc = scenario("fig4", None)?;
    let report = check_condition_modular(&sc.plant).map_err(err)?;
    check(!report.passed(), "condition passed")?;
    let f = report.first_failure().unwrap();
    let w = f.report.witness.as_ref().unwrap();
    check(w.prefix == ["0"], "witness prefix is not \"0\"")?;
    check(w.event == "0", "witness event is not \"0\"")?;
    Ok(format!("group `{}` fails with {w}", f.group))
}

fn local_controllers(sc: &Scenario, expect: &[usize]) -> Result<String, String> {
    let a = synthesize_scalable(&sc.plant, &sc.spec).map_err(err)?;
    let set = localize(&a).map_err(err)?;
    let eq = verify_control_equivalence(&set, &a, &sc.plant, sc.budget).map_err(err)?;
    check(eq.relabeled_equal(), "relabeled control equivalence fails")?;
    check(
        eq.full_equal() == Some(true),
        "control equivalence fails on the whole plant",
    )?;
    let counts: Vec<usize> = set.slocs.iter().map(Generator::num_states).collect();
    check(
        counts == expect,
        &format!(
            "control equivalence holds, but SLOC state counts are {counts:?}, expected {expect:?}"
        ),
    )?;
    Ok(format!(
        "SLOC state counts {counts:?}, control equivalence holds"
    ))
}

fn transfer_line() -> Outcome {
    let sc = scenario("transfer-line", Some(vec![2, 2, 1]))?;
    let ks: Vec<usize> = sc
        .plant
        .groups()
        .iter()
        .map(|g| g.requested_parallelism())
        .collect();
    check(ks == [2, 3, 1], "parallelism is not (2, 3, 1)")?;
    let a = synthesize_scalable(&sc.plant, &sc.spec).map_err(err)?;
    let rep = verify_sscsp(&a, &sc.plant, &sc.spec, sc.budget).map_err(err)?;
    check(rep.equal, "SSUP∩G differs from SUP")?;
    let locals = local_controllers(&sc, &[6, 4, 6]).map_err(|e| format!("SSUP∩G = SUP; {e}"))?;
    Ok(format!("SSUP∩G = SUP; {locals}"))
}

fn mutual_exclusion() -> Outcome {
    let sc = scenario("mutual-exclusion", Some(vec![2, 2]))?;
    let a = synthesize_scalable(&sc.plant, &sc.spec).map_err(err)?;
    let e = complete_spec(&sc.spec, a.ssup.alphabet()).map_err(err)?;
    check(language_equal(&a.ssup, &trim(&e)), "L(SSUP) differs from E")?;
    check(marked_equal(&a.ssup, &e), "Lm(SSUP) differs from E")?;
    let rep = verify_sscsp(&a, &sc.plant, &sc.spec, sc.budget).map_err(err)?;
    check(rep.equal, "SSUP∩G differs from SUP")?;
    let locals = local_controllers(&sc, &[4, 4])?;
    Ok(format!("SSUP equals E; SSUP∩G = SUP; {locals}"))
}

fn refinement() -> Outcome {
    let sc = scenario("small-factory", Some(vec![2, 2]))?;
    let parts: Vec<_> = sc
        .plant
        .groups()
        .iter()
        .map(|g| halves(g.count()))
        .collect();
    let a = synthesize_refined(&sc.plant, &sc.spec, &parts).map_err(err)?;
    let rp = refined_plant(&sc.plant, &parts).map_err(err)?;
    let rep = verify_sscsp(&a, &rp, &sc.spec, sc.budget).map_err(err)?;
    check(rep.equal, "SSUP'∩G differs from SUP")?;
    Ok(format!(
        "SSUP' {} states, SSUP'∩G = SUP ({} states)",
        rep.ssup_states, rep.sup_states
    ))
}

fn property_suites() -> Outcome {
    check(props::CASES >= 200, "fewer than 200 cases")?;
    let mut failed = Vec::new();
    let suites = props::all();
    for (name, run) in &suites {
        if let Err(e) = run() {
            failed.push(format!("{name}: {e}"));
        }
    }
    if failed.is_empty() {
        Ok(format!(
            "{} suites × {} cases, seed {:#x}",
            suites.len(),
            props::CASES,
            props::SEED
        ))
    } else {
        Err(failed.join("; "))
    }
}

fn negative_control() -> Outcome {
    let sc = scenario("small-factory", None)?;
    let a = synthesize_scalable(&sc.plant, &sc.spec).map_err(err)?;
    let set = localize(&a).map_err(err)?;
    let g = full_plant(&sc.plant, sc.budget).map_err(err)?;
    let spec = complete_spec(&sc.spec, sc.plant.relabeling().source()).map_err(err)?;

    let with_templates = closed_loop(&g, &set.slocs).map_err(err)?;
    check(
        language_subset(&with_templates, &spec) && marked_subset(&with_templates, &spec),
        "local controllers violate the specification",
    )?;
    check(
        marked_equal(&with_templates, &sync_product(&a.ssup, &g).map_err(err)?),
        "local controllers differ from SSUP",
    )?;

    let without: Vec<Generator> = set
        .rlocs
        .iter()
        .map(|r| inverse_relabel(&trim(r), &a.relabeling))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let bad = closed_loop(&g, &without).map_err(err)?;
    check(
        !language_subset(&bad, &spec),
        "controllers built without the parallel templates still satisfy the specification",
    )?;
    Ok("without the parallel templates the closed loop leaves the buffer specification".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("relabel and inverse relabel", relabel_roundtrip),
        (
            "small factory scalability and sandwich",
            small_factory_scaling,
        ),
        ("modular condition counterexample", counterexample),
        ("transfer line", transfer_line),
        ("mutual exclusion", mutual_exclusion),
        ("refined small factory", refinement),
        ("property suites", property_suites),
        ("negative control", negative_control),
    ];
    let mut ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                ok = false;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
