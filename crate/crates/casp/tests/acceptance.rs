//! End-to-end acceptance checks over the fixture corpus and randomized
//! cross-validation against the brute-force baselines. Each check prints one
//! line on success so a full run documents what was exercised.

use std::collections::BTreeSet;
use std::path::PathBuf;

use casp::engine::{
    communicating_fixpoint, enumerate_answer_sets, tp_step, ClassicalProgram, ClassicalRule,
    EngineOptions,
};
use casp::focus::{focused_answer_sets, focused_query};
use casp::gen::{random_program, random_qbf, GenConfig, QbfGenConfig};
use casp::model::{
    CommunicatingProgram, ComponentName, FocusSequence, Interpretation, Literal, ProgramClass,
};
use casp::oracle::{classical_answer_sets, qbf_eval};
use casp::parser::{parse_program, parse_program_relaxed, parse_qbf, parse_situated_literal};
use casp::qbf::{Qbf, QbfBlock};
use casp::transforms::{compile_qbf, lift_answer_set, project_back, simulate_naf, to_normal};
use casp::{engine::communicating_reduct, render_program};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path:?}: {e}"))
}

fn load(name: &str) -> CommunicatingProgram {
    parse_program(&fixture(name)).expect("fixture parses")
}

fn interp(lits: &[&str]) -> Interpretation {
    Interpretation::new(lits.iter().map(|s| parse_situated_literal(s).unwrap())).unwrap()
}

fn focus(names: &[&str]) -> FocusSequence {
    FocusSequence(
        names
            .iter()
            .map(|n| ComponentName::new(*n).unwrap())
            .collect(),
    )
}

fn lits(set: &BTreeSet<Literal>) -> Vec<String> {
    set.iter().map(|l| l.to_string()).collect()
}

#[test]
fn criterion_01_basic_network_answer_sets() {
    let p = load("basic.casp");
    let sets = enumerate_answer_sets(&p, &EngineOptions::default()).unwrap();
    assert_eq!(
        sets,
        vec![
            interp(&["Q:a", "Q:b", "R:a", "R:b"]),
            interp(&["Q:b", "R:b"]),
        ]
    );
    println!("PASS 01: basic network has exactly its two expected answer sets");
}

#[test]
fn criterion_02_simple_fixpoint_minimality() {
    let p = load("simple.casp");
    let fp = communicating_fixpoint(&p).unwrap();
    assert_eq!(fp, interp(&["Q:b"]));
    let sets = enumerate_answer_sets(&p, &EngineOptions::default()).unwrap();
    assert_eq!(sets, vec![interp(&["Q:a", "Q:b", "R:a"]), interp(&["Q:b"])]);
    assert!(sets.iter().all(|s| fp.is_subset(s)));
    println!("PASS 02: simple-program fixpoint is {{Q:b}} and is minimal among both answer sets");
}

#[test]
fn criterion_03_naf_simulation_bijection() {
    let p = load("mutual.casp");
    let opts = EngineOptions::default();
    let source = enumerate_answer_sets(&p, &opts).unwrap();
    assert_eq!(source.len(), 2);
    let (sim, map, markers) = simulate_naf(&p);
    let total: Vec<Interpretation> = enumerate_answer_sets(&sim, &opts)
        .unwrap()
        .into_iter()
        .filter(|m| markers.iter().all(|t| m.contains(t)))
        .collect();
    let lifted: Vec<Interpretation> = source.iter().map(|m| lift_answer_set(m, &map)).collect();
    assert_eq!(total.len(), lifted.len());
    for l in &lifted {
        assert!(total.contains(l));
    }
    for (m, l) in source.iter().zip(&lifted) {
        assert_eq!(&project_back(l, &map).unwrap(), m);
    }
    println!("PASS 03: naf elimination puts both source answer sets in bijection with the total simulation answer sets");
}

#[test]
fn criterion_04_totality_gate() {
    let p = load("oddloop.casp");
    let opts = EngineOptions::default();
    assert!(enumerate_answer_sets(&p, &opts).unwrap().is_empty());
    let (sim, map, markers) = simulate_naf(&p);
    let sets = enumerate_answer_sets(&sim, &opts).unwrap();
    let empty = Interpretation::empty();
    assert!(sets.contains(&empty));
    assert!(markers.iter().any(|t| !empty.contains(t)));
    assert!(project_back(&empty, &map).is_err());
    println!("PASS 04: odd-loop simulation admits the empty set, which lacks the total marker and is refused by projection");
}

#[test]
fn criterion_05_subset_minimization_focus() {
    let p = load("subsetmin.casp");
    let sets = focused_answer_sets(&p, &focus(&["R", "S"]), &EngineOptions::default()).unwrap();
    assert_eq!(sets, vec![interp(&["Q:a", "Q:b", "Q:c", "R:c", "S:a"])]);
    println!("PASS 05: focusing on R then S leaves exactly the expected answer set");
}

#[test]
fn criterion_06_printer_negotiation() {
    let p = load("printer.casp");
    let opts = EngineOptions::default();
    let m1 = interp(&["P:stylish", "P:silent", "B:expensive"]);
    let m2 = interp(&["P:stylish", "P:loud", "E:undesired", "M:undesired"]);
    let m3 = interp(&["P:dull", "P:loud", "E:undesired", "M:undesired"]);
    let m4 = interp(&["P:dull", "P:silent", "E:undesired"]);
    let all: BTreeSet<Interpretation> = enumerate_answer_sets(&p, &opts)
        .unwrap()
        .into_iter()
        .collect();
    assert_eq!(all, BTreeSet::from([m1, m2, m3, m4.clone()]));
    for f in [focus(&["B", "M", "E"]), focus(&["B", "E", "M"])] {
        assert_eq!(
            focused_answer_sets(&p, &f, &opts).unwrap(),
            vec![m4.clone()]
        );
    }
    println!("PASS 06: printer program has the four expected answer sets and both boss-first focus orders pick the dull, silent one");
}

#[test]
fn criterion_07_diagnosis_minimal_hypotheses() {
    let start = std::time::Instant::now();
    let p = load("diagnosis.casp");
    assert_eq!(p.class(), ProgramClass::Disjunctive);
    let sets = focused_answer_sets(&p, &focus(&["H"]), &EngineOptions::default()).unwrap();
    assert_eq!(sets.len(), 2);
    let h = ComponentName::new("H").unwrap();
    let projections: BTreeSet<Vec<String>> = sets.iter().map(|m| lits(&m.project(&h))).collect();
    assert_eq!(
        projections,
        BTreeSet::from([vec!["high".to_string()], vec!["leak".to_string()]])
    );
    for shared in [
        "Q:no_power_off",
        "Q:no_broken_bulb",
        "Q:hot_plate_b",
        "Q:hot_plate_c",
        "Q:melted_a",
    ] {
        let sl = parse_situated_literal(shared).unwrap();
        assert!(
            sets.iter().all(|m| m.contains(&sl)),
            "missing shared {shared}"
        );
    }
    assert!(start.elapsed().as_secs() < 5);
    println!(
        "PASS 07: diagnosis focus on H yields exactly the high-current and water-leak explanations"
    );
}

fn flipped(q: &Qbf) -> Qbf {
    let blocks: Vec<QbfBlock> = q
        .blocks()
        .iter()
        .map(|b| QbfBlock {
            quantifier: b.quantifier.flipped(),
            variables: b.variables.clone(),
        })
        .collect();
    Qbf::new(blocks, q.matrix().to_vec()).unwrap()
}

#[test]
fn criterion_08_qbf_equivalence() {
    let cfg = QbfGenConfig {
        max_blocks: 3,
        max_vars: 5,
        max_clauses: 4,
        max_clause_len: 3,
    };
    let opts = EngineOptions {
        bound: 64,
        ..EngineOptions::default()
    };
    let mut checked = 0usize;
    let mut exists_first = 0usize;
    for seed in 0..260 {
        let base = random_qbf(seed, &cfg);
        for q in [base.clone(), flipped(&base)] {
            let expected = qbf_eval(&q).unwrap();
            let c = compile_qbf(&q);
            let got = focused_query(&c.program, &c.focus, c.mode, Some(&c.literal), &opts).unwrap();
            assert_eq!(got, expected, "mismatch for seed {seed}: {q}");
            checked += 1;
            exists_first += usize::from(q.starts_existential());
        }
    }
    assert!(checked >= 500);
    assert!(exists_first > 0 && exists_first < checked);
    println!("PASS 08: {checked} compiled formulas (both quantifier-first variants) agree with direct evaluation");
}

#[test]
fn criterion_09_oracle_equivalence() {
    let cfg = GenConfig {
        max_components: 3,
        max_atoms: 4,
        max_rules: 8,
        max_body: 2,
        class: ProgramClass::Normal,
        max_foreign: 2,
    };
    let opts = EngineOptions {
        bound: 64,
        ..EngineOptions::default()
    };
    let mut checked = 0usize;
    for seed in 0..520 {
        let p = random_program(seed, &cfg);
        let expected: BTreeSet<Interpretation> = enumerate_answer_sets(&p, &opts)
            .unwrap()
            .into_iter()
            .collect();
        let (flat, map) = to_normal(&p);
        let projected: BTreeSet<Interpretation> = classical_answer_sets(&flat, 32)
            .unwrap()
            .into_iter()
            .map(|m| map.project(&m))
            .collect();
        assert_eq!(projected, expected, "flattening mismatch for seed {seed}");
        checked += 1;
    }

    // single-component programs translate to classical programs directly
    let single = GenConfig {
        max_components: 1,
        max_foreign: 0,
        ..cfg
    };
    let mut single_checked = 0usize;
    for seed in 0..520 {
        let p = random_program(seed, &single);
        let comp = &p.components()[0];
        let direct = ClassicalProgram::new(comp.rules().iter().map(|r| {
            ClassicalRule::new(
                r.head.iter().map(|l| l.literal.clone()),
                r.body_pos.iter().map(|l| l.literal.clone()),
                r.body_neg.iter().map(|l| l.literal.clone()),
            )
        }));
        let expected: BTreeSet<BTreeSet<Literal>> = classical_answer_sets(&direct, 32)
            .unwrap()
            .into_iter()
            .collect();
        let got: BTreeSet<BTreeSet<Literal>> = enumerate_answer_sets(&p, &opts)
            .unwrap()
            .into_iter()
            .map(|m| m.project(&comp.name))
            .collect();
        assert_eq!(got, expected, "single-component mismatch for seed {seed}");
        single_checked += 1;
    }
    assert!(checked >= 500 && single_checked >= 500);
    println!("PASS 09: engine agrees with the brute-force baseline on {checked} flattened networks and {single_checked} single-component programs");
}

#[test]
fn criterion_10_property_suite() {
    let cfg = GenConfig::default();
    let opts = EngineOptions {
        bound: 64,
        ..EngineOptions::default()
    };
    let instances = 220;

    // focus-subset, nonemptiness preservation, and idempotence
    for seed in 0..instances {
        let p = random_program(seed, &cfg);
        let all = enumerate_answer_sets(&p, &opts).unwrap();
        let names: Vec<ComponentName> = p.component_names().cloned().collect();
        let pick = names[seed as usize % names.len()].clone();
        let f = FocusSequence(vec![pick.clone()]);
        let focused = focused_answer_sets(&p, &f, &opts).unwrap();
        assert!(
            focused.iter().all(|m| all.contains(m)),
            "subset failed: seed {seed}"
        );
        assert_eq!(
            focused.is_empty(),
            all.is_empty(),
            "nonemptiness failed: seed {seed}"
        );
        let ff = FocusSequence(vec![pick.clone(), pick]);
        assert_eq!(
            focused_answer_sets(&p, &ff, &opts).unwrap(),
            focused,
            "idempotence failed: seed {seed}"
        );
    }
    println!("PASS 10a: focus subset, nonemptiness preservation, and idempotence hold on {instances} programs");

    // immediate-consequence monotonicity on simple programs
    let simple_cfg = GenConfig {
        class: ProgramClass::Simple,
        ..cfg.clone()
    };
    for seed in 0..instances {
        let p = random_program(seed, &simple_cfg);
        let hb: Vec<_> = p.herbrand_base().into_iter().collect();
        let small: BTreeSet<_> = hb.iter().step_by(3).cloned().collect();
        let large: BTreeSet<_> = hb
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 3 == 0 || k % 2 == 0)
            .map(|(_, l)| l.clone())
            .collect();
        assert!(small.is_subset(&large));
        assert!(
            tp_step(&p, &small).is_subset(&tp_step(&p, &large)),
            "monotonicity failed: seed {seed}"
        );
    }
    println!("PASS 10b: immediate-consequence monotonicity holds on {instances} simple programs");

    // reduct structural postconditions
    for seed in 0..instances {
        let p = random_program(seed, &cfg);
        let hb: Vec<_> = p.herbrand_base().into_iter().collect();
        let i = Interpretation::new(hb.iter().step_by(2).cloned()).unwrap();
        for comp in p.components() {
            let r = communicating_reduct(&p, &comp.name, &i).unwrap();
            assert!(r.is_positive(), "naf survived reduct: seed {seed}");
            assert!(r.rules.len() <= comp.rules().len());
            assert!(
                r.rules.iter().all(|rule| !rule.head.is_empty()),
                "empty head after reduct: seed {seed}"
            );
        }
    }
    println!("PASS 10c: reduct postconditions hold on {instances} programs");

    // parse/render round trip
    for seed in 0..instances {
        let p = random_program(seed, &cfg);
        let text = render_program(&p);
        assert_eq!(
            parse_program_relaxed(&text).unwrap(),
            p,
            "round trip failed: seed {seed}"
        );
    }
    println!("PASS 10d: parse/render round trip holds on {instances} programs");
}

#[test]
fn qbf_fixture_is_valid_both_ways() {
    let q = parse_qbf(fixture("valid3.qbf").trim()).unwrap();
    assert!(qbf_eval(&q).unwrap());
    let c = compile_qbf(&q);
    let opts = EngineOptions {
        bound: 64,
        ..EngineOptions::default()
    };
    assert!(focused_query(&c.program, &c.focus, c.mode, Some(&c.literal), &opts).unwrap());
    println!("PASS: bundled formula is valid by both evaluation and compilation");
}
