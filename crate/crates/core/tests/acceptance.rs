//! Acceptance gate: one test per criterion, each printing a PASS or FAIL
//! line that survives output capture.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use common::props;
use ologism::deduce::{close, contradictions, premisses_of};
use ologism::eqtheory::equal_paths;
use ologism::model::{check_model, Against};
use ologism::oracle::{check_completeness, check_soundness, enumerate_models, has_model, OracleConfig, SoundnessVerdict};
use ologism::syll::{enumerate_moods, prove, Rejection};
use ologism::{Aspect, Form, Ologism, PathWord, Proposition, Statement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(criterion: u8, title: &str, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("{verdict} criterion {criterion}: {title}");
    if let Some(first) = failures.first() {
        line.push_str(&format!(" ({} problem(s); first: {first})", failures.len()));
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
    assert!(failures.is_empty(), "{line}\n{}", failures.join("\n"));
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn st(lit: &str) -> Statement {
    Statement::parse_literal(lit).unwrap()
}

fn check_time(failures: &mut Vec<String>, start: Instant, limit: Duration) {
    let took = start.elapsed();
    check(failures, took < limit, || format!("took {took:?}, limit {limit:?}"));
}

/// Names a proposition up to the symmetry of E and I.
fn canon(props: impl IntoIterator<Item = Proposition>) -> BTreeSet<Proposition> {
    props.into_iter().map(|p| p.canonical()).collect()
}

#[test]
fn criterion_01_mood_enumeration() {
    let mut f = Vec::new();
    let start = Instant::now();
    let (plain, imported) = (enumerate_moods(false), enumerate_moods(true));
    check_time(&mut f, start, Duration::from_secs(1));
    let valid = plain.iter().filter(|m| m.is_valid(false)).count();
    let with_import = imported.iter().filter(|m| m.is_valid(true)).count();
    check(&mut f, valid == 15, || format!("{valid} valid forms without import"));
    check(&mut f, with_import == 24, || format!("{with_import} valid forms with import"));
    for m in imported.iter().filter(|m| m.is_valid(true) && !m.valid) {
        let universal = m.premisses.iter().all(|p| p.form.is_universal());
        check(&mut f, universal && m.conclusion.form.is_particular(), || {
            format!("figure {} {} is valid only with import but is not universal-to-particular", m.figure, m.mood)
        });
    }
    report(1, "15 moods without import, 24 with, the 9 extra are universal-to-particular", &f);
}

#[test]
fn criterion_02_worked_syllogisms() {
    let mut f = Vec::new();
    check(&mut f, prove(&[st("E:M,P"), st("A:S,M")], &st("E:S,P")).is_ok(), || "E_MP, A_SM ⊢ E_SP rejected".into());
    check(&mut f, prove(&[st("A:M,P"), st("I:M,S")], &st("I:S,P")).is_ok(), || "A_MP, I_MS ⊢ I_SP rejected".into());
    let r = prove(&[st("E:M,P"), st("I:M,S")], &st("I:S,P"));
    check(
        &mut f,
        r == Err(Rejection::BulletCountMismatch {
            premisses: 2,
            conclusion: 1,
        }),
        || format!("E_MP, I_MS ⊢ I_SP gave {r:?}"),
    );
    let r = prove(&[st("E:M,P"), st("E:S,M")], &st("O:S,P"));
    check(&mut f, matches!(r, Err(Rejection::DiscordantArrows { .. })), || {
        format!("E_MP, E_SM ⊢ O_SP gave {r:?}")
    });
    match prove(&[st("A:P,M"), st("E:S,M")], &st("E:S,P")) {
        Ok(t) => check(&mut f, t.reversals() == 1, || format!("A_PM, E_SM ⊢ E_SP uses {} reversals", t.reversals())),
        Err(e) => f.push(format!("A_PM, E_SM ⊢ E_SP rejected: {e}")),
    }
    report(2, "worked syllogisms accepted and rejected as expected", &f);
}

#[test]
fn criterion_03_existential_import() {
    let mut f = Vec::new();
    check(&mut f, prove(&[st("I:S,S"), st("A:S,P")], &st("I:S,P")).is_ok(), || "I_SS, A_SP ⊬ I_SP".into());
    check(&mut f, prove(&[st("I:S,S"), st("E:S,P")], &st("O:S,P")).is_ok(), || "I_SS, E_SP ⊬ O_SP".into());
    check(&mut f, prove(&[st("A:S,P")], &st("I:S,P")).is_err(), || "A_SP ⊢ I_SP without import".into());
    check(&mut f, prove(&[st("E:S,P")], &st("O:S,P")).is_err(), || "E_SP ⊢ O_SP without import".into());
    report(3, "subalternation needs existential import", &f);
}

#[test]
fn criterion_04_contradiction_square() {
    let mut f = Vec::new();
    for pair in [[Proposition::a("S", "P"), Proposition::o("S", "P")], [Proposition::i("S", "P"), Proposition::e("S", "P")]] {
        let o = pair
            .iter()
            .fold(Ologism::new("square").with_type("S", "an s").with_type("P", "a p"), |o, p| o.with_premiss(p.clone()));
        let theory = close(&o);
        check(&mut f, !contradictions(&theory).is_empty(), || format!("{pair:?} derives no O(X,X)"));
        for n in 1..=3 {
            let config = OracleConfig {
                universe_size: n,
                ..OracleConfig::default()
            };
            let models = enumerate_models(&o, &config).map(|m| m.len());
            check(&mut f, models == Ok(0), || format!("{pair:?} has {models:?} models at n = {n}"));
        }
    }
    report(4, "contradictory pairs derive O(X,X) and have no models", &f);
}

#[test]
fn criterion_05_worked_closures() {
    let mut f = Vec::new();
    for (file, expected) in [
        ("animals.olgm", vec![Proposition::o("A", "B"), Proposition::i("A", "V"), Proposition::o("V", "A")]),
        ("custodian.olgm", vec![Proposition::o("C", "I"), Proposition::o("I", "C"), Proposition::i("I", "H")]),
    ] {
        let o = common::sample(file);
        let theory = close(&o);
        let expected = canon(expected);
        let derived = canon(theory.derived());
        check(&mut f, derived == expected, || {
            format!(
                "{file}: derived {:?}, expected {:?}",
                derived.iter().map(ToString::to_string).collect::<Vec<_>>(),
                expected.iter().map(ToString::to_string).collect::<Vec<_>>()
            )
        });
        let premisses = premisses_of(&o);
        let identities: BTreeSet<_> = o.type_ids().into_iter().map(|t| Proposition::a(t.clone(), t)).collect();
        let naive: BTreeSet<_> = common::naive_closure(&o.type_ids(), &premisses)
            .into_iter()
            .filter(|p| !premisses.contains(p) && !identities.contains(p))
            .collect();
        check(&mut f, naive == derived, || format!("{file}: naive fixpoint derives {naive:?}"));
    }
    report(5, "derived propositions of the worked documents", &f);
}

#[test]
fn criterion_06_olog_regression() {
    let mut f = Vec::new();
    let o = common::sample("has_mother.olgm");
    let mother = PathWord::single(Aspect::new("hasAsMother", "P", "W"));
    let via = PathWord::from_arcs(vec![Aspect::new("hasAsParents", "P", "R"), Aspect::new("w", "R", "W")]).unwrap();
    let eq = equal_paths(&o, &mother, &via, None);
    check(&mut f, matches!(&eq, Ok(e) if e.is_equal()), || format!("mother paths: {eq:?}"));
    for (doc, model) in [("has_mother.olgm", "family.olgmodel"), ("custodian.olgm", "custodian.olgmodel")] {
        let report = check_model(&common::sample(doc), &common::sample_model(model), Against::Closure);
        check(&mut f, report.is_empty(), || format!("{model}: {:?}", report.violations));
    }
    report(6, "has-mother fact holds, worked models pass", &f);
}

#[test]
fn criterion_07_soundness() {
    let mut f = Vec::new();
    let config = OracleConfig::default();
    let start = Instant::now();
    {
        for (i, o) in common::random_corpus(200).iter().enumerate() {
            match check_soundness(o, &config) {
                SoundnessVerdict::Pass { exhaustive: true, .. } => {}
                other => f.push(format!("random document {i}: {other:?}")),
            }
        }
        for doc in ["has_mother.olgm", "custodian.olgm"] {
            let verdict = check_soundness(&common::sample(doc), &config);
            check(
                &mut f,
                matches!(verdict, SoundnessVerdict::Pass { models_checked: 1000, .. }),
                || format!("{doc}: {verdict:?}"),
            );
        }
    }
    check_time(&mut f, start, Duration::from_secs(60));
    report(7, "closures hold in all enumerated and sampled models", &f);
}

#[test]
fn criterion_08_completeness() {
    let mut f = Vec::new();
    let config = OracleConfig::default();
    let start = Instant::now();
    {
        for (i, o) in common::random_corpus(200).iter().enumerate() {
            match check_completeness(o, &config) {
                Ok(v) if v.is_pass() => {}
                Ok(v) => f.push(format!(
                    "random document {i} (consistent: {}): semantic but not derived {:?}",
                    v.consistent,
                    v.gap.iter().map(ToString::to_string).collect::<Vec<_>>()
                )),
                Err(e) => f.push(format!("random document {i}: {e}")),
            }
        }
    }
    check_time(&mut f, start, Duration::from_secs(120));
    report(8, "semantic consequences at n = 3 equal the closure", &f);
}

#[test]
fn criterion_09_consistency_iff_satisfiable() {
    let mut f = Vec::new();
    let config = OracleConfig::default();
    for (i, o) in common::random_corpus(200).iter().enumerate() {
        let consistent = contradictions(&close(o)).is_empty();
        match has_model(o, &config) {
            Ok(sat) => check(&mut f, consistent == sat, || {
                let premisses: Vec<_> = o.premisses.iter().map(ToString::to_string).collect();
                format!("random document {i} {premisses:?}: consistent {consistent}, satisfiable {sat}")
            }),
            Err(e) => f.push(format!("random document {i}: {e}")),
        }
    }
    report(9, "no contradiction derived iff a model exists at n = 3", &f);
}

#[test]
fn criterion_10_algebraic_properties() {
    let mut f = Vec::new();
    let mut record = |what: &str, r: props::Check| {
        if let Err(e) = r {
            f.push(format!("{what}: {e}"));
        }
    };
    let corpus = common::random_corpus(200);
    for (i, o) in corpus.iter().enumerate() {
        record(&format!("closure of random document {i}"), props::closure_matches_naive(o));
        record(&format!("idempotence on random document {i}"), props::closure_idempotent(o));
        let extra = Proposition::new(Form::ALL[i % 4], "T0", format!("T{}", i % o.types.len()));
        record(&format!("monotonicity on random document {i}"), props::closure_monotone(o, &extra));
    }
    for form in Form::ALL {
        for (s, p) in [("S", "P"), ("X", "X")] {
            record("reversal", props::reversal_involution(&Statement::new(form, s, p)));
        }
    }
    for m in enumerate_moods(true) {
        let mut premisses = m.premisses.to_vec();
        if let Ok(t) = prove(&premisses, &m.conclusion) {
            record(&format!("bullets in {} {}", m.figure, m.mood), props::bullets_conserved(&t));
        }
        for x in &m.valid_with_import {
            premisses.push(Statement::new(Form::I, x.clone(), x.clone()));
            if let Ok(t) = prove(&premisses, &m.conclusion) {
                record(&format!("bullets in {} {} with import", m.figure, m.mood), props::bullets_conserved(&t));
            }
            premisses.pop();
        }
    }
    record("congruence on has-mother", props::congruence_laws(&common::sample("has_mother.olgm"), 4));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut documents = Vec::new();
    for i in 0..500 {
        let o = props::random_document(&mut rng);
        record(&format!("round trip of generated document {i}"), props::round_trips(&o));
        documents.push(o);
    }
    for (i, o) in documents.iter().filter(|o| !o.facts.is_empty()).take(50).enumerate() {
        record(&format!("congruence on generated document {i}"), props::congruence_laws(o, 3));
    }
    let valid = std::fs::read_to_string(common::sample_path("has_mother.olgm")).unwrap();
    for i in 0..2000 {
        let input = props::fuzz_input(&mut rng, &valid);
        record(&format!("fuzz input {i}"), props::parser_survives(&input));
    }
    report(10, "closure, reversal, bullet, congruence, round-trip and fuzz properties", &f);
}
