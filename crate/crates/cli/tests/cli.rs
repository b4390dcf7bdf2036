use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use dot_parser::ast::{Graph, Stmt};
use serde_json::Value;

fn sample(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../samples")
        .join(file)
        .to_string_lossy()
        .into_owned()
}

fn ologism(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ologism"))
        .args(args)
        .env_remove("OLOGISM_PATH_BOUND")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

#[test]
fn check_exit_codes() {
    let ok = ologism(&["check", &sample("animals.olgm")]);
    assert_eq!(code(&ok), 0);
    let text = stdout(&ok);
    for line in [
        "O(A,B)  Some animal that is able to fly is not a bird",
        "I(A,V)  Some animal that is able to fly is a vertebrate",
        "O(V,A)  Some vertebrate is not an animal that is able to fly",
    ] {
        assert!(text.contains(line), "{text}");
    }

    let bad = ologism(&["check", &sample("inconsistent.olgm")]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("contradiction O(S,S): Some subject is not a subject"));

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.olgm");
    std::fs::write(&broken, "ologism \"x\" {\n  type A \"an a\"\n  E A B\n}\n").unwrap();
    let out = ologism(&["check", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("3:7: error[UnknownType]"), "{}", stdout(&out));

    assert_eq!(code(&ologism(&["check", "/no/such/file.olgm"])), 3);
    assert_eq!(code(&ologism(&["check"])), 2);
}

#[test]
fn prove_exit_codes() {
    let ok = ologism(&["prove", "--premiss", "E:M,P", "--premiss", "A:S,M", "--conclusion", "E:S,P"]);
    assert_eq!(code(&ok), 0);
    let rejected = ologism(&["prove", "--premiss", "E:M,P", "--premiss", "I:M,S", "--conclusion", "I:S,P"]);
    assert_eq!(code(&rejected), 1);
    assert!(stdout(&rejected).contains("rejected: bullet count 2 ≠ 1"));
    let imported = ologism(&["prove", "--premiss", "A:S,P", "--import", "S", "--conclusion", "I:S,P"]);
    assert_eq!(code(&imported), 0);
    assert!(stdout(&imported).contains("existential import I(S,S)"));
    let malformed = ologism(&["prove", "--premiss", "A:S", "--conclusion", "I:S,P"]);
    assert_eq!(code(&malformed), 2);
}

#[test]
fn model_check_and_oracle() {
    let family = ologism(&["model-check", &sample("has_mother.olgm"), &sample("family.olgmodel")]);
    assert_eq!(code(&family), 0, "{}", stdout(&family));
    let shift = ologism(&["model-check", &sample("custodian.olgm"), &sample("custodian.olgmodel")]);
    assert_eq!(code(&shift), 0, "{}", stdout(&shift));
    let broken = ologism(&["model-check", &sample("has_mother.olgm"), &sample("broken_family.olgmodel")]);
    assert_eq!(code(&broken), 1);
    assert!(stdout(&broken).contains("fact `mother` fails at `Diana`"));

    let sound = ologism(&["oracle", &sample("animals.olgm")]);
    assert_eq!(code(&sound), 0);
    let none = ologism(&["oracle", &sample("inconsistent.olgm"), "--mode", "models"]);
    assert_eq!(code(&none), 1);
    assert!(stdout(&none).contains("models at n = 3: 0"));
    let scale = ologism(&["oracle", &sample("animals.olgm"), "--mode", "models", "--universe", "9"]);
    assert_eq!(code(&scale), 2);
}

#[test]
fn path_bound_comes_from_the_environment() {
    let args = ["check", &sample("has_mother.olgm"), "--equal", "hasAsMother = hasAsParents ; w"];
    let out = ologism(&args);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("equal in 1 step(s)"));
    let with_env = Command::new(env!("CARGO_BIN_EXE_ologism"))
        .args(["--format", "json"])
        .args(args)
        .env("OLOGISM_PATH_BOUND", "11")
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&with_env.stdout).unwrap();
    assert_eq!(report["sections"]["equalities"][0]["bound"], 11);
    let invalid = Command::new(env!("CARGO_BIN_EXE_ologism"))
        .args(args)
        .env("OLOGISM_PATH_BOUND", "many")
        .output()
        .unwrap();
    assert_eq!(code(&invalid), 2);
}

#[test]
fn json_reports_match_the_schema() {
    let validator = schema();
    let animals = sample("animals.olgm");
    let square = sample("inconsistent.olgm");
    let mother = sample("has_mother.olgm");
    let custodian = sample("custodian.olgm");
    let family = sample("family.olgmodel");
    let broken = sample("broken_family.olgmodel");
    let runs: Vec<Vec<&str>> = vec![
        vec!["check", &animals],
        vec!["check", &square],
        vec!["check", &mother, "--equal", "hasAsMother = hasAsParents ; w", "--equal", "w = id(R)"],
        vec!["check", "/dev/null"],
        vec!["prove", "--premiss", "A:P,M", "--premiss", "E:S,M", "--conclusion", "E:S,P"],
        vec!["prove", "--premiss", "E:M,P", "--premiss", "E:S,M", "--conclusion", "O:S,P"],
        vec!["prove", "--premiss", "bogus", "--conclusion", "O:S,P"],
        vec!["enumerate"],
        vec!["enumerate", "--import"],
        vec!["model-check", &mother, &family],
        vec!["model-check", &mother, &broken, "--against", "premisses"],
        vec!["oracle", &animals, "--mode", "completeness"],
        vec!["oracle", &animals, "--mode", "soundness"],
        vec!["oracle", &custodian, "--samples", "50"],
        vec!["oracle", &square, "--mode", "models"],
        vec!["oracle", &mother, "--mode", "models"],
        vec!["export-dot", &animals, "--derived"],
    ];
    for args in runs {
        let mut full = vec!["--format", "json"];
        full.extend(args.iter().copied());
        let out = ologism(&full);
        let report: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}\n{report:#}");
        let status = report["status"].as_str().unwrap();
        let expected = match status {
            "ok" => 0,
            "contradiction" | "violation" => 1,
            _ => 2,
        };
        assert_eq!(code(&out), expected, "{args:?}");
    }
}

#[test]
fn enumerate_totals_and_stability() {
    let first = ologism(&["--format", "json", "enumerate", "--import"]);
    let second = ologism(&["--format", "json", "enumerate", "--import"]);
    assert_eq!(first.stdout, second.stdout);
    let report: Value = serde_json::from_slice(&first.stdout).unwrap();
    let moods = &report["sections"]["moods"];
    assert_eq!((moods["valid"].clone(), moods["valid_with_import"].clone()), (15.into(), 24.into()));
    assert_eq!(moods["import_only"], 9);
    assert_eq!(moods["forms"][0]["figure"], 1);
    assert_eq!(moods["forms"][0]["mood"], "AAA");
}

#[test]
fn text_output_is_byte_identical_and_uncolored() {
    for args in [
        vec!["check".to_string(), sample("custodian.olgm")],
        vec!["enumerate".into(), "--import".into()],
        vec!["oracle".into(), sample("custodian.olgm"), "--samples".into(), "100".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = ologism(&args);
        let b = ologism(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.contains(&0x1b), "{args:?} printed escape codes to a pipe");
    }
}

fn parse_dot(text: &str) -> usize {
    let graph = Graph::try_from(text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    graph.stmts.stmts.iter().filter(|s| matches!(s, Stmt::NodeStmt(_))).count()
}

#[test]
fn dot_output_parses() {
    let out = ologism(&["export-dot", &sample("animals.olgm"), "--derived"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(parse_dot(&text), 4 + 4);
    assert_eq!(text.matches("style=dashed").count(), 3);
    for file in ["custodian.olgm", "has_mother.olgm", "inconsistent.olgm"] {
        let out = ologism(&["export-dot", &sample(file), "--derived"]);
        parse_dot(&stdout(&out));
    }
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.olgm");
    std::fs::write(&empty, "ologism \"empty\" {}\n").unwrap();
    let out = ologism(&["export-dot", empty.to_str().unwrap()]);
    assert_eq!(parse_dot(&stdout(&out)), 0);
}

#[test]
fn repl_runs_a_scripted_session() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("saved.olgm");
    let script = format!(
        "load {}\nadd E M A\ncontradictions\nretract E M A\nwhy O:V,A\nmodels 2\nsave {}\nbogus\nquit\nderived\n",
        sample("animals.olgm"),
        saved.display()
    );
    let mut child = Command::new(env!("CARGO_BIN_EXE_ologism"))
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(script.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("new: O(A,B)"), "{text}");
    assert!(text.contains("contradiction: O(M,M)"), "{text}");
    assert!(text.contains("gone: O(M,M)"), "{text}");
    assert!(text.contains("[R8]") || text.contains("[R7]"), "{text}");
    assert!(text.contains("unknown command `bogus`"));
    assert!(!text.contains("derived ("), "commands after quit must not run");
    let reloaded = ologism_cli::commands::check(&saved, &[], None).unwrap();
    assert_eq!(reloaded.status.exit_code(), 0);
}
