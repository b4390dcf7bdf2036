//! One function per subcommand. I/O failures are returned as errors; every
//! other outcome is a [`Report`].

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use ologism::deduce::{close, contradictions, Theory};
use ologism::dsl::{parse_equation, parse_model_report, parse_ologism_report, serialize_model, Severity};
use ologism::eqtheory::{CongruenceIndex, Direction, Equality};
use ologism::model::{check_model, Against, Model};
use ologism::oracle::{check_completeness, check_soundness, count_models, OracleConfig, SoundnessVerdict};
use ologism::syll::{enumerate_moods, prove};
use ologism::olog::is_identifier;
use ologism::{validate, Form, Ologism, Proposition, Statement};

use crate::dot::to_dot;
use crate::report::*;

/// Environment variable overriding the path-equality search bound.
pub const PATH_BOUND_VAR: &str = "OLOGISM_PATH_BOUND";

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Parses and validates an ologism file, recording diagnostics.
pub fn load_ologism(path: &Path, report: &mut Report) -> Result<Option<Ologism>> {
    let parsed = parse_ologism_report(&read(path)?);
    for d in &parsed.diagnostics {
        report.diagnostic(d.into());
    }
    let Some(o) = parsed.value else {
        return Ok(None);
    };
    let problems = validate(&o);
    for d in &problems {
        report.diagnostic(d.into());
    }
    Ok(problems.is_empty().then_some(o))
}

fn load_model(path: &Path, report: &mut Report) -> Result<Option<Model>> {
    let parsed = parse_model_report(&read(path)?);
    for d in &parsed.diagnostics {
        report.diagnostic(d.into());
    }
    Ok(parsed.value)
}

fn summarize(o: &Ologism, report: &mut Report) {
    let s = Summary::of(o);
    report.line(format!(
        "ologism \"{}\": {} types, {} aspects, {} premisses, {} facts",
        s.name, s.types, s.aspects, s.premisses, s.facts
    ));
    report.sections.summary = Some(s);
}

fn indent(text: &str, by: usize) -> String {
    text.lines().map(|l| format!("{:by$}{l}\n", "")).collect()
}

/// Lists the propositions derived beyond the premisses, with readings.
pub fn derived_section(o: &Ologism, theory: &Theory, report: &mut Report) {
    let derived: Vec<PropJson> = theory.derived().iter().map(|p| PropJson::new(p, o)).collect();
    if derived.is_empty() {
        report.line("derived: none");
    } else {
        report.line(format!("derived ({}):", derived.len()));
        for p in &derived {
            report.line(format!("  {}  {}", p.proposition, p.reading));
        }
    }
    report.sections.derived = Some(derived);
}

/// Lists every `O(X,X)` with its derivation; raises the status if any.
pub fn contradiction_section(o: &Ologism, theory: &Theory, report: &mut Report) {
    let found = contradictions(theory);
    if found.is_empty() {
        report.line("contradictions: none");
    } else {
        report.raise(Status::Contradiction);
    }
    let mut out = Vec::new();
    for (t, d) in found {
        let prop = Proposition::o(t.clone(), t.clone());
        let json = ContradictionJson {
            type_id: t.to_string(),
            proposition: prop.to_string(),
            reading: ologism::reading(&prop, o).unwrap_or_default(),
            derivation: (&d).into(),
        };
        report.line(format!("contradiction {}: {}", json.proposition, json.reading));
        report.text.push_str(&indent(&d.to_string(), 4));
        out.push(json);
    }
    report.sections.contradictions = Some(out);
}

fn direction(d: Direction) -> &'static str {
    match d {
        Direction::LeftToRight => "left-to-right",
        Direction::RightToLeft => "right-to-left",
    }
}

/// Decides `lhs = rhs` equations written in fact syntax.
pub fn equality_section(o: &Ologism, equations: &[String], bound: Option<usize>, report: &mut Report) {
    if equations.is_empty() {
        return;
    }
    let index = match CongruenceIndex::new(o) {
        Ok(i) => i,
        Err(e) => {
            report.diagnostic(DiagnosticJson {
                severity: Severity::Error,
                code: "InvalidFacts".into(),
                message: e.to_string(),
                line: None,
                column: None,
            });
            return;
        }
    };
    for eq in equations {
        let (p, q) = match parse_equation(eq, o) {
            Ok(sides) => sides,
            Err(diags) => {
                for d in &diags {
                    let mut d = DiagnosticJson::from(d);
                    d.message = format!("in `{eq}`: {}", d.message);
                    report.diagnostic(d);
                }
                continue;
            }
        };
        let used = bound.unwrap_or_else(|| index.default_bound()).max(p.len()).max(q.len());
        let result = match index.equal(&p, &q, Some(used)) {
            Ok(r) => r,
            Err(e) => {
                report.line(format!("{p} = {q}: {e}"));
                report.raise(Status::ParseError);
                continue;
            }
        };
        let (equal, trace, cap_reached) = match result {
            Equality::Equal { trace } => (true, trace, false),
            Equality::NotEqualWithinBound { cap_reached, .. } => (false, Vec::new(), cap_reached),
        };
        if equal {
            report.line(format!("{p} = {q}: equal in {} step(s)", trace.len()));
            for s in &trace {
                report.line(format!("  {} {} at {}: {}", s.fact, direction(s.direction), s.position, s.result));
            }
        } else {
            let why = if cap_reached { ", search cap reached" } else { "" };
            report.line(format!("{p} = {q}: not equal within bound {used}{why}"));
            report.raise(Status::Violation);
        }
        report.sections.equalities.push(EqualityJson {
            lhs: p.to_string(),
            rhs: q.to_string(),
            equal,
            bound: used,
            trace: trace
                .iter()
                .map(|s| StepJson {
                    fact: s.fact.clone(),
                    direction: direction(s.direction).into(),
                    position: s.position,
                    result: s.result.to_string(),
                })
                .collect(),
            cap_reached,
        });
    }
}

pub fn check(path: &Path, equations: &[String], bound: Option<usize>) -> Result<Report> {
    let mut report = Report::new("check");
    let Some(o) = load_ologism(path, &mut report)? else {
        return Ok(report);
    };
    summarize(&o, &mut report);
    let theory = close(&o);
    derived_section(&o, &theory, &mut report);
    contradiction_section(&o, &theory, &mut report);
    equality_section(&o, equations, bound, &mut report);
    Ok(report)
}

fn literal_error(report: &mut Report, text: &str, message: String) {
    report.diagnostic(DiagnosticJson {
        severity: Severity::Error,
        code: "InvalidLiteral".into(),
        message: format!("`{text}`: {message}"),
        line: None,
        column: None,
    });
}

pub fn prove_command(premisses: &[String], imports: &[String], conclusion: &str) -> Report {
    let mut report = Report::new("prove");
    let mut stmts = Vec::new();
    for p in premisses {
        match Statement::parse_literal(p) {
            Ok(s) => stmts.push(s),
            Err(e) => literal_error(&mut report, p, e.to_string()),
        }
    }
    for x in imports {
        if is_identifier(x) {
            stmts.push(Statement::new(Form::I, x.as_str(), x.as_str()));
        } else {
            literal_error(&mut report, x, "not a type identifier".into());
        }
    }
    let goal = Statement::parse_literal(conclusion);
    if let Err(e) = &goal {
        literal_error(&mut report, conclusion, e.to_string());
    }
    let Ok(goal) = goal else {
        return report;
    };
    if report.status == Status::ParseError {
        return report;
    }
    let names: Vec<String> = stmts.iter().map(ToString::to_string).collect();
    report.line(format!("premisses: {}", names.join(", ")));
    report.line(format!("conclusion: {goal}"));
    let result = prove(&stmts, &goal);
    let (tree, rejection) = match &result {
        Ok(t) => {
            report.line("proved:");
            report.text.push_str(&indent(&t.to_string(), 2));
            (Some(t.into()), None)
        }
        Err(r) => {
            report.line(format!("rejected: {r}"));
            report.raise(Status::Violation);
            (None, Some(r.to_string()))
        }
    };
    report.sections.proof = Some(ProofJson {
        premisses: names,
        conclusion: goal.to_string(),
        valid: result.is_ok(),
        tree,
        rejection,
    });
    report
}

pub fn enumerate(with_import: bool) -> Report {
    let mut report = Report::new("enumerate");
    let moods = enumerate_moods(with_import);
    report.line("fig  mood  premisses      conclusion  verdict");
    let mut forms = Vec::new();
    for m in &moods {
        let (verdict, shown) = if m.valid {
            ("valid", "valid".to_string())
        } else if !m.valid_with_import.is_empty() {
            let xs: Vec<String> = m.valid_with_import.iter().map(|x| format!("I({x},{x})")).collect();
            ("valid_with_import", format!("valid with {}", xs.join(" or ")))
        } else {
            let reason = m.rejection.as_ref().map(ToString::to_string).unwrap_or_default();
            ("invalid", format!("invalid: {reason}"))
        };
        report.line(format!(
            "{:<4} {:<5} {:<14} {:<11} {shown}",
            m.figure,
            m.mood,
            format!("{} {}", m.premisses[0], m.premisses[1]),
            m.conclusion.to_string(),
        ));
        forms.push(MoodJson {
            figure: m.figure,
            mood: m.mood.clone(),
            premisses: [m.premisses[0].to_string(), m.premisses[1].to_string()],
            conclusion: m.conclusion.to_string(),
            verdict: verdict.into(),
            import: m.valid_with_import.iter().map(ToString::to_string).collect(),
            rejection: m.rejection.as_ref().map(ToString::to_string),
        });
    }
    let valid = moods.iter().filter(|m| m.is_valid(false)).count();
    let with = moods.iter().filter(|m| m.is_valid(true)).count();
    report.line(format!("valid without import: {valid}"));
    if with_import {
        report.line(format!("valid with import: {with}"));
        report.line(format!("valid only with import: {}", with - valid));
    }
    report.sections.moods = Some(MoodsJson {
        with_import,
        total: moods.len(),
        valid,
        valid_with_import: with,
        import_only: with - valid,
        forms,
    });
    report
}

pub fn model_check(ologism_path: &Path, model_path: &Path, against: Against) -> Result<Report> {
    let mut report = Report::new("model-check");
    let o = load_ologism(ologism_path, &mut report)?;
    let m = load_model(model_path, &mut report)?;
    let (Some(o), Some(m)) = (o, m) else {
        return Ok(report);
    };
    if m.ologism != o.name {
        report.diagnostic(DiagnosticJson {
            severity: Severity::Warning,
            code: "OlogismMismatch".into(),
            message: format!("model \"{}\" is written for \"{}\", not \"{}\"", m.name, m.ologism, o.name),
            line: None,
            column: None,
        });
    }
    let which = match against {
        Against::Premisses => "premisses",
        Against::Closure => "closure",
    };
    report.line(format!("model \"{}\" against the {which} of \"{}\"", m.name, o.name));
    let found = check_model(&o, &m, against);
    if found.is_empty() {
        report.line("violations: none");
    } else {
        report.raise(Status::Violation);
        report.line(format!("violations ({}):", found.violations.len()));
        for v in &found.violations {
            report.line(format!("  {v}"));
        }
    }
    report.sections.violations = Some(
        found
            .violations
            .iter()
            .map(|v| ViolationJson {
                kind: v.kind().into(),
                message: v.to_string(),
            })
            .collect(),
    );
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Soundness,
    Completeness,
    Models,
}

fn oracle_error(report: &mut Report, e: impl ToString) {
    report.diagnostic(DiagnosticJson {
        severity: Severity::Error,
        code: "OracleUnavailable".into(),
        message: e.to_string(),
        line: None,
        column: None,
    });
}

fn names(props: &std::collections::BTreeSet<Proposition>) -> Vec<String> {
    props.iter().map(ToString::to_string).collect()
}

pub fn oracle(path: &Path, mode: OracleMode, config: &OracleConfig) -> Result<Report> {
    let mut report = Report::new("oracle");
    let Some(o) = load_ologism(path, &mut report)? else {
        return Ok(report);
    };
    let n = config.universe_size;
    let mut json = OracleJson {
        mode: String::new(),
        universe: n,
        verdict: "pass".into(),
        models: None,
        exhaustive: None,
        counterexample: None,
        consistent: None,
        gap: None,
        gap_at_next: None,
        reason: None,
    };
    match mode {
        OracleMode::Models => {
            json.mode = "models".into();
            match count_models(&o, config) {
                Ok(k) => {
                    report.line(format!("models at n = {n}: {k}"));
                    if k == 0 {
                        report.raise(Status::Contradiction);
                    }
                    json.models = Some(k);
                }
                Err(e) => return Ok(with_error(report, e)),
            }
        }
        OracleMode::Soundness => {
            json.mode = "soundness".into();
            match check_soundness(&o, config) {
                SoundnessVerdict::Pass {
                    models_checked,
                    exhaustive,
                } => {
                    let how = if exhaustive { "enumerated" } else { "sampled" };
                    report.line(format!("soundness at n = {n}: pass ({models_checked} models {how})"));
                    json.models = Some(models_checked);
                    json.exhaustive = Some(exhaustive);
                }
                SoundnessVerdict::Fail { prop, counter_model } => {
                    let model = serialize_model(&counter_model).unwrap_or_else(|e| e.to_string());
                    report.line(format!("soundness at n = {n}: FAIL, {prop} does not hold in"));
                    report.text.push_str(&indent(&model, 2));
                    report.raise(Status::Violation);
                    json.verdict = "fail".into();
                    json.counterexample = Some(CounterexampleJson {
                        proposition: prop.to_string(),
                        model,
                    });
                }
                SoundnessVerdict::Inconclusive { models_checked, reason } => {
                    report.line(format!("soundness at n = {n}: inconclusive after {models_checked} models: {reason}"));
                    report.raise(Status::Violation);
                    json.verdict = "inconclusive".into();
                    json.models = Some(models_checked);
                    json.reason = Some(reason);
                }
            }
        }
        OracleMode::Completeness => {
            json.mode = "completeness".into();
            let v = match check_completeness(&o, config) {
                Ok(v) => v,
                Err(e) => return Ok(with_error(report, e)),
            };
            json.consistent = Some(v.consistent);
            json.gap = Some(names(&v.gap));
            json.gap_at_next = v.gap_at_next.as_ref().map(names);
            if !v.consistent {
                report.line(format!("no model at n = {n}: every proposition is a semantic consequence"));
            }
            if v.is_pass() {
                report.line(format!("completeness at n = {n}: pass, gap empty"));
            } else {
                report.raise(Status::Violation);
                json.verdict = "fail".into();
                report.line(format!("completeness at n = {n}: FAIL, semantic but not derived ({}):", v.gap.len()));
                for p in &v.gap {
                    report.line(format!("  {p}  {}", ologism::reading(p, &o).unwrap_or_default()));
                }
                match &v.gap_at_next {
                    Some(g) => report.line(format!("still semantic at n = {}: {}", n + 1, g.len())),
                    None => report.line(format!("n = {} is too large to recheck", n + 1)),
                }
            }
        }
    }
    report.sections.oracle = Some(json);
    Ok(report)
}

fn with_error(mut report: Report, e: impl ToString) -> Report {
    oracle_error(&mut report, e);
    report
}

pub fn export_dot(path: &Path, derived: bool) -> Result<Report> {
    let mut report = Report::new("export-dot");
    let Some(o) = load_ologism(path, &mut report)? else {
        return Ok(report);
    };
    let theory = derived.then(|| close(&o));
    let dot = to_dot(&o, theory.as_ref().map(|t| t.derived()).as_ref());
    report.text.push_str(&dot);
    report.raw = true;
    report.sections.dot = Some(dot);
    Ok(report)
}

