//! Graphviz output. Types are boxes and aspects labelled arrows. Premisses
//! E, I and O are drawn through unlabelled bullet nodes, in the shape of
//! their diagrams; derived propositions are dashed edges labelled with
//! their form; facts are dotted edges annotated with a check mark.

use std::collections::BTreeSet;
use std::fmt::Write;

use ologism::{Form, Ologism, Proposition};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n"))
}

pub fn to_dot(o: &Ologism, derived: Option<&BTreeSet<Proposition>>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&o.name)).unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for t in &o.types {
        writeln!(out, "  {} [label={}];", quote(t.id.as_str()), quote(&t.label)).unwrap();
    }
    for a in &o.aspects {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(a.source.as_str()),
            quote(a.target.as_str()),
            quote(&a.name)
        )
        .unwrap();
    }
    let mut bullets = 0;
    let mut bullet = |out: &mut String| {
        let id = quote(&format!("_bullet{bullets}"));
        bullets += 1;
        writeln!(out, "  {id} [shape=point, label=\"\"];").unwrap();
        id
    };
    let mut premisses: Vec<&Proposition> = o.premisses.iter().filter(|p| p.form() != Form::A).collect();
    premisses.sort();
    for p in premisses {
        let (s, q) = (quote(p.subject().as_str()), quote(p.predicate().as_str()));
        match p.form() {
            Form::E => {
                let b = bullet(&mut out);
                writeln!(out, "  {s} -> {b};\n  {q} -> {b};").unwrap();
            }
            Form::I => {
                let b = bullet(&mut out);
                writeln!(out, "  {b} -> {s};\n  {b} -> {q};").unwrap();
            }
            Form::O => {
                let (b1, b2) = (bullet(&mut out), bullet(&mut out));
                writeln!(out, "  {b1} -> {s};\n  {b1} -> {b2};\n  {q} -> {b2};").unwrap();
            }
            Form::A => {}
        }
    }
    for f in &o.facts {
        writeln!(
            out,
            "  {} -> {} [style=dotted, arrowhead=none, label={}];",
            quote(f.lhs.source().as_str()),
            quote(f.lhs.target().as_str()),
            quote(&format!("✓ {} = {}", f.lhs, f.rhs))
        )
        .unwrap();
    }
    for p in derived.into_iter().flatten() {
        writeln!(
            out,
            "  {} -> {} [style=dashed, label={}];",
            quote(p.subject().as_str()),
            quote(p.predicate().as_str()),
            quote(&p.form().letter().to_string())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
