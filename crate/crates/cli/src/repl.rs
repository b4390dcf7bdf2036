//! Interactive editing session. The closure is recomputed from scratch
//! after every change.

use std::collections::BTreeSet;
use std::fs;

use ologism::deduce::{close, contradictions, explain, Theory};
use ologism::dsl::{parse_equation, parse_items, parse_ologism, retract_items, serialize_ologism, SourceDiagnostic};
use ologism::eqtheory::{CongruenceIndex, Equality};
use ologism::oracle::{count_models, OracleConfig};
use ologism::{Form, Ologism, Proposition};

pub const HELP: &str = "\
commands:
  load FILE          replace the document with FILE
  add ITEMS          add items, e.g. `add E M A` or `add type X \"an x\"`
  retract ITEMS      remove items
  why PROP           derivation of PROP, written `O:A,B` or `O A B`
  derived            propositions derived beyond the premisses
  contradictions     every O(X,X) with its derivation
  equal P = Q        decide equality of two parallel paths
  models N           number of models over a universe of N elements
  show               print the document
  save FILE          write the document
  help               this list
  quit               leave the session
";

pub struct Session {
    ologism: Ologism,
    theory: Theory,
    bound: Option<usize>,
}

/// Output of one command; `quit` ends the session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub text: String,
    pub quit: bool,
}

impl Default for Session {
    fn default() -> Self {
        Self::new(None)
    }
}

impl Session {
    pub fn new(bound: Option<usize>) -> Self {
        let ologism = Ologism::new("session");
        let theory = close(&ologism);
        Session { ologism, theory, bound }
    }

    pub fn ologism(&self) -> &Ologism {
        &self.ologism
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn execute(&mut self, line: &str) -> Reply {
        let line = line.trim();
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let text = match cmd {
            "" => String::new(),
            "help" => HELP.to_string(),
            "quit" | "exit" => {
                return Reply {
                    text: String::new(),
                    quit: true,
                }
            }
            "load" => self.load(rest),
            "add" => self.edit(parse_items(rest, &self.ologism)),
            "retract" => self.edit(retract_items(rest, &self.ologism)),
            "why" => self.why(rest),
            "derived" => self.derived(),
            "contradictions" => self.contradictions(),
            "equal" => self.equal(rest),
            "models" => self.models(rest),
            "show" => serialize_ologism(&self.ologism).unwrap_or_else(|e| format!("error: {e}\n")),
            "save" => self.save(rest),
            other => format!("error: unknown command `{other}`; try `help`\n"),
        };
        Reply { text, quit: false }
    }

    fn load(&mut self, path: &str) -> String {
        match fs::read_to_string(path) {
            Err(e) => format!("error: cannot read {path}: {e}\n"),
            Ok(source) => {
                let mut out = format!("loaded {path}\n");
                out.push_str(&self.replace(parse_ologism(&source), true));
                out
            }
        }
    }

    fn edit(&mut self, result: Result<Ologism, Vec<SourceDiagnostic>>) -> String {
        self.replace(result, false)
    }

    /// Installs a new document and reports what changed in the theory.
    fn replace(&mut self, result: Result<Ologism, Vec<SourceDiagnostic>>, fresh: bool) -> String {
        let next = match result {
            Ok(o) => o,
            Err(diags) => return diags.iter().map(|d| format!("{d}\n")).collect(),
        };
        let before = if fresh {
            BTreeSet::new()
        } else {
            self.theory.propositions()
        };
        let old_contradictions: BTreeSet<_> = if fresh {
            BTreeSet::new()
        } else {
            contradictions(&self.theory).into_iter().map(|(t, _)| t).collect()
        };
        self.ologism = next;
        self.theory = close(&self.ologism);
        let after = self.theory.propositions();
        let derived = self.theory.derived();
        let mut out = String::new();
        for p in derived.iter().filter(|p| !before.contains(p)) {
            out.push_str(&format!("new: {}\n", self.describe(p)));
        }
        for p in before.difference(&after) {
            out.push_str(&format!("gone: {p}\n"));
        }
        for (t, d) in contradictions(&self.theory) {
            if !old_contradictions.contains(&t) {
                let p = Proposition::o(t.clone(), t);
                out.push_str(&format!("contradiction: {}\n{}", self.describe(&p), indent(&d.to_string())));
            }
        }
        if out.is_empty() {
            out.push_str("no change in the theory\n");
        }
        out
    }

    fn describe(&self, p: &Proposition) -> String {
        match ologism::reading(p, &self.ologism) {
            Ok(r) => format!("{p}  {r}"),
            Err(_) => p.to_string(),
        }
    }

    fn why(&self, rest: &str) -> String {
        let prop = match parse_prop(rest) {
            Ok(p) => p,
            Err(e) => return format!("error: {e}\n"),
        };
        match explain(&self.theory, &prop) {
            Ok(d) => d.to_string(),
            Err(e) => format!("{} is not derivable\n", e.0),
        }
    }

    fn derived(&self) -> String {
        let derived = self.theory.derived();
        if derived.is_empty() {
            return "derived: none\n".into();
        }
        derived.iter().map(|p| format!("{}\n", self.describe(p))).collect()
    }

    fn contradictions(&self) -> String {
        let found = contradictions(&self.theory);
        if found.is_empty() {
            return "contradictions: none\n".into();
        }
        found
            .into_iter()
            .map(|(t, d)| {
                let p = Proposition::o(t.clone(), t);
                format!("{}\n{}", self.describe(&p), indent(&d.to_string()))
            })
            .collect()
    }

    fn equal(&self, rest: &str) -> String {
        let (p, q) = match parse_equation(rest, &self.ologism) {
            Ok(sides) => sides,
            Err(diags) => return diags.iter().map(|d| format!("{d}\n")).collect(),
        };
        let index = match CongruenceIndex::new(&self.ologism) {
            Ok(i) => i,
            Err(e) => return format!("error: {e}\n"),
        };
        match index.equal(&p, &q, self.bound) {
            Ok(Equality::Equal { trace }) => {
                let mut out = format!("{p} = {q}: equal in {} step(s)\n", trace.len());
                for s in trace {
                    out.push_str(&format!("  {} at {}: {}\n", s.fact, s.position, s.result));
                }
                out
            }
            Ok(Equality::NotEqualWithinBound { bound, .. }) => format!("{p} = {q}: not equal within bound {bound}\n"),
            Err(e) => format!("error: {e}\n"),
        }
    }

    fn models(&self, rest: &str) -> String {
        let Ok(n) = rest.parse::<usize>() else {
            return format!("error: `{rest}` is not a universe size\n");
        };
        let config = OracleConfig {
            universe_size: n,
            ..OracleConfig::default()
        };
        match count_models(&self.ologism, &config) {
            Ok(k) => format!("models at n = {n}: {k}\n"),
            Err(e) => format!("error: {e}\n"),
        }
    }

    fn save(&self, path: &str) -> String {
        match serialize_ologism(&self.ologism) {
            Err(e) => format!("error: {e}\n"),
            Ok(text) => match fs::write(path, text) {
                Ok(()) => format!("saved {path}\n"),
                Err(e) => format!("error: cannot write {path}: {e}\n"),
            },
        }
    }
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("    {l}\n")).collect()
}

/// Accepts `O:A,B` and `O A B`.
fn parse_prop(text: &str) -> Result<Proposition, String> {
    if text.contains(':') {
        return Proposition::parse_literal(text).map_err(|e| e.to_string());
    }
    let parts: Vec<&str> = text.split_whitespace().collect();
    let [form, s, p] = parts.as_slice() else {
        return Err(format!("expected a proposition such as `O:A,B`, found `{text}`"));
    };
    let form = form
        .chars()
        .next()
        .filter(|_| form.len() == 1)
        .and_then(Form::from_letter)
        .ok_or_else(|| format!("`{form}` is not one of A, E, I, O"))?;
    Proposition::parse_literal(&format!("{}:{s},{p}", form.letter())).map_err(|e| e.to_string())
}
