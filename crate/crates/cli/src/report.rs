//! Structured command results, rendered as text or JSON.

use std::io::IsTerminal;

use ologism::deduce::Derivation;
use ologism::dsl::{Severity, SourceDiagnostic};
use ologism::syll::SyllProofTree;
use ologism::{Diagnostic, Ologism, Proposition};
use serde::Serialize;

/// Outcome of a command, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Contradiction,
    Violation,
    ParseError,
}

impl Status {
    /// 0 for ok, 1 for a contradiction or violation, 2 for unusable input.
    /// I/O failures exit with 3 before a report exists.
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Contradiction | Status::Violation => 1,
            Status::ParseError => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Contradiction => "contradiction",
            Status::Violation => "violation",
            Status::ParseError => "parse_error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagnosticJson {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    /// Absent for whole-document checks that have no single position.
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl From<&SourceDiagnostic> for DiagnosticJson {
    fn from(d: &SourceDiagnostic) -> Self {
        DiagnosticJson {
            severity: d.severity,
            code: d.code.clone(),
            message: d.message.clone(),
            line: Some(d.line),
            column: Some(d.column),
        }
    }
}

impl From<&Diagnostic> for DiagnosticJson {
    fn from(d: &Diagnostic) -> Self {
        DiagnosticJson {
            severity: Severity::Error,
            code: d.code.to_string(),
            message: d.message.clone(),
            line: None,
            column: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub name: String,
    pub types: usize,
    pub aspects: usize,
    pub premisses: usize,
    pub facts: usize,
}

impl Summary {
    pub fn of(o: &Ologism) -> Self {
        Summary {
            name: o.name.clone(),
            types: o.types.len(),
            aspects: o.general_aspects().count(),
            premisses: o.premisses.len(),
            facts: o.facts.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropJson {
    pub proposition: String,
    pub reading: String,
}

impl PropJson {
    pub fn new(p: &Proposition, o: &Ologism) -> Self {
        PropJson {
            proposition: p.to_string(),
            reading: ologism::reading(p, o).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationJson {
    pub conclusion: String,
    pub rule: String,
    pub children: Vec<DerivationJson>,
}

impl From<&Derivation> for DerivationJson {
    fn from(d: &Derivation) -> Self {
        DerivationJson {
            conclusion: d.conclusion.to_string(),
            rule: d.rule.to_string(),
            children: d.children.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContradictionJson {
    #[serde(rename = "type")]
    pub type_id: String,
    pub proposition: String,
    pub reading: String,
    pub derivation: DerivationJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepJson {
    pub fact: String,
    pub direction: String,
    pub position: usize,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityJson {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    pub bound: usize,
    pub trace: Vec<StepJson>,
    pub cap_reached: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofTreeJson {
    pub diagram: String,
    pub rule: String,
    pub children: Vec<ProofTreeJson>,
}

impl From<&SyllProofTree> for ProofTreeJson {
    fn from(t: &SyllProofTree) -> Self {
        use ologism::syll::SyllRule;
        let rule = match &t.rule {
            SyllRule::Premiss(s) => format!("premiss {s}"),
            SyllRule::ExistentialImport(x) => format!("existential import I({x},{x})"),
            SyllRule::Reversal => "reversal".into(),
            SyllRule::Superposition => "superposition".into(),
            SyllRule::Composition { middle } => format!("composition {middle}"),
        };
        ProofTreeJson {
            diagram: t.root.to_string(),
            rule,
            children: t.children.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofJson {
    pub premisses: Vec<String>,
    pub conclusion: String,
    pub valid: bool,
    pub tree: Option<ProofTreeJson>,
    pub rejection: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoodJson {
    pub figure: u8,
    pub mood: String,
    pub premisses: [String; 2],
    pub conclusion: String,
    /// `valid`, `valid_with_import` or `invalid`.
    pub verdict: String,
    pub import: Vec<String>,
    pub rejection: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoodsJson {
    pub with_import: bool,
    pub total: usize,
    pub valid: usize,
    pub valid_with_import: usize,
    pub import_only: usize,
    pub forms: Vec<MoodJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationJson {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleJson {
    pub proposition: String,
    pub model: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleJson {
    pub mode: String,
    pub universe: usize,
    /// `pass`, `fail` or `inconclusive`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub models: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_at_next: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Sections {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<DiagnosticJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived: Option<Vec<PropJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contradictions: Option<Vec<ContradictionJson>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub equalities: Vec<EqualityJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof: Option<ProofJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moods: Option<MoodsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<Vec<ViolationJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dot: Option<String>,
}

/// A command result. `text` is the human rendering; the other fields are
/// the JSON rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub sections: Sections,
    #[serde(skip)]
    pub text: String,
    /// Text output is the bare `text`, with no status line, when ok.
    #[serde(skip)]
    pub raw: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            status: Status::Ok,
            sections: Sections::default(),
            text: String::new(),
            raw: false,
        }
    }

    /// Raises the status; it never goes down.
    pub fn raise(&mut self, status: Status) {
        self.status = self.status.max(status);
    }

    pub fn line(&mut self, line: impl AsRef<str>) {
        self.text.push_str(line.as_ref());
        self.text.push('\n');
    }

    pub fn diagnostic(&mut self, d: DiagnosticJson) {
        if d.severity == Severity::Error {
            self.raise(Status::ParseError);
        }
        let at = match (d.line, d.column) {
            (Some(l), Some(c)) => format!("{l}:{c}: "),
            _ => String::new(),
        };
        let kind = match d.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        self.line(format!("{at}{kind}[{}]: {}", d.code, d.message));
        self.sections.diagnostics.push(d);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Renders the final output, including the status line in text mode.
pub fn render(report: &Report, format: Format, color: bool) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text if report.raw && report.status == Status::Ok => report.text.clone(),
        Format::Text => {
            let status = report.status.as_str();
            let status = if color {
                let code = match report.status {
                    Status::Ok => "32",
                    Status::Contradiction | Status::Violation => "31",
                    Status::ParseError => "33",
                };
                format!("\x1b[{code}m{status}\x1b[0m")
            } else {
                status.to_string()
            };
            format!("{}status: {status}\n", report.text)
        }
    }
}

/// Color only on a terminal, and never when disabled by flag or `NO_COLOR`.
pub fn use_color(no_color: bool) -> bool {
    !no_color && std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal()
}
