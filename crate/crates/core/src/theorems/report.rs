use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The statements the harness can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statement {
    Annihilation,
    Cartier,
    CoupleMorphism,
    FrobeniusIso,
    PageIdentification,
    Filtration,
    ExampleDeg4,
}

impl Statement {
    pub const ALL: [Statement; 7] = [
        Statement::Annihilation,
        Statement::Cartier,
        Statement::CoupleMorphism,
        Statement::FrobeniusIso,
        Statement::PageIdentification,
        Statement::Filtration,
        Statement::ExampleDeg4,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statement::Annihilation => "annihilation",
            Statement::Cartier => "cartier",
            Statement::CoupleMorphism => "couple_morphism",
            Statement::FrobeniusIso => "frobenius_iso",
            Statement::PageIdentification => "page_identification",
            Statement::Filtration => "filtration",
            Statement::ExampleDeg4 => "example_deg4",
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown statement id `{0}`")]
pub struct UnknownStatement(pub String);

impl FromStr for Statement {
    type Err = UnknownStatement;

    /// Accepts the ids above; `euler` is an alias of `annihilation`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        if s == "euler" {
            return Ok(Statement::Annihilation);
        }
        Statement::ALL
            .into_iter()
            .find(|st| st.id() == s)
            .ok_or(UnknownStatement(s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Parameters {
    pub r: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl Parameters {
    pub fn new(r: usize, n: usize) -> Self {
        Parameters { r, n, p: None, k: None }
    }

    pub fn with_prime(mut self, p: u64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_page(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} n={}", self.r, self.n)?;
        if let Some(p) = self.p {
            write!(f, " p={p}")?;
        }
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Enough to replay a failure: together with the report parameters, the
/// failing check, the degree and a coordinate vector (decimal strings, so
/// arbitrary-size integers survive JSON).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub description: String,
    pub vector: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub statement: Statement,
    pub parameters: Parameters,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }
}

/// A failed check before it is attached to a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Failure {
    pub degree: Option<usize>,
    pub description: String,
    pub vector: Vec<String>,
}

impl Failure {
    pub fn at(degree: usize, description: impl Into<String>) -> Self {
        Failure {
            degree: Some(degree),
            description: description.into(),
            vector: Vec::new(),
        }
    }

    pub fn global(description: impl Into<String>) -> Self {
        Failure {
            degree: None,
            description: description.into(),
            vector: Vec::new(),
        }
    }

    pub fn with_vector<T: ToString>(mut self, v: &[T]) -> Self {
        self.vector = v.iter().map(ToString::to_string).collect();
        self
    }
}

pub(crate) struct Recorder {
    report: VerificationReport,
}

impl Recorder {
    pub fn new(statement: Statement, parameters: Parameters) -> Self {
        Recorder {
            report: VerificationReport {
                statement,
                parameters,
                status: Status::Pass,
                checks: Vec::new(),
                witness: None,
                notes: Vec::new(),
            },
        }
    }

    /// Records one named check; the first failure becomes the witness.
    pub fn record(&mut self, name: &str, outcome: Result<(), Failure>) -> bool {
        let passed = outcome.is_ok();
        if let Err(f) = outcome {
            if self.report.witness.is_none() {
                self.report.witness = Some(Witness {
                    check: name.to_string(),
                    degree: f.degree,
                    description: f.description,
                    vector: f.vector,
                });
            }
        }
        self.report.checks.push(Check {
            name: name.to_string(),
            passed,
        });
        passed
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }

    pub fn finish(mut self) -> VerificationReport {
        let ok = self.report.checks.iter().all(|c| c.passed) && self.report.witness.is_none();
        self.report.status = if ok { Status::Pass } else { Status::Fail };
        self.report
    }
}
