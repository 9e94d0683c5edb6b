use derham_core::theorems::VerificationReport;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

/// Everything a command prints, in a fixed key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub parameters: DocParameters,
    pub results: Results,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ReportDocument {
    pub fn new(command: &str, parameters: DocParameters, results: Results) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            parameters,
            results,
            timing: None,
        }
    }

    /// False only for a verification with at least one failing report.
    pub fn passed(&self) -> bool {
        match &self.results {
            Results::Verify(reports) => reports.iter().all(VerificationReport::passed),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocParameters {
    pub r: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statement: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub all: bool,
}

impl DocParameters {
    pub fn new(r: usize, n: usize) -> Self {
        DocParameters {
            r,
            n,
            ..Default::default()
        }
    }
}

// Variant order matters for deserialization: the cohomology table is the only
// payload that can be an empty array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Results {
    Cohomology(Vec<CohomologyRow>),
    Verify(Vec<VerificationReport>),
    Pages(PagesTable),
    Basis(BasisTable),
}

/// `Hⁱ ≅ ℤ^free_rank ⊕ ⨁ ℤ/d`, factors in ascending divisibility order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyRow {
    pub i: usize,
    pub free_rank: usize,
    pub invariant_factors: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PagesTable {
    pub p: u64,
    pub nu: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub pages: Vec<PageRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageRow {
    pub k: usize,
    pub dims: Vec<usize>,
    pub differential_ranks: Vec<usize>,
    pub expected_dims: Vec<usize>,
    pub identified: bool,
    pub closed_form_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisTable {
    pub dim: usize,
    pub elements: Vec<BasisRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisRow {
    pub index: usize,
    pub alpha: Vec<u32>,
    pub wedge: Vec<usize>,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}
