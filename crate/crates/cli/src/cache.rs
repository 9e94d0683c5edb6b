//! `--cache DIR`: one JSON document per invocation key, reused only when the
//! schema version, command and parameters all match.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::document::{DocParameters, ReportDocument, SCHEMA_VERSION};

pub fn key(command: &str, params: &DocParameters) -> String {
    let mut key = format!("v{SCHEMA_VERSION}-{command}");
    if let Some(st) = &params.statement {
        key.push_str(&format!("-{st}"));
    }
    if params.all {
        key.push_str("-all");
    }
    key.push_str(&format!("-r{}-n{}", params.r, params.n));
    if let Some(p) = params.p {
        key.push_str(&format!("-p{p}"));
    }
    if let Some(k) = params.k {
        key.push_str(&format!("-k{k}"));
    }
    if let Some(i) = params.i {
        key.push_str(&format!("-i{i}"));
    }
    key
}

fn path(dir: &Path, command: &str, params: &DocParameters) -> PathBuf {
    dir.join(format!("{}.json", key(command, params)))
}

/// A stale, corrupt or mismatched file counts as a miss.
pub fn load(dir: &Path, command: &str, params: &DocParameters) -> Option<ReportDocument> {
    let text = fs::read_to_string(path(dir, command, params)).ok()?;
    let doc: ReportDocument = serde_json::from_str(&text).ok()?;
    (doc.schema_version == SCHEMA_VERSION && doc.command == command && &doc.parameters == params)
        .then_some(doc)
}

pub fn store(dir: &Path, doc: &ReportDocument) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut doc = doc.clone();
    doc.timing = None;
    let text = serde_json::to_string_pretty(&doc).map_err(io::Error::other)?;
    let target = path(dir, &doc.command, &doc.parameters);
    let tmp = target.with_extension("json.tmp");
    fs::write(&tmp, text)?;
    fs::rename(tmp, target)
}
