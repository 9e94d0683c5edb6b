//! Building blocks of the `derham` binary: report documents, the commands that
//! produce them, renderers and the on-disk cache.

pub mod cache;
pub mod commands;
pub mod document;
pub mod render;

pub use commands::{CliError, Limits};
pub use document::{ReportDocument, Results, SCHEMA_VERSION};
pub use render::Format;
