//! Fixture manifests, suite runs and deterministic reports.

mod bundle;
mod manifest;
mod report;
mod suite;

pub use bundle::{parse_bundle, verify_bundle, DiagramBundle, MapDecl, SnakeDecl, SquareDecl};
pub use manifest::{
    load_manifest, parse_manifest, read_manifest, resolve, AlgebraDecl, BimoduleDecl, CategoryDecl, Check, CheckDecl, DiagramProperty,
    FixtureManifest, ManifestFile, ModuleDecl, ResolvedTriple, Rows, SubcategoryDecl, SuiteDecl, TripleDecl, TripleKind,
    MANIFEST_VERSION,
};
pub use report::{emit_report, parse_report, CheckReport, Format, Outcome, Report, REPORT_VERSION};
pub use suite::{run_checks, run_suite};
