//! File formats, the lattice catalog, reports and batch runs.

pub mod batch;
pub mod catalog;
pub mod experiment;
pub mod lattice_file;
pub mod polygon;
pub mod report;

pub use batch::{run_manifest, Manifest};
pub use catalog::{catalog, NAMES as CATALOG_NAMES};
pub use experiment::{Experiment, Outcome, RunConfig, TensorChecks};
pub use lattice_file::{emit_lattice, load_lattice, parse_lattice, read_lattice_file, LatticeFile};
pub use polygon::{polygon_csv, polygon_svg};
pub use report::{ExperimentRecord, ReportDocument, Status};
