//! End-to-end verification of the membrane-iso toolkit: a catalog of
//! domains, the per-domain pipeline (mesh, spectrum, asymmetry or geodesic
//! ball, bound checks), versioned JSON reports and CSV plot data.

pub mod catalog;
pub mod constants;
pub mod plot;
pub mod run;

pub use catalog::{default_catalog, load_catalog, parse_catalog, CatalogEntry, ConfigError};
pub use constants::{constants_table, ConstantsRow};
pub use plot::{write_checks_csv, write_plotdata};
pub use run::{run_catalog, run_entries, threads_from_env, EntryReport, RunOptions, RunReport, SCHEMA_VERSION};
