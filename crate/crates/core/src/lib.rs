//! Minimal group-ring indices, associated orders and freeness for Galois
//! extensions of p-adic fields, by closed forms and by exhaustive search.

pub mod closed_forms;
pub mod error;
pub mod oracle;
pub mod padic;
pub mod ramification;
pub mod reports;
pub mod tower;

pub use closed_forms::{IndexReport, NuData, PrimeRamification, SweepRow, WitnessRecipe};
pub use error::{Error, Result};
pub use oracle::{AssociatedOrder, OracleConfig, OracleResult, SearchOutcome};
pub use padic::{PadicScalar, Val};
pub use ramification::RamificationProfile;
pub use reports::{AnalyzeOptions, CatalogEntry, ReportDocument};
pub use tower::{ExtensionSpec, FieldTower, GaloisLatticeModel, TowerElement};
