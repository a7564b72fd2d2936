//! Towers of p-adic fields, their Galois groups, and lattice models.

mod field;
mod galois;
mod roots;
mod spec;

pub use field::{FieldTower, Layer, LayerDesc, LayerKind, TowerElement, TowerRing};
pub use galois::{find_automorphisms, kummer_extension, restrict, Automorphism, GaloisLatticeModel};
pub use roots::roots;
pub use spec::{ExtensionSpec, LayerSpec};

pub(crate) use field::is_prime;
