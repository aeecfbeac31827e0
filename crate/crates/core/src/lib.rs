//! Finite presheaf categories, lifting problems, the small object argument and
//! bounded checks for minimal model structures.

pub mod analysis;
pub mod base;
pub mod colimit;
pub mod error;
pub mod factorization;
pub mod homotopy;
pub mod lifting;
pub mod presheaf;
pub mod retract;
pub mod search;

pub use base::{load_base, BaseCategory, BaseDescription};
pub use error::{Error, Result};
pub use presheaf::{compose, validate_map, validate_presheaf, MapData, Presheaf, PresheafData, PresheafMap};
pub use search::{hom_enumerate, MapQuery};
