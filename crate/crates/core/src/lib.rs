pub mod cyclo;
pub mod dynamics;
pub mod linalg;
pub mod group;
pub mod invariants;
pub mod isotropy;
pub mod quat;
pub mod rep;
pub mod series;
pub mod error;

pub use error::{Error, Result};
