//! Exact arithmetic in the cyclotomic fields `Q(zeta_N)`, `4 | N`.

mod field;
mod number;
mod numeric;
mod serde_impl;

pub use field::{cyclotomic_polynomial, CycloField, MAX_ORDER};
pub use number::{CycloNumber, Rational};
pub use numeric::{Ball, ComplexBall};
pub use serde_impl::CycloJson;
pub(crate) use field::lcm_u32 as lcm;
