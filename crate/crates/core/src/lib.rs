//! Exact computations in prime-characteristic commutative algebra.

pub mod divisor;
pub mod extension;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod frobenius;
pub mod groebner;
pub mod parse;
pub mod pmap;
pub mod poly;
pub mod session;
pub mod testideal;
pub mod unipoly;
pub mod verify;

pub use error::{Error, Result};
pub use field::FieldCtx;
pub use poly::{MonomialOrder, Poly, PolyRing};
