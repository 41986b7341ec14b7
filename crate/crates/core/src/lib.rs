//! Exact computations with truncated log de Rham complexes over Z/p^n,
//! Witt vectors, the inverse Cartier operator, traces along finite covers
//! and the ramification filtrations they define.

pub mod error;
pub mod cartier;
pub mod cohomology;
pub mod filtration;
pub mod forms;
pub mod laurent;
pub mod pushforward;
pub mod ring;
pub mod suites;
mod text;
pub mod witt;

pub use error::{Error, Result};
pub use forms::{LogForm, PoleVector, Subset};
pub use laurent::{Exponent, LaurentPoly, Var, VarKind, VarRoster};
pub use ring::{HowellMatrix, Modulus, RatExponent, Scalar};
