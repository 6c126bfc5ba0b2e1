//! Exact continued-fraction expansions of hyperquadratic power series over
//! F_p((1/T)): the Mahler series, the root of `T X^(r+1) + X - T = 0`, and
//! their relatives, computed three independent ways and cross-checked.

pub mod algebra;
pub mod cli;
pub mod contfrac;
pub mod error;
pub mod hyperquad;
pub mod laurent;
pub mod solvers;
pub mod words;

pub use algebra::{Fp, Poly, RatFunc};
pub use contfrac::{Expansion, Word};
pub use error::{Error, Result};
pub use laurent::Laurent;
