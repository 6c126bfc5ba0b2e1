//! Exact arithmetic over F_p, F_p[T] and F_p(T).

pub mod field;
pub mod kernels;
mod ntt;
pub mod poly;
pub mod ratfunc;

pub use field::{Coeff, Fp};
pub use poly::Poly;
pub use ratfunc::{convergents, RatFunc};
