//! Exact computation and verification of the zeta-function factorization of
//! Dwork hypersurfaces `x_1^n + ... + x_n^n - n psi x_1...x_n = 0` over `F_q`,
//! driven by the representation theory of `G = A x| S_n`.

pub mod arith;
pub mod chars;
pub mod counting;
pub mod cyclo;
pub mod error;
pub mod ffield;
pub mod group;
pub mod limits;
pub mod par;
pub mod reptheory;
pub mod suite;
pub mod zeta;

pub use error::{Error, Result};
pub use par::Parallelism;
