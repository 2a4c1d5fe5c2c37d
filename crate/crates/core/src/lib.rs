//! Restricted and higher Frobenius-kernel representation theory of `SL₂`
//! with a reduced enveloping algebra twist: field arithmetic, weights, a
//! PBW engine, Verma modules and their irreducible quotients.

pub mod abelian;
pub mod analysis;
pub mod cli;
pub mod field;
pub mod linalg;
pub mod modp;
pub mod pbw;
pub mod rep;
pub mod verma;
pub mod weights;
