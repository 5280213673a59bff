//! Exact computations with quadratic forms over explicit fields: invariants,
//! isotropy and Witt decomposition, similitude multipliers and norm-group
//! certificates, skew-hermitian forms over quaternion algebras, and Clifford
//! algebras.

pub mod arith;
pub mod brauer;
pub mod clifford;
pub mod error;
pub mod field;
pub mod hypcert;
pub mod invariants;
pub mod isotropy;
pub mod linalg;
pub mod quadform;
pub mod quat;
pub mod similitudes;
pub mod splitting;

pub use error::{Error, Result};
pub use field::{Elem, Field};
