//! Finite Boolean algebras with operators from algebraic logic: cylindric and relation
//! atom structures, rainbow/Monk/Maddux constructions, atomic games and a small
//! representability oracle.

pub mod blowup;
pub mod canon;
pub mod error;
pub mod games;
pub mod kernel;
pub mod maddux;
pub mod matrices;
pub mod monk;
pub mod oracle;
pub mod rainbow;
pub mod scenario;

pub use error::{Error, Result};
