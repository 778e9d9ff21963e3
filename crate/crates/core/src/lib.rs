//! Finite-level type-space functors of first-order theories.
//!
//! A theory is represented as a truncated symmetric simplicial set: level `n`
//! holds the complete `n`-types, and every map of finite sets acts by
//! substitution of variables. On top of that representation the crate checks
//! amalgamation and lifting properties, runs bounded stability tests and
//! computes decalage cohomology with integer coefficients.

pub mod axioms;
pub mod builtin;
pub mod cohomology;
pub mod error;
pub mod finmap;
pub mod oracle;
pub mod report;
pub mod search;
pub mod stability;
pub mod structures;
pub mod symset;

pub use error::{Error, Result};
pub use finmap::{FinSetMap, Generator};
pub use report::{Report, Verdict, Witness};
pub use symset::{decalage, simplicial_map_validate, Decalage, SimplicialMapHandle, TruncatedSymSS};
