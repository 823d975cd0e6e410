//! Computational tools for finite loops: inner mapping groups, nuclei and
//! center, central nilpotency, the equational goals around abelian inner
//! mapping groups, exhaustive enumeration of small loops, and generation
//! and orchestration of first-order prover problems.

pub mod conjecture;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod iso;
pub mod mask;
pub mod perm;
pub mod prover;
pub mod structure;
pub mod table;
pub mod variety;

pub use error::{Error, Result};
pub use fixtures::{builtin_table, Fixture};
pub use group::PermGroup;
pub use mask::SubsetMask;
pub use perm::Perm;
pub use table::{Elem, LoopTable, ParseError, ParseErrorKind};
