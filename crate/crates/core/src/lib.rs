//! Ordered Bratteli-Vershik diagrams and the periodicity of their codings.
//!
//! The crate is split along the natural layers of the problem:
//!
//! * [`diagram`] holds the ordered diagram itself, its validation against the
//!   standing conditions, path counting, telescoping, and the equivalent
//!   recursion-table form together with both text file formats.
//! * [`blocks`] builds basic blocks `B^(k)(n,j)` as a shared DAG so that words
//!   of astronomical length can be queried without materializing them.
//! * [`coding`] runs the Vershik successor on finite path prefixes and
//!   produces k-codings of orbits.
//! * [`analysis`] contains the word utilities and the periodicity decision
//!   procedures (semi k-periodicity, the local deficit condition, rank-one
//!   structure, periodicity verdicts).
//! * [`corpus`] ships named fixtures and seeded random generators.

pub mod analysis;
pub mod blocks;
pub mod coding;
pub mod corpus;
pub mod diagram;
mod error;

pub use error::{Error, Result};

pub use blocks::{Alphabet, BlockDag, BlockHandle, Letter, Word};
pub use diagram::{Layer, OrderedDiagram, RecursionTable, ValidationReport};
