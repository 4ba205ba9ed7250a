//! Extremal 3-uniform hypergraphs: constructions, forbidden configurations,
//! copy counting and exact Turán search at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`hypergraph`]: triples, triple systems with pair-link bitsets, the
//!   `u3` edge-list format and isomorphism testing.
//! * [`pattern`]: the catalog of small forbidden configurations together
//!   with their automorphism counts.
//! * [`counter`]: the copy-counting engine (total, through an edge, through
//!   a vertex, exactly one marked edge).
//! * [`construction`]: extremal hosts, edge-addition strategies, validators
//!   and the compact construction-spec grammar.
//! * [`formula`]: closed-form sizes and copy counts, and the binomial
//!   inequality checkers.
//! * [`search`]: exact Turán numbers by branch and bound, minimum copy
//!   counts over single-edge additions, and sharpness audits.

pub mod bitset;
pub mod construction;
pub mod counter;
mod error;
pub mod formula;
pub mod hypergraph;
pub mod pattern;
pub mod search;

pub use bitset::{VertexSet, MAX_VERTICES};
pub use construction::{AdditionStrategy, Base, Construction, ConstructionSpec};
pub use counter::{CopyCounter, CountReport, Workers};
pub use error::{Error, Result};
pub use hypergraph::{PartitionLabeling, Triple, TripleSystem};
pub use pattern::Pattern;
