//! A workbench for structural Ramsey theory over finite relational structures.
//!
//! The crate enumerates the finite members of hereditary-style classes,
//! checks hereditary/joint-embedding/amalgamation properties up to a size
//! bound, decides partition arrows `C -> (B)^A_k` by weak hypergraph
//! coloring, certifies rigidity, extracts indiscernible embeddings, and
//! searches for definable linear orders as unions of 2-types.
//!
//! All embeddings are induced-substructure embeddings: they preserve and
//! reflect every relation and fix every constant.

pub mod canon;
pub mod catalog;
pub mod embedding;
pub mod error;
pub mod fraisse;
mod limits;
pub mod order;
pub mod ramsey;
pub mod signature;
pub mod structure;
pub mod types;

pub use canon::{canonical_form, canonical_labeling, canonical_structure, CanonicalCode};
pub use embedding::{automorphisms, enumerate_embeddings, is_embedding, is_isomorphic, Embedding, EmbeddingSearch};
pub use error::{Error, Result};
pub use limits::SearchLimits;
pub use signature::{RelationSymbol, Signature};
pub use structure::Structure;
pub use types::{qf_type, QfType};
