//! Left-ideal relation graphs over the full matrix ring M_n(GF(q)).
//!
//! Vertices are all `n x n` matrices over GF(q); there is an edge `X -> Y`
//! when the left ideal `[X]` is properly contained in `[Y]`. The crate builds
//! the graph and its quotient on ideal classes, constructs and factors its
//! automorphisms, and computes its graph invariants next to their closed
//! forms.
//!
//! Module map:
//!
//! * [`field`]: GF(p^m) arithmetic and Frobenius maps.
//! * [`matrix`]: matrices, RREF, named elementary matrices, vertex encoding.
//! * [`ideal`]: canonical left ideals and the subspace lattice.
//! * [`graph`]: full and quotient relation graphs, degrees, DOT/edge-list export.
//! * [`invariants`]: clique/chromatic number, girth, metric, domination,
//!   strong metric dimension, Eulerian check, K_{3,3} witness.
//! * [`aut`]: standard automorphisms, verification, factorization, group orders.
//! * [`counting`]: Gaussian binomials, fiber sizes, predicted degrees.
//! * [`format`]: text formats for permutations, decompositions and headers.

pub mod aut;
pub mod counting;
pub mod error;
pub mod field;
pub mod format;
pub mod graph;
pub mod ideal;
pub mod invariants;
pub mod matrix;

#[cfg(test)]
mod proptests;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldSpec};
pub use graph::{GraphKind, RelationGraph};
pub use ideal::LeftIdeal;
pub use matrix::{Elementary, Matrix};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default bound on `q^(n^2)` (and on quotient vertex counts).
pub const DEFAULT_VERTEX_CAP: u64 = 100_000;

/// The single PRNG used for every seeded operation: ChaCha8, keyed from the
/// 64-bit seed by `SeedableRng::seed_from_u64`.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
