//! Combinatorial models of directed path spaces on cubical complexes.
//!
//! Given a face-closed set of cells of a standard cube, the library builds
//! the poset of cube chains from the bottom vertex to the top vertex,
//! equips it with a discrete gradient field, and enumerates the critical
//! cells three independent ways: from the field itself, by structural
//! recursion, and through explicit critical sequences. For complexes made of
//! unit cubes in Euclidean space the same data is available geometrically as
//! critical routes. A homology oracle over the integers verifies the models
//! against brute-force simplicial computation.

pub mod cubical;
pub mod error;
pub mod euclid;
pub mod homology;
pub mod input;
pub mod morse;
pub mod partitions;
pub mod poset;
pub mod random;
pub mod wk;

pub use cubical::{Cube, CubicalComplex, Endpoint, LabelSet, Tri};
pub use error::{Error, Result};
pub use euclid::{CriticalRoute, ElementaryCube, EuclideanComplex, MultisetPartition};
pub use homology::{betti, BettiReport};
pub use morse::{DiscreteVectorField, GradientVerdict, MorseValue};
pub use partitions::{CubeChain, OrderedPartition};
pub use poset::{FinitePoset, SimplicialComplexRecord};
pub use wk::{BranchingSequence, CriticalSequence};
