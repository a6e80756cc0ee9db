//! Exact construction and verification of parity-proof Kochen–Specker sets
//! in the three-qubit 40-ray / 25-basis system.
//!
//! * [`algebra`]: Gaussian-integer vectors, matrices and Pauli operators.
//! * [`rays`]: the pentagram, the 40 rays and 25 bases, the clique oracle.
//! * [`relabel`]: embedding the published tables into the generated system.
//! * [`parity`]: the parity predicate and the exhaustive parent search.
//! * [`transform`]: merging parent rays into rank-2 projectors.
//! * [`proof`]: parity, exhaustive and state-dependent contradictions.
//! * [`io`]: JSON and text formats.

pub mod algebra;
pub mod fixtures;
pub mod io;
pub mod ksset;
pub mod parallel;
pub mod parity;
pub mod proof;
pub mod rays;
pub mod rayset;
pub mod relabel;
pub mod transform;

pub use algebra::{GaussInt, Mat8, Pauli, PauliWord, Vec8};
pub use fixtures::{fixture_data, FixtureName};
pub use io::ParseError;
pub use ksset::{Frame, KsSet, ProjBasis, Projector, Provenance, Signature};
pub use parity::{BasisSubset, ParentSet};
pub use proof::{ProofKind, ProofReport, ResidualSystem};
pub use rays::{Basis, BasisKind, Ray, RaySystem};
pub use rayset::{RayId, RaySet};
pub use relabel::{match_fixture, Realization, RelabelMap};
pub use transform::{CountCertificate, MergeConfig};
