//! Minimum-cost mapping of a connected part of a fragmented query molecule
//! onto a fragmented target molecule.
//!
//! Both molecules are trees of fragments. A mapping picks exactly `nlink`
//! query fragments forming a connected subtree, sends them injectively to
//! target fragments so that query bonds land on target bonds, and only uses
//! pairs whose dissimilarity score is below a threshold `delta`. The cost is
//! the sum of the used scores.
//!
//! The solver is a small constraint engine ([`engine`]) running the model in
//! [`model`] under a branch-and-bound search ([`search`]). [`diversity`]
//! produces several near-optimal, mutually distant solutions and [`oracle`]
//! is an independent brute-force reference used for testing.

pub mod diversity;
pub mod engine;
pub mod instance;
pub mod model;
pub mod oracle;
pub mod search;

pub use instance::{FragmentTree, Instance, InstanceError, ScoreMatrix};
pub use model::{Mapping, ModelError};
pub use search::{SearchConfig, SearchOutcome, SolutionRecord, Status};
