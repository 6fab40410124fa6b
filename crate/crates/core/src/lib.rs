//! Exact combinatorics of the Lipschitz polytope `LIP(X)` and its dual, the
//! Kantorovich-Rubinstein polytope `KR(X)`, of a finite metric space.
//!
//! Everything is computed in exact rational arithmetic. Points are indexed
//! from zero in the API and labelled from one in files, text and DOT output.
//!
//! ```
//! use lipkr::{faces, metric};
//!
//! let ms = metric::rearrangement_metric(3);
//! assert_eq!(faces::f_vector(&ms).unwrap(), vec![1, 12, 30, 20]);
//! ```

pub mod admissible;
pub mod assignment;
pub mod classify;
pub mod error;
pub mod faces;
pub mod graph;
pub mod io;
pub mod metric;
pub mod norms;
pub mod oracle;
pub mod parallel;
pub mod rational;
pub mod triangulate;

pub use error::{Error, Result, TieWitness};
pub use graph::DirectedEdgeSet;
pub use metric::MetricSpace;
pub use rational::Rational;
