//! Graphs given by a structure map `E -> F(V)` for a finite set functor `F`,
//! with homomorphisms, quotients, limits and colimits, graph relations,
//! cofree graphs, natural transformations and pattern classes.

#![forbid(unsafe_code)]

pub mod cofree;
pub mod covariety;
pub mod error;
pub mod functor;
pub mod graph;
pub mod hom;
pub mod id;
pub mod json;
pub mod limits;
pub mod morphism;
pub mod partition;
pub mod relations;
pub mod search;
pub mod subgraph;
pub mod transforms;

pub use error::{Caps, Error, Result, Violation};
pub use functor::{FunctorSpec, FunctorValue, IxValue, Value};
pub use graph::{graph, validate_graph, FGraph, RawGraph};
pub use hom::{validate_hom, Hom, HomMaps, HomViolation};
pub use id::{ElementId, FiniteSet};
pub use partition::{EquivPair, Partition};
pub use subgraph::{subgraph_check, SubgraphHandle};
