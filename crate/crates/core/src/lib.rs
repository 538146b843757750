//! Multi-agent pathfinding on 4-connected grids.
//!
//! The crate is `no_std` (with `alloc`) and carries the algorithmic part of the
//! toolkit: the grid graph, separating-vertex classification, the
//! corridor-generating solver, two baseline solvers (prioritized planning and
//! PIBT), and solution validation/metrics. File formats, the command-line
//! driver and wall-clock timing live in the `cgamapf` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod budget;
pub mod cga;
pub mod graph;
pub mod grid;
pub mod instance;
pub mod metrics;
pub mod search;
pub mod solution;
pub mod svs;

pub use budget::{Deadline, Limits, NoDeadline, SolveError, StopReason};
pub use graph::{GridGraph, Vertex};
pub use grid::{GridMap, MapError};
pub use instance::{AgentId, Instance, InstanceError};
pub use solution::{Conflict, ConflictKind, ConflictReport, Solution, StructuralError};
pub use svs::SeparatingVertexSet;
