//! Run limits shared by every solver.

use alloc::vec::Vec;
use thiserror::Error;

use crate::graph::Vertex;

/// Wall-clock (or any external) stop signal. The core crate has no clock;
/// callers supply one.
pub trait Deadline {
    fn expired(&self) -> bool;
}

/// A deadline that never fires.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoDeadline;

impl Deadline for NoDeadline {
    fn expired(&self) -> bool {
        false
    }
}

impl<F: Fn() -> bool> Deadline for F {
    fn expired(&self) -> bool {
        self()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of time steps in a returned plan. `None` selects the
    /// solver's default (20 x |V|).
    pub step_cap: Option<usize>,
}

impl Limits {
    pub fn with_step_cap(step_cap: usize) -> Self {
        Self {
            step_cap: Some(step_cap),
        }
    }

    pub fn resolve_step_cap(&self, num_vertices: usize) -> usize {
        self.step_cap.unwrap_or(20 * num_vertices.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Deadline,
    StepCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    /// The run stopped before every agent stood on its goal. `partial` holds
    /// whatever timed paths the solver had committed (possibly empty).
    #[error("timed out ({reason:?})")]
    Timeout {
        reason: StopReason,
        partial: Vec<Vec<Vertex>>,
    },
    #[error("agent {agent} cannot reach its goal in the static graph")]
    Unreachable { agent: usize },
}

impl SolveError {
    pub fn is_timeout(&self) -> bool {
        matches!(self, SolveError::Timeout { .. })
    }
}
