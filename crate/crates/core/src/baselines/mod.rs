//! Reference solvers: prioritized planning over space-time A*, and PIBT.

pub mod pibt;
pub mod prp;

pub use pibt::{pibt_step, solve_pibt, PibtState};
pub use prp::{solve_prp, space_time_astar, ReservationTable};
