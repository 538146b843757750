use std::time::{Duration, Instant};

use cgamapf_core::Deadline;

/// Deadline at a fixed wall-clock instant.
#[derive(Debug, Clone, Copy)]
pub struct WallClock {
    end: Instant,
}

impl WallClock {
    pub fn after(limit: Duration) -> Self {
        Self {
            end: Instant::now() + limit,
        }
    }

    pub fn after_secs(secs: f64) -> Self {
        Self::after(Duration::from_secs_f64(secs))
    }
}

impl Deadline for WallClock {
    fn expired(&self) -> bool {
        Instant::now() >= self.end
    }
}
