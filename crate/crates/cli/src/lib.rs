//! File formats, benchmark harness, plots and frame rendering on top of
//! `cgamapf-core`.

pub mod bench;
pub mod clock;
pub mod files;
pub mod movingai;
pub mod plot;
pub mod render;
pub mod replicas;
