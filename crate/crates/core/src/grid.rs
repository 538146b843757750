//! Occupancy grids.

use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map dimensions must be positive (got {width}x{height})")]
    EmptyDimensions { width: usize, height: usize },
    #[error("map has {actual} cells, expected {width}x{height}")]
    CellCount { width: usize, height: usize, actual: usize },
}

/// A rectangular grid of passable / blocked cells stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridMap {
    width: usize,
    height: usize,
    passable: Vec<bool>,
}

impl GridMap {
    pub fn new(width: usize, height: usize, passable: Vec<bool>) -> Result<Self, MapError> {
        if width == 0 || height == 0 {
            return Err(MapError::EmptyDimensions { width, height });
        }
        if passable.len() != width * height {
            return Err(MapError::CellCount {
                width,
                height,
                actual: passable.len(),
            });
        }
        Ok(Self {
            width,
            height,
            passable,
        })
    }

    /// Fully open `width` x `height` grid.
    pub fn open(width: usize, height: usize) -> Result<Self, MapError> {
        Self::new(width, height, alloc::vec![true; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[bool] {
        &self.passable
    }

    pub fn is_passable(&self, row: usize, col: usize) -> bool {
        row < self.height && col < self.width && self.passable[row * self.width + col]
    }

    pub fn set_passable(&mut self, row: usize, col: usize, passable: bool) {
        self.passable[row * self.width + col] = passable;
    }

    pub fn passable_count(&self) -> usize {
        self.passable.iter().filter(|&&p| p).count()
    }
}
