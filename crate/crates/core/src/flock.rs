use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::vec2::{center_of_mass, Vec2};

/// One rule-based ground agent: position plus the previous step's total force
/// (the inertia term of the weighted force sum).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sheep {
    pub position: Vec2,
    pub prev_force: Vec2,
}

/// The flock, fixed cardinality over an episode.
#[derive(Debug, Clone, PartialEq)]
pub struct FlockState {
    pub sheep: Vec<Sheep>,
}

impl FlockState {
    pub fn new(positions: &[Vec2]) -> Result<FlockState> {
        if positions.is_empty() {
            return Err(Error::InvalidInput("flock must have at least one sheep".into()));
        }
        Ok(FlockState {
            sheep: positions
                .iter()
                .map(|&p| Sheep {
                    position: p,
                    prev_force: Vec2::ZERO,
                })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.sheep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sheep.is_empty()
    }

    pub fn positions(&self) -> Vec<Vec2> {
        self.sheep.iter().map(|s| s.position).collect()
    }

    pub fn center_of_mass(&self) -> Vec2 {
        center_of_mass(&self.positions()).expect("flock is non-empty")
    }
}

/// The single controlled shepherd.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShepherdState {
    pub position: Vec2,
}
