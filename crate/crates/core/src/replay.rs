//! FIFO replay memory with uniform random sampling.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::Rng;

pub const STATE_DIM: usize = 4;
pub const ACTION_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: [f64; STATE_DIM],
    pub action: [f64; ACTION_DIM],
    pub reward: f64,
    pub next_state: [f64; STATE_DIM],
    pub terminal: bool,
}

#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    storage: VecDeque<Transition>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> ReplayBuffer {
        assert!(capacity > 0, "replay capacity must be positive");
        ReplayBuffer {
            capacity,
            storage: VecDeque::with_capacity(capacity.min(1 << 16)),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.storage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.storage.is_empty()
    }

    /// Insert, evicting the oldest transition when full.
    pub fn push(&mut self, t: Transition) {
        if self.storage.len() == self.capacity {
            self.storage.pop_front();
        }
        self.storage.push_back(t);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.storage.iter()
    }

    /// Uniform sample with replacement.
    pub fn sample(&self, n: usize, rng: &mut Rng) -> Vec<Transition> {
        assert!(!self.storage.is_empty(), "cannot sample an empty buffer");
        (0..n)
            .map(|_| self.storage[rng.gen_range(0..self.storage.len())].clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn t(tag: f64) -> Transition {
        Transition {
            state: [tag; 4],
            action: [tag; 2],
            reward: tag,
            next_state: [tag; 4],
            terminal: false,
        }
    }

    #[test]
    fn never_exceeds_capacity_and_evicts_fifo() {
        let mut buf = ReplayBuffer::new(10);
        for i in 0..15 {
            buf.push(t(i as f64));
            assert!(buf.len() <= 10);
        }
        // First 5 evicted, 5..15 present in order.
        let rewards: Vec<f64> = buf.iter().map(|x| x.reward).collect();
        assert_eq!(rewards, (5..15).map(|i| i as f64).collect::<Vec<_>>());
    }

    #[test]
    fn sample_is_seed_deterministic() {
        let mut buf = ReplayBuffer::new(100);
        for i in 0..50 {
            buf.push(t(i as f64));
        }
        let a = buf.sample(8, &mut Rng::seed_from_u64(3));
        let b = buf.sample(8, &mut Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }
}
