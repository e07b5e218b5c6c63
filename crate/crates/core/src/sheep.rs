//! The three sheep behaviors and the flock position update.
//!
//! Each sheep is repelled by shepherds inside its predator sensing range,
//! repelled by other sheep closer than the separation range, and attracted to
//! the flock center of mass; the weighted sum with the previous step's force
//! drives a constant-speed move along the normalized total force.

use alloc::vec::Vec;

use crate::config::{ArenaConfig, SwarmParams};
use crate::flock::FlockState;
use crate::vec2::{unit_vector, Vec2};

/// Per-sheep force breakdown for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheepForces {
    pub escape: Vec2,
    pub separation: Vec2,
    pub grouping: Vec2,
    pub total: Vec2,
}

/// Sum of unit repulsions from every shepherd within `r_sheep_dog`.
pub fn escape_force(sheep_pos: Vec2, dogs: &[Vec2], params: &SwarmParams) -> Vec2 {
    let mut f = Vec2::ZERO;
    for &dog in dogs {
        if sheep_pos.distance(dog) <= params.r_sheep_dog {
            f += unit_vector(sheep_pos - dog);
        }
    }
    f
}

/// Sum of unit repulsions from every other sheep within `r_sheep_sheep`.
pub fn separation_force(sheep_index: usize, flock: &FlockState, params: &SwarmParams) -> Vec2 {
    let me = flock.sheep[sheep_index].position;
    let mut f = Vec2::ZERO;
    for (k, other) in flock.sheep.iter().enumerate() {
        if k == sheep_index {
            continue;
        }
        if me.distance(other.position) <= params.r_sheep_sheep {
            f += unit_vector(me - other.position);
        }
    }
    f
}

/// Unit attraction toward the flock center of mass.
pub fn grouping_force(sheep_pos: Vec2, lcm: Vec2) -> Vec2 {
    unit_vector(lcm - sheep_pos)
}

/// Weighted sum of the inertia, grouping, escape and separation terms.
pub fn total_force(
    prev: Vec2,
    grouping: Vec2,
    escape: Vec2,
    separation: Vec2,
    params: &SwarmParams,
) -> Vec2 {
    prev * params.w_inertia
        + grouping * params.w_lcm
        + escape * params.w_dog
        + separation * params.w_sep
}

/// Forces acting on one sheep given the current world.
pub fn sheep_forces(
    sheep_index: usize,
    flock: &FlockState,
    dogs: &[Vec2],
    params: &SwarmParams,
) -> SheepForces {
    let sheep = &flock.sheep[sheep_index];
    let escape = escape_force(sheep.position, dogs, params);
    let separation = separation_force(sheep_index, flock, params);
    let grouping = grouping_force(sheep.position, flock.center_of_mass());
    let total = total_force(sheep.prev_force, grouping, escape, separation, params);
    SheepForces {
        escape,
        separation,
        grouping,
        total,
    }
}

/// Advance the whole flock one time step. Forces are evaluated against the
/// pre-step positions, then every sheep moves `sheep_speed * dt` along its
/// normalized total force and is clamped to the arena. A sheep with zero
/// total force stays put.
pub fn step_flock(
    flock: &FlockState,
    dogs: &[Vec2],
    params: &SwarmParams,
    arena: &ArenaConfig,
) -> FlockState {
    let step_len = params.sheep_speed * params.dt;
    let forces: Vec<SheepForces> = (0..flock.len())
        .map(|i| sheep_forces(i, flock, dogs, params))
        .collect();
    let mut next = flock.clone();
    for (sheep, f) in next.sheep.iter_mut().zip(forces.iter()) {
        let dir = unit_vector(f.total);
        sheep.position = arena.clamp(sheep.position + dir * step_len);
        sheep.prev_force = f.total;
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Result;

    fn params() -> SwarmParams {
        SwarmParams::default()
    }

    fn flock_at(positions: &[Vec2]) -> Result<FlockState> {
        FlockState::new(positions)
    }

    #[test]
    fn escape_single_unit_repulsion() {
        let f = escape_force(Vec2::ZERO, &[Vec2::new(1.0, 0.0)], &params());
        assert_eq!(f, Vec2::new(-1.0, 0.0));
    }

    #[test]
    fn escape_out_of_range() {
        let f = escape_force(Vec2::ZERO, &[Vec2::new(3.0, 0.0)], &params());
        assert_eq!(f, Vec2::ZERO);
    }

    #[test]
    fn escape_two_dogs_sum() {
        let f = escape_force(
            Vec2::ZERO,
            &[Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
            &params(),
        );
        assert_eq!(f, Vec2::new(-1.0, -1.0));
    }

    #[test]
    fn escape_coincident_dog_contributes_zero() {
        let f = escape_force(Vec2::ZERO, &[Vec2::ZERO], &params());
        assert_eq!(f, Vec2::ZERO);
    }

    #[test]
    fn separation_cases() {
        let flock = flock_at(&[Vec2::ZERO, Vec2::new(0.5, 0.0)]).unwrap();
        assert_eq!(separation_force(0, &flock, &params()), Vec2::new(-1.0, 0.0));

        let far = flock_at(&[Vec2::ZERO, Vec2::new(2.0, 0.0)]).unwrap();
        assert_eq!(separation_force(0, &far, &params()), Vec2::ZERO);

        let two = flock_at(&[Vec2::ZERO, Vec2::new(0.5, 0.0), Vec2::new(0.0, 0.5)]).unwrap();
        assert_eq!(separation_force(0, &two, &params()), Vec2::new(-1.0, -1.0));
    }

    #[test]
    fn grouping_cases() {
        assert_eq!(grouping_force(Vec2::ZERO, Vec2::new(2.0, 0.0)), Vec2::new(1.0, 0.0));
        assert_eq!(grouping_force(Vec2::new(1.0, 1.0), Vec2::new(1.0, 1.0)), Vec2::ZERO);
        let d = grouping_force(Vec2::ZERO, Vec2::new(1.0, 1.0));
        assert!((d.x - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((d.y - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn total_force_weighted_sum() {
        let p = params();
        let f = total_force(Vec2::new(1.0, 0.0), Vec2::ZERO, Vec2::ZERO, Vec2::ZERO, &p);
        assert_eq!(f, Vec2::new(0.5, 0.0));

        let z = total_force(Vec2::ZERO, Vec2::ZERO, Vec2::ZERO, Vec2::ZERO, &p);
        assert_eq!(z, Vec2::ZERO);

        // weights (0.5, 1.05, 1.0, 2.0)
        let f = total_force(
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::ZERO,
            &p,
        );
        assert!((f.x - (-0.5)).abs() < 1e-12);
        assert!((f.y - 1.05).abs() < 1e-12);
    }

    #[test]
    fn step_single_sheep_repelled_by_dog() {
        // Single sheep: no separation, grouping degenerate (com = own position),
        // so only the escape term acts.
        let arena = ArenaConfig::new(4.0, 4.0, Vec2::new(1.0, 1.0), 2.0).unwrap();
        let mut p = params();
        p.w_dog = 1.0;
        p.w_inertia = 0.0;
        p.w_lcm = 0.0;
        p.w_sep = 0.0;
        let flock = flock_at(&[Vec2::new(2.0, 2.0)]).unwrap();
        let next = step_flock(&flock, &[Vec2::new(3.0, 2.0)], &p, &arena);
        let got = next.sheep[0].position;
        assert!((got.x - 1.95).abs() < 1e-12);
        assert!((got.y - 2.0).abs() < 1e-12);
    }

    #[test]
    fn step_zero_force_stays_put() {
        let arena = ArenaConfig::new(4.0, 4.0, Vec2::new(1.0, 1.0), 2.0).unwrap();
        let flock = flock_at(&[Vec2::new(2.0, 2.0)]).unwrap();
        let next = step_flock(&flock, &[], &params(), &arena);
        assert_eq!(next.sheep[0].position, Vec2::new(2.0, 2.0));
    }

    #[test]
    fn step_clamps_at_boundary() {
        let arena = ArenaConfig::new(4.0, 4.0, Vec2::new(1.0, 1.0), 2.0).unwrap();
        let mut p = params();
        p.w_inertia = 0.0;
        p.w_lcm = 0.0;
        p.w_sep = 0.0;
        let flock = flock_at(&[Vec2::new(0.02, 2.0)]).unwrap();
        // Dog to the right pushes the sheep through the wall; clamp holds it at x = 0.
        let next = step_flock(&flock, &[Vec2::new(1.0, 2.0)], &p, &arena);
        assert_eq!(next.sheep[0].position, Vec2::new(0.0, 2.0));
    }

    #[test]
    fn step_preserves_cardinality_and_bounds() {
        let arena = ArenaConfig::new(4.0, 4.0, Vec2::new(1.0, 1.0), 2.0).unwrap();
        let mut flock =
            flock_at(&[Vec2::new(0.1, 0.1), Vec2::new(3.9, 3.9), Vec2::new(2.0, 0.0)]).unwrap();
        for _ in 0..50 {
            flock = step_flock(&flock, &[Vec2::new(2.0, 2.0)], &params(), &arena);
            assert_eq!(flock.len(), 3);
            for s in &flock.sheep {
                assert!(arena.contains(s.position));
            }
        }
    }

    #[test]
    fn mirror_symmetry_about_x_axis() {
        // Mirror world: reflect all y coordinates about y = 2 inside a 4x4 arena.
        let arena = ArenaConfig::new(4.0, 4.0, Vec2::new(1.0, 2.0), 2.0).unwrap();
        let mirror = |v: Vec2| Vec2::new(v.x, 4.0 - v.y);
        let pts = [Vec2::new(1.0, 1.5), Vec2::new(2.5, 2.5), Vec2::new(3.0, 1.0)];
        let dogs = [Vec2::new(2.0, 1.0)];
        let flock = flock_at(&pts).unwrap();
        let mpts: alloc::vec::Vec<Vec2> = pts.iter().map(|&p| mirror(p)).collect();
        let mdogs: alloc::vec::Vec<Vec2> = dogs.iter().map(|&d| mirror(d)).collect();
        let mflock = flock_at(&mpts).unwrap();

        let a = step_flock(&flock, &dogs, &params(), &arena);
        let b = step_flock(&mflock, &mdogs, &params(), &arena);
        for (s, m) in a.sheep.iter().zip(b.sheep.iter()) {
            let mirrored = mirror(s.position);
            assert!((mirrored - m.position).norm() < 1e-12);
        }
    }
}
