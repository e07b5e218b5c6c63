//! Rule-based driving/collecting shepherd. Used directly as the comparison
//! baseline and as the sub-goal generator for the learned controller.

use crate::config::{ArenaConfig, SwarmParams};
use crate::flock::{FlockState, ShepherdState};
use crate::vec2::{unit_vector, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BehaviorKind {
    /// All sheep gathered within `f(N)` of the center of mass: push the flock
    /// toward the goal.
    Driving,
    /// At least one stray: fetch the furthest sheep back.
    Collecting,
}

/// Gathered-flock radius: the configured override when set, otherwise
/// `r_sheep_sheep * N^(2/3)`.
pub fn flock_threshold(n_sheep: usize, params: &SwarmParams) -> f64 {
    match params.f_n_override {
        Some(f) => f,
        None => params.r_sheep_sheep * libm::pow(n_sheep as f64, 2.0 / 3.0),
    }
}

/// Collecting iff some sheep is strictly further than `f(N)` from the flock
/// center of mass; the boundary counts as gathered.
pub fn select_behavior(flock: &FlockState, params: &SwarmParams) -> BehaviorKind {
    let com = flock.center_of_mass();
    let threshold = flock_threshold(flock.len(), params);
    let scattered = flock
        .sheep
        .iter()
        .any(|s| s.position.distance(com) > threshold);
    if scattered {
        BehaviorKind::Collecting
    } else {
        BehaviorKind::Driving
    }
}

/// Point `r_sheep_sheep * sqrt(N) * u` behind the flock center of mass
/// relative to the goal. Degenerate com == goal returns the com itself.
pub fn driving_point(com: Vec2, goal: Vec2, n_sheep: usize, params: &SwarmParams) -> Vec2 {
    let offset = params.r_sheep_sheep * libm::sqrt(n_sheep as f64) * params.unit_distance;
    com + unit_vector(com - goal) * offset
}

/// Point `r_sheep_sheep * u` beyond the furthest sheep relative to the flock
/// center of mass. Degenerate furthest == com returns the furthest itself.
pub fn collecting_point(com: Vec2, furthest: Vec2, params: &SwarmParams) -> Vec2 {
    let offset = params.r_sheep_sheep * params.unit_distance;
    furthest + unit_vector(furthest - com) * offset
}

/// Index of the sheep furthest from the center of mass, lowest index on ties.
pub fn furthest_sheep(flock: &FlockState, com: Vec2) -> usize {
    let mut best = 0;
    let mut best_d = flock.sheep[0].position.distance(com);
    for (i, s) in flock.sheep.iter().enumerate().skip(1) {
        let d = s.position.distance(com);
        if d > best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Sub-goal the baseline shepherd currently steers to.
pub fn baseline_subgoal(flock: &FlockState, goal: Vec2, params: &SwarmParams) -> (BehaviorKind, Vec2) {
    let com = flock.center_of_mass();
    match select_behavior(flock, params) {
        BehaviorKind::Driving => (
            BehaviorKind::Driving,
            driving_point(com, goal, flock.len(), params),
        ),
        BehaviorKind::Collecting => {
            let stray = flock.sheep[furthest_sheep(flock, com)].position;
            (BehaviorKind::Collecting, collecting_point(com, stray, params))
        }
    }
}

/// One baseline step: pick the behavior, move `dog_speed * dt` toward its
/// sub-goal, clamp to the arena.
pub fn step_shepherd_baseline(
    shep: &ShepherdState,
    flock: &FlockState,
    arena: &ArenaConfig,
    params: &SwarmParams,
) -> ShepherdState {
    let (_, subgoal) = baseline_subgoal(flock, arena.goal, params);
    let dir = unit_vector(subgoal - shep.position);
    ShepherdState {
        position: arena.clamp(shep.position + dir * (params.dog_speed * params.dt)),
    }
}
