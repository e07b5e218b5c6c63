//! Per-mission metrics.

use crate::error::{Error, Result};
use crate::mission::MissionTrace;

/// Aggregated outcome of one mission trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub success: bool,
    pub n_steps: usize,
    /// Total path length of the shepherd (m).
    pub travel_distance: f64,
    /// Mean gap between the commanded and realized displacement (m); nonzero
    /// only where the arena boundary clips a move.
    pub error_per_step: f64,
    /// Mean shepherd-to-subgoal distance (m).
    pub dog_subgoal_per_step: f64,
    /// Mean per-step reduction of the flock-center-to-goal distance (m).
    pub cm_target_reduction_per_step: f64,
    pub cumulative_reward: f64,
}

/// Compute the metric suite from a non-empty trace.
pub fn compute_metrics(trace: &MissionTrace) -> Result<TrialResult> {
    let n = trace.steps.len();
    if n == 0 {
        return Err(Error::InvalidInput("cannot compute metrics on an empty trace".into()));
    }
    let mut travel = 0.0;
    let mut error_sum = 0.0;
    let mut subgoal_sum = 0.0;
    let mut reward_sum = 0.0;
    for (i, step) in trace.steps.iter().enumerate() {
        let next_dog = trace
            .steps
            .get(i + 1)
            .map(|s| s.dog)
            .unwrap_or(trace.final_dog);
        travel += next_dog.distance(step.dog);
        let desired = step.dog + step.action * trace.dt;
        error_sum += desired.distance(next_dog);
        subgoal_sum += step.dog.distance(step.subgoal);
        reward_sum += step.reward;
    }
    let cm_initial = trace.steps[0].cm.distance(trace.goal);
    let cm_final = trace.final_cm.distance(trace.goal);
    Ok(TrialResult {
        success: trace.success,
        n_steps: n,
        travel_distance: travel,
        error_per_step: error_sum / n as f64,
        dog_subgoal_per_step: subgoal_sum / n as f64,
        cm_target_reduction_per_step: (cm_initial - cm_final) / n as f64,
        cumulative_reward: reward_sum,
    })
}
