//! Seeded trial batches and aggregate reports.
//!
//! A report file holds a human-readable summary followed by a
//! machine-readable `[data]` block with one row per trial. Reports contain
//! no timestamps or environment details, so identical (scenario, seed,
//! trials) invocations produce byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use herding_core::checkpoint::decode_agent;
use herding_core::hier::ScaleAdapter;
use herding_core::metrics::TrialResult;
use herding_core::mission::{init_mission_world, run_baseline_mission, run_mission};
use herding_core::{ArenaConfig, DdpgAgent, Rng, SwarmParams};
use rand::SeedableRng;

use crate::config_file::{apply_overrides, Override};
use crate::scenarios::{lookup, ScenarioKind};

pub const DEFAULT_N_SHEEP: usize = 3;
pub const DEFAULT_MAX_STEPS: usize = 1000;

/// Everything needed to reproduce one batch of trials.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub scenario_id: String,
    pub n_trials: usize,
    pub seed: u64,
    pub collect_ckpt: Option<PathBuf>,
    pub drive_ckpt: Option<PathBuf>,
    /// `key = value` overrides applied on top of the scenario defaults.
    pub overrides: Vec<Override>,
    pub n_sheep: usize,
    pub max_steps: usize,
}

impl ExperimentSpec {
    pub fn new(scenario_id: &str, n_trials: usize, seed: u64) -> ExperimentSpec {
        ExperimentSpec {
            scenario_id: scenario_id.to_string(),
            n_trials,
            seed,
            collect_ckpt: None,
            drive_ckpt: None,
            overrides: Vec::new(),
            n_sheep: DEFAULT_N_SHEEP,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// Mean and standard deviation (sample, n−1 denominator) of one metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

pub fn stat(values: &[f64]) -> Stat {
    let n = values.len() as f64;
    if values.is_empty() {
        return Stat { mean: 0.0, std: 0.0 };
    }
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Stat { mean, std }
}

/// Aggregated outcome of one trial batch.
#[derive(Debug, Clone)]
pub struct Summary {
    pub scenario_id: String,
    pub n_trials: usize,
    pub seed: u64,
    pub arena: ArenaConfig,
    pub success_rate_pct: f64,
    pub n_steps: Stat,
    pub travel_distance: Stat,
    pub error_per_step: Stat,
    pub dog_subgoal_per_step: Stat,
    pub cm_target_reduction_per_step: Stat,
    pub cumulative_reward: Stat,
    pub trials: Vec<TrialResult>,
}

fn load_agent(path: &Path) -> Result<DdpgAgent> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("cannot read checkpoint {}", path.display()))?;
    decode_agent(&bytes).map_err(|e| anyhow!("checkpoint {} is invalid: {e}", path.display()))
}

/// Run `spec.n_trials` seeded missions (trial i seeded with `seed + i`) and
/// aggregate the metric suite.
pub fn run_trials(spec: &ExperimentSpec) -> Result<Summary> {
    let scenario = lookup(&spec.scenario_id)
        .ok_or_else(|| anyhow!("unknown scenario {:?}", spec.scenario_id))?;
    if spec.n_trials == 0 {
        bail!("n_trials must be at least 1");
    }

    enum Runner {
        Baseline,
        Learned {
            collect: Box<DdpgAgent>,
            drive: Box<DdpgAgent>,
            adapter: Option<ScaleAdapter>,
        },
    }

    let (arena_side, runner) = match scenario.kind {
        ScenarioKind::Unsupported { reason } => {
            bail!("scenario {} is not runnable: {reason}", scenario.id)
        }
        ScenarioKind::Baseline { arena_side } => (arena_side, Runner::Baseline),
        ScenarioKind::Learned { train_side, eval_side } => {
            let collect_path = spec
                .collect_ckpt
                .as_ref()
                .ok_or_else(|| anyhow!("scenario {} needs --collect CKPT", scenario.id))?;
            let drive_path = spec
                .drive_ckpt
                .as_ref()
                .ok_or_else(|| anyhow!("scenario {} needs --drive CKPT", scenario.id))?;
            let adapter = if train_side != eval_side {
                Some(
                    ScaleAdapter::new((train_side, train_side), (eval_side, eval_side))
                        .map_err(|e| anyhow!("bad scale pair: {e}"))?,
                )
            } else {
                None
            };
            (
                eval_side,
                Runner::Learned {
                    collect: Box::new(load_agent(collect_path)?),
                    drive: Box::new(load_agent(drive_path)?),
                    adapter,
                },
            )
        }
    };

    let mut params = SwarmParams::default();
    let mut arena = ArenaConfig::square(arena_side);
    apply_overrides(&spec.overrides, &mut params, &mut arena)?;

    let mut trials = Vec::with_capacity(spec.n_trials);
    for i in 0..spec.n_trials {
        let mut rng = Rng::seed_from_u64(spec.seed.wrapping_add(i as u64));
        let (flock, dog) = init_mission_world(&arena, spec.n_sheep, &mut rng);
        let (result, _) = match &runner {
            Runner::Baseline => {
                run_baseline_mission(&arena, &params, flock, dog.position, spec.max_steps)
            }
            Runner::Learned { collect, drive, adapter } => run_mission(
                collect,
                drive,
                &arena,
                &params,
                flock,
                dog.position,
                adapter.as_ref(),
                spec.max_steps,
            ),
        };
        trials.push(result);
    }

    Ok(summarize(scenario.id, spec.seed, arena, trials))
}

fn summarize(label: &str, seed: u64, arena: ArenaConfig, trials: Vec<TrialResult>) -> Summary {
    let successes = trials.iter().filter(|t| t.success).count();
    let pick = |f: fn(&TrialResult) -> f64| -> Vec<f64> { trials.iter().map(f).collect() };
    Summary {
        scenario_id: label.to_string(),
        n_trials: trials.len(),
        seed,
        arena,
        success_rate_pct: 100.0 * successes as f64 / trials.len() as f64,
        n_steps: stat(&pick(|t| t.n_steps as f64)),
        travel_distance: stat(&pick(|t| t.travel_distance)),
        error_per_step: stat(&pick(|t| t.error_per_step)),
        dog_subgoal_per_step: stat(&pick(|t| t.dog_subgoal_per_step)),
        cm_target_reduction_per_step: stat(&pick(|t| t.cm_target_reduction_per_step)),
        cumulative_reward: stat(&pick(|t| t.cumulative_reward)),
        trials,
    }
}

/// Baseline batch in an arbitrary arena (the `baseline` subcommand is not
/// limited to the named scenarios).
pub fn run_baseline_batch(
    label: &str,
    arena: ArenaConfig,
    params: &SwarmParams,
    n_trials: usize,
    seed: u64,
    n_sheep: usize,
    max_steps: usize,
) -> Result<Summary> {
    if n_trials == 0 {
        bail!("n_trials must be at least 1");
    }
    let mut trials = Vec::with_capacity(n_trials);
    for i in 0..n_trials {
        let mut rng = Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let (flock, dog) = init_mission_world(&arena, n_sheep, &mut rng);
        let (result, _) = run_baseline_mission(&arena, params, flock, dog.position, max_steps);
        trials.push(result);
    }
    Ok(summarize(label, seed, arena, trials))
}

/// Render the full report text: header, metric table, `[data]` block.
pub fn render_report(s: &Summary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# shepherding trial report");
    let _ = writeln!(out, "scenario: {}", s.scenario_id);
    let _ = writeln!(out, "trials: {}", s.n_trials);
    let _ = writeln!(out, "base_seed: {} (trial i uses base_seed + i)", s.seed);
    let _ = writeln!(
        out,
        "arena: {:.2}x{:.2}, goal ({:.2}, {:.2}), goal_radius {:.2}",
        s.arena.width, s.arena.height, s.arena.goal.x, s.arena.goal.y, s.arena.goal_radius
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<32} {:>12} {:>12}", "metric", "mean", "std");
    let _ = writeln!(out, "{:<32} {:>12.2}", "success_rate_pct", s.success_rate_pct);
    for (name, st) in [
        ("n_steps", s.n_steps),
        ("travel_distance_m", s.travel_distance),
        ("error_per_step_m", s.error_per_step),
        ("dog_subgoal_per_step_m", s.dog_subgoal_per_step),
        ("cm_target_reduction_per_step_m", s.cm_target_reduction_per_step),
        ("cumulative_reward", s.cumulative_reward),
    ] {
        let _ = writeln!(out, "{:<32} {:>12.6} {:>12.6}", name, st.mean, st.std);
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "[data]");
    let _ = writeln!(
        out,
        "trial,seed,success,n_steps,travel_distance,error_per_step,\
         dog_subgoal_per_step,cm_target_reduction_per_step,cumulative_reward"
    );
    for (i, t) in s.trials.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
            i,
            s.seed.wrapping_add(i as u64),
            t.success as u8,
            t.n_steps,
            t.travel_distance,
            t.error_per_step,
            t.dog_subgoal_per_step,
            t.cm_target_reduction_per_step,
            t.cumulative_reward
        );
    }
    let _ = writeln!(out, "[end]");
    out
}

pub fn write_report(summary: &Summary, path: &Path) -> Result<()> {
    std::fs::write(path, render_report(summary))
        .with_context(|| format!("cannot write report {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stat_handles_small_inputs() {
        assert_eq!(stat(&[]).mean, 0.0);
        assert_eq!(stat(&[5.0]), Stat { mean: 5.0, std: 0.0 });
        let s = stat(&[1.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert!((s.std - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn baseline_trials_are_deterministic() {
        let spec = ExperimentSpec::new("Strombom-4x4", 3, 7);
        let a = render_report(&run_trials(&spec).unwrap());
        let b = render_report(&run_trials(&spec).unwrap());
        assert_eq!(a, b);
        assert!(a.contains("[data]"));
        assert_eq!(a.lines().filter(|l| l.starts_with("scenario:")).count(), 1);
    }

    #[test]
    fn unknown_and_unsupported_scenarios_error() {
        assert!(run_trials(&ExperimentSpec::new("Nope-1x1", 1, 0)).is_err());
        let err = run_trials(&ExperimentSpec::new("DHRL-4x4", 1, 0))
            .unwrap_err()
            .to_string();
        assert!(err.contains("not runnable"));
    }

    #[test]
    fn missing_checkpoint_errors_with_path() {
        let mut spec = ExperimentSpec::new("H-DDPG-4x4", 1, 0);
        spec.collect_ckpt = Some(PathBuf::from("/nonexistent/collect.ckpt"));
        spec.drive_ckpt = Some(PathBuf::from("/nonexistent/drive.ckpt"));
        let err = run_trials(&spec).unwrap_err();
        assert!(format!("{err:#}").contains("/nonexistent/collect.ckpt"));
    }

    #[test]
    fn summary_is_permutation_invariant() {
        let spec = ExperimentSpec::new("Strombom-4x4", 5, 11);
        let mut summary = run_trials(&spec).unwrap();
        let forward = (
            summary.n_steps,
            summary.travel_distance,
            summary.success_rate_pct,
        );
        summary.trials.reverse();
        let steps: Vec<f64> = summary.trials.iter().map(|t| t.n_steps as f64).collect();
        assert_eq!(stat(&steps), forward.0);
    }
}
