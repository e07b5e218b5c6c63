//! Command-line surface: `train`, `evaluate`, `baseline`, and `mission`
//! subcommands. Exit codes: 0 success, 1 runtime error, 2 usage error.

use std::fmt;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use herding_core::checkpoint::{decode_agent, encode_agent};
use herding_core::ddpg::DdpgHyperParams;
use herding_core::hier::{train_skill, CurvePoint, EpisodeConfig, ScaleAdapter, SkillKind};
use herding_core::mission::{init_mission_world, run_mission};
use herding_core::{ArenaConfig, DdpgAgent, Rng, SwarmParams, Vec2};
use rand::SeedableRng;

use crate::config_file::load_config_file;
use crate::report::{
    run_baseline_batch, run_trials, write_report, ExperimentSpec, DEFAULT_MAX_STEPS,
    DEFAULT_N_SHEEP,
};
use crate::scenarios::{listing, lookup};
use crate::trajectory::export_trajectory;

/// Error that should surface as a usage problem (exit code 2) rather than a
/// runtime failure.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(
    name = "herding",
    about = "Shepherding simulator: rule-based baseline and trained aerial shepherd",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SkillArg {
    Collect,
    Drive,
}

impl From<SkillArg> for SkillKind {
    fn from(s: SkillArg) -> SkillKind {
        match s {
            SkillArg::Collect => SkillKind::Collect,
            SkillArg::Drive => SkillKind::Drive,
        }
    }
}

/// `WxH` arena extents, e.g. `4x4` or `6x6`.
#[derive(Clone, Copy, Debug)]
struct Extents {
    width: f64,
    height: f64,
}

impl std::str::FromStr for Extents {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Extents, String> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected WxH (e.g. 4x4), got {s:?}"))?;
        let width: f64 = w.trim().parse().map_err(|_| format!("bad width in {s:?}"))?;
        let height: f64 = h.trim().parse().map_err(|_| format!("bad height in {s:?}"))?;
        if !(width > 0.0 && height > 0.0) {
            return Err(format!("extents must be positive, got {s:?}"));
        }
        Ok(Extents { width, height })
    }
}

impl Extents {
    fn arena(self) -> ArenaConfig {
        ArenaConfig::new(
            self.width,
            self.height,
            // Same corner-pen layout as ArenaConfig::square.
            Vec2::new(
                (self.width / 8.0).min(0.2),
                (self.height / 8.0).min(0.2),
            ),
            2.0,
        )
        .expect("positive extents checked at parse time")
    }
}

#[derive(Args)]
struct CommonOpts {
    /// Parameter overrides file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Train one skill and write the agent checkpoint.
    Train {
        skill: SkillArg,
        #[arg(long, default_value = "4x4")]
        arena: Extents,
        #[arg(long, default_value_t = 3000)]
        episodes: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Checkpoint output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional learning-curve output (CSV, one row per episode).
        #[arg(long)]
        curve: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run a named testing scenario and write its report.
    Evaluate {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 30)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Report output path; the summary always also prints to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Collect-skill checkpoint (learned scenarios only).
        #[arg(long)]
        collect: Option<PathBuf>,
        /// Drive-skill checkpoint (learned scenarios only).
        #[arg(long)]
        drive: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the rule-based shepherd in an arbitrary arena.
    Baseline {
        #[arg(long, default_value = "4x4")]
        arena: Extents,
        #[arg(long, default_value_t = 30)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run one full mission with trained agents and export its trajectory.
    Mission {
        #[arg(long)]
        collect: PathBuf,
        #[arg(long)]
        drive: PathBuf,
        /// Arena the agents were trained in.
        #[arg(long, default_value = "4x4")]
        from: Extents,
        /// Arena to evaluate in; when it differs from --from, the policies
        /// are scale-wrapped.
        #[arg(long)]
        to: Option<Extents>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Trajectory output path.
        #[arg(long)]
        trace: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// List the named testing scenarios.
    Scenarios,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

fn configured(common: &CommonOpts, mut arena: ArenaConfig) -> Result<(SwarmParams, ArenaConfig)> {
    let mut params = SwarmParams::default();
    if let Some(path) = &common.config {
        load_config_file(path, &mut params, &mut arena)?;
    }
    Ok((params, arena))
}

fn render_curve(curve: &[CurvePoint]) -> String {
    let mut out = String::from("episode,steps,cumulative_reward,reward_per_action\n");
    for p in curve {
        out.push_str(&format!(
            "{},{},{:.6},{:.6}\n",
            p.episode, p.steps, p.cumulative_reward, p.reward_per_action
        ));
    }
    out
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Train {
            skill,
            arena,
            episodes,
            seed,
            out,
            curve,
            common,
        } => {
            let (params, arena) = configured(&common, arena.arena())?;
            let skill: SkillKind = skill.into();
            let mut rng = Rng::seed_from_u64(seed);
            let mut agent = DdpgAgent::new(DdpgHyperParams::default(), seed, &mut rng);
            let cfg = EpisodeConfig::new(skill, arena, DEFAULT_N_SHEEP);
            let points = train_skill(skill, &cfg, &params, &mut agent, episodes, &mut rng)
                .map_err(|e| anyhow!("training failed: {e}"))?;
            std::fs::write(&out, encode_agent(&agent))
                .with_context(|| format!("cannot write checkpoint {}", out.display()))?;
            if let Some(curve_path) = curve {
                std::fs::write(&curve_path, render_curve(&points))
                    .with_context(|| format!("cannot write curve {}", curve_path.display()))?;
            }
            let tail = &points[points.len().saturating_sub(100)..];
            let tail_rpa = if tail.is_empty() {
                0.0
            } else {
                tail.iter().map(|p| p.reward_per_action).sum::<f64>() / tail.len() as f64
            };
            println!(
                "trained {skill:?} for {episodes} episodes (seed {seed}); \
                 final-100 mean reward/action {tail_rpa:.4}; checkpoint {}",
                out.display()
            );
            Ok(())
        }
        Command::Evaluate {
            scenario,
            trials,
            seed,
            report,
            collect,
            drive,
            common,
        } => {
            if lookup(&scenario).is_none() {
                return Err(anyhow::Error::new(UsageError(format!(
                    "unknown scenario {scenario:?}; known scenarios:\n{}",
                    listing()
                ))));
            }
            let mut spec = ExperimentSpec::new(&scenario, trials, seed);
            spec.collect_ckpt = collect;
            spec.drive_ckpt = drive;
            if let Some(path) = &common.config {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read config file {}", path.display()))?;
                spec.overrides = crate::config_file::parse_config(&text)?;
            }
            let summary = run_trials(&spec)?;
            print!("{}", crate::report::render_report(&summary));
            if let Some(path) = report {
                write_report(&summary, &path)?;
            }
            Ok(())
        }
        Command::Baseline {
            arena,
            trials,
            seed,
            report,
            common,
        } => {
            let label = format!("baseline-{}x{}", arena.width, arena.height);
            let (params, arena) = configured(&common, arena.arena())?;
            let summary = run_baseline_batch(
                &label,
                arena,
                &params,
                trials,
                seed,
                DEFAULT_N_SHEEP,
                DEFAULT_MAX_STEPS,
            )?;
            print!("{}", crate::report::render_report(&summary));
            if let Some(path) = report {
                write_report(&summary, &path)?;
            }
            Ok(())
        }
        Command::Mission {
            collect,
            drive,
            from,
            to,
            seed,
            trace,
            common,
        } => {
            let eval_extents = to.unwrap_or(from);
            let (params, arena) = configured(&common, eval_extents.arena())?;
            let adapter = if (from.width, from.height) != (eval_extents.width, eval_extents.height)
            {
                Some(
                    ScaleAdapter::new(
                        (from.width, from.height),
                        (eval_extents.width, eval_extents.height),
                    )
                    .map_err(|e| anyhow!("bad --from/--to pair: {e}"))?,
                )
            } else {
                None
            };
            let load = |path: &PathBuf| -> Result<DdpgAgent> {
                let bytes = std::fs::read(path)
                    .with_context(|| format!("cannot read checkpoint {}", path.display()))?;
                decode_agent(&bytes)
                    .map_err(|e| anyhow!("checkpoint {} is invalid: {e}", path.display()))
            };
            let collect_agent = load(&collect)?;
            let drive_agent = load(&drive)?;
            let mut rng = Rng::seed_from_u64(seed);
            let (flock, dog) = init_mission_world(&arena, DEFAULT_N_SHEEP, &mut rng);
            let (result, mission_trace) = run_mission(
                &collect_agent,
                &drive_agent,
                &arena,
                &params,
                flock,
                dog.position,
                adapter.as_ref(),
                DEFAULT_MAX_STEPS,
            );
            export_trajectory(&mission_trace, &trace)?;
            println!(
                "mission {}: {} steps, {:.2} m travelled, trace {}",
                if result.success { "succeeded" } else { "failed" },
                result.n_steps,
                result.travel_distance,
                trace.display()
            );
            Ok(())
        }
        Command::Scenarios => {
            println!("{}", listing());
            Ok(())
        }
    }
}
