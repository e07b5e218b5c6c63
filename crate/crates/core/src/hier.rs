//! Hierarchical layer on top of the learner: observation construction,
//! sub-goal selection, the step reward, the collect/drive gate, skill-training
//! environments, and the cross-size scale adapter.

use alloc::vec::Vec;

use rand::Rng as _;

use crate::config::{ArenaConfig, SwarmParams};
use crate::ddpg::{run_episode, DdpgAgent, Environment, EpisodeSummary};
use crate::error::{Error, Result};
use crate::flock::FlockState;
use crate::replay::{ACTION_DIM, STATE_DIM};
use crate::sheep::step_flock;
use crate::strombom::{
    collecting_point, driving_point, furthest_sheep, select_behavior, BehaviorKind,
};
use crate::vec2::Vec2;
use crate::Rng;

/// The two relative vectors the policy sees, in fixed flattening order
/// (gcm.x, gcm.y, sub.x, sub.y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub gcm_to_dog: Vec2,
    pub subgoal_to_dog: Vec2,
}

impl Observation {
    pub fn flatten(&self) -> [f64; STATE_DIM] {
        [
            self.gcm_to_dog.x,
            self.gcm_to_dog.y,
            self.subgoal_to_dog.x,
            self.subgoal_to_dog.y,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkillKind {
    Collect,
    Drive,
}

/// Rescales observations (×ξ) and actions (×1/ξ) so a policy trained in a
/// small arena can run in a large one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleAdapter {
    pub xi: f64,
    pub small: (f64, f64),
    pub big: (f64, f64),
}

impl ScaleAdapter {
    pub fn new(small: (f64, f64), big: (f64, f64)) -> Result<ScaleAdapter> {
        Ok(ScaleAdapter {
            xi: scale_factor(small, big)?,
            small,
            big,
        })
    }
}

/// Ratio of the two arena diagonals.
pub fn scale_factor(small: (f64, f64), big: (f64, f64)) -> Result<f64> {
    for v in [small.0, small.1, big.0, big.1] {
        if !(v > 0.0) {
            return Err(Error::InvalidInput("arena extents must be positive".into()));
        }
    }
    Ok(libm::hypot(small.0, small.1) / libm::hypot(big.0, big.1))
}

/// Sub-goal for the active skill: the collecting point behind the furthest
/// sheep, or the driving point behind the flock on the goal line.
pub fn current_subgoal(
    skill: SkillKind,
    flock: &FlockState,
    goal: Vec2,
    params: &SwarmParams,
) -> Vec2 {
    let com = flock.center_of_mass();
    match skill {
        SkillKind::Collect => {
            let stray = flock.sheep[furthest_sheep(flock, com)].position;
            collecting_point(com, stray, params)
        }
        SkillKind::Drive => driving_point(com, goal, flock.len(), params),
    }
}

/// Relative-vector observation, optionally shrunk by the scale adapter.
pub fn observe(
    dog: Vec2,
    flock: &FlockState,
    subgoal: Vec2,
    adapter: Option<&ScaleAdapter>,
) -> Observation {
    let xi = adapter.map_or(1.0, |a| a.xi);
    Observation {
        gcm_to_dog: (dog - flock.center_of_mass()) * xi,
        subgoal_to_dog: (dog - subgoal) * xi,
    }
}

/// +0.1 when the shepherd did not move away from the sub-goal, -0.1 otherwise.
pub fn step_reward(d_before: f64, d_after: f64) -> f64 {
    if d_after - d_before <= 0.0 {
        0.1
    } else {
        -0.1
    }
}

/// Boundary-inclusive arrival test.
pub fn reached(dog: Vec2, subgoal: Vec2, tol: f64) -> bool {
    dog.distance(subgoal) <= tol
}

/// The mission-level switch: Collect while any sheep strays beyond the
/// gathered radius, Drive otherwise.
pub fn behavior_gate(flock: &FlockState, params: &SwarmParams) -> SkillKind {
    match select_behavior(flock, params) {
        BehaviorKind::Collecting => SkillKind::Collect,
        BehaviorKind::Driving => SkillKind::Drive,
    }
}

/// Scale-aware policy wrapper: state is shrunk by ξ before the actor, the
/// tanh-bounded output is blown up by 1/ξ and re-clipped to the physical
/// speed bound.
pub fn wrap_policy_with_scale<'a>(
    agent: &'a DdpgAgent,
    adapter: &ScaleAdapter,
) -> impl Fn(&[f64; STATE_DIM]) -> [f64; ACTION_DIM] + 'a {
    let xi = adapter.xi;
    move |state| {
        let scaled: [f64; STATE_DIM] = core::array::from_fn(|i| state[i] * xi);
        let raw = agent.policy(&scaled);
        core::array::from_fn(|i| (raw[i] / xi).clamp(-1.0, 1.0))
    }
}

/// How one skill-training episode starts.
#[derive(Debug, Clone)]
pub struct EpisodeConfig {
    pub skill: SkillKind,
    pub arena: ArenaConfig,
    pub n_sheep: usize,
    pub reach_tolerance: f64,
    pub max_steps: usize,
}

impl EpisodeConfig {
    pub fn new(skill: SkillKind, arena: ArenaConfig, n_sheep: usize) -> EpisodeConfig {
        EpisodeConfig {
            skill,
            arena,
            n_sheep,
            reach_tolerance: 0.1,
            max_steps: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sheep == 0 {
            return Err(Error::InvalidInput("n_sheep must be at least 1".into()));
        }
        if !(self.reach_tolerance > 0.0) {
            return Err(Error::InvalidInput("reach_tolerance must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidInput("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

fn random_point(arena: &ArenaConfig, margin: f64, rng: &mut Rng) -> Vec2 {
    Vec2::new(
        rng.gen_range(margin..arena.width - margin),
        rng.gen_range(margin..arena.height - margin),
    )
}

fn random_in_disk(center: Vec2, radius: f64, rng: &mut Rng) -> Vec2 {
    let angle = rng.gen_range(0.0..core::f64::consts::TAU);
    let r = radius * libm::sqrt(rng.gen_range(0.0..1.0f64));
    center + Vec2::new(r * libm::cos(angle), r * libm::sin(angle))
}

/// Seeded initial placement for a skill lesson. Collect starts with one stray
/// far from a cluster of the rest; Drive starts with the whole flock
/// clustered. The dog spawns anywhere else in the arena.
pub fn init_skill_world(
    cfg: &EpisodeConfig,
    params: &SwarmParams,
    rng: &mut Rng,
) -> (FlockState, Vec2) {
    let arena = &cfg.arena;
    let f_n = crate::strombom::flock_threshold(cfg.n_sheep, params);
    let margin = 0.2;
    let cluster_radius = f_n / 2.0;

    let positions: Vec<Vec2> = match cfg.skill {
        SkillKind::Drive => {
            let center = random_point(arena, margin + cluster_radius, rng);
            (0..cfg.n_sheep)
                .map(|_| arena.clamp(random_in_disk(center, cluster_radius, rng)))
                .collect()
        }
        SkillKind::Collect => {
            let center = random_point(arena, margin + cluster_radius, rng);
            let mut pts: Vec<Vec2> = (0..cfg.n_sheep.saturating_sub(1))
                .map(|_| arena.clamp(random_in_disk(center, cluster_radius, rng)))
                .collect();
            // One stray at least 2 f(N) from the cluster center; rejection
            // sample, fall back to the farthest corner if the arena is tight.
            let mut stray = None;
            for _ in 0..256 {
                let p = random_point(arena, margin, rng);
                if p.distance(center) >= 2.0 * f_n {
                    stray = Some(p);
                    break;
                }
            }
            let stray = stray.unwrap_or_else(|| {
                let corners = [
                    Vec2::new(margin, margin),
                    Vec2::new(arena.width - margin, margin),
                    Vec2::new(margin, arena.height - margin),
                    Vec2::new(arena.width - margin, arena.height - margin),
                ];
                corners
                    .into_iter()
                    .max_by(|a, b| {
                        a.distance(center)
                            .partial_cmp(&b.distance(center))
                            .unwrap()
                    })
                    .unwrap()
            });
            pts.push(stray);
            pts
        }
    };
    let dog = random_point(arena, margin, rng);
    (
        FlockState::new(&positions).expect("n_sheep >= 1"),
        dog,
    )
}

/// Skill-lesson environment: the dog chases the (moving) sub-goal while the
/// sheep keep reacting to it.
pub struct SkillEnv {
    pub cfg: EpisodeConfig,
    pub params: SwarmParams,
    flock: FlockState,
    dog: Vec2,
    subgoal: Vec2,
}

impl SkillEnv {
    pub fn new(cfg: EpisodeConfig, params: SwarmParams) -> Result<SkillEnv> {
        cfg.validate()?;
        params.validate()?;
        Ok(SkillEnv {
            flock: FlockState::new(&[Vec2::ZERO])?,
            dog: Vec2::ZERO,
            subgoal: Vec2::ZERO,
            cfg,
            params,
        })
    }

    fn observation(&self) -> [f64; STATE_DIM] {
        observe(self.dog, &self.flock, self.subgoal, None).flatten()
    }

    /// True when the behavior gate no longer selects this lesson's skill.
    pub fn gate_switched(&self) -> bool {
        behavior_gate(&self.flock, &self.params) != self.cfg.skill
    }
}

impl Environment for SkillEnv {
    fn reset(&mut self, rng: &mut Rng) -> [f64; STATE_DIM] {
        let (flock, dog) = init_skill_world(&self.cfg, &self.params, rng);
        self.flock = flock;
        self.dog = dog;
        // The raw sub-goal can fall outside the walls (it sits a fixed offset
        // behind a sheep); the dog is confined, so it chases the projection
        // into the arena.
        self.subgoal = self.cfg.arena.clamp(current_subgoal(
            self.cfg.skill,
            &self.flock,
            self.cfg.arena.goal,
            &self.params,
        ));
        self.observation()
    }

    fn step(&mut self, action: [f64; ACTION_DIM]) -> ([f64; STATE_DIM], f64, bool) {
        let d_before = self.dog.distance(self.subgoal);
        let velocity = Vec2::new(action[0], action[1]);
        self.dog = self
            .cfg
            .arena
            .clamp(self.dog + velocity * self.params.dt);
        self.flock = step_flock(&self.flock, &[self.dog], &self.params, &self.cfg.arena);
        self.subgoal = self.cfg.arena.clamp(current_subgoal(
            self.cfg.skill,
            &self.flock,
            self.cfg.arena.goal,
            &self.params,
        ));
        let d_after = self.dog.distance(self.subgoal);
        // The lesson is over when the dog reaches the sub-goal, or when the
        // behavior gate would hand control to the other skill (a collect
        // lesson whose flock has gathered has nothing left to teach; its
        // sub-goal starts jumping between near-equidistant sheep). Targets
        // bootstrap through terminals, so ending early is value-neutral.
        let done = reached(self.dog, self.subgoal, self.cfg.reach_tolerance)
            || self.gate_switched();
        (self.observation(), step_reward(d_before, d_after), done)
    }
}

/// Per-episode learning-curve sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub episode: usize,
    pub steps: usize,
    pub cumulative_reward: f64,
    pub reward_per_action: f64,
}

/// Train one skill for `episodes` episodes; returns the learning curve.
pub fn train_skill(
    skill: SkillKind,
    cfg: &EpisodeConfig,
    params: &SwarmParams,
    agent: &mut DdpgAgent,
    episodes: usize,
    rng: &mut Rng,
) -> Result<Vec<CurvePoint>> {
    if cfg.skill != skill {
        return Err(Error::InvalidInput(
            "episode config is for a different skill".into(),
        ));
    }
    let mut env = SkillEnv::new(cfg.clone(), *params)?;
    let env = &mut env;
    let max_steps = env.cfg.max_steps;
    let mut curve = Vec::with_capacity(episodes);
    for episode in 0..episodes {
        let (_, summary): (_, EpisodeSummary) = {
            let (t, s) = run_episode(agent, env, max_steps, rng);
            (t, s)
        };
        agent.decay_noise();
        let per_action = if summary.steps > 0 {
            summary.cumulative_reward / summary.steps as f64
        } else {
            0.0
        };
        curve.push(CurvePoint {
            episode,
            steps: summary.steps,
            cumulative_reward: summary.cumulative_reward,
            reward_per_action: per_action,
        });
    }
    Ok(curve)
}
