//! Deterministic policy gradient learner: actor/critic networks with slowly
//! tracking targets, replay memory, and the per-step training update.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::adam::{adam_step, AdamState};
use crate::error::Result;
use crate::nn::{Mlp, OutputActivation};
use crate::replay::{ReplayBuffer, Transition, ACTION_DIM, STATE_DIM};
use crate::Rng;

const ACTOR_SIZES: [usize; 4] = [STATE_DIM, 32, 64, ACTION_DIM];
const CRITIC_STATE_SIZES: [usize; 2] = [STATE_DIM, 32];
const CRITIC_ACTION_SIZES: [usize; 2] = [ACTION_DIM, 32];
const CRITIC_HEAD_SIZES: [usize; 3] = [64, 64, 1];

/// Two-branch Q network: state and action each pass through a ReLU layer,
/// the concatenated features through a ReLU hidden layer to a scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct Critic {
    pub state_branch: Mlp,
    pub action_branch: Mlp,
    pub head: Mlp,
}

impl Critic {
    pub fn random(rng: &mut Rng) -> Critic {
        Critic {
            state_branch: Mlp::random(&CRITIC_STATE_SIZES, OutputActivation::Relu, rng),
            action_branch: Mlp::random(&CRITIC_ACTION_SIZES, OutputActivation::Relu, rng),
            head: Mlp::random(&CRITIC_HEAD_SIZES, OutputActivation::Identity, rng),
        }
    }

    pub fn q_value(&self, state: &[f64], action: &[f64]) -> Result<f64> {
        let s = self.state_branch.forward(state)?;
        let a = self.action_branch.forward(action)?;
        let mut joint = s;
        joint.extend_from_slice(&a);
        Ok(self.head.forward(&joint)?[0])
    }

    /// Gradients of `upstream * Q` with respect to all critic parameters and
    /// to the action input (needed for the actor update).
    pub fn backward(
        &self,
        state: &[f64],
        action: &[f64],
        upstream: f64,
    ) -> Result<(CriticGrads, Vec<f64>)> {
        let s = self.state_branch.forward(state)?;
        let a = self.action_branch.forward(action)?;
        let mut joint = s;
        joint.extend_from_slice(&a);
        let (head_grads, d_joint) = self.head.backward(&joint, &[upstream])?;
        let split = self.state_branch.output_dim();
        let (state_grads, _) = self.state_branch.backward(state, &d_joint[..split])?;
        let (action_grads, d_action) = self.action_branch.backward(action, &d_joint[split..])?;
        Ok((
            CriticGrads {
                state_branch: state_grads,
                action_branch: action_grads,
                head: head_grads,
            },
            d_action,
        ))
    }
}

#[derive(Debug, Clone)]
pub struct CriticGrads {
    pub state_branch: Vec<f64>,
    pub action_branch: Vec<f64>,
    pub head: Vec<f64>,
}

impl CriticGrads {
    fn zeros(critic: &Critic) -> CriticGrads {
        CriticGrads {
            state_branch: vec![0.0; critic.state_branch.num_params()],
            action_branch: vec![0.0; critic.action_branch.num_params()],
            head: vec![0.0; critic.head.num_params()],
        }
    }

    fn accumulate(&mut self, other: &CriticGrads, scale: f64) {
        for (dst, src) in self.state_branch.iter_mut().zip(&other.state_branch) {
            *dst += src * scale;
        }
        for (dst, src) in self.action_branch.iter_mut().zip(&other.action_branch) {
            *dst += src * scale;
        }
        for (dst, src) in self.head.iter_mut().zip(&other.head) {
            *dst += src * scale;
        }
    }
}

/// Gaussian exploration noise with per-episode multiplicative decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSchedule {
    pub sigma0: f64,
    pub decay: f64,
    pub floor: f64,
}

impl Default for NoiseSchedule {
    fn default() -> NoiseSchedule {
        NoiseSchedule {
            sigma0: 0.2,
            decay: 0.999,
            floor: 0.01,
        }
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdpgHyperParams {
    pub gamma: f64,
    pub tau_soft: f64,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub minibatch: usize,
    pub replay_capacity: usize,
    pub noise: NoiseSchedule,
}

impl Default for DdpgHyperParams {
    fn default() -> DdpgHyperParams {
        DdpgHyperParams {
            gamma: 0.99,
            tau_soft: 0.001,
            actor_lr: 0.00025,
            critic_lr: 0.001,
            minibatch: 32,
            replay_capacity: 100_000,
            noise: NoiseSchedule::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainDiagnostics {
    pub critic_loss: f64,
    pub mean_q: f64,
}

/// Actor/critic pair with targets, optimizers, replay memory and the noise
/// level for the current episode.
#[derive(Debug, Clone)]
pub struct DdpgAgent {
    pub actor: Mlp,
    pub critic: Critic,
    pub target_actor: Mlp,
    pub target_critic: Critic,
    pub actor_opt: AdamState,
    pub critic_state_opt: AdamState,
    pub critic_action_opt: AdamState,
    pub critic_head_opt: AdamState,
    pub hyper: DdpgHyperParams,
    pub replay: ReplayBuffer,
    pub sigma: f64,
    /// Seed the owning session was created with; carried into checkpoints.
    pub seed: u64,
}

impl DdpgAgent {
    pub fn new(hyper: DdpgHyperParams, seed: u64, rng: &mut Rng) -> DdpgAgent {
        let actor = Mlp::random(&ACTOR_SIZES, OutputActivation::Tanh, rng);
        let critic = Critic::random(rng);
        DdpgAgent {
            target_actor: actor.clone(),
            target_critic: critic.clone(),
            actor_opt: AdamState::new(actor.num_params(), hyper.actor_lr),
            critic_state_opt: AdamState::new(critic.state_branch.num_params(), hyper.critic_lr),
            critic_action_opt: AdamState::new(critic.action_branch.num_params(), hyper.critic_lr),
            critic_head_opt: AdamState::new(critic.head.num_params(), hyper.critic_lr),
            replay: ReplayBuffer::new(hyper.replay_capacity),
            sigma: hyper.noise.sigma0,
            actor,
            critic,
            hyper,
            seed,
        }
    }

    /// Deterministic policy output for one state.
    pub fn policy(&self, state: &[f64; STATE_DIM]) -> [f64; ACTION_DIM] {
        let out = self.actor.forward(state).expect("actor dims fixed");
        [out[0], out[1]]
    }

    /// Policy output, optionally perturbed by clipped Gaussian noise.
    pub fn act(
        &self,
        state: &[f64; STATE_DIM],
        explore: bool,
        rng: &mut Rng,
    ) -> [f64; ACTION_DIM] {
        let mut a = self.policy(state);
        if explore && self.sigma > 0.0 {
            for v in a.iter_mut() {
                *v = (*v + gaussian(rng) * self.sigma).clamp(-1.0, 1.0);
            }
        }
        a
    }

    /// Shrink the exploration noise once per episode.
    pub fn decay_noise(&mut self) {
        self.sigma = (self.sigma * self.hyper.noise.decay).max(self.hyper.noise.floor);
    }

    /// Bootstrapped target values, one per transition: y = r + γ·Q′(s′, τ′(s′))
    /// for every sample, terminal or not. Cutting the bootstrap at terminals
    /// would make "reach the sub-goal" worth less than hovering next to it
    /// forever, and the policy learns exactly that degenerate behavior.
    pub fn critic_target(&self, batch: &[Transition]) -> Vec<f64> {
        batch
            .iter()
            .map(|t| {
                let next_action = self
                    .target_actor
                    .forward(&t.next_state)
                    .expect("actor dims fixed");
                let q = self
                    .target_critic
                    .q_value(&t.next_state, &next_action)
                    .expect("critic dims fixed");
                t.reward + self.hyper.gamma * q
            })
            .collect()
    }

    /// One gradient update on a minibatch: critic toward the bootstrapped
    /// targets, actor along the critic's action gradient, then soft target
    /// replacement. Batch reductions are means.
    pub fn train_step(&mut self, batch: &[Transition]) -> TrainDiagnostics {
        let m = batch.len() as f64;
        let targets = self.critic_target(batch);

        // Critic: mean squared error against the targets.
        let mut critic_grads = CriticGrads::zeros(&self.critic);
        let mut critic_loss = 0.0;
        for (t, &y) in batch.iter().zip(targets.iter()) {
            let q = self
                .critic
                .q_value(&t.state, &t.action)
                .expect("critic dims fixed");
            critic_loss += (q - y) * (q - y);
            let upstream = 2.0 * (q - y) / m;
            let (grads, _) = self
                .critic
                .backward(&t.state, &t.action, upstream)
                .expect("critic dims fixed");
            critic_grads.accumulate(&grads, 1.0);
        }
        critic_loss /= m;
        adam_step(
            &mut self.critic_state_opt,
            self.critic.state_branch.params_mut(),
            &critic_grads.state_branch,
        )
        .expect("shapes fixed");
        adam_step(
            &mut self.critic_action_opt,
            self.critic.action_branch.params_mut(),
            &critic_grads.action_branch,
        )
        .expect("shapes fixed");
        adam_step(
            &mut self.critic_head_opt,
            self.critic.head.params_mut(),
            &critic_grads.head,
        )
        .expect("shapes fixed");

        // Actor: ascend Q(s, actor(s)) via the critic's action gradient.
        let mut actor_grads = vec![0.0; self.actor.num_params()];
        let mut mean_q = 0.0;
        for t in batch {
            let action = self.actor.forward(&t.state).expect("actor dims fixed");
            mean_q += self
                .critic
                .q_value(&t.state, &action)
                .expect("critic dims fixed");
            let (_, dq_da) = self
                .critic
                .backward(&t.state, &action, 1.0)
                .expect("critic dims fixed");
            // Minimize -Q: upstream is the negated action gradient, averaged.
            let upstream: Vec<f64> = dq_da.iter().map(|g| -g / m).collect();
            let (grads, _) = self
                .actor
                .backward(&t.state, &upstream)
                .expect("actor dims fixed");
            for (dst, src) in actor_grads.iter_mut().zip(&grads) {
                *dst += src;
            }
        }
        mean_q /= m;
        adam_step(&mut self.actor_opt, self.actor.params_mut(), &actor_grads)
            .expect("shapes fixed");

        let tau = self.hyper.tau_soft;
        soft_update(&mut self.target_actor, &self.actor, tau);
        soft_update(&mut self.target_critic.state_branch, &self.critic.state_branch, tau);
        soft_update(&mut self.target_critic.action_branch, &self.critic.action_branch, tau);
        soft_update(&mut self.target_critic.head, &self.critic.head, tau);

        TrainDiagnostics {
            critic_loss,
            mean_q,
        }
    }
}

/// `target ← tau * main + (1 - tau) * target`, per parameter.
pub fn soft_update(target: &mut Mlp, main: &Mlp, tau: f64) {
    for (t, m) in target.params_mut().iter_mut().zip(main.params()) {
        *t = tau * m + (1.0 - tau) * *t;
    }
}

/// Standard normal deviate via Box-Muller.
fn gaussian(rng: &mut Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

/// World the learner interacts with during one skill lesson.
pub trait Environment {
    fn reset(&mut self, rng: &mut Rng) -> [f64; STATE_DIM];
    /// Apply the action; returns (next_state, reward, done).
    fn step(&mut self, action: [f64; ACTION_DIM]) -> ([f64; STATE_DIM], f64, bool);
}

#[derive(Debug, Clone, Default)]
pub struct EpisodeSummary {
    pub steps: usize,
    pub cumulative_reward: f64,
}

/// One episode of the training loop: act with exploration noise, step the
/// environment, store the transition, and once the buffer holds more than a
/// minibatch, sample uniformly and train every step.
pub fn run_episode<E: Environment>(
    agent: &mut DdpgAgent,
    env: &mut E,
    max_steps: usize,
    rng: &mut Rng,
) -> (Vec<Transition>, EpisodeSummary) {
    let mut trace = Vec::new();
    let mut summary = EpisodeSummary::default();
    if max_steps == 0 {
        return (trace, summary);
    }
    let mut state = env.reset(rng);
    for _ in 0..max_steps {
        let action = agent.act(&state, true, rng);
        let (next_state, reward, done) = env.step(action);
        let transition = Transition {
            state,
            action,
            reward,
            next_state,
            terminal: done,
        };
        agent.replay.push(transition.clone());
        trace.push(transition);
        summary.cumulative_reward += reward;
        summary.steps += 1;
        if agent.replay.len() > agent.hyper.minibatch {
            let batch = agent.replay.sample(agent.hyper.minibatch, rng);
            agent.train_step(&batch);
        }
        state = next_state;
        if done {
            break;
        }
    }
    (trace, summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn agent(seed: u64) -> DdpgAgent {
        let mut rng = Rng::seed_from_u64(seed);
        DdpgAgent::new(DdpgHyperParams::default(), seed, &mut rng)
    }

    fn batch(rng: &mut Rng, n: usize) -> Vec<Transition> {
        (0..n)
            .map(|_| Transition {
                state: core::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
                action: core::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
                reward: if rng.gen_bool(0.5) { 0.1 } else { -0.1 },
                next_state: core::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
                terminal: false,
            })
            .collect()
    }

    #[test]
    fn act_without_exploration_is_deterministic_and_bounded() {
        let a = agent(1);
        let state = [0.3, -0.2, 0.9, 0.1];
        let mut rng = Rng::seed_from_u64(99);
        let x = a.act(&state, false, &mut rng);
        let y = a.act(&state, false, &mut rng);
        assert_eq!(x, y);
        let mut rng = Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let s: [f64; 4] = core::array::from_fn(|_| rng.gen_range(-4.0..4.0));
            for v in a.act(&s, true, &mut rng) {
                assert!((-1.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn zero_sigma_explore_equals_deterministic() {
        let mut a = agent(2);
        a.sigma = 0.0;
        let state = [0.5, 0.5, -0.5, 0.0];
        let mut rng = Rng::seed_from_u64(0);
        assert_eq!(a.act(&state, true, &mut rng), a.policy(&state));
    }

    #[test]
    fn critic_target_arithmetic() {
        let mut a = agent(3);
        // Zero the target nets: Q' = 0 everywhere, so y = r.
        let n = a.target_critic.head.num_params();
        a.target_critic.head.set_params(&vec![0.0; n]).unwrap();
        let t = Transition {
            state: [0.0; 4],
            action: [0.0; 2],
            reward: 0.1,
            next_state: [0.0; 4],
            terminal: false,
        };
        let y = a.critic_target(&[t.clone()]);
        assert!((y[0] - 0.1).abs() < 1e-15);

        // Constant-one target critic: y = r + gamma * 1.
        let mut a = agent(4);
        let n = a.target_critic.head.num_params();
        let mut params = vec![0.0; n];
        *params.last_mut().unwrap() = 1.0; // output bias
        a.target_critic.head.set_params(&params).unwrap();
        let y = a.critic_target(&[t.clone()]);
        assert!((y[0] - (0.1 + 0.99)).abs() < 1e-12);

        // Terminal transitions bootstrap the same way; reaching the target
        // must not be worth less than lingering next to it.
        let term = Transition {
            terminal: true,
            ..t
        };
        let y = a.critic_target(&[term]);
        assert!((y[0] - (0.1 + 0.99)).abs() < 1e-12);
    }

    #[test]
    fn soft_update_extremes_and_convexity() {
        let mut a = agent(5);
        let before = a.target_actor.params().to_vec();
        let main = a.actor.params().to_vec();

        let mut t = a.target_actor.clone();
        soft_update(&mut t, &a.actor, 1.0);
        assert_eq!(t.params(), a.actor.params());

        let mut t0 = a.target_actor.clone();
        soft_update(&mut t0, &a.actor, 0.0);
        assert_eq!(t0.params(), &before[..]);

        soft_update(&mut a.target_actor, &a.actor, 0.3);
        for ((t, b), m) in a.target_actor.params().iter().zip(&before).zip(&main) {
            let lo = b.min(*m) - 1e-15;
            let hi = b.max(*m) + 1e-15;
            assert!(*t >= lo && *t <= hi);
        }
    }

    #[test]
    fn train_step_reduces_critic_loss_on_fixed_batch() {
        let mut rng = Rng::seed_from_u64(11);
        let mut hyper = DdpgHyperParams::default();
        hyper.critic_lr = 0.01;
        let mut a = DdpgAgent::new(hyper, 11, &mut rng);
        let b = batch(&mut rng, 32);
        let before = a.train_step(&b).critic_loss;
        let targets = a.critic_target(&b);
        let after: f64 = b
            .iter()
            .zip(&targets)
            .map(|(t, y)| {
                let q = a.critic.q_value(&t.state, &t.action).unwrap();
                (q - y) * (q - y)
            })
            .sum::<f64>()
            / b.len() as f64;
        assert!(after < before, "critic loss {after} !< {before}");
    }

    struct LineEnv {
        pos: f64,
    }

    // 1-D toy: move toward the origin; reward mirrors the step reward scheme.
    impl Environment for LineEnv {
        fn reset(&mut self, rng: &mut Rng) -> [f64; STATE_DIM] {
            self.pos = rng.gen_range(-1.0..1.0);
            [self.pos, 0.0, self.pos, 0.0]
        }
        fn step(&mut self, action: [f64; ACTION_DIM]) -> ([f64; STATE_DIM], f64, bool) {
            let before = self.pos.abs();
            self.pos += 0.1 * action[0];
            let after = self.pos.abs();
            let reward = if after <= before { 0.1 } else { -0.1 };
            let done = after < 0.05;
            ([self.pos, 0.0, self.pos, 0.0], reward, done)
        }
    }

    #[test]
    fn empty_episode_and_buffer_gate() {
        let mut rng = Rng::seed_from_u64(21);
        let mut a = DdpgAgent::new(DdpgHyperParams::default(), 21, &mut rng);
        let mut env = LineEnv { pos: 0.0 };
        let (trace, summary) = run_episode(&mut a, &mut env, 0, &mut rng);
        assert!(trace.is_empty());
        assert_eq!(summary.cumulative_reward, 0.0);

        // Fewer steps than a minibatch: parameters must not move.
        let params_before = a.actor.params().to_vec();
        let (_, _) = run_episode(&mut a, &mut env, 10, &mut rng);
        if a.replay.len() <= a.hyper.minibatch {
            assert_eq!(a.actor.params(), &params_before[..]);
        }
    }

    #[test]
    fn fixed_seed_training_is_bit_identical() {
        let run = |seed: u64| {
            let mut rng = Rng::seed_from_u64(seed);
            let mut a = DdpgAgent::new(DdpgHyperParams::default(), seed, &mut rng);
            let mut env = LineEnv { pos: 0.0 };
            let mut rewards = Vec::new();
            for _ in 0..5 {
                let (_, s) = run_episode(&mut a, &mut env, 50, &mut rng);
                a.decay_noise();
                rewards.push(s.cumulative_reward);
            }
            (rewards, a.actor.params().to_vec())
        };
        let (r1, p1) = run(7);
        let (r2, p2) = run(7);
        assert_eq!(r1, r2);
        assert_eq!(p1, p2);
    }
}
