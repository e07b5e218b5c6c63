//! Binary agent checkpoints.
//!
//! Layout (little-endian): magic `HERDCKPT`, format version, the session
//! seed and current noise level, training hyperparameters, then the eight
//! networks (actor, the three critic nets, and their targets) each as layer
//! sizes + output activation + row-major flat parameters, and finally the
//! four Adam states. The replay buffer is not persisted.

use alloc::string::String;
use alloc::vec::Vec;

use crate::adam::AdamState;
use crate::ddpg::{Critic, DdpgAgent, DdpgHyperParams, NoiseSchedule};
use crate::error::{Error, Result};
use crate::nn::{Mlp, OutputActivation};
use crate::replay::ReplayBuffer;

const MAGIC: &[u8; 8] = b"HERDCKPT";
const VERSION: u32 = 1;

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn new() -> Writer {
        Writer { buf: Vec::new() }
    }
    fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn f64s(&mut self, vs: &[f64]) {
        self.u64(vs.len() as u64);
        for &v in vs {
            self.f64(v);
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Reader<'a> {
        Reader { buf, pos: 0 }
    }
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Corrupt(String::from("unexpected end of checkpoint")));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64s(&mut self) -> Result<Vec<f64>> {
        let n = self.u64()? as usize;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.f64()?);
        }
        Ok(out)
    }
}

fn write_mlp(w: &mut Writer, net: &Mlp) {
    w.u32(net.sizes().len() as u32);
    for &s in net.sizes() {
        w.u32(s as u32);
    }
    w.u8(match net.output_activation() {
        OutputActivation::Tanh => 0,
        OutputActivation::Identity => 1,
        OutputActivation::Relu => 2,
    });
    w.f64s(net.params());
}

fn read_mlp(r: &mut Reader) -> Result<Mlp> {
    let n_sizes = r.u32()? as usize;
    if !(2..=16).contains(&n_sizes) {
        return Err(Error::Corrupt(String::from("implausible layer count")));
    }
    let mut sizes = Vec::with_capacity(n_sizes);
    for _ in 0..n_sizes {
        sizes.push(r.u32()? as usize);
    }
    let act = match r.u8()? {
        0 => OutputActivation::Tanh,
        1 => OutputActivation::Identity,
        2 => OutputActivation::Relu,
        other => {
            return Err(Error::Corrupt(alloc::format!(
                "unknown activation tag {other}"
            )))
        }
    };
    let params = r.f64s()?;
    let mut net = Mlp::zeros(&sizes, act);
    net.set_params(&params)
        .map_err(|_| Error::Corrupt(String::from("parameter count does not match layer sizes")))?;
    Ok(net)
}

fn write_critic(w: &mut Writer, c: &Critic) {
    write_mlp(w, &c.state_branch);
    write_mlp(w, &c.action_branch);
    write_mlp(w, &c.head);
}

fn read_critic(r: &mut Reader) -> Result<Critic> {
    Ok(Critic {
        state_branch: read_mlp(r)?,
        action_branch: read_mlp(r)?,
        head: read_mlp(r)?,
    })
}

fn write_adam(w: &mut Writer, a: &AdamState) {
    w.f64(a.learning_rate);
    w.f64(a.beta1);
    w.f64(a.beta2);
    w.f64(a.epsilon);
    w.u64(a.step_count);
    w.f64s(a.first_moment());
    w.f64s(a.second_moment());
}

fn read_adam(r: &mut Reader) -> Result<AdamState> {
    let lr = r.f64()?;
    let b1 = r.f64()?;
    let b2 = r.f64()?;
    let eps = r.f64()?;
    let step = r.u64()?;
    let m = r.f64s()?;
    let v = r.f64s()?;
    AdamState::from_parts(lr, b1, b2, eps, step, m, v)
}

/// Serialize an agent to a byte buffer.
pub fn encode_agent(agent: &DdpgAgent) -> Vec<u8> {
    let mut w = Writer::new();
    w.buf.extend_from_slice(MAGIC);
    w.u32(VERSION);
    w.u64(agent.seed);
    w.f64(agent.sigma);
    let h = &agent.hyper;
    w.f64(h.gamma);
    w.f64(h.tau_soft);
    w.f64(h.actor_lr);
    w.f64(h.critic_lr);
    w.u32(h.minibatch as u32);
    w.u64(h.replay_capacity as u64);
    w.f64(h.noise.sigma0);
    w.f64(h.noise.decay);
    w.f64(h.noise.floor);
    write_mlp(&mut w, &agent.actor);
    write_critic(&mut w, &agent.critic);
    write_mlp(&mut w, &agent.target_actor);
    write_critic(&mut w, &agent.target_critic);
    write_adam(&mut w, &agent.actor_opt);
    write_adam(&mut w, &agent.critic_state_opt);
    write_adam(&mut w, &agent.critic_action_opt);
    write_adam(&mut w, &agent.critic_head_opt);
    w.buf
}

/// Rebuild an agent from `encode_agent` output. The replay buffer starts
/// empty; policy outputs match the saved agent bit-exactly.
pub fn decode_agent(bytes: &[u8]) -> Result<DdpgAgent> {
    let mut r = Reader::new(bytes);
    if r.take(8)? != MAGIC {
        return Err(Error::Corrupt(String::from("bad magic")));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::Corrupt(alloc::format!(
            "unsupported checkpoint version {version}"
        )));
    }
    let seed = r.u64()?;
    let sigma = r.f64()?;
    let hyper = DdpgHyperParams {
        gamma: r.f64()?,
        tau_soft: r.f64()?,
        actor_lr: r.f64()?,
        critic_lr: r.f64()?,
        minibatch: r.u32()? as usize,
        replay_capacity: r.u64()? as usize,
        noise: NoiseSchedule {
            sigma0: r.f64()?,
            decay: r.f64()?,
            floor: r.f64()?,
        },
    };
    let actor = read_mlp(&mut r)?;
    let critic = read_critic(&mut r)?;
    let target_actor = read_mlp(&mut r)?;
    let target_critic = read_critic(&mut r)?;
    let actor_opt = read_adam(&mut r)?;
    let critic_state_opt = read_adam(&mut r)?;
    let critic_action_opt = read_adam(&mut r)?;
    let critic_head_opt = read_adam(&mut r)?;
    if r.pos != bytes.len() {
        return Err(Error::Corrupt(String::from("trailing bytes")));
    }
    Ok(DdpgAgent {
        replay: ReplayBuffer::new(hyper.replay_capacity),
        actor,
        critic,
        target_actor,
        target_critic,
        actor_opt,
        critic_state_opt,
        critic_action_opt,
        critic_head_opt,
        hyper,
        sigma,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rng;
    use rand::{Rng as _, SeedableRng};

    #[test]
    fn roundtrip_reproduces_policy_bit_exactly() {
        let mut rng = Rng::seed_from_u64(33);
        let agent = DdpgAgent::new(DdpgHyperParams::default(), 33, &mut rng);
        let bytes = encode_agent(&agent);
        let loaded = decode_agent(&bytes).unwrap();
        assert_eq!(loaded.seed, 33);
        for _ in 0..100 {
            let s: [f64; 4] = core::array::from_fn(|_| rng.gen_range(-4.0..4.0));
            assert_eq!(agent.policy(&s), loaded.policy(&s));
        }
        assert_eq!(agent.actor.params(), loaded.actor.params());
        assert_eq!(
            agent.critic.head.params(),
            loaded.critic.head.params()
        );
        assert_eq!(agent.actor_opt, loaded.actor_opt);
    }

    #[test]
    fn rejects_garbage() {
        assert!(decode_agent(b"not a checkpoint").is_err());
        let mut rng = Rng::seed_from_u64(1);
        let agent = DdpgAgent::new(DdpgHyperParams::default(), 1, &mut rng);
        let mut bytes = encode_agent(&agent);
        bytes.truncate(bytes.len() / 2);
        assert!(decode_agent(&bytes).is_err());
    }
}
