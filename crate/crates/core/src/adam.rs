//! Bias-corrected Adam over flat parameter vectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub step_count: u64,
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
}

impl AdamState {
    pub fn new(num_params: usize, learning_rate: f64) -> AdamState {
        AdamState {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step_count: 0,
            first_moment: vec![0.0; num_params],
            second_moment: vec![0.0; num_params],
        }
    }

    pub fn first_moment(&self) -> &[f64] {
        &self.first_moment
    }

    pub fn second_moment(&self) -> &[f64] {
        &self.second_moment
    }

    /// Rebuild from serialized moments.
    pub fn from_parts(
        learning_rate: f64,
        beta1: f64,
        beta2: f64,
        epsilon: f64,
        step_count: u64,
        first_moment: Vec<f64>,
        second_moment: Vec<f64>,
    ) -> Result<AdamState> {
        if first_moment.len() != second_moment.len() {
            return Err(Error::DimensionMismatch {
                expected: first_moment.len(),
                got: second_moment.len(),
            });
        }
        Ok(AdamState {
            learning_rate,
            beta1,
            beta2,
            epsilon,
            step_count,
            first_moment,
            second_moment,
        })
    }
}

/// One Adam update in place.
pub fn adam_step(opt: &mut AdamState, params: &mut [f64], gradients: &[f64]) -> Result<()> {
    if params.len() != opt.first_moment.len() || gradients.len() != params.len() {
        return Err(Error::DimensionMismatch {
            expected: opt.first_moment.len(),
            got: gradients.len(),
        });
    }
    opt.step_count += 1;
    let t = opt.step_count as f64;
    let bias1 = 1.0 - libm::pow(opt.beta1, t);
    let bias2 = 1.0 - libm::pow(opt.beta2, t);
    for i in 0..params.len() {
        let g = gradients[i];
        opt.first_moment[i] = opt.beta1 * opt.first_moment[i] + (1.0 - opt.beta1) * g;
        opt.second_moment[i] = opt.beta2 * opt.second_moment[i] + (1.0 - opt.beta2) * g * g;
        let m_hat = opt.first_moment[i] / bias1;
        let v_hat = opt.second_moment[i] / bias2;
        params[i] -= opt.learning_rate * m_hat / (libm::sqrt(v_hat) + opt.epsilon);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_params_unchanged() {
        let mut opt = AdamState::new(3, 0.001);
        let mut params = [1.0, -2.0, 0.5];
        adam_step(&mut opt, &mut params, &[0.0; 3]).unwrap();
        assert_eq!(params, [1.0, -2.0, 0.5]);
        assert_eq!(opt.step_count, 1);
    }

    #[test]
    fn first_step_matches_hand_evaluation() {
        // m̂ = 1, v̂ = 1 on the first step, so Δθ = -lr / (1 + ε).
        let mut opt = AdamState::new(1, 0.001);
        let mut params = [0.0];
        adam_step(&mut opt, &mut params, &[1.0]).unwrap();
        let expect = -0.001 / (1.0 + 1e-8);
        assert!((params[0] - expect).abs() < 1e-15);
    }

    #[test]
    fn constant_gradient_moves_against_its_sign() {
        let mut opt = AdamState::new(2, 0.01);
        let mut params = [0.0, 0.0];
        let mut prev = params;
        for _ in 0..2 {
            adam_step(&mut opt, &mut params, &[1.0, -1.0]).unwrap();
            assert!(params[0] < prev[0]);
            assert!(params[1] > prev[1]);
            prev = params;
        }
    }

    #[test]
    fn shape_mismatch_errors() {
        let mut opt = AdamState::new(2, 0.001);
        let mut params = [0.0, 0.0];
        assert!(adam_step(&mut opt, &mut params, &[1.0]).is_err());
    }
}
