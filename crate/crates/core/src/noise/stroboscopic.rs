//! A fixed sequence of phase gates on qubit B, one per step, with correlated
//! Gaussian phases and an optional bit flip after a chosen step.
//!
//! Phases follow a stationary AR(1) chain `x_{k+1} = μ x_k + σ√(1-μ²) n_k`,
//! so every `x_k` has variance `σ²` and neighbours have correlation `μ`.
//! Phases are not clamped to a hardware range.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::mc::{self, mul2, McState, Unitary2, IDENTITY2, SIGMA_X};
use crate::error::{Error, Result};
use crate::linalg::{c, DensityOperator, C64};
use crate::states::{bell_density, bell_state, BellLabel, Ket2};

pub const DEFAULT_STEPS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StroboscopicParams {
    pub steps: usize,
    pub phase_sigma: f64,
    pub autocorrelation: f64,
    pub sequences: usize,
    pub echo_after_step: Option<usize>,
    pub seed: u64,
}

impl StroboscopicParams {
    pub fn new(
        phase_sigma: f64,
        autocorrelation: f64,
        sequences: usize,
        echo_after_step: Option<usize>,
        seed: u64,
    ) -> Result<Self> {
        let p = Self {
            steps: DEFAULT_STEPS,
            phase_sigma,
            autocorrelation,
            sequences,
            echo_after_step,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::precondition("at least one step is required"));
        }
        if !(self.phase_sigma >= 0.0) || !self.phase_sigma.is_finite() {
            return Err(Error::precondition(format!(
                "phase spread {} must be nonnegative",
                self.phase_sigma
            )));
        }
        if !(0.0..=1.0).contains(&self.autocorrelation) {
            return Err(Error::precondition(format!(
                "autocorrelation {} outside [0, 1]",
                self.autocorrelation
            )));
        }
        if self.sequences == 0 {
            return Err(Error::precondition(
                "at least one phase sequence is required",
            ));
        }
        if let Some(k) = self.echo_after_step {
            if k == 0 || k > self.steps {
                return Err(Error::precondition(format!(
                    "echo step {k} outside 1..={}",
                    self.steps
                )));
            }
        }
        Ok(())
    }
}

fn phase_gate(x: f64) -> Unitary2 {
    [
        c(1.0, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        C64::from_polar(1.0, x),
    ]
}

/// `out[k]` is the accumulated propagator after `k` steps; `out[0] = 1`.
fn sample_sequence(p: &StroboscopicParams, rng: &mut ChaCha8Rng, out: &mut [Unitary2]) {
    let mu = p.autocorrelation;
    let kick = p.phase_sigma * (1.0 - mu * mu).sqrt();
    let mut x = p.phase_sigma * rng.sample::<f64, _>(StandardNormal);
    let mut u = IDENTITY2;
    out[0] = u;
    for (k, slot) in out.iter_mut().enumerate().take(p.steps + 1).skip(1) {
        if k > 1 {
            x = mu * x + kick * rng.sample::<f64, _>(StandardNormal);
        }
        u = mul2(&phase_gate(x), &u);
        if p.echo_after_step == Some(k) {
            u = mul2(&SIGMA_X, &u);
        }
        *slot = u;
    }
}

/// States after steps `0..=steps`, all from the same phase sequences.
pub fn stroboscopic_series(
    rho0: &DensityOperator,
    pure_input: Option<&Ket2>,
    p: &StroboscopicParams,
) -> Result<Vec<McState>> {
    p.validate()?;
    mc::average_local_unitaries(
        rho0,
        pure_input,
        p.steps + 1,
        p.sequences,
        p.seed,
        |rng, out| sample_sequence(p, rng, out),
    )
}

pub fn stroboscopic_state(
    bell_input: BellLabel,
    p: &StroboscopicParams,
    step: usize,
) -> Result<McState> {
    if step == 0 || step > p.steps {
        return Err(Error::precondition(format!(
            "step {step} outside 1..={}",
            p.steps
        )));
    }
    let psi = bell_state(bell_input);
    let mut series = stroboscopic_series(&bell_density(bell_input), Some(&psi), p)?;
    Ok(series.swap_remove(step))
}
