//! Longitudinal low-frequency noise on qubit B, `H_B = ε(t) σz / 2`, with an
//! optional instantaneous echo pulse `σx` at time `t̄`.
//!
//! Static noise (`ε` constant per realization, Gaussian with spread σ) is
//! averaged by quadrature. Noise with a finite correlation time is sampled
//! as a stationary Ornstein–Uhlenbeck process.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::mc::{self, mul2, z_rotation, McState, Unitary2, SIGMA_X};
use super::RandomUnitaryChannel;
use crate::error::{Error, Result};
use crate::linalg::DensityOperator;
use crate::measures::WeightedPureEnsemble;
use crate::quadrature::{converged_average, GaussianRule};
use crate::states::{bell_density, bell_state, BellLabel, Ket2};

pub const MIN_OU_TRAJECTORIES: usize = 1000;

/// Step-size caps for OU paths: `Δt ≤ τ_c / 20` and `Δt ≤ 0.05 / σ`.
pub const STEPS_PER_CORRELATION_TIME: f64 = 20.0;
pub const MAX_PHASE_STEP: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticNoiseParams {
    sigma: f64,
    echo_time: Option<f64>,
    correlation_time: f64,
}

impl StaticNoiseParams {
    /// `correlation_time = f64::INFINITY` selects static noise.
    pub fn new(sigma: f64, echo_time: Option<f64>, correlation_time: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::precondition(format!(
                "noise strength {sigma} must be nonnegative"
            )));
        }
        if let Some(te) = echo_time {
            if !(te > 0.0) || !te.is_finite() {
                return Err(Error::precondition(format!(
                    "echo time {te} must be positive"
                )));
            }
        }
        if !(correlation_time > 0.0) {
            return Err(Error::precondition(format!(
                "correlation time {correlation_time} must be positive"
            )));
        }
        Ok(Self {
            sigma,
            echo_time,
            correlation_time,
        })
    }

    pub fn static_noise(sigma: f64, echo_time: Option<f64>) -> Result<Self> {
        Self::new(sigma, echo_time, f64::INFINITY)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn echo_time(&self) -> Option<f64> {
        self.echo_time
    }

    pub fn correlation_time(&self) -> f64 {
        self.correlation_time
    }

    pub fn is_static(&self) -> bool {
        self.correlation_time.is_infinite()
    }
}

/// Propagator on B for accumulated phases before and after the echo.
fn echo_propagator(before: f64, after: Option<f64>) -> Unitary2 {
    match after {
        None => z_rotation(before),
        Some(after) => mul2(&z_rotation(after), &mul2(&SIGMA_X, &z_rotation(before))),
    }
}

/// Static-noise propagator for a fixed noise value `eps`.
fn static_propagator(eps: f64, echo: Option<f64>, t: f64) -> Unitary2 {
    match echo {
        Some(te) if t > te => echo_propagator(eps * te, Some(eps * (t - te))),
        _ => echo_propagator(eps * t, None),
    }
}

fn static_channel_with(p: &StaticNoiseParams, t: f64, rule: &GaussianRule) -> RandomUnitaryChannel {
    let branches = rule
        .iter()
        .map(|(z, w)| {
            (
                w,
                mc::to_matrix(&static_propagator(p.sigma * z, p.echo_time, t)),
            )
        })
        .collect();
    RandomUnitaryChannel::new(branches).expect("normalized quadrature weights")
}

fn require_static(p: &StaticNoiseParams) -> Result<()> {
    if !p.is_static() {
        return Err(Error::precondition(
            "static noise needs an infinite correlation time; use ou_noise_state",
        ));
    }
    Ok(())
}

/// One unitary branch per quadrature node of the static noise value.
pub fn static_noise_channel(
    p: &StaticNoiseParams,
    t: f64,
    order: usize,
) -> Result<RandomUnitaryChannel> {
    require_static(p)?;
    Ok(static_channel_with(p, t, &*GaussianRule::get(order)?))
}

/// Static-noise evolution of an arbitrary two-qubit state, convergence-checked.
pub fn static_noise_evolve(
    rho0: &DensityOperator,
    p: &StaticNoiseParams,
    t: f64,
    order: usize,
) -> Result<DensityOperator> {
    require_static(p)?;
    if rho0.dims() != [2, 2] {
        return Err(Error::precondition("dephasing acts on two-qubit states"));
    }
    let m = converged_average(order, t, |rule| {
        static_channel_with(p, t, rule).apply_matrix(rho0.matrix())
    })?;
    DensityOperator::new(m, vec![2, 2])
}

/// Averaged state and its quadrature-node ensemble for a Bell input.
pub fn static_noise_state(
    bell_input: BellLabel,
    p: &StaticNoiseParams,
    t: f64,
    order: usize,
) -> Result<(DensityOperator, WeightedPureEnsemble)> {
    let rho = static_noise_evolve(&bell_density(bell_input), p, t, order)?;
    let ensemble = static_noise_channel(p, t, order)?.ensemble(&bell_state(bell_input))?;
    Ok((rho, ensemble))
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) || times.windows(2).any(|w| w[1] < w[0])
    {
        return Err(Error::precondition(
            "time points must be finite, nonnegative and sorted",
        ));
    }
    Ok(())
}

/// Fills `out[i]` with the propagator at `times[i]` along one OU path.
fn sample_ou_path(
    p: &StaticNoiseParams,
    times: &[f64],
    rng: &mut ChaCha8Rng,
    out: &mut [Unitary2],
) {
    let tau = p.correlation_time;
    let mut max_dt = tau / STEPS_PER_CORRELATION_TIME;
    if p.sigma > 0.0 {
        max_dt = max_dt.min(MAX_PHASE_STEP / p.sigma);
    }

    let mut eps = p.sigma * rng.sample::<f64, _>(StandardNormal);
    let mut clock = 0.0;
    let mut before = 0.0;
    let mut after: Option<f64> = None;
    let mut pending_echo = p.echo_time;

    let advance = |to: f64, eps: &mut f64, acc: &mut f64, rng: &mut ChaCha8Rng, clock: &mut f64| {
        let len = to - *clock;
        if len > 0.0 {
            let steps = (len / max_dt).ceil().max(1.0) as usize;
            let dt = len / steps as f64;
            let decay = (-dt / tau).exp();
            let kick = p.sigma * (1.0 - decay * decay).sqrt();
            for _ in 0..steps {
                let next = *eps * decay + kick * rng.sample::<f64, _>(StandardNormal);
                *acc += 0.5 * (*eps + next) * dt;
                *eps = next;
            }
        }
        *clock = to;
    };

    for (slot, &t) in out.iter_mut().zip(times) {
        if let Some(te) = pending_echo {
            if te < t {
                advance(te, &mut eps, &mut before, rng, &mut clock);
                after = Some(0.0);
                pending_echo = None;
            }
        }
        match after.as_mut() {
            None => advance(t, &mut eps, &mut before, rng, &mut clock),
            Some(acc) => advance(t, &mut eps, acc, rng, &mut clock),
        }
        *slot = echo_propagator(before, after);
    }
}

/// Monte-Carlo states at each of `times` (sorted) under OU dephasing.
/// All time points share the same trajectories.
pub fn ou_noise_series(
    rho0: &DensityOperator,
    pure_input: Option<&Ket2>,
    p: &StaticNoiseParams,
    times: &[f64],
    trajectories: usize,
    seed: u64,
) -> Result<Vec<McState>> {
    if p.is_static() {
        return Err(Error::precondition(
            "OU noise needs a finite correlation time; use static_noise_state",
        ));
    }
    if trajectories < MIN_OU_TRAJECTORIES {
        return Err(Error::precondition(format!(
            "OU noise needs at least {MIN_OU_TRAJECTORIES} trajectories, got {trajectories}"
        )));
    }
    check_times(times)?;
    mc::average_local_unitaries(
        rho0,
        pure_input,
        times.len(),
        trajectories,
        seed,
        |rng, out| sample_ou_path(p, times, rng, out),
    )
}

pub fn ou_noise_state(
    bell_input: BellLabel,
    p: &StaticNoiseParams,
    t: f64,
    trajectories: usize,
    seed: u64,
) -> Result<McState> {
    let psi = bell_state(bell_input);
    let mut v = ou_noise_series(
        &bell_density(bell_input),
        Some(&psi),
        p,
        &[t],
        trajectories,
        seed,
    )?;
    Ok(v.remove(0))
}
