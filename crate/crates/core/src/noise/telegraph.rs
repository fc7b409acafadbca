//! Random telegraph noise: qubit B couples with strength `v` to a bistable
//! fluctuator `ξ(t) ∈ {±1}` that flips at rate `γ`.
//!
//! `γ` is the flip rate of each switching event, so `⟨ξ(t)ξ(0)⟩ = e^{-2γt}`.
//! With this convention the coherence obeys `q'' + 2γq' + v²q = 0` and the
//! crossover between overdamped and oscillating coherence sits at `g = v/γ = 1`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp;

use super::mc::{self, McScalar};
use super::{Channel, RandomUnitaryChannel};
use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexSquareMatrix, DensityOperator};
use crate::states::EWLParams;

pub const MIN_RTN_TRAJECTORIES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RTNParams {
    rate: f64,
    coupling: f64,
}

impl RTNParams {
    /// `coupling = 0` is accepted and gives no dephasing.
    pub fn new(rate: f64, coupling: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::precondition(format!(
                "switching rate {rate} must be positive"
            )));
        }
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(Error::precondition(format!(
                "coupling {coupling} must be nonnegative"
            )));
        }
        Ok(Self { rate, coupling })
    }

    /// Parameters with unit switching rate, so that `γt` is the time.
    pub fn from_ratio(g: f64) -> Result<Self> {
        Self::new(1.0, g)
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn g(&self) -> f64 {
        self.coupling / self.rate
    }
}

/// `sinh(x)/x`, accurate near zero.
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Normalized single-qubit coherence `q(t) = ρ₀₁(t) / ρ₀₁(0)`.
pub fn rtn_coherence(p: &RTNParams, t: f64) -> f64 {
    let (gamma, v) = (p.rate, p.coupling);
    let t = t.max(0.0);
    let d2 = (gamma - v) * (gamma + v);
    if d2 > 0.0 {
        let delta = d2.sqrt();
        // e^{-γt} cosh δt and e^{-γt} sinh δt / δ without overflow;
        // γ - δ = v² / (γ + δ) avoids cancellation for weak coupling.
        let slow = (-(v * v) / (gamma + delta) * t).exp();
        let fast = (-(gamma + delta) * t).exp();
        let cosh_part = 0.5 * (slow + fast);
        let sinh_part = if delta * t < 1e-3 {
            t * (-gamma * t).exp() * sinhc(delta * t)
        } else {
            0.5 * (slow - fast) / delta
        };
        cosh_part + gamma * sinh_part
    } else {
        let mu = (-d2).sqrt();
        let decay = (-gamma * t).exp();
        decay * ((mu * t).cos() + gamma * t * sinc(mu * t))
    }
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

/// `cos(v ∫₀ᵗ ξ ds)` at each of `times` along one telegraph path.
fn sample_rtn_path(p: &RTNParams, times: &[f64], rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let waiting = Exp::new(p.rate).expect("positive rate");
    let mut xi = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let mut clock = 0.0;
    let mut area = 0.0;
    let mut next_flip: f64 = rng.sample(waiting);
    for (slot, &t) in out.iter_mut().zip(times) {
        while next_flip < t {
            area += xi * (next_flip - clock);
            clock = next_flip;
            xi = -xi;
            next_flip = clock + rng.sample(waiting);
        }
        area += xi * (t - clock);
        clock = t;
        *slot = (p.coupling * area).cos();
    }
}

/// Monte-Carlo coherence at each of `times` (sorted), sharing trajectories.
pub fn rtn_mc_coherence_series(
    p: &RTNParams,
    times: &[f64],
    trajectories: usize,
    seed: u64,
) -> Result<Vec<McScalar>> {
    if trajectories < MIN_RTN_TRAJECTORIES {
        return Err(Error::precondition(format!(
            "telegraph sampling needs at least {MIN_RTN_TRAJECTORIES} trajectories, got {trajectories}"
        )));
    }
    check_times(times)?;
    Ok(mc::average_scalars(
        times.len(),
        trajectories,
        seed,
        |rng, out| sample_rtn_path(p, times, rng, out),
    ))
}

pub fn rtn_mc_coherence(p: &RTNParams, t: f64, trajectories: usize, seed: u64) -> Result<McScalar> {
    Ok(rtn_mc_coherence_series(p, &[t], trajectories, seed)?[0])
}

/// `C(t) = max{0, 2K(t)}` with `K = r|a|b|q(t)| - (1-r)/4`.
pub fn rtn_concurrence(ewl: &EWLParams, p: &RTNParams, t: f64) -> f64 {
    let k = ewl.r() * ewl.a().norm() * ewl.b() * rtn_coherence(p, t).abs() - (1.0 - ewl.r()) / 4.0;
    (2.0 * k).max(0.0)
}

/// Dephasing channel with coherence factor `q`: `{(1+q)/2: 1, (1-q)/2: σz}`.
pub fn telegraph_channel(q: f64) -> Result<RandomUnitaryChannel> {
    if !(-1.0..=1.0).contains(&q) {
        return Err(Error::precondition(format!(
            "coherence factor {q} outside [-1, 1]"
        )));
    }
    RandomUnitaryChannel::new(vec![
        ((1.0 + q) / 2.0, ComplexSquareMatrix::identity(2)),
        ((1.0 - q) / 2.0, pauli::z()),
    ])
}

/// Exact averaged evolution of any two-qubit state.
pub fn rtn_evolve(rho0: &DensityOperator, p: &RTNParams, t: f64) -> Result<DensityOperator> {
    telegraph_channel(rtn_coherence(p, t).clamp(-1.0, 1.0))?.apply(rho0)
}
