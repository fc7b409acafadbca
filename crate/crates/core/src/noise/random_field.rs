//! Qubit B driven by a classical field whose phase is `+π/2` or `-π/2` with
//! equal probability, optionally with a Gaussian spread of Rabi frequencies.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use super::{Channel, RandomUnitaryChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexSquareMatrix, DensityOperator, C64};
use crate::quadrature::{converged_average, GaussianRule};

/// The two field phases, each taken with probability ½.
pub const FIELD_PHASES: [f64; 2] = [FRAC_PI_2, -FRAC_PI_2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomFieldParams {
    rabi: f64,
    width: f64,
}

impl RandomFieldParams {
    /// `rabi` is the central Rabi frequency Ω, `width` the Gaussian spread σ
    /// of the density `exp(-(Ω_g - Ω)² / 4σ²)`.
    pub fn new(rabi: f64, width: f64) -> Result<Self> {
        if !(rabi > 0.0) || !rabi.is_finite() {
            return Err(Error::precondition(format!(
                "Rabi frequency {rabi} must be positive"
            )));
        }
        if !(width >= 0.0) || !width.is_finite() {
            return Err(Error::precondition(format!(
                "Rabi width {width} must be nonnegative"
            )));
        }
        Ok(Self { rabi, width })
    }

    pub fn rabi(&self) -> f64 {
        self.rabi
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Sampled Rabi frequency for a standard-normal quadrature node `z`.
    ///
    /// The density `exp(-(Ω_g - Ω)² / 4σ²)` has standard deviation `√2 σ`.
    pub(crate) fn rabi_at(&self, z: f64) -> f64 {
        self.rabi + SQRT_2 * self.width * z
    }
}

/// `[[cos(Ωt/2), e^{-iφ} sin(Ωt/2)], [-e^{iφ} sin(Ωt/2), cos(Ωt/2)]]`.
pub fn field_unitary(phase: f64, rabi: f64, t: f64) -> ComplexSquareMatrix {
    let (s, co) = (rabi * t / 2.0).sin_cos();
    let e = C64::from_polar(1.0, phase);
    ComplexSquareMatrix::from_rows(2, &[c(co, 0.0), e.conj() * s, -e * s, c(co, 0.0)]).expect("2x2")
}

/// Equal mixture of the two phase unitaries at a fixed Rabi frequency.
pub fn random_field_channel(rabi: f64, t: f64) -> RandomUnitaryChannel {
    RandomUnitaryChannel::new(
        FIELD_PHASES
            .iter()
            .map(|&phi| (0.5, field_unitary(phi, rabi, t)))
            .collect(),
    )
    .expect("two unitary branches")
}

/// Evolved state for a sharp Rabi frequency (`width = 0`).
pub fn random_field_map(
    rho0: &DensityOperator,
    p: &RandomFieldParams,
    t: f64,
) -> Result<DensityOperator> {
    if p.width != 0.0 {
        return Err(Error::precondition(
            "random_field_map needs width = 0; use gaussian_averaged_map",
        ));
    }
    random_field_channel(p.rabi, t).apply(rho0)
}

/// Both phase branches at every quadrature node of the Rabi distribution.
pub fn gaussian_field_channel(
    p: &RandomFieldParams,
    t: f64,
    order: usize,
) -> Result<RandomUnitaryChannel> {
    let rule = GaussianRule::get(order)?;
    Ok(gaussian_channel_with(p, t, &rule))
}

fn gaussian_channel_with(
    p: &RandomFieldParams,
    t: f64,
    rule: &GaussianRule,
) -> RandomUnitaryChannel {
    let mut branches = Vec::with_capacity(2 * rule.order());
    for (z, w) in rule.iter() {
        let rabi = p.rabi_at(z);
        for &phi in &FIELD_PHASES {
            branches.push((0.5 * w, field_unitary(phi, rabi, t)));
        }
    }
    RandomUnitaryChannel::new(branches).expect("normalized quadrature weights")
}

/// Evolved state averaged over the Gaussian Rabi distribution, with the
/// quadrature order checked by doubling.
pub fn gaussian_averaged_map(
    rho0: &DensityOperator,
    p: &RandomFieldParams,
    t: f64,
    order: usize,
) -> Result<DensityOperator> {
    if !(p.width > 0.0) {
        return Err(Error::precondition("gaussian_averaged_map needs width > 0"));
    }
    if rho0.dims() != [2, 2] {
        return Err(Error::precondition("random field acts on two-qubit states"));
    }
    let m = converged_average(order, t, |rule| {
        gaussian_channel_with(p, t, rule).apply_matrix(rho0.matrix())
    })?;
    DensityOperator::new(m, vec![2, 2])
}

/// Dispatches on the width: sharp map for `width = 0`, Gaussian average otherwise.
pub fn evolve(
    rho0: &DensityOperator,
    p: &RandomFieldParams,
    t: f64,
    order: usize,
) -> Result<DensityOperator> {
    if p.width == 0.0 {
        random_field_map(rho0, p, t)
    } else {
        gaussian_averaged_map(rho0, p, t, order)
    }
}

/// The channel realizing [`evolve`] (fixed quadrature order, no convergence check).
pub fn channel(p: &RandomFieldParams, t: f64, order: usize) -> Result<RandomUnitaryChannel> {
    if p.width == 0.0 {
        Ok(random_field_channel(p.rabi, t))
    } else {
        gaussian_field_channel(p, t, order)
    }
}
