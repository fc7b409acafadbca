//! Random-field dynamics as a unitary on qubit B and a classical environment
//! qubit E that records which field phase was drawn.
//!
//! The environment starts in `(|φ₊⟩⟨φ₊| + |φ₋⟩⟨φ₋|)/2` and the joint
//! propagator on B and E is `Σ_φ U_φ(t) ⊗ |φ⟩⟨φ|`. Tracing out E recovers
//! the two-qubit channel exactly. Subsystem order is (A, B, E).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexSquareMatrix, DensityOperator};
use crate::measures::{concurrence, information_decomposition, InformationDecomposition};
use crate::noise::random_field::{field_unitary, RandomFieldParams, FIELD_PHASES};
use crate::quadrature::converged_average;

/// Largest allowed coherence between environment basis states.
pub const ENVIRONMENT_COHERENCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct HybridTripartiteState {
    rho_abe: DensityOperator,
}

impl HybridTripartiteState {
    pub fn new(rho_abe: DensityOperator) -> Result<Self> {
        if rho_abe.dims() != [2, 2, 2] {
            return Err(Error::SubsystemMismatch {
                dims: rho_abe.dims().to_vec(),
                dim: rho_abe.dim(),
            });
        }
        let dev = environment_coherence(&rho_abe);
        if dev > ENVIRONMENT_COHERENCE_TOL {
            return Err(Error::precondition(format!(
                "environment coherence {dev:e} in a classical record"
            )));
        }
        Ok(Self { rho_abe })
    }

    pub fn state(&self) -> &DensityOperator {
        &self.rho_abe
    }

    /// The two-qubit state, with E traced out.
    pub fn two_qubit(&self) -> DensityOperator {
        self.rho_abe
            .partial_trace(&[0, 1])
            .expect("valid subsystems")
    }

    pub fn environment(&self) -> DensityOperator {
        self.rho_abe.partial_trace(&[2]).expect("valid subsystem")
    }
}

/// Largest `|ρ_{(ab,0),(a'b',1)}|`.
pub fn environment_coherence(rho_abe: &DensityOperator) -> f64 {
    let m = rho_abe.matrix();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max(m[(2 * i, 2 * j + 1)].norm());
        }
    }
    worst
}

/// `ρ_AB ⊗ 1_E / 2`.
pub fn embed_initial(rho_ab: &DensityOperator) -> Result<HybridTripartiteState> {
    if rho_ab.dims() != [2, 2] {
        return Err(Error::precondition("embedding needs a two-qubit state"));
    }
    HybridTripartiteState::new(rho_ab.tensor(&DensityOperator::maximally_mixed(vec![2])))
}

fn environment_projector(k: usize) -> ComplexSquareMatrix {
    let mut e = [crate::linalg::c(0.0, 0.0); 2];
    e[k] = crate::linalg::c(1.0, 0.0);
    ComplexSquareMatrix::outer(&e)
}

/// Block-diagonal unitary on (B, E) at a fixed Rabi frequency.
pub fn ube_unitary_at(rabi: f64, t: f64) -> ComplexSquareMatrix {
    FIELD_PHASES
        .iter()
        .enumerate()
        .map(|(k, &phi)| tensor_product(&field_unitary(phi, rabi, t), &environment_projector(k)))
        .reduce(|a, b| &a + &b)
        .expect("two phases")
}

/// The dilation at the central Rabi frequency.
pub fn ube_unitary(p: &RandomFieldParams, t: f64) -> ComplexSquareMatrix {
    ube_unitary_at(p.rabi(), t)
}

fn evolve_at(rho: &ComplexSquareMatrix, rabi: f64, t: f64) -> ComplexSquareMatrix {
    let full = tensor_product(&ComplexSquareMatrix::identity(2), &ube_unitary_at(rabi, t));
    rho.conjugate_by(&full).expect("8x8")
}

/// `(1_A ⊗ U_BE) ρ_ABE (1_A ⊗ U_BE)†`, averaged over the Rabi distribution
/// when `width > 0`.
pub fn evolve_abe(
    s0: &HybridTripartiteState,
    p: &RandomFieldParams,
    t: f64,
    order: usize,
) -> Result<HybridTripartiteState> {
    let rho = s0.rho_abe.matrix();
    let m = if p.width() == 0.0 {
        evolve_at(rho, p.rabi(), t)
    } else {
        converged_average(order, t, |rule| {
            rule.iter()
                .map(|(z, w)| evolve_at(rho, p.rabi_at(z), t).scale_real(w))
                .reduce(|a, b| &a + &b)
                .expect("nonempty rule")
        })?
    };
    HybridTripartiteState::new(DensityOperator::new(m, vec![2, 2, 2])?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowRecord {
    pub time: f64,
    pub concurrence: f64,
    pub tripartite: f64,
    pub decomposition: InformationDecomposition,
}

pub fn flow_record(s: &HybridTripartiteState, time: f64) -> Result<FlowRecord> {
    let decomposition = information_decomposition(&s.rho_abe)?;
    Ok(FlowRecord {
        time,
        concurrence: concurrence(&s.two_qubit())?,
        tripartite: decomposition.tripartite,
        decomposition,
    })
}

/// One record per grid time, in grid order.
pub fn flow_timeseries(
    rho_ab0: &DensityOperator,
    p: &RandomFieldParams,
    grid: &[f64],
    order: usize,
) -> Result<Vec<FlowRecord>> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::precondition(
            "grid must be nonempty and strictly increasing",
        ));
    }
    let s0 = embed_initial(rho_ab0)?;
    grid.par_iter()
        .map(|&t| flow_record(&evolve_abe(&s0, p, t, order)?, t))
        .collect()
}
