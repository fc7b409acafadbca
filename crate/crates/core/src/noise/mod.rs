//! Classical-noise channels acting on qubit B of a two-qubit state.
//!
//! Every model here is a random-unitary (hence unital) channel: qubit B is
//! rotated by a unitary drawn from a classical distribution while qubit A is
//! left alone. Free-evolution terms of the qubits are dropped (rotating
//! frame); they are local unitaries and leave every measure unchanged.

pub mod dephasing;
pub mod mc;
pub mod random_field;
pub mod stroboscopic;
pub mod telegraph;

pub use dephasing::{
    ou_noise_series, ou_noise_state, static_noise_channel, static_noise_state, StaticNoiseParams,
};
pub use mc::{McScalar, McState};
pub use random_field::{
    field_unitary, gaussian_averaged_map, gaussian_field_channel, random_field_channel,
    random_field_map, RandomFieldParams,
};
pub use stroboscopic::{stroboscopic_series, stroboscopic_state, StroboscopicParams};
pub use telegraph::{
    rtn_coherence, rtn_concurrence, rtn_mc_coherence, rtn_mc_coherence_series, telegraph_channel,
    RTNParams,
};

use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexSquareMatrix, DensityOperator, C64};
use crate::measures::WeightedPureEnsemble;
use crate::states::Ket2;

/// A completely positive, trace-preserving map on two-qubit states.
pub trait Channel {
    fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator>;
}

/// A weighted finite set of unitaries acting on qubit B:
/// `ρ ↦ Σ_k p_k (1 ⊗ U_k) ρ (1 ⊗ U_k)†`.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomUnitaryChannel {
    branches: Vec<(f64, ComplexSquareMatrix)>,
}

impl RandomUnitaryChannel {
    pub fn new(branches: Vec<(f64, ComplexSquareMatrix)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::precondition("channel needs at least one branch"));
        }
        let total: f64 = branches.iter().map(|b| b.0).sum();
        if (total - 1.0).abs() > 1e-9 || branches.iter().any(|b| b.0 < 0.0) {
            return Err(Error::precondition(format!(
                "branch weights sum to {total}"
            )));
        }
        for (_, u) in &branches {
            if u.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    left: 2,
                    right: u.dim(),
                });
            }
            let dev = u.unitarity_deviation();
            if dev > 1e-10 {
                return Err(Error::precondition(format!(
                    "branch is not unitary ({dev:e})"
                )));
            }
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[(f64, ComplexSquareMatrix)] {
        &self.branches
    }

    /// The mixed state's matrix, without validation.
    pub(crate) fn apply_matrix(&self, rho: &ComplexSquareMatrix) -> ComplexSquareMatrix {
        let id = ComplexSquareMatrix::identity(2);
        let mut acc = ComplexSquareMatrix::zeros(4);
        for (w, u) in &self.branches {
            let full = tensor_product(&id, u);
            acc = &acc + &rho.conjugate_by(&full).expect("4x4").scale_real(*w);
        }
        acc
    }

    /// The pure-state ensemble `{(p_k, (1⊗U_k)|ψ⟩)}`.
    pub fn ensemble(&self, psi: &Ket2) -> Result<WeightedPureEnsemble> {
        let id = ComplexSquareMatrix::identity(2);
        let members = self
            .branches
            .iter()
            .map(|(w, u)| {
                let out: Vec<C64> = tensor_product(&id, u).apply(psi)?;
                Ok((*w, out.try_into().expect("4-vector")))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightedPureEnsemble::new(members)
    }
}

impl Channel for RandomUnitaryChannel {
    fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dims() != [2, 2] {
            return Err(Error::precondition("channel acts on two-qubit states"));
        }
        DensityOperator::new(self.apply_matrix(rho.matrix()), vec![2, 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    #[test]
    fn rejects_bad_branches() {
        assert!(RandomUnitaryChannel::new(vec![]).is_err());
        assert!(RandomUnitaryChannel::new(vec![(0.5, pauli::x())]).is_err());
        assert!(RandomUnitaryChannel::new(vec![(1.0, pauli::plus())]).is_err());
        assert!(RandomUnitaryChannel::new(vec![(1.0, ComplexSquareMatrix::identity(4))]).is_err());
    }

    #[test]
    fn unital() {
        let ch = RandomUnitaryChannel::new(vec![(0.3, pauli::x()), (0.7, pauli::z())]).unwrap();
        let white = DensityOperator::maximally_mixed(vec![2, 2]);
        assert!(
            ch.apply(&white)
                .unwrap()
                .matrix()
                .max_abs_diff(white.matrix())
                < 1e-15
        );
    }
}
