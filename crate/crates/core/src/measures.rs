//! Scalar correlation quantifiers.
//!
//! Entropic quantities use natural logarithms (nats). The one exception is
//! the entanglement of formation, which uses the base-2 binary entropy so
//! that a Bell state carries exactly one ebit.

use crate::error::{Error, Result};
use crate::linalg::{
    pauli, psd_sqrt, shannon_entropy, tensor_product, ComplexSquareMatrix, DensityOperator,
    LogBase, C64,
};
use crate::states::{bell_state, BellLabel, Ket2};

fn require_dims(rho: &DensityOperator, dims: &[usize], what: &str) -> Result<()> {
    if rho.dims() != dims {
        return Err(Error::precondition(format!(
            "{what} needs subsystem dims {dims:?}, got {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Wootters concurrence `max{0, √χ₁ - √χ₂ - √χ₃ - √χ₄}`.
///
/// The `√χ` are the singular values of `√ρ √ρ̃` with
/// `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`. Taking them from an SVD avoids the square
/// roots of round-off-sized eigenvalues of `√ρ ρ̃ √ρ`.
pub fn concurrence(rho: &DensityOperator) -> Result<f64> {
    require_dims(rho, &[2, 2], "concurrence")?;
    let yy = tensor_product(&pauli::y(), &pauli::y());
    let root = psd_sqrt(rho.matrix())?;
    let flipped_root = &(&yy * &root.conj()) * &yy;
    let product = &root * &flipped_root;
    let mut s: Vec<f64> = product
        .as_nalgebra()
        .clone()
        .singular_values()
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// Concurrence of a pure two-qubit state, `2|ψ₀₀ψ₁₁ - ψ₀₁ψ₁₀|`.
pub fn pure_concurrence(psi: &Ket2) -> f64 {
    (2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm()).min(1.0)
}

/// Populations `⟨B|ρ|B⟩` in the Bell basis, ordered as [`BellLabel::ALL`].
pub fn bell_weights(rho: &DensityOperator) -> [f64; 4] {
    BellLabel::ALL.map(|label| expectation(rho.matrix(), &bell_state(label)).re)
}

/// Largest off-diagonal magnitude of `ρ` written in the Bell basis.
pub fn bell_offdiagonal(rho: &DensityOperator) -> f64 {
    let basis = BellLabel::ALL.map(bell_state);
    let m = rho.matrix();
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                let mv = m.apply(&basis[j]).expect("4-vector");
                let z: C64 = basis[i].iter().zip(&mv).map(|(a, b)| a.conj() * b).sum();
                worst = worst.max(z.norm());
            }
        }
    }
    worst
}

fn expectation(m: &ComplexSquareMatrix, psi: &Ket2) -> C64 {
    let mv = m.apply(psi).expect("4-vector");
    psi.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
}

/// Closed form for Bell-diagonal states: `max{0, 2·max λ - 1}`.
pub fn bell_diagonal_concurrence(weights: &[f64; 4]) -> f64 {
    let top = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (2.0 * top - 1.0).max(0.0)
}

/// `h(x) = -x log₂ x - (1-x) log₂(1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    shannon_entropy(&[x, 1.0 - x], LogBase::Two)
}

/// Entanglement of formation from concurrence, `h((1 + √(1 - C²)) / 2)`.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !(-1e-9..=1.0 + 1e-9).contains(&c) {
        return Err(Error::precondition(format!(
            "concurrence {c} is outside [0, 1]"
        )));
    }
    let c = c.clamp(0.0, 1.0);
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

pub fn entanglement_of_formation(rho: &DensityOperator) -> Result<f64> {
    eof_from_concurrence(concurrence(rho)?)
}

fn entropy_of(rho: &DensityOperator, keep: &[usize]) -> Result<f64> {
    Ok(rho.partial_trace(keep)?.entropy(LogBase::Natural))
}

/// Quantum mutual information `S(a) + S(b) - S(ab)` across a bipartition
/// of all subsystems, in nats.
pub fn mutual_information(rho: &DensityOperator, a: &[usize], b: &[usize]) -> Result<f64> {
    let n = rho.dims().len();
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    if a.is_empty() || b.is_empty() || all != (0..n).collect::<Vec<_>>() {
        return Err(Error::InvalidSubsystem {
            indices: a.iter().chain(b).copied().collect(),
            count: n,
        });
    }
    let joint = rho.entropy(LogBase::Natural);
    Ok(entropy_of(rho, a)? + entropy_of(rho, b)? - joint)
}

const A: usize = 0;
const B: usize = 1;
const E: usize = 2;

/// Genuine tripartite correlations: the smallest mutual information across
/// the three `ij | k` cuts of a three-qubit state.
pub fn tripartite_correlations(rho_abe: &DensityOperator) -> Result<f64> {
    require_dims(rho_abe, &[2, 2, 2], "tripartite correlations")?;
    Ok(TripartiteEntropies::new(rho_abe)?.tripartite())
}

/// Split of the total state information into local information, genuine
/// tripartite correlations and the largest pairwise mutual information.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InformationDecomposition {
    /// `ln 8 - S(ρ_ABE)`
    pub total: f64,
    /// `Σ_i ln 2 - S(ρ_i)`
    pub local: f64,
    pub tripartite: f64,
    /// `max_{ij} I(ρ_ij)`
    pub bipartite_max: f64,
    /// `total - local - tripartite - bipartite_max`
    pub residual: f64,
}

pub fn information_decomposition(rho_abe: &DensityOperator) -> Result<InformationDecomposition> {
    require_dims(rho_abe, &[2, 2, 2], "information decomposition")?;
    let s = TripartiteEntropies::new(rho_abe)?;
    let ln2 = std::f64::consts::LN_2;
    let total = 3.0 * ln2 - s.abe;
    let local = s.single.iter().map(|si| ln2 - si).sum::<f64>();
    let tripartite = s.tripartite();
    let pair_mi = |i: usize, j: usize, ij: f64| s.single[i] + s.single[j] - ij;
    let bipartite_max = pair_mi(A, B, s.ab)
        .max(pair_mi(A, E, s.ae))
        .max(pair_mi(B, E, s.be));
    Ok(InformationDecomposition {
        total,
        local,
        tripartite,
        bipartite_max,
        residual: total - local - tripartite - bipartite_max,
    })
}

/// All marginal entropies of a three-qubit state.
struct TripartiteEntropies {
    single: [f64; 3],
    ab: f64,
    ae: f64,
    be: f64,
    abe: f64,
}

impl TripartiteEntropies {
    fn new(rho: &DensityOperator) -> Result<Self> {
        Ok(Self {
            single: [
                entropy_of(rho, &[A])?,
                entropy_of(rho, &[B])?,
                entropy_of(rho, &[E])?,
            ],
            ab: entropy_of(rho, &[A, B])?,
            ae: entropy_of(rho, &[A, E])?,
            be: entropy_of(rho, &[B, E])?,
            abe: rho.entropy(LogBase::Natural),
        })
    }

    fn tripartite(&self) -> f64 {
        let ab_e = self.ab + self.single[E] - self.abe;
        let ae_b = self.ae + self.single[B] - self.abe;
        let be_a = self.be + self.single[A] - self.abe;
        ab_e.min(ae_b).min(be_a)
    }
}

/// A probability-weighted collection of pure two-qubit states.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPureEnsemble {
    members: Vec<(f64, Ket2)>,
}

impl WeightedPureEnsemble {
    pub fn new(members: Vec<(f64, Ket2)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::precondition("ensemble has no members"));
        }
        let mut total = 0.0;
        for (w, psi) in &members {
            if *w < 0.0 {
                return Err(Error::precondition(format!("negative ensemble weight {w}")));
            }
            let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::precondition(format!(
                    "ensemble state has norm² {norm}"
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::precondition(format!(
                "ensemble weights sum to {total}"
            )));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, Ket2)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ p_i |ψ_i⟩⟨ψ_i|`.
    pub fn density(&self) -> Result<DensityOperator> {
        let mut acc = [C64::new(0.0, 0.0); 16];
        for (w, psi) in &self.members {
            for i in 0..4 {
                for j in 0..4 {
                    acc[4 * i + j] += psi[i] * psi[j].conj() * *w;
                }
            }
        }
        DensityOperator::new(ComplexSquareMatrix::from_rows(4, &acc)?, vec![2, 2])
    }
}

/// `Σ p_i E_f(|ψ_i⟩)`.
pub fn average_entanglement(ens: &WeightedPureEnsemble) -> f64 {
    ens.members
        .iter()
        .map(|(w, psi)| w * eof_from_concurrence(pure_concurrence(psi)).expect("C in [0, 1]"))
        .sum()
}

/// Average entanglement of the ensemble minus the entanglement of formation
/// of its mixture.
pub fn hidden_entanglement(ens: &WeightedPureEnsemble) -> Result<f64> {
    let mixed = entanglement_of_formation(&ens.density()?)?;
    Ok(average_entanglement(ens) - mixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, tensor_vec};
    use crate::states::{bell_density, xyz_state, XYZParams};
    use approx::assert_abs_diff_eq;

    fn reference_state() -> DensityOperator {
        xyz_state(&XYZParams::new(1.0, 0.9, 1.0).unwrap())
    }

    #[test]
    fn concurrence_reference_values() {
        for label in BellLabel::ALL {
            assert_abs_diff_eq!(
                concurrence(&bell_density(label)).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
        let white = DensityOperator::maximally_mixed(vec![2, 2]);
        assert_abs_diff_eq!(concurrence(&white).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            concurrence(&reference_state()).unwrap(),
            0.8,
            epsilon = 1e-12
        );
    }

    #[test]
    fn concurrence_needs_two_qubits() {
        let rho = DensityOperator::maximally_mixed(vec![2, 2, 2]);
        assert!(concurrence(&rho).is_err());
    }

    #[test]
    fn eof_values() {
        assert_eq!(eof_from_concurrence(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(eof_from_concurrence(1.0).unwrap(), 1.0, epsilon = 1e-15);
        // h(0.8) directly
        let h08 = -(0.8f64 * 0.8f64.log2() + 0.2 * 0.2f64.log2());
        assert_abs_diff_eq!(eof_from_concurrence(0.8).unwrap(), h08, epsilon = 1e-15);
        assert_abs_diff_eq!(h08, 0.7219, epsilon = 1e-4);
        assert!(eof_from_concurrence(1.1).is_err());
        assert!(eof_from_concurrence(-0.01).is_err());
    }

    #[test]
    fn mutual_information_values() {
        let ln2 = std::f64::consts::LN_2;
        let bell = bell_density(BellLabel::TwoPlus);
        assert_abs_diff_eq!(
            mutual_information(&bell, &[0], &[1]).unwrap(),
            2.0 * ln2,
            epsilon = 1e-12
        );
        let s0 = -(0.9f64 * 0.9f64.ln() + 0.1 * 0.1f64.ln());
        let mi = mutual_information(&reference_state(), &[0], &[1]).unwrap();
        assert_abs_diff_eq!(mi, 2.0 * ln2 - s0, epsilon = 1e-12);
        assert_abs_diff_eq!(mi, 1.0612, epsilon = 1e-4);
        let product = reference_state().tensor(&DensityOperator::maximally_mixed(vec![2]));
        assert_abs_diff_eq!(
            mutual_information(&product, &[0, 1], &[2]).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert!(mutual_information(&product, &[0], &[1]).is_err());
        assert!(mutual_information(&product, &[0, 1], &[1, 2]).is_err());
    }

    #[test]
    fn decomposition_of_product_state() {
        let rho = reference_state().tensor(&DensityOperator::maximally_mixed(vec![2]));
        let d = information_decomposition(&rho).unwrap();
        let s0 = -(0.9f64 * 0.9f64.ln() + 0.1 * 0.1f64.ln());
        let expected = 2.0 * std::f64::consts::LN_2 - s0;
        assert_abs_diff_eq!(d.total, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(d.local, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.tripartite, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.bipartite_max, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(d.residual, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tripartite_correlations(&rho).unwrap(), 0.0, epsilon = 1e-12);

        let white =
            information_decomposition(&DensityOperator::maximally_mixed(vec![2, 2, 2])).unwrap();
        for v in [
            white.total,
            white.local,
            white.tripartite,
            white.bipartite_max,
            white.residual,
        ] {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ensembles() {
        let bell = WeightedPureEnsemble::new(vec![(1.0, bell_state(BellLabel::TwoPlus))]).unwrap();
        assert_abs_diff_eq!(average_entanglement(&bell), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hidden_entanglement(&bell).unwrap(), 0.0, epsilon = 1e-9);

        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let k00 = tensor_vec(&[one, zero], &[one, zero]);
        let k11 = tensor_vec(&[zero, one], &[zero, one]);
        let product = WeightedPureEnsemble::new(vec![
            (0.5, k00.try_into().unwrap()),
            (0.5, k11.try_into().unwrap()),
        ])
        .unwrap();
        assert_abs_diff_eq!(average_entanglement(&product), 0.0, epsilon = 1e-15);

        // Equal mixture of two orthogonal Bell states hides one full ebit.
        let hidden = WeightedPureEnsemble::new(vec![
            (0.5, bell_state(BellLabel::TwoPlus)),
            (0.5, bell_state(BellLabel::TwoMinus)),
        ])
        .unwrap();
        assert_abs_diff_eq!(hidden_entanglement(&hidden).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn ensemble_validation() {
        let psi = bell_state(BellLabel::OnePlus);
        assert!(WeightedPureEnsemble::new(vec![]).is_err());
        assert!(WeightedPureEnsemble::new(vec![(0.7, psi)]).is_err());
        assert!(WeightedPureEnsemble::new(vec![(1.2, psi), (-0.2, psi)]).is_err());
        let mut bad = psi;
        bad[0] = c(1.0, 0.0);
        assert!(WeightedPureEnsemble::new(vec![(1.0, bad)]).is_err());
    }

    #[test]
    fn pure_concurrence_agrees_with_wootters() {
        let psi: Ket2 = [c(0.3, 0.1), c(-0.2, 0.5), c(0.4, 0.0), c(0.1, -0.2)];
        let n = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi = psi.map(|z| z / n);
        let rho = DensityOperator::pure(&psi, vec![2, 2]).unwrap();
        assert_abs_diff_eq!(
            pure_concurrence(&psi),
            concurrence(&rho).unwrap(),
            epsilon = 1e-9
        );
    }
}
