//! Deterministic Monte-Carlo averaging of local random unitaries.
//!
//! Trajectory `j` draws from its own ChaCha8 stream (`seed`, stream `j`), and
//! trajectories are grouped into a fixed number of contiguous blocks. Blocks
//! are evaluated in parallel and reduced in block order, so results are
//! bitwise independent of the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexSquareMatrix, DensityOperator, C64};
use crate::measures::{eof_from_concurrence, pure_concurrence};
use crate::states::Ket2;

/// Name recorded in output metadata.
pub const PRNG_NAME: &str = "ChaCha8Rng(seed, stream = trajectory index)";

/// Number of jackknife blocks.
pub const BLOCKS: usize = 20;

/// Single-qubit unitary, row-major.
pub type Unitary2 = [C64; 4];

pub const IDENTITY2: Unitary2 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
pub const SIGMA_X: Unitary2 = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];

pub fn mul2(a: &Unitary2, b: &Unitary2) -> Unitary2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// `e^{-iφσz/2}`.
pub fn z_rotation(phase: f64) -> Unitary2 {
    let h = C64::from_polar(1.0, -phase / 2.0);
    [h, c(0.0, 0.0), c(0.0, 0.0), h.conj()]
}

pub fn to_matrix(u: &Unitary2) -> ComplexSquareMatrix {
    ComplexSquareMatrix::from_rows(2, u).expect("2x2")
}

/// `(1 ⊗ U) ρ (1 ⊗ U)†` accumulated into `acc` with weight `w`.
pub(crate) fn accumulate_local(acc: &mut [C64; 16], rho: &[C64; 16], u: &Unitary2, w: f64) {
    // (1⊗U)_{(a,b),(a',c)} = δ_{aa'} U_{bc}
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let mut z = c(0.0, 0.0);
                    for k in 0..2 {
                        for l in 0..2 {
                            z += u[2 * b + k]
                                * rho[4 * (2 * a + k) + 2 * a2 + l]
                                * u[2 * b2 + l].conj();
                        }
                    }
                    acc[4 * (2 * a + b) + 2 * a2 + b2] += z * w;
                }
            }
        }
    }
}

pub(crate) fn apply_local_ket(psi: &Ket2, u: &Unitary2) -> Ket2 {
    let mut out = [c(0.0, 0.0); 4];
    for a in 0..2 {
        for b in 0..2 {
            out[2 * a + b] = u[2 * b] * psi[2 * a] + u[2 * b + 1] * psi[2 * a + 1];
        }
    }
    out
}

pub(crate) fn to_array(rho: &DensityOperator) -> Result<[C64; 16]> {
    if rho.dims() != [2, 2] {
        return Err(Error::precondition(format!(
            "two-qubit state required, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(rho.matrix().to_rows().try_into().expect("16 entries"))
}

pub fn trajectory_rng(seed: u64, trajectory: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trajectory);
    rng
}

/// Monte-Carlo estimate of a two-qubit state at one time point.
#[derive(Clone, Debug)]
pub struct McState {
    pub state: DensityOperator,
    /// Mean entanglement of formation over trajectories (pure inputs only).
    pub average_entanglement: Option<f64>,
    pub trajectories: usize,
    block_sums: Vec<[C64; 16]>,
    block_sizes: Vec<usize>,
}

impl McState {
    /// Jackknife standard error of a smooth functional of the state,
    /// using leave-one-block-out estimates.
    pub fn stderr<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&DensityOperator) -> Result<f64>,
    {
        let k = self.block_sums.len();
        if k < 2 {
            return Ok(0.0);
        }
        let total: [C64; 16] = sum_blocks(&self.block_sums);
        let n = self.trajectories as f64;
        let mut values = Vec::with_capacity(k);
        for (sum, &size) in self.block_sums.iter().zip(&self.block_sizes) {
            let w = 1.0 / (n - size as f64);
            let loo: Vec<C64> = total.iter().zip(sum).map(|(t, s)| (t - s) * w).collect();
            values.push(f(&two_qubit_state(&loo)?)?);
        }
        let mean = values.iter().sum::<f64>() / k as f64;
        let var =
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() * (k - 1) as f64 / k as f64;
        Ok(var.sqrt())
    }
}

fn sum_blocks(blocks: &[[C64; 16]]) -> [C64; 16] {
    let mut total = [c(0.0, 0.0); 16];
    for b in blocks {
        for (t, x) in total.iter_mut().zip(b) {
            *t += x;
        }
    }
    total
}

fn two_qubit_state(entries: &[C64]) -> Result<DensityOperator> {
    let m = ComplexSquareMatrix::from_rows(4, entries)?;
    // Restore exact hermiticity lost to summation order.
    let m = m.checked_add(&m.adjoint())?.scale_real(0.5);
    DensityOperator::new(m, vec![2, 2])
}

fn block_ranges(n: usize) -> Vec<std::ops::Range<usize>> {
    let k = BLOCKS.min(n);
    (0..k).map(|b| (b * n / k)..((b + 1) * n / k)).collect()
}

/// Averages `(1⊗U_j(t)) ρ₀ (1⊗U_j(t))†` over `trajectories` samples.
///
/// `sampler(rng, out)` must fill `out[i]` with the unitary acting on qubit B
/// at the `i`-th requested time point.
pub fn average_local_unitaries<S>(
    rho0: &DensityOperator,
    pure_input: Option<&Ket2>,
    points: usize,
    trajectories: usize,
    seed: u64,
    sampler: S,
) -> Result<Vec<McState>>
where
    S: Fn(&mut ChaCha8Rng, &mut [Unitary2]) + Sync,
{
    if trajectories == 0 {
        return Err(Error::precondition("at least one trajectory is required"));
    }
    let rho = to_array(rho0)?;
    let ranges = block_ranges(trajectories);

    struct Block {
        sums: Vec<[C64; 16]>,
        eof: Vec<f64>,
        size: usize,
    }

    let blocks: Vec<Block> = ranges
        .par_iter()
        .map(|range| {
            let mut sums = vec![[c(0.0, 0.0); 16]; points];
            let mut eof = vec![0.0; points];
            let mut us = vec![IDENTITY2; points];
            for j in range.clone() {
                let mut rng = trajectory_rng(seed, j as u64);
                sampler(&mut rng, &mut us);
                for (i, u) in us.iter().enumerate() {
                    accumulate_local(&mut sums[i], &rho, u, 1.0);
                    if let Some(psi) = pure_input {
                        let c = pure_concurrence(&apply_local_ket(psi, u));
                        eof[i] += eof_from_concurrence(c).expect("C in [0, 1]");
                    }
                }
            }
            Block {
                sums,
                eof,
                size: range.len(),
            }
        })
        .collect();

    let n = trajectories as f64;
    (0..points)
        .map(|i| {
            let block_sums: Vec<[C64; 16]> = blocks.iter().map(|b| b.sums[i]).collect();
            let total = sum_blocks(&block_sums);
            let mean: Vec<C64> = total.iter().map(|z| z / n).collect();
            let eav = pure_input.map(|_| blocks.iter().map(|b| b.eof[i]).sum::<f64>() / n);
            Ok(McState {
                state: two_qubit_state(&mean)?,
                average_entanglement: eav,
                trajectories,
                block_sums,
                block_sizes: blocks.iter().map(|b| b.size).collect(),
            })
        })
        .collect()
}

/// Mean of a scalar sample with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McScalar {
    pub mean: f64,
    pub stderr: f64,
}

/// Deterministic per-time averages of a scalar observable.
pub(crate) fn average_scalars<S>(
    points: usize,
    trajectories: usize,
    seed: u64,
    sampler: S,
) -> Vec<McScalar>
where
    S: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let blocks: Vec<(Vec<f64>, Vec<f64>)> = block_ranges(trajectories)
        .par_iter()
        .map(|range| {
            let mut sum = vec![0.0; points];
            let mut sum_sq = vec![0.0; points];
            let mut out = vec![0.0; points];
            for j in range.clone() {
                let mut rng = trajectory_rng(seed, j as u64);
                sampler(&mut rng, &mut out);
                for i in 0..points {
                    sum[i] += out[i];
                    sum_sq[i] += out[i] * out[i];
                }
            }
            (sum, sum_sq)
        })
        .collect();
    let n = trajectories as f64;
    (0..points)
        .map(|i| {
            let s: f64 = blocks.iter().map(|b| b.0[i]).sum();
            let s2: f64 = blocks.iter().map(|b| b.1[i]).sum();
            let mean = s / n;
            let var = ((s2 / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
            McScalar {
                mean,
                stderr: (var / n).sqrt(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tensor_product;
    use crate::states::{bell_density, bell_state, BellLabel};

    #[test]
    fn local_accumulation_matches_dense_conjugation() {
        let rho = bell_density(BellLabel::OneMinus);
        let u = mul2(&z_rotation(0.7), &SIGMA_X);
        let mut acc = [c(0.0, 0.0); 16];
        accumulate_local(&mut acc, &to_array(&rho).unwrap(), &u, 1.0);
        let full = tensor_product(&ComplexSquareMatrix::identity(2), &to_matrix(&u));
        let expected = rho.matrix().conjugate_by(&full).unwrap();
        let got = ComplexSquareMatrix::from_rows(4, &acc).unwrap();
        assert!(got.max_abs_diff(&expected) < 1e-15);

        let psi = apply_local_ket(&bell_state(BellLabel::OneMinus), &u);
        let from_ket = ComplexSquareMatrix::outer(&psi);
        assert!(from_ket.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn blocks_cover_every_trajectory_once() {
        for n in [1, 7, 20, 21, 1000, 10_001] {
            let r = block_ranges(n);
            assert_eq!(r.first().unwrap().start, 0);
            assert_eq!(r.last().unwrap().end, n);
            assert!(r.windows(2).all(|w| w[0].end == w[1].start));
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        use rand::Rng;
        let a: u64 = trajectory_rng(5, 3).random();
        let b: u64 = trajectory_rng(5, 3).random();
        let d: u64 = trajectory_rng(5, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, d);
    }
}
