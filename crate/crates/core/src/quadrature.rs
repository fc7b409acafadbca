//! Gauss–Hermite rules rescaled to expectations over a standard normal
//! variable, with an order-doubling convergence guard.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussHermite;

use crate::error::{Error, Result};
use crate::linalg::ComplexSquareMatrix;

pub const DEFAULT_ORDER: usize = 64;

/// Max entrywise change tolerated when the order is doubled.
pub const CONVERGENCE_TOL: f64 = 1e-8;

/// Nodes `z_i` and weights `w_i` with `Σ w_i f(z_i) ≈ E[f(Z)]`, `Z ~ N(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussianRule {
    fn build(order: usize) -> Result<Self> {
        let gh = GaussHermite::new(order)
            .map_err(|_| Error::precondition(format!("quadrature order {order} must be >= 2")))?;
        let mut pairs: Vec<(f64, f64)> = gh.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Weights are renormalized so constants integrate exactly.
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        Ok(Self {
            nodes: pairs
                .iter()
                .map(|p| p.0 * std::f64::consts::SQRT_2)
                .collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        })
    }

    /// Shared rule of the given order (built once per process).
    pub fn get(order: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussianRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(rule) = cache.lock().unwrap().get(&order) {
            return Ok(rule.clone());
        }
        let rule = Arc::new(Self::build(order)?);
        cache.lock().unwrap().insert(order, rule.clone());
        Ok(rule)
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(z, w)| w * f(z)).sum()
    }
}

/// Evaluates `average(rule)` at `order` and at `2 * order`; fails if any
/// matrix entry moves by more than [`CONVERGENCE_TOL`].
pub fn converged_average<F>(order: usize, time: f64, average: F) -> Result<ComplexSquareMatrix>
where
    F: Fn(&GaussianRule) -> ComplexSquareMatrix,
{
    let coarse = average(&*GaussianRule::get(order)?);
    let fine = average(&*GaussianRule::get(2 * order)?);
    let deviation = coarse.max_abs_diff(&fine);
    if !(deviation <= CONVERGENCE_TOL) {
        return Err(Error::Convergence {
            time,
            order,
            doubled: 2 * order,
            deviation,
        });
    }
    Ok(coarse)
}
