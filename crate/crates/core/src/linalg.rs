//! Dense complex linear algebra for the small Hilbert spaces used here
//! (one, two or three qubits).
//!
//! Matrices are immutable values: every operation returns a new matrix.
//! Storage is backed by `nalgebra`, whose Hermitian eigensolver handles the
//! spectral work (concurrence, entropies, matrix square roots).

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance on trace, hermiticity and negative eigenvalues of a density operator.
pub const STATE_TOL: f64 = 1e-10;

/// Hermiticity tolerance accepted by [`hermitian_eigenvalues`].
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Eigenvalues in `[-CLIP_WINDOW, 0)` are reported as exactly zero.
pub const CLIP_WINDOW: f64 = 1e-10;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexSquareMatrix {
    inner: DMatrix<C64>,
}

impl fmt::Debug for ComplexSquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexSquareMatrix({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexSquareMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::BadShape {
                len: entries.len(),
                expected: dim * dim,
            });
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<C64> = entries.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_rows(dim, &entries)
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            inner: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        Self::from_fn(
            entries.len(),
            |i, j| if i == j { entries[i] } else { c(0.0, 0.0) },
        )
    }

    /// The projector `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub(crate) fn from_nalgebra(inner: DMatrix<C64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self { inner }
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<C64> {
        let d = self.dim();
        (0..d * d).map(|k| self.inner[(k / d, k % d)]).collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self::from_nalgebra(&self.inner + &other.inner))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self::from_nalgebra(&self.inner - &other.inner))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self::from_nalgebra(&self.inner * &other.inner))
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::from_nalgebra(&self.inner * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c(factor, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_nalgebra(self.inner.adjoint())
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self::from_nalgebra(self.inner.map(|z| z.conj()))
    }

    pub fn trace(&self) -> C64 {
        self.inner.trace()
    }

    /// `u · self · u†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        self.same_dim(u)?;
        Ok(Self::from_nalgebra(
            &u.inner * &self.inner * u.inner.adjoint(),
        ))
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.len(),
            });
        }
        let d = self.dim();
        Ok((0..d)
            .map(|i| (0..d).map(|j| self.inner[(i, j)] * v[j]).sum())
            .collect())
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise deviation of `U U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = Self::from_nalgebra(&self.inner * self.inner.adjoint());
        prod.max_abs_diff(&Self::identity(self.dim()))
    }

    fn hermitian_part(&self) -> DMatrix<C64> {
        (&self.inner + self.inner.adjoint()) * c(0.5, 0.0)
    }
}

impl Index<(usize, usize)> for ComplexSquareMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.inner[idx]
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&ComplexSquareMatrix> for &ComplexSquareMatrix {
            type Output = ComplexSquareMatrix;

            /// Panics on a dimension mismatch; use the `checked_*` form for fallible input.
            fn $method(self, rhs: &ComplexSquareMatrix) -> ComplexSquareMatrix {
                self.$checked(rhs).expect("dimension mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

/// Kronecker product with `(a⊗b)[i·db+k, j·db+l] = a[i,j]·b[k,l]`.
pub fn tensor_product(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> ComplexSquareMatrix {
    ComplexSquareMatrix::from_nalgebra(a.inner.kronecker(&b.inner))
}

/// Kronecker product of state vectors.
pub fn tensor_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Single-qubit operators in the basis `{|0⟩, |1⟩}`.
pub mod pauli {
    use super::{c, ComplexSquareMatrix};

    pub fn identity() -> ComplexSquareMatrix {
        ComplexSquareMatrix::identity(2)
    }

    pub fn x() -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn y() -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_rows(2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap()
    }

    /// `|0⟩⟨0| - |1⟩⟨1|`.
    pub fn z() -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_real_rows(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    /// Raising operator `|1⟩⟨0|`.
    pub fn plus() -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_real_rows(2, &[0.0, 0.0, 1.0, 0.0]).unwrap()
    }

    /// Lowering operator `|0⟩⟨1|`.
    pub fn minus() -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexSquareMatrix,
}

pub fn hermitian_eigen(m: &ComplexSquareMatrix) -> Result<HermitianEigen> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let eig = m.hermitian_part().symmetric_eigen();
    let mut order: Vec<usize> = (0..m.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| clip(eig.eigenvalues[k])).collect();
    let vectors = ComplexSquareMatrix::from_fn(m.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian matrix in descending order, with negative
/// round-off in `[-1e-10, 0)` clipped to zero.
pub fn hermitian_eigenvalues(m: &ComplexSquareMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|e| e.values)
}

fn clip(x: f64) -> f64 {
    if (-CLIP_WINDOW..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &ComplexSquareMatrix) -> Result<ComplexSquareMatrix> {
    let eig = hermitian_eigen(m)?;
    let d = m.dim();
    let roots: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let v = &eig.vectors;
    Ok(ComplexSquareMatrix::from_fn(d, |i, j| {
        (0..d)
            .map(|k| v[(i, k)] * roots[k] * v[(j, k)].conj())
            .sum()
    }))
}

/// Logarithm base used for entropies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// `-Σ λ log λ` with `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64], base: LogBase) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * base.log(p))
        .sum::<f64>()
}

/// A trace-one, Hermitian, positive semidefinite matrix over an ordered list
/// of subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexSquareMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Validates and wraps `matrix`.
    pub fn new(matrix: ComplexSquareMatrix, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().product::<usize>() != matrix.dim() {
            return Err(Error::SubsystemMismatch {
                dims,
                dim: matrix.dim(),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let dev = matrix.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let values = hermitian_eigenvalues(&matrix)?;
        let min = values.last().copied().unwrap_or(0.0);
        if min < -CLIP_WINDOW {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { matrix, dims })
    }

    /// A state of `n` qubits.
    pub fn qubits(matrix: ComplexSquareMatrix) -> Result<Self> {
        let d = matrix.dim();
        if !d.is_power_of_two() || d < 2 {
            return Err(Error::SubsystemMismatch {
                dims: vec![],
                dim: d,
            });
        }
        let n = d.trailing_zeros() as usize;
        Self::new(matrix, vec![2; n])
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::precondition(format!(
                "state vector has norm² {norm}"
            )));
        }
        Self::new(ComplexSquareMatrix::outer(psi), dims)
    }

    /// The maximally mixed state on the given subsystems.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self {
            matrix: ComplexSquareMatrix::identity(d).scale_real(1.0 / d as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &ComplexSquareMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix).expect("density operator is Hermitian")
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        von_neumann_entropy(self, base)
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            matrix: tensor_product(&self.matrix, &other.matrix),
            dims,
        }
    }

    /// `U ρ U†` with `U` acting on the full space.
    pub fn conjugate_by(&self, u: &ComplexSquareMatrix) -> Result<Self> {
        Self::new(self.matrix.conjugate_by(u)?, self.dims.clone())
    }

    /// Reduced state on the subsystems listed in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        partial_trace(self, keep)
    }
}

/// Traces out every subsystem not listed in `keep`.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let n = rho.dims.len();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if keep.is_empty() || kept.len() != keep.len() || kept.iter().any(|&k| k >= n) {
        return Err(Error::InvalidSubsystem {
            indices: keep.to_vec(),
            count: n,
        });
    }
    if kept.len() == n {
        return Ok(rho.clone());
    }

    let dims = &rho.dims;
    let full = rho.dim();
    let new_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let new_dim: usize = new_dims.iter().product();
    let is_kept: Vec<bool> = (0..n).map(|k| kept.contains(&k)).collect();

    // Per basis index: (kept part, traced part) as flattened sub-indices.
    let split = |mut idx: usize| -> (usize, usize) {
        let (mut kept_idx, mut traced_idx) = (0, 0);
        let (mut kept_stride, mut traced_stride) = (1, 1);
        for k in (0..n).rev() {
            let digit = idx % dims[k];
            idx /= dims[k];
            if is_kept[k] {
                kept_idx += digit * kept_stride;
                kept_stride *= dims[k];
            } else {
                traced_idx += digit * traced_stride;
                traced_stride *= dims[k];
            }
        }
        (kept_idx, traced_idx)
    };
    let parts: Vec<(usize, usize)> = (0..full).map(split).collect();

    let mut out = DMatrix::<C64>::zeros(new_dim, new_dim);
    for i in 0..full {
        for j in 0..full {
            let (ki, ti) = parts[i];
            let (kj, tj) = parts[j];
            if ti == tj {
                out[(ki, kj)] += rho.matrix[(i, j)];
            }
        }
    }
    DensityOperator::new(ComplexSquareMatrix::from_nalgebra(out), new_dims)
}

/// `S(ρ) = -Tr ρ log ρ`.
pub fn von_neumann_entropy(rho: &DensityOperator, base: LogBase) -> f64 {
    shannon_entropy(&rho.eigenvalues(), base)
}
