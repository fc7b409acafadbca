//! Two-qubit initial states: Bell states, the x/y/z Bell-mixture family and
//! extended Werner-like states.
//!
//! The computational basis is ordered `{|00⟩, |01⟩, |10⟩, |11⟩}` everywhere;
//! the first factor is the isolated qubit A, the second the noisy qubit B.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexSquareMatrix, DensityOperator, C64};

/// Two-qubit state vector in the canonical basis.
pub type Ket2 = [C64; 4];

/// The four Bell states: `|1±⟩ = (|01⟩ ± |10⟩)/√2`, `|2±⟩ = (|00⟩ ± |11⟩)/√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellLabel {
    OnePlus,
    OneMinus,
    TwoPlus,
    TwoMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::OnePlus,
        BellLabel::OneMinus,
        BellLabel::TwoPlus,
        BellLabel::TwoMinus,
    ];
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellLabel::OnePlus => "1+",
            BellLabel::OneMinus => "1-",
            BellLabel::TwoPlus => "2+",
            BellLabel::TwoMinus => "2-",
        })
    }
}

impl FromStr for BellLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1+" => Ok(BellLabel::OnePlus),
            "1-" => Ok(BellLabel::OneMinus),
            "2+" => Ok(BellLabel::TwoPlus),
            "2-" => Ok(BellLabel::TwoMinus),
            other => Err(Error::precondition(format!(
                "unknown Bell label `{other}` (expected 1+, 1-, 2+ or 2-)"
            ))),
        }
    }
}

pub fn bell_state(label: BellLabel) -> Ket2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (o, p, m) = (c(0.0, 0.0), c(s, 0.0), c(-s, 0.0));
    match label {
        BellLabel::OnePlus => [o, p, p, o],
        BellLabel::OneMinus => [o, p, m, o],
        BellLabel::TwoPlus => [p, o, o, p],
        BellLabel::TwoMinus => [p, o, o, m],
    }
}

pub fn bell_density(label: BellLabel) -> DensityOperator {
    pure_density(&bell_state(label))
}

pub(crate) fn pure_density(psi: &Ket2) -> DensityOperator {
    DensityOperator::pure(psi, vec![2, 2]).expect("unit-norm two-qubit state")
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::precondition(format!(
            "{name} = {v} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// Parameters of `y |x₊⟩⟨x₊| + (1 - y) |z₋⟩⟨z₋|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XYZParams {
    x: f64,
    y: f64,
    z: f64,
}

impl XYZParams {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        check_unit("x", x)?;
        check_unit("y", y)?;
        check_unit("z", z)?;
        Ok(Self { x, y, z })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

fn combine(a: f64, u: &Ket2, b: f64, v: &Ket2) -> Ket2 {
    std::array::from_fn(|k| u[k] * a + v[k] * b)
}

/// `|x₊⟩ = x|2₊⟩ + √(1-x²)|1₊⟩` and `|z₋⟩ = z|2₋⟩ + √(1-z²)|1₋⟩`.
pub fn xyz_components(p: &XYZParams) -> (Ket2, Ket2) {
    let xp = combine(
        p.x,
        &bell_state(BellLabel::TwoPlus),
        (1.0 - p.x * p.x).sqrt(),
        &bell_state(BellLabel::OnePlus),
    );
    let zm = combine(
        p.z,
        &bell_state(BellLabel::TwoMinus),
        (1.0 - p.z * p.z).sqrt(),
        &bell_state(BellLabel::OneMinus),
    );
    (xp, zm)
}

pub fn xyz_state(p: &XYZParams) -> DensityOperator {
    let (xp, zm) = xyz_components(p);
    let m = ComplexSquareMatrix::outer(&xp)
        .scale_real(p.y)
        .checked_add(&ComplexSquareMatrix::outer(&zm).scale_real(1.0 - p.y))
        .expect("4x4");
    DensityOperator::new(m, vec![2, 2]).expect("convex mixture of pure states")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Excitation {
    /// `|1_a⟩ = a|01⟩ + b|10⟩`
    One,
    /// `|2_a⟩ = a|00⟩ + b|11⟩`
    Two,
}

/// Extended Werner-like state parameters: purity `r`, amplitude `a`, and
/// `b = √(1 - |a|²)` taken real and nonnegative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EWLParams {
    r: f64,
    a: C64,
    kind: Excitation,
}

impl EWLParams {
    pub fn new(r: f64, a: C64, kind: Excitation) -> Result<Self> {
        check_unit("r", r)?;
        if a.norm() > 1.0 + 1e-12 {
            return Err(Error::precondition(format!("|a| = {} exceeds 1", a.norm())));
        }
        Ok(Self { r, a, kind })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        (1.0 - self.a.norm_sqr()).max(0.0).sqrt()
    }

    pub fn kind(&self) -> Excitation {
        self.kind
    }

    /// The pure Bell-like component.
    pub fn ket(&self) -> Ket2 {
        let o = c(0.0, 0.0);
        let b = c(self.b(), 0.0);
        match self.kind {
            Excitation::One => [o, self.a, b, o],
            Excitation::Two => [self.a, o, o, b],
        }
    }
}

/// `r |ψ_a⟩⟨ψ_a| + (1 - r)/4 · 1₄`.
pub fn ewl_state(p: &EWLParams) -> DensityOperator {
    let m = ComplexSquareMatrix::outer(&p.ket())
        .scale_real(p.r)
        .checked_add(&ComplexSquareMatrix::identity(4).scale_real((1.0 - p.r) / 4.0))
        .expect("4x4");
    DensityOperator::new(m, vec![2, 2]).expect("convex mixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, von_neumann_entropy, LogBase};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bell_vectors() {
        let s = FRAC_1_SQRT_2;
        assert_eq!(
            bell_state(BellLabel::TwoPlus),
            [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]
        );
        assert_eq!(
            bell_state(BellLabel::OneMinus),
            [c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]
        );
        for label in BellLabel::ALL {
            let norm: f64 = bell_state(label).iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-15);
            assert_eq!(label.to_string().parse::<BellLabel>().unwrap(), label);
        }
        assert!("3+".parse::<BellLabel>().is_err());
    }

    #[test]
    fn xyz_reference_state_spectrum() {
        let rho = xyz_state(&XYZParams::new(1.0, 0.9, 1.0).unwrap());
        let ev = hermitian_eigenvalues(rho.matrix()).unwrap();
        let expected = [0.9, 0.1, 0.0, 0.0];
        for (a, b) in ev.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        let s = von_neumann_entropy(&rho, LogBase::Natural);
        assert_abs_diff_eq!(
            s,
            -(0.9f64 * 0.9f64.ln() + 0.1 * 0.1f64.ln()),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(s, 0.3251, epsilon = 1e-4);
    }

    #[test]
    fn xyz_y_one_is_bell() {
        let rho = xyz_state(&XYZParams::new(1.0, 1.0, 0.37).unwrap());
        assert!(
            rho.matrix()
                .max_abs_diff(bell_density(BellLabel::TwoPlus).matrix())
                < 1e-15
        );
    }

    #[test]
    fn xyz_footnote_state_spectrum() {
        let rho = xyz_state(&XYZParams::new(0.6, 0.8, 0.3).unwrap());
        let ev = hermitian_eigenvalues(rho.matrix()).unwrap();
        for (a, b) in ev.iter().zip([0.8, 0.2, 0.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn xyz_rejects_out_of_range() {
        assert!(XYZParams::new(1.1, 0.5, 0.5).is_err());
        assert!(XYZParams::new(0.5, -0.1, 0.5).is_err());
    }

    #[test]
    fn ewl_limits() {
        let a = c(FRAC_1_SQRT_2, 0.0);
        let pure = ewl_state(&EWLParams::new(1.0, a, Excitation::One).unwrap());
        assert!(
            pure.matrix()
                .max_abs_diff(bell_density(BellLabel::OnePlus).matrix())
                < 1e-15
        );
        let white = ewl_state(&EWLParams::new(0.0, a, Excitation::Two).unwrap());
        assert!(
            white
                .matrix()
                .max_abs_diff(&ComplexSquareMatrix::identity(4).scale_real(0.25))
                < 1e-15
        );
        assert!(EWLParams::new(0.5, c(0.9, 0.9), Excitation::One).is_err());
        assert!(EWLParams::new(1.5, a, Excitation::One).is_err());
    }

    #[test]
    fn maximally_mixed_marginals() {
        let half = ComplexSquareMatrix::identity(2).scale_real(0.5);
        let cases = [
            xyz_state(&XYZParams::new(1.0, 0.3, 1.0).unwrap()),
            xyz_state(&XYZParams::new(0.0, 0.7, 0.0).unwrap()),
            ewl_state(&EWLParams::new(0.6, c(0.0, FRAC_1_SQRT_2), Excitation::One).unwrap()),
            ewl_state(&EWLParams::new(0.91, c(FRAC_1_SQRT_2, 0.0), Excitation::Two).unwrap()),
        ];
        for rho in cases {
            for k in 0..2 {
                let m = rho.partial_trace(&[k]).unwrap();
                assert!(m.matrix().max_abs_diff(&half) < 1e-12);
            }
        }
    }
}
