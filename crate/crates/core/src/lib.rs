#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod measures;
pub mod noise;
pub mod quadrature;
pub mod scenario;
pub mod selftest;
pub mod series;
pub mod states;
pub mod tripartite;

pub use error::{Error, Result};
pub use linalg::{
    hermitian_eigenvalues, partial_trace, tensor_product, von_neumann_entropy, ComplexSquareMatrix,
    DensityOperator, LogBase, C64,
};
pub use measures::{
    average_entanglement, concurrence, entanglement_of_formation, hidden_entanglement,
    information_decomposition, mutual_information, tripartite_correlations,
    InformationDecomposition, WeightedPureEnsemble,
};
pub use noise::{Channel, RandomUnitaryChannel};
pub use states::{
    bell_density, bell_state, ewl_state, xyz_state, BellLabel, EWLParams, Excitation, XYZParams,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/tripartite.md")]
    mod tripartite {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
}
