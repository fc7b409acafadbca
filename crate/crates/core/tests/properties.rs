use std::f64::consts::PI;

use proptest::prelude::*;
use revival::linalg::pauli;
use revival::measures::{average_entanglement, hidden_entanglement, pure_concurrence};
use revival::noise::random_field::channel as field_channel;
use revival::noise::telegraph::telegraph_channel;
use revival::noise::{
    random_field_map, rtn_coherence, static_noise_channel, RTNParams, RandomFieldParams,
    StaticNoiseParams,
};
use revival::states::Ket2;
use revival::tripartite::{embed_initial, evolve_abe};
use revival::*;

const TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn qubit_unitary() -> impl Strategy<Value = ComplexSquareMatrix> {
    (0.0..PI, -PI..PI, -PI..PI).prop_map(|(theta, phi, lambda)| {
        let (s, co) = (theta / 2.0).sin_cos();
        ComplexSquareMatrix::from_rows(
            2,
            &[
                c(co, 0.0),
                -C64::from_polar(s, lambda),
                C64::from_polar(s, phi),
                C64::from_polar(co, phi + lambda),
            ],
        )
        .unwrap()
    })
}

fn ket() -> impl Strategy<Value = Ket2> {
    prop::array::uniform8(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            std::array::from_fn(|i| c(v[2 * i] / norm, v[2 * i + 1] / norm))
        })
}

fn density(dims: Vec<usize>) -> impl Strategy<Value = DensityOperator> {
    let d: usize = dims.iter().product();
    prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |v| {
        let g =
            ComplexSquareMatrix::from_fn(d, |i, j| c(v[2 * (i * d + j)], v[2 * (i * d + j) + 1]));
        let m = g.checked_mul(&g.adjoint()).unwrap();
        let tr = m.trace().re;
        DensityOperator::new(m.scale_real(1.0 / tr), dims.clone()).unwrap()
    })
}

fn bell_diagonal() -> impl Strategy<Value = DensityOperator> {
    prop::array::uniform4(0.0f64..1.0)
        .prop_filter("nonzero", |w| w.iter().sum::<f64>() > 1e-3)
        .prop_map(|w| {
            let total: f64 = w.iter().sum();
            let m = BellLabel::ALL
                .iter()
                .zip(w)
                .map(|(l, wi)| bell_density(*l).matrix().scale_real(wi / total))
                .reduce(|a, b| &a + &b)
                .unwrap();
            DensityOperator::qubits(m).unwrap()
        })
}

fn check_physical(rho: &DensityOperator) -> std::result::Result<(), TestCaseError> {
    prop_assert!((rho.matrix().trace().re - 1.0).abs() < TOL);
    prop_assert!(rho.matrix().hermitian_deviation() < TOL);
    prop_assert!(rho.eigenvalues().iter().all(|&e| e > -TOL));
    Ok(())
}

fn test_channels(t: f64) -> Vec<Box<dyn Channel>> {
    vec![
        Box::new(field_channel(&RandomFieldParams::new(1.0, 0.0).unwrap(), t, 32).unwrap()),
        Box::new(field_channel(&RandomFieldParams::new(1.0, 0.2).unwrap(), t, 32).unwrap()),
        Box::new(
            static_noise_channel(
                &StaticNoiseParams::static_noise(1.0, Some(2.0)).unwrap(),
                t,
                32,
            )
            .unwrap(),
        ),
        Box::new(
            telegraph_channel(rtn_coherence(&RTNParams::from_ratio(3.0).unwrap(), t)).unwrap(),
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn concurrence_is_local_unitary_invariant(rho in density(vec![2, 2]), ua in qubit_unitary(), ub in qubit_unitary()) {
        let moved = rho.conjugate_by(&tensor_product(&ua, &ub)).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&moved).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_unitary_invariant(rho in density(vec![2, 2]), ua in qubit_unitary(), ub in qubit_unitary()) {
        let cnot = ComplexSquareMatrix::from_real_rows(4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
        ]).unwrap();
        let u = cnot.checked_mul(&tensor_product(&ua, &ub)).unwrap();
        let moved = rho.conjugate_by(&u).unwrap();
        let (s0, s1) = (rho.entropy(LogBase::Natural), moved.entropy(LogBase::Natural));
        prop_assert!((s0 - s1).abs() < 1e-9);
    }

    #[test]
    fn partial_traces_compose(rho in density(vec![2, 2, 2])) {
        let ab = rho.partial_trace(&[0, 1]).unwrap();
        let be = rho.partial_trace(&[1, 2]).unwrap();
        let b_direct = rho.partial_trace(&[1]).unwrap();
        prop_assert!(ab.partial_trace(&[1]).unwrap().matrix().max_abs_diff(b_direct.matrix()) < 1e-12);
        prop_assert!(be.partial_trace(&[0]).unwrap().matrix().max_abs_diff(b_direct.matrix()) < 1e-12);
    }

    #[test]
    fn spectrum_sums_to_trace(rho in density(vec![2, 2])) {
        let ev = hermitian_eigenvalues(rho.matrix()).unwrap();
        prop_assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(ev.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn measures_stay_in_range(rho in density(vec![2, 2])) {
        let conc = concurrence(&rho).unwrap();
        let eof = entanglement_of_formation(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&conc));
        prop_assert!((0.0..=1.0).contains(&eof));
        prop_assert!(eof <= conc + 1e-12);
    }

    #[test]
    fn channels_are_trace_preserving_positive_and_unital(rho in density(vec![2, 2]), t in 0.0f64..20.0) {
        let white = DensityOperator::maximally_mixed(vec![2, 2]);
        for ch in test_channels(t) {
            check_physical(&ch.apply(&rho).unwrap())?;
            prop_assert!(ch.apply(&white).unwrap().matrix().max_abs_diff(white.matrix()) < 1e-12);
        }
    }

    #[test]
    fn channels_do_not_create_entanglement(rho in density(vec![2, 2]), t in 0.0f64..20.0) {
        // a local channel cannot raise concurrence
        let before = concurrence(&rho).unwrap();
        for ch in test_channels(t) {
            prop_assert!(concurrence(&ch.apply(&rho).unwrap()).unwrap() <= before + 1e-9);
        }
    }

    #[test]
    fn average_entanglement_is_conserved_and_dominates(psi in ket(), t in 0.0f64..20.0) {
        let e0 = entanglement_of_formation(&DensityOperator::pure(&psi, vec![2, 2]).unwrap()).unwrap();
        let ens = field_channel(&RandomFieldParams::new(1.0, 0.0).unwrap(), t, 32).unwrap().ensemble(&psi).unwrap();
        prop_assert!((average_entanglement(&ens) - e0).abs() < 1e-9);
        prop_assert!(hidden_entanglement(&ens).unwrap() >= -1e-12);
        for (_, member) in ens.members() {
            prop_assert!((pure_concurrence(member) - pure_concurrence(&psi)).abs() < 1e-9);
        }
    }

    #[test]
    fn sharp_field_is_periodic(rho in density(vec![2, 2]), rabi in 0.2f64..5.0, t in 0.0f64..10.0) {
        let p = RandomFieldParams::new(rabi, 0.0).unwrap();
        let a = random_field_map(&rho, &p, t).unwrap();
        let b = random_field_map(&rho, &p, t + 2.0 * PI / rabi).unwrap();
        prop_assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-9);
    }

    #[test]
    fn telegraph_coherence_is_bounded(g in 0.01f64..20.0, t in 0.0f64..200.0) {
        let q = rtn_coherence(&RTNParams::from_ratio(g).unwrap(), t);
        prop_assert!(q.is_finite() && q.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn information_decomposition_is_exact(rho in density(vec![2, 2]), t in 0.0f64..10.0, width in prop_oneof![Just(0.0), 0.05f64..0.3]) {
        let s0 = embed_initial(&rho).unwrap();
        let s = evolve_abe(&s0, &RandomFieldParams::new(1.0, width).unwrap(), t, 32).unwrap();
        let d = information_decomposition(s.state()).unwrap();
        prop_assert!(d.tripartite >= -1e-10);
        prop_assert!(d.residual.abs() < 1e-10);
        prop_assert!(s.two_qubit().matrix().max_abs_diff(
            field_channel(&RandomFieldParams::new(1.0, width).unwrap(), t, 32).unwrap().apply(&rho).unwrap().matrix()
        ) < 1e-8);
    }

    #[test]
    fn bell_diagonal_states_carry_no_local_information(rho in bell_diagonal(), t in 0.0f64..10.0) {
        let s = evolve_abe(&embed_initial(&rho).unwrap(), &RandomFieldParams::new(1.0, 0.0).unwrap(), t, 32).unwrap();
        prop_assert!(information_decomposition(s.state()).unwrap().local.abs() < 1e-10);
    }

    #[test]
    fn pauli_x_on_b_preserves_concurrence(rho in density(vec![2, 2])) {
        let moved = rho.conjugate_by(&tensor_product(&pauli::identity(), &pauli::x())).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&moved).unwrap()).abs() < 1e-9);
    }
}
