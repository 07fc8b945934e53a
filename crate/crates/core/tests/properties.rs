//! Randomized invariants of the entropy calculus.

use entro::classical::{
    equilibration_demo, EquilibrationParams, PermutationRule, ProbTable, Variable,
};
use entro::quantum::sampling::{
    random_density_matrix, random_diagonal_state, random_pure_state, random_unitary,
};
use entro::quantum::{CMatrix, SubsystemLayout};
use entro::quantum_entropy::{
    conditional_entropy_q, marginal_entropy, mutual_entropy_q, venn_quantum, von_neumann_entropy,
    Cut,
};
use entro::LogBase;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn table_strategy() -> impl Strategy<Value = ProbTable> {
    (1usize..=3, 1usize..=3, 1usize..=3)
        .prop_flat_map(|(a, b, c)| {
            (
                Just((a, b, c)),
                prop::collection::vec(0.0f64..1.0, a * b * c),
            )
        })
        .prop_filter_map("all-zero weights", |((a, b, c), w)| {
            let total: f64 = w.iter().sum();
            if total < 1e-6 {
                return None;
            }
            let w = w.into_iter().map(|x| x / total).collect();
            ProbTable::new(
                vec![
                    Variable::new("X", a),
                    Variable::new("Y", b),
                    Variable::new("Z", c),
                ],
                w,
            )
            .ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_rule_and_symmetry(t in table_strategy()) {
        let b = LogBase::Bits;
        let hxy = t.entropy(&["X", "Y"], b).unwrap();
        let hy = t.entropy(&["Y"], b).unwrap();
        let hx_y = t.conditional_entropy(&["X"], &["Y"], b).unwrap();
        prop_assert!((hxy - hy - hx_y).abs() < 1e-12);
        prop_assert!(hx_y >= -1e-12);
        let ixy = t.mutual_entropy(&["X"], &["Y"], b).unwrap();
        let iyx = t.mutual_entropy(&["Y"], &["X"], b).unwrap();
        prop_assert!((ixy - iyx).abs() < 1e-12);
        prop_assert!(ixy >= -1e-12);
    }

    #[test]
    fn venn_cells_sum_to_joint(t in table_strategy()) {
        let d = t.venn(&[&["X"], &["Y"], &["Z"]], LogBase::Nats).unwrap();
        let sum: f64 = d.cells().iter().sum();
        prop_assert!((sum - t.joint_entropy(LogBase::Nats)).abs() < 1e-12);
        let h_x = t.entropy(&["X"], LogBase::Nats).unwrap();
        prop_assert!((d.marginal(0) - h_x).abs() < 1e-12);
    }

    #[test]
    fn base_conversion(t in table_strategy()) {
        let bits = t.joint_entropy(LogBase::Bits);
        let nats = t.joint_entropy(LogBase::Nats);
        prop_assert!((bits * std::f64::consts::LN_2 - nats).abs() < 1e-12);
    }

    #[test]
    fn partial_traces_compose(seed in any::<u64>()) {
        let layout = SubsystemLayout::of(&[("A", 2), ("B", 3), ("C", 2)]).unwrap();
        let rho = random_density_matrix(layout, &mut rng(seed));
        let direct = rho.partial_trace(&["A"]).unwrap();
        let stepwise = rho.partial_trace(&["A", "B"]).unwrap().partial_trace(&["A"]).unwrap();
        prop_assert!(direct.matrix().max_abs_diff(stepwise.matrix()) < 1e-14);
        let tr = rho.partial_trace(&["B", "C"]).unwrap().matrix().trace();
        prop_assert!((tr.re - 1.0).abs() < 1e-12 && tr.im.abs() < 1e-12);
    }

    #[test]
    fn purification_round_trip(seed in any::<u64>(), dim in 2usize..=4) {
        let rho = random_density_matrix(SubsystemLayout::of(&[("S", dim)]).unwrap(), &mut rng(seed));
        let psi = rho.purify("R").unwrap();
        let back = psi.density().partial_trace(&["S"]).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-10);
        let schmidt = psi.schmidt(&["S"]).unwrap();
        let s_schmidt: f64 = schmidt.coefficients().iter().map(|c| c * c).filter(|p| *p > 0.0).map(|p| -p * p.log2()).sum();
        prop_assert!((s_schmidt - von_neumann_entropy(&rho, LogBase::Bits).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn unitary_preserves_spectrum(seed in any::<u64>(), dim in 2usize..=8) {
        let mut r = rng(seed);
        let rho = random_density_matrix(SubsystemLayout::of(&[("S", dim)]).unwrap(), &mut r);
        let u = random_unitary(dim, &mut r);
        prop_assert!(u.unitarity_defect() < 1e-12);
        let a = rho.eigenvalues().unwrap();
        let b = rho.evolve(&u).unwrap().eigenvalues().unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn local_unitaries_leave_diagram_unchanged(seed in any::<u64>()) {
        let mut r = rng(seed);
        let layout = SubsystemLayout::of(&[("A", 2), ("B", 2), ("C", 2)]).unwrap();
        let psi = random_pure_state(layout, &mut r);
        let moved = psi
            .evolve_local(&random_unitary(2, &mut r), &["A"]).unwrap()
            .evolve_local(&random_unitary(4, &mut r), &["B", "C"]).unwrap();
        let parties: [&[&str]; 2] = [&["A"], &["B"]];
        let d0 = venn_quantum(&psi.density(), &parties, LogBase::Bits).unwrap();
        let d1 = venn_quantum(&moved.density(), &parties, LogBase::Bits).unwrap();
        // Only the A-local and BC-local parts move; S(A) and S(BC) are fixed.
        prop_assert!((d0.marginal(0) - d1.marginal(0)).abs() < 1e-9);
        let sbc0 = marginal_entropy(&psi.density(), &["B", "C"], LogBase::Bits).unwrap();
        let sbc1 = marginal_entropy(&moved.density(), &["B", "C"], LogBase::Bits).unwrap();
        prop_assert!((sbc0 - sbc1).abs() < 1e-9);
    }

    #[test]
    fn quantum_identities(seed in any::<u64>()) {
        let layout = SubsystemLayout::of(&[("A", 2), ("B", 3)]).unwrap();
        let rho = random_density_matrix(layout, &mut rng(seed));
        let b = LogBase::Bits;
        let (sa, sb, sab) = (
            marginal_entropy(&rho, &["A"], b).unwrap(),
            marginal_entropy(&rho, &["B"], b).unwrap(),
            von_neumann_entropy(&rho, b).unwrap(),
        );
        // Araki–Lieb and subadditivity.
        prop_assert!(sab >= (sa - sb).abs() - 1e-9);
        prop_assert!(sab <= sa + sb + 1e-9);
        let cut = Cut::new(&["A"], &["B"]);
        prop_assert!((conditional_entropy_q(&rho, &cut, b).unwrap() - (sab - sb)).abs() < 1e-10);
        let i_ab = mutual_entropy_q(&rho, &cut, b).unwrap();
        let i_ba = mutual_entropy_q(&rho, &Cut::new(&["B"], &["A"]), b).unwrap();
        prop_assert!((i_ab - i_ba).abs() < 1e-10);
    }

    #[test]
    fn diagonal_states_have_nonnegative_conditionals(seed in any::<u64>()) {
        let layout = SubsystemLayout::of(&[("A", 3), ("B", 2)]).unwrap();
        let rho = random_diagonal_state(layout, &mut rng(seed));
        let h = conditional_entropy_q(&rho, &Cut::new(&["A"], &["B"]), LogBase::Bits).unwrap();
        prop_assert!(h >= -1e-12);
    }

    #[test]
    fn random_permutations_conserve_joint_entropy(seed in any::<u64>(), n in 1usize..=3) {
        let cells = 4usize;
        let mut image: Vec<usize> = (0..cells.pow(n as u32)).collect();
        image.shuffle(&mut rng(seed));
        let rule = PermutationRule::new(image).unwrap();
        let params = EquilibrationParams { particles: n, initial_cells: 2, total_cells: cells, steps: 20 };
        let pts = equilibration_demo(params, &rule, LogBase::Bits).unwrap();
        for p in &pts {
            prop_assert!((p.joint - n as f64).abs() < 1e-12);
            prop_assert!(p.correlation >= -1e-12);
            prop_assert!((p.marginal_sum - p.joint - p.correlation).abs() < 1e-12);
        }
    }
}

#[test]
fn identity_is_unitary() {
    assert_eq!(CMatrix::identity(5).unitarity_defect(), 0.0);
}
