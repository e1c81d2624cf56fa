//! Property checks over seeded random states.

use entlab_core::entropy::*;
use entlab_core::matcore::*;
use entlab_core::states::*;
use proptest::prelude::*;

fn dims(v: &[usize]) -> SubsystemDims {
    SubsystemDims::new(v.to_vec()).unwrap()
}

fn arb_dims3() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs_and_preserves_trace(d in 1usize..=8, rank in 1usize..=8, seed: u64) {
        let rho = random_density(&SubsystemDims::single(d).unwrap(), rank.min(d), seed).unwrap();
        let spec = eig_hermitian(rho.mat()).unwrap();
        prop_assert!(spec.reconstruct().distance(rho.mat()) < 1e-10);
        let sum: f64 = spec.eigenvalues.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-10);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }

    #[test]
    fn tensor_is_associative(a in 1usize..=3, b in 1usize..=3, c in 1usize..=3, seed: u64) {
        let x = haar_unitary(a, seed).unwrap();
        let y = haar_unitary(b, seed ^ 1).unwrap();
        let z = haar_unitary(c, seed ^ 2).unwrap();
        let left = tensor(&tensor(&x, &y).unwrap(), &z).unwrap();
        let right = tensor(&x, &tensor(&y, &z).unwrap()).unwrap();
        prop_assert!(left.distance(&right) < 1e-12);
    }

    #[test]
    fn haar_unitaries_are_unitary(n in 1usize..=16, seed: u64) {
        prop_assert!(haar_unitary(n, seed).unwrap().unitarity_defect() < 1e-10);
    }

    #[test]
    fn partial_trace_is_a_state(d in arb_dims3(), rank in 1usize..=4, seed: u64, traced in 0usize..3) {
        let ds = dims(&d);
        let rho = random_density(&ds, rank.min(ds.total()), seed).unwrap();
        let red = partial_trace(&rho, &[traced]).unwrap();
        prop_assert!((red.mat().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(red.eigenvalues().unwrap()[0] > -1e-10);
    }

    #[test]
    fn entropy_inequalities_hold(d in arb_dims3(), rank in 1usize..=8, seed: u64) {
        let ds = dims(&d);
        let rho = random_density(&ds, rank.min(ds.total()), seed).unwrap();
        let e = TripartiteEntropies::of(&rho).unwrap();
        prop_assert!(ssa_report(&e).satisfied);
        prop_assert!(extended_ssa_report(&e).satisfied);
        prop_assert!(weak_monotonicity_report(&e).satisfied);
        prop_assert!(triangle_report(&e.bipartite()).satisfied);
        for r in aux_reports(&e) {
            prop_assert!(r.satisfied, "{} slack {}", r.name, r.slack);
        }
    }

    #[test]
    fn bound_ordering(d1 in 1usize..=3, d2 in 1usize..=3, rank in 1usize..=9, seed: u64) {
        let ds = dims(&[d1, d2]);
        let rho = random_density(&ds, rank.min(ds.total()), seed).unwrap();
        let e = BipartiteEntropies::of(&rho).unwrap();
        prop_assert!(e.lower_bound() >= e.averaged_bound() - 1e-12);
        prop_assert!(e.lower_bound() <= e.local_bound() + 1e-8);
    }

    #[test]
    fn purification_round_trip(d in 1usize..=5, rank in 1usize..=5, seed: u64) {
        let rho = random_density(&SubsystemDims::single(d).unwrap(), rank.min(d), seed).unwrap();
        let psi = purify(&rho).unwrap();
        let back = partial_trace(&psi.density(), &[1]).unwrap();
        prop_assert!(back.mat().distance(rho.mat()) < 1e-10);
        let m = reduced_spectra_match(&psi).unwrap();
        prop_assert!(m.matches && m.max_gap < 1e-9);
    }

    #[test]
    fn permutation_preserves_entropy(d in arb_dims3(), seed: u64) {
        let ds = dims(&d);
        let rho = random_density(&ds, 2.min(ds.total()), seed).unwrap();
        let p = permute_subsystems(&rho, &[2, 0, 1]).unwrap();
        let a = von_neumann_entropy(&rho.marginal(&[0, 2]).unwrap()).unwrap();
        let b = von_neumann_entropy(&p.marginal(&[0, 1]).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }
}
