use entlab_core::entropy::*;
use entlab_core::extremal::*;
use entlab_core::measures::*;
use entlab_core::states::*;
use entlab_core::Error;

fn cfg(restarts: usize, budget: usize) -> EstimatorConfig {
    EstimatorConfig { restarts, budget, ..Default::default() }
}

fn separable(seed: u64) -> SeparableSpec {
    let one = SubsystemDims::single(2).unwrap();
    let f = |s| random_density(&one, 2, s).unwrap();
    SeparableSpec::new(vec![0.3, 0.7], vec![(f(seed), f(seed + 1)), (f(seed + 2), f(seed + 3))]).unwrap()
}

#[test]
fn ef_is_monotone_in_restarts() {
    let rho = random_density(&SubsystemDims::new(vec![2, 2]).unwrap(), 2, 5).unwrap();
    let mut prev = f64::INFINITY;
    for restarts in [1, 2, 4, 8] {
        let v = estimate_ef_upper(&rho, &cfg(restarts, 300)).unwrap().value;
        assert!(v <= prev + 1e-12, "{restarts}: {v} > {prev}");
        prev = v;
    }
}

#[test]
fn larger_ensembles_do_not_regress() {
    let rho = random_density(&SubsystemDims::new(vec![2, 2]).unwrap(), 2, 9).unwrap();
    let base = estimate_ef_upper(&rho, &EstimatorConfig { ensemble_size: Some(2), ..cfg(4, 500) }).unwrap();
    let wide = estimate_ef_upper(&rho, &EstimatorConfig { ensemble_size: Some(4), ..cfg(4, 500) }).unwrap();
    assert!(wide.value <= base.value + 1e-3);
}

#[test]
fn ef_certificate_replays() {
    let rho = random_density(&SubsystemDims::new(vec![2, 3]).unwrap(), 3, 1).unwrap();
    let est = estimate_ef_upper(&rho, &cfg(2, 400)).unwrap();
    match est.certificate.as_ref().unwrap() {
        Certificate::Decomposition(d) => {
            assert!((decomposition_cost(d).unwrap() - est.value).abs() < 1e-9);
        }
        other => panic!("unexpected certificate {other:?}"),
    }
}

#[test]
fn esq_certificate_replays() {
    let rho = random_density(&SubsystemDims::new(vec![2, 2]).unwrap(), 2, 3).unwrap();
    let est = estimate_esq_upper(&rho, &EstimatorConfig { ancilla_dim: Some(2), ..cfg(2, 300) }).unwrap();
    let replay = match est.certificate.as_ref().unwrap() {
        Certificate::Stinespring { ancilla_dim, env_dim, isometry } => {
            let ext = extension_from_stinespring(&rho, *ancilla_dim, *env_dim, isometry).unwrap();
            0.5 * cmi(&ext).unwrap()
        }
        Certificate::Decomposition(d) => {
            0.5 * cmi(&canonical_extension_pure(d.weights(), d.states()).unwrap()).unwrap()
        }
    };
    assert!((replay - est.value).abs() < 1e-9);
}

#[test]
fn separable_states_have_small_estimates() {
    for seed in [0, 10, 20] {
        let sep = separable(seed);
        let rho = separable_mixture(&sep).unwrap();
        assert!(estimate_ef_upper(&rho, &cfg(8, 2000)).unwrap().value <= 1e-3);
        let ext = separable_equality_extension(&sep).unwrap();
        assert!(cmi(&ext).unwrap() <= 1e-7);
    }
}

#[test]
fn sandwich_orders_estimates() {
    let rho = random_density(&SubsystemDims::new(vec![2, 2]).unwrap(), 2, 12).unwrap();
    let rep = entanglement_bounds(&rho, &EstimatorConfig { ancilla_dim: Some(2), ..cfg(2, 400) }).unwrap();
    assert!(rep.lower <= rep.esq_upper.value + rep.tol);
    assert!(rep.esq_upper.value <= rep.ef_upper.value + rep.tol);
    assert!(rep.ef_upper.value <= rep.upper_local + rep.tol);
}

#[test]
fn same_seed_same_result() {
    let rho = random_density(&SubsystemDims::new(vec![2, 2]).unwrap(), 3, 4).unwrap();
    let c = EstimatorConfig { seed: 17, ..cfg(3, 300) };
    let a = serde_json::to_string(&estimate_ef_upper(&rho, &c).unwrap()).unwrap();
    let b = serde_json::to_string(&estimate_ef_upper(&rho, &c).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn invalid_configurations_are_rejected() {
    let rho = random_density(&SubsystemDims::new(vec![2, 2]).unwrap(), 3, 4).unwrap();
    let small = EstimatorConfig { ensemble_size: Some(2), ..cfg(1, 10) };
    assert!(matches!(estimate_ef_upper(&rho, &small), Err(Error::BadRank { .. })));
    assert!(matches!(estimate_ef_upper(&rho, &cfg(0, 10)), Err(Error::InvalidSpec(_))));
    let tri = random_density(&SubsystemDims::new(vec![2, 2, 2]).unwrap(), 2, 1).unwrap();
    assert!(matches!(estimate_ef_upper(&tri, &cfg(1, 10)), Err(Error::BadArity { .. })));
}

#[test]
fn iden_requires_two_terms() {
    let spec = SaturatingSpec::new(vec![1.0], DensityMatrix::diagonal(&[0.5, 0.5]).unwrap()).unwrap();
    assert!(matches!(verify_iden(&spec, &cfg(1, 10)), Err(Error::InvalidSpec(_))));
}
