#![no_main]

use entlab_core::entropy::von_neumann_entropy;
use entlab_core::DensityMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(rho) = serde_json::from_str::<DensityMatrix>(data) else {
        return;
    };
    let text = serde_json::to_string(&rho).unwrap();
    assert_eq!(rho, serde_json::from_str::<DensityMatrix>(&text).unwrap());
    if rho.dim() <= 16 {
        let s = von_neumann_entropy(&rho).unwrap();
        assert!(s.is_finite() && s >= 0.0);
        for k in 0..rho.arity() {
            rho.marginal(&[k]).unwrap();
        }
    }
});
