#![no_main]

use entlab_core::PureState;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(psi) = serde_json::from_str::<PureState>(data) {
        let text = serde_json::to_string(&psi).unwrap();
        assert_eq!(psi, serde_json::from_str::<PureState>(&text).unwrap());
        if psi.dims().total() <= 64 {
            let rho = psi.density();
            assert!((rho.mat().trace().re - 1.0).abs() < 1e-8);
        }
    }
});
