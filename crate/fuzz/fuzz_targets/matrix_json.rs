#![no_main]

use entlab_core::ComplexMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(m) = serde_json::from_str::<ComplexMatrix>(data) {
        // Accepted matrices survive a round trip unchanged.
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
    }
});
