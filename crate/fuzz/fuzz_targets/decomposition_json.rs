#![no_main]

use entlab_core::measures::Decomposition;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(d) = serde_json::from_str::<Decomposition>(data) {
        assert_eq!(d.weights().len(), d.states().len());
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(d, serde_json::from_str::<Decomposition>(&text).unwrap());
    }
});
