#![no_main]

use libfuzzer_sys::fuzz_target;
use quasipos::triple::Triple;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = Triple::from_json(text) {
        // accepted documents must survive a round trip
        let back = Triple::from_json(&t.to_json()).expect("re-parse");
        assert_eq!(back.to_document(), t.to_document());
    }
});
