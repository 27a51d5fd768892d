#![no_main]

use libfuzzer_sys::fuzz_target;
use quasipos::certify::CertReport;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = CertReport::from_json(text) {
        let again = CertReport::from_json(&r.to_json()).expect("re-parse");
        assert_eq!(again.verdict, r.verdict);
    }
});
