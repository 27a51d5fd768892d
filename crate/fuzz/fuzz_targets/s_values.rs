#![no_main]

use libfuzzer_sys::fuzz_target;
use quasipos::cli::parse_s_values;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(values) = parse_s_values(text) {
            assert!(!values.is_empty() && values.iter().all(|v| v.is_finite()));
        }
    }
});
