#![no_main]

use libfuzzer_sys::fuzz_target;
use quasipos::algebra::FieldTag;
use quasipos::cli::parse_matrix_arg;

fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else { return };
    let field = [FieldTag::Real, FieldTag::Complex, FieldTag::Quaternion][usize::from(head % 3)];
    let n = usize::from(head / 3 % 5) + 1;
    if let Ok(text) = std::str::from_utf8(rest) {
        if let Ok(a) = parse_matrix_arg(text, field, n) {
            assert_eq!(a.size(), n);
        }
    }
});
