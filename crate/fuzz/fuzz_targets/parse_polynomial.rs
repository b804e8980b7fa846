#![no_main]
use citor_core::algebra::{parse_polynomial, Rational, F32003};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let vars: Vec<String> = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
    let _ = parse_polynomial::<F32003>(text, &vars);
    let _ = parse_polynomial::<Rational>(text, &vars);
});
