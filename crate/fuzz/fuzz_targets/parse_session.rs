#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(session) = citor_cli::parse_session(text) {
        // printing is canonical: a second round trip is a fixed point
        let printed = session.to_script();
        let again = citor_cli::parse_session(&printed).expect("printed session parses");
        assert_eq!(again.to_script(), printed);
    }
});
