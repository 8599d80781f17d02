//! Config parsing must return a diagnostic, never panic, on any input.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = entsim_core::config::parse_config(text);
    }
});
