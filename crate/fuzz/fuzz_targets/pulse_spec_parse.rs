//! Pulse spec parsing must be total, and accepted specs must round-trip
//! through their textual form.

#![no_main]

use entsim_core::pulse::PulseSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = PulseSpec::parse(text) {
            let back = PulseSpec::parse(&spec.format()).expect("formatted spec parses back");
            assert_eq!(back.transition, spec.transition);
            assert_eq!(back.calibration_n, spec.calibration_n);
        }
    }
});
