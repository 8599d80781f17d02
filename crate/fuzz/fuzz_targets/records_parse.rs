//! Records CSV reading must be total over arbitrary bytes, and accepted
//! inputs must survive a write/read round trip.

#![no_main]

use entsim_core::measure::{read_records, write_records};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_records(data) {
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        let back = read_records(buf.as_slice()).expect("serialized records parse back");
        assert_eq!(back, records, "round trip changed the records");
    }
});
