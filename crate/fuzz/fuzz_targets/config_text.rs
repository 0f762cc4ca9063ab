#![no_main]

use libfuzzer_sys::fuzz_target;
use shuffle_blanket::config::{parse_config_text, RunConfig};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(raw) = parse_config_text(text) {
            let _ = RunConfig::from_raw(&raw);
        }
    }
});
