#![no_main]

use libfuzzer_sys::fuzz_target;
use shuffle_blanket::config::{RawConfig, RunConfig, CONFIG_KEYS};

// Input is newline-separated `key=value` pairs, as if given on the command line.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut raw = RawConfig::default();
    for line in text.lines() {
        if let Some((key, value)) = line.split_once('=') {
            if CONFIG_KEYS.contains(&key) {
                raw.set(key, value);
            }
        }
    }
    if let Ok(config) = RunConfig::from_raw(&raw) {
        for &eps0 in &config.eps0 {
            for &n in &config.n {
                assert!(config.params_for(eps0, n).is_ok());
            }
        }
    }
});
