#![no_main]

use libfuzzer_sys::fuzz_target;
use shuffle_blanket::config::{
    parse_f64_list, parse_format, parse_others, parse_pairs, parse_pi, parse_u64_list,
};

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else {
        return;
    };
    let k = usize::from(k % 8);
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let _ = parse_f64_list("eps", text);
    let _ = parse_u64_list("n", text);
    let _ = parse_pi(text, k);
    let _ = parse_pairs(text, k);
    let _ = parse_others(text, k);
    let _ = parse_format(text);
});
