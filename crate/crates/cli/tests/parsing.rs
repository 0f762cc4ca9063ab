use proptest::prelude::*;
use shuffle_blanket::config::{
    parse_config_text, parse_f64_list, parse_others, parse_pairs, parse_pi, OthersSpec, PiSpec,
    RawConfig, RunConfig,
};
use shuffle_blanket::table::num;

proptest! {
    #[test]
    fn formatted_numbers_parse_back_exactly(x in any::<f64>()) {
        let text = num(x);
        let back: f64 = if text == "inf" {
            f64::INFINITY
        } else if text == "-inf" {
            f64::NEG_INFINITY
        } else {
            text.parse().unwrap()
        };
        if x.is_nan() {
            prop_assert!(back.is_nan());
        } else {
            prop_assert_eq!(back, x);
        }
    }

    #[test]
    fn float_lists_round_trip(xs in prop::collection::vec(-1e6f64..1e6, 1..8)) {
        let text = xs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",");
        prop_assert_eq!(parse_f64_list("eps", &text).unwrap(), xs);
    }

    #[test]
    fn parsers_never_panic(s in "\\PC{0,40}") {
        let _ = parse_config_text(&s);
        let _ = parse_f64_list("eps", &s);
        let _ = parse_pi(&s, 3);
        let _ = parse_pairs(&s, 3);
        let _ = parse_others(&s, 3);
    }

    #[test]
    fn config_file_and_flags_agree(eps0 in 0.01f64..3.0, n in 1u64..100_000) {
        let text = format!("eps0 = {eps0:?}\nn = {n}\n");
        let from_file = RunConfig::from_raw(&parse_config_text(&text).unwrap()).unwrap();
        let mut raw = RawConfig::default();
        raw.set("eps0", num(eps0));
        raw.set("n", n.to_string());
        let from_flags = RunConfig::from_raw(&raw).unwrap();
        prop_assert_eq!(from_file.eps0, from_flags.eps0);
        prop_assert_eq!(from_file.n, from_flags.n);
    }
}

#[test]
fn spec_strings() {
    assert!(matches!(parse_pi("uniform", 4).unwrap(), PiSpec::Uniform));
    assert!(matches!(parse_others("all:2", 3).unwrap(), OthersSpec::Constant(2)));
    assert!(parse_others("all:3", 3).is_err());
    let pairs = parse_pairs("0,1;2,0", 3).unwrap();
    assert_eq!((pairs[1].x0, pairs[1].x1), (2, 0));
    assert!(parse_pairs("1,1", 3).is_err());
}
