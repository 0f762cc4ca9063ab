use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shuffle-blanket"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shuffle-blanket-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn kappas_csv_uses_inf_sentinel() {
    let o = run(&["kappas", "--eps0", "0.7", "--n", "100", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "kappa4").unwrap();
    for line in lines {
        assert_eq!(line.split(',').nth(col), Some("inf"));
    }
}

#[test]
fn bound_csv_keeps_full_precision() {
    let o = run(&["bound", "--eps0", "0.5", "--n", "100", "--eps", "1.0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<_> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "Case2");
    let ln_delta: f64 = row[2].parse().unwrap();
    assert!((ln_delta - -20.82395647431341).abs() < 1e-12);
    let mantissa = row[2].trim_start_matches('-').split('e').next().unwrap();
    assert!(mantissa.chars().filter(char::is_ascii_digit).count() >= 15);
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["bound", "--eps0", "-1", "--n", "10", "--eps", "1"][..],
        &["bound", "--n", "10", "--eps", "1"],
        &["kappas", "--eps0", "0.5", "--n", "10", "--k", "3", "--pi", "0.2,0.2,0.2"],
        &["oracle", "--eps0", "0.5", "--n", "100", "--eps", "1"],
        &["case", "--eps0", "0.5", "--n", "10", "--eps", "1", "--format", "xml"],
        &["bound", "--eps0", "0.5", "--n", "10", "--eps", "1", "--config", "/nonexistent/x.toml"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn bad_epsilon_becomes_error_row() {
    let o = run(&["bound", "--eps0", "0.5", "--n", "10", "--eps", "1,-1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(2).unwrap().contains("error"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn flags_override_config_file() {
    let cfg = scratch("override.toml");
    fs::write(&cfg, "eps0 = 0.5\nn = 1000\neps = [1.0]\nformat = \"csv\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&run(&["bound", "--config", cfg]));
    let overridden = stdout(&run(&["bound", "--config", cfg, "--n", "100"]));
    let direct = stdout(&run(&["bound", "--eps0", "0.5", "--n", "100", "--eps", "1", "--format", "csv"]));
    assert_ne!(from_file, overridden);
    assert_eq!(overridden, direct);
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("sweep.csv");
    let p = path.to_str().unwrap();
    let o = run(&["sweep", "--eps0", "0.1,0.5", "--n", "10,20", "--eps", "0.5", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("eps0,n,k,eps,"));
}

#[test]
fn seeded_oracle_output_is_byte_identical() {
    let args = [
        "oracle", "--eps0", "0.5", "--n", "8", "--eps", "0.2", "--samples", "20000", "--seed", "11",
        "--format", "csv",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn regions_text_report() {
    let o = run(&["regions", "--eps0", "0.5", "--n", "100", "--eps", "1,3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value = |key: &str| {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(key))
            .and_then(|l| l.split_whitespace().nth(1))
            .unwrap()
            .to_string()
    };
    assert_eq!(value("S1"), "empty");
    assert_eq!(value("thm3a"), "false");
    assert_eq!(value("thm3b"), "false");
}

#[test]
fn check_passes() {
    let o = run(&["check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count(), 9);
}
