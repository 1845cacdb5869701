use std::path::PathBuf;
use std::process::{Command, Output};

use discrim::channel::{phi0, phi1};
use discrim::io::{read_channel_file, ChannelData};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn discrim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discrim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_file(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("discrim-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn pair(stem: &str) -> [String; 2] {
    [fixture(&format!("{stem}_m0.channel")), fixture(&format!("{stem}_m1.channel"))]
}

#[test]
fn fixtures_hold_the_separating_pair() {
    for (file, want) in [("phi0.channel", phi0()), ("phi1.channel", phi1())] {
        match read_channel_file(fixture(file)).unwrap().channel {
            ChannelData::Kraus(c) => assert_eq!(c, want),
            ChannelData::Stochastic(_) => panic!("{file} is not a Kraus file"),
        }
    }
}

#[test]
fn diamond_single_use() {
    let o = discrim(&["diamond", "--a", &fixture("phi0.channel"), "--b", &fixture("phi1.channel")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("value: 1.707107"), "{out}");
    assert!(out.contains("success: 0.926777"), "{out}");
}

#[test]
fn diamond_two_copies() {
    let (a, b) = (fixture("phi0.channel"), fixture("phi1.channel"));
    let o = discrim(&["diamond", "--a", &a, "--b", &b, "--copies", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("copies: 2") && out.contains("success: 0.977089"), "{out}");
}

#[test]
fn identical_channels_are_at_distance_zero() {
    let a = fixture("phi0.channel");
    let o = discrim(&["diamond", "--a", &a, "--b", &a]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value: 0.000000"), "{}", stdout(&o));
}

#[test]
fn three_copies_exceed_capacity() {
    let (a, b) = (fixture("phi0.channel"), fixture("phi1.channel"));
    let o = discrim(&["diamond", "--a", &a, "--b", &b, "--copies", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("capacity"), "{}", stderr(&o));
}

#[test]
fn unreachable_gap_reports_best_bounds() {
    let (a, b) = (fixture("phi0.channel"), fixture("phi1.channel"));
    let o = discrim(&["diamond", "--a", &a, "--b", &b, "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("value: 1.707107") && out.contains("dual bound: 1.707107"), "{out}");
}

#[test]
fn bad_inputs_exit_with_failure() {
    let kraus = fixture("phi0.channel");
    let stochastic = fixture("example2_m0.channel");
    let doubled = temp_file(
        "doubled.channel",
        r#"{"name": "doubled", "kind": "kraus", "dim_in": 1, "dim_out": 1, "kraus": [[[[2.0, 0.0]]]]}"#,
    );
    let broken = temp_file("broken.channel", "{\n  \"name\": \"x\",\n  \"kind\": \"kraus\",\n  oops\n}");
    let cases: [(Vec<&str>, &str); 5] = [
        (vec!["diamond", "--a", &kraus, "--b", &stochastic], "expected Kraus"),
        (vec!["diamond", "--a", &kraus, "--b", &kraus, "--tol", "0"], "tolerance"),
        (vec!["diamond", "--a", &kraus, "--b", "/nonexistent/file"], "error"),
        (vec!["diamond", "--a", &doubled, "--b", &doubled], "completeness"),
        (vec!["diamond", "--a", &broken, "--b", &broken], "line 4"),
    ];
    for (args, needle) in cases {
        let o = discrim(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(stderr(&o).contains(needle), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn classical_first_example_is_exact() {
    let [a, b] = pair("example1");
    let o = discrim(&["classical", "--a", &a, "--b", &b, "--mode", "one-shot"]);
    assert_eq!(stdout(&o), "value: 0.777778 (7/9)\ninput: 2\n");
    let o = discrim(&["classical", "--a", &a, "--b", &b, "--mode", "nonadaptive"]);
    assert!(stdout(&o).starts_with("value: 0.839506 (68/81)\n"), "{}", stdout(&o));
    let o = discrim(&["classical", "--a", &a, "--b", &b, "--mode", "adaptive"]);
    let out = stdout(&o);
    assert!(out.starts_with("value: 0.858025 (139/162)\npolicy: k=2, f=(2,1)\n"), "{out}");
}

#[test]
fn classical_decimal_examples() {
    let [a, b] = pair("example2");
    let o = discrim(&["classical", "--a", &a, "--b", &b, "--mode", "one-shot"]);
    assert_eq!(stdout(&o), "value: 0.855000\ninput: 1\n");
    let o = discrim(&["classical", "--a", &a, "--b", &b, "--mode", "nonadaptive", "--n", "2"]);
    assert_eq!(stdout(&o), "value: 0.900000\ninputs: (2,3)\n");
    let [a, b] = pair("example3");
    let o = discrim(&["classical", "--a", &a, "--b", &b, "--mode", "adaptive"]);
    let out = stdout(&o);
    assert!(out.starts_with("value: 0.953600\npolicy: k=4, f=(1,2,3)\n"), "{out}");
}

#[test]
fn classical_identical_channels_are_a_coin_flip() {
    let a = fixture("example3_m0.channel");
    let o = discrim(&["classical", "--a", &a, "--b", &a, "--mode", "one-shot"]);
    assert!(stdout(&o).starts_with("value: 0.500000\n"), "{}", stdout(&o));
}

#[test]
fn classical_enumeration_guard() {
    let [a, b] = pair("example2");
    let o = discrim(&["classical", "--a", &a, "--b", &b, "--mode", "nonadaptive", "--n", "20"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn classical_output_is_deterministic() {
    let [a, b] = pair("example3");
    let args = ["classical", "--a", &a, "--b", &b, "--mode", "adaptive", "--n", "3"];
    let first = discrim(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&discrim(&args)));
}

#[test]
fn simulate_identifies_each_channel() {
    for second in ["0", "1", "+", "mixed"] {
        for (file, want) in [("phi0.channel", "0: 1.000000, 1: 0.000000\n"), ("phi1.channel", "0: 0.000000, 1: 1.000000\n")] {
            let o = discrim(&["simulate", "--channel", &fixture(file), "--second-qubit", second]);
            assert_eq!(stdout(&o), want, "{file} with {second}");
        }
    }
}

#[test]
fn verify_paper_passes() {
    let o = discrim(&["verify-paper"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("overall: pass"), "{out}");
}
