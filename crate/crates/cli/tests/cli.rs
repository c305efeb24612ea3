use std::path::Path;
use std::process::{Command, Output};

fn mch_ist(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mch-ist"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_potential(dir: &Path, name: &str, f: impl Fn(f64) -> f64) {
    let n = 128;
    let mut s = String::from("# mch-potential v1\n");
    for i in 0..n {
        let x = -10.0 + 20.0 * i as f64 / (n - 1) as f64;
        s.push_str(&format!("{x:e},{:e}\n", f(x)));
    }
    std::fs::write(dir.join(name), s).unwrap();
}

const SMALL: [&str; 8] = ["--znodes", "64", "--zmax", "8", "--ynodes", "9", "--ymax", "4"];

fn args<'a>(head: &[&'a str]) -> Vec<&'a str> {
    head.iter().copied().chain(SMALL).collect()
}

#[test]
fn background_scatters_to_an_empty_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    write_potential(dir.path(), "flat.csv", |_| 0.0);
    let out = mch_ist(dir.path(), &args(&["scatter", "--input", "flat.csv"]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let record = std::fs::read_to_string(dir.path().join("out/flat.sd.json")).unwrap();
    assert!(record.contains("\"z\": []"));
    let report = std::fs::read_to_string(dir.path().join("out/flat.scatter.txt")).unwrap();
    assert!(report.contains("eigenvalues=0") && report.ends_with("status=pass\n"));
}

#[test]
fn background_round_trip_has_zero_error() {
    let dir = tempfile::tempdir().unwrap();
    write_potential(dir.path(), "flat.csv", |_| 0.0);
    let out = mch_ist(dir.path(), &args(&["roundtrip", "--input", "flat.csv"]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(dir.path().join("out/flat.roundtrip.txt")).unwrap();
    let row: Vec<f64> = table.lines().nth(1).unwrap().split_whitespace().map(|v| v.parse().unwrap()).collect();
    assert_eq!(&row[..5], &[0.0; 5]);
}

#[test]
fn malformed_input_exits_with_parse_code() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "# mch-potential v1\n0,0\nx,1\n").unwrap();
    let out = mch_ist(dir.path(), &["scatter", "--input", "bad.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = mch_ist(dir.path(), &["scatter", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(dir.path().join("run.toml"), "zmx = 1\n").unwrap();
    let out = mch_ist(dir.path(), &["scatter", "--config", "run.toml", "--input", "bad.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = mch_ist(dir.path(), &["scatter", "--input", "nowhere.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn failed_validation_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    write_potential(dir.path(), "wide.csv", |x| 0.1 * (-x * x / 50.0).exp());
    let out = mch_ist(dir.path(), &["validate", "--input", "wide.csv"]);
    assert_eq!(out.status.code(), Some(1));
    let out = mch_ist(dir.path(), &args(&["scatter", "--input", "wide.csv"]));
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("direct scattering"));
}

#[test]
fn outputs_do_not_depend_on_the_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    write_potential(dir.path(), "bump.csv", |x| 0.2 * (-x * x).exp());
    let run = |workers: &str, out_dir: &str| {
        let out = mch_ist(
            dir.path(),
            &[
                "roundtrip", "--input", "bump.csv", "--workers", workers, "--out", out_dir, "--ynodes", "9", "--ymax",
                "4",
            ],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.path().join(out_dir).join("bump.t0.profile.txt")).unwrap()
    };
    assert_eq!(run("1", "one"), run("3", "three"));
}

#[test]
fn evolve_then_invert_writes_time_stamped_files() {
    let dir = tempfile::tempdir().unwrap();
    write_potential(dir.path(), "flat.csv", |_| 0.0);
    assert!(mch_ist(dir.path(), &args(&["scatter", "--input", "flat.csv"])).status.success());
    let out = mch_ist(dir.path(), &args(&["evolve", "--input", "out/flat.sd.json", "--times", "0.5,1"]));
    assert!(out.status.success());
    assert!(dir.path().join("out/flat.t1.sd.json").exists());
    let out = mch_ist(dir.path(), &args(&["invert", "--input", "out/flat.t0.5.sd.json"]));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let profile = std::fs::read_to_string(dir.path().join("out/flat.t0.5.profile.txt")).unwrap();
    assert!(profile.starts_with("# mch-profile v1 t=0.5"));
    let out = mch_ist(dir.path(), &["validate", "--input", "out/flat.t0.5.profile.txt"]);
    assert!(out.status.success());
}
