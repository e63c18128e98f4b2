use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use phasecrt::number_theory::make_split;
use phasecrt::phase_space::{momentum_state, StateVector};
use phasecrt::representations::build_pls;
use phasecrt::statefile::{StateFile, StateMeta};
use rand::{Rng, SeedableRng};

fn phasecrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasecrt"))
        .args(args)
        .env_remove("PHASECRT_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_state(dir: &Path, name: &str, v: &StateVector) -> String {
    let path = dir.join(name);
    std::fs::write(&path, StateFile::from_state(v, StateMeta::default()).to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn factor_and_splits() {
    let o = phasecrt(&["factor", "15"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "15 = 3·5, chi = 2\n");
    let o = phasecrt(&["splits", "--M", "15"]);
    assert_eq!(stdout(&o), "M1=3 M2=5 L1=5 L2=3 N1=2 N2=2\n");
    assert_eq!(phasecrt(&["factor", "abc"]).status.code(), Some(2));
    assert_eq!(phasecrt(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn crt_both_directions() {
    assert_eq!(stdout(&phasecrt(&["crt", "15", "3", "7"])), "q=7 -> (q1=1, q2=2)\n");
    assert_eq!(
        stdout(&phasecrt(&["crt", "--M", "15", "--M1", "3", "1", "2"])),
        "(q1=1, q2=2) -> q=7\n"
    );
    assert_eq!(phasecrt(&["crt", "15", "3", "15"]).status.code(), Some(2));
    assert_eq!(phasecrt(&["crt", "15", "3"]).status.code(), Some(2));
}

#[test]
fn basis_writes_bundle_and_rejects_non_coprime() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c2.json");
    let o = phasecrt(&["basis", "15", "3", "C2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("15 states"));
    let bundle: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(bundle["states"].as_array().unwrap().len(), 15);
    assert_eq!(bundle["states"][0]["amplitudes"].as_array().unwrap().len(), 15);

    let o = phasecrt(&["basis", "--M", "12", "--M1", "2", "--kind", "c1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("coprime"));
    assert_eq!(phasecrt(&["basis", "12", "2", "epos"]).status.code(), Some(0));
    assert_eq!(phasecrt(&["basis", "12", "2", "xyz"]).status.code(), Some(2));
}

#[test]
fn map_formats() {
    let o = phasecrt(&["map", "15", "3", "0", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[14], " 0 #..#..#..#..#..");
    assert_eq!(rows[..15].iter().map(|r| r.matches('#').count()).sum::<usize>(), 15);
    assert!(rows[15].contains("2pi/15"));

    let csv = stdout(&phasecrt(&["map", "15", "3", "1", "2", "--format", "csv"]));
    assert_eq!(csv.lines().next(), Some("q,k,magnitude"));
    assert_eq!(csv.lines().count(), 1 + 225);

    let json = stdout(&phasecrt(&["map", "--M", "6", "--M1", "2", "--q01", "1", "--k02", "2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["support"].as_array().unwrap().len(), 6);

    assert_eq!(phasecrt(&["map", "15", "3", "3", "0"]).status.code(), Some(2));
    assert_eq!(phasecrt(&["map", "15", "3", "0", "0", "--threshold", "-1"]).status.code(), Some(2));
}

#[test]
fn suite_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = phasecrt(&["suite", "6,15", "--format", "json", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let t1 = phasecrt(&["suite", "--M", "6,15"]);
    let t2 = phasecrt(&["suite", "6,15"]);
    assert_eq!(t1.stdout, t2.stdout);
    assert!(stdout(&t1).contains("0 fail"));
}

#[test]
fn suite_prime_dimension() {
    let o = phasecrt(&["suite", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("no nontrivial coprime split"));
    assert!(text.contains("6 checks"));
}

#[test]
fn suite_tolerance_env() {
    let run = |val: &str| {
        Command::new(env!("CARGO_BIN_EXE_phasecrt"))
            .args(["suite", "6"])
            .env("PHASECRT_TOLERANCE", val)
            .output()
            .unwrap()
    };
    assert_eq!(run("1e-6").status.code(), Some(0));
    assert_eq!(run("1e-300").status.code(), Some(1));
    assert_eq!(run("nope").status.code(), Some(2));
    assert_eq!(run("-1").status.code(), Some(2));
}

#[test]
fn classify_files() {
    let dir = tempfile::tempdir().unwrap();
    let s = make_split(15, 3).unwrap();
    let pls = write_state(dir.path(), "pls.json", &build_pls(&s, 1, 2).unwrap());
    let o = phasecrt(&["classify", &pls, "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "vN lattice, shift (1,2)\n");

    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let random = StateVector::new(
        (0..15)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
    .normalized();
    let random = write_state(dir.path(), "random.json", &random);
    let text = stdout(&phasecrt(&["classify", &random, "--M1", "3"]));
    assert!(text.starts_with("NotVN (support geometry"), "{text}");

    let mom = write_state(dir.path(), "mom.json", &momentum_state(15, 4).unwrap());
    assert!(stdout(&phasecrt(&["classify", &mom, "3"])).starts_with("NotVN"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 4, "amplitudes": [[1, 0]]}"#).unwrap();
    assert_eq!(phasecrt(&["classify", bad.to_str().unwrap(), "3"]).status.code(), Some(2));
    assert_eq!(phasecrt(&["classify", "/nonexistent.json", "3"]).status.code(), Some(2));
    // A 15-dim state checked against a split of a different M.
    assert_eq!(phasecrt(&["classify", &pls, "4"]).status.code(), Some(2));
}

#[test]
fn statefile_round_trip_through_classify() {
    let dir = tempfile::tempdir().unwrap();
    let s = make_split(6, 2).unwrap();
    let v = build_pls(&s, 1, 0).unwrap();
    let path = write_state(dir.path(), "s.json", &v);
    let back = StateFile::read(Path::new(&path)).unwrap().to_state().unwrap();
    assert_eq!(back, v);
    assert_eq!(stdout(&phasecrt(&["classify", &path, "2"])), "vN lattice, shift (1,0)\n");
}

#[test]
fn help_and_version() {
    assert_eq!(phasecrt(&["--help"]).status.code(), Some(0));
    assert_eq!(phasecrt(&["--version"]).status.code(), Some(0));
    assert_eq!(phasecrt(&[]).status.code(), Some(2));
}
