use heunpot::catalog::{potential_value, CoordinateMap, PotentialSpec};
use heunpot::solution::ConditionalPotential;
use std::path::PathBuf;
use std::process::{Command, Output};

const SPEC: &str = r#"{"triad": [2, 0, 0], "a": [0.0, 1.0, 2.0], "v": [0.3, -0.2, 0.1, 0.05, 0.0], "sigma": 1.0}"#;

fn heunpot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heunpot")).args(args).env_remove("HEUN_TOL").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn spec_file(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn triads_csv_has_35_rows_and_11_classes() {
    let o = heunpot(&["triads", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "triad,m1,m2,m3,class,representative");
    let r = rows(&text);
    assert_eq!(r.len(), 35);
    let mut classes: Vec<&str> = r.iter().map(|row| row[4].as_str()).collect();
    classes.sort();
    classes.dedup();
    assert_eq!(classes.len(), 11);
}

#[test]
fn catalog_json_parses_as_specs() {
    let o = heunpot(&["catalog", "--format", "json"]);
    assert!(o.status.success());
    let entries: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(entries.len(), 11);
    for e in entries {
        let spec: PotentialSpec = serde_json::from_value(e.clone()).unwrap();
        spec.validate().unwrap();
        let again = PotentialSpec::from_json(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(again, spec);
        assert_eq!(e["class"].as_u64().unwrap() as usize, spec.triad.class_index());
    }
}

#[test]
fn fig2_matches_library() {
    let o = heunpot(&["fig2"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 1600);
    for row in r {
        let v3: f64 = row[1].parse().unwrap();
        let x: f64 = row[2].parse().unwrap();
        let v: f64 = row[3].parse().unwrap();
        let want = ConditionalPotential::fig2(v3).potential(x);
        assert!((v - want).abs() <= 1e-12 * want.abs().max(1.0), "x = {x}, v3 = {v3}");
    }
}

#[test]
fn eval_potential_matches_library() {
    let path = spec_file("eval.json", SPEC);
    let o = heunpot(&["eval-potential", "--spec", path.to_str().unwrap(), "--grid", "-1.5:-0.5:11"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let spec = PotentialSpec::from_json(SPEC).unwrap();
    let map = CoordinateMap::for_branch(&spec).unwrap();
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 11);
    for row in r {
        let [x, z, v]: [f64; 3] = [0, 1, 2].map(|i| row[i].parse().unwrap());
        assert_eq!(z, map.z_of_x(x).unwrap());
        assert_eq!(v, potential_value(&spec, z).unwrap());
    }
}

#[test]
fn solve_is_deterministic_with_small_residuals() {
    let path = spec_file("solve.json", SPEC);
    let args = ["solve", "--spec", path.to_str().unwrap(), "--energy", "0.7", "--signs", "+-+"];
    let a = heunpot(&args);
    let b = heunpot(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next().unwrap(), "x,z,re_psi,im_psi,residual");
    for row in rows(&text) {
        assert!(row[4].parse::<f64>().unwrap() < 1e-7);
    }
}

#[test]
fn verify_passes_then_fails_with_corrupted_v0() {
    let path = spec_file("verify.json", SPEC);
    let p = path.to_str().unwrap();
    let ok = heunpot(&["verify", "--spec", p, "--energy", "0.7"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("pass,true"));
    let bad = heunpot(&["verify", "--spec", p, "--energy", "0.7", "--perturb-v0", "0.01"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("pass,false"));
}

#[test]
fn terminate_reports_roots() {
    let o = heunpot(&[
        "terminate",
        "--mechanism",
        "frobenius",
        "--n",
        "2",
        "--params",
        "2,-2,1.5,0.5,1",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let roots: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(roots.len(), 3);
    for r in roots {
        assert_eq!(r["coeffs"].as_array().unwrap().len(), 3);
    }
    let o = heunpot(&["terminate", "--mechanism", "frobenius", "--n", "2", "--params", "2,-1.5,1.5,0.5,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_input_exits_1() {
    let path =
        spec_file("bad.json", r#"{"triad": [2, 2, 2], "a": [0.0, 0.0, 2.0], "v": [0, 0, 0, 0, 0], "sigma": 1.0}"#);
    let o = heunpot(&["eval-potential", "--spec", path.to_str().unwrap(), "--grid", "0:1:3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(heunpot(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(heunpot(&["eval-potential", "--spec", "/nonexistent.json", "--grid", "0:1:3"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_heunpot")).args(["triads"]).env("HEUN_TOL", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}
