use std::path::PathBuf;
use std::process::{Command, Output};

use starforge::algebra::{vars, NuSeries, Poly};
use starforge::formats::NuSeriesJson;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_starforge"));
    for a in args {
        if a.ends_with(".json") {
            cmd.arg(data(a));
        } else {
            cmd.arg(a);
        }
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn moyal_canonical_relation() {
    let out = run(&["moyal", "--poisson", "poisson_r2.json", "--left", "q.json", "--right", "p.json", "--order", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["provenance"]["operation"], "moyal");
    assert_eq!(v["provenance"]["order"], 2);
    let s: NuSeriesJson = serde_json::from_value(v["result"].clone()).unwrap();
    let s = NuSeries::try_from(&s).unwrap();
    let vs = vars(&["q", "p"]);
    assert_eq!(s.coeff(0), &Poly::var(vs.clone(), 0).mul(&Poly::var(vs.clone(), 1)));
    assert_eq!(s.coeff(1), &Poly::constant(vs, starforge::algebra::sc(1, 2)));
}

#[test]
fn assoc_check_exit_codes() {
    let ok = run(&["check", "--kind", "assoc", "--input", "assoc_moyal.json", "--order", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["summary"], "defect: 0 through ν⁴");
    let bad = run(&["check", "--kind", "assoc", "--input", "assoc_corrupt.json", "--order", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json(&bad);
    assert_eq!(v["passed"], false);
    assert_eq!(v["defects"][0]["order"], 2);
}

#[test]
fn seeded_sweep_is_recorded() {
    let out = run(&["check", "--kind", "assoc", "--input", "assoc_moyal.json", "--order", "3", "--seed", "7", "--max-degree", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["provenance"]["seed"], 7);
    assert_eq!(v["provenance"]["max_degree"], 4);
    let bad = run(&["check", "--kind", "assoc", "--input", "assoc_corrupt.json", "--order", "2", "--seed", "7"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn input_errors_exit_2() {
    let missing = run(&["moyal", "--poisson", "missing.json", "--left", "q.json", "--right", "p.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vars": ["q", "p"], "terms": [{"coeff": "1", "exp": [1, "x"]}]}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_starforge"))
        .args(["moyal", "--poisson"])
        .arg(data("poisson_r2.json"))
        .arg("--left")
        .arg(&bad)
        .arg("--right")
        .arg(data("p.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("/terms/0/exp/1"), "{err}");
    assert!(err.contains("line 1"), "{err}");
    let nonsymplectic = run(&["fedosov", "--input", "fedosov_bad.json", "--left", "q.json", "--right", "p.json"]);
    assert_eq!(nonsymplectic.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let args = ["gutt", "--lie", "so3.json", "--left", "x.json", "--right", "y.json", "--order", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fedosov_and_reduction() {
    let f = run(&["fedosov", "--input", "fedosov_flat.json", "--left", "q.json", "--right", "p.json", "--order", "2"]);
    let m = run(&["moyal", "--poisson", "poisson_r2.json", "--left", "q.json", "--right", "p.json", "--order", "2"]);
    assert_eq!(f.status.code(), Some(0));
    assert_eq!(json(&f)["result"], json(&m)["result"]);
    let nonflat = run(&["check", "--kind", "assoc", "--input", "assoc_fedosov.json", "--order", "2"]);
    assert_eq!(nonflat.status.code(), Some(0));
    let r = run(&["reduce", "--setup", "reduction_desk.json", "--left", "q2.json", "--right", "p2.json", "--order", "2"]);
    assert_eq!(r.status.code(), Some(0));
    let s: NuSeriesJson = serde_json::from_value(json(&r)["result"].clone()).unwrap();
    let s = NuSeries::try_from(&s).unwrap();
    assert_eq!(s.coeff(1), &Poly::constant(vars(&["q2", "p2"]), starforge::algebra::sc(1, 2)));
}

#[test]
fn berezin_composition() {
    let out = run(&["berezin", "--left", "e01.json", "--right", "e10.json", "--expand", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let exact = run(&["berezin", "--left", "disk_kinv.json", "--right", "e01.json"]);
    assert_eq!(exact.status.code(), Some(0));
    assert_eq!(v["result"]["terms"].as_array().unwrap().len(), 2);
    assert_eq!(v["expansion"][0]["terms"][0], serde_json::json!({"p": 1, "q": 1, "coeff": "1"}));
    assert_eq!(v["expansion"][1]["terms"][0], serde_json::json!({"p": 0, "q": 0, "coeff": "1"}));
}

#[test]
fn symmetry_checks() {
    for (kind, file, code) in [
        ("derivation", "derivation_dq.json", 0),
        ("strong-invariance", "invariance_sp2.json", 0),
        ("covariance", "invariance_sp2.json", 0),
        ("strong-invariance", "invariance_cubic.json", 1),
        ("twist", "twist_abelian.json", 0),
        ("twist", "twist_broken.json", 1),
    ] {
        let out = run(&["check", "--kind", kind, "--input", file, "--order", "3"]);
        assert_eq!(out.status.code(), Some(code), "{kind} {file}");
    }
    let cubic = json(&run(&["check", "--kind", "strong-invariance", "--input", "invariance_cubic.json", "--order", "3"]));
    assert_eq!(cubic["defects"][0]["order"], 3);
}

#[test]
fn pretty_format() {
    let out = run(&["moyal", "--poisson", "poisson_r2.json", "--left", "q.json", "--right", "p.json", "--order", "1", "--format", "pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ν: 1/2"), "{text}");
}

#[test]
fn results_round_trip() {
    use starforge::berezin::DiskSymbol;
    use starforge::formats::DiskSymbolJson;
    let out = run(&["berezin", "--left", "e01.json", "--right", "e10.json"]);
    let v = json(&out);
    let d: DiskSymbolJson = serde_json::from_value(v["result"].clone()).unwrap();
    let sym = DiskSymbol::try_from(&d).unwrap();
    assert_eq!(serde_json::to_value(DiskSymbolJson::from(&sym)).unwrap(), v["result"]);
    let m = json(&run(&["gutt", "--lie", "so3.json", "--left", "x.json", "--right", "y.json", "--order", "2"]));
    let s: NuSeriesJson = serde_json::from_value(m["result"].clone()).unwrap();
    let back = NuSeries::try_from(&s).unwrap();
    assert_eq!(serde_json::to_value(NuSeriesJson::from(&back)).unwrap(), m["result"]);
}
