use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sumrank"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sumrank-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn construct(name: &str, args: &[&str]) -> String {
    let path = scratch(name);
    let p = path.to_str().unwrap().to_string();
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &p]);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("JSON on stderr")
}

#[test]
fn doubly_extended_profile() {
    let p = construct("de.json", &["--family", "doubly_extended_lrs", "--q", "2", "--m", "3", "--k", "2"]);
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(file["code"]["profile"], serde_json::json!([3, 1, 1]));
    assert_eq!(file["code"]["k"], 2);
    assert_eq!(file["provenance"]["descriptor"]["family"], "doubly_extended_lrs");
    assert!(file["provenance"]["library_version"].is_string());
    let o = run(&["verify", &p, "--checks", "line-cover,duality"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn simplex_from_basis_file() {
    let u = scratch("u.json");
    std::fs::write(&u, "[[[0,1],[1]],[[1,1],[0]],[[0],[0,1]]]").unwrap();
    let arg = format!("@{}", u.display());
    let p = construct(
        "simplex.json",
        &["--family", "simplex", "--q", "2", "--m", "2", "--k", "2", "--modulus", "1,1,1", "--U-basis", &arg, "--poly", "[[1,1],[1],[1]]"],
    );
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let (a, a2, o, z) = ([0, 1], [1, 1], [1, 0], [0, 0]);
    let expect = serde_json::json!([
        [a, a2, z, o, z, a, z, a, a, a2, a, a2, a2, a2, a],
        [o, z, a, z, a, a, a2, a, a2, a2, a2, a, o, a, z],
    ]);
    assert_eq!(file["code"]["G"], expect);
    let r = json(&run(&["analyze", &p]));
    assert_eq!((r["d"].clone(), r["one_weight"].clone()), (9.into(), 9.into()));
    let v = run(&["verify", &p, "--checks", "ext-formula"]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["checks"][0]["details"]["constant_hamming_weight"], 28);
}

#[test]
fn analyze_known_codes() {
    let p = construct("tf.json", &["--family", "two_fold_lrs", "--q", "2", "--m", "4", "--modulus", "1,1,0,0,1"]);
    let r = json(&run(&["analyze", &p]));
    assert_eq!(r["d"], 7);
    assert_eq!(r["msrd"], true);
    assert_eq!(r["one_weight"], 7);
    let p = construct("lrs.json", &["--family", "lrs", "--q", "3", "--m", "2", "--k", "2"]);
    let r = json(&run(&["analyze", &p]));
    assert_eq!((r["d"].clone(), r["msrd"].clone()), (3.into(), true.into()));
    let csv = String::from_utf8(run(&["analyze", &p, "--format", "csv"]).stdout).unwrap();
    assert!(csv.starts_with("weight,rank_list,projective_codewords,codewords\n"));
}

#[test]
fn round_trip_is_byte_stable_and_worker_independent() {
    let p = construct("rt.json", &["--family", "club_lift", "--q", "2", "--m", "3"]);
    let a = run(&["analyze", &p, "--workers", "1"]).stdout;
    let b = run(&["analyze", &p, "--workers", "4"]).stdout;
    assert_eq!(a, b);
    let again = construct("rt2.json", &["--family", "club_lift", "--q", "2", "--m", "3"]);
    assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["construct", "--family", "lrs", "--q", "6", "--m", "2", "--k", "1"][..],
        &["construct", "--family", "lrs", "--q", "3", "--m", "2", "--k", "0"],
        &["construct", "--family", "lrs", "--q", "2", "--m", "3", "--modulus", "1,1,1,1", "--k", "1"],
        &["construct", "--family", "nonsense", "--q", "2", "--m", "2"],
        &["search", "--q", "2", "--m", "3", "--t", "3", "--k", "3"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let e = stderr_json(&o);
        assert_eq!(e["exit_code"], 2);
        assert!(e["message"].is_string());
    }
    let p = construct("v.json", &["--family", "lrs", "--q", "3", "--m", "2", "--k", "2"]);
    assert_eq!(run(&["verify", &p, "--checks", "bogus"]).status.code(), Some(2));
}

#[test]
fn verification_failure_exits_1() {
    let p = construct("lrs1.json", &["--family", "lrs", "--q", "3", "--m", "2", "--k", "2"]);
    let o = run(&["verify", &p, "--checks", "line-cover"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["checks"][0]["passed"], false);
}

#[test]
fn budget_exceeded_exits_3_with_static_data() {
    let p = construct("big.json", &["--family", "doubly_extended_lrs", "--q", "2", "--m", "3"]);
    let o = run(&["analyze", &p, "--budget", "3"]);
    assert_eq!(o.status.code(), Some(3));
    let r = json(&o);
    assert_eq!(r["status"], "budget_exceeded");
    assert_eq!(r["static"]["singleton_bound"], 4);
    assert_eq!(stderr_json(&o)["error"], "TooLarge");
    assert_eq!(run(&["search", "--q", "2", "--m", "4", "--t", "17", "--cap", "10"]).status.code(), Some(3));
}

#[test]
fn search_reports() {
    let o = run(&["search", "--q", "2", "--m", "3", "--t", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let admissible: Vec<&str> = rows.iter().filter(|r| &r[4] == "true").map(|r| &r[3]).collect();
    assert_eq!(admissible, ["3 1 1", "2 2 2"]);
    assert!(rows.iter().all(|r| r[8].starts_with("range-limited")));

    let o = run(&["search", "--q", "3", "--m", "2", "--t", "4", "--format", "json"]);
    let r = json(&o);
    let shapes: Vec<&Value> = r["rows"].as_array().unwrap().iter().filter(|x| x["admissible"] == true).collect();
    assert_eq!(shapes.len(), 1);
    assert_eq!(shapes[0]["profile"], serde_json::json!([2, 2, 1, 1]));

    let o = run(&["search", "--q", "3", "--m", "2", "--t", "3"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("0 mod q"));
}

#[test]
fn seeded_random_codes() {
    let args = ["--family", "random", "--q", "2", "--m", "2", "--k", "2", "--profile", "2,1", "--seed", "5"];
    let a = construct("r1.json", &args);
    let b = construct("r2.json", &args);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
