use std::process::{Command, Output};

use serde_json::Value;

fn catenoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catenoid")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = catenoid(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn critical_record() {
    let v = json(&["critical"]);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "critical");
    assert!((num(&v["results"]["h_star"]) - 0.6627434193491816).abs() < 1e-15);
    assert!((num(&v["results"]["tau_star"]) - 1.1996786402577337).abs() < 1e-15);
    assert!(v["config"]["grid_points"].is_number());
}

#[test]
fn solve_reports_both_branches() {
    let v = json(&["solve", "--h", "0.4"]);
    let r = &v["results"];
    assert_eq!(r["outcome"], "two_extremals");
    assert_eq!(r["verdict"][0], "local minimum");
    assert_eq!(r["verdict"][1], "saddle: no extremum");
    assert!((num(&r["tau"][0]) - 0.4392042525017916).abs() < 1e-12);
    assert!(num(&r["area"][0]) < num(&r["area"][1]));
    assert_eq!(r["lower_area_below_upper"], true);
}

#[test]
fn solve_at_and_past_critical() {
    let v = json(&["solve", "--h", "star"]);
    let r = &v["results"];
    assert_eq!(r["outcome"], "critical");
    assert_eq!(r["verdict"][0], "critical: no extremum");
    let d3 = num(&r["delta3_quadrature"]);
    assert!(((d3 - num(&r["delta3_closed_form"])) / d3).abs() < 1e-4);

    let out = catenoid(&["solve", "--h", "0.7"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["outcome"], "no_extremal");
    assert!((num(&v["results"]["goldschmidt_area"]) - 2.0 * std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    assert_eq!(catenoid(&["solve", "--h", "-1"]).status.code(), Some(2));
    assert_eq!(catenoid(&["solve", "--h", "abc"]).status.code(), Some(2));
    assert_eq!(catenoid(&["nonsense"]).status.code(), Some(2));
    assert_eq!(catenoid(&["sweep", "--h-min", "0.5", "--h-max", "0.1", "--steps", "3"]).status.code(), Some(2));
    assert_eq!(catenoid(&["spectrum", "--tau", "1", "--k", "0"]).status.code(), Some(2));
    assert_eq!(catenoid(&["--help"]).status.code(), Some(0));
}

#[test]
fn csv_and_json_agree_through_out_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("sweep.csv");
    let json_path = dir.path().join("sweep.json");
    let base = ["sweep", "--h-min", "0.5", "--h-max", "0.7", "--steps", "9"];
    for (fmt, path) in [("csv", &csv_path), ("json", &json_path)] {
        let mut args = base.to_vec();
        args.extend(["--format", fmt, "--out", path.to_str().unwrap()]);
        let out = catenoid(&args);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let csv_text = std::fs::read_to_string(&csv_path).unwrap();
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();

    let mut lines = csv_text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, ["h", "tau1", "tau2", "area1", "area2", "force"]);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 9);
    for (i, row) in rows.iter().enumerate() {
        for (j, name) in header.iter().enumerate() {
            let cell = &json["results"][name][i];
            if row[j].is_empty() {
                assert!(cell.is_null());
            } else {
                // same digits in both encodings
                assert_eq!(cell.to_string(), row[j]);
            }
        }
    }
    // rows past h* carry no extremal
    assert!(rows.last().unwrap()[1].is_empty());
    assert!(!rows[0][1].is_empty());
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["sweep", "--h-min", "0.05", "--h-max", "0.65", "--steps", "40", "--format", "csv"];
    let a = catenoid(&args).stdout;
    let b = catenoid(&args).stdout;
    assert_eq!(a, b);
    assert!(a.ends_with(b"\n") && !a.contains(&b'\r'));
}

#[test]
fn spectrum_csv() {
    let out = catenoid(&["spectrum", "--tau", "star", "--k", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tau,k,lambda"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[1], "1");
    assert!((first[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-4);
    assert_eq!(lines.count(), 2);
}

#[test]
fn force_and_minimize_commands() {
    let v = json(&["force", "--h-min", "0.1", "--h-max", "0.6", "--steps", "6"]);
    let f = v["results"]["force"].as_array().unwrap();
    assert_eq!(f.len(), 6);
    assert!(f.iter().all(|x| num(x) < 0.0));

    let v = json(&["minimize", "--h", "0.7", "--n", "256"]);
    assert_eq!(v["results"]["outcome"], "collapsed");
    let v = json(&["minimize", "--h", "0.4", "--n", "256", "--init", "upper-perturbed"]);
    assert_eq!(v["results"]["outcome"], "converged");
    let y = v["results"]["y"].as_array().unwrap();
    assert_eq!((num(&y[0]), num(&y[255])), (1.0, 1.0));
}
