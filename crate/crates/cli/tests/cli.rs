use std::process::{Command, Output};

use num_bigint::BigInt;
use serde_json::Value;

use k3corr::divisorial::{membership, DSet};
use k3corr::{MukaiShape, Series, Sign};

fn k3corr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3corr")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = k3corr(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr));
    });
    (out.status.code().unwrap(), v)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_x_yes_with_first_witness() {
    let (code, v) = json(&["check-x", "2", "2", "17", "1", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "YES");
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["params"]["q_bound"], "10000");
    let w = &v["witnesses"][0];
    for (k, want) in [("series", "a"), ("alpha", "+"), ("p", "5"), ("q", "1"), ("x", "21"), ("y", "5")] {
        assert_eq!(w[k], want, "{k}");
    }
    assert_eq!(w["h1_conditions_hold"], true);
}

#[test]
fn check_x_rejects_incompatible_invariants() {
    let o = k3corr(&["check-x", "2", "2", "5", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mu^2 != d mod 4rs"), "{}", stderr(&o));
    assert_eq!(k3corr(&["check-x", "2", "2", "17", "2"]).status.code(), Some(2));
    assert_eq!(k3corr(&["check-x", "2", "2", "seventeen", "1"]).status.code(), Some(2));
}

#[test]
fn check_x_rank_one_side_is_always_yes() {
    for (d, mu) in [("5", "1"), ("13", "1"), ("21", "-1"), ("1000001", "1")] {
        let (code, v) = json(&["check-x", "1", "1", d, mu, "--format", "json", "--q-bound", "0"]);
        assert_eq!((code, v["verdict"].as_str()), (0, Some("YES")), "d={d}");
    }
}

#[test]
fn no_within_bound_reports_the_bound() {
    let (code, v) = json(&["check-x", "3", "5", "49", "7", "--q-bound", "100", "--format", "json"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "NO_WITHIN_BOUND");
    assert_eq!(v["q_bound"], "100");
    assert!(v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn check_y_outcomes() {
    let (code, v) = json(&["check-y", "1", "1", "2", "17", "1", "--format", "json"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("YES")));
    let (code, v) = json(&["check-y", "1", "1", "3", "9", "1", "--format", "json"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "NO");
    assert!(v["reason"].as_str().unwrap().contains("gcd(c,d)>1"));
    let o = k3corr(&["check-y", "1", "1", "1", "5", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid nu"));
}

#[test]
fn div_rows_and_csv_columns() {
    let o = k3corr(&["div", "2", "2", "--d-max", "200", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,mu1,mu2,series,alpha,q,t,p,qwit"));
    let ds: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert!(ds.contains(&"17") && ds.contains(&"161"));
}

#[test]
fn catalogue_round_trips_through_membership() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.json");
    for (r, s) in [(2, 2), (1, 1), (2, 3), (3, 4)] {
        let o = k3corr(&[
            "div",
            &r.to_string(),
            &s.to_string(),
            "--d-max",
            "1500",
            "--q-max",
            "4",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: Value = serde_json::from_reader(std::fs::File::open(&path).unwrap()).unwrap();
        assert_eq!(v["params"]["d_max"], "1500");
        let shape = MukaiShape::split(r, s).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert!(!rows.is_empty());
        for row in rows {
            let big = |x: &Value| x.as_str().unwrap().parse::<BigInt>().unwrap();
            let series = if row["series"] == "a" { Series::A } else { Series::B };
            let alpha = if row["alpha"] == "+" { Sign::Plus } else { Sign::Minus };
            let set = DSet::new(shape, series, big(&row["mu_bar"][0]), alpha).unwrap();
            let q: u64 = row["q"].as_str().unwrap().parse().unwrap();
            let d = big(&row["d"]);
            assert!(membership(&set, &d, q).is_yes(), "({r}, {s}) row {row}");
            let (p, qw) = (big(&row["witness"]["p"]), big(&row["witness"]["q"]));
            assert_eq!(&p * &p - &d * &qw * &qw, set.rhs());
        }
    }
}

#[test]
fn every_small_shape_has_a_certificate() {
    for r in 1..=20 {
        for s in 1..=20 {
            let (code, v) = json(&["div", &r.to_string(), &s.to_string(), "--d-max", "10", "--q-max", "1"]);
            assert_eq!(code, 0);
            let cert = &v["header"]["nonempty_certificate"];
            assert!(cert["d"].as_str().is_some(), "({r}, {s})");
            let ac_even = (v["header"]["a"].as_str().unwrap().parse::<u64>().unwrap()
                * v["header"]["c"].as_str().unwrap().parse::<u64>().unwrap())
                % 2
                == 0;
            if ac_even {
                assert_eq!(cert["route"], "ac-even");
            }
        }
    }
}

#[test]
fn pell_command() {
    let (code, v) = json(&["pell", "61", "1", "--orbit", "3", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["unit"]["p"], "1766319049");
    assert_eq!(v["unit"]["q"], "226153980");
    assert_eq!(v["orbit"].as_array().unwrap().len(), 4);
    let (code, _) = json(&["pell", "3", "-1", "--q-bound", "50", "--format", "json"]);
    assert_eq!(code, 1);
    let (code, v) = json(&["pell", "9", "7", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(v["unit"].is_null());
    assert_eq!(k3corr(&["pell", "0", "1"]).status.code(), Some(2));
}

#[test]
fn thread_cap_from_environment() {
    let run = |val: &str| {
        Command::new(env!("CARGO_BIN_EXE_k3corr"))
            .args(["check-x", "2", "2", "17", "1", "--q-bound", "50"])
            .env("K3CORR_THREADS", val)
            .output()
            .unwrap()
    };
    assert_eq!(run("2").status.code(), Some(0));
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("lots").status.code(), Some(2));
}

#[test]
fn selftest_small_passes() {
    let o = k3corr(&["selftest", "--scale", "small"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
}
