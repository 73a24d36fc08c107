use std::process::{Command, Output};

fn rcurves(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcurves")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn field_info_reports_both_fields() {
    let v = json(&rcurves(&["field-info", "--p", "3", "--n", "2"]));
    assert_eq!(v["q"], 9);
    assert_eq!(v["field"]["p"], 3);
    assert_eq!(v["extension"]["n"], 4);
}

#[test]
fn count_single_cover() {
    let v = json(&rcurves(&["count", "--q", "9", "--m", "5", "--s", "3", "--eps", "-1", "--lam", "1", "--f", "x+xi^2"]));
    assert_eq!(v["genus"], 4);
    assert_eq!(v["points"], 154);
    assert_eq!(v["maximal"], true);
    assert_eq!(v["verdict"]["kind"], "MEETS_RECORD");
    assert!(v["verdict"]["L"].is_u64() && v["verdict"]["U"].is_u64());
    assert_eq!(v["field"]["p"], 3);
}

#[test]
fn genus_reports_engine_and_closed_values() {
    let v = json(&rcurves(&["genus", "--q", "17", "--m", "18", "--s", "2", "--f", "x^2+2"]));
    assert_eq!(v["genus"], 33);
    assert_eq!(v["closed_genus"], 33);
}

#[test]
fn count_fibre_and_artin_schreier() {
    let v = json(&rcurves(&[
        "count-fibre", "--q", "13", "--m1", "2", "--s1", "0", "--f1", "x+3", "--m2", "6", "--s2", "2", "--f2", "x+6",
        "--family", "63",
    ]));
    assert_eq!((v["genus"].as_i64(), v["points"].as_u64()), (Some(13), Some(444)));
    assert_eq!(v["verdict"]["kind"], "NEW_RECORD");

    let v = json(&rcurves(&["count-as", "--q", "7", "--s", "2", "--f", "x^2+1"]));
    assert_eq!((v["genus"].as_i64(), v["points"].as_u64()), (Some(12), Some(170)));
}

#[test]
fn batch_counts_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    std::fs::write(&path, "family,q,m,b,s\nTHM41,5,6,2,4\nTHM51,7,6,2,4\n").unwrap();
    let out = rcurves(&["count", "--batch", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,q,m,f,s,m2,f2,s2,g,points,olb,verdict,maximal,isomorph_of");
    assert!(lines[1].starts_with("THM41,5,6,x+2,4,,,,4,66,"));
    assert!(lines[2].starts_with("THM51,7,6,x+2,4,,,,4,102,"));

    std::fs::write(&path, "family,q,m,b,s\nTHM41,6,6,2,4\n").unwrap();
    assert!(!rcurves(&["count", "--batch", path.to_str().unwrap()]).status.success());
}

#[test]
fn reproduce_exit_codes() {
    let out = rcurves(&["reproduce", "--table", "4.10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!rcurves(&["reproduce", "--table", "9.9"]).status.success());
    assert!(!rcurves(&["reproduce", "--table", "5.7"]).status.success());
}

#[test]
fn search_is_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.toml");
    std::fs::write(&cfg, "families = [\"THM42\"]\nq = [17, 19]\ndegrees = [2]\nmin_verdict = \"MANY_POINTS\"\n").unwrap();
    let a = rcurves(&["--threads", "1", "search", "--config", cfg.to_str().unwrap()]);
    let b = rcurves(&["--threads", "3", "search", "--config", cfg.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("THM42,17,18,x^2+2,2,,,,33,1088,")));

    let json_out = dir.path().join("rows.json");
    let c = rcurves(&["search", "--config", cfg.to_str().unwrap(), "--format", "json", "--output", json_out.to_str().unwrap()]);
    assert!(c.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json_out).unwrap()).unwrap();
    assert_eq!(v["schema"], "rcurves.rows/1");
}

#[test]
fn records_classify_and_validate() {
    let v = json(&rcurves(&["records", "--field-size", "2401", "--g", "13", "--points", "3576"]));
    assert_eq!(v["verdict"]["kind"], "NEW_RECORD");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "q,g,lower,upper\n49,1,70,64\n").unwrap();
    let out = rcurves(&["records", "--table", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));
}
