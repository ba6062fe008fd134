use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn idcap(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idcap"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn fig2_preset_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = idcap(&["figure", "fig2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config_sha256="));
    assert_eq!(lines.next().unwrap(), "D,log10_lower,log10_upper");
    assert_eq!(lines.count(), 505);
}

#[test]
fn fig4_and_fig3_presets() {
    let dir = tempfile::tempdir().unwrap();
    let o = idcap(&["figure", "fig4"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("tau,rho,psi,r_fixed,r_random"));
    let o = idcap(&["figure", "fig3", "--format", "json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 91 * 91);
    assert!(v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c == "region"));
}

#[test]
fn config_hash_ignores_threads_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout(&idcap(&["figure", "fig4", "--threads", "2"], dir.path()));
    idcap(&["figure", "fig4", "--out", "x.csv"], dir.path());
    let b = fs::read_to_string(dir.path().join("x.csv")).unwrap();
    assert_eq!(a, b);
    let c = stdout(&idcap(&["figure", "fig4", "--seed", "5"], dir.path()));
    assert_ne!(a.lines().next(), c.lines().next());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = idcap(&["no-such-command"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[E_USAGE]"));

    fs::write(dir.path().join("c.json"), r#"{"dims": [3], "typo": 1}"#).unwrap();
    let o = idcap(&["capmeasure", "--config", "c.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown field `typo`"));

    let o = idcap(&["bounds", "--taus", "1.2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[E_PARAM]"));

    let o = idcap(
        &["pack", "--dim", "3", "--tau", "0.1", "--rho", "1.5rad"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[E_DEGENERATE_PSI]"));

    fs::write(
        dir.path().join("bad.jsonl"),
        "{\"identity\":\"a\",\"embedding\":[1,0]}\n{\"identity\":\"b\",\"embedding\":[3,0]}\n",
    )
    .unwrap();
    let o = idcap(&["audit", "bad.jsonl", "--tau", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"{"dims": [2], "angles": ["90deg"], "seed": 4}"#,
    )
    .unwrap();
    let o = idcap(
        &["capmeasure", "--config", "c.json", "--angles", "0.5rad"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().contains("\"seed\":4"));
    let row = text.lines().nth(2).unwrap();
    let v: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!((v - 0.5 / std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn pipeline_to_audit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = idcap(
        &[
            "pipeline",
            "make",
            "--dim",
            "16",
            "--identities",
            "8",
            "--tau",
            "0.6",
            "--rho",
            "0.1rad",
            "--seed",
            "3",
            "--out",
            "p.json",
        ],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(d.join("p.centers.csv").exists());
    let o = idcap(
        &[
            "pipeline",
            "sample",
            "p.json",
            "--views",
            "12",
            "--out",
            "data.jsonl",
        ],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(d.join("data.jsonl"))
            .unwrap()
            .lines()
            .count(),
        96
    );

    let o = idcap(
        &["audit", "data.jsonl", "--tau", "0.6", "--format", "json"],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["admissible"], true);
    assert_eq!(v["capacity"]["size"], 8);
    assert_eq!(v["admissibility"]["impostor_violations"], 0);
    assert_eq!(v["mmcr"]["bound_satisfied"], true);

    let o = idcap(
        &["audit", "data.jsonl", "--tau", "0.6", "--table", "mmcr"],
        d,
    );
    assert!(stdout(&o).contains("bound_satisfied,true"));
}

#[test]
fn pack_writes_code_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = idcap(
        &["pack", "--dim", "3", "--psi", "60deg", "--out", "code.csv"],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("code.csv.json")).unwrap()).unwrap();
    assert!(side["min_angle"].as_f64().unwrap() >= std::f64::consts::FRAC_PI_3 - 1e-9);
    let o = idcap(
        &[
            "pack",
            "--candidates",
            "code.csv",
            "--psi",
            "90deg",
            "--format",
            "json",
        ],
        d,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["code"]["min_angle"].as_f64().unwrap() >= std::f64::consts::FRAC_PI_2 - 1e-9);
}

#[test]
fn calibrate_and_rates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("roc.csv"), "tau,fmr\n0.3,0.1\n0.5,0.01\n0.7,0.001\n").unwrap();
    let o = idcap(&["calibrate", "roc.csv", "--alpha", "0.01"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().nth(2).unwrap(), "0.01,0.5");
    fs::write(d.join("bad.csv"), "tau,fmr\n0.3,0.01\n0.5,0.1\n").unwrap();
    let o = idcap(&["calibrate", "bad.csv", "--alpha", "0.05"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[E_ROC]"));

    let o = idcap(&["rates", "--taus", "0.5", "--rhos", "0deg,20deg"], d);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert!(rows[0].ends_with("admissible-positive-rate"));
    assert!(rows[1].ends_with("admissible-zero-rate-bound"));
}

#[test]
fn mc_sep_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "mc-sep", "--dims", "8", "--sizes", "2,4,8", "--trials", "200", "--seed", "9",
    ];
    let a = stdout(&idcap(&args, dir.path()));
    let b = stdout(&idcap(&args, dir.path()));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 2 + 4 * 3);
}
