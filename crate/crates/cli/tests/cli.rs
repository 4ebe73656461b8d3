use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_feketelab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines().skip(1);
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn energy_column_matches_closed_form() {
    let o = run(&["energy", "--map", "z^2", "--point", "1", "--kmax", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# feketelab v1\n"));
    for (k, v) in column(&text, "energy_direct").iter().enumerate() {
        let k = k + 1;
        let exact = k as f64 * 2f64.powi(-(k as i32)) * 2f64.ln();
        assert!((v.parse::<f64>().unwrap() - exact).abs() < 1e-9);
    }
}

#[test]
fn energy_json_has_renamed_fields() {
    let o = run(&["energy", "--map", "z^2-1", "--point", "2", "--kmax", "2", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let first = &v.as_array().unwrap()[0];
    for key in ["D_seq", "C_f_est", "C_fa", "eta_seq", "energy_cz", "warnings"] {
        assert!(first.get(key).is_some(), "{key}");
    }
}

#[test]
fn nonarch_newton_map() {
    let lift = r#"{"d":2,"P":[[1,0],[0,0],[1,0]],"Q":[[0,0],[2,0],[0,0]]}"#;
    let o = run(&["nonarch", "--lift", lift, "--prime", "2", "--kmax", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["p"], 2);
    assert_eq!(v["VF_logp"], "1");
    assert_eq!(v["gauss_green"], serde_json::json!(["0", "0", "0"]));
    assert_eq!(v["phi_self"], "-1");
}

#[test]
fn pullback_dump_has_all_atoms() {
    let path = std::env::temp_dir().join(format!("feketelab-pullback-{}.csv", std::process::id()));
    let o = run(&["pullback", "--map", "z^2+i", "--point", "2", "--k", "4", "--dump", path.to_str().unwrap()]);
    assert!(o.status.success());
    let dump = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let weights: u64 = dump.lines().skip(2).map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(weights, 16);
}

#[test]
fn scan_covers_the_grid() {
    let o = run(&["scan", "--map", "z^2", "--grid", "3", "--k", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2 + 18);
}

#[test]
fn equidist_and_bounds_tables() {
    let o = run(&["equidist", "--map", "z^2", "--point", "1", "--phi", "bump", "--kmax", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(column(&text, "inferred_C").len(), 4);
    let o = run(&["bounds", "--map", "z^2+i", "--point", "2", "--kmax", "3"]);
    assert!(column(&stdout(&o), "bounds_hold").iter().all(|b| b == "true"));
}

#[test]
fn exit_codes_and_single_line_errors() {
    let cases: [(&[&str], i32); 6] = [
        (&["energy", "--map", "z^", "--point", "1", "--kmax", "2"], 2),
        (&["energy", "--map", "z", "--point", "1", "--kmax", "2"], 2),
        (&["energy", "--map", "z^2", "--point", "1", "--kmax", "0"], 2),
        (&["equidist", "--map", "z^2", "--point", "1", "--phi", "nope", "--kmax", "2"], 2),
        (&["energy", "--map", "z^2+i", "--point", "2", "--kmax", "12", "--budget", "100"], 4),
        (&["energy", "--map", "z^2"], 2),
    ];
    for (args, code) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        if code != 2 || args.len() > 3 {
            let err = String::from_utf8(o.stderr).unwrap();
            assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        }
    }
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS ")));
}
