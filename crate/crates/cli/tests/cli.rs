use std::process::{Command, Output};

fn farey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_farey"))
        .args(args)
        .env_remove("FAREY_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn farey_level_three_csv() {
    let o = farey(&["farey", "--level", "3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 5);
    let fracs: Vec<&str> = rows.iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert_eq!(fracs, ["0/1", "1/3", "1/2", "2/3", "1/1"]);
    assert!(text.contains("# params: command=farey format=csv"));
}

#[test]
fn mk_four_json() {
    let o = farey(&["mk", "--k", "4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let eig: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(eig.iter().any(|x| (x - 10.815072906367325).abs() < 1e-9));
    assert_eq!(eig.iter().filter(|x| (**x + 1.0).abs() < 1e-12).count(), 2);
    assert_eq!(v["params"]["k"], "4");
}

#[test]
fn partition_prints_exact_value() {
    let o = farey(&["partition", "--n", "3", "--q", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("53/18"));
    let o = farey(&["partition", "--n", "2", "--q", "1/2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["exact"].is_string());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(farey(&["nonsense"]).status.code(), Some(2));
    assert_eq!(farey(&["farey", "--level", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(farey(&["partition", "--n", "3", "--q", "x"]).status.code(), Some(2));
    assert_eq!(farey(&["spectrum", "--kind", "Q+", "--q", "1"]).status.code(), Some(2));
    assert_eq!(farey(&["farey", "--level", "3", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["mk", "--k", "5", "--format", "json"];
    assert_eq!(farey(&args).stdout, farey(&args).stdout);
    let args = ["verify-all", "--criterion", "2", "--format", "json"];
    assert_eq!(farey(&args).stdout, farey(&args).stdout);
}

#[test]
fn corrupted_trace_fails_with_exit_one() {
    let ok = farey(&["verify-all", "--criterion", "6"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = farey(&["verify-all", "--criterion", "6", "--corrupt-n00", "1e-3", "--format", "json"]);
    assert_eq!(bad.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&bad)).unwrap();
    let checks = v["criteria"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["id"].as_str().unwrap().starts_with("n-trace") && c["passed"] == false));
}

#[test]
fn output_directory_from_environment() {
    let dir = std::env::temp_dir().join(format!("farey-cli-{}", std::process::id()));
    let o = Command::new(env!("CARGO_BIN_EXE_farey"))
        .args(["bernoulli", "--k", "2", "--format", "csv"])
        .env("FAREY_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(dir.join("bernoulli.csv")).unwrap();
    assert!(text.contains("-1/360"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn other_subcommands_run() {
    for args in [
        &["growth", "--q", "-1/2", "--n-max", "12"][..],
        &["operator", "--kind", "P+", "--q", "1", "--k", "4", "--format", "csv"],
        &["operator", "--q", "1", "--k", "12", "--diagnostic", "structure"],
        &["operator", "--q", "1/2", "--k", "20", "--diagnostic", "j"],
        &["spectrum", "--kind", "N", "--q", "1", "--k", "30"],
        &["hankel-check", "--family", "smallphi", "--p", "0", "--n-max", "3"],
        &["mk", "--k", "4", "--bounds"],
        &["mk", "--k", "6", "--periods"],
        &["mk", "--k", "4", "--matrix", "--format", "csv"],
    ] {
        let o = farey(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stdout.is_empty());
    }
}
