use std::process::Command;

fn dwork(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dwork"))
        .args(args)
        .env_remove("DWORK_COST_CAP")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf8"),
    )
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid json")
}

#[test]
fn predict_markdown_n5() {
    let (code, out) = dwork(&["predict", "--n", "5", "--format", "md"]);
    assert_eq!(code, 0);
    assert!(out.contains("| [0,0,0,1,4] | 2   | 4     | 20       | Q(sqrt(5)) |"));
    assert!(out.contains("total dimension: 204"));
}

#[test]
fn invalid_prime_exits_4() {
    let (code, out) = dwork(&["count", "--n", "3", "--q", "10", "--psi", "2"]);
    assert_eq!(code, 4);
    assert_eq!(json(&out)["error"]["kind"], "invalid_input");
}

#[test]
fn unknown_flag_exits_4() {
    let (code, _) = dwork(&["count", "--bogus"]);
    assert_eq!(code, 4);
}

#[test]
fn cost_cap_exits_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_dwork"))
        .args(["count", "--n", "4", "--q", "13", "--psi", "2", "--r", "2"])
        .env("DWORK_COST_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v = json(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(v["error"]["kind"], "cost_cap");
    assert_eq!(v["config"]["cost-cap"], 1000);
}

#[test]
fn counts_are_exact_and_deterministic() {
    let args = ["count", "--n", "3", "--q", "7", "--psi", "3", "--r", "1..2"];
    let (code, first) = dwork(&args);
    assert_eq!(code, 0);
    let (_, second) = dwork(&[
        "--threads",
        "1",
        "count",
        "--n",
        "3",
        "--q",
        "7",
        "--psi",
        "3",
        "--r",
        "1..2",
    ]);
    let v = json(&first);
    assert_eq!(v["result"]["counts"][0]["count"], 9);
    assert_eq!(json(&second)["result"]["counts"], v["result"]["counts"]);
    assert_eq!(dwork(&args).1, first);
}

#[test]
fn twisted_count_with_sigma() {
    let (code, out) = dwork(&[
        "count", "--n", "4", "--q", "13", "--psi", "2", "--twist", "0,0,2,2", "--sigma", "3 4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["counts"][0]["count"], 176);
}

#[test]
fn zeta_json_schema() {
    let (code, out) = dwork(&[
        "zeta", "--n", "4", "--q", "13", "--psi", "2", "--orbit", "0,0,2,2",
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    let r = &v["result"];
    for key in [
        "instance",
        "predictions",
        "factors",
        "certificates",
        "consistency",
    ] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    let texts: Vec<&str> = r["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["factor_text"].as_str().unwrap())
        .collect();
    assert_eq!(texts, vec!["1 - 169t^2", "1 - 13t", "1 + 13t"]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("dwork-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(
        &path,
        "command = \"count\"\nn = 3\nq = 13\npsi = 2\nr = \"1\"\n",
    )
    .unwrap();
    let (code, out) = dwork(&["--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["config"]["q"], 13);
    let (code, out) = dwork(&[
        "--config",
        path.to_str().unwrap(),
        "count",
        "--q",
        "7",
        "--psi",
        "3",
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["config"]["q"], 7);
    assert_eq!(v["result"]["counts"][0]["count"], 9);
    std::fs::write(&path, "colour = 1\n").unwrap();
    assert_eq!(dwork(&["--config", path.to_str().unwrap()]).0, 4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("dwork-cli-out-{}.csv", std::process::id()));
    let (code, out) = dwork(&[
        "predict",
        "--n",
        "4",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("class,m_a,deg_Q"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_rep_json() {
    let (code, out) = dwork(&["verify-rep", "--n", "4"]);
    assert_eq!(code, 0);
    let checks = json(&out)["result"].as_array().unwrap().clone();
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn check_single_criterion() {
    let (code, out) = dwork(&[
        "check",
        "--suite",
        "acceptance",
        "--criterion",
        "1,2",
        "--format",
        "md",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains("[PASS]")).count(), 2);
}
