//! End-to-end tests of the binary: exit codes, output schemas, the result
//! cache and corpus verification.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn frl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frl"))
        .args(args)
        .env_remove("FRL_CACHE")
        .output()
        .expect("binary runs")
}

fn frl_with_cache(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frl"))
        .args(args)
        .env("FRL_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn classify_reports_the_wheel() {
    let out = frl(&["classify", "n=4; e=0-1,1-2,0-2,0-3,1-3,2-3", "--dim", "4"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["divergence_degree"], 0);
    assert_eq!(v["eg_primitive"], true);
    assert_eq!(v["loop_number"], 3);
    assert_eq!(v["critical_edge_count"], true);
}

#[test]
fn poly_routes_agree_via_cli() {
    let trees = frl(&["poly", "n=3; e=0-1,0-2,1-2"]);
    let minor = frl(&["poly", "n=3; e=0-1,0-2,1-2", "--method", "minor", "--root", "2"]);
    let t = stdout_json(&trees);
    let m = stdout_json(&minor);
    assert_eq!(t["polynomial"], m["polynomial"]);
    assert_eq!(t["polynomial"], Value::from("a1*a2 + a1*a3 + a2*a3"));
    assert_eq!(t["terms"], 3);
    assert_eq!(m["root"], 2);
}

#[test]
fn period_accepts_json_graph_form() {
    let out = frl(&["period", r#"{"vertices":2,"edges":[[0,1],[0,1]]}"#, "--dim", "4"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["method"], "gauss-tensor");
}

#[test]
fn parse_errors_exit_2() {
    let out = frl(&["period", "n=2; e=0-0", "--dim", "4"]);
    assert_eq!(exit_code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["error"]["kind"], "parse-error");
    assert!(v["error"]["message"]
        .as_str()
        .unwrap()
        .contains("tadpoles unsupported"));

    let out = frl(&["period", "n=2; e=0-7", "--dim", "4"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stdout_json(&out)["error"]["position"].is_u64());
}

#[test]
fn domain_errors_exit_3() {
    // divergent period
    let out = frl(&["period", "n=2; e=0-1,0-1,0-1,0-1", "--dim", "4"]);
    assert_eq!(exit_code(&out), 3);
    assert_eq!(stdout_json(&out)["error"]["kind"], "divergent-period");

    // odd dimension
    let out = frl(&["classify", "n=2; e=0-1,0-1", "--dim", "5"]);
    assert_eq!(exit_code(&out), 3);
    assert_eq!(stdout_json(&out)["error"]["kind"], "unsupported-dimension");

    // disconnected graph has no dual polynomial
    let out = frl(&["poly", "n=4; e=0-1,2-3"]);
    assert_eq!(exit_code(&out), 3);
    assert_eq!(stdout_json(&out)["error"]["kind"], "no-spanning-tree");
}

#[test]
fn residue_command_runs_the_period() {
    let out = frl(&["residue", "n=2; e=0-1,0-1", "--dim", "4"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["residue"]["i_power"], 3);
    assert_eq!(v["residue"]["rational"], "1/8");
    assert_eq!(v["residue"]["pi_power"], -2);
    let im = v["residue"]["numeric"]["im"].as_f64().unwrap();
    assert!((im + 1.0 / (8.0 * std::f64::consts::PI.powi(2))).abs() < 1e-12);
    assert_eq!(v["residue"]["transcendental"]["tag"], "P_Gamma");
}

#[test]
fn beta_command_shape() {
    let out = frl(&["beta", "n=2; e=0-1,0-1", "--dim", "4"]);
    let v = stdout_json(&out);
    assert_eq!(v["term_count"], 1);
    assert_eq!(v["terms"][0]["partition"], serde_json::json!([[0, 1]]));
    assert_eq!(v["terms"][0]["blocks"][0]["status"], "primitive-with-residue");
    assert_eq!(v["terms"][0]["quotient"]["edges"].as_array().unwrap().len(), 0);
}

#[test]
fn coproduct_command_shape() {
    let out = frl(&["coproduct", "phi^4"]);
    let v = stdout_json(&out);
    let coefficients: Vec<u64> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["coefficient"].as_u64().unwrap())
        .collect();
    assert_eq!(coefficients, [1, 4, 6, 4, 1]);
}

#[test]
fn cache_hits_are_byte_identical_and_relabeling_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = |graph: &str| {
        vec![
            "period".to_string(),
            graph.to_string(),
            "--dim".into(),
            "4".into(),
            "--method".into(),
            "mc".into(),
            "--samples".into(),
            "5000".into(),
            "--seed".into(),
            "9".into(),
            "--workers".into(),
            "2".into(),
        ]
    };
    let wheel = "n=4; e=0-1,0-2,0-3,1-2,1-3,2-3";
    let first = frl_with_cache(
        &args(wheel).iter().map(String::as_str).collect::<Vec<_>>(),
        &cache,
    );
    assert_eq!(exit_code(&first), 0);
    let lines = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines, 1, "one stored entry after the first run");

    let second = frl_with_cache(
        &args(wheel).iter().map(String::as_str).collect::<Vec<_>>(),
        &cache,
    );
    assert_eq!(first.stdout, second.stdout, "cache hit must re-emit identical bytes");
    let lines = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines, 1, "hit does not append");

    // a relabeled wheel maps to the same canonical key
    let relabeled = "n=4; e=1-2,1-3,2-3,1-0,2-0,3-0";
    let third = frl_with_cache(
        &args(relabeled).iter().map(String::as_str).collect::<Vec<_>>(),
        &cache,
    );
    assert_eq!(exit_code(&third), 0);
    let lines = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines, 1, "relabeled graph hits the same entry");
    let v_first = stdout_json(&first);
    let v_third = stdout_json(&third);
    assert_eq!(v_first["value"], v_third["value"]);

    // --no-cache bypasses both read and write
    let mut bypass: Vec<String> = args(wheel);
    bypass.push("--no-cache".into());
    let fourth = frl_with_cache(
        &bypass.iter().map(String::as_str).collect::<Vec<_>>(),
        &cache,
    );
    assert_eq!(exit_code(&fourth), 0);
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 1);
}

#[test]
fn corpus_verify_passes_deterministically_on_the_bundled_table() {
    let first = frl(&["corpus", "--verify"]);
    assert_eq!(exit_code(&first), 0);
    let v = stdout_json(&first);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["total"], 3);
    let second = frl(&["corpus", "--verify"]);
    assert_eq!(first.stdout, second.stdout, "seeded verification must be reproducible");
}

#[test]
fn corpus_listing_and_user_file_verification() {
    let out = frl(&["corpus"]);
    let v = stdout_json(&out);
    assert_eq!(v["total"], 3);
    assert_eq!(v["entries"][0]["name"], "fish");
    assert_eq!(v["entries"][1]["expected"], 0.5);

    // a user corpus with an impossible expectation fails verification: the
    // report still prints, with exit code 4
    let dir = tempfile::tempdir().unwrap();
    let user = dir.path().join("user.jsonl");
    std::fs::write(
        &user,
        concat!(
            r#"{"name":"bad-fish","graph":"n=2; e=0-1,0-1","dim":4,"expected":3.0,"#,
            r#""tolerance":1e-6,"method":"gauss","points":8}"#,
            "\n"
        ),
    )
    .unwrap();
    let out = frl(&["corpus", "--verify", "--file", user.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 4);
    let v = stdout_json(&out);
    assert_eq!(v["all_pass"], false);
    assert_eq!(v["failed"], 1);
    let rows = v["entries"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["pass"], false);

    // malformed corpus lines are parse errors naming the line
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"graph\": 17}\n").unwrap();
    let out = frl(&["corpus", "--verify", "--file", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stdout_json(&out)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("line 1"));
}

#[test]
fn floats_print_with_seventeen_significant_digits() {
    let out = frl(&["period", "n=2; e=0-1,0-1", "--dim", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("\"value\":9.9999999999999989e-1"),
        "unexpected float formatting: {text}"
    );
}
