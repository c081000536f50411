//! Acceptance suite for the command-line contract: the documented
//! invocations produce the stated exit codes and values, byte-stably
//! across runs.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperorder"))
        .args(args)
        .env_remove("HYPERORDER_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn report(label: &str, pass: bool) {
    println!("criterion 8: {} - {label}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion 8 failed: {label}");
}

#[test]
fn verify_theorem1_full_grid() {
    let out = run(&["verify", "--theorem", "1", "--n", "3..300"]);
    let text = stdout(&out);
    let pass_lines = text.lines().filter(|l| l.ends_with(')') && l.contains(" pass")).count();
    report(
        "verify --theorem 1 --n 3..300 exits 0 with 298 pass lines",
        out.status.code() == Some(0) && pass_lines == 298 && text.lines().count() == 298,
    );
}

#[test]
fn verify_theorem2_full_grid() {
    let out = run(&["verify", "--theorem", "2", "--m", "1..40", "--n", "2..40"]);
    let text = stdout(&out);
    report(
        "verify --theorem 2 --m 1..40 --n 2..40 exits 0",
        out.status.code() == Some(0) && text.lines().count() == 40 * 39,
    );
}

#[test]
fn verify_below_domain_is_usage_error() {
    let out = run(&["verify", "--theorem", "1", "--n", "2..2"]);
    report(
        "verify --theorem 1 --n 2..2 exits 2",
        out.status.code() == Some(2),
    );
}

#[test]
fn count_k3_both_methods() {
    let out = run(&["count", "--family", "k3", "--n", "6", "--method", "both"]);
    let text = stdout(&out);
    report(
        "count --family k3 --n 6 --method both matches at 18/19",
        out.status.code() == Some(0)
            && text.contains("probability=18/19")
            && text.contains("count=2304854534062080000")
            && text.contains("match"),
    );
    // Byte stability across runs.
    let again = run(&["count", "--family", "k3", "--n", "6", "--method", "both"]);
    report("count output is byte-stable", out.stdout == again.stdout);
}

#[test]
fn count_k12_both_methods() {
    let out = run(&["count", "--family", "k12", "--m", "3", "--n", "4", "--method", "both"]);
    let text = stdout(&out);
    report(
        "count --family k12 --m 3 --n 4 --method both matches at 7/8",
        out.status.code() == Some(0) && text.contains("probability=7/8") && text.contains("match"),
    );
}

#[test]
fn count_over_dp_cap_is_capacity_error() {
    let out = run(&["count", "--family", "k3", "--n", "7", "--method", "brute"]);
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    report(
        "count --family k3 --n 7 --method brute is a capacity error (35 vertices)",
        out.status.code() == Some(2) && err.contains("capacity") && err.contains("35"),
    );
}

#[test]
fn gosper_family_t1() {
    let out = run(&["gosper", "--family", "t1", "--n", "6"]);
    let text = stdout(&out);
    // R(k) = -(9k^2 - 3k + 18)/(12(k+1)), printed content-normalized.
    report(
        "gosper --family t1 --n 6 prints the certificate and closed form 3/2",
        out.status.code() == Some(0)
            && text.contains("R(k) = (-3*k^2 + k - 6)/(4*k + 4)")
            && text.contains("telescoped sum over [0, 1]: 3/2")
            && text.contains("reference certificate: valid")
            && text.contains("found matches reference: true"),
    );
    let again = run(&["gosper", "--family", "t1", "--n", "6"]);
    report("gosper output is byte-stable", out.stdout == again.stdout);
}

#[test]
fn gosper_constant_ratio() {
    let out = run(&["gosper", "--ratio", "1"]);
    report(
        "gosper --ratio 1 finds R(k) = k",
        out.status.code() == Some(0) && stdout(&out) == "R(k) = k\n",
    );
}

#[test]
fn gosper_harmonic_ratio() {
    let out = run(&["gosper", "--ratio", "k/(k+1)"]);
    report(
        "gosper --ratio k/(k+1) reports not summable",
        out.status.code() == Some(0) && stdout(&out) == "not summable\n",
    );
}

#[test]
fn verify_json_schema_and_determinism() {
    let args = ["verify", "--theorem", "2", "--m", "1..4", "--n", "2..6", "--format", "json"];
    let out = run(&args);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["results"].as_array().unwrap().len(), 4 * 5);
    let again = run(&args);
    report(
        "verify json output carries schema 1 and is byte-stable",
        out.status.code() == Some(0) && out.stdout == again.stdout,
    );
}

#[test]
fn verify_jobs_and_out_file() {
    let dir = std::env::temp_dir().join(format!("hyperorder-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let parallel = run(&[
        "verify", "--theorem", "1", "--n", "3..40",
        "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    let from_file = std::fs::read_to_string(&path).unwrap();
    let sequential = Command::new(env!("CARGO_BIN_EXE_hyperorder"))
        .args(["verify", "--theorem", "1", "--n", "3..40", "--format", "csv"])
        .env("HYPERORDER_JOBS", "1")
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    report(
        "--out writes the same bytes that --jobs 1 prints",
        parallel.status.code() == Some(0)
            && from_file == String::from_utf8(sequential.stdout).unwrap()
            && from_file.lines().count() == 39,
    );
}
