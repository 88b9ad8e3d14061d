use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn gdof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdof")).args(args).env_remove("GDOF_OUTPUT_DIR").output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gdof-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn region_json_is_exact_and_reproducible() {
    let args = ["region", "3", "3", "2", "2", "--alpha", "1,2/3,2/3,1"];
    let a = gdof(&args);
    let b = gdof(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["vertices"].as_array().unwrap().iter().any(|p| p[0] == "1" && p[1] == "2"));
    assert_eq!(v["bounds"][6]["rhs"], "5");
}

#[test]
fn sym_and_classify() {
    let v = json(&gdof(&["sym", "3", "2", "3", "2", "--alpha", "1/4"]));
    assert_eq!(v["d_sym"], "7/4");
    let v = json(&gdof(&["classify", "2", "1", "2", "1", "--alpha", "3/2"]));
    assert_eq!(v["regime"], "very_strong");
    assert_eq!(v["alpha_star"], "1");
}

#[test]
fn sweep_csv_and_svg() {
    let out = gdof(&["sweep", "1", "1", "1", "1", "--alpha", "1,a,a,1", "--grid", "0:3:1/60", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 182);
    assert!(text.contains("\n2/3,2/3,"));
    let out = gdof(&["sweep", "1", "1", "1", "1", "--alpha", "1,a,a,1", "--grid", "0:3:1/4", "--format", "svg"]);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.contains("<svg") && svg.contains(r#"data-alpha="1/2""#));
}

#[test]
fn split_point() {
    let v = json(&gdof(&["split", "3", "3", "2", "2", "--alpha", "2/3", "--point", "1,2"]));
    assert_eq!(v["split"]["d2c"], "4/3");
    assert_eq!(v["split"]["d2p"], "2/3");
}

#[test]
fn simulate_records_seed() {
    let args = ["simulate", "2", "1", "2", "1", "--alpha", "1/4", "--seed", "9", "--draws", "2"];
    let a = gdof(&args);
    assert_eq!(a.stdout, gdof(&args).stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["fundamental_sym"], "1");
    assert!(v["tin"]["user1"]["slope"].as_f64().unwrap() < 0.85);
}

#[test]
fn output_file_and_env_directory() {
    let dir = scratch("out");
    let target = dir.join("r.json");
    let out = gdof(&["region", "1", "1", "1", "1", "--alpha", "1/2", "--output", target.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let stdout = gdof(&["region", "1", "1", "1", "1", "--alpha", "1/2"]).stdout;
    assert_eq!(fs::read(&target).unwrap(), stdout);
    // no temporary files left behind
    assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);

    let out = Command::new(env!("CARGO_BIN_EXE_gdof"))
        .args(["region", "1", "1", "1", "1", "--alpha", "1/2", "--format", "svg"])
        .env("GDOF_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(fs::read_to_string(dir.join("region.svg")).unwrap().contains("</svg>"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_are_json_on_stderr() {
    let out = gdof(&["region", "1", "1", "1", "1", "--alpha", "2,1,1,1"]);
    assert!(!out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "unnormalized_exponents");

    let out = gdof(&["split", "1", "1", "1", "1", "--alpha", "1/2", "--point", "1,1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "outside_region");

    let out = gdof(&["region", "0", "1", "1", "1", "--alpha", "1/2"]);
    assert!(!out.status.success());

    let dir = scratch("missing");
    let target = dir.join("no/such/dir/r.json");
    let out = gdof(&["region", "1", "1", "1", "1", "--alpha", "1/2", "--output", target.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "io");
    fs::remove_dir_all(&dir).unwrap();
}
