use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn isocone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isocone")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    isocone(&args)
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let idx = rdr.headers().unwrap().iter().position(|h| h == name).unwrap();
    rdr.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

const CONE: &str = r#"
[body]
family = "cone"
n = 2
a = 2.0

[volumes]
min = 1.0
max = 100.0
points = 3
"#;

const HYPERBOLIC_N1: &str = r#"
[body]
family = "hyperbolic"
n = 1
a = 1.0
s = 1.0

[volumes]
min = 1.0
max = 1e4
points = 9
"#;

#[test]
fn cone_profile_matches_the_cone() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "cone.toml", CONE);
    let out = tmp.path().join("out");
    let o = run("profile", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(header(&out.join("profile.csv")), "v,P_upper,I_cone,I_halfspace,ratio,Y,H,mechanism,cap_station");
    let ratios = column(&out.join("profile.csv"), "ratio");
    assert_eq!(ratios.len(), 3);
    for r in ratios {
        assert!((r.parse::<f64>().unwrap() - 1.0).abs() < 1e-8, "{r}");
    }
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["command"], "profile");
}

#[test]
fn hyperbolic_ratio_decreases_below_five_percent() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "h.toml", HYPERBOLIC_N1);
    let out = tmp.path().join("out");
    let o = run("profile", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ratios: Vec<f64> = column(&out.join("profile.csv"), "ratio").iter().map(|r| r.parse().unwrap()).collect();
    assert!(ratios.windows(2).all(|w| w[1] <= w[0]));
    assert!(ratios.last().unwrap() - 1.0 < 0.05);
}

#[test]
fn missing_asymptote_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "exp.toml", "[body]\nfamily = \"exp\"\nn = 2\n");
    let o = run("profile", &cfg, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no affine asymptote"));
}

#[test]
fn malformed_configs_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let unknown = write_config(tmp.path(), "u.toml", "[body]\nfamily = \"catenoid\"\nn = 2\n");
    assert_eq!(run("profile", &unknown, &out, &[]).status.code(), Some(2));
    let short = write_config(tmp.path(), "s.toml", &CONE.replace("points = 3", "points = 2"));
    assert_eq!(run("profile", &short, &out, &[]).status.code(), Some(2));
    let cone = write_config(tmp.path(), "c.toml", CONE);
    assert_eq!(run("profile", &cone, &out, &["--tol-override", "bogus=1"]).status.code(), Some(2));
    assert_eq!(run("profile", &tmp.path().join("absent.toml"), &out, &[]).status.code(), Some(1));
}

#[test]
fn failing_checks_exit_with_three() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "h.toml", HYPERBOLIC_N1);
    let out = tmp.path().join("out");
    let o = run("profile", &cfg, &out, &["--tol-override", "final_ratio=1e-9"]);
    assert_eq!(o.status.code(), Some(3));
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], false);
    assert_eq!(summary["tolerances"]["final_ratio"], 1e-9);
}

#[test]
fn foliation_of_a_cone_is_centred_at_the_vertex() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "cone.toml", CONE);
    let out = tmp.path().join("out");
    let o = run("foliation", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(header(&out.join("foliation.csv")), "x,c,r,H,gprime,volume,perimeter");
    for c in column(&out.join("foliation.csv"), "c") {
        assert_eq!(c.parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn foliation_gprime_approaches_its_limit() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "h.toml", &HYPERBOLIC_N1.replace("n = 1", "n = 2"));
    let out = tmp.path().join("out");
    assert!(run("foliation", &cfg, &out, &[]).status.success());
    let g: f64 = column(&out.join("foliation.csv"), "gprime").last().unwrap().parse().unwrap();
    assert!((g - 2f64.sqrt()).abs() < 1e-4);
}

#[test]
fn eigen_report_has_positive_margins_and_no_kernel() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "cone.toml", CONE);
    let out = tmp.path().join("out");
    let o = run("eigen", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let path = out.join("eigen.csv");
    assert_eq!(header(&path), "r,mu,n_over_R2,margin,kernel_dim");
    assert!(column(&path, "margin").iter().all(|m| m.parse::<f64>().unwrap() > 0.0));
    assert!(column(&path, "kernel_dim").iter().all(|k| k == "0"));
    let mu: f64 = column(&path, "mu")[0].parse().unwrap();
    assert!((mu / 339.0 - 1.0).abs() < 0.01);
}

#[test]
fn summary_echo_reproduces_the_run() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "cone.toml", CONE);
    let first = tmp.path().join("first");
    assert!(run("verify-all", &cfg, &first, &["--tol-override", "trend=2e-6"]).status.success());
    let second = tmp.path().join("second");
    assert!(run("verify-all", &first.join("summary.json"), &second, &[]).status.success());
    for file in ["profile.csv", "foliation.csv", "eigen.csv", "caps.csv"] {
        assert_eq!(fs::read(first.join(file)).unwrap(), fs::read(second.join(file)).unwrap(), "{file}");
    }
    let echoed: serde_json::Value = serde_json::from_str(&fs::read_to_string(second.join("summary.json")).unwrap()).unwrap();
    assert_eq!(echoed["config"]["tolerances"]["trend"], 2e-6);
}
