use std::path::PathBuf;
use std::process::{Command, Output};

fn solsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solsplit")).args(args).output().unwrap()
}

fn config(name: &str, text: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("solsplit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    let p = d.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn phi0_prints_one_record() {
    let p = config("phi0.cfg", "kind = phi0\nomega = 0.8\n");
    let o = solsplit(&["phi0", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "omega,phi0\n0.8,0.0452781834653225\n");
}

#[test]
fn predict_record() {
    let p = config("predict.cfg", "kind = predict\nq = 15\nv = 15\nx0 = -10\n");
    let o = solsplit(&["predict", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next().unwrap(), "q,v,x0,A_T,A_R,phi_T,phi_R,t_re,t_im,r_re,r_im");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[3], "0.414213562373095");
    assert!(lines.next().is_none());
}

#[test]
fn zs_record_with_eigenvalue_columns() {
    let p = config("zs.cfg", "kind = zs\nalpha = 0.75\nlambda_re = 2\n");
    let o = solsplit(&["zs", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[9], "1");
    assert_eq!(row[10], "0.25");
    assert_eq!(&row[11..], &["0", "1"]);
}

#[test]
fn config_problems_exit_with_one() {
    let p = config("bad.cfg", "kind = phi0\nomgea = 0.8\n");
    let o = solsplit(&["phi0", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omgea"));
    let p = config("mismatch.cfg", "kind = phi0\nomega = 0.8\n");
    assert_eq!(solsplit(&["sweep", "--config", p.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(solsplit(&["phi0", "--config", "/nonexistent/x.cfg"]).status.code(), Some(1));
    assert_eq!(solsplit(&["phi0"]).status.code(), Some(1));
    assert_eq!(solsplit(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_with_two() {
    let p = config("half.cfg", "kind = phi0\nomega = 0.5\n");
    let o = solsplit(&["phi0", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let p = config("noeig.cfg", "kind = predict\nq = 1\nv = 0.5\nx0 = -10\n");
    let o = solsplit(&["predict", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "weak channels are reported, not errors");
}

#[test]
fn linear_probe_writes_outputs_and_manifest() {
    let p = config(
        "lin.cfg",
        "kind = linear_probe\nq = 0\nv = 10, 20, 40\nx0 = -2\nt = 0.5\nn_points = 2048\nx_min = -64\nx_max = 64\n",
    );
    let out = std::env::temp_dir().join(format!("solsplit-cli-out-{}", std::process::id()));
    let o = solsplit(&["linear", "--config", p.to_str().unwrap(), "--out", out.to_str().unwrap(), "--plot", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("linear.csv")).unwrap();
    assert!(csv.starts_with("v,q,residual\n"));
    assert_eq!(csv.lines().count(), 4);
    let manifest = std::fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert!(manifest.contains("seed=9\n") && manifest.contains("plot=true\n"));
    assert!(manifest.starts_with(&format!("tool=solsplit {}", env!("CARGO_PKG_VERSION"))));
    assert!(out.join("linear.svg").exists());
    assert!(std::fs::read_to_string(out.join("slope.txt")).unwrap().starts_with("slope="));
}
