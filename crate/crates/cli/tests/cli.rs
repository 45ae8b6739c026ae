use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multisym"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn multisym")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn basis_golden() {
    assert_eq!(
        stdout(&["basis", "-d", "2", "-n", "2"]),
        "[[1,0],[0,1],[2,0],[1,1],[0,2]]\n"
    );
    assert_eq!(
        stdout(&["basis", "-d", "2", "-n", "1", "--format", "csv"]),
        "s1,s2\n1,0\n0,1\n"
    );
}

#[test]
fn invert1d_golden() {
    assert_eq!(stdout(&["invert1d", "--z", "6,14,36"]), "{\"points\":[1,2,3]}\n");
    assert_eq!(stdout(&["invert1d", "--z=-1,5,-7"]), "{\"points\":[-2,0,1]}\n");
}

#[test]
fn fiber_golden() {
    let out = stdout(&["fiber", "--z", "0,0,1,1"]);
    assert!(
        out.starts_with("{\"z\":[0,0,1,1],\"in_image\":true,\"case\":\"TwoRegular\",\"w\":[-1,1],"),
        "{out}"
    );
    let out = stdout(&["fiber", "--z", "2,2,2,2", "--format", "csv"]);
    assert_eq!(
        out,
        "z1,z2,z3,z4,case,w_count,w,near_boundary\n2,2,2,2,OneSingular,1,2,false\n"
    );
    let out = stdout(&["fiber", "--z", "2,0,1,0"]);
    assert!(out.contains("\"case\":\"Empty\",\"w\":[]"), "{out}");
}

#[test]
fn byte_stable_across_runs() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.csv", "x1,x2\n0.3,-1.7\n2.25,0.1\n-0.4,0.9\n");
    let commands: Vec<Vec<&str>> = vec![
        vec!["embed", "--in", s(&cfg)],
        vec!["embed", "--in", s(&cfg), "--format", "csv"],
        vec!["jacobian", "--in", s(&cfg)],
        vec!["rank", "--in", s(&cfg)],
        vec!["qdist", "--in", s(&cfg), "--other", s(&cfg)],
        vec!["separate", "--in", s(&cfg), "--other", s(&cfg)],
        vec!["probe", "--example", "lipschitz-loss"],
        vec!["probe", "--example", "c1-loss", "--series", "log-log"],
        vec!["probe", "--example", "smooth-control", "--format", "json"],
        vec!["fiber-scan", "--steps", "5"],
    ];
    for args in commands {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(first.status.code(), second.status.code(), "{args:?}");
    }
}

#[test]
fn numbers_use_lowercase_exponents() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.csv", "x1\n0.1\n0.2\n");
    let out = stdout(&["embed", "--in", s(&cfg)]);
    let (p1, p2) = (0.1f64 + 0.2, 0.1f64 * 0.1 + 0.2 * 0.2);
    assert_eq!(
        out,
        format!("{{\"basis\":[[1],[2]],\"values\":[{p1:.16e},{p2:.16e}]}}\n")
    );
    assert!(!out.contains('E'));
    let rounded = stdout(&["embed", "--in", s(&cfg), "--digits", "3"]);
    assert_eq!(rounded, "{\"basis\":[[1],[2]],\"values\":[3.00e-1,5.00e-2]}\n");
}

#[test]
fn embed_then_invert1d_round_trip() {
    let dir = TempDir::new().unwrap();
    let cases: [&[f64]; 4] = [
        &[3.0, 1.0, 2.0],
        &[0.5],
        &[-1.25, 0.75, 0.1, -0.6, 1.9],
        &[0.0, 2.0, -2.0, 0.4],
    ];
    for (k, xs) in cases.iter().enumerate() {
        let body: String = std::iter::once("x1".to_string())
            .chain(xs.iter().map(|x| x.to_string()))
            .collect::<Vec<_>>()
            .join("\n");
        let cfg = write(&dir, &format!("c{k}.csv"), &(body + "\n"));
        let mut sorted = xs.to_vec();
        sorted.sort_by(f64::total_cmp);

        for format in ["json", "csv"] {
            let e = write(
                &dir,
                &format!("e{k}.{format}"),
                &stdout(&["embed", "--in", s(&cfg), "--format", format]),
            );
            let back = stdout(&["invert1d", "--in", s(&e), "--format", "csv"]);
            let mut lines = back.lines();
            assert_eq!(lines.next(), Some("x1"));
            let got: Vec<f64> = lines.map(|l| l.parse().unwrap()).collect();
            assert_eq!(got.len(), sorted.len());
            for (g, w) in got.iter().zip(&sorted) {
                assert!((g - w).abs() <= 1e-8, "case {k} via {format}: {got:?} vs {sorted:?}");
            }
        }
    }
}

#[test]
fn fit_then_eval_reproduces_labels() {
    let dir = TempDir::new().unwrap();
    let data = write(
        &dir,
        "d.csv",
        "a1,a2,b1,b2,f\n0.1,0.2,0.3,0.4,1.5\n0.3,0.4,0.1,0.2,1.5\n-1,0,1,0.5,0.1\n",
    );
    let model = dir.path().join("m.json");
    let out = run(&["fit-g", "-d", "2", "--in", s(&data), "--out", s(&model)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cfg = write(&dir, "q.csv", "x1,x2\n1,0.5\n-1,0\n");
    assert_eq!(
        stdout(&["eval-g", "--model", s(&model), "--in", s(&cfg)]),
        "{\"g\":1.0000000000000001e-1}\n"
    );

    let sym = stdout(&["check-sym", "-d", "2", "--in", s(&data)]);
    assert!(sym.starts_with("{\"consistent\":true,\"groups\":2"), "{sym}");
}

#[test]
fn asymmetric_dataset_is_rejected() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.csv", "x,y,f\n1,2,0\n5,6,1\n2,1,3\n");
    let out = run(&["fit-g", "-d", "1", "--in", s(&data)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"rows\":[1,3]"), "{err}");

    let report = stdout(&["check-sym", "-d", "1", "--in", s(&data)]);
    assert!(report.starts_with("{\"consistent\":false"), "{report}");
    assert!(
        report.contains("\"points\":[[1],[2]]") && report.contains("\"rows\":[1,3]"),
        "{report}"
    );
}

#[test]
fn rank_flags_duplicates() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.csv", "x1,x2\n0.5,1\n-1,2\n0.5,1\n");
    let out = stdout(&["rank", "--in", s(&cfg)]);
    assert!(
        out.contains("\"full_column_rank\":false,\"coincident_pair\":[1,3]"),
        "{out}"
    );
}

#[test]
fn orbit_eq_and_qdist() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.csv", "x1,x2\n0,0\n1,1\n");
    let y = write(&dir, "y.csv", "x1,x2\n1,1\n0,0\n");
    let z = write(&dir, "z.csv", "x1,x2\n1,0\n0,1\n");
    assert_eq!(
        stdout(&["orbit-eq", "--in", s(&x), "--other", s(&y)]),
        "{\"orbit_equal\":true,\"eps\":0}\n"
    );
    assert_eq!(
        stdout(&["qdist", "--in", s(&x), "--other", s(&y)]),
        "{\"distance\":0,\"matching\":[2,1]}\n"
    );
    let d = stdout(&["qdist", "--in", s(&x), "--other", s(&z)]);
    assert_eq!(d, format!("{{\"distance\":{:.16e},\"matching\":[1,2]}}\n", 2f64.sqrt()));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["basis", "-d", "2"]).status.code(), Some(2));
    assert_eq!(run(&["basis", "-d", "2", "-n", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["probe", "--example", "unknown"]).status.code(), Some(2));
    assert_eq!(run(&["invert1d", "--z", "0,-1"]).status.code(), Some(2));
    assert_eq!(run(&["fiber", "--z", "1,2,3"]).status.code(), Some(2));
    assert_eq!(run(&["embed", "--in", "/nonexistent/c.csv"]).status.code(), Some(1));
    assert_eq!(
        run(&["basis", "-d", "1", "-n", "1", "--out", "/nonexistent/dir/o.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["basis", "-d", "1", "-n", "1", "--tol", "0.1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_input_names_row_and_field() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.csv", "x1,x2\n0,1\n2,oops\n");
    let out = run(&["embed", "--in", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 2, field x2"), "{err}");

    let header = write(&dir, "h.csv", "x1,y\n0,1\n");
    let err = String::from_utf8(run(&["embed", "--in", s(&header)]).stderr).unwrap();
    assert!(err.contains("header field 2"), "{err}");

    let ragged = write(&dir, "r.csv", "x1,x2\n0,1\n2\n");
    let out = run(&["rank", "--in", s(&ragged)]);
    assert_eq!(out.status.code(), Some(2));

    let model = write(&dir, "m.json", "{\"d\": 1");
    let out = run(&["eval-g", "--model", s(&model), "--z", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));
}

#[test]
fn stdin_is_default_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = bin()
        .args(["embed", "--format", "csv"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"x1\n1\n2\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "s1,s2\n3,5\n");
}

#[test]
fn probe_series() {
    let out = stdout(&["probe", "--example", "lipschitz-loss", "--t-steps", "4"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,ratio");
    assert_eq!(lines.len(), 5);
    let ratios: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");

    let json = stdout(&["probe", "--example", "c1-loss", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let exponent = v["exponent"].as_f64().unwrap();
    assert!((exponent - 2.0 / 3.0).abs() < 0.05, "{exponent}");
}

#[test]
fn fiber_scan_shape() {
    let out = stdout(&["fiber-scan", "--lo=-1", "--hi", "1", "--steps", "3"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "z1,z2,z3,z4,case,w_count");
    assert_eq!(lines.len(), 1 + 81);
    assert_eq!(lines[1], "-1,-1,-1,-1,Empty,0");
    assert!(lines.contains(&"0,0,1,1,TwoRegular,2"));
    assert!(lines.contains(&"0,0,0,0,OneSingular,1"));
}
