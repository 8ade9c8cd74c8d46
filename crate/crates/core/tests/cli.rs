use std::path::Path;
use std::process::{Command, Output};

fn ekz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekz")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn coeffs_fractional_window() {
    let out = stdout(&ekz(&["coeffs", "--m", "1.5", "--k", "1"]));
    let r = rows(&out);
    let parsed: Vec<(i64, f64)> = r.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    assert_eq!(parsed, vec![(-1, 0.25), (0, 1.0), (1, 0.25)]);
}

#[test]
fn coeffs_kz_window_normalized() {
    let out = stdout(&ekz(&["coeffs", "--m", "3", "--k", "2", "--normalized"]));
    assert!(out.starts_with("offset,weight,normalized\n"));
    let r = rows(&out);
    let w: Vec<f64> = r.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(w, vec![1.0, 2.0, 3.0, 2.0, 1.0]);
    let n: f64 = r.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((n - 1.0).abs() < 1e-15);
}

#[test]
fn coeffs_rejects_short_window() {
    let out = ekz(&["coeffs", "--m", "0.5"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("domain-error: "), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert!(out.stdout.is_empty());
}

#[test]
fn cutoff_output() {
    let out = stdout(&ekz(&["cutoff", "--m", "7", "--k", "1"]));
    let c: f64 = rows(&out)[0][2].parse().unwrap();
    assert!((c - 0.0607).abs() < 5e-5);
    let bigger: f64 = rows(&stdout(&ekz(&["cutoff", "--m", "9", "--k", "1"])))[0][2].parse().unwrap();
    assert!(bigger < c);
    let err = ekz(&["cutoff", "--m", "1"]);
    assert!(!err.status.success());
}

#[test]
fn etf_family_with_harmonics() {
    let out = stdout(&ekz(&["etf", "--m", "7", "--k", "1..6"]));
    let header = out.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 7);
    let r = rows(&out);
    let at = r.iter().find(|r| r[0].parse::<f64>().unwrap() == 1.0 / 7.0).expect("1/7 row");
    for v in &at[1..] {
        assert!(v.parse::<f64>().unwrap() < 1e-18, "{v}");
    }
}

#[test]
fn etf_identity_and_even_window() {
    let out = stdout(&ekz(&["etf", "--m", "1", "--grid", "64"]));
    assert!(rows(&out).iter().all(|r| r[1].parse::<f64>().unwrap() == 1.0));

    let out = stdout(&ekz(&["etf", "--m", "4", "--k", "1", "--exact"]));
    for r in rows(&out) {
        let f: f64 = r[0].parse().unwrap();
        if f == 0.25 || f == 0.5 {
            assert!(r[1].parse::<f64>().unwrap() < 1e-18);
        }
    }
}

#[test]
fn etf_closed_form_flag_and_json() {
    let out = stdout(&ekz(&["etf", "--m", "3,5", "--closed-form", "--grid", "8", "--no-harmonics", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let cols = v["columns"].as_array().unwrap();
    assert_eq!(cols.len(), 3);
    assert_eq!(cols[1]["name"], "etf_closed_m3_k1");
    assert_eq!(cols[0]["values"].as_array().unwrap().len(), 8);
}

#[test]
fn filter_writes_index_and_na() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    write(&input, "time,value\n0,1\n1,2\n2,3\n3,4\n4,5\n");
    let output = dir.path().join("out.csv");
    let o = ekz(&[
        "filter", "--input", input.to_str().unwrap(), "--m", "3", "--time-col", "time",
        "--output", output.to_str().unwrap(), "--quiet",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty() && o.stderr.is_empty());
    let text = std::fs::read_to_string(&output).unwrap();
    let r = rows(&text);
    assert_eq!(r[0], vec!["0", "NA"]);
    assert_eq!(r[2][1].parse::<f64>().unwrap(), 3.0);
    assert_eq!(r[4], vec!["4", "NA"]);

    let renorm = stdout(&ekz(&["filter", "--input", input.to_str().unwrap(), "--m", "3", "--boundary", "renorm"]));
    assert_eq!(rows(&renorm)[0][1].parse::<f64>().unwrap(), 1.5);
}

#[test]
fn filter_direct_and_iterated_agree() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let mut text = String::from("v\n");
    for t in 0..500 {
        text.push_str(&format!("{}\n", (t as f64 * 0.37).sin() * 10.0 + (t as f64 * 0.051).cos()));
    }
    write(&input, &text);
    let direct = stdout(&ekz(&["filter", "--input", input.to_str().unwrap(), "--m", "3.3", "--k", "3"]));
    let iter = stdout(&ekz(&["filter", "--input", input.to_str().unwrap(), "--m", "3.3", "--k", "3", "--iterated"]));
    for (a, b) in rows(&direct).iter().zip(rows(&iter)) {
        if a[1] == "NA" {
            assert_eq!(b[1], "NA");
        } else {
            let (x, y): (f64, f64) = (a[1].parse().unwrap(), b[1].parse().unwrap());
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn filter_reports_grid_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    write(&input, "t,v\n1,1\n2,2\n4,3\n");
    let o = ekz(&["filter", "--input", input.to_str().unwrap(), "--m", "3", "--time-col", "t"]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("grid-error: ") && err.contains("row 3"), "{err}");
}

#[test]
fn periodogram_commands() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("sin.csv");
    let mut text = String::from("v\n");
    for t in 0..64 {
        text.push_str(&format!("{}\n", (2.0 * std::f64::consts::PI * t as f64 / 8.0).sin()));
    }
    write(&input, &text);
    let out = stdout(&ekz(&["periodogram", "--input", input.to_str().unwrap()]));
    let r = rows(&out);
    assert_eq!(r.len(), 33);
    let power: Vec<f64> = r.iter().map(|r| r[1].parse().unwrap()).collect();
    let peak = power.iter().cloned().fold(0.0, f64::max);
    assert_eq!(power.iter().filter(|&&p| p > 1e-10 * peak).count(), 1);
    assert_eq!(power[8], peak);

    let log = stdout(&ekz(&["periodogram", "--input", input.to_str().unwrap(), "--log"]));
    assert!(log.starts_with("frequency,log_power\n"));
    let l8: f64 = rows(&log)[8][1].parse().unwrap();
    assert!((l8 - peak.ln()).abs() < 1e-12);

    let gappy = dir.path().join("gap.csv");
    write(&gappy, "v\n1\nNA\n2\n");
    let o = ekz(&["periodogram", "--input", gappy.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("data-error: ") && err.contains("trim"), "{err}");
}

#[test]
fn simulate_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig5");
    let o = ekz(&["simulate", "--figure", "5", "--n", "4000", "--seed", "3", "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["etf.csv", "periodogram_ekz_m3.846153846153846_k1.csv", "periodogram_raw.csv"]);
    let etf = std::fs::read_to_string(out.join("etf.csv")).unwrap();
    assert_eq!(
        etf.lines().next().unwrap(),
        "frequency,exact_ekz_m3.846153846153846_k1,closed_ekz_m3.846153846153846_k1,exact_ekz_m3_k1,closed_ekz_m3_k1,exact_ekz_m5_k1,closed_ekz_m5_k1"
    );
}

#[test]
fn simulate_recipe_file_and_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = dir.path().join("r.txt");
    write(&recipe, "n 256\nseed 4\nnoise sigma=2\nsinusoid period=8 amplitude=1\nfilter m=4 k=2\n");
    let out = stdout(&ekz(&["simulate", "--recipe", recipe.to_str().unwrap()]));
    let sections: Vec<&str> = out.lines().filter(|l| l.starts_with("# ")).collect();
    assert_eq!(sections, ["# periodogram_raw", "# periodogram_ekz_m4_k2", "# etf"]);

    let json = stdout(&ekz(&["simulate", "--recipe", recipe.to_str().unwrap(), "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["tables"].as_array().unwrap().len(), 3);

    write(&recipe, "n 256\nnoise sigma=1\nfilter m=4\n");
    let o = ekz(&["simulate", "--recipe", recipe.to_str().unwrap()]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("config-error: recipe line 3"), "{err}");
}

#[test]
fn simulate_rejects_unknown_figure() {
    let o = ekz(&["simulate", "--figure", "9"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("usage-error: "), "{err}");
    assert_eq!(err.lines().count(), 1);
}
