use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperlen_cli::fmt_num;
use serde_json::Value;
use tempfile::TempDir;

fn hyperlen(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlen"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("run hyperlen")
}

fn setup(body: &str) -> (TempDir, PathBuf, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("job.toml");
    fs::write(&config, body).unwrap();
    let out = dir.path().join("out");
    (dir, config, out)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn twelve_significant_digits() {
    assert_eq!(fmt_num(1.0), "1.00000000000");
    assert_eq!(fmt_num(std::f64::consts::TAU), "6.28318530718");
    assert_eq!(fmt_num(-0.5), "-0.500000000000");
    assert_eq!(fmt_num(1e-40), "1.00000000000e-40");
    assert_eq!(fmt_num(2.5e11), "2.50000000000e11");
    assert_eq!(fmt_num(123456.789), "123456.789000");
    assert_eq!(fmt_num(0.0), "0.0");
    assert_eq!(fmt_num(9.9999999999999), "10.0000000000");
    for x in [std::f64::consts::PI, 1e-7, 3.3e20, -42.125] {
        let back: f64 = fmt_num(x).parse().unwrap();
        assert!((back - x).abs() <= 5e-12 * x.abs());
    }
}

#[test]
fn length_examples() {
    let (_d, config, out) = setup(
        "[surface]\nkind = \"disc\"\n\n[curve]\nkind = \"segment\"\nfrom = [0.0, 0.0]\nto = [0.5, 0.0]\n\n\
         [quadrature]\norder = 16\nedge_pieces = 8\n",
    );
    let o = hyperlen(&["length"], &config, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = json(&out.join("length.json"));
    let l = report["length"].as_f64().unwrap();
    assert!((l - 3f64.ln()).abs() < 1e-10, "{l}");
    assert_eq!(report["quadrature"]["order"], 16);

    let (_d, config, out) =
        setup("[surface]\nkind = \"plane\"\n\n[curve]\nkind = \"circle\"\nradius = 2.0\n");
    let o = hyperlen(&["length", "--format", "csv"], &config, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(out.join("length.csv")).unwrap();
    assert!(text.starts_with("quantity,value\n"));
    assert!(text.contains("\nlength,0.0\n"));
    assert!(text.contains("hyperbolic,false"));
    assert!(text.contains("non-hyperbolic"));
}

#[test]
fn config_errors_name_the_field() {
    let cases = [
        ("[surface]\nkind = \"annulus\"\ninner = 1.5\n\n[curve]\nkind = \"circle\"\nradius = 0.5\n", "surface.inner"),
        ("[surface]\nkind = \"annulus\"\n\n[curve]\nkind = \"circle\"\nradius = 0.5\n", "surface"),
        ("[surface]\nkind = \"disc\"\ninner = 0.5\n\n[curve]\nkind = \"circle\"\nradius = 0.5\n", "surface"),
        ("[surface]\nkind = \"disc\"\n\n[curve]\nkind = \"circle\"\nradius = -0.5\n", "curve.radius"),
        ("[surface]\nkind = \"disc\"\n\n[curve]\nkind = \"circle\"\nlog_radius = -1000.0\n", "curve.log_radius"),
        ("[surface]\nkind = \"disc\"\n\n[curve]\nkind = \"circle\"\nradius = 0.5\ncolour = 1\n", "colour"),
        ("[surface]\nkind = \"torus\"\n\n[curve]\nkind = \"circle\"\nradius = 0.5\n", "torus"),
        ("[surface]\nkind = \"disc\"\n\n[curve]\nkind = \"polyline\"\nvertices = [[0.0, 0.0]]\n", "curve"),
        ("[surface]\nkind = \"disc\"\n\n[curve]\nkind = \"circle\"\nradius = 0.5\n\n[quadrature]\norder = 0\n", "quadrature"),
    ];
    for (body, field) in cases {
        let (_d, config, out) = setup(body);
        let o = hyperlen(&["length"], &config, &out);
        assert_eq!(o.status.code(), Some(2), "{body}: {}", stderr(&o));
        assert!(stderr(&o).contains(field), "{body}: {}", stderr(&o));
    }
}

#[test]
fn group_config_errors() {
    let cases = [
        ("[group]\nlengths = [6.0, -1.0]\n", "group.lengths[1]"),
        (
            "[group]\nlengths = [6.0, 6.0]\naxes = [0.0]\n",
            "group.axes",
        ),
        (
            "[group]\ngenerators = [[1.0, 0.0, 0.0, 1.0]]\n",
            "group.generators",
        ),
        (
            "[group]\ngenerators = [[2.0, 1.0, 1.0, 1.0]]\nlengths = [1.0]\n",
            "group",
        ),
        (
            "max_word_length = 0\n[group]\nlengths = [6.0]\n",
            "max_word_length",
        ),
    ];
    for (body, field) in cases {
        let (_d, config, out) = setup(body);
        let o = hyperlen(&["spectrum"], &config, &out);
        assert_eq!(o.status.code(), Some(2), "{body}: {}", stderr(&o));
        assert!(stderr(&o).contains(field), "{body}: {}", stderr(&o));
    }
}

#[test]
fn missing_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hyperlen"))
        .args(["length", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = hyperlen(&["length"], &dir.path().join("absent.toml"), dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn precondition_violations() {
    let (_d, config, out) =
        setup("[surface]\nkind = \"disc\"\n\n[curve]\nkind = \"circle\"\nradius = 1.5\n");
    let o = hyperlen(&["length"], &config, &out);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let (_d, config, out) =
        setup("[surface]\nkind = \"plane\"\n\n[curve]\nkind = \"circle\"\nradius = 0.5\n");
    let o = hyperlen(&["shorten"], &config, &out);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn certification_failure_still_writes_the_certificate() {
    let (_d, config, out) = setup("[group]\nlengths = [0.1, 0.1]\n");
    let o = hyperlen(&["certify"], &config, &out);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    let cert = json(&out.join("certificate.json"));
    assert_eq!(cert["certified"], false);
    assert_eq!(cert["violation"]["kind"], "overlap");

    let o = hyperlen(&["spectrum"], &config, &out);
    assert_eq!(o.status.code(), Some(4));

    let (_d, config, out) = setup("[group]\ngenerators = [[2.0, 1.0, 1.0, 1.0]]\n");
    let o = hyperlen(&["certify", "--seed", "7"], &config, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        json(&out.join("certificate.json"))["discs"]
            .as_array()
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn non_convergence_exit_code() {
    let (_d, config, out) = setup(
        "[surface]\nkind = \"annulus\"\ninner = 0.01\n\n[curve]\nkind = \"circle\"\nradius = 0.5\n\n\
         [options]\nmax_iterations = 3\n",
    );
    let o = hyperlen(&["shorten"], &config, &out);
    assert_eq!(o.status.code(), Some(5), "{}", stderr(&o));
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("iteration,length\n"));
    assert_eq!(trace.lines().count(), 5);
    assert_eq!(json(&out.join("shorten.json"))["status"], "max_iterations");
}

#[test]
fn spectrum_csv_and_file_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    };
    let a = write(
        "a.toml",
        "max_word_length = 2\n[group]\nlengths = [6.0, 6.0]\n",
    );
    let b = write(
        "b.toml",
        "max_word_length = 2\n[group]\nlengths = [6.0, 6.5]\n",
    );
    let o = hyperlen(
        &["spectrum", "--format", "csv"],
        &a,
        &dir.path().join("csv"),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("csv/spectrum.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "word,length");
    assert_eq!(lines.len(), 1 + 6);
    assert_eq!(lines[1], "x1,6.00000000000");

    for (cfg, sub) in [(&a, "sa"), (&b, "sb")] {
        let o = hyperlen(&["spectrum"], cfg, &dir.path().join(sub));
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let spec = json(&dir.path().join("sa/spectrum.json"));
    assert_eq!(spec["k"], 2);
    assert_eq!(spec["max_word_length"], 2);
    assert_eq!(spec["entries"][0]["word"], "x1");

    let cmp = write(
        "cmp.toml",
        "[a]\nfile = \"sa/spectrum.json\"\n\n[b]\nfile = \"sb/spectrum.json\"\n",
    );
    let o = hyperlen(&["compare"], &cmp, &dir.path().join("cmp"));
    assert!(o.status.success(), "{}", stderr(&o));
    let c = json(&dir.path().join("cmp/comparison.json"));
    assert_eq!(c["verdict"], "distinct");
    assert_eq!(c["witness"]["index"], 1);

    let same = write(
        "same.toml",
        "[a]\nfile = \"sa/spectrum.json\"\n\n[b]\nfile = \"sa/spectrum.json\"\n",
    );
    let o = hyperlen(&["compare"], &same, &dir.path().join("same"));
    assert!(o.status.success());
    assert_eq!(
        json(&dir.path().join("same/comparison.json"))["verdict"],
        "indistinguishable_at_truncation"
    );

    let mixed = write(
        "mixed.toml",
        "max_word_length = 3\n[a]\nfile = \"sa/spectrum.json\"\n\n[b]\nlengths = [6.0, 6.0]\n",
    );
    let o = hyperlen(&["compare"], &mixed, &dir.path().join("mixed"));
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let both = write(
        "both.toml",
        "[a]\nfile = \"x.json\"\nlengths = [1.0]\n\n[b]\nlengths = [1.0]\n",
    );
    let o = hyperlen(&["compare"], &both, &dir.path().join("both"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("a:"));
}

#[test]
fn deform_families() {
    let (_d, config, out) = setup(
        "class = \"x1\"\nmax_word_length = 3\n\n[family]\nkind = \"representation\"\n\
         schedules = [[6.0, 6.0], [6.0, 6.0]]\naxes = [0.0, 1.5707963267948966]\n",
    );
    let o = hyperlen(&["deform"], &config, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        json(&out.join("comparison.json"))["verdict"],
        "indistinguishable_at_truncation"
    );
    assert_eq!(json(&out.join("deform.json"))["trend"], "constant");

    let (_d, config, out) = setup("[family]\nkind = \"annulus\"\n");
    let o = hyperlen(&["deform"], &config, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    let rows: Vec<(f64, f64)> = trace
        .lines()
        .skip(1)
        .map(|l| {
            let (t, v) = l.split_once(',').unwrap();
            (t.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 101);
    assert_eq!(trace.lines().next(), Some("t,value"));
    for (t, v) in rows {
        assert!((v - 1.0 / (1.0 + t)).abs() < 1e-11, "t = {t}: {v}");
    }
    assert_eq!(json(&out.join("comparison.json"))["verdict"], "distinct");

    let (_d, config, out) = setup(
        "grid = 11\n\n[family]\nkind = \"collar\"\nlog_r = 12.566370614359172\nlog_r_inner = 6.283185307179586\n\n\
         [curve]\nkind = \"circle\"\nradius = 1.0\nturns = 2\n",
    );
    let o = hyperlen(&["deform", "--format", "csv"], &config, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = fs::read_to_string(out.join("deform.csv")).unwrap();
    assert!(
        report.contains("kobayashi_upper_bound,3.14159265359"),
        "{report}"
    );
    assert!(report.contains("trend,decreasing"), "{report}");
    assert!(!out.join("comparison.json").exists());
}

#[test]
fn deform_rejects_uncertified_paths() {
    let (_d, config, out) =
        setup("[family]\nkind = \"representation\"\nschedules = [[6.0, 0.5], [6.0, 0.5]]\n");
    let o = hyperlen(&["deform"], &config, &out);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));

    let (_d, config, out) = setup("[family]\nkind = \"collar\"\nr = 2.0\nr_inner = 3.0\n");
    let o = hyperlen(&["deform"], &config, &out);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("family"));
}
