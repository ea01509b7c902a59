use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn herglotz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_herglotz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no `{key}` in {text}"))
        .trim()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn eval_examples() {
    let o = herglotz(&["eval", "--fn", "catalogue:f2", "--point", "4i,4i"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = herglotz::complex_fmt::parse_complex(field(&stdout(&o), "value")).unwrap();
    assert!(
        (v - num_complex::Complex64::new(0.0, -0.1)).norm() < 1e-15,
        "{v}"
    );
    assert_eq!(field(&stdout(&o), "component"), "C+xC+");

    let o = herglotz(&["eval", "--fn", "catalogue:f7", "--point", "-i,-i"]);
    assert_eq!(field(&stdout(&o), "value"), "-0-1i");

    let o = herglotz(&[
        "eval",
        "--fn",
        "herglotz:{a:1,b:[2],mu:zero}",
        "--point",
        "i",
    ]);
    assert_eq!(field(&stdout(&o), "value"), "1+2i");

    let o = herglotz(&["eval", "--fn", "cauchy", "--point", "4i,4i"]);
    assert_eq!(o.status.code(), Some(3));
    let o = herglotz(&[
        "eval",
        "--fn",
        "cauchy:zero",
        "--measure",
        "mu2",
        "--point",
        "4i,4i",
    ]);
    let v = herglotz::complex_fmt::parse_complex(field(&stdout(&o), "value")).unwrap();
    assert!((v.im + 0.1).abs() < 1e-8, "{v}");
}

#[test]
fn eval_writes_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eval.json");
    let o = herglotz(&[
        "eval",
        "--fn",
        "cauchy:lebesgue2",
        "--point",
        "i,-2i",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_json(&out);
    assert_eq!(r["component"], "C+xC-");
    assert_eq!(r["manifest"]["command"], "eval");
    assert_eq!(r["manifest"]["inputs"]["point"], "i,-2i");
    assert!(r["error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn check_examples_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f7.json");
    let o = herglotz(&[
        "check",
        "--fn",
        "catalogue:f7",
        "characterize",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = read_json(&out);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["report"]["d"], serde_json::json!([0.0, 0.0]));

    let o = herglotz(&["check", "--fn", "catalogue:f4", "nondep"]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["verdict"], "fail");

    let o = herglotz(&["check", "--fn", "catalogue:f6", "positivity"]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let witness = &r["report"]["witnesses"][0]["point"];
    for coord in witness.as_array().unwrap() {
        let z = herglotz::complex_fmt::parse_complex(coord.as_str().unwrap()).unwrap();
        assert!(z.im > 0.0, "{witness}");
    }
    assert!(stderr(&o).starts_with("fail"));
}

#[test]
fn inconclusive_check_exits_two() {
    // A limit at infinity that depends on the base point.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"characterize":{"limits":{"tol":1e-30}}}"#).unwrap();
    let o = herglotz(&[
        "check",
        "--fn",
        "cauchy:mu2",
        "characterize",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn reports_are_deterministic_and_echo_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = herglotz(&[
            "check",
            "--fn",
            "catalogue:f5",
            "characterize",
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(1));
        std::fs::read_to_string(out).unwrap()
    };
    let a = run("a.json", "11");
    let b = run("a.json", "11");
    assert_eq!(a, b);
    let c = run("a.json", "12");
    assert_ne!(a, c);
    let r: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(r["manifest"]["seed"], 11);

    let o = herglotz(&["check", "--fn", "catalogue:f5", "symmetry"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["manifest"]["seed"], herglotz::sampling::DEFAULT_SEED);
}

#[test]
fn reproduce_tables_matches_reference() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(&["reproduce-tables", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t2 = read_json(&dir.path().join("table2.json"));
    assert_eq!(t2["table"]["all_match"], true);
    assert_eq!(
        t2["table"]["rows"][1]["computed"],
        serde_json::json!([true, false, false])
    );
    assert_eq!(
        t2["table"]["rows"][5]["computed"],
        serde_json::json!([true, false, true])
    );
    let t1 = read_json(&dir.path().join("table1.json"));
    assert_eq!(t1["table"]["rows"][7]["cells"][0]["formula"], "i");
    assert!(stdout(&o).contains("| f4 | ✓ | ✓ | × | yes |"));
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn invert_examples() {
    let o = herglotz(&[
        "invert",
        "--fn",
        "catalogue:f2",
        "--phi",
        "cauchy2d",
        "--mode",
        "alternating",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let estimate: f64 = field(&text, "# estimate").parse().unwrap();
    assert!((estimate - PI * PI / 2.0).abs() < 1e-3, "{estimate}");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 10);
    assert!(rows[0][2].is_empty() && !rows[9][2].is_empty());

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f4.csv");
    let o = herglotz(&[
        "invert",
        "--fn",
        "catalogue:f4-upper",
        "--phi",
        "cauchy2d",
        "--mode",
        "classic",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let estimate: f64 = field(&stdout(&o), "estimate").parse().unwrap();
    assert!((estimate - 5.5 * PI * PI).abs() < 1e-3, "{estimate}");
    assert_eq!(csv_rows(&std::fs::read_to_string(out).unwrap()).len(), 10);
}

#[test]
fn invert_lebesgue_alternating() {
    let o = herglotz(&[
        "invert",
        "--fn",
        "cauchy:lebesgue2",
        "--phi",
        "cauchy2d",
        "--mode",
        "alternating",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let estimate: f64 = field(&stdout(&o), "# estimate").parse().unwrap();
    assert!((estimate - PI * PI).abs() < 1e-3, "{estimate}");
}

#[test]
fn unconverged_inversion_exits_two_with_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"stieltjes":{"limits":{"y_sequence":[0.5,0.25,0.125,0.0625]}}}"#,
    )
    .unwrap();
    let o = herglotz(&[
        "invert",
        "--fn",
        "catalogue:f2",
        "--phi",
        "cauchy2d",
        "--mode",
        "alternating",
        "--tol",
        "1e-9",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(csv_rows(&stdout(&o)).len(), 4);
}

#[test]
fn errors_exit_three_with_diagnostics() {
    let o = herglotz(&[
        "eval",
        "--fn",
        "herglotz:{a:1,c:[2],mu:zero}",
        "--point",
        "i",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("unknown field `c`"), "{}", stderr(&o));

    let o = herglotz(&["eval", "--fn", "catalogue:f9", "--point", "i,i"]);
    assert_eq!(o.status.code(), Some(3));

    let o = herglotz(&["eval", "--fn", "catalogue:f2", "--point", "1,i"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("coordinate 0"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m.json");
    std::fs::write(
        &file,
        "{\n  \"type\": \"atomic\",\n  \"points\": [[0]],\n  \"weight\": [1]\n}",
    )
    .unwrap();
    let o = herglotz(&[
        "eval",
        "--fn",
        "cauchy",
        "--measure",
        file.to_str().unwrap(),
        "--point",
        "i",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr(&o);
    assert!(e.contains("weight") && e.contains("line 4"), "{e}");

    let o = herglotz(&["nonsense"]);
    assert_eq!(o.status.code(), Some(3));
    let o = herglotz(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn kernel_command() {
    let o = herglotz(&["kernel", "--point", "i", "--t", "0"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "kernel"), "1i");
    assert_eq!(field(&stdout(&o), "poisson"), "1");
    let o = herglotz(&["kernel", "--point", "-i,i", "--t", "1,2"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("poisson"));
}
