use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use entro::EntropyDiagram;
use serde_json::Value;
use tempfile::TempDir;

fn entro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entro"))
        .args(args)
        .env_remove("ENTRO_LOG_BASE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EPR: &str = r#"{"layout":[{"label":"A","dim":2},{"label":"B","dim":2}],
  "amp_re":[0.7071067811865476,0,0,0.7071067811865476]}"#;

fn assert_cells(d: &EntropyDiagram, want: &[f64], tol: f64) {
    for (g, w) in d.cells().iter().zip(want) {
        assert!((g - w).abs() <= tol, "{:?} vs {want:?}", d.cells());
    }
}

#[test]
fn venn_of_epr_round_trips() {
    let dir = TempDir::new().unwrap();
    let epr = write(&dir, "epr.json", EPR);
    let out = entro(&["venn", "--state", s(&epr), "--parties", "A,B"]);
    let v = json(&out);
    assert_eq!(v["arity"], 2);
    let cells: Vec<&String> = v["cells"].as_object().unwrap().keys().collect();
    assert_eq!(cells, ["A|B", "A:B", "B|A"]);
    let d: EntropyDiagram = serde_json::from_value(v.clone()).unwrap();
    assert_cells(&d, &[-1.0, 2.0, -1.0], 1e-9);
    let again = serde_json::to_value(&d).unwrap();
    for (k, x) in v["cells"].as_object().unwrap() {
        assert!((x.as_f64().unwrap() - again["cells"][k].as_f64().unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn density_matrix_input_matches_pure_input() {
    let dir = TempDir::new().unwrap();
    let rho = write(
        &dir,
        "rho.json",
        r#"{"layout":[{"label":"A","dim":2},{"label":"B","dim":2}],
           "re":[[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]]}"#,
    );
    let d: EntropyDiagram = serde_json::from_value(json(&entro(&[
        "venn",
        "--state",
        s(&rho),
        "--parties",
        "A,B",
    ])))
    .unwrap();
    assert_cells(&d, &[-1.0, 2.0, -1.0], 1e-9);
}

#[test]
fn epr_run_writes_both_diagrams() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("diagram.json");
    let v = json(&entro(&[
        "epr",
        "run",
        "--basis1",
        "z",
        "--basis2",
        "x",
        "--out",
        s(&out_path),
    ]));
    let device: EntropyDiagram = serde_json::from_value(v["device_diagram"].clone()).unwrap();
    assert_cells(&device, &[1.0, 0.0, 1.0], 1e-9);
    let full: EntropyDiagram = serde_json::from_value(v["full_diagram"].clone()).unwrap();
    assert_eq!(full.arity(), 3);
    assert!(v["system_device_mutual"].as_f64().unwrap() > 0.0);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(saved, v);

    let zz = json(&entro(&["epr", "--basis1", "z", "--basis2", "z"]));
    let device: EntropyDiagram = serde_json::from_value(zz["device_diagram"].clone()).unwrap();
    assert_cells(&device, &[0.0, 1.0, 0.0], 1e-9);
}

#[test]
fn evaporation_csv() {
    let out = entro(&[
        "bh-evaporate",
        "--mass",
        "1",
        "--fraction",
        "0.001",
        "--mmin",
        "0.5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        header,
        [
            "step",
            "M",
            "S_BH",
            "dE",
            "dE_eff",
            "dS_BH",
            "dS_rad",
            "dS_corr",
            "zurek_ratio",
            "defect"
        ]
    );
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((first[8] - 1.3335).abs() < 5e-5, "zurek ratio {}", first[8]);
    assert!(text.lines().count() > 100);
}

#[test]
fn evaporation_json_summary_from_formation() {
    let v = json(&entro(&[
        "bh-evaporate",
        "--temperature",
        "0.01",
        "--fraction",
        "0.01",
        "--mmin",
        "1e-9",
    ]));
    let d: EntropyDiagram = serde_json::from_value(v["collapse_diagram"].clone()).unwrap();
    assert_eq!(d.labels(), ["BH", "R'"]);
    assert!(
        v["residual_defect"].as_f64().unwrap().abs() <= v["truncation_bound"].as_f64().unwrap()
    );
}

#[test]
fn formation_domain_error_exits_2() {
    let out = entro(&["bh-form", "--temperature", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("T = 2"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let v = json(&entro(&["bh-form", "--temperature", "0.01"]));
    let d: EntropyDiagram = serde_json::from_value(v["collapse_diagram"].clone()).unwrap();
    assert_eq!(d.cell("BH:R'"), Some(0.0));
}

#[test]
fn validation_errors_exit_1_and_name_the_path() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"layout":[{"label":"A","dim":2}],"re":[[0.5,0.3],[0.1,0.5]]}"#,
    );
    let out = entro(&["quantum", "--state", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(
        err.contains("bad.json") && err.contains("Hermitian"),
        "{err}"
    );

    let garbage = write(&dir, "garbage.json", "{not json");
    let out = entro(&["venn", "--state", s(&garbage), "--parties", "A,B"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("garbage.json"));

    let table = write(
        &dir,
        "t.json",
        r#"{"variables":[{"label":"X","size":2}],"weights":[0.2,0.2]}"#,
    );
    let out = entro(&["classical", "--table", s(&table)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("t.json"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(entro(&["teleport"]).status.code(), Some(1));
    assert_eq!(
        entro(&["bh-form", "--temperature", "1", "--bogus"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(entro(&["epr", "--basis1", "y"]).status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    let epr = write(&dir, "epr.json", EPR);
    assert_eq!(
        entro(&["venn", "--state", s(&epr), "--parties", "A,C"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        entro(&[
            "venn",
            "--state",
            s(&epr),
            "--parties",
            "A,B",
            "--format",
            "csv"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(entro(&["--help"]).status.code(), Some(0));
}

#[test]
fn log_base_from_environment() {
    let dir = TempDir::new().unwrap();
    let epr = write(&dir, "epr.json", EPR);
    let out = Command::new(env!("CARGO_BIN_EXE_entro"))
        .args(["venn", "--state", s(&epr), "--parties", "A,B"])
        .env("ENTRO_LOG_BASE", "e")
        .output()
        .unwrap();
    let d: EntropyDiagram = serde_json::from_value(json(&out)).unwrap();
    assert_cells(
        &d,
        &[
            -std::f64::consts::LN_2,
            2.0 * std::f64::consts::LN_2,
            -std::f64::consts::LN_2,
        ],
        1e-9,
    );

    let bad = Command::new(env!("CARGO_BIN_EXE_entro"))
        .args(["venn", "--state", s(&epr), "--parties", "A,B"])
        .env("ENTRO_LOG_BASE", "10")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));

    // The black-hole verbs always work in nats.
    let bh = Command::new(env!("CARGO_BIN_EXE_entro"))
        .args(["bh-form", "--temperature", "0.01"])
        .env("ENTRO_LOG_BASE", "10")
        .output()
        .unwrap();
    assert_eq!(json(&bh)["collapse_diagram"]["log_base"], "e");
}

#[test]
fn classical_and_tripartite_venn() {
    let dir = TempDir::new().unwrap();
    let t = write(
        &dir,
        "xyz.json",
        r#"{"variables":[{"label":"X","size":2},{"label":"Y","size":2},{"label":"Z","size":2}],
           "weights":[0.25,0,0,0.25,0,0.25,0.25,0]}"#,
    );
    let v = json(&entro(&["classical", "--table", s(&t)]));
    assert!((v["joint"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((v["correlation"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    // Z = X xor Y: the center cell is -1 bit.
    let d: EntropyDiagram = serde_json::from_value(json(&entro(&[
        "venn",
        "--table",
        s(&t),
        "--parties",
        "X,Y,Z",
    ])))
    .unwrap();
    assert!((d.cell("X:Y:Z").unwrap() + 1.0).abs() < 1e-12);
    let ascii = stdout(&entro(&[
        "venn",
        "--table",
        s(&t),
        "--parties",
        "X,Y,Z",
        "--format",
        "ascii",
    ]));
    assert!(ascii.contains("center X:Y:Z: -1.0000"), "{ascii}");
}

#[test]
fn witness_and_quantum_report() {
    let dir = TempDir::new().unwrap();
    let epr = write(&dir, "epr.json", EPR);
    let w = json(&entro(&[
        "witness",
        "--state",
        s(&epr),
        "--a",
        "A",
        "--b",
        "B",
    ]));
    assert_eq!(w["exceeds_unity"], true);
    assert!((w["max_eigenvalue"].as_f64().unwrap() - 2.0).abs() < 1e-9);

    let q = json(&entro(&["quantum", "--state", s(&epr)]));
    assert!(q["entropy"].as_f64().unwrap().abs() < 1e-9);
    assert!((q["conditional"]["canonical"].as_f64().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn ascii_diagram_annotates_base() {
    let dir = TempDir::new().unwrap();
    let epr = write(&dir, "epr.json", EPR);
    let text = stdout(&entro(&[
        "--format",
        "ascii",
        "venn",
        "--state",
        s(&epr),
        "--parties",
        "A,B",
    ]));
    for needle in ["A|B", "A:B", "B|A", "-1.0000", "2.0000", "log base 2"] {
        assert!(text.contains(needle), "{text}");
    }
}

#[test]
fn selftest_passes() {
    let out = entro(&["selftest", "--format", "ascii"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(
        stdout(&out)
            .lines()
            .filter(|l| l.starts_with("[PASS]"))
            .count(),
        11
    );
}
