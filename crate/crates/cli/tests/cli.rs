use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use reservoir_topo::grid::{GridGeometry, ScalarField, ValueKind};
use reservoir_topo::io::{write_grid, GridFormat};
use reservoir_topo::persistence::PersistenceDiagram;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reservoir-topo"))
        .args(args)
        .env_remove("RESERVOIR_TOPO_THREADS")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = bin(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn simulate(out: &Path, range: &str, seed: &str, variogram: &str) {
    ok(&[
        "simulate",
        "--nx",
        "8",
        "--ny",
        "8",
        "--nz",
        "6",
        "--dx",
        "100",
        "--dy",
        "100",
        "--dz",
        "1",
        "--variogram",
        variogram,
        "--range",
        range,
        "--seed",
        seed,
        "--out",
        p(out),
    ]);
}

#[test]
fn simulate_is_deterministic_and_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.bin"), dir.path().join("b.bin"));
    simulate(&a, "500", "11", "exp");
    simulate(&b, "500", "11", "exp");
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.bin.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["seeds"], serde_json::json!([11]));
    assert_eq!(manifest["outputs"][0], p(&a));
    assert_eq!(manifest["config"]["variogram"]["range"], 500.0);
}

#[test]
fn several_seeds_give_several_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.dat");
    let stdout = ok(&[
        "simulate",
        "--nx",
        "4",
        "--ny",
        "4",
        "--nz",
        "4",
        "--variogram",
        "gauss",
        "--range",
        "3",
        "--seed",
        "1",
        "--seed",
        "2",
        "--out",
        p(&out),
    ]);
    for name in ["r-1.dat", "r-2.dat", "r-1.dat.json", "r.dat.manifest.json"] {
        assert!(
            dir.path().join(name).exists(),
            "{name} missing; stdout {stdout}"
        );
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.bin");
    let o = bin(&[
        "simulate",
        "--nx",
        "4",
        "--ny",
        "4",
        "--nz",
        "4",
        "--variogram",
        "exp",
        "--range",
        "-5",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("range"));
    assert!(!out.exists());
    assert_eq!(bin(&["betti"]).status.code(), Some(2));
    assert_eq!(bin(&["report", "--out", p(&out)]).status.code(), Some(2));
    let o = bin(&["betti", "--input", p(&out), "--alphas", "0.9..0.1:0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["betti", "--input", p(&dir.path().join("missing.bin"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.bin"));
}

#[test]
fn betti_of_a_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("full.bin");
    let g = GridGeometry::unit([3, 3, 3]).unwrap();
    write_grid(
        &ScalarField::from_fn(g, ValueKind::Alpha, |_| 0.0),
        &path,
        GridFormat::RawBinary,
    )
    .unwrap();
    let csv = ok(&["betti", "--input", p(&path), "--alphas", "0.5"]);
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("0.5,1,0,0,1,27,"), "{row}");
}

#[test]
fn betti_rows_and_idempotence() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("f.dat");
    simulate(&field, "300", "4", "exp");
    let out = dir.path().join("betti.csv");
    ok(&["betti", "--input", p(&field), "--out", p(&out)]);
    let first = fs::read(&out).unwrap();
    ok(&["betti", "--input", p(&field), "--out", p(&out)]);
    assert_eq!(fs::read(&out).unwrap(), first);

    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha,b0,b1,b2,chi,volume,b0w,b1w,b2w"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    for r in &rows {
        assert_eq!(r[4], r[1] - r[2] + r[3]);
    }
    assert!(dir.path().join("betti.csv.manifest.json").exists());
}

#[test]
fn raw_gl_needs_calibration() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gl.bin");
    let g = GridGeometry::unit([2, 2, 2]).unwrap();
    let f = ScalarField::from_fn(g, ValueKind::RawGl, |[i, _, _]| 40.0 + 20.0 * i as f64);
    write_grid(&f, &path, GridFormat::GslibAscii).unwrap();
    let path = path.to_str().unwrap();
    assert_eq!(
        bin(&["betti", "--input", path, "--format", "gslib"])
            .status
            .code(),
        Some(2)
    );
    let csv = ok(&[
        "betti", "--input", path, "--format", "gslib", "--gl-min", "40", "--gl-max", "60",
        "--alphas", "0.5",
    ]);
    assert!(csv.lines().nth(1).unwrap().starts_with("0.5,1,0,0,1,4,"));
}

#[test]
fn persist_and_bottleneck() {
    let dir = tempfile::tempdir().unwrap();
    let diagrams = dir.path().join("diagrams");
    fs::create_dir(&diagrams).unwrap();
    for (name, range, seed) in [
        ("E500-1", "300", "1"),
        ("E500-2", "300", "2"),
        ("E1000-1", "600", "1"),
    ] {
        let field = dir.path().join(format!("{name}.bin"));
        simulate(&field, range, seed, "exp");
        ok(&[
            "persist",
            "--input",
            p(&field),
            "--out",
            p(&diagrams.join(format!("{name}.json"))),
        ]);
    }
    let d1 = diagrams.join("E500-1.json");
    let d = PersistenceDiagram::read(&d1).unwrap();
    assert_eq!(d.q, 0);
    assert_eq!(d.essential.len(), 1);

    assert_eq!(
        ok(&["bottleneck", "--a", p(&d1), "--b", p(&d1)]).trim(),
        "0"
    );
    let csv = ok(&["bottleneck", "--matrix", p(&diagrams), "--norm", "linf"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], ",E1000-1,E500-1,E500-2");
    let m: Vec<Vec<f64>> = lines[1..]
        .iter()
        .map(|l| l.split(',').skip(1).map(|x| x.parse().unwrap()).collect())
        .collect();
    for i in 0..3 {
        assert_eq!(m[i][i], 0.0);
        for j in 0..3 {
            assert_eq!(m[i][j], m[j][i]);
            assert!((0.0..=1.0).contains(&m[i][j]));
        }
    }

    // A q = 1 diagram cannot be compared with a q = 0 one.
    let field = dir.path().join("E500-1.bin");
    let d2 = dir.path().join("q1.json");
    ok(&[
        "persist",
        "--input",
        p(&field),
        "--q",
        "1",
        "--step",
        "0.05",
        "--out",
        p(&d2),
    ]);
    let o = bin(&["bottleneck", "--a", p(&d1), "--b", p(&d2)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("q=0"));
}

#[test]
fn report_writes_scatter_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let solid = dir.path().join("solid.bin");
    let g = GridGeometry::unit([2, 2, 2]).unwrap();
    write_grid(
        &ScalarField::from_fn(g, ValueKind::Alpha, |_| 0.0),
        &solid,
        GridFormat::RawBinary,
    )
    .unwrap();
    let out = dir.path().join("scatter.csv");
    ok(&[
        "report",
        "--input",
        p(&solid),
        "--alphas",
        "0.2,0.7",
        "--out",
        p(&out),
    ]);
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(
        csv,
        "field,alpha,volume,b0w,b1w,b2w\nsolid,0.2,8,0.125,0,0\nsolid,0.7,8,0.125,0,0\n"
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("scatter.summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["fields"][0]["max_b0w"], 0.125);
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_reservoir-topo"))
        .args(["bottleneck", "--matrix", "."])
        .env("RESERVOIR_TOPO_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn larger_range_has_smaller_weighted_b0() {
    let dir = tempfile::tempdir().unwrap();
    let peak = |range: &str| -> f64 {
        let mut total = 0.0;
        for seed in 1..=5 {
            let field = dir.path().join(format!("e{range}-{seed}.bin"));
            ok(&[
                "simulate",
                "--nx",
                "16",
                "--ny",
                "16",
                "--nz",
                "8",
                "--dx",
                "100",
                "--dy",
                "100",
                "--dz",
                "100",
                "--variogram",
                "exp",
                "--range",
                range,
                "--seed",
                &seed.to_string(),
                "--out",
                p(&field),
            ]);
            let out = dir.path().join(format!("loci-{range}-{seed}.csv"));
            ok(&[
                "report",
                "--input",
                p(&field),
                "--alphas",
                "0.05..0.95:0.05",
                "--out",
                p(&out),
            ]);
            let summary: serde_json::Value = serde_json::from_str(
                &fs::read_to_string(dir.path().join(format!("loci-{range}-{seed}.summary.json")))
                    .unwrap(),
            )
            .unwrap();
            total += summary["fields"][0]["max_b0w"].as_f64().unwrap();
        }
        total / 5.0
    };
    let (short, long) = (peak("200"), peak("400"));
    assert!(long < short, "R=400 peak {long} vs R=200 peak {short}");
}
