use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_dtc-probe");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn export_qasm_two_sites_matches_golden() {
    let text = stdout(&["export-qasm", "--sites", "2", "--gamma", "1", "--epsilon", "0", "--omega", "0"]);
    assert_eq!(text, golden("export_qasm_l2.qasm"));
    assert!(text.contains("rzz(pi) q[0], q[1];\nrx(pi) q[0];\nrx(pi) q[1];\n"));
}

#[test]
fn export_qasm_with_measurement_matches_golden() {
    let text = stdout(&[
        "export-qasm", "--sites", "3", "--gamma", "2", "--epsilon", "0.1", "--omega", "0.05pi/2", "--cycles", "2",
        "--measure",
    ]);
    assert_eq!(text, golden("export_qasm_l3_measured.qasm"));
}

#[test]
fn csv_headers_are_fixed_per_subcommand() {
    let cases: &[(&[&str], &str)] = &[
        (&["simulate", "--sites", "4", "--cycles", "2"], "cycle,fidelity,qfi,bound"),
        (&["sweep", "--sites", "4", "--grid", "0.1,0.2", "--cycles", "3"], "sites,gamma,epsilon,omega,cycle,qfi"),
        (&["epsilon-sweep", "--sites", "4", "--grid", "lin:0:0.2:3"], "sites,gamma,epsilon,omega,cycle,qfi"),
        (&["bound-check", "--sites", "4", "--cycles", "3"], "cycle,qfi,bound,ratio"),
        (
            &["threshold", "--sizes", "8", "--cycles", "10"],
            "sites,gamma,epsilon,cycle,omega_max,omega_raw,qfi_peak,grid_resolution",
        ),
        (
            &["scaling", "--sizes", "6,8,10"],
            "sites,omega_dtc,qfi_dtc,omega_max,qfi_threshold",
        ),
        (
            &["gamma-scan", "--sizes", "6,8,10", "--gammas", "1,2,3"],
            "gamma,phase,beta,log_prefactor,r_squared,points",
        ),
    ];
    for (args, header) in cases {
        let text = stdout(args);
        assert_eq!(text.lines().next(), Some(*header), "{args:?}");
    }
}

#[test]
fn simulate_revives_on_even_cycles_and_ideal_pulses_carry_no_information() {
    let text = stdout(&["simulate", "--sites", "8", "--gamma", "2", "--epsilon", "0.1", "--omega", "0", "--cycles", "20"]);
    for line in text.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        if cols[0] as usize % 2 == 0 {
            assert!((cols[1] - 1.0).abs() < 1e-10, "{line}");
        }
        assert!(cols[2] <= cols[3] * (1.0 + 1e-9) + 1e-9);
    }
    let ideal = stdout(&["simulate", "--sites", "6", "--epsilon", "0", "--omega", "0.3", "--cycles", "10"]);
    assert!(ideal.lines().skip(1).all(|l| l.split(',').nth(2) == Some("0.0")));
}

#[test]
fn json_format_is_an_array_of_rows() {
    let text = stdout(&["bound-check", "--sites", "4", "--cycles", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0]["ratio"].is_null());
    assert_eq!(rows[2]["bound"], 4.0 * 4.0 * 14.0 * 14.0);
}

fn strip_timestamp(meta: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(meta).unwrap();
    v.as_object_mut().unwrap().remove("generated_unix");
    v
}

#[test]
fn file_outputs_are_reproducible_and_carry_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        stdout(&[
            "sweep", "--sites", "8", "--grid", "log:1e-4:0.3:24", "--cycles", "10", "--out", out.to_str().unwrap(),
        ]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let ma = fs::read_to_string(dir.path().join("a.csv.meta.json")).unwrap();
    let mb = fs::read_to_string(dir.path().join("b.csv.meta.json")).unwrap();
    let (mut va, mut vb) = (strip_timestamp(&ma), strip_timestamp(&mb));
    va["config"]["output"]["path"] = serde_json::Value::Null;
    vb["config"]["output"]["path"] = serde_json::Value::Null;
    assert_eq!(va, vb);
    assert_eq!(va["subcommand"], "sweep");
    assert_eq!(va["rows"], 24);
    assert_eq!(va["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(va["config"]["probe"]["sites"], 8);
    assert_eq!(va["config"]["sweep"]["grid"], "log:0.0001:0.3:24");
}

#[test]
fn worker_count_does_not_change_output_bytes() {
    let args = ["sweep", "--sites", "10", "--grid", "log:1e-4:0.3:16", "--cycles", "10"];
    let one = stdout(&[&args[..], &["--workers", "1"]].concat());
    let three = stdout(&[&args[..], &["--workers", "3"]].concat());
    let auto = stdout(&args);
    assert_eq!(one, three);
    assert_eq!(one, auto);
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[probe]\nsites = 5\ngamma = 1\nomega = \"0.1pi/2\"\n[simulate]\ncycles = 3\n").unwrap();
    let text = stdout(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.lines().last().unwrap().split(',').nth(3), Some("3600.0"));
    let text = stdout(&["simulate", "--config", cfg.to_str().unwrap(), "--cycles", "2", "--gamma", "2"]);
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().last().unwrap().split(',').nth(3), Some("14400.0"));
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    assert_eq!(code(&["simulate", "--epsilon", "1.5"]), 2);
    assert_eq!(code(&["simulate", "--sites", "30"]), 2);
    assert_eq!(code(&["simulate", "--omega", "fast"]), 2);
    assert_eq!(code(&["sweep", "--axis", "colour"]), 2);
    assert_eq!(code(&["threshold", "--sizes", "8", "--grid", "log:1e-3:1e-2:20"]), 4);
    assert_eq!(code(&["sweep", "--axis", "omega", "--grid", "0.1,0.05"]), 2);
    assert_eq!(code(&["simulate", "--cycles", "1", "--out", "/nonexistent-dir/x.csv"]), 5);
    assert_eq!(code(&["gamma-scan", "--sizes", "4,6,8", "--gammas", "1,2,3", "--epsilon", "0"]), 6);
    assert_eq!(code(&["simulate", "--cycles", "1"]), 0);
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[threshold]\nsizes = [8]\nfactor = \"big\"\n").unwrap();
    let out = run(&["threshold", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("threshold.factor"), "{err}");
    fs::write(&cfg, "[probe]\nepsilon = 0.7\nsites = 1\n").unwrap();
    let err = String::from_utf8_lossy(&run(&["simulate", "--config", cfg.to_str().unwrap()]).stderr).to_string();
    assert!(err.contains("probe.sites"), "{err}");
}
