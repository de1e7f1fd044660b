use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fermiswap::hamiltonian::{hubbard_2d, random_hamiltonian};
use fermiswap::io::{
    circuit_from_json, circuit_to_json, to_json_string, HamiltonianFile, HubbardFile, MatrixFile,
};
use fermiswap::slaterprep::{random_slater, random_unitary};
use serde_json::Value;
use tempfile::TempDir;

fn fermiswap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermiswap"))
        .args(args)
        .env_remove("FERMISWAP_SEED")
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn hamiltonian_file(dir: &TempDir, n: usize) -> PathBuf {
    let h = random_hamiltonian(n, 11).unwrap();
    write(
        dir,
        "h.json",
        &to_json_string(&HamiltonianFile::from(&h)).unwrap(),
    )
}

fn report(path: &Path) -> Vec<Value> {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap()
}

#[test]
fn four_mode_trotter_step_has_six_entanglers_and_verifies() {
    let dir = TempDir::new().unwrap();
    let h = hamiltonian_file(&dir, 4);
    let c = dir.path().join("c.json");
    let r = dir.path().join("r.json");
    assert!(fermiswap(&[
        "synth-trotter",
        "--in",
        s(&h),
        "--out",
        s(&c),
        "--t",
        "0.01"
    ])
    .status
    .success());
    let circuit = circuit_from_json(&fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(circuit.stats().two_qubit_count, 6);
    assert_eq!(circuit.metadata["stats"]["two_qubit_count"], 6);

    let out = fermiswap(&["verify", "--in", s(&c), "--out", s(&r)]);
    assert_eq!(out.status.code(), Some(0));
    let checks = report(&r);
    let reference = checks
        .iter()
        .find(|x| x["check"] == "trotter_reference")
        .unwrap();
    assert!(reference["metric"].as_f64().unwrap() <= 1e-10);
    assert!(checks.iter().all(|x| x["pass"] == true));
    for key in ["check", "n", "metric", "tolerance", "pass", "seconds"] {
        assert!(checks[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let h = hamiltonian_file(&dir, 5);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for order in ["1", "2"] {
        for out in [&a, &b] {
            assert!(fermiswap(&[
                "synth-trotter",
                "--in",
                s(&h),
                "--out",
                s(out),
                "--order",
                order
            ])
            .status
            .success());
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
    let c = dir.path().join("c.json");
    fs::copy(&a, &c).unwrap();
    for out in [&a, &b] {
        assert!(fermiswap(&["stats", "--in", s(&c), "--out", s(out)])
            .status
            .success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn emitted_circuits_reparse_and_reverify_identically() {
    let dir = TempDir::new().unwrap();
    let h = hamiltonian_file(&dir, 4);
    let c = dir.path().join("c.json");
    assert!(fermiswap(&[
        "synth-trotter",
        "--in",
        s(&h),
        "--out",
        s(&c),
        "--order",
        "2"
    ])
    .status
    .success());
    let text = fs::read_to_string(&c).unwrap();
    let reparsed = circuit_from_json(&text).unwrap();
    let again = write(&dir, "again.json", &circuit_to_json(&reparsed).unwrap());
    assert_eq!(
        fs::read_to_string(&again).unwrap().trim_end(),
        text.trim_end()
    );

    let strip = |p: &Path| -> Vec<Value> {
        report(p)
            .into_iter()
            .map(|mut v| {
                v.as_object_mut().unwrap().remove("seconds");
                v
            })
            .collect()
    };
    let (r1, r2) = (dir.path().join("r1.json"), dir.path().join("r2.json"));
    assert!(fermiswap(&["verify", "--in", s(&c), "--out", s(&r1)])
        .status
        .success());
    assert!(fermiswap(&[
        "verify",
        "--in",
        s(&again),
        "--out",
        s(&r2),
        "--threads",
        "4"
    ])
    .status
    .success());
    assert_eq!(strip(&r1), strip(&r2));
}

#[test]
fn hubbard_stats_report_swap_layers() {
    let dir = TempDir::new().unwrap();
    for (rows, cols) in [(2, 2), (4, 4)] {
        let inst = hubbard_2d(rows, cols, 1.0, 4.0).unwrap();
        let h = write(
            &dir,
            "hub.json",
            &to_json_string(&HubbardFile::from(&inst)).unwrap(),
        );
        let c = dir.path().join("c.json");
        let st = dir.path().join("s.json");
        assert!(fermiswap(&[
            "synth-hubbard",
            "--in",
            s(&h),
            "--out",
            s(&c),
            "--t",
            "0.05"
        ])
        .status
        .success());
        assert!(fermiswap(&["stats", "--in", s(&c), "--out", s(&st)])
            .status
            .success());
        let stats: Value = serde_json::from_str(&fs::read_to_string(&st).unwrap()).unwrap();
        assert_eq!(stats["kind"], "hubbard");
        assert_eq!(stats["n_qubits"], 4 * rows * cols / 2);
        assert!(stats["swap_layers"].as_u64().unwrap() > 0);
        assert!(stats["swap_layer_bound"].as_u64().is_some());
        assert_eq!(fermiswap(&["verify", "--in", s(&c)]).status.code(), Some(0));
    }
}

#[test]
fn slater_and_basis_rotation_inputs_verify() {
    let dir = TempDir::new().unwrap();
    let q = random_slater(3, 6, 5);
    let u = random_unitary(5, 6);
    for (name, file) in [
        ("q.json", MatrixFile::from_matrix(&q, Some(3))),
        ("u.json", MatrixFile::from_matrix(&u, None)),
    ] {
        let m = write(&dir, name, &to_json_string(&file).unwrap());
        let c = dir.path().join("c.json");
        assert!(fermiswap(&["synth-slater", "--in", s(&m), "--out", s(&c)])
            .status
            .success());
        let kind = circuit_from_json(&fs::read_to_string(&c).unwrap())
            .unwrap()
            .metadata["kind"]
            .clone();
        assert_eq!(
            kind,
            if file.eta.is_some() {
                "slater"
            } else {
                "basis_rotation"
            }
        );
        let r = dir.path().join("r.json");
        assert_eq!(
            fermiswap(&["verify", "--in", s(&c), "--out", s(&r), "--tol", "1e-9"])
                .status
                .code(),
            Some(0)
        );
        assert!(report(&r)
            .iter()
            .all(|x| x["tolerance"].as_f64() == Some(1e-9)
                || x["check"] == "stats_consistency"
                || x["check"] == "rotation_bound"));
    }
}

#[test]
fn tampered_circuit_fails_verification() {
    let dir = TempDir::new().unwrap();
    let h = hamiltonian_file(&dir, 4);
    let c = dir.path().join("c.json");
    assert!(fermiswap(&["synth-trotter", "--in", s(&h), "--out", s(&c)])
        .status
        .success());
    let mut circuit = circuit_from_json(&fs::read_to_string(&c).unwrap()).unwrap();
    let layers: Vec<Vec<fermiswap::Gate>> = circuit
        .layers()
        .iter()
        .enumerate()
        .map(|(k, l)| {
            l.iter()
                .map(|g| match g.kind {
                    fermiswap::GateKind::FSim { theta, phi } if k == 1 => {
                        fermiswap::Gate::fsim(g.qubit, theta + 1e-3, phi)
                    }
                    _ => *g,
                })
                .collect()
        })
        .collect();
    let meta = std::mem::take(&mut circuit.metadata);
    let mut tampered = fermiswap::Circuit::from_layers(4, layers).unwrap();
    tampered.metadata = meta;
    let t = write(&dir, "t.json", &circuit_to_json(&tampered).unwrap());
    let out = fermiswap(&["verify", "--in", s(&t)]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "verification_failed");
    let failed: Vec<&str> = err["failed_checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(failed.contains(&"resynthesis") && failed.contains(&"trotter_reference"));
}

#[test]
fn bad_invocations_exit_with_status_two() {
    let dir = TempDir::new().unwrap();
    let h = hamiltonian_file(&dir, 4);
    let out = fermiswap(&["synth-trotter", "--in", s(&h), "--order", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "usage");

    let out = fermiswap(&["synth-trotter", "--in", s(&h), "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["message"]
        .as_str()
        .unwrap()
        .contains("Usage"));

    let out = fermiswap(&["verify", "--in", s(&h)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "invalid_input");

    let missing = dir.path().join("missing.json");
    let out = fermiswap(&["stats", "--in", s(&missing)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "io");

    let bad = write(
        &dir,
        "bad.json",
        r#"{"n_modes": 2, "T": [0, 1, 2, 0], "U": [0, 0], "V": [0, 0, 0, 0]}"#,
    );
    let out = fermiswap(&["synth-trotter", "--in", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "invalid_input");
}

#[test]
fn seed_environment_variable_is_validated() {
    let dir = TempDir::new().unwrap();
    let h = hamiltonian_file(&dir, 4);
    let out = Command::new(env!("CARGO_BIN_EXE_fermiswap"))
        .args(["synth-trotter", "--in", s(&h)])
        .env("FERMISWAP_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
