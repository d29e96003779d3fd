//! End-to-end tests of the superpat binary: flag handling, exit codes,
//! output formats, manifests, and the results cache.

use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superpat"))
}

/// Runs the binary with an isolated cache directory and working directory.
fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .env("SUPERPAT_CACHE_DIR", dir.join("cache"))
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn enumerate_lists_all_patterns_in_order() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(tmp.path(), &["enumerate", "--k", "3"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines.first(), Some(&"111"));
    assert_eq!(lines.last(), Some(&"321"));

    let out = run_in(tmp.path(), &["enumerate", "--k", "1"]);
    assert_eq!(stdout_of(&out), "1\n");

    let out = run_in(tmp.path(), &["enumerate", "--k", "4"]);
    assert_eq!(stdout_of(&out).lines().count(), 75);
}

#[test]
fn check_reports_result_evidence_and_exit_code() {
    let tmp = TempDir::new().unwrap();

    let out = run_in(tmp.path(), &["check", "2353134", "--k", "3", "--d", "5", "--surjective"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("result = true"));

    let out = run_in(tmp.path(), &["check", "1221", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run_in(tmp.path(), &["check", "1111111", "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.contains("result = false"));
    assert!(text.contains("evidence = 123"));

    // Surjectivity failure names the unused letter.
    let out = run_in(tmp.path(), &["check", "121", "--k", "2", "--d", "3", "--surjective"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("letter 3 never occurs"));

    // Complete mode agrees with the superpattern route on a known witness.
    let out = run_in(
        tmp.path(),
        &["check", "123412314213", "--k", "4", "--mode", "complete"],
    );
    assert_eq!(out.status.code(), Some(0));

    let out = run_in(tmp.path(), &["check", "12341231421", "--k", "4", "--mode", "complete"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("evidence = "));

    // Malformed word is a usage error.
    let out = run_in(tmp.path(), &["check", "12x1", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_json_shape() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(
        tmp.path(),
        &["--format", "json", "check", "1111111", "--k", "3"],
    );
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["result"], false);
    assert_eq!(v["evidence"], "123");
    assert_eq!(v["mode"], "superpattern");

    let out = run_in(tmp.path(), &["--format", "json", "check", "1221", "--k", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["result"], true);
    assert_eq!(v["evidence"], serde_json::Value::Null);
}

#[test]
fn search_finds_known_minima() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(tmp.path(), &["search", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("min_length = 7"));
    assert!(text.contains("witness = 1213121"));
    assert!(text.contains("exhaustive = true"));

    // The surjective minimum over a wider alphabet deepens past refutations.
    let out = run_in(
        tmp.path(),
        &["--format", "json", "search", "--k", "3", "--d", "6", "--surjective"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["min_length"], 8);
    assert_eq!(v["refuted_lengths"], serde_json::json!([6, 7]));
}

#[test]
fn refute_emits_a_parseable_certificate() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(tmp.path(), &["search", "--k", "3", "--refute", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let cert = superpat_core::RefutationCertificate::from_kv_text(&text).unwrap();
    assert_eq!((cert.k, cert.d, cert.length), (3, 3, 6));
    assert!(cert.nodes > 0);

    // Lengths at or above the minimum cannot be refuted: witness, exit 1.
    let out = run_in(tmp.path(), &["search", "--k", "3", "--refute", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("witness = 1213121"));
}

#[test]
fn certificate_files_carry_verifying_manifests() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(
        tmp.path(),
        &["search", "--k", "3", "--d", "5", "--surjective", "--certs", "certs"],
    );
    assert_eq!(out.status.code(), Some(0));
    for len in [5, 6] {
        let path = tmp.path().join(format!("certs/refute-k3-d5-surjective-len{len}.cert"));
        let bytes = std::fs::read(&path).expect("certificate written");
        let cert = superpat_core::RefutationCertificate::from_kv_text(
            std::str::from_utf8(&bytes).unwrap(),
        )
        .unwrap();
        assert_eq!(cert.length, len);
        assert_manifest_verifies(&path);
    }
}

#[test]
fn budget_and_cap_errors_exit_three() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(tmp.path(), &["search", "--k", "5", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout_of(&out).contains("status = budget-exceeded"));

    let out = run_in(tmp.path(), &["exact", "--k", "5", "--process", "x"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    let tmp = TempDir::new().unwrap();
    // simulate requires an explicit seed
    let out = run_in(tmp.path(), &["simulate", "--k", "2", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run_in(tmp.path(), &["--format", "csv", "bounds", "--k", "5"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run_in(tmp.path(), &["check", "1213121", "--k", "3", "--d", "4", "--mode", "complete"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run_in(tmp.path(), &["--threads", "0", "bounds", "--k", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_csv_has_the_documented_columns() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(
        tmp.path(),
        &["--format", "csv", "simulate", "--k", "2", "--trials", "500", "--seed", "7"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,trials,seed,process,mean,variance,ci_half_width"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for (row, process) in rows.iter().zip(["Y", "X", "Z"]) {
        assert_eq!(row.len(), 7);
        assert_eq!(row[0], "2");
        assert_eq!(row[1], "500");
        assert_eq!(row[2], "7");
        assert_eq!(row[3], process);
        assert!(row[4].parse::<f64>().unwrap() > 0.0);
    }

    // Above the X tracking cap the X row is simply absent.
    let out = run_in(
        tmp.path(),
        &["--format", "csv", "simulate", "--k", "9", "--trials", "100", "--seed", "7"],
    );
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(!text.contains(",X,"));
}

#[test]
fn simulate_is_reproducible_and_thread_invariant() {
    let tmp = TempDir::new().unwrap();
    let args = ["--no-cache", "simulate", "--k", "3", "--trials", "20000", "--seed", "11"];
    let a = run_in(tmp.path(), &args);
    let b = run_in(tmp.path(), &args);
    assert_eq!(a.stdout, b.stdout);

    let one = run_in(
        tmp.path(),
        &["--no-cache", "--threads", "1", "simulate", "--k", "3", "--trials", "20000", "--seed", "11"],
    );
    let eight = run_in(
        tmp.path(),
        &["--no-cache", "--threads", "8", "simulate", "--k", "3", "--trials", "20000", "--seed", "11"],
    );
    assert_eq!(one.stdout, eight.stdout);
    assert_eq!(a.stdout, one.stdout);
}

#[test]
fn cache_replays_stored_bytes() {
    let tmp = TempDir::new().unwrap();
    let args = ["simulate", "--k", "2", "--trials", "5000", "--seed", "3"];
    let first = run_in(tmp.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    let cache_dir = tmp.path().join("cache");
    let entries = std::fs::read_dir(&cache_dir).unwrap().count();
    assert_eq!(entries, 2, "one .out plus one .manifest.json");

    let second = run_in(tmp.path(), &args);
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(second.status.code(), Some(0));

    // A different seed is a different key.
    let other = run_in(tmp.path(), &["simulate", "--k", "2", "--trials", "5000", "--seed", "4"]);
    assert_ne!(other.stdout, first.stdout);
    assert_eq!(std::fs::read_dir(&cache_dir).unwrap().count(), 4);

    // Tampering with a stored payload invalidates the entry instead of
    // replaying corrupt bytes.
    for entry in std::fs::read_dir(&cache_dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "out") {
            std::fs::write(&path, b"garbage").unwrap();
        }
    }
    let third = run_in(tmp.path(), &args);
    assert_eq!(third.stdout, first.stdout);
}

#[test]
fn out_file_matches_stdout_and_manifest_digest() {
    let tmp = TempDir::new().unwrap();
    let out_path = tmp.path().join("bounds.txt");
    let out = run_in(
        tmp.path(),
        &["--out", out_path.to_str().unwrap(), "bounds", "--k", "10"],
    );
    assert_eq!(out.status.code(), Some(0));
    let file_bytes = std::fs::read(&out_path).unwrap();
    assert_eq!(file_bytes, out.stdout);
    let text = stdout_of(&out);
    assert!(text.contains("proven_lower = 63"));
    assert!(text.contains("rado_upper = 83"));
    assert!(text.contains("burstein_upper = 84"));
    assert_manifest_verifies(&out_path);
}

#[test]
fn exact_prints_rationals_with_decimals() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(tmp.path(), &["exact", "--k", "2", "--process", "x"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("e_y = 5 (~ 5.00000000000)"));
    assert!(text.contains("e_z = 6 (~ 6.00000000000)"));
    assert!(text.contains("e_x_chain = 5 (~ 5.00000000000)"));

    let out = run_in(tmp.path(), &["--format", "json", "exact", "--k", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["e_y"]["exact"], "13");
    assert_eq!(v["e_z"]["exact"], "33/2");
    assert_eq!(v["e_z"]["decimal"], "16.5000000000");
    assert_eq!(v["chain"], serde_json::Value::Null);
}

#[test]
fn trial_dump_rows_are_coupled_and_reproducible() {
    let tmp = TempDir::new().unwrap();
    let dump = tmp.path().join("trials.csv");
    let out = run_in(
        tmp.path(),
        &[
            "simulate", "--k", "3", "--trials", "50", "--seed", "5",
            "--dump-trials", dump.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&dump).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial,seed,Y,X,Z,k_1,k_2,k_3,p_1,p_2,p_3"));
    let mut count = 0;
    for (i, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 11);
        assert_eq!(cols[0], i.to_string());
        let y: u64 = cols[2].parse().unwrap();
        let x: u64 = cols[3].parse().unwrap();
        let z: u64 = cols[4].parse().unwrap();
        assert!(y <= x && x <= z);
        // Y equals the last block's closing position, blocks close in order.
        let p: Vec<u64> = cols[8..11].iter().map(|c| c.parse().unwrap()).collect();
        assert!(p[0] < p[1] && p[1] < p[2]);
        assert_eq!(y, p[2]);
        count += 1;
    }
    assert_eq!(count, 50);
    assert_manifest_verifies(&dump);

    let again = tmp.path().join("again.csv");
    run_in(
        tmp.path(),
        &[
            "simulate", "--k", "3", "--trials", "50", "--seed", "5",
            "--dump-trials", again.to_str().unwrap(),
        ],
    );
    assert_eq!(std::fs::read(&dump).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn concentration_report_appears_with_omega() {
    let tmp = TempDir::new().unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "--format", "json",
            "simulate", "--k", "5", "--trials", "2000", "--seed", "2", "--omega", "3",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let c = &v["concentration"];
    assert_eq!(c["omega"], 3.0);
    assert!(c["fraction"].as_f64().unwrap() > 0.9);
    assert!(c["lower"].as_f64().unwrap() < c["upper"].as_f64().unwrap());

    // The fixed CSV columns cannot carry the extra report.
    let out = run_in(
        tmp.path(),
        &[
            "--format", "csv",
            "simulate", "--k", "5", "--trials", "100", "--seed", "2", "--omega", "3",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

/// Reads `<path>.manifest.json` and re-derives the digest from the file.
fn assert_manifest_verifies(path: &Path) {
    let manifest_path = path.with_file_name(format!(
        "{}.manifest.json",
        path.file_name().unwrap().to_string_lossy()
    ));
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&manifest_path).expect("manifest exists")).unwrap();
    let bytes = std::fs::read(path).unwrap();
    let digest = Sha256::digest(&bytes);
    let mut hex = String::new();
    for b in digest {
        hex.push_str(&format!("{b:02x}"));
    }
    assert_eq!(
        manifest["output_digest"].as_str().unwrap(),
        format!("sha256:{hex}"),
        "digest in {} verifies",
        manifest_path.display()
    );
}
