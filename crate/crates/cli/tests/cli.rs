use std::process::{Command, Output};

use macdonald_core::verifier::{Status, VerificationReport};

fn mgl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgl"))
        .args(args)
        .env_remove("MGL_MAX_COSETS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn predict_prints_one_row_per_prime() {
    let out = mgl(&["predict", "--alpha", "7", "--beta", "34"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows[0], ["p", "case", "e", "f", "o(A)", "o(B)", "o(C)"]);
    assert!(rows.contains(&vec!["3", "T6", "10", "7", "81", "81", "27"]));
    assert!(text.contains("|G| = 1299078"));
}

#[test]
fn predict_json_has_expected_fields() {
    let out = mgl(&[
        "predict", "--alpha", "7", "--beta", "34", "--prime", "3", "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["case"], "T6");
    assert_eq!((v["e"].as_u64(), v["f"].as_u64()), (Some(10), Some(7)));
}

#[test]
fn verify_json_round_trips() {
    let out = mgl(&[
        "verify", "--alpha", "4", "--beta", "7", "--prime", "3", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    let line = line.trim_end();
    let report: VerificationReport = serde_json::from_str(line).unwrap();
    assert_eq!(report.status, Status::Match);
    assert_eq!(report.to_json(), line);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| mgl(args).status.code();
    assert_eq!(
        code(&["verify", "--alpha", "4", "--beta", "7", "--prime", "3"]),
        Some(0)
    );
    assert_eq!(
        code(&[
            "verify",
            "--alpha",
            "9",
            "--beta",
            "25",
            "--prime",
            "2",
            "--max-cosets",
            "100"
        ]),
        Some(2)
    );
    assert_eq!(
        code(&["verify", "--alpha", "1", "--beta", "3", "--prime", "2"]),
        Some(3)
    );
    assert_eq!(code(&["verify", "--alpha", "7"]), Some(3));
    assert_eq!(
        code(&["verify", "--alpha", "4", "--beta", "7", "--prime", "4"]),
        Some(3)
    );
    assert_eq!(
        code(&["corpus", "--file", "/nonexistent/corpus.csv"]),
        Some(3)
    );
}

#[test]
fn corpus_reports_every_row_in_order() {
    let path = std::env::temp_dir().join(format!("mgl-corpus-{}.csv", std::process::id()));
    std::fs::write(
        &path,
        "alpha,beta,prime,max_cosets\n4,7,3,\n1,3,2,\n-2,7,,\n",
    )
    .unwrap();
    let out = mgl(&["corpus", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    let reports: Vec<VerificationReport> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let statuses: Vec<_> = reports
        .iter()
        .map(|r| (r.alpha, r.beta, r.status))
        .collect();
    assert_eq!(statuses[0], (4, 7, Status::Match));
    assert_eq!(statuses[1], (1, 3, Status::Error));
    assert!(statuses[2..].iter().all(|s| *s == (-2, 7, Status::Match)));
    assert_eq!(
        reports[2..]
            .iter()
            .map(|r| r.prime.unwrap())
            .collect::<Vec<_>>(),
        [2, 3]
    );
    // the error row makes the run fail
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn snf_check_agrees_on_seed_matrices() {
    for args in [
        ["teo5", "5", "2", "3", "1", "1", "1"],
        ["teo5", "7", "4", "6", "1", "2", "51"],
        ["teo17", "2", "5", "7", "1", "3", "7"],
    ] {
        let out = mgl(&[
            "snf-check",
            "--case",
            args[0],
            "--p",
            args[1],
            "--m",
            args[2],
            "--ell",
            args[3],
            "--k",
            args[4],
            "--u",
            args[5],
            "--v",
            args[6],
            "--json",
        ]);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn snf_check_rejects_bad_parameters() {
    let out = mgl(&[
        "snf-check",
        "--case",
        "teo5",
        "--p",
        "5",
        "--m",
        "2",
        "--ell",
        "4",
        "--k",
        "1",
        "--u",
        "1",
        "--v",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invariant_check_is_clean() {
    let out = mgl(&["check-invariants", "--seed", "7", "--count", "300"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 failures"));
}
