use std::path::Path;
use std::process::{Command, Output};

fn asdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asdc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn reproduce_example_one() {
    let o = asdc(&[
        "reproduce",
        "ex1",
        "--prime-max",
        "13",
        "--index-bound",
        "500",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("1, -5, 35, -275, 2275, -19255, 163925, -1385725, 11483875"));
    assert!(s.trim_end().ends_with("**PASS**"));
}

#[test]
fn reproduce_sl2z_rationals() {
    let o = asdc(&[
        "reproduce",
        "sl2z",
        "--prime-max",
        "7",
        "--index-bound",
        "100",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let b = &v["sequences"][0]["b"];
    assert_eq!(b[1], "65520/691");
    assert_eq!(b[2], "98146535760/477481");
    assert_eq!(b[3], "27376196366937600/329939371");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "reproduce",
        "g3",
        "--prime-max",
        "11",
        "--index-bound",
        "300",
        "--format",
        "json",
    ];
    let a = asdc(&args);
    let b = asdc(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let args = [
        "scan",
        "table3",
        "--prime-max",
        "13",
        "--index-bound",
        "100",
        "--format",
        "csv",
    ];
    let a = asdc(&args);
    let b = asdc(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

fn write_bfile(path: &Path, b: &[serde_json::Value]) {
    let text: String = b
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{i} {}\n", v.as_str().unwrap()))
        .collect();
    std::fs::write(path, text).unwrap();
}

/// Moves a decimal integer by one in its last digit, without a carry.
fn nudge(n: &str) -> String {
    let (head, last) = n.split_at(n.len() - 1);
    let d = last.parse::<u8>().unwrap();
    format!("{head}{}", if d == 9 { 8 } else { d + 1 })
}

#[test]
fn corrupted_bfile_reports_its_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = asdc(&[
        "expand",
        "--f",
        "eta(1)^5 / eta(5)",
        "--t",
        "eta(5)^6 / eta(1)^6",
        "--precision",
        "130",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut b = v["b"].as_array().unwrap().clone();
    assert_eq!(b.len(), 130);

    let good = dir.path().join("good.txt");
    write_bfile(&good, &b);
    let o = asdc(&[
        "verify",
        "--b-file",
        good.to_str().unwrap(),
        "--prime-max",
        "13",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    b[125] = serde_json::Value::String(nudge(b[125].as_str().unwrap()));
    let bad = dir.path().join("bad.txt");
    write_bfile(&bad, &b);
    let o = asdc(&[
        "verify",
        "--b-file",
        bad.to_str().unwrap(),
        "--prime",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let fail = v[0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["status"] != "pass")
        .unwrap();
    assert_eq!(
        (
            fail["ell"].as_u64(),
            fail["r"].as_u64(),
            fail["index"].as_u64()
        ),
        (Some(25), Some(1), Some(125))
    );
    assert!(stdout(&asdc(&[
        "verify",
        "--b-file",
        bad.to_str().unwrap(),
        "--prime",
        "5"
    ]))
    .contains("p=5, l=25, r=1"));
    // other primes do not see index 125
    let o = asdc(&["verify", "--b-file", bad.to_str().unwrap(), "--prime", "7"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&asdc(&["reproduce", "nope"])), 2);
    assert_eq!(code(&asdc(&["no-such-command"])), 2);
    assert_eq!(code(&asdc(&["scan", "table1", "--prime-max", "1"])), 2);
    assert_eq!(
        code(&asdc(&[
            "scan",
            "table1",
            "--prime-max",
            "50",
            "--index-bound",
            "10"
        ])),
        2
    );
    assert_eq!(
        code(&asdc(&[
            "search",
            "--level",
            "5",
            "--weight",
            "2",
            "--character",
            "5",
            "--precision",
            "3"
        ])),
        2
    );
    // the square system at (10, (·/5), 4) has no Eisenstein image
    assert_eq!(
        code(&asdc(&[
            "search",
            "--level",
            "10",
            "--weight",
            "4",
            "--character",
            "5"
        ])),
        1
    );
    assert_eq!(code(&asdc(&["dims", "--table", "table3"])), 0);
    assert_eq!(code(&asdc(&["dims", "--table", "table1"])), 1);
    assert_eq!(code(&asdc(&["dims"])), 2);
}

#[test]
fn out_flag_and_data_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dims.md");
    let o = asdc(&[
        "dims",
        "--level",
        "9",
        "--character",
        "principal",
        "--weight",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("| M_4(Gamma0(9), principal) | 5 |"));

    // an empty directory falls back to the bundled data, a broken file is a data error
    assert_eq!(
        code(&asdc(&[
            "dims",
            "--table",
            "table3",
            "--data-dir",
            dir.path().to_str().unwrap()
        ])),
        0
    );
    std::fs::write(dir.path().join("tables.json"), "{").unwrap();
    assert_eq!(
        code(&asdc(&[
            "dims",
            "--table",
            "table3",
            "--data-dir",
            dir.path().to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn search_two_with_pin() {
    let o = asdc(&[
        "search2",
        "--level",
        "5",
        "--weight",
        "4",
        "--g",
        "eta(1)^4 * eta(5)^4",
        "--pin",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "theorem2");
    assert_eq!(v["predicate"], "p ≠ 5");
}
