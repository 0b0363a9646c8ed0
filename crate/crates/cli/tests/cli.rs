use std::process::{Command, Output};

use dimers::recursion;
use dimers::{BoundaryCountVector, Family};
use dimers_cli::verify::{run_verify_with, VerifyConfig};

fn dimers(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimers"))
        .args(args)
        .env_remove("DIMERS_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Exact quantities travel as strings; only small counters may be numbers.
fn integers_only(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_u64(),
        serde_json::Value::Array(a) => a.iter().all(integers_only),
        serde_json::Value::Object(o) => o.values().all(integers_only),
        _ => true,
    }
}

#[test]
fn json_output_round_trips_byte_for_byte() {
    let cases: &[&[&str]] = &[
        &[
            "build", "--family", "sierpx", "--n", "2", "--format", "json",
        ],
        &["count", "--family", "hanoi", "--n", "2", "--format", "json"],
        &[
            "recurse", "--family", "hanoi", "--n", "4", "--format", "json",
        ],
        &[
            "ratios", "--family", "sierpx", "--n", "3", "--limit", "--format", "json",
        ],
        &[
            "entropy", "--family", "hanoi", "--digits", "30", "--format", "json",
        ],
        &["verify", "--family", "sierpx", "--format", "json"],
    ];
    for args in cases {
        let o = dimers(args);
        assert!(o.status.success(), "{args:?}");
        let text = stdout(&o);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
        assert!(
            integers_only(&value),
            "numbers must be plain integers: {args:?}"
        );
    }
}

#[test]
fn large_integers_are_plain_decimal_strings() {
    let text = stdout(&dimers(&[
        "recurse", "--family", "sierpx", "--n", "3", "--format", "json",
    ]));
    assert!(text.contains("\"213175217650167042919081256\""));
}

#[test]
fn entropy_examples() {
    let h = stdout(&dimers(&["entropy", "--family", "hanoi", "--digits", "19"]));
    assert_eq!(h.lines().next(), Some("0.5764643016505283752"));
    assert!(h.contains("k = 4\n"));
    let x = stdout(&dimers(&[
        "entropy", "--family", "sierpx", "--digits", "16",
    ]));
    assert_eq!(x.lines().next(), Some("0.6719549820008285"));
    let long = stdout(&dimers(&[
        "entropy", "--family", "hanoi", "--digits", "100",
    ]));
    assert_eq!(long.lines().next().unwrap().len(), 102);
    assert!(long.contains("k = 7\n"));
    assert!(long.contains("precision_bits = 1024\n"));
}

#[test]
fn exit_statuses() {
    assert_eq!(
        dimers(&["build", "--family", "hanoi", "--n", "9"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        dimers(&["build", "--family", "cube", "--n", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        dimers(&["entropy", "--family", "hanoi", "--format", "yaml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        dimers(&["ratios", "--family", "hanoi", "--n", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        dimers(&["entropy", "--family", "hanoi", "--digits", "121"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        dimers(&[
            "count",
            "--family",
            "hanoi",
            "--n",
            "4",
            "--oracle-steps",
            "100"
        ])
        .status
        .code(),
        Some(3)
    );
    let o = dimers(&[
        "entropy",
        "--family",
        "hanoi",
        "--k",
        "7",
        "--precision-bits",
        "512",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--precision-bits"));
    assert_eq!(
        dimers(&["verify", "--family", "hanoi", "--strict"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn precision_override_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dimers"))
        .args([
            "entropy", "--family", "hanoi", "--k", "7", "--digits", "100",
        ])
        .env("DIMERS_PRECISION_BITS", "1024")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("precision_bits = 1024\n"));
}

#[test]
fn csv_tables() {
    let text = stdout(&dimers(&[
        "recurse", "--family", "hanoi", "--n", "2", "--format", "csv",
    ]));
    assert_eq!(text.lines().next(), Some("n,x,y,z,w,s,r,t,p,m"));
    assert_eq!(
        text.lines().last(),
        Some("2,568301,521504,478579,439204,1089805,1000083,2089888,1917866,4007754")
    );
}

#[test]
fn verify_rows() {
    let x = stdout(&dimers(&["verify", "--family", "sierpx"]));
    assert!(x.contains("Table4.n2.beta = 0.8654807362437070, pass\n"));
    assert!(x.contains("Table3.n3.w = 138198326607977450114587516, pass\n"));
    let h = stdout(&dimers(&["verify", "--family", "hanoi", "--strict"]));
    assert!(h.contains("Table1.n2.x = 568301, pass\n"));
    assert!(
        h.contains("Table1.n3.x = 18782596680434060148, FAIL (expected 18782596680434061312)\n")
    );
}

fn corrupted_step(
    family: Family,
    v: &BoundaryCountVector,
) -> Result<BoundaryCountVector, recursion::RecursionError> {
    let mut out = recursion::step(family, v)?;
    if v.x == 18u32.into() {
        out.x += 1u32;
    }
    Ok(out)
}

#[test]
fn corrupted_recursion_names_first_divergent_stage() {
    let cfg = VerifyConfig {
        families: vec![Family::Hanoi],
        ..VerifyConfig::default()
    };
    let report = run_verify_with(&cfg, corrupted_step);
    assert!(!report.pass);
    let row = report.row("Recursion.hanoi").unwrap();
    assert!(!row.pass);
    assert_eq!(row.actual, "first divergent stage n = 2");
    assert!(!report.row("Table1.n2.x").unwrap().pass);
    assert!(report.row("Table1.n1.x").unwrap().pass);
    assert!(!report.row("Oracle.hanoi.n2").unwrap().pass);
}
