//! Golden-file and determinism tests for the command-line front end.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drwitt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn assert_golden(args: &[&str], golden: &str) {
    let first = stdout_of(args);
    assert_eq!(first, golden, "golden mismatch for {args:?}");
    // Byte-identical on a second run with the same flags.
    assert_eq!(stdout_of(args), first, "nondeterministic output for {args:?}");
}

#[test]
fn table_groups_golden() {
    assert_golden(
        &["table", "groups", "--p", "2", "--n", "3"],
        include_str!("golden/table_groups_p2_n3.txt"),
    );
    assert_golden(
        &["table", "groups", "--p", "2", "--n", "1"],
        include_str!("golden/table_groups_p2_n1.txt"),
    );
    assert_golden(
        &["table", "groups", "--p", "2", "--n", "3", "--log"],
        include_str!("golden/table_groups_p2_n3_log.txt"),
    );
    assert_golden(
        &["table", "groups", "--p", "5", "--n", "4"],
        include_str!("golden/table_groups_p5_n4.txt"),
    );
}

#[test]
fn witt_decompose_golden() {
    assert_golden(
        &["witt", "decompose", "--p", "2", "--n", "3", "--", "-1", "0", "0"],
        include_str!("golden/witt_decompose_minus_one.txt"),
    );
    assert_golden(
        &["witt", "decompose", "--p", "3", "--n", "4", "--", "5", "7", "0", "2"],
        include_str!("golden/witt_decompose_p3.txt"),
    );
}

#[test]
fn check_logcoeffs_golden() {
    assert_golden(
        &["check", "logcoeffs", "--jmax", "6"],
        include_str!("golden/check_logcoeffs_jmax6.txt"),
    );
    assert_golden(
        &["check", "logcoeffs", "--jmax", "8", "--json"],
        include_str!("golden/check_logcoeffs_jmax8.json"),
    );
}

#[test]
fn table_rows_golden() {
    assert_golden(
        &["table", "products", "--p", "2", "--n", "3"],
        include_str!("golden/table_products_p2_n3.txt"),
    );
    assert_golden(
        &["table", "operators", "--p", "2", "--n", "3", "--log"],
        include_str!("golden/table_operators_p2_n3_log.txt"),
    );
}

#[test]
fn witt_examples_match_exactly() {
    assert_eq!(stdout_of(&["witt", "teich", "--p", "2", "--n", "3", "2"]), "(2,0,0)\n");
    assert_eq!(
        stdout_of(&["witt", "ghost", "--p", "2", "--n", "3", "0", "1", "0"]),
        "(0,2,2)\n"
    );
    assert_eq!(
        stdout_of(&["witt", "unghost", "--p", "2", "--n", "3", "0", "2", "2"]),
        "(0,1,0)\n"
    );
}

#[test]
fn seeded_check_runs_are_deterministic() {
    let args = [
        "check", "axioms", "--p", "2", "--n", "3", "--seed", "9", "--fuel", "8", "--json",
    ];
    let a = stdout_of(&args);
    let b = stdout_of(&args);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    assert_eq!(v["seed"], serde_json::json!(9));
}

#[test]
fn json_result_round_trips_through_library_types() {
    let out = stdout_of(&[
        "witt", "add", "--p", "2", "--n", "3", "--json", "1", "2", "3", "4", "5", "6",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let z: drwitt::WittVector = serde_json::from_value(v["result"].clone()).unwrap();
    let x = drwitt::WittVector::from_ints(2, &[1, 2, 3]);
    let y = drwitt::WittVector::from_ints(2, &[4, 5, 6]);
    assert_eq!(z, x.add(&y));

    let out = stdout_of(&["drw", "mul", "--p", "2", "--n", "4", "--json", "V(1)", "dV(1)"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let z: drwitt::DrwElement = serde_json::from_value(v["result"].clone()).unwrap();
    let expect = drwitt::DrwElement::v_basis_elem(2, 4, 1)
        .mul(&drwitt::DrwElement::dv_basis_elem(2, 4, 1));
    assert_eq!(z, expect);
}

#[test]
fn exit_codes_follow_the_contract() {
    // 0: success.
    assert_eq!(run(&["witt", "teich", "--p", "2", "--n", "2", "3"]).status.code(), Some(0));
    // 2: usage errors, both clap-level and validation-level.
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        run(&["witt", "add", "--p", "7", "--n", "2", "1", "1", "1", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["witt", "teich", "--p", "2", "--n", "99", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "associativity", "--p", "3", "--n", "4"]).status.code(),
        Some(2)
    );
    // 3: a ghost vector outside the image, naming the failing index.
    let out = run(&["witt", "unghost", "--p", "2", "--n", "3", "0", "1", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("ghost component 1"), "stderr: {err}");
}

#[test]
fn poly_subcommand_agrees_with_its_oracle() {
    let x = "t3:r=1,l=3:[1]";
    let y = "t4:s=1,m=1:[1]";
    let closed = stdout_of(&["poly", "mul", "--n", "3", x, y]);
    let oracle = stdout_of(&["poly", "oracle", "--n", "3", x, y]);
    assert_eq!(closed, oracle);
}
