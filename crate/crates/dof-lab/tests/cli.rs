//! End-to-end checks of the command-line surface and its exit-code
//! contract: 0 success, 2 usage error, 3 degraded chain / failed check.

use std::process::{Command, Output};

fn dof_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dof-lab"))
        .args(args)
        .env_remove("DOF_LAB_SEED")
        .output()
        .expect("spawn dof-lab")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bounds_reports_the_golden_points() {
    let out = dof_lab(&["bounds", "--k", "4", "--mt", "2", "--mr", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("\"decomposition\": \"10/7\""), "{text}");
    assert!(text.contains("\"counting\": \"7/5\""), "{text}");
    assert!(text.contains("proven_decomposition"), "{text}");

    let out = dof_lab(&["bounds", "--k", "4", "--mt", "8", "--mr", "21"]);
    assert!(stdout_of(&out).contains("\"best_known\": \"168/29\""));

    let out = dof_lab(&["bounds", "--k", "4", "--mt", "1", "--mr", "1"]);
    assert!(stdout_of(&out).contains("\"decomposition\": \"1/2\""));
}

#[test]
fn bounds_rejects_small_k() {
    let out = dof_lab(&["bounds", "--k", "3", "--mt", "2", "--mr", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_reproduces_script_bounds() {
    for (script, bound) in [
        ("ex3_3x8", "24/11"),
        ("kuser_5_4_15", "60/19"),
        ("five_to_one_2x5", "10/7"),
    ] {
        let out = dof_lab(&["chain", "--script", script, "--seed", "11"]);
        assert_eq!(out.status.code(), Some(0), "{script}");
        let text = stdout_of(&out);
        assert!(
            text.contains(&format!("\"bound\": \"{bound}\"")),
            "{script}: {text}"
        );
        assert!(text.contains("\"degraded\": false"), "{script}");
    }
}

#[test]
fn chain_usage_errors_exit_2() {
    let out = dof_lab(&["chain", "--script", "no_such_script", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // Regime algorithms need explicit antenna counts.
    let out = dof_lab(&["chain", "--script", "alg1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dof_lab(&["chain", "--script", "alg1", "--mt", "3", "--mr", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn certify_sweep_contract() {
    // No valid half-regime point exists below N = 5: header-only table.
    let out = dof_lab(&["certify", "--regime", "half", "--max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out).trim(), "m,n,regime,a,steps,pass,bound");

    let out = dof_lab(&["certify", "--regime", "half", "--max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("2,5,half,1,2,true,10/7"), "{text}");

    let out = dof_lab(&["certify", "--regime", "nope", "--max", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn curve_emits_the_documented_header() {
    let out = dof_lab(&["curve", "--k", "4", "--max", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with(
        "gamma,m,n,counting_over_n,decomposition_over_n,dstar_over_n,best_over_n,status,regime"
    ));
    assert!(text.lines().count() > 20);
}

#[test]
fn multilook_demo_and_file_input() {
    let out = dof_lab(&["multilook", "--demo"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("\"l_sigma\": 3"));

    let dir = std::env::temp_dir().join("dof-lab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("subspaces.json");
    std::fs::write(
        &input,
        r#"{"m": 3, "subspaces": [[[1,0,0],[0,1,0]], [[0,0,1]], [[1,1,1]]]}"#,
    )
    .unwrap();
    let out = dof_lab(&["multilook", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("\"l_sigma\": 1"));
}

#[test]
fn align_designs_verify_from_the_cli() {
    let out = dof_lab(&[
        "align", "--design", "kuser", "--k", "4", "--beta", "1", "--seed", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("\"pass\": true"));

    let out = dof_lab(&[
        "align",
        "--design",
        "four_to_one",
        "--case",
        "3x5",
        "--beta",
        "1",
        "--seed",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = dof_lab(&["align", "--design", "four_to_one", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(2)); // missing --case
}

#[test]
fn seed_env_var_is_honored() {
    let with_flag = dof_lab(&["chain", "--script", "ex1_2x5", "--seed", "42"]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_dof-lab"))
        .args(["chain", "--script", "ex1_2x5"])
        .env("DOF_LAB_SEED", "42")
        .output()
        .expect("spawn dof-lab");
    assert_eq!(with_flag.stdout, with_env.stdout);
}

#[test]
fn rational_backend_chain_runs_exactly() {
    let out = dof_lab(&[
        "chain",
        "--script",
        "ex1_2x5",
        "--seed",
        "3",
        "--backend",
        "rational",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("\"bound\": \"10/7\""));
}
