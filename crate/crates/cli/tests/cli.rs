use std::fs;
use std::path::Path;
use std::process::Command;

use eringen_lab::csv::{emit_csv, Table};
use eringen_lab::{run, CliError};

fn lab(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec![
        "eringen-lab".to_string(),
        "--out-dir".into(),
        out.display().to_string(),
    ];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(argv)
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn comment(text: &str, key: &str) -> Option<f64> {
    let prefix = format!("# {key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .map(|v| v.parse().unwrap())
}

#[test]
fn eig_scan_writes_header_slope_and_script() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        lab(
            dir.path(),
            &[
                "eig-scan",
                "--kernel",
                "cubic",
                "--p",
                "1",
                "--N",
                "16,32,64,128"
            ]
        ),
        0
    );
    let text = fs::read_to_string(dir.path().join("eig_scan_cubic_p1.csv")).unwrap();
    assert!(text.starts_with("N,h,lambda_min\n"));
    assert!(!text.contains('\r'));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][0], 16.0);
    assert_eq!(rows[0][1], 0.0625);
    let slope = comment(&text, "slope").unwrap();
    assert!((slope - 2.0).abs() < 0.15, "slope {slope}");
    let script = fs::read_to_string(dir.path().join("eig_scan_cubic_p1.gp")).unwrap();
    assert!(script.contains("'eig_scan_cubic_p1.csv' using 2:3"));
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(lab(d.path(), &["coercivity", "--N", "16,32"]), 0);
        assert_eq!(lab(d.path(), &["hetero", "--N", "16", "--mode", "full"]), 0);
    }
    for name in ["coercivity.csv", "hetero_full.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn converge_reports_rate() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        lab(dir.path(), &["converge", "--alpha", "0.6666666666666666"]),
        0
    );
    let text = fs::read_to_string(dir.path().join("converge.csv")).unwrap();
    assert!(text.starts_with("N,h,l2_error\n"));
    assert_eq!(data_rows(&text).len(), 7);
    let rate = comment(&text, "rate").unwrap();
    assert!((0.9..=1.2).contains(&rate), "rate {rate}");
}

#[test]
fn linear_solution_is_half_the_load_away_from_the_ends() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        lab(
            dir.path(),
            &["solve", "--kernel", "linear", "--f", "one", "--N", "64"]
        ),
        0
    );
    let text = fs::read_to_string(dir.path().join("solve_linear_p1_one_N64.csv")).unwrap();
    assert!(text.starts_with("x,u\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 65);
    assert_eq!((rows[0][1], rows[64][1]), (0.0, 0.0));
    for r in rows.iter().filter(|r| (0.35..=0.65).contains(&r[0])) {
        assert!((r[1] - 0.5).abs() < 1e-9, "u({}) = {}", r[0], r[1]);
    }
}

#[test]
fn remaining_subcommands_produce_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(lab(p, &["solve", "--kernel", "riesz:0.5", "--N", "8"]), 0);
    assert!(p.join("solve_riesz-0.5_p1_one_analytic.csv").exists());
    assert_eq!(lab(p, &["mixture", "--m", "1", "--N", "16"]), 0);
    let text = fs::read_to_string(p.join("mixture_riesz-0.6666666666666666_m1_N16.csv")).unwrap();
    for r in data_rows(&text) {
        assert!((r[1] - 0.5 * r[0] * (1.0 - r[0])).abs() < 1e-12);
    }
    assert_eq!(lab(p, &["korn-check", "--grid", "2"]), 0);
    let korn = fs::read_to_string(p.join("korn.csv")).unwrap();
    assert!(korn.starts_with("field,lhs,rhs,ratio\n"));
    assert_eq!(korn.lines().filter(|l| !l.starts_with('#')).count(), 6);
    assert_eq!(lab(p, &["kernels-plot", "--points", "10"]), 0);
    let kernels = fs::read_to_string(p.join("kernels.csv")).unwrap();
    assert!(kernels.starts_with("d,cubic,linear,riesz,riesz_half\n"));
    for name in [
        "korn.gp",
        "kernels.gp",
        "mixture_riesz-0.6666666666666666_m1.gp",
    ] {
        assert!(p.join(name).exists(), "{name}");
    }
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "# linear kernel scan\nsubcommand = eig-scan\nkernel = linear\nN_list = 8,16,32\nout_dir = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let code = run(["eringen-lab", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(out.join("eig_scan_linear_p1.csv")).unwrap();
    assert_eq!(data_rows(&text).len(), 3);

    let code = run([
        "eringen-lab",
        "eig-scan",
        "--p",
        "2",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.join("eig_scan_linear_p2.csv").exists());

    let code = run([
        "eringen-lab",
        "eig-scan",
        "--config",
        cfg.to_str().unwrap(),
        "--kernel",
        "cubic",
    ]);
    assert_eq!(code, 0);
    assert!(out.join("eig_scan_cubic_p1.csv").exists());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(lab(p, &["eig-scan", "--no-such-flag"]), 2);
    assert_eq!(lab(p, &["no-such-command"]), 2);
    assert_eq!(lab(p, &["eig-scan", "--N", "2"]), 2);
    assert_eq!(lab(p, &["eig-scan", "--kernel", "gaussian"]), 2);
    assert_eq!(lab(p, &["converge", "--alpha", "1.5"]), 2);
    assert_eq!(lab(p, &["mixture", "--m", "0"]), 2);
    assert_eq!(lab(p, &["hetero", "--mode", "full:L=0.5", "--N", "16"]), 2);
    let missing = p.join("missing.cfg");
    assert_eq!(
        run(["eringen-lab", "--config", missing.to_str().unwrap()]),
        1
    );
}

#[test]
fn emit_csv_header_only_and_io_context() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    emit_csv(&Table::new(&["N", "h", "lambda_min"]), &path).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), "N,h,lambda_min\n");
    let bad = dir.path().join("no/such/dir/x.csv");
    let err = emit_csv(&Table::new(&["x"]), &bad).unwrap_err();
    assert!(matches!(err, CliError::Io { .. }));
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("no/such/dir/x.csv"));
}

#[test]
fn binary_help_and_thread_variable() {
    let bin = env!("CARGO_BIN_EXE_eringen-lab");
    for sub in [
        "eig-scan",
        "solve",
        "converge",
        "coercivity",
        "hetero",
        "mixture",
        "korn-check",
        "kernels-plot",
    ] {
        let out = Command::new(bin).args([sub, "--help"]).output().unwrap();
        assert!(out.status.success());
        let help = String::from_utf8(out.stdout).unwrap();
        assert!(help.contains("--out-dir"), "{sub}");
        let flags = help
            .lines()
            .filter(|l| l.trim_start().starts_with("--"))
            .count();
        let defaults = help.matches("[default: ").count();
        assert_eq!(flags, defaults, "every flag of {sub} shows its default");
    }
    let dir = tempfile::tempdir().unwrap();
    let ok = Command::new(bin)
        .env("ERINGEN_LAB_THREADS", "2")
        .args([
            "--out-dir",
            dir.path().to_str().unwrap(),
            "kernels-plot",
            "--points",
            "5",
        ])
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));
    let bad = Command::new(bin)
        .env("ERINGEN_LAB_THREADS", "lots")
        .args(["--out-dir", dir.path().to_str().unwrap(), "kernels-plot"])
        .status()
        .unwrap();
    assert_eq!(bad.code(), Some(2));
}
