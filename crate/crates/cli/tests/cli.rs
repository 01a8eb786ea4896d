use std::path::Path;
use std::process::Command;

use qillum_cli::{parse, report_point, run_figure3, run_sweep, CliError, Dataset};

const BIN: &str = env!("CARGO_BIN_EXE_qillum");

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/configs"))
}

fn load(name: &str) -> qillum_cli::SweepConfig {
    parse(&std::fs::read_to_string(configs().join(name)).unwrap()).unwrap()
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> std::path::PathBuf {
    let p = dir.path().join("run.cfg");
    std::fs::write(&p, text).unwrap();
    p
}

const POINT: &str = "\
[eom]
temperature = 30 mk
gamma_w = 5181.95
gamma_o = 668.43
[channel]
eta = 0.07
temperature = 293 k
";

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let cfg = parse(&format!(
        "{POINT}[grid]\ngamma_w = 100, 1e4, 6, log\ngamma_o = 10, 1e3, 5, log\n\
         [output]\nmetrics = E, D/nw, F, P_QI\nm = 1e5\n[run]\nmc = on\nmc_samples = 2000\nseed = 9\n"
    ))
    .unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_sweep(&cfg, "h").unwrap().dataset.to_bytes())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
}

#[test]
fn binary_output_is_byte_identical() {
    let cfg = configs().join("fig4.cfg");
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (out, threads) in [(&a, "1"), (&b, "5")] {
        let st = Command::new(BIN)
            .args(["sweep", cfg.to_str().unwrap(), "--threads", threads, "--out", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(st.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn csv_round_trip_matches_schema() {
    let cfg = load("fig4.cfg");
    let out = run_sweep(&cfg, "abc").unwrap().dataset;
    let bytes = out.to_bytes();
    let text = String::from_utf8(bytes.clone()).unwrap();
    assert!(text.starts_with("# qillum: "));
    assert!(text.contains("# config_sha256: abc\n"));
    let back = Dataset::read(&bytes[..]).unwrap();
    assert_eq!(back, out);
    assert_eq!(
        back.header,
        ["t_eom_k", "kappa_i", "stable", "drift_margin", "F", "E", "n_w", "error"]
    );
    assert_eq!(back.rows.len(), 21 * 10);
    let error_col = back.column("error").unwrap();
    let stable_col = back.column("stable").unwrap();
    for row in &back.rows {
        assert_eq!(row.len(), back.header.len());
        assert!(row[stable_col] == "0" || row[stable_col] == "1");
        for (i, cell) in row.iter().enumerate() {
            if i != error_col && i != stable_col && !cell.is_empty() {
                let v: f64 = cell.parse().unwrap();
                assert!(v.is_finite());
                // 17 significant digits
                assert_eq!(cell.split('e').next().unwrap().trim_start_matches('-').len(), 18);
            }
        }
    }
}

#[test]
fn fig2_surface_is_mostly_entangled_where_stable() {
    let mut cfg = load("fig2.cfg");
    for a in &mut cfg.axes {
        a.points = 15;
    }
    let out = run_sweep(&cfg, "").unwrap().dataset;
    let (mut stable, mut entangled) = (0, 0);
    for r in 0..out.rows.len() {
        if out.value(r, "stable") == Some(1.0) {
            stable += 1;
            if out.value(r, "E").is_some_and(|e| e > 1.0) {
                entangled += 1;
            }
        }
    }
    assert!(stable > 50);
    assert!(entangled as f64 > 0.9 * stable as f64, "{entangled}/{stable}");
}

#[test]
fn single_point_grid_at_operating_point() {
    let out = run_sweep(&load("fig3_point.cfg"), "").unwrap().dataset;
    assert_eq!(out.rows.len(), 1);
    let n_w = out.value(0, "n_w").unwrap();
    let n_o = out.value(0, "n_o").unwrap();
    assert!((n_w / 0.739 - 1.0).abs() < 0.05, "{n_w}");
    assert!((n_o / 0.681 - 1.0).abs() < 0.05, "{n_o}");
    assert!(out.value(0, "F").unwrap() > 1.0);
    assert!(out.value(0, "P_QI(M=1e6)").unwrap() < out.value(0, "P_coh(M=1e6)").unwrap());
    assert_eq!(out.rows[0].last().unwrap(), "");
}

#[test]
fn empty_selection_is_a_config_error() {
    let cfg = parse(POINT).unwrap();
    let e = run_sweep(&cfg, "").err().unwrap();
    assert!(matches!(e, CliError::Config(_)));
    assert_eq!(e.exit_code(), 1);

    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, POINT);
    let out = Command::new(BIN).args(["sweep", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no outputs selected"));
}

#[test]
fn parse_errors_point_at_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, "[eom]\ntemperature = 30\n");
    let out = Command::new(BIN).args(["report", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("temperature") && err.contains("missing unit"), "{err}");
}

#[test]
fn figure3_curves() {
    let out = run_figure3(&load("fig3.cfg"), "").unwrap();
    let n = out.rows.len();
    assert_eq!(n, 41);
    let mut last = (0.0, 0.0);
    for r in 0..n {
        let q = out.value(r, "log10_P_QI").unwrap();
        let c = out.value(r, "log10_P_coh").unwrap();
        assert!(q < c, "row {r}");
        if r > 0 {
            assert!(q < last.0 && c < last.1);
        }
        last = (q, c);
        let p = out.value(r, "P_QI").unwrap();
        if p > 1e-300 {
            assert!((p.log10() - q).abs() < 1e-9 * q.abs().max(1.0));
        }
    }
    // M = 1e8 sits below the f64 range but the log column keeps it
    assert!(out.value(n - 1, "log10_P_QI").unwrap() < -300.0);
}

#[test]
fn figure3_single_mode_and_blind_channel() {
    let cfg = parse(&format!("{POINT}[output]\nm = 1\n")).unwrap();
    let out = run_figure3(&cfg, "").unwrap();
    let (q, c) = (out.value(0, "P_QI").unwrap(), out.value(0, "P_coh").unwrap());
    assert!(q < c && c < 0.5 && q > 0.49, "{q} {c}");

    let cfg = parse(&format!("{POINT}[output]\nm = 1, 1e6\n").replace("eta = 0.07", "eta = 0")).unwrap();
    let out = run_figure3(&cfg, "").unwrap();
    for r in 0..2 {
        assert_eq!(out.value(r, "P_QI"), Some(0.5));
        assert_eq!(out.value(r, "P_coh"), Some(0.5));
    }
}

#[test]
fn figure3_rejects_other_axes() {
    let cfg = parse(&format!("{POINT}[grid]\neta = 0.1, 0.2, 2\n")).unwrap();
    assert_eq!(run_figure3(&cfg, "").err().unwrap().exit_code(), 1);
    let cfg = parse(&format!("{POINT}[grid]\nm = 1, 10, 2, lin\n")).unwrap();
    assert_eq!(run_figure3(&cfg, "").err().unwrap().exit_code(), 1);
}

#[test]
fn report_at_operating_point() {
    let r = report_point(&load("fig3_point.cfg")).unwrap();
    assert!(r.failures.is_empty(), "{:?}", r.failures);
    assert!(r.text.contains("n_B = 610.01"), "{}", r.text);
    assert!(r.text.contains("n_B^thresh = 0.069"), "{}", r.text);
}

#[test]
fn report_without_optical_coupling() {
    let cfg = parse(&POINT.replace("gamma_o = 668.43", "gamma_o = 0")).unwrap();
    let r = report_point(&cfg).unwrap();
    assert!(r.text.contains("E = 0.000000000"), "{}", r.text);
    assert!(r.text.contains("F = 0.000000"), "{}", r.text);
}

#[test]
fn report_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(&dir, &POINT.replace("gamma_o = 668.43", "gamma_o = 6000"));
    let out = Command::new(BIN).args(["report", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("margin"));

    let path = write_config(&dir, &format!("{POINT}[run]\nmc_samples = 1000000\n"));
    let out = Command::new(BIN)
        .args(["report", path.to_str().unwrap(), "--mc", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("monte-carlo oracle (1000000 samples, seed 3)"));
}

#[test]
fn oracle_columns_in_sweep() {
    let cfg = parse(&format!(
        "{POINT}[grid]\neta = 0.01, 0.3, 3\n[output]\nmetrics = F\n[run]\nmc = on\nmc_samples = 200000\n"
    ))
    .unwrap();
    let out = run_sweep(&cfg, "").unwrap();
    assert_eq!(out.mc_failures, 0);
    for r in 0..3 {
        assert!(out.dataset.value(r, "mc_max_z").unwrap() < 5.0);
    }
}
