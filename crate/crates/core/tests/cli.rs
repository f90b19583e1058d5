use std::f64::consts::PI;
use std::process::{Command, Output};

use conevol::cli::record::RunRecord;

fn conevol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conevol"))
        .args(args)
        .output()
        .expect("failed to spawn conevol")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses CSV output into (header, rows).
fn csv_rows(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn json_volume(o: &Output) -> f64 {
    let line = stdout(o);
    RunRecord::from_json(line.trim()).unwrap().volume
}

#[test]
fn closed_form_at_zero_offset() {
    let o = conevol(&["volume", "--problem", "cone-cylinder", "--method", "closed", "--k", "0", "--alpha-deg", "45"]);
    assert!(o.status.success());
    let (h, rows) = csv_rows(&o);
    assert_eq!(rows.len(), 1);
    let v: f64 = rows[0][column(&h, "volume")].parse().unwrap();
    assert!((v - 2.0 * PI / 3.0).abs() < 1e-12);
    assert_eq!(rows[0][column(&h, "method")], "closed_form");
}

#[test]
fn series_at_zero_offset_is_cap_volume() {
    let o = conevol(&[
        "volume", "--problem", "cone-sphere", "--method", "series", "--k", "0", "--alpha-deg", "60", "--json",
    ]);
    assert!(o.status.success());
    assert!((json_volume(&o) - PI / 3.0).abs() < 1e-12);
}

#[test]
fn semi_analytic_agrees_with_quad_2d() {
    let base = ["volume", "--problem", "cone-sphere", "--k", "0.5", "--alpha-deg", "45", "--json", "--method"];
    let semi = conevol(&[&base[..], &["semi-analytic"]].concat());
    let quad = conevol(&[&base[..], &["quad-2d"]].concat());
    assert!(semi.status.success() && quad.status.success());
    assert!((json_volume(&semi) - json_volume(&quad)).abs() < 1e-7);
}

#[test]
fn sweep_is_row_major_and_right_angle_is_empty() {
    let o = conevol(&[
        "sweep", "--problem", "cone-cylinder", "--method", "closed", "--k-grid", "0:1:3", "--alpha-grid", "30:90:3",
    ]);
    assert!(o.status.success());
    let (h, rows) = csv_rows(&o);
    assert_eq!(rows.len(), 9);
    let (ki, ai, vi) = (column(&h, "k"), column(&h, "alpha_rad"), column(&h, "volume"));
    let ks: Vec<f64> = rows.iter().map(|r| r[ki].parse().unwrap()).collect();
    assert_eq!(ks, [0.0, 0.0, 0.0, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0]);
    for r in &rows {
        let a: f64 = r[ai].parse().unwrap();
        if (a - PI / 2.0).abs() < 1e-15 {
            assert_eq!(r[vi].parse::<f64>().unwrap(), 0.0);
        }
    }
}

#[test]
fn zero_offset_series_sweep() {
    let o = conevol(&[
        "sweep", "--problem", "cone-sphere", "--method", "series", "--k-grid", "0:0:1", "--alpha-grid", "15:90:6",
    ]);
    assert!(o.status.success());
    let (h, rows) = csv_rows(&o);
    assert_eq!(rows.len(), 6);
    for r in &rows {
        let a: f64 = r[column(&h, "alpha_rad")].parse().unwrap();
        let v: f64 = r[column(&h, "volume")].parse().unwrap();
        assert!((v - 2.0 * PI / 3.0 * (1.0 - a.cos())).abs() < 1e-12);
    }
}

#[test]
fn degrees_and_radians_agree() {
    let deg = conevol(&[
        "volume", "--problem", "cone-sphere", "--method", "semi-analytic", "--k", "0.3", "--alpha-deg", "30", "--json",
    ]);
    let rad_arg = (PI / 6.0).to_string();
    let rad = conevol(&[
        "volume", "--problem", "cone-sphere", "--method", "semi-analytic", "--k", "0.3", "--alpha-rad", &rad_arg,
        "--json",
    ]);
    assert!((json_volume(&deg) - json_volume(&rad)).abs() < 1e-15);
}

#[test]
fn json_records_carry_seed_for_monte_carlo() {
    let o = conevol(&[
        "volume", "--problem", "cone-cylinder", "--method", "mc", "--k", "0.2", "--alpha-deg", "40", "--samples",
        "10000", "--seed", "11", "--json",
    ]);
    assert!(o.status.success());
    let rec = RunRecord::from_json(stdout(&o).trim()).unwrap();
    assert_eq!(rec.seed, Some(11));
    assert_eq!(rec.evaluations, 10_000);
}

#[test]
fn usage_errors_exit_two() {
    let unsupported = conevol(&["volume", "--problem", "cone-cylinder", "--method", "series", "--k", "0", "--alpha-deg", "45"]);
    assert_eq!(unsupported.status.code(), Some(2));
    let out_of_range = conevol(&["volume", "--problem", "cone-sphere", "--method", "series", "--k", "1.5", "--alpha-deg", "45"]);
    assert_eq!(out_of_range.status.code(), Some(2));
    let both_angles = conevol(&[
        "volume", "--problem", "cone-sphere", "--method", "series", "--k", "0", "--alpha-deg", "45", "--alpha-rad", "1",
    ]);
    assert_eq!(both_angles.status.code(), Some(2));
    assert_eq!(conevol(&["--help"]).status.code(), Some(0));
}

#[test]
fn truncation_is_a_warning_unless_strict() {
    let args = ["volume", "--problem", "cone-sphere", "--method", "series", "--k", "0.99", "--alpha-deg", "80", "--terms", "3"];
    let lenient = conevol(&args);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("truncated"));
    let strict = conevol(&[&args[..], &["--strict"]].concat());
    assert_eq!(strict.status.code(), Some(3));
    // the record is still emitted
    assert_eq!(csv_rows(&strict).1.len(), 1);
}
