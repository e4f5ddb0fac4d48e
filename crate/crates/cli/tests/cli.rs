use std::path::{Path, PathBuf};
use std::process::Command;

use plasmon_opa::{run, Command as Cmd, Config, Table};
use tempfile::TempDir;

const BASE: &str = "[material]\nE_F_meV = resonant\n";

fn cfg(overrides: &[(&str, &str)]) -> Config {
    let o: Vec<(String, String)> = overrides.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    Config::from_str_with(BASE, &o).unwrap()
}

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let p = dir.path().join("run.ini");
    std::fs::write(&p, text).unwrap();
    p
}

fn exe(args: &[&str], config: &Path, out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_plasmon-opa"))
        .arg(args[0])
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(&args[1..])
        .output()
        .unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn dispersion_header_order_and_determinism() {
    let dir = TempDir::new().unwrap();
    let c = write_config(&dir, BASE);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(!exe(&["dispersion", "--points", "12"], &c, &a).status.success());
    assert!(exe(&["dispersion", "--dispersion.points", "12"], &c, &a).status.success());
    assert!(exe(&["dispersion", "--dispersion.points=12"], &c, &b).status.success());
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    let lines = data_lines(&text);
    assert_eq!(lines[0], "q_s,omega_s,v_s,gamma_s,E_s0_sq");
    assert_eq!(lines.len(), 13);
    let omega: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(omega.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn provenance_header_carries_version_config_and_seed() {
    let dir = TempDir::new().unwrap();
    let c = write_config(&dir, BASE);
    let out = dir.path().join("l.csv");
    let r = exe(&["langevin", "--n_cells", "40", "--n_traj", "100", "--seed", "77"], &c, &out);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with(&format!("# tool = plasmon-opa {}\n", env!("CARGO_PKG_VERSION"))));
    assert!(text.contains("# seed = 77\n"));
    assert!(text.contains("# material.E_F_meV = resonant\n"));
    assert!(text.contains("# langevin.n_traj = 100\n"));
    assert_eq!(data_lines(&text)[0], "x,mean_occupation,stderr");
}

#[test]
fn csv_and_json_are_value_identical() {
    let dir = TempDir::new().unwrap();
    let c = write_config(&dir, BASE);
    let (csv, json) = (dir.path().join("f.csv"), dir.path().join("f.json"));
    assert!(exe(&["fig2", "--fig2.points", "17"], &c, &csv).status.success());
    assert!(exe(&["fig2", "--fig2.points", "17", "--format", "json"], &c, &json).status.success());
    let csv = std::fs::read_to_string(csv).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let lines = data_lines(&csv);
    let cols: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(doc["columns"], serde_json::json!(cols));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), lines.len() - 1);
    for (line, row) in lines[1..].iter().zip(rows) {
        for (field, v) in line.split(',').zip(row.as_array().unwrap()) {
            match v {
                serde_json::Value::Null => assert_eq!(field, "NaN"),
                serde_json::Value::Bool(b) => assert_eq!(field, b.to_string()),
                serde_json::Value::Number(n) => assert_eq!(field.parse::<f64>().unwrap(), n.as_f64().unwrap()),
                other => panic!("unexpected {other}"),
            }
        }
    }
    assert_eq!(doc["provenance"]["config"]["fig2.points"], "17");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o.csv");
    let c = write_config(&dir, BASE);
    assert_eq!(exe(&["fig3", "--nonsense", "1"], &c, &out).status.code(), Some(2));
    let typo = write_config(&dir, "[material]\nE_F_meV = resonant\n[geometry]\ntheta_i_deg = 3\n");
    assert_eq!(exe(&["fig3"], &typo, &out).status.code(), Some(2));
    let missing = write_config(&dir, "[material]\npreset = ti\n");
    let r = exe(&["fig3"], &missing, &out);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("E_F_meV"));
    let c = write_config(&dir, BASE);
    assert_eq!(exe(&["fig3", "--theta_1i_deg", "10", "--format", "xml"], &c, &out).status.code(), Some(2));
    let r = exe(&["fig3", "--n1", "2", "--n2", "1", "--theta_1i_deg", "70"], &c, &out);
    assert_eq!(r.status.code(), Some(3));
    assert!(!r.stderr.is_empty());
}

#[test]
fn fig2_anchor_row_and_degenerate_window() {
    let t = run(Cmd::Fig2, &cfg(&[])).unwrap();
    let theta = t.column("theta_1i_deg").unwrap();
    let w = t.column("omega_s_THz").unwrap();
    let j = theta.iter().position(|&x| x == 20.0).unwrap();
    assert!((w[j] - 1.0).abs() < 0.1, "{}", w[j]);
    for (k, th) in theta.iter().enumerate() {
        if (th - 45.0).abs() < 5.0 {
            assert_eq!(t.rows[k][3], plasmon_opa::Cell::Flag(false), "θ = {th}");
        }
    }
}

fn column(t: &Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap()
}

#[test]
fn fig3_sorted_and_linear() {
    let t = run(Cmd::Fig3, &cfg(&[("fig3.points", "3"), ("gamma_min_per_s", "1e11"), ("gamma_max_per_s", "3e11")])).unwrap();
    let (g, i) = (column(&t, "gamma_s"), column(&t, "I_threshold"));
    assert!(g.windows(2).all(|w| w[1] > w[0]));
    assert!((i[1] / i[0] - 2.0).abs() < 1e-6);
    assert!((i[0] / 0.2343092579979125 - 1.0).abs() < 1e-8);
}

#[test]
fn chi2_closed_and_numeric_agree_off_resonance() {
    let closed = run(Cmd::Chi2, &cfg(&[("chi2.points", "2")])).unwrap();
    let numeric = run(Cmd::Chi2, &cfg(&[("chi2.points", "2"), ("chi2.method", "numeric")])).unwrap();
    for k in 0..2 {
        let (a, b) = (column(&closed, "re_sigma2")[k], column(&closed, "im_sigma2")[k]);
        let (c, d) = (column(&numeric, "re_sigma2")[k], column(&numeric, "im_sigma2")[k]);
        let rel = (a - c).hypot(b - d) / c.hypot(d);
        assert!(rel < 0.02, "row {k}: {rel}");
    }
}

#[test]
fn flux_at_threshold_matches_threshold_estimate_magnitude() {
    let i_th = "0.2343092579979125";
    let t = run(Cmd::Flux, &cfg(&[("flux.points", "2"), ("I_min_GW_cm2", i_th), ("I_max_GW_cm2", "0.3")])).unwrap();
    assert!(column(&t, "Xi")[0].abs() < 1e-6);
    let ratio = column(&t, "flux_idler")[0] / column(&t, "flux_threshold_estimate")[0];
    assert!(ratio > 0.5 && ratio < 2.0, "{ratio}");
}

#[test]
fn langevin_without_gain_relaxes_to_thermal_occupation() {
    let c = cfg(&[("n_cells", "80"), ("n_traj", "1000"), ("n_thermal", "3"), ("length_decay", "5")]);
    let t = run(Cmd::Langevin, &c).unwrap();
    let (m, s) = (column(&t, "mean_occupation"), column(&t, "stderr"));
    let j = m.len() - 1;
    assert!((m[j] - 3.0).abs() < 3.0 * s[j], "{} ± {}", m[j], s[j]);
}

#[test]
fn osc0d_below_threshold_decays() {
    let t = run(Cmd::Osc0d, &cfg(&[("I_p_GW_cm2", "1e-4"), ("t_end_decay", "5")])).unwrap();
    let e = column(&t, "abs_E_s");
    assert_eq!(e[0], 1.0);
    assert!(*e.last().unwrap() < 0.1);
    assert_eq!(t.columns, vec!["t", "abs_E_s", "abs_E_i"]);
}
