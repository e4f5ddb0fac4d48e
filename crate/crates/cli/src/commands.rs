//! The seven batch commands.  Each reads a resolved [`Config`] and returns a
//! [`Table`]; scans fan out over points and are collected in input order.

use num_complex::Complex64;
use plasmon_core::chi2_closed::{chi2_from_sigma2, sigma2_xyy, Broadening};
use plasmon_core::chi2_oracle::{evaluate, KGridSpec, OracleQuery, Polarization};
use plasmon_core::langevin::{simulate, LineSpec};
use plasmon_core::linear_response::solve_mode;
use plasmon_core::oscillator0d::{amplitude_sq_from_intensity, integrate, zeta_coefficients, OscillatorParams};
use plasmon_core::three_wave::{
    angle_scan_row, bose_n_t, gain_report, phase_match_with, threshold_flux_estimate, threshold_intensity, ChiMethod,
    OperatingPoint,
};
use plasmon_core::units::{from_internal, to_internal, Unit};
use rayon::prelude::*;

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::output::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Dispersion,
    Fig2,
    Fig3,
    Chi2,
    Flux,
    Langevin,
    Osc0d,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Chi2 => "chi2",
            Command::Flux => "flux",
            Command::Langevin => "langevin",
            Command::Osc0d => "osc0d",
        }
    }
}

pub fn run(cmd: Command, cfg: &Config) -> Result<Table> {
    match cmd {
        Command::Dispersion => cmd_dispersion(cfg),
        Command::Fig2 => cmd_fig2(cfg),
        Command::Fig3 => cmd_fig3(cfg),
        Command::Chi2 => cmd_chi2(cfg),
        Command::Flux => cmd_flux(cfg),
        Command::Langevin => cmd_langevin(cfg),
        Command::Osc0d => cmd_osc0d(cfg),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// Scan grid from `points` and the range endpoints as (user-unit, CGS)
/// pairs, enforcing count ≥ 2 and a nonempty increasing range.  The grid is
/// laid out in the configured unit so reported coordinates are exact.
fn scan_points(cfg: &Config, section: &str, lo: &str, hi: &str) -> Result<Vec<(f64, f64)>> {
    let n = cfg.count(section, "points")?;
    let (a, b) = (cfg.user_float(section, lo), cfg.user_float(section, hi));
    if n < 2 {
        return Err(CliError::Config(format!("[{section}] points must be at least 2")));
    }
    if b.partial_cmp(&a) != Some(std::cmp::Ordering::Greater) {
        return Err(CliError::Config(format!("[{section}] {lo} must be below {hi}")));
    }
    let unit = cfg.unit(section, lo);
    Ok(linspace(a, b, n).into_iter().map(|v| (v, unit.map_or(v, |u| to_internal(v, u)))).collect())
}

pub fn chi_method(cfg: &Config, section: &str) -> Result<ChiMethod> {
    Ok(match cfg.raw(section, "method") {
        "auto" => ChiMethod::Auto,
        "resonant" => ChiMethod::Resonant,
        "closed" => ChiMethod::Closed,
        "numeric" => ChiMethod::Numeric(KGridSpec::for_material(&cfg.material()?)),
        other => return Err(CliError::Config(format!("unknown method `{other}`"))),
    })
}

fn operating_point(cfg: &Config, section: &str) -> Result<OperatingPoint> {
    operating_point_with(cfg, chi_method(cfg, section)?)
}

fn operating_point_with(cfg: &Config, method: ChiMethod) -> Result<OperatingPoint> {
    let geom = cfg.geometry()?;
    Ok(phase_match_with(&geom, &cfg.material()?, geom.theta_1i, method)?)
}

pub fn cmd_dispersion(cfg: &Config) -> Result<Table> {
    let (geom, mat) = (cfg.geometry()?, cfg.material()?);
    let grid = scan_points(cfg, "dispersion", "q_min_kF", "q_max_kF")?;
    let (a, b) = (grid[0].1, grid[grid.len() - 1].1);
    if a <= 0.0 {
        return Err(CliError::Config("[dispersion] q_min_kF must be positive".into()));
    }
    let qs = logspace(a * mat.k_f(), b * mat.k_f(), grid.len());
    let modes: Vec<_> = qs.par_iter().map(|&q| solve_mode(q, &geom, &mat)).collect();
    let mut t = Table::new(&["q_s", "omega_s", "v_s", "gamma_s", "E_s0_sq"]);
    for m in modes {
        let m = m?;
        t.rows.push([m.q_s, m.omega_s, m.v_s, m.gamma_s, m.e_s0_sq].map(Cell::Num).to_vec());
    }
    Ok(t)
}

pub fn cmd_fig2(cfg: &Config) -> Result<Table> {
    let (geom, mat) = (cfg.geometry()?, cfg.material()?);
    let grid = scan_points(cfg, "fig2", "theta_min_deg", "theta_max_deg")?;
    let gamma_ref = cfg.float("fig2", "gamma_s_ref_per_s");
    let method = chi_method(cfg, "fig2")?;
    let rows: Vec<_> = grid.par_iter().map(|&(_, th)| angle_scan_row(&geom, &mat, th, gamma_ref, method)).collect();
    let mut t = Table::new(&["theta_1i_deg", "ReG", "omega_s_THz", "valid_flag"]);
    for ((deg, _), r) in grid.iter().zip(rows) {
        t.rows.push(vec![
            Cell::Num(*deg),
            Cell::Num(r.re_g),
            Cell::Num(from_internal(r.omega_s, Unit::Terahertz)),
            Cell::Flag(r.valid),
        ]);
    }
    Ok(t)
}

/// Threshold intensity (GW/cm²) against plasmon damping (1/s).
pub fn cmd_fig3(cfg: &Config) -> Result<Table> {
    let p = operating_point(cfg, "fig3")?;
    let mut t = Table::new(&["gamma_s", "I_threshold"]);
    for (_, g) in scan_points(cfg, "fig3", "gamma_min_per_s", "gamma_max_per_s")? {
        let i = threshold_intensity(&p, g)?;
        t.rows.push(vec![Cell::Num(g), Cell::Num(from_internal(i, Unit::GigawattPerCm2))]);
    }
    Ok(t)
}

/// σ⁽²⁾_xyy and χ⁽²⁾_xyy along a ray of wave vectors, q = (k/points)·(q1, q2)
/// for k = 1…points.
pub fn cmd_chi2(cfg: &Config) -> Result<Table> {
    let mat = cfg.material()?;
    let n = cfg.count("chi2", "points")?;
    if n < 1 {
        return Err(CliError::Config("[chi2] points must be at least 1".into()));
    }
    let (w1, w2) = (cfg.float("chi2", "omega1_THz"), cfg.float("chi2", "omega2_THz"));
    let (q1, q2) = (cfg.float("chi2", "q1_kF") * mat.k_f(), cfg.float("chi2", "q2_kF") * mat.k_f());
    let gamma = cfg.number("chi2", "broadening_per_s").unwrap_or(mat.gamma_pol);
    let method = cfg.raw("chi2", "method").to_string();
    let grid = KGridSpec {
        n_radial: cfg.count("chi2", "n_radial")?,
        n_angular: cfg.count("chi2", "n_angular")?,
        eta: gamma,
        ..KGridSpec::for_material(&mat)
    };
    let scales: Vec<f64> = (1..=n).map(|k| k as f64 / n as f64).collect();
    let values: Vec<Result<Complex64>> = scales
        .par_iter()
        .map(|&s| -> Result<Complex64> {
            Ok(if method == "numeric" {
                let q = OracleQuery {
                    eta1: Polarization::y(),
                    eta2: Polarization::y(),
                    omega1: w1,
                    omega2: w2,
                    q1: [s * q1, 0.0],
                    q2: [s * q2, 0.0],
                };
                evaluate(&q, &mat, &grid)?[0]
            } else {
                sigma2_xyy(w1, w2, s * q1, s * q2, &mat, Broadening::uniform(gamma))?
            })
        })
        .collect();
    let mut t = Table::new(&[
        "omega1_THz",
        "omega2_THz",
        "q1_kF",
        "q2_kF",
        "method",
        "re_sigma2",
        "im_sigma2",
        "re_chi2",
        "im_chi2",
    ]);
    for (s, v) in scales.iter().zip(values) {
        let sigma = v?;
        let chi = chi2_from_sigma2(sigma, w1 + w2)?;
        t.rows.push(vec![
            Cell::Num(cfg.user_float("chi2", "omega1_THz")),
            Cell::Num(cfg.user_float("chi2", "omega2_THz")),
            Cell::Num(s * q1 / mat.k_f()),
            Cell::Num(s * q2 / mat.k_f()),
            Cell::Text(method.clone()),
            Cell::Num(sigma.re),
            Cell::Num(sigma.im),
            Cell::Num(chi.re),
            Cell::Num(chi.im),
        ]);
    }
    Ok(t)
}

/// Gain, detector occupation and idler flux against pump intensity.
pub fn cmd_flux(cfg: &Config) -> Result<Table> {
    let p = operating_point(cfg, "flux")?;
    let det = cfg.detection()?;
    let gamma_s = cfg.float("flux", "gamma_s_per_s");
    let estimate = threshold_flux_estimate(p.omega_s, p.mode.v_s, &det, gamma_s);
    let mut t = Table::new(&[
        "I_p_GW_cm2",
        "ReG",
        "Xi",
        "amplification",
        "N_detector",
        "flux_idler",
        "flux_threshold_estimate",
    ]);
    for (gw, i_p) in scan_points(cfg, "flux", "I_min_GW_cm2", "I_max_GW_cm2")? {
        let r = gain_report(&p, i_p, gamma_s, &det, det.l_x)?;
        t.rows.push(
            [gw, r.g.re, r.xi, r.amplification, r.n_detector, r.flux_idler, estimate]
                .map(Cell::Num)
                .to_vec(),
        );
    }
    Ok(t)
}

/// Builds the Monte-Carlo line described by the `[langevin]` section.
pub fn line_spec(cfg: &Config) -> Result<LineSpec> {
    let v_s_cfg = cfg.number("langevin", "v_s_cm_s");
    let n_cfg = cfg.number("langevin", "n_thermal");
    let mode = if v_s_cfg.is_none() || n_cfg.is_none() { Some(operating_point_with(cfg, ChiMethod::Auto)?) } else { None };
    let v_s = v_s_cfg.unwrap_or_else(|| mode.as_ref().unwrap().mode.v_s);
    let n_thermal = match n_cfg {
        Some(n) => n,
        None => bose_n_t(mode.as_ref().unwrap().omega_s, cfg.detection()?.t),
    };
    let gamma_s = cfg.float("langevin", "gamma_s_per_s");
    let length = cfg.float("langevin", "length_decay") * v_s / gamma_s;
    let n_cells = cfg.count("langevin", "n_cells")?;
    let courant = cfg.float("langevin", "courant");
    let base = LineSpec::characteristic(
        length,
        n_cells,
        v_s,
        gamma_s,
        cfg.float("langevin", "ReG_per_s"),
        n_thermal,
        cfg.count("langevin", "n_traj")?,
        cfg.int("langevin", "seed") as u64,
    );
    let spec = LineSpec {
        dt: courant * base.dt,
        burn_in_transits: cfg.float("langevin", "burn_in_transits"),
        n_samples: cfg.count("langevin", "n_samples")?,
        ..base
    };
    spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(spec)
}

pub fn cmd_langevin(cfg: &Config) -> Result<Table> {
    let profile = simulate(&line_spec(cfg)?)?;
    let mut t = Table::new(&["x", "mean_occupation", "stderr"]);
    for j in 0..profile.x.len() {
        t.rows.push([profile.x[j], profile.mean[j], profile.stderr[j]].map(Cell::Num).to_vec());
    }
    Ok(t)
}

/// Zero-dimensional signal/idler evolution seeded with |E_s| = 1, E_i = 0.
pub fn cmd_osc0d(cfg: &Config) -> Result<Table> {
    let p = operating_point(cfg, "osc0d")?;
    let l = cfg.float("osc0d", "l_cm");
    let gamma_s = cfg.float("osc0d", "gamma_s_per_s");
    let (zs, zi) = zeta_coefficients(&p.mode, &p.mat, p.chi2_s, p.chi2_i, p.omega_i, l, p.geom.theta_1i)?;
    let e_p = amplitude_sq_from_intensity(p.geom.i_p, p.geom.n1).sqrt();
    let params = OscillatorParams::new(zs, zi, gamma_s, Complex64::new(e_p, 0.0), l, p.geom.theta_1i)?;
    let points = cfg.count("osc0d", "points")?;
    if points < 2 {
        return Err(CliError::Config("[osc0d] points must be at least 2".into()));
    }
    let t_end = cfg.float("osc0d", "t_end_decay") / gamma_s;
    let rate = params.gamma_s.max(params.gamma_i).max(params.eigenvalues()[0].norm()).max(params.eigenvalues()[1].norm());
    let sub = ((t_end * rate / (0.05 * points as f64)).ceil() as usize).max(1);
    let dt = t_end / (points * sub) as f64;
    let tr = integrate(&params, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), t_end, dt)?;
    let mut t = Table::new(&["t", "abs_E_s", "abs_E_i"]);
    for k in (0..tr.t.len()).step_by(sub) {
        t.rows.push([tr.t[k], tr.e_s[k].norm(), tr.e_i_conj[k].norm()].map(Cell::Num).to_vec());
    }
    Ok(t)
}
