//! Pump → plasmon + idler three-wave mixing at the expectation-value level:
//! phase matching, Fresnel factors, parametric gain and threshold, plasmon
//! amplification, detector-averaged occupation, idler flux and the
//! reflected-idler coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::chi2_closed::{chi2_from_sigma2, chi2_resonant, is_pump_resonant, sigma2_xyy, Broadening};
use crate::chi2_oracle::{self, KGridSpec, OracleQuery, Polarization};
use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};
use crate::linear_response::{bisect, dispersion_omega, solve_mode, PlasmonMode};
use crate::params::{DetectionGeometry, Geometry, MaterialParams};

/// Scan points used to bracket the phase-matching root.
pub const PHASE_MATCH_SCAN_POINTS: usize = 400;
/// Relative tolerance of the phase-matched plasmon frequency.
pub const PHASE_MATCH_REL_TOL: f64 = 1e-10;
/// Below this |Ξ| the detector factor switches to its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;
/// Relative disagreement between the resonant and full χ⁽²⁾ products that is flagged.
pub const PATH_DISAGREEMENT: f64 = 0.25;

/// How the second-order susceptibilities entering the gain are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChiMethod {
    /// Resonant formula when the pump sits at the interband edge, oracle otherwise.
    Auto,
    /// Resonant closed form; χ⁽ⁱ²⁾_yyx = χ⁽ˢ²⁾*_xyy.
    Resonant,
    /// Full σ⁽²⁾_xyy with the dissipation substitution; χ⁽ⁱ²⁾_yyx = χ⁽ˢ²⁾*_xyy.
    Closed,
    /// Both components from the k-space integral (broadening = γ).
    Numeric(KGridSpec),
}

/// Which evaluation actually produced the χ⁽²⁾ values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiPath {
    Resonant,
    Closed,
    Numeric,
}

impl ChiPath {
    pub fn name(self) -> &'static str {
        match self {
            ChiPath::Resonant => "resonant",
            ChiPath::Closed => "closed",
            ChiPath::Numeric => "numeric",
        }
    }
}

/// A fully phase-matched pump/idler/plasmon triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub geom: Geometry,
    pub mat: MaterialParams,
    pub mode: PlasmonMode,
    /// Phase-matched plasmon frequency (rad/s).
    pub omega_s: f64,
    pub omega_i: f64,
    /// Signed in-plane wave numbers along x (1/cm).
    pub q_p: f64,
    pub q_i: f64,
    pub q_s: f64,
    pub t_p: f64,
    pub t_i: f64,
    pub gamma_coupling: Complex64,
    /// χ⁽ˢ²⁾_xyy(ω_s; ω_p, −ω_i).
    pub chi2_s: Complex64,
    /// χ⁽ⁱ²⁾_yyx(ω_i; ω_p, −ω_s).
    pub chi2_i: Complex64,
    pub chi_path: ChiPath,
}

/// Gain-related quantities at one pump intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainReport {
    /// Complex gain rate G (1/s).
    pub g: Complex64,
    /// Pump intensity at Re G = γ_s (erg·s⁻¹·cm⁻²).
    pub i_threshold: f64,
    /// ⟨a†a⟩/⟨a†a⟩_T at the requested distance.
    pub amplification: f64,
    /// Detector-averaged plasmon occupation.
    pub n_detector: f64,
    /// Idler photons per second on the detector.
    pub flux_idler: f64,
    /// Ξ = 2(Re G − γ_s)L_x/v_s.
    pub xi: f64,
    pub omega_s: f64,
    pub chi_path: ChiPath,
    /// Re G from the resonant χ⁽²⁾ product.
    pub re_g_resonant: f64,
    /// Re G from the full closed-form χ⁽²⁾ product.
    pub re_g_closed: f64,
    /// Whether the two products differ by more than [`PATH_DISAGREEMENT`].
    pub paths_disagree: bool,
}

/// Refraction angle from n₁ sin θ₁ = n₂ sin θ₂.
pub fn snell(theta1: f64, n1: f64, n2: f64) -> Result<f64> {
    let s = n1 * theta1.sin() / n2;
    if s.abs() > 1.0 {
        return Err(Error::TotalInternalReflection { theta1, n1, n2 });
    }
    Ok(s.asin())
}

/// s-polarized amplitude transmission 2n₁cosθ₁/(n₁cosθ₁ + n₂cosθ₂).
pub fn fresnel_t_s(theta1: f64, n1: f64, n2: f64) -> Result<f64> {
    let t2 = snell(theta1, n1, n2)?;
    let (a, b) = (n1 * theta1.cos(), n2 * t2.cos());
    Ok(2.0 * a / (a + b))
}

/// s-polarized amplitude reflection (n₁cosθ₁ − n₂cosθ₂)/(n₁cosθ₁ + n₂cosθ₂).
pub fn fresnel_r_s(theta1: f64, n1: f64, n2: f64) -> Result<f64> {
    let t2 = snell(theta1, n1, n2)?;
    let (a, b) = (n1 * theta1.cos(), n2 * t2.cos());
    Ok((a - b) / (a + b))
}

/// Pump in-plane wave number (ω_p n₁/c) sin θ_1p.
pub fn pump_wave_number(geom: &Geometry) -> f64 {
    geom.omega_p * geom.n1 / C * geom.theta_1p.sin()
}

fn idler_wave_number(geom: &Geometry, omega_s: f64, theta_1i: f64) -> f64 {
    (geom.omega_p - omega_s) * geom.n1 / C * theta_1i.sin()
}

/// Coupling Γ = i(2π√(ω_iω_p)/n₁²) T_i T_p E*_s0.
pub fn coupling_gamma_from(omega_i: f64, omega_p: f64, n1: f64, t_i: f64, t_p: f64, e_s0: Complex64) -> Complex64 {
    Complex64::i() * (2.0 * PI * (omega_i * omega_p).sqrt() / (n1 * n1)) * t_i * t_p * e_s0.conj()
}

/// Coupling of a solved operating point (E_s0 chosen real and positive).
pub fn coupling_gamma(point: &OperatingPoint) -> Complex64 {
    point.gamma_coupling
}

/// Phase matching with the default χ⁽²⁾ selection.
pub fn phase_match(geom: &Geometry, mat: &MaterialParams, theta_1i: f64) -> Result<OperatingPoint> {
    phase_match_with(geom, mat, theta_1i, ChiMethod::Auto)
}

/// Solves ω_s = ω_disp(q_p − q_i(ω_s)) for the plasmon and assembles the
/// operating point with its χ⁽²⁾ values.
pub fn phase_match_with(
    geom: &Geometry,
    mat: &MaterialParams,
    theta_1i: f64,
    method: ChiMethod,
) -> Result<OperatingPoint> {
    let geom = Geometry { theta_1i, ..*geom };
    geom.validate()?;
    mat.validate()?;
    let no_match = || Error::NoPhaseMatch { theta_deg: theta_1i.to_degrees() };
    let q_p = pump_wave_number(&geom);
    let mismatch = |ws: f64| -> Result<f64> {
        let q_s = q_p - idler_wave_number(&geom, ws, theta_1i);
        if q_s == 0.0 {
            return Ok(ws);
        }
        Ok(ws - dispersion_omega(q_s.abs(), &geom, mat)?)
    };
    let (lo, hi) = (geom.omega_p * 1e-6, 0.5 * geom.omega_p);
    let n = PHASE_MATCH_SCAN_POINTS;
    let grid: Vec<f64> = (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect();
    // Points where the dispersion relation has no bound root cannot bracket.
    let sampled = |ws: f64| match mismatch(ws) {
        Err(Error::NoMode { .. }) => Ok(f64::NAN),
        other => other,
    };
    let mut bracket = None;
    let mut prev = sampled(grid[0])?;
    for pair in grid.windows(2) {
        let next = sampled(pair[1])?;
        if prev.is_finite() && next.is_finite() && (prev < 0.0) != (next < 0.0) {
            bracket = Some((pair[0], pair[1]));
            break;
        }
        prev = next;
    }
    let (a, b) = bracket.ok_or_else(no_match)?;
    let omega_s = bisect(mismatch, a, b, PHASE_MATCH_REL_TOL)?;
    let omega_i = geom.omega_p - omega_s;
    let q_i = idler_wave_number(&geom, omega_s, theta_1i);
    let q_s = q_p - q_i;
    let mode = solve_mode(q_s.abs(), &geom, mat)?;
    if omega_s <= mat.v_f * q_s.abs() {
        return Err(Error::LandauRegion { omega: omega_s, vq: mat.v_f * q_s.abs() });
    }
    let t_p = fresnel_t_s(geom.theta_1p, geom.n1, geom.n2)?;
    let t_i = fresnel_t_s(theta_1i, geom.n1, geom.n2)?;
    let gamma_coupling =
        coupling_gamma_from(omega_i, geom.omega_p, geom.n1, t_i, t_p, Complex64::new(mode.e_s0_sq.sqrt(), 0.0));
    let mut point = OperatingPoint {
        geom,
        mat: *mat,
        mode,
        omega_s,
        omega_i,
        q_p,
        q_i,
        q_s,
        t_p,
        t_i,
        gamma_coupling,
        chi2_s: Complex64::new(0.0, 0.0),
        chi2_i: Complex64::new(0.0, 0.0),
        chi_path: ChiPath::Resonant,
    };
    let method = match method {
        ChiMethod::Auto if is_pump_resonant(geom.omega_p, mat) => ChiMethod::Resonant,
        ChiMethod::Auto => ChiMethod::Numeric(KGridSpec {
            eta: mat.gamma_pol.max(1e-4 * mat.v_f * mat.k_f()),
            ..KGridSpec::for_material(mat)
        }),
        m => m,
    };
    let (chi2_s, chi2_i, path) = match method {
        ChiMethod::Resonant | ChiMethod::Auto => {
            let c = resonant_chi(&point);
            (c, c.conj(), ChiPath::Resonant)
        }
        ChiMethod::Closed => {
            let c = closed_chi(&point)?;
            (c, c.conj(), ChiPath::Closed)
        }
        ChiMethod::Numeric(grid) => {
            let (s, i) = numeric_chi(&point, &grid)?;
            (s, i, ChiPath::Numeric)
        }
    };
    point.chi2_s = chi2_s;
    point.chi2_i = chi2_i;
    point.chi_path = path;
    Ok(point)
}

fn resonant_chi(p: &OperatingPoint) -> Complex64 {
    chi2_resonant(p.geom.omega_p, p.omega_i, p.omega_s, p.q_p, &p.mat)
}

fn closed_chi(p: &OperatingPoint) -> Result<Complex64> {
    let sigma = sigma2_xyy(p.geom.omega_p, -p.omega_i, p.q_p, -p.q_i, &p.mat, Broadening::uniform(p.mat.gamma_pol))?;
    chi2_from_sigma2(sigma, p.omega_s)
}

fn numeric_chi(p: &OperatingPoint, grid: &KGridSpec) -> Result<(Complex64, Complex64)> {
    let s = chi2_oracle::evaluate(
        &OracleQuery {
            eta1: Polarization::y(),
            eta2: Polarization::y(),
            omega1: p.geom.omega_p,
            omega2: -p.omega_i,
            q1: [p.q_p, 0.0],
            q2: [-p.q_i, 0.0],
        },
        &p.mat,
        grid,
    )?;
    let i = chi2_oracle::evaluate(
        &OracleQuery {
            eta1: Polarization::y(),
            eta2: Polarization::x(),
            omega1: p.geom.omega_p,
            omega2: -p.omega_s,
            q1: [p.q_p, 0.0],
            q2: [-p.q_s, 0.0],
        },
        &p.mat,
        grid,
    )?;
    Ok((chi2_from_sigma2(s[0], p.omega_s)?, chi2_from_sigma2(i[1], p.omega_i)?))
}

fn gain_prefactor(p: &OperatingPoint, i_p: f64) -> f64 {
    let n1 = p.geom.n1;
    p.gamma_coupling.norm_sqr() * i_p * n1 * n1
        / (C * C * HBAR * p.geom.omega_p * p.t_i * p.geom.theta_1i.cos())
}

/// Complex gain G = |Γ|² χ⁽ˢ²⁾ χ⁽ⁱ²⁾* I_p n₁²/(c²ħω_p T_i cos θ_1i).
pub fn gain_g(point: &OperatingPoint, i_p: f64) -> Complex64 {
    gain_prefactor(point, i_p) * point.chi2_s * point.chi2_i.conj()
}

/// Re G per unit pump intensity (s⁻¹ per erg·s⁻¹·cm⁻²).
pub fn gain_per_intensity(point: &OperatingPoint) -> f64 {
    gain_g(point, 1.0).re
}

/// Pump intensity at which Re G = γ_s.
pub fn threshold_intensity(point: &OperatingPoint, gamma_s: f64) -> Result<f64> {
    let k = gain_per_intensity(point);
    if !(k > 0.0) {
        return Err(Error::NoThreshold(k));
    }
    Ok(gamma_s / k)
}

/// (e^Ξ − 1)/Ξ with a four-term series near Ξ = 0.
pub fn detector_factor(xi: f64) -> f64 {
    if xi.abs() < SERIES_THRESHOLD {
        1.0 + xi / 2.0 + xi * xi / 6.0 + xi * xi * xi / 24.0
    } else {
        xi.exp_m1() / xi
    }
}

/// Plasmon occupation relative to thermal after propagating a distance `x`
/// from a thermal boundary under gain Re G and damping γ_s:
/// e^y + (2γ_s x/v_s)(e^y − 1)/y with y = 2(Re G − γ_s)x/v_s.
pub fn amplification_factor(x: f64, re_g: f64, gamma_s: f64, v_s: f64) -> f64 {
    let y = 2.0 * (re_g - gamma_s) * x / v_s;
    y.exp() + 2.0 * gamma_s * x / v_s * detector_factor(y)
}

/// Occupation averaged over the collection length and the exponent Ξ.
pub fn detector_average(l_x: f64, re_g: f64, gamma_s: f64, v_s: f64, n_thermal: f64) -> (f64, f64) {
    let xi = 2.0 * (re_g - gamma_s) * l_x / v_s;
    (n_thermal * detector_factor(xi), xi)
}

/// Bose factor 1/(e^{ħω/k_BT} − 1); zero at T = 0.
pub fn bose_n_t(omega: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * t)).exp_m1()
}

/// Thermal plasmon occupation per mode interval, N_T Δω/(2π L_y v_s).
pub fn thermal_occupation(omega_s: f64, t: f64, det: &DetectionGeometry, v_s: f64) -> f64 {
    bose_n_t(omega_s, t) * det.delta_omega / (2.0 * PI * det.l_y * v_s)
}

/// Power carried by the thermal plasmons through the aperture,
/// L_y v_s ħω_s ⟨a†a⟩_T = N_T ħω_s Δω/2π.
pub fn antenna_power(omega_s: f64, t: f64, det: &DetectionGeometry, v_s: f64) -> f64 {
    det.l_y * v_s * HBAR * omega_s * thermal_occupation(omega_s, t, det, v_s)
}

/// Idler photons per second reaching the detector.
pub fn idler_flux(point: &OperatingPoint, i_p: f64, det: &DetectionGeometry, gamma_s: f64) -> f64 {
    let v_s = point.mode.v_s;
    let re_g = gain_g(point, i_p).re;
    let (_, xi) = detector_average(det.l_x, re_g, gamma_s, v_s, 1.0);
    let n1 = point.geom.n1;
    let n_t = bose_n_t(point.omega_s, det.t);
    n1 * n1 * point.gamma_coupling.norm_sqr() * point.chi2_i.norm_sqr() * i_p * det.l_x * det.delta_omega
        / (2.0 * PI * C * C * v_s * HBAR * point.geom.omega_p * point.geom.theta_1i.cos())
        * (detector_factor(xi) * n_t + 1.0)
}

/// Order-of-magnitude idler flux at threshold, Δω γ_s L_x N_T/(2π v_s).
pub fn threshold_flux_estimate(omega_s: f64, v_s: f64, det: &DetectionGeometry, gamma_s: f64) -> f64 {
    det.delta_omega * gamma_s * det.l_x * bose_n_t(omega_s, det.t) / (2.0 * PI * v_s)
}

/// Coefficients of the reflected idler field ĉ_r ≈ R_i ĉ_i + κ â†_s ĉ_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectedIdler {
    /// Fresnel reflection of the incoming idler noise.
    pub r_i: f64,
    /// Parametric coefficient n₁Γχ⁽ⁱ²⁾_yyx/(c cos θ_1i).
    pub kappa: Complex64,
    /// Pump photon density ⟨c_p†c_p⟩ = I_p n₁/(cħω_p).
    pub pump_photons: f64,
    /// Lowest-order pair amplitude ratio |β/α|² = |κ|²⟨c_p†c_p⟩.
    pub pair_ratio: f64,
}

pub fn reflected_idler_coefficients(point: &OperatingPoint, i_p: f64) -> Result<ReflectedIdler> {
    let g = &point.geom;
    let r_i = fresnel_r_s(g.theta_1i, g.n1, g.n2)?;
    let kappa = g.n1 * point.gamma_coupling * point.chi2_i / (C * g.theta_1i.cos());
    let pump_photons = i_p * g.n1 / (C * HBAR * g.omega_p);
    Ok(ReflectedIdler { r_i, kappa, pump_photons, pair_ratio: kappa.norm_sqr() * pump_photons })
}

/// Gain, threshold, amplification at distance `x` and detector/flux numbers.
pub fn gain_report(
    point: &OperatingPoint,
    i_p: f64,
    gamma_s: f64,
    det: &DetectionGeometry,
    x: f64,
) -> Result<GainReport> {
    let g = gain_g(point, i_p);
    let v_s = point.mode.v_s;
    let n_t = thermal_occupation(point.omega_s, det.t, det, v_s);
    let (n_detector, xi) = detector_average(det.l_x, g.re, gamma_s, v_s, n_t);
    let pref = gain_prefactor(point, i_p);
    let res = resonant_chi(point);
    let re_g_resonant = pref * res.norm_sqr();
    let re_g_closed = pref * closed_chi(point)?.norm_sqr();
    let paths_disagree = (re_g_resonant - re_g_closed).abs() > PATH_DISAGREEMENT * re_g_resonant.abs().max(re_g_closed.abs());
    Ok(GainReport {
        g,
        i_threshold: threshold_intensity(point, gamma_s)?,
        amplification: amplification_factor(x, g.re, gamma_s, v_s),
        n_detector,
        flux_idler: idler_flux(point, i_p, det, gamma_s),
        xi,
        omega_s: point.omega_s,
        chi_path: point.chi_path,
        re_g_resonant,
        re_g_closed,
        paths_disagree,
    })
}

/// Half-width of the angular window around θ_1p where ω_s → 0 and the
/// slowly-varying-amplitude treatment breaks down.
pub const DEGENERATE_WINDOW: f64 = 10.0 * PI / 180.0;

/// One point of a gain-versus-idler-angle scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleScanRow {
    pub theta_1i: f64,
    /// Re G at the geometry's pump intensity (NaN when not phase matched).
    pub re_g: f64,
    /// Phase-matched plasmon frequency (NaN when not phase matched).
    pub omega_s: f64,
    /// Phase matched, outside the degenerate window and ω_s ≥ 10 γ_s,ref.
    pub valid: bool,
}

/// Evaluates Re G and ω_s at one idler angle; phase-matching failures give a
/// flagged row instead of an error.
pub fn angle_scan_row(
    geom: &Geometry,
    mat: &MaterialParams,
    theta_1i: f64,
    gamma_s_ref: f64,
    method: ChiMethod,
) -> AngleScanRow {
    match phase_match_with(geom, mat, theta_1i, method) {
        Ok(p) => AngleScanRow {
            theta_1i,
            re_g: gain_g(&p, geom.i_p).re,
            omega_s: p.omega_s,
            valid: (theta_1i - geom.theta_1p).abs() >= DEGENERATE_WINDOW && p.omega_s >= 10.0 * gamma_s_ref,
        },
        Err(_) => AngleScanRow { theta_1i, re_g: f64::NAN, omega_s: f64::NAN, valid: false },
    }
}
