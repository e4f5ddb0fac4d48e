//! Mean-field model of two parametrically coupled oscillators — the plasmon
//! amplitude E_s and the conjugate idler amplitude E_i* in a cylinder of
//! length l — and its instability threshold.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::{C, HBAR};
use crate::error::{Error, Result};
use crate::linear_response::{dchi_domega, PlasmonMode, DCHI_REL_STEP};
use crate::params::MaterialParams;

/// Parameters of the coupled-oscillator system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub zeta_s: Complex64,
    pub zeta_i: Complex64,
    pub gamma_s: f64,
    /// Idler escape rate c/l.
    pub gamma_i: f64,
    /// Complex pump amplitude (statvolt/cm).
    pub e_p: Complex64,
    /// Idler cylinder length (cm).
    pub l: f64,
    pub theta_i: f64,
}

impl OscillatorParams {
    /// Builds the parameter set with γ_i = c/l.
    pub fn new(zeta_s: Complex64, zeta_i: Complex64, gamma_s: f64, e_p: Complex64, l: f64, theta_i: f64) -> Result<Self> {
        if !(gamma_s > 0.0) || !(l > 0.0) {
            return Err(Error::InvalidInput("γ_s and l must be positive".into()));
        }
        Ok(OscillatorParams { zeta_s, zeta_i, gamma_s, gamma_i: C / l, e_p, l, theta_i })
    }

    /// System matrix acting on (E_s, E_i*).
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let i = Complex64::i();
        [
            [Complex64::new(-self.gamma_s, 0.0), i * self.zeta_s * self.e_p],
            [-i * self.zeta_i.conj() * self.e_p.conj(), Complex64::new(-self.gamma_i, 0.0)],
        ]
    }

    /// Eigenvalues λ± of [`Self::matrix`].
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let m = self.matrix();
        let mu = (m[0][0] + m[1][1]) / 2.0;
        let delta = (((m[0][0] - m[1][1]) / 2.0).powi(2) + m[0][1] * m[1][0]).sqrt();
        [mu + delta, mu - delta]
    }
}

/// ζ_s = χ⁽ˢ²⁾/(2 Re ∂χ_s/∂ω) and ζ_i = π ω_i χ⁽ⁱ²⁾* /(l cos θ_i).
pub fn zeta_coefficients(
    mode: &PlasmonMode,
    mat: &MaterialParams,
    chi2_s: Complex64,
    chi2_i: Complex64,
    omega_i: f64,
    l: f64,
    theta_i: f64,
) -> Result<(Complex64, Complex64)> {
    let d = dchi_domega(mode.omega_s, mode.q_s, mat, DCHI_REL_STEP)?;
    if !(d > 0.0) {
        return Err(Error::AnomalousDispersion(d));
    }
    let zeta_s = chi2_s / (2.0 * d);
    let zeta_i = PI * omega_i * chi2_i.conj() / (l * theta_i.cos());
    Ok((zeta_s, zeta_i))
}

/// ζ_s expressed through the mode normalization, χ⁽ˢ²⁾|E_s0|²/(2ħ).
pub fn zeta_s_from_normalization(chi2_s: Complex64, e_s0_sq: f64) -> Complex64 {
    chi2_s * e_s0_sq / (2.0 * HBAR)
}

/// Threshold |E_p|² = γ_sγ_i / Re(ζ_sζ_i*).
pub fn threshold_0d(zeta_s: Complex64, zeta_i: Complex64, gamma_s: f64, gamma_i: f64) -> Result<f64> {
    let k = (zeta_s * zeta_i.conj()).re;
    if !(k > 0.0) {
        return Err(Error::NoThreshold(k));
    }
    Ok(gamma_s * gamma_i / k)
}

/// Cycle-averaged intensity c n |E|²/(8π) of a field with peak amplitude |E|.
pub fn intensity_from_amplitude_sq(e_sq: f64, n: f64) -> f64 {
    C * n * e_sq / (8.0 * PI)
}

/// |E|² for a given intensity, inverse of [`intensity_from_amplitude_sq`].
pub fn amplitude_sq_from_intensity(i: f64, n: f64) -> f64 {
    8.0 * PI * i / (C * n)
}

/// Sampled solution of the coupled equations.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub e_s: Vec<Complex64>,
    /// Conjugate idler amplitude E_i*.
    pub e_i_conj: Vec<Complex64>,
    pub eigenvalues: [Complex64; 2],
}

fn apply(m: &[[Complex64; 2]; 2], v: [Complex64; 2]) -> [Complex64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Fixed-step fourth-order Runge–Kutta integration over `[0, t_end]`.
pub fn integrate(params: &OscillatorParams, e_s0: Complex64, e_i0_conj: Complex64, t_end: f64, dt: f64) -> Result<Trajectory> {
    let rate = params.gamma_s.max(params.gamma_i);
    if !(dt > 0.0) || dt * rate >= 0.1 {
        return Err(Error::StepSize(format!("dt·max(γ_s, γ_i) = {:e} must be below 0.1", dt * rate)));
    }
    if !(t_end >= 0.0) {
        return Err(Error::InvalidInput("t_end must be non-negative".into()));
    }
    let m = params.matrix();
    let n = (t_end / dt).round() as usize;
    let mut out = Trajectory {
        t: Vec::with_capacity(n + 1),
        e_s: Vec::with_capacity(n + 1),
        e_i_conj: Vec::with_capacity(n + 1),
        eigenvalues: params.eigenvalues(),
    };
    let mut y = [e_s0, e_i0_conj];
    let step = |y: [Complex64; 2], h: f64| {
        let k1 = apply(&m, y);
        let k2 = apply(&m, [y[0] + k1[0] * (h / 2.0), y[1] + k1[1] * (h / 2.0)]);
        let k3 = apply(&m, [y[0] + k2[0] * (h / 2.0), y[1] + k2[1] * (h / 2.0)]);
        let k4 = apply(&m, [y[0] + k3[0] * h, y[1] + k3[1] * h]);
        [
            y[0] + (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) * (h / 6.0),
            y[1] + (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) * (h / 6.0),
        ]
    };
    for k in 0..=n {
        out.t.push(k as f64 * dt);
        out.e_s.push(y[0]);
        out.e_i_conj.push(y[1]);
        if k < n {
            y = step(y, dt);
        }
    }
    Ok(out)
}

/// Exact solution exp(Mt)·y₀ via the closed form of a 2×2 matrix exponential,
/// e^{μt}[cosh(δt) I + sinh(δt)/δ (M − μI)].
pub fn exact_solution(params: &OscillatorParams, e_s0: Complex64, e_i0_conj: Complex64, t: f64) -> [Complex64; 2] {
    let m = params.matrix();
    let mu = (m[0][0] + m[1][1]) / 2.0;
    let delta = (((m[0][0] - m[1][1]) / 2.0).powi(2) + m[0][1] * m[1][0]).sqrt();
    let ch = (delta * t).cosh();
    let sh_over = if delta.norm() * t < 1e-8 { Complex64::new(t, 0.0) } else { (delta * t).sinh() / delta };
    let e = (mu * t).exp();
    let a = [[m[0][0] - mu, m[0][1]], [m[1][0], m[1][1] - mu]];
    let y = [e_s0, e_i0_conj];
    let ay = apply(&a, y);
    [e * (ch * y[0] + sh_over * ay[0]), e * (ch * y[1] + sh_over * ay[1])]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(ep: f64) -> OscillatorParams {
        OscillatorParams::new(Complex64::new(2.0, 0.0), Complex64::new(3.0e-1, 0.0), 1e11, Complex64::new(ep, 0.0), C / 2e11, 0.3)
            .unwrap()
    }

    #[test]
    fn decoupled_decay() {
        let p = params(0.0);
        let ev = p.eigenvalues();
        let mut re: Vec<f64> = ev.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(re, vec![-2e11, -1e11]);
        let tr = integrate(&p, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 1e-10, 1e-14).unwrap();
        let last = tr.e_s.last().unwrap();
        assert!((last.re - (-1e11f64 * 1e-10).exp()).abs() < 1e-10);
    }

    #[test]
    fn threshold_criterion_and_growth() {
        let p0 = params(0.0);
        let th = threshold_0d(p0.zeta_s, p0.zeta_i, p0.gamma_s, p0.gamma_i).unwrap();
        let above = params((2.0 * th).sqrt());
        assert!(above.eigenvalues().iter().any(|z| z.re > 0.0));
        let below = params((0.5 * th).sqrt());
        assert!(below.eigenvalues().iter().all(|z| z.re < 0.0));
        let th2 = threshold_0d(p0.zeta_s, p0.zeta_i, 2.0 * p0.gamma_s, p0.gamma_i).unwrap();
        assert!((th2 / th - 2.0).abs() < 1e-14);
        assert!(threshold_0d(p0.zeta_s, -p0.zeta_i, 1.0, 1.0).is_err());
    }

    #[test]
    fn rk4_matches_matrix_exponential() {
        let p0 = params(0.0);
        let th = threshold_0d(p0.zeta_s, p0.zeta_i, p0.gamma_s, p0.gamma_i).unwrap();
        let p = OscillatorParams { e_p: Complex64::from_polar((1.5 * th).sqrt(), 0.4), ..p0 };
        let t_end = 10.0 / p.gamma_s;
        let dt = 1e-3 / p.gamma_i;
        let (a, b) = (Complex64::new(1.0, 0.2), Complex64::new(-0.3, 0.5));
        let tr = integrate(&p, a, b, t_end, dt).unwrap();
        for k in (0..tr.t.len()).step_by(997) {
            let ex = exact_solution(&p, a, b, tr.t[k]);
            for (num, an) in [(tr.e_s[k], ex[0]), (tr.e_i_conj[k], ex[1])] {
                assert!((num - an).norm() <= 1e-8 * an.norm(), "{num} vs {an}");
            }
        }
        assert!(integrate(&p, a, b, t_end, 1.0 / p.gamma_i).is_err());
    }

    #[test]
    fn zeta_scalings() {
        use crate::linear_response::solve_mode;
        use crate::params::{default_geometry, graphene_preset};
        let m = graphene_preset();
        let mode = solve_mode(5e2, &default_geometry(), &m).unwrap();
        let chi = Complex64::new(1e-3, 2e-4);
        let (zs, zi) = zeta_coefficients(&mode, &m, chi, chi, 1e14, 0.1, 0.3).unwrap();
        let (zs2, zi2) = zeta_coefficients(&mode, &m, 2.0 * chi, chi, 1e14, 0.2, 0.3).unwrap();
        assert!((zs2 / zs - 2.0).norm() < 1e-14);
        assert!((zi2 / zi - 0.5).norm() < 1e-14);
        let alt = zeta_s_from_normalization(chi, mode.e_s0_sq);
        assert!((alt / zs - 1.0).norm() < 1e-12);
    }
}
