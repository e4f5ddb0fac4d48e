//! Intraband nonlocal susceptibility of a degenerate Dirac gas, the TM
//! surface-plasmon dispersion relation and the derived mode quantities.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::constants::{C, E, HBAR};
use crate::error::{Error, Result};
use crate::params::{Geometry, MaterialParams};

/// Relative finite-difference step for ∂χ_s/∂ω.
pub const DCHI_REL_STEP: f64 = 1e-6;
/// Relative finite-difference step in q for the group velocity.
pub const GROUP_VELOCITY_REL_STEP: f64 = 1e-5;
/// Number of log-spaced scan points used to bracket a dispersion root.
pub const ROOT_SCAN_POINTS: usize = 200;

/// One surface-plasmon solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmonMode {
    /// Real mode frequency (rad/s).
    pub omega_s: f64,
    /// In-plane wave number (1/cm).
    pub q_s: f64,
    /// Group velocity dω/dq (cm/s).
    pub v_s: f64,
    /// Amplitude decay rate (1/s).
    pub gamma_s: f64,
    /// Squared normalization amplitude |E_s0|².
    pub e_s0_sq: f64,
    /// Transverse decay constant above the layer (medium 1).
    pub p1: Complex64,
    /// Transverse decay constant below the layer (medium 2).
    pub p2: Complex64,
}

/// Nonlocal intraband 2D susceptibility χ_s(ω, q) with a single broadening
/// rate `gamma`, in cm.
///
/// With a = ω + iγ and b = v_F q the response is
/// (2e²E_F/πħ²ω)(a/b²)[1 − (a/(a+b))√((a+b)/(a−b))].  The bracket cancels
/// catastrophically for b ≪ |a|, so it is rewritten through
/// s = (a+b)/(a√((a+b)/(a−b))), which satisfies s² = 1 − b²/a² on the same
/// branch, giving χ = −(2e²E_F/πħ²ω)/(a s (1+s)).
pub fn chi_s(mat: &MaterialParams, omega: Complex64, q: f64, gamma: f64) -> Result<Complex64> {
    if !(q > 0.0) {
        return Err(Error::InvalidInput(format!("q must be positive, got {q}")));
    }
    if omega.norm() == 0.0 {
        return Err(Error::InvalidInput("frequency must be nonzero".into()));
    }
    let a = omega + Complex64::new(0.0, gamma);
    let b = Complex64::new(mat.v_f * q, 0.0);
    if (a - b).norm() <= 1e-12 * a.norm() {
        return Err(Error::Singular(format!(
            "v_F q = {:e} coincides with |ω + iγ| = {:e}",
            b.re,
            a.norm()
        )));
    }
    let pref = 2.0 * E * E * mat.e_f / (PI * HBAR * HBAR) / omega;
    let root = ((a + b) / (a - b)).sqrt();
    let s = (a + b) / (a * root);
    let chi = if (s + 1.0).norm() > 0.5 {
        -pref / (a * s * (s + 1.0))
    } else {
        pref * (a / (b * b)) * (1.0 - a / (a + b) * root)
    };
    Ok(chi * mat.weight())
}

/// Transverse decay constant √(q² − εω²/c²), principal branch with Re p ≥ 0.
pub fn decay_constant(q: f64, eps: f64, omega: Complex64) -> Result<Complex64> {
    let p = (Complex64::new(q * q, 0.0) - eps * omega * omega / (C * C)).sqrt();
    if p.re >= 0.0 {
        Ok(p)
    } else if (-p).re >= 0.0 {
        Ok(-p)
    } else {
        Err(Error::Singular(format!("no evanescent branch for p = {p}")))
    }
}

/// Left-hand side of the TM dispersion relation 4πχ_s + ε₁/p₁ + ε₂/p₂,
/// with the collision rate `mat.gamma_intra` inside χ_s.
pub fn dispersion_residual(
    omega: Complex64,
    q: f64,
    geom: &Geometry,
    mat: &MaterialParams,
) -> Result<Complex64> {
    residual_with(omega, q, geom, mat, mat.gamma_intra)
}

fn residual_with(
    omega: Complex64,
    q: f64,
    geom: &Geometry,
    mat: &MaterialParams,
    gamma: f64,
) -> Result<Complex64> {
    let p1 = decay_constant(q, geom.eps1(), omega)?;
    let p2 = decay_constant(q, geom.eps2(), omega)?;
    Ok(4.0 * PI * chi_s(mat, omega, q, gamma)? + geom.eps1() / p1 + geom.eps2() / p2)
}

fn lossless_residual(omega: f64, q: f64, geom: &Geometry, mat: &MaterialParams) -> Result<f64> {
    Ok(residual_with(Complex64::new(omega, 0.0), q, geom, mat, 0.0)?.re)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// Bisects `f` on `[lo, hi]` (with a sign change) to machine precision.
pub(crate) fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs() || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Locates sign changes of `f` on a log grid; returns the first bracket
/// and the number of brackets found.
fn scan_brackets<F>(mut f: F, lo: f64, hi: f64, n: usize) -> Result<Option<((f64, f64), usize)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let grid = log_grid(lo, hi, n);
    let vals = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let mut first = None;
    let mut count = 0;
    for i in 0..n - 1 {
        if vals[i] == 0.0 || (vals[i] < 0.0) != (vals[i + 1] < 0.0) {
            count += 1;
            if first.is_none() {
                first = Some((grid[i], grid[i + 1]));
            }
        }
    }
    Ok(first.map(|b| (b, count)))
}

/// Real (lossless) dispersion root ω(q) — the lowest-frequency TM mode
/// between the Landau edge and the slower light line.
pub fn dispersion_omega(q: f64, geom: &Geometry, mat: &MaterialParams) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::InvalidInput(format!("q must be positive, got {q}")));
    }
    let vq = mat.v_f * q;
    let lo = vq * (1.0 + 1e-6);
    let hi = 0.99 * (C * q / geom.n1).min(C * q / geom.n2);
    if lo >= hi {
        return Err(Error::NoMode { q });
    }
    let f = |w: f64| lossless_residual(w, q, geom, mat);
    let Some(((a, b), count)) = scan_brackets(f, lo, hi, ROOT_SCAN_POINTS)? else {
        return Err(Error::NoMode { q });
    };
    if count > 1 {
        warn!("{count} dispersion roots bracketed at q = {q:e}; using the lowest");
    }
    let omega = bisect(f, a, b, 1e-15)?;
    if omega <= vq {
        return Err(Error::LandauRegion { omega, vq });
    }
    Ok(omega)
}

/// Re ∂χ_s/∂ω at zero broadening by a centered difference with relative step `rel_step`.
pub fn dchi_domega(omega: f64, q: f64, mat: &MaterialParams, rel_step: f64) -> Result<f64> {
    let h = omega * rel_step;
    let up = chi_s(mat, Complex64::new(omega + h, 0.0), q, 0.0)?;
    let dn = chi_s(mat, Complex64::new(omega - h, 0.0), q, 0.0)?;
    Ok((up - dn).re / (2.0 * h))
}

/// Mode normalization |E_s0|² = ħ / Re ∂χ_s/∂ω.
pub fn normalization_at(omega: f64, q: f64, mat: &MaterialParams, rel_step: f64) -> Result<f64> {
    let d = dchi_domega(omega, q, mat, rel_step)?;
    if !(d > 0.0) {
        return Err(Error::AnomalousDispersion(d));
    }
    Ok(HBAR / d)
}

/// |E_s0|² for a solved mode.
pub fn normalization_e_s0_sq(mode: &PlasmonMode, mat: &MaterialParams) -> Result<f64> {
    normalization_at(mode.omega_s, mode.q_s, mat, DCHI_REL_STEP)
}

/// γ_s = Im χ_s(ω_s, q_s)·|E_s0|²/ħ with the collision rate `mat.gamma_intra`.
pub fn damping_at(omega: f64, q: f64, e_s0_sq: f64, mat: &MaterialParams) -> Result<f64> {
    let chi = chi_s(mat, Complex64::new(omega, 0.0), q, mat.gamma_intra)?;
    Ok(chi.im * e_s0_sq / HBAR)
}

/// Damping rate of a solved mode.
pub fn damping_gamma_s(mode: &PlasmonMode, mat: &MaterialParams) -> Result<f64> {
    damping_at(mode.omega_s, mode.q_s, mode.e_s0_sq, mat)
}

/// Solves for the plasmon at real wave number `q`.
pub fn solve_mode(q: f64, geom: &Geometry, mat: &MaterialParams) -> Result<PlasmonMode> {
    let omega_s = dispersion_omega(q, geom, mat)?;
    let h = GROUP_VELOCITY_REL_STEP;
    let up = dispersion_omega(q * (1.0 + h), geom, mat)?;
    let dn = dispersion_omega(q * (1.0 - h), geom, mat)?;
    let v_s = (up - dn) / (2.0 * q * h);
    let e_s0_sq = normalization_at(omega_s, q, mat, DCHI_REL_STEP)?;
    let gamma_s = damping_at(omega_s, q, e_s0_sq, mat)?;
    let w = Complex64::new(omega_s, 0.0);
    Ok(PlasmonMode {
        omega_s,
        q_s: q,
        v_s,
        gamma_s,
        e_s0_sq,
        p1: decay_constant(q, geom.eps1(), w)?,
        p2: decay_constant(q, geom.eps2(), w)?,
    })
}

/// Solves for the plasmon with real frequency `omega` (inverse dispersion).
pub fn solve_mode_at_omega(omega: f64, geom: &Geometry, mat: &MaterialParams) -> Result<PlasmonMode> {
    if !(omega > 0.0) {
        return Err(Error::InvalidInput(format!("ω must be positive, got {omega}")));
    }
    let n_max = geom.n1.max(geom.n2);
    let lo = omega * n_max / (0.99 * C);
    let hi = omega / (mat.v_f * (1.0 + 1e-6));
    if lo >= hi {
        return Err(Error::NoMode { q: lo });
    }
    let f = |q: f64| lossless_residual(omega, q, geom, mat);
    let Some(((a, b), _)) = scan_brackets(f, lo, hi, ROOT_SCAN_POINTS)? else {
        return Err(Error::NoMode { q: lo });
    };
    let q = bisect(f, a, b, 1e-15)?;
    solve_mode(q, geom, mat)
}

/// Complex root of the dispersion relation at real `q` including the
/// collision rate, found by Newton iteration from the lossless root.
pub fn complex_mode_frequency(q: f64, geom: &Geometry, mat: &MaterialParams) -> Result<Complex64> {
    let mut w = Complex64::new(dispersion_omega(q, geom, mat)?, 0.0);
    for _ in 0..60 {
        let f = dispersion_residual(w, q, geom, mat)?;
        let h = w.norm() * 1e-7;
        let df = (dispersion_residual(w + h, q, geom, mat)? - dispersion_residual(w - h, q, geom, mat)?)
            / (2.0 * h);
        let step = f / df;
        w -= step;
        if step.norm() < 1e-14 * w.norm() {
            break;
        }
    }
    Ok(w)
}

/// Electric field (E_x, E_y, E_z) of the mode at height `z`; medium 1 is z > 0.
pub fn field_profile(z: f64, mode: &PlasmonMode) -> [Complex64; 3] {
    let e0 = mode.e_s0_sq.sqrt();
    let i = Complex64::i();
    if z >= 0.0 {
        let f = e0 * (-mode.p1 * z).exp();
        [f, Complex64::new(0.0, 0.0), f * i * mode.q_s / mode.p1]
    } else {
        let f = e0 * (mode.p2 * z).exp();
        [f, Complex64::new(0.0, 0.0), -f * i * mode.q_s / mode.p2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{default_geometry, graphene_preset};

    fn vacuum() -> Geometry {
        Geometry { n1: 1.0, n2: 1.0, ..default_geometry() }
    }

    #[test]
    fn drude_limit() {
        let m = graphene_preset();
        let q = 1e4;
        let w = m.v_f * q / 1e-4;
        let chi = chi_s(&m, Complex64::new(w, 0.0), q, 0.0).unwrap();
        let drude = -E * E * m.e_f / (PI * HBAR * HBAR * w * w);
        assert!((chi.re / drude - 1.0).abs() < 1e-6);
        assert_eq!(chi.im, 0.0);
    }

    #[test]
    fn matches_printed_form_away_from_small_u() {
        let m = graphene_preset();
        let q = 2e5;
        for &(w, g) in &[(3.0e13, 0.0), (2.5e13, 1e12), (5e13, 3e12)] {
            let a = Complex64::new(w, g);
            let b = Complex64::new(m.v_f * q, 0.0);
            let pref = 2.0 * E * E * m.e_f / (PI * HBAR * HBAR * w);
            let direct = pref * a / (b * b) * (1.0 - a / (a + b) * ((a + b) / (a - b)).sqrt());
            let got = chi_s(&m, Complex64::new(w, 0.0), q, g).unwrap();
            assert!((got - direct).norm() < 1e-9 * direct.norm(), "{got} vs {direct}");
        }
    }

    #[test]
    fn layers_scale_linearly_and_singular_rejected() {
        let mut m = graphene_preset();
        let w = Complex64::new(1e13, 0.0);
        let one = chi_s(&m, w, 1e4, 1e11).unwrap();
        m.n_layers = 2;
        let two = chi_s(&m, w, 1e4, 1e11).unwrap();
        assert!((two / one - 2.0).norm() < 1e-14);
        let q = 1e13 / m.v_f;
        assert!(matches!(chi_s(&m, w, q, 0.0), Err(Error::Singular(_))));
    }

    #[test]
    fn quasi_electrostatic_residual() {
        let m = graphene_preset();
        let g = default_geometry();
        let w = 5e12;
        let q = 200.0 * w / C;
        let r = dispersion_residual(Complex64::new(w, 0.0), q, &g, &m).unwrap();
        let approx = 4.0 * PI * chi_s(&m, Complex64::new(w, 0.0), q, 0.0).unwrap()
            + (g.eps1() + g.eps2()) / q;
        let scale = g.eps1() / q;
        assert!((r - approx).norm() < 0.01 * scale);
    }

    #[test]
    fn solved_mode_is_a_root() {
        let m = graphene_preset();
        let g = default_geometry();
        let kf = m.k_f();
        for &f in &[1e-4, 1e-3, 1e-2, 1e-1] {
            let mode = solve_mode(f * kf, &g, &m).unwrap();
            let w = Complex64::new(mode.omega_s, 0.0);
            let r = residual_with(w, mode.q_s, &g, &m, 0.0).unwrap();
            let scale = (g.eps1() / mode.p1).norm();
            assert!(r.norm() < 1e-9 * scale, "q/kF={f}: {r}");
            assert!(mode.omega_s > m.v_f * mode.q_s);
            assert!(mode.p1.re > 0.0 && mode.p2.re > 0.0);
            assert!(mode.v_s > 0.0 && mode.v_s < C);
            assert!(mode.e_s0_sq > 0.0);
            assert_eq!(mode.gamma_s, 0.0);
        }
    }

    #[test]
    fn nonretarded_window_matches_sqrt_law() {
        let m = graphene_preset();
        let q = 1e-2 * m.k_f();
        let w = dispersion_omega(q, &vacuum(), &m).unwrap();
        let w0 = (2.0 * E * E * m.e_f * q / (HBAR * HBAR)).sqrt();
        assert!((w / w0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn inverse_solve() {
        let m = graphene_preset();
        let g = default_geometry();
        let target = 2.0 * PI * 1e12;
        let mode = solve_mode_at_omega(target, &g, &m).unwrap();
        assert!((mode.omega_s / target - 1.0).abs() < 1e-10);
    }

    #[test]
    fn field_profile_properties() {
        let m = graphene_preset();
        let mode = solve_mode(1e-3 * m.k_f(), &default_geometry(), &m).unwrap();
        let up = field_profile(0.0, &mode);
        let dn = field_profile(-0.0 - 1e-300, &mode);
        assert!((up[0] - dn[0]).norm() < 1e-12 * up[0].norm());
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let z = k as f64 * 0.3 / mode.q_s;
            for side in [z, -z] {
                let e = field_profile(side, &mode);
                assert_eq!(e[1], Complex64::new(0.0, 0.0));
            }
            let n = field_profile(z, &mode).iter().map(|c| c.norm_sqr()).sum::<f64>();
            assert!(n < last);
            last = n;
        }
    }
}
