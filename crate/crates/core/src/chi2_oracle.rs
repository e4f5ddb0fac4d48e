//! Brute-force k-space evaluation of the second-order current of a doped
//! Dirac cone for arbitrary in-plane polarizations and wave vectors.
//!
//! The integrand sums all band-index combinations (s_m, s_n, s_l) of the
//! second-order density matrix together with the {1 ↔ 2} exchange term.
//! Only the change of the occupations relative to the undoped cone is
//! integrated — the undoped (filled valence band) response of a
//! particle-hole symmetric cone vanishes, while integrating it against a
//! hard momentum cutoff leaves a spurious, routing-dependent surface term.
//! Each occupation factor f(k_j) is evaluated after shifting the loop
//! momentum so that k_j itself is the integration variable; every Fermi step
//! then sits at |k| = k_F and the radial grid needs no angle dependence.
//!
//! Units inside the integrand: v_F = k_F = ħ = 1.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::{E, HBAR};
use crate::error::{Error, Result};
use crate::params::MaterialParams;

/// Gauss–Legendre order used on every radial sub-panel.
const GL_ORDER: usize = 16;
/// Refinement-band offsets around each resonance ring, in units of the band width.
const RING_OFFSETS: [f64; 8] = [0.0, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0];

/// Quadrature grid for [`sigma2_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGridSpec {
    /// Radial nodes per breakpoint panel (split into 16-point Gauss–Legendre sub-panels).
    pub n_radial: usize,
    /// Midpoint-rule nodes in the polar angle.
    pub n_angular: usize,
    /// Momentum cutoff in units of k_F.  The subtracted integrand has support
    /// |k| ≤ k_F only, so the cutoff never truncates anything; it is kept for
    /// validation and reporting.
    pub k_max: f64,
    /// Width multiplier of the refinement bands around the resonance rings.
    pub refine_width: f64,
    /// Numerical broadening added to all frequency denominators (1/s).
    pub eta: f64,
}

impl KGridSpec {
    /// Default grid with broadening 10⁻³ v_F k_F.
    pub fn for_material(mat: &MaterialParams) -> Self {
        KGridSpec {
            n_radial: 64,
            n_angular: 256,
            k_max: 4.0,
            refine_width: 1.0,
            eta: 1e-3 * mat.v_f * mat.k_f(),
        }
    }

    /// Default grid with the radial density raised for wave vectors large
    /// compared with the broadening.  Each resonance ring then splits into
    /// pole pairs a distance ~q apart whose contributions cancel to high
    /// order, and the cancellation is only resolved once the radial spacing
    /// is well below η within a band of width q.
    pub fn for_query(mat: &MaterialParams, q: &OracleQuery) -> Self {
        let base = Self::for_material(mat);
        let kf = mat.k_f();
        let q_max = [q.q1, q.q2, [q.q1[0] + q.q2[0], q.q1[1] + q.q2[1]]]
            .iter()
            .map(|v| v[0].hypot(v[1]) / kf)
            .fold(0.0, f64::max);
        let ratio = q_max / (5.0 * base.eta / (mat.v_f * kf));
        let doublings = if ratio > 1.0 { ratio.log2().ceil() as u32 } else { 0 };
        KGridSpec { n_radial: base.n_radial << doublings.min(4), ..base }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_radial < 64 || self.n_angular < 64 {
            return Err(Error::InvalidInput("grid sizes must be at least 64".into()));
        }
        if !(self.k_max > 1.0) {
            return Err(Error::InvalidInput("k_max must exceed 1 (units of k_F)".into()));
        }
        if !(self.eta > 0.0) || !(self.refine_width > 0.0) {
            return Err(Error::InvalidInput("eta and refine_width must be positive".into()));
        }
        Ok(())
    }

    /// Grid with both node counts doubled.
    pub fn doubled(&self) -> Self {
        KGridSpec { n_radial: 2 * self.n_radial, n_angular: 2 * self.n_angular, ..*self }
    }

    pub fn with_eta(&self, eta: f64) -> Self {
        KGridSpec { eta, ..*self }
    }
}

/// In-plane unit polarization vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polarization {
    pub eta_x: Complex64,
    pub eta_y: Complex64,
}

impl Polarization {
    pub fn new(eta_x: Complex64, eta_y: Complex64) -> Result<Self> {
        let n = eta_x.norm_sqr() + eta_y.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("polarization not normalized: |η|² = {n}")));
        }
        Ok(Polarization { eta_x, eta_y })
    }

    pub fn x() -> Self {
        Polarization { eta_x: Complex64::new(1.0, 0.0), eta_y: Complex64::new(0.0, 0.0) }
    }

    pub fn y() -> Self {
        Polarization { eta_x: Complex64::new(0.0, 0.0), eta_y: Complex64::new(1.0, 0.0) }
    }
}

/// Inputs of one oracle evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleQuery {
    pub eta1: Polarization,
    pub eta2: Polarization,
    pub omega1: f64,
    pub omega2: f64,
    /// In-plane wave vector of field 1 (1/cm).
    pub q1: [f64; 2],
    /// In-plane wave vector of field 2 (1/cm).
    pub q2: [f64; 2],
}

/// One input leg in dimensionless units.
#[derive(Clone, Copy)]
struct Leg {
    minus: Complex64,
    plus: Complex64,
    w: f64,
    q: [f64; 2],
}

impl Leg {
    fn new(p: &Polarization, w: f64, q: [f64; 2]) -> Self {
        let i = Complex64::i();
        Leg { minus: p.eta_x - i * p.eta_y, plus: p.eta_x + i * p.eta_y, w, q }
    }
}

#[inline]
fn polar(x: f64, y: f64) -> (f64, Complex64) {
    let r = x.hypot(y);
    if r == 0.0 {
        (0.0, Complex64::new(1.0, 0.0))
    } else {
        (r, Complex64::new(x / r, y / r))
    }
}

/// Current integrand (J_x, J_y) at loop momentum (kx, ky) for one ordering
/// of the two input legs; `s_f` selects which band carries the doping.
#[inline]
fn ordered_integrand(kx: f64, ky: f64, a: &Leg, b: &Leg, eta: f64, s_f: f64) -> [Complex64; 2] {
    let i = Complex64::i();
    let w = Complex64::new(a.w + b.w, eta);
    let w1 = Complex64::new(a.w, eta);
    let w2 = Complex64::new(b.w, eta);
    let mut jx = Complex64::new(0.0, 0.0);
    let mut jy = Complex64::new(0.0, 0.0);
    // anchors: 0 → k_l = k, 1 → k_n = k, 2 → k_m = k
    for anchor in 0..3 {
        let (lx, ly) = match anchor {
            0 => (kx, ky),
            1 => (kx + b.q[0], ky + b.q[1]),
            _ => (kx - a.q[0], ky - a.q[1]),
        };
        let (am, pm) = polar(lx + a.q[0], ly + a.q[1]);
        let (al, pl) = polar(lx, ly);
        let (an, pn) = polar(lx - b.q[0], ly - b.q[1]);
        let (pm_c, pl_c, pn_c) = (pm.conj(), pl.conj(), pn.conj());
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                let (sm, sn, sl) = match anchor {
                    0 => (s1, s2, s_f),
                    1 => (s1, s_f, s2),
                    _ => (s_f, s1, s2),
                };
                let d0 = w - (sm * am - sn * an);
                let d2 = w2 - (sl * al - sn * an);
                let d1 = w1 - (sm * am - sl * al);
                let occ = match anchor {
                    0 => -(d2.inv() + d1.inv()),
                    1 => d2.inv(),
                    _ => d1.inv(),
                } * s_f;
                let m1 = a.minus * (sm * pl) + a.plus * (sl * pm_c);
                let m2 = b.minus * (sl * pn) + b.plus * (sn * pl_c);
                let cur_a = sm * pn_c;
                let cur_b = sn * pm;
                let common = occ / d0 * m1 * m2;
                jx += common * (cur_a + cur_b);
                jy += common * i * (cur_a - cur_b);
            }
        }
    }
    [jx, jy]
}

/// Radial sub-panels on [0, 1] (units of k_F).
fn radial_panels(legs: &[Leg; 2], eta: f64, grid: &KGridSpec) -> Vec<(f64, f64)> {
    let q_max = legs
        .iter()
        .map(|l| l.q[0].hypot(l.q[1]))
        .fold(0.0, f64::max);
    let width = grid.refine_width * eta.max(q_max);
    let mut bps = vec![0.0, 1.0];
    for w in [legs[0].w, legs[1].w, legs[0].w + legs[1].w] {
        let r0 = w.abs() / 2.0;
        for m in RING_OFFSETS {
            for sg in [-1.0, 1.0] {
                bps.push(r0 + sg * m * width);
            }
        }
    }
    bps.retain(|b| (0.0..=1.0).contains(b));
    bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bps.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let n_sub = grid.n_radial.div_ceil(GL_ORDER);
    let mut out = Vec::new();
    for pair in bps.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let h = (b - a) / n_sub as f64;
        for j in 0..n_sub {
            out.push((a + j as f64 * h, if j + 1 == n_sub { b } else { a + (j + 1) as f64 * h }));
        }
    }
    out
}

/// Dimensionless integral Ĩ (both orderings) of the current integrand.
fn integral(q: &OracleQuery, mat: &MaterialParams, grid: &KGridSpec) -> [Complex64; 2] {
    let vk = mat.v_f * mat.k_f();
    let kf = mat.k_f();
    let a = Leg::new(&q.eta1, q.omega1 / vk, [q.q1[0] / kf, q.q1[1] / kf]);
    let b = Leg::new(&q.eta2, q.omega2 / vk, [q.q2[0] / kf, q.q2[1] / kf]);
    let eta = grid.eta / vk;
    let s_f = mat.s_f as f64;
    let panels = radial_panels(&[a, b], eta, grid);
    let rule = GaussLegendre::new(std::num::NonZeroUsize::new(GL_ORDER).unwrap());
    let nodes: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
    let n_ang = grid.n_angular;
    let dphi = 2.0 * PI / n_ang as f64;
    let trig: Vec<(f64, f64)> = (0..n_ang)
        .map(|j| {
            let phi = (j as f64 + 0.5) * dphi;
            (phi.cos(), phi.sin())
        })
        .collect();
    let partial: Vec<[Complex64; 2]> = panels
        .par_iter()
        .map(|&(lo, hi)| {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let mut acc = [Complex64::new(0.0, 0.0); 2];
            for &(x, wgt) in &nodes {
                let r = mid + half * x;
                let weight = half * wgt * r * dphi;
                let mut ring = [Complex64::new(0.0, 0.0); 2];
                for &(c, s) in &trig {
                    let (kx, ky) = (r * c, r * s);
                    let u = ordered_integrand(kx, ky, &a, &b, eta, s_f);
                    let v = ordered_integrand(kx, ky, &b, &a, eta, s_f);
                    ring[0] += u[0] + v[0];
                    ring[1] += u[1] + v[1];
                }
                acc[0] += ring[0] * weight;
                acc[1] += ring[1] * weight;
            }
            acc
        })
        .collect();
    partial.iter().fold([Complex64::new(0.0, 0.0); 2], |s, p| [s[0] + p[0], s[1] + p[1]])
}

/// Second-order conductivity vector σ_α(ω₁+ω₂) = J_α/(E₁E₂) for input fields
/// along η₁, η₂.  σ⁽²⁾_{αβγ} is read off by choosing η₁ = β̂, η₂ = γ̂ and the
/// output component α.
#[allow(clippy::too_many_arguments)]
pub fn sigma2_numeric(
    eta1: Polarization,
    eta2: Polarization,
    omega1: f64,
    omega2: f64,
    q1: [f64; 2],
    q2: [f64; 2],
    mat: &MaterialParams,
    grid: &KGridSpec,
) -> Result<[Complex64; 2]> {
    evaluate(&OracleQuery { eta1, eta2, omega1, omega2, q1, q2 }, mat, grid)
}

/// [`sigma2_numeric`] on a query struct.
pub fn evaluate(q: &OracleQuery, mat: &MaterialParams, grid: &KGridSpec) -> Result<[Complex64; 2]> {
    mat.validate()?;
    grid.validate()?;
    if q.omega1 == 0.0 || q.omega2 == 0.0 {
        return Err(Error::InvalidInput("input frequencies must be nonzero".into()));
    }
    let vk = mat.v_f * mat.k_f();
    let kf = mat.k_f();
    let (w1, w2) = (q.omega1 / vk, q.omega2 / vk);
    let scale = mat.g as f64 * E.powi(3) * mat.n_layers as f64
        / (64.0 * PI * PI * HBAR * HBAR * mat.v_f * kf * kf * w1 * w2);
    let j = integral(q, mat, grid);
    Ok([j[0] * scale, j[1] * scale])
}

/// Lossless limit η → 0 by Richardson extrapolation from η and η/2.
pub fn evaluate_lossless(q: &OracleQuery, mat: &MaterialParams, grid: &KGridSpec) -> Result<[Complex64; 2]> {
    let coarse = evaluate(q, mat, grid)?;
    let fine = evaluate(q, mat, &grid.with_eta(grid.eta / 2.0))?;
    Ok([2.0 * fine[0] - coarse[0], 2.0 * fine[1] - coarse[1]])
}

/// Evaluates on `grid` and on the doubled grid; fails with both estimates if
/// the relative change exceeds `tol`.
pub fn evaluate_checked(
    q: &OracleQuery,
    mat: &MaterialParams,
    grid: &KGridSpec,
    tol: f64,
) -> Result<[Complex64; 2]> {
    let coarse = evaluate(q, mat, grid)?;
    let fine = evaluate(q, mat, &grid.doubled())?;
    let rel_change = vec_norm(&[fine[0] - coarse[0], fine[1] - coarse[1]]) / vec_norm(&fine);
    if !(rel_change <= tol) {
        return Err(Error::NotConverged { coarse, fine, rel_change });
    }
    Ok(fine)
}

fn vec_norm(v: &[Complex64; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// One row of a refinement study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub grid: KGridSpec,
    pub value: [Complex64; 2],
    /// |value − previous value|; `None` for the first grid.
    pub delta: Option<f64>,
}

/// Evaluates the same query on successive grids.
pub fn convergence_study(
    q: &OracleQuery,
    mat: &MaterialParams,
    grids: &[KGridSpec],
) -> Result<Vec<ConvergenceRow>> {
    if grids.len() < 2 {
        return Err(Error::InvalidInput("convergence study needs at least two grids".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(grids.len());
    for grid in grids {
        let value = evaluate(q, mat, grid)?;
        let delta = rows
            .last()
            .map(|p| vec_norm(&[value[0] - p.value[0], value[1] - p.value[1]]));
        rows.push(ConvergenceRow { grid: *grid, value, delta });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi2_closed::{sigma2_xyy, Broadening};
    use crate::params::graphene_preset;

    fn query(w1: f64, w2: f64, q1: f64, q2: f64) -> OracleQuery {
        let m = graphene_preset();
        let (vk, kf) = (m.v_f * m.k_f(), m.k_f());
        OracleQuery {
            eta1: Polarization::y(),
            eta2: Polarization::y(),
            omega1: w1 * vk,
            omega2: w2 * vk,
            q1: [q1 * kf, 0.0],
            q2: [q2 * kf, 0.0],
        }
    }

    #[test]
    fn matches_closed_form_off_resonance() {
        let m = graphene_preset();
        let grid = KGridSpec::for_material(&m);
        let q = query(0.7, 0.5, 1e-3, 0.5e-3);
        let num = evaluate(&q, &m, &grid).unwrap();
        let closed = sigma2_xyy(q.omega1, q.omega2, q.q1[0], q.q2[0], &m, Broadening::uniform(grid.eta)).unwrap();
        assert!((num[0] / closed - 1.0).norm() < 0.02, "{} vs {}", num[0], closed);
    }

    #[test]
    fn deterministic_and_band_mirror() {
        let mut m = graphene_preset();
        let grid = KGridSpec::for_material(&m);
        let q = query(1.3, 0.4, 1e-3, -0.7e-3);
        let a = evaluate(&q, &m, &grid).unwrap();
        assert_eq!(a, evaluate(&q, &m, &grid).unwrap());
        m.s_f = -1;
        let b = evaluate(&q, &m, &grid).unwrap();
        assert!((a[0] + b[0]).norm() < 1e-3 * a[0].norm());
    }

    #[test]
    fn rejects_bad_grid() {
        let m = graphene_preset();
        let mut g = KGridSpec::for_material(&m);
        g.n_radial = 8;
        assert!(evaluate(&query(0.7, 0.5, 1e-3, 1e-3), &m, &g).is_err());
        assert!(Polarization::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn study_of_identical_grids_has_zero_delta() {
        let m = graphene_preset();
        let g = KGridSpec::for_material(&m);
        let rows = convergence_study(&query(0.7, 0.5, 1e-3, 0.5e-3), &m, &[g, g]).unwrap();
        assert_eq!(rows[0].delta, None);
        assert_eq!(rows[1].delta, Some(0.0));
    }
}
