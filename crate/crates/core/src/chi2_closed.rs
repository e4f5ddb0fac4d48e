//! Closed-form second-order conductivity σ⁽²⁾_xyy of massless Dirac fermions
//! to first order in the in-plane wave vectors, the resonant approximation
//! used for the pump → plasmon + idler process, and the lossless
//! index/frequency permutation relations.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::constants::{E, HBAR};
use crate::error::{Error, Result};
use crate::params::MaterialParams;

/// In-plane Cartesian axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Phenomenological broadenings substituted as ω₁ → ω₁ + iγ₁, ω₂ → ω₂ + iγ₂,
/// ω₁+ω₂ → ω₁+ω₂ + iγ₃ (1/s).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Broadening {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl Broadening {
    pub fn uniform(gamma: f64) -> Self {
        Broadening { gamma1: gamma, gamma2: gamma, gamma3: gamma }
    }

    pub fn lossless() -> Self {
        Self::default()
    }

    pub fn is_lossless(&self) -> bool {
        self.gamma1 == 0.0 && self.gamma2 == 0.0 && self.gamma3 == 0.0
    }
}

/// One second-order tensor element χ⁽²⁾_{αβγ}(ω₁+ω₂; ω₁, ω₂) with the
/// in-plane wave numbers carried by the two input fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi2Component {
    /// (output, first input, second input) polarizations.
    pub indices: [Axis; 3],
    pub omega1: f64,
    pub omega2: f64,
    pub q1: f64,
    pub q2: f64,
    pub value: Complex64,
    pub broadening: Broadening,
}

impl Chi2Component {
    pub fn omega_sum(&self) -> f64 {
        self.omega1 + self.omega2
    }

    pub fn q_sum(&self) -> f64 {
        self.q1 + self.q2
    }
}

/// Index/frequency permutations of a lossless second-order element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Permutation {
    Identity,
    /// Exchanges the output with the first input: (α; β@ω₁, γ@ω₂) → (β; α@−ω₃, γ@ω₂).
    SwapOutputFirst,
    /// Exchanges the output with the second input: (α; β@ω₁, γ@ω₂) → (γ; β@ω₁, α@−ω₃).
    SwapOutputSecond,
}

fn check_pole(z: Complex64, scale: f64, what: &str) -> Result<()> {
    if z.norm() <= 1e-14 * scale {
        Err(Error::Singular(format!("pole of σ⁽²⁾ at {what}")))
    } else {
        Ok(())
    }
}

/// σ⁽²⁾_xyy(ω₁+ω₂; ω₁, ω₂) with fields propagating along x, linear in q₁, q₂.
///
/// Difference-frequency processes follow by flipping the sign of ω₂ and q₂.
/// The expression is written for graphene (g = 4) and scaled by
/// [`MaterialParams::weight`].
pub fn sigma2_xyy(
    omega1: f64,
    omega2: f64,
    q1: f64,
    q2: f64,
    mat: &MaterialParams,
    br: Broadening,
) -> Result<Complex64> {
    // Evaluated in units v_F = k_F = 1 to keep the 11th-order denominator in range.
    let vk = mat.v_f * mat.k_f();
    let kf = mat.k_f();
    let w1 = Complex64::new(omega1, br.gamma1) / vk;
    let w2 = Complex64::new(omega2, br.gamma2) / vk;
    let w3 = Complex64::new(omega1 + omega2, br.gamma3) / vk;
    let (q1, q2) = (q1 / kf, q2 / kf);
    let scale = (omega1.abs().max(omega2.abs()) / vk).max(1.0);
    check_pole(w1, scale, "ω₁ = 0")?;
    check_pole(w2, scale, "ω₂ = 0")?;
    check_pole(w3, scale, "ω₁ + ω₂ = 0")?;
    for (w, name) in [(w1, "ω₁"), (w2, "ω₂"), (w3, "ω₁ + ω₂")] {
        check_pole(w * w - 4.0, scale * scale, &format!("{name} = 2v_F k_F"))?;
    }
    let s_f = mat.s_f as f64;
    let pref = -s_f * E.powi(3) / (2.0 * PI * HBAR * HBAR * mat.v_f * kf * kf)
        / (w1 * w1 * w2 * w2 * w3 * (w1 * w1 - 4.0) * (w2 * w2 - 4.0) * (w3 * w3 - 4.0));
    let bracket = 4.0 * w1 * w2 * w3 * w3 * (q1 * w2 * w2 + q2 * w1 * w1)
        + 4.0
            * (q1 * w2.powi(4) - (6.0 * q1 + 4.0 * q2) * w1 * w2.powi(3)
                - 8.0 * (q1 + q2) * w1 * w1 * w2 * w2
                - (4.0 * q1 + 6.0 * q2) * w1.powi(3) * w2
                + q2 * w1.powi(4))
        - 16.0 * (q1 * w2 * (w2 - 2.0 * w1) + q2 * w1 * (w1 - 2.0 * w2));
    Ok(pref * bracket * mat.weight())
}

/// Converts a 2D conductivity to a 2D susceptibility, χ = iσ/ω.
pub fn chi2_from_sigma2(sigma: Complex64, omega_sum: f64) -> Result<Complex64> {
    if omega_sum == 0.0 || !omega_sum.is_finite() {
        return Err(Error::InvalidInput("mixing frequency must be nonzero".into()));
    }
    Ok(Complex64::i() * sigma / omega_sum)
}

/// Inverse of [`chi2_from_sigma2`].
pub fn sigma2_from_chi2(chi: Complex64, omega_sum: f64) -> Result<Complex64> {
    if omega_sum == 0.0 || !omega_sum.is_finite() {
        return Err(Error::InvalidInput("mixing frequency must be nonzero".into()));
    }
    Ok(-Complex64::i() * chi * omega_sum)
}

/// Whether the pump sits within one interband linewidth of the 2v_F k_F edge.
pub fn is_pump_resonant(omega_p: f64, mat: &MaterialParams) -> bool {
    (omega_p - mat.omega_edge()).abs() < mat.gamma_pol
}

/// Resonant approximation χ⁽ˢ²⁾_xyy = χ⁽ⁱ²⁾*_yyx ≈ 3e³v_F²q_p/(16πħ²ω_iω_s²γ),
/// valid for |ω_p − 2v_F k_F| < γ and ω_p ≫ ω_s ≫ γ_s.
pub fn chi2_resonant(
    omega_p: f64,
    omega_i: f64,
    omega_s: f64,
    q_p: f64,
    mat: &MaterialParams,
) -> Complex64 {
    if !is_pump_resonant(omega_p, mat) {
        warn!(
            "resonant χ⁽²⁾ used with |ω_p − 2v_F k_F| = {:e} ≥ γ = {:e}",
            (omega_p - mat.omega_edge()).abs(),
            mat.gamma_pol
        );
    }
    let v = 3.0 * E.powi(3) * mat.v_f * mat.v_f * q_p
        / (16.0 * PI * HBAR * HBAR * omega_i * omega_s * omega_s * mat.gamma_pol);
    Complex64::new(v * mat.weight(), 0.0)
}

/// Returns the permuted element that must carry the same value as `c` when
/// dissipation is absent.  Wave vectors are permuted together with the
/// frequencies; the mixing leg enters with reversed sign.
pub fn permutation_partner(c: &Chi2Component, perm: Permutation) -> Result<Chi2Component> {
    if !c.broadening.is_lossless() {
        return Err(Error::LossyPermutation);
    }
    let [a, b, g] = c.indices;
    let (w3, q3) = (c.omega_sum(), c.q_sum());
    Ok(match perm {
        Permutation::Identity => *c,
        Permutation::SwapOutputFirst => Chi2Component {
            indices: [b, a, g],
            omega1: -w3,
            q1: -q3,
            ..*c
        },
        Permutation::SwapOutputSecond => Chi2Component {
            indices: [g, b, a],
            omega2: -w3,
            q2: -q3,
            ..*c
        },
    })
}
