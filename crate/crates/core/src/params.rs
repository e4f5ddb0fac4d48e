//! Material, illumination and detection records.

use std::f64::consts::FRAC_PI_4;
use std::f64::consts::FRAC_PI_2;

use crate::constants::{C, HBAR};
use crate::error::{Error, Result};

/// Default Fermi velocity of graphene (cm/s).
pub const GRAPHENE_V_F: f64 = 1.0e8;
/// Default interband polarization decay rate (1/s).
pub const DEFAULT_GAMMA_POL: f64 = 1.0e12;
/// Default pump wavelength (cm).
pub const DEFAULT_PUMP_WAVELENGTH: f64 = 10.0e-4;

/// A two-dimensional Dirac material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Fermi energy measured from the Dirac point, |ε_F| (erg).
    pub e_f: f64,
    /// Fermi velocity (cm/s).
    pub v_f: f64,
    /// Spin × valley degeneracy.
    pub g: u32,
    /// Interband polarization decay rate γ (1/s).
    pub gamma_pol: f64,
    /// Intraband collision rate entering the linear susceptibility (1/s).
    pub gamma_intra: f64,
    /// +1 for electron doping, −1 when the Fermi level sits in the valence band.
    pub s_f: i32,
    /// Number of identical, uncoupled conducting layers.
    pub n_layers: u32,
}

impl MaterialParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.e_f > 0.0 && self.e_f.is_finite()) {
            return Err(Error::InvalidInput(format!("E_F must be positive, got {}", self.e_f)));
        }
        if !(self.v_f > 0.0 && self.v_f.is_finite()) {
            return Err(Error::InvalidInput(format!("v_F must be positive, got {}", self.v_f)));
        }
        if self.g != 2 && self.g != 4 {
            return Err(Error::InvalidInput(format!("degeneracy must be 2 or 4, got {}", self.g)));
        }
        if self.s_f != 1 && self.s_f != -1 {
            return Err(Error::InvalidInput(format!("s_F must be ±1, got {}", self.s_f)));
        }
        if self.n_layers < 1 {
            return Err(Error::InvalidInput("n_layers must be at least 1".into()));
        }
        if self.gamma_pol < 0.0 || self.gamma_intra < 0.0 {
            return Err(Error::InvalidInput("decay rates must be non-negative".into()));
        }
        Ok(())
    }

    /// Fermi wave number k_F = E_F/(ħ v_F).
    pub fn k_f(&self) -> f64 {
        self.e_f / (HBAR * self.v_f)
    }

    /// Interband absorption edge 2 v_F k_F = 2E_F/ħ (rad/s).
    pub fn omega_edge(&self) -> f64 {
        2.0 * self.e_f / HBAR
    }

    /// Combined degeneracy/layer multiplier (g/4)·n_layers applied to
    /// response functions normalized for monolayer graphene.
    pub fn weight(&self) -> f64 {
        self.g as f64 / 4.0 * self.n_layers as f64
    }

    /// Fermi energy that puts the interband edge at the pump frequency.
    pub fn resonant_e_f(omega_p: f64) -> f64 {
        HBAR * omega_p / 2.0
    }

    pub fn with_e_f(mut self, e_f: f64) -> Self {
        self.e_f = e_f;
        self
    }
}

/// Monolayer graphene, Fermi level resonant with a 10 µm pump.
pub fn graphene_preset() -> MaterialParams {
    MaterialParams {
        e_f: MaterialParams::resonant_e_f(2.0 * std::f64::consts::PI * C / DEFAULT_PUMP_WAVELENGTH),
        v_f: GRAPHENE_V_F,
        g: 4,
        gamma_pol: DEFAULT_GAMMA_POL,
        gamma_intra: 0.0,
        s_f: 1,
        n_layers: 1,
    }
}

/// A single topological-insulator surface (Bi₂Se₃-like): no valley
/// degeneracy and half the graphene Fermi velocity.
pub fn ti_preset() -> MaterialParams {
    MaterialParams {
        v_f: GRAPHENE_V_F / 2.0,
        g: 2,
        ..graphene_preset()
    }
}

/// Two dielectric half-spaces and the pump/idler beams in medium 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub n1: f64,
    pub n2: f64,
    /// Pump incidence angle (rad).
    pub theta_1p: f64,
    /// Idler emission angle (rad), signed.
    pub theta_1i: f64,
    /// Pump angular frequency (rad/s).
    pub omega_p: f64,
    /// Pump intensity (erg·s⁻¹·cm⁻²).
    pub i_p: f64,
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.n1 >= 1.0 && self.n2 >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "refractive indices must be ≥ 1 (n1 = {}, n2 = {})",
                self.n1, self.n2
            )));
        }
        if self.theta_1p.abs() >= FRAC_PI_2 || self.theta_1i.abs() >= FRAC_PI_2 {
            return Err(Error::InvalidInput("incidence angles must satisfy |θ| < π/2".into()));
        }
        if !(self.omega_p > 0.0) {
            return Err(Error::InvalidInput("pump frequency must be positive".into()));
        }
        if !(self.i_p >= 0.0) {
            return Err(Error::InvalidInput("pump intensity must be non-negative".into()));
        }
        Ok(())
    }

    pub fn eps1(&self) -> f64 {
        self.n1 * self.n1
    }

    pub fn eps2(&self) -> f64 {
        self.n2 * self.n2
    }
}

/// Vacuum above a substrate with n = 2, 10 µm pump at 45°, idler at 20°,
/// 1 GW/cm².
pub fn default_geometry() -> Geometry {
    Geometry {
        n1: 1.0,
        n2: 2.0,
        theta_1p: FRAC_PI_4,
        theta_1i: 20f64.to_radians(),
        omega_p: 2.0 * std::f64::consts::PI * C / DEFAULT_PUMP_WAVELENGTH,
        i_p: 1e16,
    }
}

/// Detector-side quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionGeometry {
    /// Collection length along the plasmon propagation direction (cm).
    pub l_x: f64,
    /// Aperture width (cm).
    pub l_y: f64,
    /// Spectral interval Δω (rad/s).
    pub delta_omega: f64,
    /// Detector area (cm²).
    pub a_d: f64,
    /// Reservoir temperature (K).
    pub t: f64,
}

impl DetectionGeometry {
    pub fn validate(&self) -> Result<()> {
        let all = [self.l_x, self.l_y, self.delta_omega, self.a_d, self.t];
        if all.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidInput("detection parameters must be strictly positive".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EV;

    #[test]
    fn presets() {
        let gr = graphene_preset();
        let ti = ti_preset();
        assert_eq!(gr.g, 4);
        assert_eq!(ti.g, 2);
        assert_eq!(ti.v_f / gr.v_f, 0.5);
        gr.validate().unwrap();
        ti.validate().unwrap();
        // 10 µm resonance puts E_F near 62 meV.
        assert!((gr.e_f / (1e-3 * EV) - 62.0).abs() < 0.1);
    }

    #[test]
    fn rejects_bad_material() {
        let mut m = graphene_preset();
        m.g = 3;
        assert!(m.validate().is_err());
        let mut m = graphene_preset();
        m.e_f = -1.0;
        assert!(m.validate().is_err());
    }

    #[test]
    fn geometry_validation() {
        let mut g = default_geometry();
        g.validate().unwrap();
        g.theta_1i = -1.0;
        g.validate().unwrap();
        g.n2 = 0.5;
        assert!(g.validate().is_err());
    }
}
