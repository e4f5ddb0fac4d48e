//! Physical constants in Gaussian CGS units.

/// Fundamental constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge (statcoulomb).
    pub e: f64,
    /// Reduced Planck constant (erg·s).
    pub hbar: f64,
    /// Speed of light (cm/s).
    pub c: f64,
    /// Boltzmann constant (erg/K).
    pub k_b: f64,
}

/// CODATA 2018 values.
pub const CGS: PhysicalConstants = PhysicalConstants {
    e: 4.803_204_712_570_263e-10,
    hbar: 1.054_571_817e-27,
    c: 2.997_924_58e10,
    k_b: 1.380_649e-16,
};

pub const E: f64 = CGS.e;
pub const HBAR: f64 = CGS.hbar;
pub const C: f64 = CGS.c;
pub const K_B: f64 = CGS.k_b;

/// One electron-volt in erg.
pub const EV: f64 = 1.602_176_634e-12;

impl PhysicalConstants {
    /// Fine-structure constant e²/(ħc).
    pub fn alpha(&self) -> f64 {
        self.e * self.e / (self.hbar * self.c)
    }
}
