//! Conversions between user-facing units and internal CGS.
//!
//! Frequencies are angular: `THz` means ω = 2π·10¹² f.  A `µm` value is a
//! vacuum wavelength and converts to the corresponding angular frequency
//! ω = 2πc/λ; plain lengths use `cm`.

use std::f64::consts::PI;
use std::str::FromStr;

use crate::constants::{C, EV};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    /// Vacuum wavelength in micrometres, mapped to angular frequency (rad/s).
    Micrometer,
    /// Frequency in THz, mapped to angular frequency (rad/s).
    Terahertz,
    MilliElectronVolt,
    ElectronVolt,
    /// Intensity in GW/cm², mapped to erg·s⁻¹·cm⁻².
    GigawattPerCm2,
    Degree,
    Kelvin,
    Centimeter,
    PerSecond,
}

impl Unit {
    pub const ALL: [Unit; 9] = [
        Unit::Micrometer,
        Unit::Terahertz,
        Unit::MilliElectronVolt,
        Unit::ElectronVolt,
        Unit::GigawattPerCm2,
        Unit::Degree,
        Unit::Kelvin,
        Unit::Centimeter,
        Unit::PerSecond,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Unit::Micrometer => "um",
            Unit::Terahertz => "THz",
            Unit::MilliElectronVolt => "meV",
            Unit::ElectronVolt => "eV",
            Unit::GigawattPerCm2 => "GW/cm2",
            Unit::Degree => "deg",
            Unit::Kelvin => "K",
            Unit::Centimeter => "cm",
            Unit::PerSecond => "1/s",
        }
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "um" | "µm" | "micrometer" => Unit::Micrometer,
            "THz" | "thz" => Unit::Terahertz,
            "meV" => Unit::MilliElectronVolt,
            "eV" => Unit::ElectronVolt,
            "GW/cm2" | "GW/cm²" | "GW_cm2" => Unit::GigawattPerCm2,
            "deg" | "degrees" | "°" => Unit::Degree,
            "K" => Unit::Kelvin,
            "cm" => Unit::Centimeter,
            "1/s" | "s^-1" | "s⁻¹" | "per_s" => Unit::PerSecond,
            other => return Err(Error::UnknownUnit(other.to_string())),
        })
    }
}

/// Converts `value` given in `unit` to internal CGS.
pub fn to_internal(value: f64, unit: Unit) -> f64 {
    match unit {
        Unit::Micrometer => 2.0 * PI * C / (value * 1e-4),
        Unit::Terahertz => 2.0 * PI * 1e12 * value,
        Unit::MilliElectronVolt => value * 1e-3 * EV,
        Unit::ElectronVolt => value * EV,
        Unit::GigawattPerCm2 => value * 1e16,
        Unit::Degree => value.to_radians(),
        Unit::Kelvin | Unit::Centimeter | Unit::PerSecond => value,
    }
}

/// Inverse of [`to_internal`].
pub fn from_internal(value: f64, unit: Unit) -> f64 {
    match unit {
        Unit::Micrometer => 2.0 * PI * C / value * 1e4,
        Unit::Terahertz => value / (2.0 * PI * 1e12),
        Unit::MilliElectronVolt => value / (1e-3 * EV),
        Unit::ElectronVolt => value / EV,
        Unit::GigawattPerCm2 => value * 1e-16,
        Unit::Degree => value.to_degrees(),
        Unit::Kelvin | Unit::Centimeter | Unit::PerSecond => value,
    }
}

/// Parses a unit tag and converts; unknown tags are rejected.
pub fn to_internal_tagged(value: f64, tag: &str) -> Result<f64> {
    Ok(to_internal(value, tag.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pump_wavelength() {
        let w = to_internal(10.0, Unit::Micrometer);
        assert!((w / 1.8836e14 - 1.0).abs() < 1e-4, "{w}");
    }

    #[test]
    fn intensity_and_angle() {
        assert_eq!(to_internal(1.0, Unit::GigawattPerCm2), 1e16);
        assert!((to_internal(45.0, Unit::Degree) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_tag_rejected() {
        assert!(matches!(to_internal_tagged(1.0, "furlong"), Err(Error::UnknownUnit(_))));
        for u in Unit::ALL {
            assert_eq!(u.tag().parse::<Unit>().unwrap(), u);
        }
    }

    proptest! {
        #[test]
        fn round_trip(v in 1e-6f64..1e6, idx in 0usize..9) {
            let u = Unit::ALL[idx];
            let back = from_internal(to_internal(v, u), u);
            prop_assert!(((back - v) / v).abs() < 1e-12);
        }
    }
}
