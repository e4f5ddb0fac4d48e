//! Sectioned `key = value` run configuration.
//!
//! Every accepted key is listed in [`SCHEMA`] together with its default and
//! unit; anything else in the file or on the command line is rejected.  Unit
//! suffixes in key names are informational — the unit actually applied is the
//! one recorded in the schema, and values are converted to CGS exactly once,
//! when read.

use std::collections::BTreeMap;
use std::path::Path;

use ini::Ini;
use plasmon_core::params::{graphene_preset, ti_preset, DetectionGeometry, Geometry, MaterialParams};
use plasmon_core::units::{to_internal, Unit};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    /// Real number, optionally converted from the given unit.
    Float(Option<Unit>),
    /// Real number or one of the listed words.
    FloatOr(Option<Unit>, &'static [&'static str]),
    Int,
    Choice(&'static [&'static str]),
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub section: &'static str,
    pub key: &'static str,
    /// `None` marks a required key.
    pub default: Option<&'static str>,
    pub kind: Kind,
}

const fn entry(section: &'static str, key: &'static str, default: Option<&'static str>, kind: Kind) -> KeySpec {
    KeySpec { section, key, default, kind }
}

pub const METHODS: &[&str] = &["auto", "resonant", "closed", "numeric"];

use Kind::*;

pub const SCHEMA: &[KeySpec] = &[
    entry("material", "preset", Some("graphene"), Choice(&["graphene", "ti"])),
    entry("material", "E_F_meV", None, FloatOr(Some(Unit::MilliElectronVolt), &["resonant"])),
    entry("material", "v_F_cm_s", Some("preset"), FloatOr(None, &["preset"])),
    entry("material", "g", Some("preset"), FloatOr(None, &["preset"])),
    entry("material", "gamma_pol_per_s", Some("1e12"), Float(Some(Unit::PerSecond))),
    entry("material", "gamma_intra_per_s", Some("0"), Float(Some(Unit::PerSecond))),
    entry("material", "s_F", Some("1"), Int),
    entry("material", "n_layers", Some("1"), Int),
    entry("geometry", "n1", Some("1"), Float(None)),
    entry("geometry", "n2", Some("2"), Float(None)),
    entry("geometry", "theta_1p_deg", Some("45"), Float(Some(Unit::Degree))),
    entry("geometry", "theta_1i_deg", Some("20"), Float(Some(Unit::Degree))),
    entry("geometry", "pump_wavelength_um", Some("10"), Float(Some(Unit::Micrometer))),
    entry("geometry", "I_p_GW_cm2", Some("1"), Float(Some(Unit::GigawattPerCm2))),
    entry("detection", "L_x_cm", Some("0.1"), Float(Some(Unit::Centimeter))),
    entry("detection", "L_y_cm", Some("0.1"), Float(Some(Unit::Centimeter))),
    entry("detection", "delta_omega_THz", Some("0.1"), Float(Some(Unit::Terahertz))),
    entry("detection", "A_d_cm2", Some("0.01"), Float(None)),
    entry("detection", "T_K", Some("300"), Float(Some(Unit::Kelvin))),
    entry("dispersion", "q_min_kF", Some("1e-4"), Float(None)),
    entry("dispersion", "q_max_kF", Some("0.1"), Float(None)),
    entry("dispersion", "points", Some("50"), Int),
    entry("fig2", "theta_min_deg", Some("-80"), Float(Some(Unit::Degree))),
    entry("fig2", "theta_max_deg", Some("80"), Float(Some(Unit::Degree))),
    entry("fig2", "points", Some("161"), Int),
    entry("fig2", "gamma_s_ref_per_s", Some("1e11"), Float(Some(Unit::PerSecond))),
    entry("fig2", "method", Some("auto"), Choice(METHODS)),
    entry("fig3", "gamma_min_per_s", Some("1e10"), Float(Some(Unit::PerSecond))),
    entry("fig3", "gamma_max_per_s", Some("1e12"), Float(Some(Unit::PerSecond))),
    entry("fig3", "points", Some("100"), Int),
    entry("fig3", "method", Some("auto"), Choice(METHODS)),
    entry("chi2", "omega1_THz", Some("20"), Float(Some(Unit::Terahertz))),
    entry("chi2", "omega2_THz", Some("-7"), Float(Some(Unit::Terahertz))),
    entry("chi2", "q1_kF", Some("2e-3"), Float(None)),
    entry("chi2", "q2_kF", Some("-1e-3"), Float(None)),
    entry("chi2", "points", Some("4"), Int),
    entry("chi2", "method", Some("closed"), Choice(&["closed", "numeric"])),
    entry("chi2", "broadening_per_s", Some("1e11"), FloatOr(Some(Unit::PerSecond), &["material"])),
    entry("chi2", "n_radial", Some("64"), Int),
    entry("chi2", "n_angular", Some("256"), Int),
    entry("flux", "I_min_GW_cm2", Some("0.01"), Float(Some(Unit::GigawattPerCm2))),
    entry("flux", "I_max_GW_cm2", Some("0.2"), Float(Some(Unit::GigawattPerCm2))),
    entry("flux", "points", Some("20"), Int),
    entry("flux", "gamma_s_per_s", Some("1e11"), Float(Some(Unit::PerSecond))),
    entry("flux", "method", Some("auto"), Choice(METHODS)),
    entry("langevin", "v_s_cm_s", Some("mode"), FloatOr(None, &["mode"])),
    entry("langevin", "gamma_s_per_s", Some("1e11"), Float(Some(Unit::PerSecond))),
    entry("langevin", "ReG_per_s", Some("0"), Float(Some(Unit::PerSecond))),
    entry("langevin", "n_thermal", Some("1"), FloatOr(None, &["bose"])),
    entry("langevin", "length_decay", Some("2"), Float(None)),
    entry("langevin", "n_cells", Some("100"), Int),
    entry("langevin", "n_traj", Some("2000"), Int),
    entry("langevin", "courant", Some("1"), Float(None)),
    entry("langevin", "burn_in_transits", Some("2"), Float(None)),
    entry("langevin", "n_samples", Some("200"), Int),
    entry("langevin", "seed", Some("1"), Int),
    entry("osc0d", "gamma_s_per_s", Some("1e11"), Float(Some(Unit::PerSecond))),
    entry("osc0d", "l_cm", Some("0.1"), Float(Some(Unit::Centimeter))),
    entry("osc0d", "t_end_decay", Some("2"), Float(None)),
    entry("osc0d", "points", Some("200"), Int),
    entry("osc0d", "method", Some("auto"), Choice(METHODS)),
];

fn lookup(section: &str, key: &str) -> Option<&'static KeySpec> {
    SCHEMA.iter().find(|s| s.section == section && s.key == key)
}

/// Fully resolved configuration: every schema key has a validated raw value.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<(&'static str, &'static str), String>,
}

impl Config {
    pub fn from_file(path: &Path, overrides: &[(String, String)]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_with(&text, overrides)
    }

    pub fn from_str_with(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::Config(format!("malformed config: {e}")))?;
        let mut values = BTreeMap::new();
        for (section, props) in ini.iter() {
            for (key, value) in props.iter() {
                let Some(section) = section else {
                    return Err(CliError::Config(format!("key `{key}` outside of any section")));
                };
                let s = lookup(section, key)
                    .ok_or_else(|| CliError::Config(format!("unknown key `{key}` in [{section}]")))?;
                values.insert((s.section, s.key), value.trim().to_string());
            }
        }
        for (name, value) in overrides {
            let s = resolve_override(name)?;
            values.insert((s.section, s.key), value.trim().to_string());
        }
        for s in SCHEMA {
            if !values.contains_key(&(s.section, s.key)) {
                match s.default {
                    Some(d) => {
                        values.insert((s.section, s.key), d.to_string());
                    }
                    None => return Err(CliError::Config(format!("missing required key `{}` in [{}]", s.key, s.section))),
                }
            }
            check_value(s, &values[&(s.section, s.key)])?;
        }
        let cfg = Config { values };
        cfg.material()?;
        cfg.geometry()?;
        cfg.detection()?;
        Ok(cfg)
    }

    /// `(section, key, value)` in schema order, for provenance headers.
    pub fn entries(&self) -> Vec<(&'static str, &'static str, &str)> {
        SCHEMA
            .iter()
            .map(|s| (s.section, s.key, self.values[&(s.section, s.key)].as_str()))
            .collect()
    }

    pub fn raw(&self, section: &str, key: &str) -> &str {
        let s = lookup(section, key).unwrap_or_else(|| panic!("{section}.{key} is not a schema key"));
        &self.values[&(s.section, s.key)]
    }

    /// Numeric value converted to CGS; `None` when the entry holds one of the
    /// alternative words.
    pub fn number(&self, section: &str, key: &str) -> Option<f64> {
        let s = lookup(section, key).unwrap_or_else(|| panic!("{section}.{key} is not a schema key"));
        let raw = self.raw(section, key);
        let unit = match s.kind {
            Float(u) | FloatOr(u, _) => u,
            Int => None,
            Choice(_) => return None,
        };
        let v: f64 = raw.parse().ok()?;
        Some(unit.map_or(v, |u| to_internal(v, u)))
    }

    /// Numeric value in the configured (user-facing) unit.
    pub fn user_float(&self, section: &str, key: &str) -> f64 {
        self.raw(section, key).parse().unwrap_or_else(|_| panic!("{section}.{key} is not numeric"))
    }

    /// Unit applied when converting `section.key` to CGS.
    pub fn unit(&self, section: &str, key: &str) -> Option<Unit> {
        match lookup(section, key)?.kind {
            Float(u) | FloatOr(u, _) => u,
            _ => None,
        }
    }

    pub fn float(&self, section: &str, key: &str) -> f64 {
        self.number(section, key).unwrap_or_else(|| panic!("{section}.{key} is not numeric"))
    }

    pub fn int(&self, section: &str, key: &str) -> i64 {
        self.raw(section, key).parse().unwrap_or_else(|_| panic!("{section}.{key} is not an integer"))
    }

    pub fn count(&self, section: &str, key: &str) -> Result<usize> {
        usize::try_from(self.int(section, key))
            .map_err(|_| CliError::Config(format!("{section}.{key} must be non-negative")))
    }

    pub fn material(&self) -> Result<MaterialParams> {
        let base = match self.raw("material", "preset") {
            "ti" => ti_preset(),
            _ => graphene_preset(),
        };
        let omega_p = self.float("geometry", "pump_wavelength_um");
        let m = MaterialParams {
            e_f: self.number("material", "E_F_meV").unwrap_or(MaterialParams::resonant_e_f(omega_p)),
            v_f: self.number("material", "v_F_cm_s").unwrap_or(base.v_f),
            g: match self.number("material", "g") {
                Some(g) if g.fract() == 0.0 && g > 0.0 => g as u32,
                Some(g) => return Err(CliError::Config(format!("degeneracy must be a positive integer, got {g}"))),
                None => base.g,
            },
            gamma_pol: self.float("material", "gamma_pol_per_s"),
            gamma_intra: self.float("material", "gamma_intra_per_s"),
            s_f: self.int("material", "s_F") as i32,
            n_layers: u32::try_from(self.int("material", "n_layers"))
                .map_err(|_| CliError::Config("n_layers must be a positive integer".into()))?,
        };
        m.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(m)
    }

    pub fn geometry(&self) -> Result<Geometry> {
        let g = Geometry {
            n1: self.float("geometry", "n1"),
            n2: self.float("geometry", "n2"),
            theta_1p: self.float("geometry", "theta_1p_deg"),
            theta_1i: self.float("geometry", "theta_1i_deg"),
            omega_p: self.float("geometry", "pump_wavelength_um"),
            i_p: self.float("geometry", "I_p_GW_cm2"),
        };
        g.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(g)
    }

    pub fn detection(&self) -> Result<DetectionGeometry> {
        let d = DetectionGeometry {
            l_x: self.float("detection", "L_x_cm"),
            l_y: self.float("detection", "L_y_cm"),
            delta_omega: self.float("detection", "delta_omega_THz"),
            a_d: self.float("detection", "A_d_cm2"),
            t: self.float("detection", "T_K"),
        };
        d.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(d)
    }
}

/// Accepts `section.key` or a bare `key` that is unique across sections.
fn resolve_override(name: &str) -> Result<&'static KeySpec> {
    if let Some((section, key)) = name.split_once('.') {
        return lookup(section, key).ok_or_else(|| CliError::Config(format!("unknown key `{name}`")));
    }
    let matches: Vec<&KeySpec> = SCHEMA.iter().filter(|s| s.key == name).collect();
    match matches.as_slice() {
        [one] => Ok(one),
        [] => Err(CliError::Config(format!("unknown key `{name}`"))),
        many => Err(CliError::Config(format!(
            "key `{name}` is ambiguous; use one of {}",
            many.iter().map(|s| format!("{}.{}", s.section, s.key)).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn check_value(s: &KeySpec, raw: &str) -> Result<()> {
    let bad = |what: &str| CliError::Config(format!("[{}] {} = `{raw}`: expected {what}", s.section, s.key));
    match s.kind {
        Float(_) => raw.parse::<f64>().ok().filter(|v| v.is_finite()).map(|_| ()).ok_or_else(|| bad("a number")),
        FloatOr(_, words) => {
            if words.contains(&raw) || raw.parse::<f64>().is_ok_and(f64::is_finite) {
                Ok(())
            } else {
                Err(bad(&format!("a number or one of {words:?}")))
            }
        }
        Int => raw.parse::<i64>().map(|_| ()).map_err(|_| bad("an integer")),
        Choice(words) => {
            if words.contains(&raw) {
                Ok(())
            } else {
                Err(bad(&format!("one of {words:?}")))
            }
        }
    }
}
