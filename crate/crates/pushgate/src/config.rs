//! Flat `key = value` scenario files.
//!
//! ```text
//! # 100 mW travelling-wave point
//! trap.omega_hz = 1e6
//! trap.d_um = 10
//! laser.mode = travelling
//! thermal.preset = doppler
//! ```
//!
//! Every key is optional; missing keys take the ⁴⁰Ca⁺ defaults listed in
//! [`Config::default`]. Unknown or repeated keys are errors.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::path::Path;

use pushgate_core::consts::{ATOMIC_MASS, E_CHARGE};
use pushgate_core::dipole_force::{LaserConfig, LaserMode};
use pushgate_core::scenario::{GateTarget, LaserSetup, Scenario, Thermal};
use pushgate_core::trap_dynamics::{IonSpecies, TrapConfig};

use crate::error::CliError;

/// `thermal.preset` and `thermal.T_uK` are alternatives.
pub const KEYS: [&str; 16] = [
    "ion.mass_u",
    "ion.charge_e",
    "ion.lambda_nm",
    "ion.gamma_hz",
    "trap.omega_hz",
    "trap.d_um",
    "laser.mode",
    "laser.power_mw",
    "laser.waist_um",
    "laser.kz0_rad",
    "laser.x0_frac_of_w",
    "laser.detuning_hz",
    "thermal.preset",
    "thermal.T_uK",
    "pulses.zeta",
    "sequence.target",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Travelling,
    Standing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub mass_u: f64,
    pub charge_e: f64,
    pub lambda_nm: f64,
    /// `Γ/2π`
    pub gamma_hz: f64,
    /// `ω/2π`
    pub omega_hz: f64,
    pub d_um: f64,
    pub mode: Mode,
    pub power_mw: f64,
    pub waist_um: f64,
    pub kz0_rad: f64,
    pub x0_frac_of_w: f64,
    /// `Δ/2π`; `None` is `auto`.
    pub detuning_hz: Option<f64>,
    pub thermal: Thermal,
    pub zeta: f64,
    pub target: GateTarget,
}

impl Default for Config {
    /// Travelling wave, 100 mW, w = 2 μm, 1 MHz, d = 10 μm.
    fn default() -> Self {
        Self {
            mass_u: 39.962_590_9,
            charge_e: 1.0,
            lambda_nm: 397.0,
            gamma_hz: 22.42e6,
            omega_hz: 1e6,
            d_um: 10.0,
            mode: Mode::Travelling,
            power_mw: 100.0,
            waist_um: 2.0,
            kz0_rad: PI / 4.0,
            x0_frac_of_w: 0.5,
            detuning_hz: None,
            thermal: Thermal::Doppler,
            zeta: 0.0,
            target: GateTarget::Pi,
        }
    }
}

fn number(value: &str) -> Result<f64, String> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{value}` is not a finite number")),
    }
}

fn positive(value: &str) -> Result<f64, String> {
    let v = number(value)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("`{value}` must be positive"))
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let err = |line: usize, message: String| CliError::Config { origin: origin.to_string(), line, message };
        let mut cfg = Config::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(err(line, format!("expected `key = value`, got `{content}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(line, format!("unknown key `{key}`")));
            }
            if !seen.insert(key.to_string()) {
                return Err(err(line, format!("duplicate key `{key}`")));
            }
            if value.is_empty() {
                return Err(err(line, format!("empty value for `{key}`")));
            }
            cfg.set(key, value).map_err(|m| err(line, format!("{key}: {m}")))?;
        }
        if seen.contains("thermal.preset") && seen.contains("thermal.T_uK") {
            return Err(err(0, "thermal.preset and thermal.T_uK are mutually exclusive".into()));
        }
        cfg.to_scenario().map_err(|e| match e {
            CliError::Config { line, message, .. } => err(line, message),
            other => other,
        })?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "ion.mass_u" => self.mass_u = positive(value)?,
            "ion.charge_e" => self.charge_e = positive(value)?,
            "ion.lambda_nm" => self.lambda_nm = positive(value)?,
            "ion.gamma_hz" => self.gamma_hz = positive(value)?,
            "trap.omega_hz" => self.omega_hz = positive(value)?,
            "trap.d_um" => self.d_um = positive(value)?,
            "laser.mode" => {
                self.mode = match value {
                    "travelling" | "traveling" | "tw" => Mode::Travelling,
                    "standing" | "sw" => Mode::Standing,
                    _ => return Err(format!("`{value}` is not travelling or standing")),
                }
            }
            "laser.power_mw" => self.power_mw = positive(value)?,
            "laser.waist_um" => self.waist_um = positive(value)?,
            "laser.kz0_rad" => self.kz0_rad = number(value)?,
            "laser.x0_frac_of_w" => self.x0_frac_of_w = number(value)?,
            "laser.detuning_hz" => {
                self.detuning_hz = match value {
                    "auto" => None,
                    _ => Some(number(value)?),
                }
            }
            "thermal.preset" => {
                self.thermal = match value {
                    "doppler" => Thermal::Doppler,
                    "n1" => Thermal::MeanN1,
                    _ => return Err(format!("`{value}` is not doppler or n1")),
                }
            }
            "thermal.T_uK" => {
                let t = number(value)?;
                if t < 0.0 {
                    return Err(format!("`{value}` must be non-negative"));
                }
                self.thermal = Thermal::Kelvin(t * 1e-6);
            }
            "pulses.zeta" => self.zeta = number(value)?,
            "sequence.target" => {
                self.target = match value {
                    "pi" => GateTarget::Pi,
                    "pi/2" => GateTarget::HalfPi,
                    _ => return Err(format!("`{value}` is not pi or pi/2")),
                }
            }
            _ => unreachable!("key checked against KEYS"),
        }
        Ok(())
    }

    /// Scenario in SI units. Only the values that are fixed by the file
    /// are checked here; `ε < 2` depends on the trap and is left to the
    /// evaluation so sweeps may start from an unstable base.
    pub fn to_scenario(&self) -> Result<Scenario, CliError> {
        let species = IonSpecies {
            mass: self.mass_u * ATOMIC_MASS,
            charge: self.charge_e * E_CHARGE,
            wavelength: self.lambda_nm * 1e-9,
            linewidth: 2.0 * PI * self.gamma_hz,
        };
        let waist = self.waist_um * 1e-6;
        let mode = match self.mode {
            Mode::Travelling => LaserMode::Travelling { x0: self.x0_frac_of_w * waist },
            Mode::Standing => LaserMode::Standing { kz0: self.kz0_rad },
        };
        let laser = LaserSetup {
            power: self.power_mw * 1e-3,
            waist,
            mode,
            detuning: self.detuning_hz.map(|d| 2.0 * PI * d),
        };
        let scenario = Scenario {
            species,
            trap: TrapConfig { omega: 2.0 * PI * self.omega_hz, separation: self.d_um * 1e-6 },
            laser,
            thermal: self.thermal,
            zeta: self.zeta,
            target: self.target,
        };
        let as_config = |e: pushgate_core::Error| CliError::Config { origin: String::new(), line: 0, message: e.to_string() };
        species.validate().map_err(as_config)?;
        scenario.trap.validate().map_err(as_config)?;
        LaserConfig { power: laser.power, waist, detuning: laser.detuning.unwrap_or(1.0), mode }
            .validate()
            .map_err(as_config)?;
        if !(0.0..=0.25).contains(&self.zeta) {
            return Err(CliError::Config {
                origin: String::new(),
                line: 0,
                message: "pulses.zeta must lie in [0, 0.25]".into(),
            });
        }
        Ok(scenario)
    }
}
