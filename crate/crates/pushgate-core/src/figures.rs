//! Calcium presets for the total-infidelity-versus-trap-frequency figures.
//!
//! Each figure has six curves: trap separations 1, 10 and 100 μm, each at
//! the Doppler temperature and at `k_BT = ħω`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dipole_force::LaserMode;
use crate::error::Result;
use crate::scenario::{grid, Evaluation, GateTarget, LaserSetup, Scenario, Thermal};
use crate::stability::{geometry_offset, omega_sweet};
use crate::trap_dynamics::{IonSpecies, TrapConfig};

pub const SEPARATIONS_UM: [f64; 3] = [1.0, 10.0, 100.0];
pub const DEFAULT_POINTS: usize = 50;
/// `ω/2π` range, Hz.
pub const OMEGA_RANGE_HZ: (f64, f64) = (1e4, 1e9);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    /// Travelling wave, 10 mW, w = 4 μm.
    Fig5,
    /// Standing wave, 10 mW, w = 4 μm.
    Fig6,
    /// Travelling wave, 100 mW, w = 2 μm.
    Fig7,
    /// Standing wave, 100 mW, w = 2 μm.
    Fig8,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    /// m
    pub separation: f64,
    pub thermal: Thermal,
}

impl Curve {
    pub fn label(&self) -> &'static str {
        match self.thermal {
            Thermal::Doppler => "doppler",
            Thermal::MeanN1 => "n1",
            Thermal::Kelvin(_) => "kelvin",
        }
    }
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 4] = [FigurePreset::Fig5, FigurePreset::Fig6, FigurePreset::Fig7, FigurePreset::Fig8];

    pub fn name(self) -> &'static str {
        match self {
            FigurePreset::Fig5 => "fig5",
            FigurePreset::Fig6 => "fig6",
            FigurePreset::Fig7 => "fig7",
            FigurePreset::Fig8 => "fig8",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn laser(self) -> LaserSetup {
        let (power, waist) = match self {
            FigurePreset::Fig5 | FigurePreset::Fig6 => (10e-3, 4e-6),
            FigurePreset::Fig7 | FigurePreset::Fig8 => (100e-3, 2e-6),
        };
        let mode = match self {
            FigurePreset::Fig5 | FigurePreset::Fig7 => LaserMode::Travelling { x0: waist / 2.0 },
            FigurePreset::Fig6 | FigurePreset::Fig8 => LaserMode::Standing { kz0: PI / 4.0 },
        };
        LaserSetup { power, waist, mode, detuning: None }
    }

    pub fn curves(self) -> Vec<Curve> {
        let mut out = Vec::new();
        for d in SEPARATIONS_UM {
            for thermal in [Thermal::Doppler, Thermal::MeanN1] {
                out.push(Curve { separation: d * 1e-6, thermal });
            }
        }
        out
    }

    pub fn scenario(self, curve: &Curve, omega_hz: f64) -> Scenario {
        Scenario {
            species: IonSpecies::calcium40(),
            trap: TrapConfig { omega: 2.0 * PI * omega_hz, separation: curve.separation },
            laser: self.laser(),
            thermal: curve.thermal,
            zeta: 0.0,
            target: GateTarget::Pi,
        }
    }

    /// Every `(curve, ω/2π)` pair in output order.
    pub fn jobs(self, points: usize) -> Result<Vec<(Curve, f64)>> {
        let omegas = grid(OMEGA_RANGE_HZ.0, OMEGA_RANGE_HZ.1, points, true)?;
        let mut out = Vec::new();
        for curve in self.curves() {
            for &w in &omegas {
                out.push((curve, w));
            }
        }
        Ok(out)
    }

    pub fn evaluate(self, curve: &Curve, omega_hz: f64) -> Result<Evaluation> {
        self.scenario(curve, omega_hz).evaluate()
    }

    /// Sweet-spot trap frequency `ω/2π` (Hz) for a separation.
    pub fn sweet_omega_hz(self, separation: f64) -> Result<f64> {
        let species = IonSpecies::calcium40();
        let laser = self.laser();
        let probe = crate::dipole_force::LaserConfig {
            power: laser.power,
            waist: laser.waist,
            detuning: 1.0,
            mode: laser.mode,
        };
        let s = geometry_offset(&species, &probe)?;
        Ok(omega_sweet(&species, separation, s)? / (2.0 * PI))
    }
}
