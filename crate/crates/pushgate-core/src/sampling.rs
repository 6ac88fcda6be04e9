//! Thermal Monte Carlo draws.
//!
//! Each sample owns its generator, `ChaCha8` seeded from the run seed with
//! the sample index as stream number, so sample `i` is the same no matter
//! which worker draws it or in what order.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::consts::HBAR;
use crate::error::{ensure, Result};
use crate::trap_dynamics::{MotionState, Oscillation};

/// Boltzmann ensemble of the two ions' free oscillation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalEnsemble {
    pub kt_over_hw: f64,
    pub seed: u64,
}

/// One draw: energies in units of `ħω`, oscillation phases, and a standard
/// normal for the position (scaled by `σ` where needed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSample {
    pub energy1: f64,
    pub energy2: f64,
    pub phase1: f64,
    pub phase2: f64,
    pub position: f64,
}

impl ThermalEnsemble {
    pub fn new(kt_over_hw: f64, seed: u64) -> Result<Self> {
        ensure(kt_over_hw >= 0.0 && kt_over_hw.is_finite(), "kt_over_hw", "must be non-negative")?;
        Ok(Self { kt_over_hw, seed })
    }

    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    pub fn sample(&self, index: u64) -> ThermalSample {
        let mut rng = self.rng(index);
        let t = self.kt_over_hw;
        // 1 − U lies in (0, 1], so the log is finite.
        let mut energy = || -t * (1.0 - rng.gen::<f64>()).ln();
        let energy1 = energy();
        let energy2 = energy();
        let phase1 = 2.0 * PI * rng.gen::<f64>();
        let phase2 = 2.0 * PI * rng.gen::<f64>();
        let position = rng.sample(StandardNormal);
        ThermalSample { energy1, energy2, phase1, phase2, position }
    }
}

impl ThermalSample {
    pub fn motion(&self, omega: f64) -> MotionState {
        let hw = HBAR * omega;
        MotionState {
            ion1: Oscillation { energy: self.energy1 * hw, phase: self.phase1 },
            ion2: Oscillation { energy: self.energy2 * hw, phase: self.phase2 },
        }
    }
}
