//! Monte Carlo checks of the closed-form thermal results.
//!
//! Every sample is a thermal draw pushed through the full phase model and
//! the exact gate algebra; the closed forms never enter a sample. Samples
//! are pure functions of `(seed, index)`, so callers may evaluate them in
//! any order or in parallel and reduce with [`OracleSetup::report`].

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{ensure, Result};
use crate::gate_algebra::{echo_fidelity_perfect, fidelity_no_echo, DiagonalGate};
use crate::phase_engine::{
    fidelity_echo_closed, fidelity_no_echo_closed, fidelity_no_echo_thermal, gate_angle_closed, PushGate,
};
use crate::sampling::ThermalEnsemble;
use crate::scenario::Scenario;
use crate::thermal_nonuniform::{
    fidelity_nonuniform_full, moments_quadrature, ForceProfile, PositionDistribution, XiMoments,
};

/// Fewer samples than this and z-scores mean little.
pub const MIN_SAMPLES: usize = 100;
/// The no-echo exact average is pinned only while rare large excursions
/// cannot push the worst state away from the |01>, |10> pair.
const NO_ECHO_PIN_LIMIT: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

/// Mean and standard error, summed in slice order.
pub fn estimate(values: &[f64]) -> Estimate {
    let n = values.len();
    if n == 0 {
        return Estimate { mean: f64::NAN, std_err: f64::NAN, samples: 0 };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let std_err = if n > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        f64::INFINITY
    };
    Estimate { mean, std_err, samples: n }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub name: &'static str,
    pub closed: f64,
    pub estimate: Estimate,
    pub z: f64,
    /// Pinned rows are expected to agree within the statistical contract.
    pub pinned: bool,
}

impl Comparison {
    pub fn new(name: &'static str, closed: f64, estimate: Estimate, pinned: bool) -> Self {
        let diff = estimate.mean - closed;
        let z = if estimate.std_err > 0.0 {
            diff / estimate.std_err
        } else if diff.abs() <= 1e-12 * closed.abs().max(1e-300) {
            0.0
        } else {
            f64::INFINITY
        };
        Self { name, closed, estimate, z, pinned }
    }
}

/// Per-sample quantities. Infidelities rather than fidelities keep
/// precision when they are tiny.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub echo_infidelity: f64,
    pub no_echo_infidelity: f64,
    pub gate_angle: f64,
    /// Zero when no force profile is attached.
    pub nonuniform_infidelity: f64,
    pub xi2: f64,
    pub xi4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Nonuniform {
    profile: ForceProfile,
    dist: PositionDistribution,
    moments: XiMoments,
    mean_angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSetup {
    gate: PushGate,
    mean_gate: DiagonalGate,
    ensemble: ThermalEnsemble,
    nonuniform: Option<Nonuniform>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub samples: usize,
    /// `samples ≥ MIN_SAMPLES`.
    pub sufficient: bool,
    pub comparisons: Vec<Comparison>,
}

impl OracleReport {
    /// Every pinned row within `z_max` standard errors.
    pub fn passes(&self, z_max: f64) -> bool {
        self.comparisons.iter().filter(|c| c.pinned).all(|c| c.z.abs() <= z_max)
    }
}

impl OracleSetup {
    /// `profile` adds position sampling for the non-uniform force; its
    /// `ξ0` should equal the gate's `ξ`.
    pub fn new(gate: PushGate, kt_over_hw: f64, seed: u64, profile: Option<ForceProfile>) -> Result<Self> {
        let ensemble = ThermalEnsemble::new(kt_over_hw, seed)?;
        let nonuniform = match profile {
            Some(profile) => {
                ensure((profile.xi0() - gate.pulse.xi).abs() <= 1e-12 * gate.pulse.xi.abs(), "xi0", "must match the pulse")?;
                let dist = PositionDistribution::thermal(&gate.species, &gate.trap, kt_over_hw)?;
                let moments = moments_quadrature(&profile, &dist)?;
                let k2 = gate.a_over_d().powi(2);
                let scale = gate.theta() / (gate.pulse.xi * gate.pulse.xi);
                let mean_angle =
                    scale * (moments.m2 + k2 * (moments.m4 / 2f64.sqrt() + 12.0 * kt_over_hw * moments.m2));
                Some(Nonuniform { profile, dist, moments, mean_angle })
            }
            None => None,
        };
        Ok(Self { gate, mean_gate: gate.mean_phase_set(kt_over_hw).gate(), ensemble, nonuniform })
    }

    /// Oracle for a scenario, with its laser's force profile.
    pub fn from_scenario(scenario: &Scenario, seed: u64) -> Result<Self> {
        let (laser, gate) = scenario.push_gate()?;
        let kt = scenario.thermal.kt_over_hw(&scenario.species, &scenario.trap);
        let profile = ForceProfile::from_laser(&scenario.species, &laser, gate.pulse.xi)?;
        Self::new(gate, kt, seed, Some(profile))
    }

    pub fn sample(&self, index: u64) -> OracleSample {
        let draw = self.ensemble.sample(index);
        let motion = draw.motion(self.gate.trap.omega);
        let g = self.gate.phase_set(&motion).gate();
        let mut out = OracleSample {
            echo_infidelity: 1.0 - echo_fidelity_perfect(&g, &self.mean_gate),
            no_echo_infidelity: 1.0 - fidelity_no_echo(&g, &self.mean_gate),
            gate_angle: g.gate_angle(),
            nonuniform_infidelity: 0.0,
            xi2: 0.0,
            xi4: 0.0,
        };
        if let Some(nu) = &self.nonuniform {
            let xi = nu.profile.at(nu.dist.sigma * draw.position);
            let mut local = self.gate;
            local.pulse.xi = xi;
            let delta = local.gate_angle(&motion) - nu.mean_angle;
            out.nonuniform_infidelity = (delta / 2.0).sin().powi(2);
            out.xi2 = xi * xi;
            out.xi4 = out.xi2 * out.xi2;
        }
        out
    }

    /// Samples `0..n` in order.
    pub fn run(&self, n: usize) -> Vec<OracleSample> {
        (0..n as u64).map(|i| self.sample(i)).collect()
    }

    pub fn report(&self, samples: &[OracleSample]) -> OracleReport {
        let pick = |f: fn(&OracleSample) -> f64| estimate(&samples.iter().map(f).collect::<Vec<_>>());
        let gate = &self.gate;
        let theta = gate.theta();
        let kappa = gate.a_over_d();
        let xi = gate.pulse.xi;
        let t = self.ensemble.kt_over_hw;

        let echo = 1.0 - fidelity_echo_closed(theta, kappa, t);
        let printed = 1.0 - fidelity_no_echo_closed(theta, kappa, xi, t);
        let exact = 1.0 - fidelity_no_echo_thermal(theta, kappa, xi, t);
        let y = 6.0 * 2f64.sqrt() * theta * kappa * t / xi;
        let no_echo = pick(|s| s.no_echo_infidelity);
        let mut comparisons = alloc::vec![
            Comparison::new("echo_infidelity", echo, pick(|s| s.echo_infidelity), true),
            Comparison::new("no_echo_infidelity_printed", printed, no_echo, false),
            Comparison::new("no_echo_infidelity_exact", exact, no_echo, y <= NO_ECHO_PIN_LIMIT),
            Comparison::new("mean_gate_angle", gate_angle_closed(theta, kappa, xi, 2.0 * t), pick(|s| s.gate_angle), true),
        ];
        if let Some(nu) = &self.nonuniform {
            let full = 1.0 - fidelity_nonuniform_full(theta, kappa, t, xi, &nu.moments);
            comparisons.push(Comparison::new("nonuniform_infidelity", full, pick(|s| s.nonuniform_infidelity), true));
            comparisons.push(Comparison::new("xi2_mean", nu.moments.m2, pick(|s| s.xi2), true));
            comparisons.push(Comparison::new("xi4_mean", nu.moments.m4, pick(|s| s.xi4), true));
        }
        OracleReport { samples: samples.len(), sufficient: samples.len() >= MIN_SAMPLES, comparisons }
    }
}
