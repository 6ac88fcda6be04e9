//! Total infidelity of one operating point, `𝒫_tot = 4ζ + 𝒫′ + N`, and the
//! parameter sweeps built on it.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::consts::{HBAR, K_B};
use crate::dipole_force::{detuning_for_force, force_profile, is_weak_coupling, scattering_report, LaserConfig, LaserMode};
use crate::error::{ensure, invalid, Result};
use crate::phase_engine::{gate_time_for_angle, ForceDirection, PushGate};
use crate::stability::{geometry_offset, intensity_noise, omega_sweet, speed_constraints, sweet_spot};
use crate::thermal_nonuniform::{
    fidelity_nonuniform_full, fidelity_sw_closed, fidelity_tw_closed, lamb_dicke, moments_quadrature,
    moments_sw_closed, moments_tw_series, ForceProfile, PositionDistribution,
};
use crate::trap_dynamics::{frequency_correction, gaussian_adiabaticity, ForcePulse, IonSpecies, TrapConfig};

/// `ωτ` used when the detuning is left free.
pub const AUTO_OMEGA_TAU: f64 = 5.0;
/// Sloshing amplitude above which the adiabatic expansion is not trusted.
pub const MAX_ADIABATICITY: f64 = 0.05;
/// A single contribution this large makes the additive budget meaningless.
pub const LARGE_CONTRIBUTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thermal {
    /// `k_BT = ħΓ/2`.
    Doppler,
    /// `k_BT = ħω`, i.e. `⟨n⟩ ≈ 1`.
    MeanN1,
    Kelvin(f64),
}

impl Thermal {
    pub fn kt_over_hw(&self, species: &IonSpecies, trap: &TrapConfig) -> f64 {
        match *self {
            Thermal::Doppler => species.linewidth / (2.0 * trap.omega),
            Thermal::MeanN1 => 1.0,
            Thermal::Kelvin(t) => K_B * t / (HBAR * trap.omega),
        }
    }
}

/// Conditional phase of the full echo sequence, `2θ0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateTarget {
    Pi,
    HalfPi,
}

impl GateTarget {
    /// Phase per pulse, `θ0`.
    pub fn theta0(self) -> f64 {
        match self {
            GateTarget::Pi => PI / 2.0,
            GateTarget::HalfPi => PI / 4.0,
        }
    }
}

/// Laser as configured; `detuning: None` picks the detuning that gives
/// `ωτ = 5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserSetup {
    pub power: f64,
    pub waist: f64,
    pub mode: LaserMode,
    pub detuning: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub species: IonSpecies,
    pub trap: TrapConfig,
    pub laser: LaserSetup,
    pub thermal: Thermal,
    /// Bit-flip probability per π pulse.
    pub zeta: f64,
    pub target: GateTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Validity {
    /// Peak push within `w/4` (travelling) or `λ/10` (standing).
    pub displacement: bool,
    /// Travelling-wave moment series used inside `r ≤ 0.3`.
    pub series: bool,
    /// Sloshing amplitude below `MAX_ADIABATICITY`.
    pub adiabatic: bool,
    /// `|Ω0| ≤ |Δ|/10`.
    pub weak_coupling: bool,
    /// Every contribution below `LARGE_CONTRIBUTION`.
    pub small_contributions: bool,
    /// Informational: thermal spread inside the Lamb-Dicke regime.
    pub lamb_dicke: bool,
}

impl Validity {
    /// Names of the failed checks that make the result untrustworthy.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.displacement {
            v.push("displacement");
        }
        if !self.series {
            v.push("series");
        }
        if !self.adiabatic {
            v.push("adiabatic");
        }
        if !self.weak_coupling {
            v.push("weak_coupling");
        }
        v
    }

    pub fn warnings(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.small_contributions {
            v.push("large_contribution");
        }
        v
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// `ok`, or the violations and warnings joined by `;`.
    pub fn label(&self) -> String {
        let mut all = self.violations();
        all.extend(self.warnings());
        if all.is_empty() {
            return String::from("ok");
        }
        all.join(";")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub epsilon: f64,
    /// m
    pub a: f64,
    pub xi: f64,
    /// rad/s
    pub detuning: f64,
    /// s
    pub tau: f64,
    /// `2τ`, s.
    pub gate_time: f64,
    pub omega_tau: f64,
    pub kt_over_hw: f64,
    /// Photons per ion over both pulses.
    pub photons: f64,
    /// `𝒫′` from the closed form appropriate to the laser geometry.
    pub nonuniform: f64,
    /// `𝒫′` from the full fourth-order expression with exact moments.
    pub nonuniform_full: f64,
    /// `4ζ`
    pub pulse_error: f64,
    pub total: f64,
    /// `1 − (1 − 4ζ)(1 − 𝒫′)e^{−N}`.
    pub total_product: f64,
    /// `aξ/d`
    pub displacement_over_d: f64,
    pub validity: Validity,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.species.validate()?;
        self.trap.validate()?;
        ensure((0.0..=0.25).contains(&self.zeta), "zeta", "must lie in [0, 1/4]")?;
        ensure(self.laser.power > 0.0, "power", "must be positive")?;
        ensure(self.laser.waist > 0.0, "waist", "must be positive")?;
        if let Thermal::Kelvin(t) = self.thermal {
            ensure(t >= 0.0 && t.is_finite(), "temperature", "must be non-negative")?;
        }
        frequency_correction(self.trap.coulomb_parameter(&self.species))?;
        Ok(())
    }

    /// Laser with a concrete detuning, and the pulse it drives.
    pub fn resolve(&self) -> Result<(LaserConfig, ForcePulse)> {
        self.validate()?;
        let eps = self.trap.coulomb_parameter(&self.species);
        let theta0 = self.target.theta0();
        let omega = self.trap.omega;
        let base = LaserConfig { power: self.laser.power, waist: self.laser.waist, detuning: 1.0, mode: self.laser.mode };
        match self.laser.detuning {
            Some(detuning) => {
                let laser = LaserConfig { detuning, ..base };
                laser.validate()?;
                let xi = force_profile(&self.species, &self.trap, &laser, 0.0).abs();
                let tau = gate_time_for_angle(theta0, eps, omega, xi)?;
                Ok((laser, ForcePulse { xi, tau }))
            }
            None => {
                let tau = AUTO_OMEGA_TAU / omega;
                let xi = (theta0 / ((PI / 8.0).sqrt() * eps * AUTO_OMEGA_TAU)).sqrt();
                let detuning = detuning_for_force(&self.species, &self.trap, &base, xi)?;
                Ok((LaserConfig { detuning, ..base }, ForcePulse { xi, tau }))
            }
        }
    }

    pub fn push_gate(&self) -> Result<(LaserConfig, PushGate)> {
        let (laser, pulse) = self.resolve()?;
        let gate = PushGate::new(self.species, self.trap, pulse, ForceDirection::Same, 0.0, 0.0)?;
        Ok((laser, gate))
    }

    pub fn evaluate(&self) -> Result<Evaluation> {
        let (laser, gate) = self.push_gate()?;
        let pulse = gate.pulse;
        let species = &self.species;
        let eps = gate.epsilon();
        let a = gate.a();
        let kappa = gate.a_over_d();
        let t = self.thermal.kt_over_hw(species, &self.trap);
        let theta0 = self.target.theta0();

        let photons = scattering_report(species, &laser, &pulse).photons;
        let dist = PositionDistribution::thermal(species, &self.trap, t)?;
        let profile = ForceProfile::from_laser(species, &laser, pulse.xi)?;
        let (nonuniform, nonuniform_full, series_ok) = match laser.mode {
            LaserMode::Travelling { x0 } => {
                let series = moments_tw_series(&profile, &dist)?;
                let closed = 1.0 - fidelity_tw_closed(theta0, kappa, a / laser.waist, t, 2.0 * x0 / laser.waist);
                let m = moments_quadrature(&profile, &dist)?;
                let full = 1.0 - fidelity_nonuniform_full(theta0, kappa, t, pulse.xi, &m);
                (closed, full, series.valid)
            }
            LaserMode::Standing { kz0 } => {
                let m = moments_sw_closed(&profile, &dist)?;
                let full = 1.0 - fidelity_nonuniform_full(theta0, kappa, t, pulse.xi, &m);
                let quarter = ((kz0 - PI / 4.0) / (PI / 2.0)).round() * (PI / 2.0) + PI / 4.0;
                let closed = if (kz0 - quarter).abs() < 1e-12 {
                    1.0 - fidelity_sw_closed(theta0, species.wavenumber() * a, t)
                } else {
                    full
                };
                (closed, full, true)
            }
        };
        let pulse_error = 4.0 * self.zeta;
        let total = pulse_error + nonuniform + photons;
        let total_product = 1.0 - (1.0 - pulse_error) * (1.0 - nonuniform) * (-photons).exp();

        let speed = speed_constraints(&gate, &laser)?;
        let validity = Validity {
            displacement: speed.within_limit,
            series: series_ok,
            adiabatic: gaussian_adiabaticity(gate.omega_tau()) <= MAX_ADIABATICITY,
            weak_coupling: is_weak_coupling(species, &laser),
            small_contributions: [pulse_error, nonuniform, photons].iter().all(|&c| c < LARGE_CONTRIBUTION),
            lamb_dicke: lamb_dicke(species.wavenumber() * a, t).inside,
        };
        Ok(Evaluation {
            epsilon: eps,
            a,
            xi: pulse.xi,
            detuning: laser.detuning,
            tau: pulse.tau,
            gate_time: 2.0 * pulse.tau,
            omega_tau: gate.omega_tau(),
            kt_over_hw: t,
            photons,
            nonuniform,
            nonuniform_full,
            pulse_error,
            total,
            total_product,
            displacement_over_d: speed.displacement_over_d,
            validity,
        })
    }
}

/// Sweepable parameters, in the units of the config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// `ω/2π`, Hz.
    Omega,
    /// Trap separation, μm.
    D,
    /// Laser power, mW.
    P,
    /// Waist, μm.
    W,
    /// Temperature, μK.
    T,
    /// `Δ/2π`, Hz.
    Delta,
    /// Beam offset as a fraction of `w`.
    X0,
    /// Standing-wave phase `kz0`, rad.
    Z0,
}

impl SweepParam {
    pub const ALL: [SweepParam; 8] = [
        SweepParam::Omega,
        SweepParam::D,
        SweepParam::P,
        SweepParam::W,
        SweepParam::T,
        SweepParam::Delta,
        SweepParam::X0,
        SweepParam::Z0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Omega => "omega",
            SweepParam::D => "d",
            SweepParam::P => "P",
            SweepParam::W => "w",
            SweepParam::T => "T",
            SweepParam::Delta => "Delta",
            SweepParam::X0 => "x0",
            SweepParam::Z0 => "z0",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Copy of `base` with this parameter set to `value`.
    pub fn apply(self, base: &Scenario, value: f64) -> Result<Scenario> {
        let mut s = *base;
        match self {
            SweepParam::Omega => s.trap.omega = 2.0 * PI * value,
            SweepParam::D => s.trap.separation = value * 1e-6,
            SweepParam::P => s.laser.power = value * 1e-3,
            SweepParam::W => {
                // Keep the travelling-wave offset at the same fraction of w.
                if let LaserMode::Travelling { x0 } = s.laser.mode {
                    s.laser.mode = LaserMode::Travelling { x0: x0 / s.laser.waist * value * 1e-6 };
                }
                s.laser.waist = value * 1e-6;
            }
            SweepParam::T => s.thermal = Thermal::Kelvin(value * 1e-6),
            SweepParam::Delta => s.laser.detuning = Some(2.0 * PI * value),
            SweepParam::X0 => match s.laser.mode {
                LaserMode::Travelling { .. } => s.laser.mode = LaserMode::Travelling { x0: value * s.laser.waist },
                LaserMode::Standing { .. } => return Err(invalid("x0", "applies to the travelling wave")),
            },
            SweepParam::Z0 => match s.laser.mode {
                LaserMode::Standing { .. } => s.laser.mode = LaserMode::Standing { kz0: value },
                LaserMode::Travelling { .. } => return Err(invalid("z0", "applies to the standing wave")),
            },
        }
        Ok(s)
    }
}

/// Strictly increasing grid of `points` values from `min` to `max`.
pub fn grid(min: f64, max: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    ensure(points >= 1, "points", "must be at least 1")?;
    ensure(min.is_finite() && max.is_finite(), "range", "must be finite")?;
    if log {
        ensure(min > 0.0, "min", "log grid needs a positive range")?;
    }
    if points == 1 {
        return Ok(alloc::vec![min]);
    }
    ensure(max > min, "max", "must exceed min")?;
    let n = (points - 1) as f64;
    let mut values: Vec<f64> = (0..points)
        .map(|i| {
            let f = i as f64 / n;
            if log {
                (min.ln() + f * (max.ln() - min.ln())).exp()
            } else {
                min + f * (max - min)
            }
        })
        .collect();
    values[0] = min;
    values[points - 1] = max;
    ensure(values.windows(2).all(|w| w[1] > w[0]), "points", "too many points for the range")?;
    Ok(values)
}

/// Sequential sweep; the CLI runs the same per-point evaluation in parallel.
pub fn sweep(base: &Scenario, param: SweepParam, values: &[f64]) -> Vec<Result<Evaluation>> {
    values.iter().map(|&v| param.apply(base, v).and_then(|s| s.evaluate())).collect()
}

/// Sweet-spot operating point for one trap separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweetSpotRow {
    /// m
    pub separation: f64,
    /// Geometric offset of the force potential, m.
    pub offset: f64,
    /// rad/s
    pub omega_sweet: f64,
    pub evaluation: Evaluation,
    /// `ωτ` below which the push exceeds its limit.
    pub min_omega_tau: f64,
    pub speed_ok: bool,
    /// Intensity-noise infidelity with offsets at the computed sweet spot.
    pub noise_on_spot: f64,
    /// Same with both offsets zero.
    pub noise_off_spot: f64,
}

pub fn sweetspot_row(base: &Scenario, separation: f64, relative_intensity_noise: f64) -> Result<SweetSpotRow> {
    let (laser, _) = base.resolve()?;
    let offset = geometry_offset(&base.species, &laser)?;
    let omega = omega_sweet(&base.species, separation, offset)?;
    let mut s = *base;
    s.trap = TrapConfig { omega, separation };
    let evaluation = s.evaluate()?;
    let (laser, mut gate) = s.push_gate()?;
    let kt = evaluation.kt_over_hw;
    let speed = speed_constraints(&gate, &laser)?;
    let noise_off_spot = intensity_noise(&gate, kt, relative_intensity_noise)?.infidelity;
    let spot = sweet_spot(&gate, kt);
    gate.offset1 = spot.s1;
    gate.offset2 = spot.s2;
    let noise_on_spot = intensity_noise(&gate, kt, relative_intensity_noise)?.infidelity;
    Ok(SweetSpotRow {
        separation,
        offset,
        omega_sweet: omega,
        evaluation,
        min_omega_tau: speed.min_omega_tau,
        speed_ok: gate.omega_tau() >= speed.min_omega_tau,
        noise_on_spot,
        noise_off_spot,
    })
}
