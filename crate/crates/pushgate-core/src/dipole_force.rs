//! Optical dipole force from an off-resonant laser, and the photons it
//! scatters.
//!
//! The light shift is `V = ħ|Ω|²/4Δ`. A travelling wave pushes with the
//! intensity gradient of a Gaussian beam whose centre sits `x0` from the
//! ions; a standing wave pushes with the `sin(2k(z − z0))` gradient of the
//! interference pattern.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::consts::{C_LIGHT, EPSILON_0, HBAR};
use crate::error::{ensure, Result};
use crate::numeric::integrate;
use crate::trap_dynamics::{ForcePulse, IonSpecies, TrapConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LaserMode {
    /// Gaussian beam centred `x0` (m) from the ion along the push axis.
    Travelling { x0: f64 },
    /// Standing wave with node offset given as the phase `k z0` (rad).
    Standing { kz0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserConfig {
    /// W (per beam)
    pub power: f64,
    /// 1/e² intensity radius w, m.
    pub waist: f64,
    /// Δ, rad/s (signed).
    pub detuning: f64,
    pub mode: LaserMode,
}

impl LaserConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.power > 0.0 && self.power.is_finite(), "power", "must be positive")?;
        ensure(self.waist > 0.0 && self.waist.is_finite(), "waist", "must be positive")?;
        ensure(self.detuning != 0.0 && self.detuning.is_finite(), "detuning", "must be non-zero")?;
        match self.mode {
            LaserMode::Travelling { x0 } => {
                ensure(x0 != 0.0 && x0.is_finite(), "x0", "beam centre must be offset from the ion")
            }
            LaserMode::Standing { kz0 } => {
                ensure(kz0.is_finite(), "kz0", "must be finite")?;
                ensure((2.0 * kz0).sin().abs() > 1e-12, "kz0", "ion sits where the standing-wave force vanishes")?;
                ensure(kz0.cos().abs() > 1e-12, "kz0", "ion sits at an intensity maximum")
            }
        }
    }
}

/// Peak single-beam `|Ω0|² = 12ΓP/(ħck³w²)` (rad²/s²).
pub fn rabi_peak_sq(species: &IonSpecies, laser: &LaserConfig) -> f64 {
    let k = species.wavenumber();
    12.0 * species.linewidth * laser.power / (HBAR * C_LIGHT * k.powi(3) * laser.waist * laser.waist)
}

/// `|Ω|²` at transverse position `x` (travelling wave) or axial position
/// `z` (standing wave) relative to the ion's equilibrium.
pub fn rabi_sq_at(species: &IonSpecies, laser: &LaserConfig, pos: f64) -> f64 {
    let omega0 = rabi_peak_sq(species, laser);
    let w = laser.waist;
    match laser.mode {
        LaserMode::Travelling { x0 } => omega0 * (-2.0 * ((pos - x0) / w).powi(2)).exp(),
        LaserMode::Standing { kz0 } => {
            let k = species.wavenumber();
            4.0 * omega0 * (k * pos - kz0).sin().powi(2)
        }
    }
}

/// Light-shift potential `V = ħ|Ω|²/4Δ` (J).
pub fn light_shift(species: &IonSpecies, laser: &LaserConfig, pos: f64) -> f64 {
    HBAR * rabi_sq_at(species, laser, pos) / (4.0 * laser.detuning)
}

/// Dimensionless force `ξ(x) = F(x) a/ħω` at displacement `pos`.
pub fn force_profile(species: &IonSpecies, trap: &TrapConfig, laser: &LaserConfig, pos: f64) -> f64 {
    let a = species.oscillator_length(trap.omega);
    let omega0 = rabi_peak_sq(species, laser);
    let (w, delta, om) = (laser.waist, laser.detuning, trap.omega);
    match laser.mode {
        LaserMode::Travelling { x0 } => {
            let u = pos - x0;
            a * u * omega0 * (-2.0 * (u / w).powi(2)).exp() / (om * delta * w * w)
        }
        LaserMode::Standing { kz0 } => {
            let k = species.wavenumber();
            -a * k * omega0 * (2.0 * (k * pos - kz0)).sin() / (om * delta)
        }
    }
}

/// The adiabatic elimination behind the light shift needs `|Ω0| ≤ |Δ|/10`.
pub fn is_weak_coupling(species: &IonSpecies, laser: &LaserConfig) -> bool {
    rabi_peak_sq(species, laser).sqrt() <= laser.detuning.abs() / 10.0
}

pub fn check_weak_coupling(species: &IonSpecies, laser: &LaserConfig) -> Result<()> {
    ensure(is_weak_coupling(species, laser), "detuning", "weak coupling requires |Ω0| ≤ |Δ|/10")
}

/// `ξ` at the ion's equilibrium position.
pub fn force_amplitude(species: &IonSpecies, trap: &TrapConfig, laser: &LaserConfig) -> Result<f64> {
    species.validate()?;
    trap.validate()?;
    laser.validate()?;
    check_weak_coupling(species, laser)?;
    Ok(force_profile(species, trap, laser, 0.0))
}

/// Detuning that produces force amplitude `|ξ|` (positive, blue detuned).
/// Not checked for weak coupling; see [`is_weak_coupling`].
pub fn detuning_for_force(species: &IonSpecies, trap: &TrapConfig, laser: &LaserConfig, xi: f64) -> Result<f64> {
    ensure(xi != 0.0 && xi.is_finite(), "xi", "must be non-zero")?;
    species.validate()?;
    trap.validate()?;
    let probe = LaserConfig { detuning: 1.0, ..*laser };
    probe.validate()?;
    Ok((force_profile(species, trap, &probe, 0.0) / xi).abs())
}

/// Scattering rate `R = (Γ/4)|Ω|²/Δ²` at the equilibrium position.
pub fn scattering_rate(species: &IonSpecies, laser: &LaserConfig) -> f64 {
    species.linewidth / 4.0 * rabi_sq_at(species, laser, 0.0) / (laser.detuning * laser.detuning)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringReport {
    /// Peak rate at the equilibrium position, 1/s.
    pub peak_rate: f64,
    /// Photons scattered per ion over both pulses.
    pub photons: f64,
    /// `e^{−N}`.
    pub fidelity: f64,
}

/// Photons scattered during the two pulses of the echo sequence,
/// `N = 2 ∫ R dt = 2 R_peak τ √π` for a static ion.
pub fn photon_count(species: &IonSpecies, laser: &LaserConfig, pulse: &ForcePulse) -> Result<ScatteringReport> {
    species.validate()?;
    laser.validate()?;
    pulse.validate()?;
    check_weak_coupling(species, laser)?;
    Ok(scattering_report(species, laser, pulse))
}

/// [`photon_count`] without input checks.
pub fn scattering_report(species: &IonSpecies, laser: &LaserConfig, pulse: &ForcePulse) -> ScatteringReport {
    let peak_rate = scattering_rate(species, laser);
    let photons = 2.0 * peak_rate * pulse.tau * PI.sqrt();
    ScatteringReport { peak_rate, photons, fidelity: scattering_fidelity(photons) }
}

/// Same count, integrating the rate along the pushed ion's adiabatic path
/// `x̄(t) = a f(t)` instead of holding the ion at equilibrium.
pub fn photon_count_quadrature(
    species: &IonSpecies,
    trap: &TrapConfig,
    laser: &LaserConfig,
    pulse: &ForcePulse,
) -> Result<f64> {
    species.validate()?;
    trap.validate()?;
    laser.validate()?;
    pulse.validate()?;
    let a = species.oscillator_length(trap.omega);
    let (t0, t1) = pulse.window();
    let g = species.linewidth / (4.0 * laser.detuning * laser.detuning);
    let envelope = |t: f64| (-(t / pulse.tau).powi(2)).exp();
    let rate = |t: f64| g * envelope(t) * rabi_sq_at(species, laser, a * pulse.value(t));
    let q = integrate(rate, t0, t1, 0.0, 1e-12)?;
    Ok(2.0 * q.value)
}

/// Closed-form photon count for a `2θ = π` gate, independent of Δ:
/// travelling wave `C (w⁶/x0²)(d³ω⁴/P) e^{2(x0/w)²}`, standing wave
/// `C w²(d³ω⁴/P)/cos²(kz0)`.
pub fn photon_count_closed(species: &IonSpecies, trap: &TrapConfig, laser: &LaserConfig) -> Result<f64> {
    species.validate()?;
    trap.validate()?;
    laser.validate()?;
    let base = (EPSILON_0 * C_LIGHT / (species.charge * species.charge)) * species.mass * species.mass;
    let lam = species.wavelength;
    let w = laser.waist;
    let scale = trap.separation.powi(3) * trap.omega.powi(4) / laser.power;
    Ok(match laser.mode {
        LaserMode::Travelling { x0 } => {
            let c = PI.powi(5) * 2f64.sqrt() / 3.0 * base / lam.powi(3);
            c * w.powi(6) / (x0 * x0) * scale * (2.0 * (x0 / w).powi(2)).exp()
        }
        LaserMode::Standing { kz0 } => {
            let c = PI.powi(3) * 2f64.sqrt() / 12.0 * base / lam;
            c * w * w * scale / kz0.cos().powi(2)
        }
    })
}

pub fn scattering_fidelity(photons: f64) -> f64 {
    (-photons).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_engine::gate_time_for_angle;

    fn setup(mode: LaserMode) -> (IonSpecies, TrapConfig, LaserConfig) {
        (
            IonSpecies::calcium40(),
            TrapConfig { omega: 2.0 * PI * 1e6, separation: 10e-6 },
            LaserConfig { power: 0.1, waist: 2e-6, detuning: 2.0 * PI * 5e12, mode },
        )
    }

    #[test]
    fn force_is_minus_light_shift_gradient() {
        for mode in [LaserMode::Travelling { x0: 1e-6 }, LaserMode::Standing { kz0: 0.6 }] {
            let (sp, trap, laser) = setup(mode);
            let h = 1e-11;
            let grad = (light_shift(&sp, &laser, h) - light_shift(&sp, &laser, -h)) / (2.0 * h);
            let a = sp.oscillator_length(trap.omega);
            let xi = force_amplitude(&sp, &trap, &laser).unwrap();
            assert!((xi + grad * a / (HBAR * trap.omega)).abs() < 1e-6 * xi.abs(), "{mode:?}");
        }
    }

    #[test]
    fn closed_count_matches_rate_times_duration() {
        for mode in [LaserMode::Travelling { x0: 1e-6 }, LaserMode::Standing { kz0: PI / 4.0 }] {
            let (sp, trap, laser) = setup(mode);
            let xi = force_amplitude(&sp, &trap, &laser).unwrap();
            let tau = gate_time_for_angle(PI / 2.0, trap.coulomb_parameter(&sp), trap.omega, xi).unwrap();
            let n = photon_count(&sp, &laser, &ForcePulse { xi, tau }).unwrap().photons;
            let closed = photon_count_closed(&sp, &trap, &laser).unwrap();
            assert!((n / closed - 1.0).abs() < 1e-12, "{mode:?}: {n} vs {closed}");
        }
    }

    #[test]
    fn detuning_inverts_force() {
        let (sp, trap, laser) = setup(LaserMode::Standing { kz0: PI / 4.0 });
        let delta = detuning_for_force(&sp, &trap, &laser, 0.37).unwrap();
        let xi = force_amplitude(&sp, &trap, &LaserConfig { detuning: delta, ..laser }).unwrap();
        assert!((xi - 0.37).abs() < 1e-14);
    }

    #[test]
    fn invalid_geometry_rejected() {
        let (sp, trap, laser) = setup(LaserMode::Standing { kz0: 0.0 });
        assert!(force_amplitude(&sp, &trap, &laser).is_err());
        let bad = LaserConfig { power: -1.0, ..laser };
        assert!(bad.validate().is_err());
        let strong = LaserConfig { detuning: 2.0 * PI * 1e8, mode: LaserMode::Standing { kz0: 0.6 }, ..laser };
        assert!(force_amplitude(&sp, &trap, &strong).is_err());
    }
}
