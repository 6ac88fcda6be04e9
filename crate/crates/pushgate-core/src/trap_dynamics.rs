//! Two ions in a common harmonic well, pushed by a Gaussian force pulse.
//!
//! Internally the motion is solved in oscillator units: positions in
//! `a = √(ħ/mω)` and time in `1/ω`. In these units the pulse-driven
//! equation of motion is `y'' + y = f(s)` with `f(s) = ξ exp(−(s/ωτ)²)`.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::consts::{ATOMIC_MASS, E_CHARGE, EPSILON_0, HBAR, K_B};
use crate::error::{ensure, invalid, Result};
use crate::numeric::{integrate, Dopri5, OdeTolerance};

/// Pulses are integrated over `±WINDOW_TAUS · τ`.
pub const WINDOW_TAUS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonSpecies {
    /// kg
    pub mass: f64,
    /// C
    pub charge: f64,
    /// Wavelength of the cooling/pushing transition, m.
    pub wavelength: f64,
    /// Natural linewidth Γ, rad/s.
    pub linewidth: f64,
}

impl IonSpecies {
    /// ⁴⁰Ca⁺ on the 397 nm line. Γ is chosen so that the Doppler limit
    /// `ħΓ/2k_B` is 538 μK.
    pub fn calcium40() -> Self {
        Self {
            mass: 39.962_590_9 * ATOMIC_MASS,
            charge: E_CHARGE,
            wavelength: 397e-9,
            linewidth: 2.0 * PI * 22.42e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.mass > 0.0 && self.mass.is_finite(), "mass", "must be positive")?;
        ensure(self.charge != 0.0 && self.charge.is_finite(), "charge", "must be non-zero")?;
        ensure(self.wavelength > 0.0 && self.wavelength.is_finite(), "wavelength", "must be positive")?;
        ensure(self.linewidth > 0.0 && self.linewidth.is_finite(), "linewidth", "must be positive")
    }

    /// `a = √(ħ/mω)`.
    pub fn oscillator_length(&self, omega: f64) -> f64 {
        (HBAR / (self.mass * omega)).sqrt()
    }

    /// `ℓ = q²/4πε₀`, so that the Coulomb energy is `ℓ/r`.
    pub fn coulomb_length(&self) -> f64 {
        self.charge * self.charge / (4.0 * PI * EPSILON_0)
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Doppler-limit temperature `ħΓ/2k_B`.
    pub fn doppler_temperature(&self) -> f64 {
        HBAR * self.linewidth / (2.0 * K_B)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfig {
    /// Axial (centre-of-mass) angular frequency, rad/s.
    pub omega: f64,
    /// Ion separation d, m.
    pub separation: f64,
}

impl TrapConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.omega > 0.0 && self.omega.is_finite(), "omega", "must be positive")?;
        ensure(self.separation > 0.0 && self.separation.is_finite(), "separation", "must be positive")
    }

    /// `ε = q²/(π ε₀ m ω² d³)`, the Coulomb coupling relative to the trap.
    pub fn coulomb_parameter(&self, species: &IonSpecies) -> f64 {
        species.charge * species.charge
            / (PI * EPSILON_0 * species.mass * self.omega * self.omega * self.separation.powi(3))
    }

    pub fn a_over_d(&self, species: &IonSpecies) -> f64 {
        species.oscillator_length(self.omega) / self.separation
    }

    /// Thermal energy in units of the trap quantum.
    pub fn kt_over_hw(&self, temperature: f64) -> f64 {
        K_B * temperature / (HBAR * self.omega)
    }
}

/// Extra separation `Δd` from mutual Coulomb repulsion of ions whose
/// unperturbed separation is `d`; solves `u(1+u)² = ε/2` for `u = Δd/d`.
pub fn equilibrium_stretch(species: &IonSpecies, trap: &TrapConfig) -> Result<f64> {
    species.validate()?;
    trap.validate()?;
    let eps = trap.coulomb_parameter(species);
    let eta = 27.0 * eps / 4.0;
    let arg = eta + 1.0 + (eta * (eta + 2.0)).sqrt();
    let s = (arg.ln() / 6.0).sinh();
    Ok(4.0 * trap.separation / 3.0 * s * s)
}

/// Coulomb-corrected (longitudinal, transverse) stretch-mode frequency
/// factors `(√(1+ε), √(1−ε/2))`.
pub fn frequency_correction(eps: f64) -> Result<(f64, f64)> {
    ensure(eps.is_finite() && eps >= 0.0, "eps", "must be non-negative")?;
    ensure(eps < 2.0, "eps", "transverse mode is unstable for ε ≥ 2")?;
    Ok(((1.0 + eps).sqrt(), (1.0 - eps / 2.0).sqrt()))
}

/// Gaussian force pulse `F(t) = αħω f(t)/a`, `f(t) = ξ exp(−(t/τ)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcePulse {
    pub xi: f64,
    /// s
    pub tau: f64,
}

impl ForcePulse {
    pub fn validate(&self) -> Result<()> {
        ensure(self.xi.is_finite(), "xi", "must be finite")?;
        ensure(self.tau > 0.0 && self.tau.is_finite(), "tau", "must be positive")
    }

    pub fn value(&self, t: f64) -> f64 {
        let r = t / self.tau;
        self.xi * (-r * r).exp()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        -2.0 * t / (self.tau * self.tau) * self.value(t)
    }

    /// `∫ fⁿ dt = ξⁿ τ √(π/n)`.
    pub fn power_integral(&self, n: i32) -> f64 {
        self.xi.powi(n) * self.tau * (PI / n as f64).sqrt()
    }

    pub fn window(&self) -> (f64, f64) {
        (-WINDOW_TAUS * self.tau, WINDOW_TAUS * self.tau)
    }
}

/// Free oscillation `Δ(t) = √(2E/mω²) cos(ωt + ψ)` of one ion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillation {
    /// J
    pub energy: f64,
    pub phase: f64,
}

impl Oscillation {
    pub const REST: Oscillation = Oscillation { energy: 0.0, phase: 0.0 };

    pub fn validate(&self) -> Result<()> {
        ensure(self.energy >= 0.0 && self.energy.is_finite(), "energy", "must be non-negative")?;
        ensure(self.phase.is_finite(), "phase", "must be finite")
    }

    /// Amplitude in units of `a`: `√(2E/ħω)`.
    pub fn amplitude_over_a(&self, omega: f64) -> f64 {
        (2.0 * self.energy / (HBAR * omega)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionState {
    pub ion1: Oscillation,
    pub ion2: Oscillation,
}

impl MotionState {
    pub const REST: MotionState = MotionState { ion1: Oscillation::REST, ion2: Oscillation::REST };
}

struct Scaled {
    omega: f64,
    a: f64,
    omega_tau: f64,
    xi: f64,
    amp: f64,
    phase: f64,
}

impl Scaled {
    fn new(species: &IonSpecies, trap: &TrapConfig, pulse: &ForcePulse, osc: &Oscillation, push: f64) -> Result<Self> {
        species.validate()?;
        trap.validate()?;
        pulse.validate()?;
        osc.validate()?;
        ensure(push.is_finite(), "push", "must be finite")?;
        Ok(Self {
            omega: trap.omega,
            a: species.oscillator_length(trap.omega),
            omega_tau: trap.omega * pulse.tau,
            xi: push * pulse.xi,
            amp: osc.amplitude_over_a(trap.omega),
            phase: osc.phase,
        })
    }

    fn force(&self, s: f64) -> f64 {
        let r = s / self.omega_tau;
        self.xi * (-r * r).exp()
    }

    fn force_rate(&self, s: f64) -> f64 {
        -2.0 * s / (self.omega_tau * self.omega_tau) * self.force(s)
    }

    fn start(&self) -> f64 {
        -WINDOW_TAUS * self.omega_tau
    }

    fn scaled_times(&self, times: &[f64]) -> Result<Vec<f64>> {
        let s0 = self.start();
        let mut prev = s0;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            let s = t * self.omega;
            if !(s >= prev) {
                return Err(invalid("times", "must be ascending and not before the window start −6τ"));
            }
            prev = s;
            out.push(s);
        }
        Ok(out)
    }
}

/// Closed-form trajectory `x = x̄ − δ + Δ` of an ion pushed with strength
/// `push` (α, or −α for a reversed force), starting from the free
/// oscillation `osc` at `t = −6τ`. `δ` is evaluated by adaptive quadrature.
/// `times` must be ascending and not earlier than `−6τ`.
pub fn analytic_trajectory(
    species: &IonSpecies,
    trap: &TrapConfig,
    pulse: &ForcePulse,
    osc: &Oscillation,
    push: f64,
    times: &[f64],
) -> Result<Vec<f64>> {
    let sc = Scaled::new(species, trap, pulse, osc, push)?;
    let mut prev = sc.start();
    let (mut int_sin, mut int_cos) = (0.0, 0.0);
    let mut out = Vec::with_capacity(times.len());
    for s in sc.scaled_times(times)? {
        int_sin += integrate(|u| sc.force_rate(u) * u.sin(), prev, s, 1e-14, 1e-14)?.value;
        int_cos += integrate(|u| sc.force_rate(u) * u.cos(), prev, s, 1e-14, 1e-14)?.value;
        prev = s;
        let delta = s.sin() * int_sin + s.cos() * int_cos;
        let free = sc.amp * (s + sc.phase).cos();
        out.push(sc.a * (sc.force(s) - delta + free));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    /// m
    pub position: f64,
    /// m/s
    pub velocity: f64,
}

/// Integrates `ẍ + ω²x = F(t)/m` with the same initial conditions as
/// [`analytic_trajectory`], using adaptive Dormand-Prince steps.
pub fn ode_trajectory(
    species: &IonSpecies,
    trap: &TrapConfig,
    pulse: &ForcePulse,
    osc: &Oscillation,
    push: f64,
    times: &[f64],
    tol: OdeTolerance,
) -> Result<Vec<PhasePoint>> {
    let sc = Scaled::new(species, trap, pulse, osc, push)?;
    let s0 = sc.start();
    let y0 = [sc.force(s0) + sc.amp * (s0 + sc.phase).cos(), -sc.amp * (s0 + sc.phase).sin()];
    let mut ode = Dopri5::new(|s, y: &[f64; 2]| [y[1], sc.force(s) - y[0]], s0, y0, tol);
    let mut out = Vec::with_capacity(times.len());
    for s in sc.scaled_times(times)? {
        let y = ode.advance(s)?;
        out.push(PhasePoint { position: sc.a * y[0], velocity: sc.a * sc.omega * y[1] });
    }
    Ok(out)
}

/// `|∫ ḟ e^{iωt} dt| / f_max` over the pulse window: the amplitude (in
/// units of the peak displacement) of the motion left behind by the pulse.
pub fn adiabaticity_metric(pulse: &ForcePulse, omega: f64) -> Result<f64> {
    pulse.validate()?;
    ensure(omega > 0.0 && omega.is_finite(), "omega", "must be positive")?;
    ensure(pulse.xi != 0.0, "xi", "must be non-zero")?;
    let (t0, t1) = pulse.window();
    let w = omega;
    let tol = 1e-15 * pulse.xi.abs();
    let re = integrate(|t| pulse.derivative(t) * (w * t).cos() * pulse.tau, t0, t1, tol, 1e-13)?.value;
    let im = integrate(|t| pulse.derivative(t) * (w * t).sin() * pulse.tau, t0, t1, tol, 1e-13)?.value;
    Ok((re * re + im * im).sqrt() / (pulse.tau * pulse.xi.abs()))
}

/// Closed form of [`adiabaticity_metric`] for the Gaussian pulse,
/// `√π ωτ exp(−(ωτ/2)²)`; the exponential sets the adiabatic condition.
pub fn gaussian_adiabaticity(omega_tau: f64) -> f64 {
    PI.sqrt() * omega_tau * (-(omega_tau / 2.0).powi(2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coulomb_parameter_for_calcium() {
        let trap = TrapConfig { omega: 2.0 * PI * 1e6, separation: 10e-6 };
        let eps = trap.coulomb_parameter(&IonSpecies::calcium40());
        assert!((eps - 0.35).abs() < 0.01, "{eps}");
    }

    #[test]
    fn doppler_limit_preset() {
        let t = IonSpecies::calcium40().doppler_temperature();
        assert!((t - 538e-6).abs() < 0.5e-6, "{t}");
    }

    #[test]
    fn frequency_correction_domain() {
        let (l, t) = frequency_correction(0.0).unwrap();
        assert_eq!((l, t), (1.0, 1.0));
        let (l, t) = frequency_correction(1.0).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-15 && (t - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(frequency_correction(2.0).is_err());
    }

    #[test]
    fn pulse_integrals() {
        let p = ForcePulse { xi: 0.7, tau: 2e-6 };
        for n in 1..=4 {
            let (t0, t1) = p.window();
            let q = integrate(|t| p.value(t).powi(n), t0, t1, 0.0, 1e-13).unwrap().value;
            assert!((q / p.power_integral(n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn times_before_window_rejected() {
        let sp = IonSpecies::calcium40();
        let trap = TrapConfig { omega: 2.0 * PI * 1e6, separation: 10e-6 };
        let p = ForcePulse { xi: 1.0, tau: 1e-6 };
        assert!(analytic_trajectory(&sp, &trap, &p, &Oscillation::REST, 1.0, &[-1e-5]).is_err());
    }
}
