//! Sensitivity of the single-qubit phases to the force amplitude, the
//! "sweet spot" that removes it, and how fast the gate may be run before the
//! ion is pushed out of the region where the force is uniform.
//!
//! The single-qubit phases are `Φ1 = Θ̄10 − Θ̄00` and `Φ2 = Θ̄01 − Θ̄00`,
//! thermal means including Coulomb orders up to four. Derivatives with
//! respect to `ξ` are taken at fixed pulse duration `τ`.

use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)]
use num_traits::Float;

use crate::consts::{C_LIGHT, FINE_STRUCTURE, HBAR};
use crate::dipole_force::{LaserConfig, LaserMode};
use crate::error::{ensure, invalid, Result};
use crate::phase_engine::{ForceDirection, PushGate};
use crate::trap_dynamics::{IonSpecies, TrapConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ion {
    First,
    Second,
}

impl Ion {
    pub const BOTH: [Ion; 2] = [Ion::First, Ion::Second];
}

/// `(π_j, σ_j)`: sign of the light-shift offset term and of the odd Coulomb
/// terms in `Φ_j`.
fn signs(gate: &PushGate, ion: Ion) -> (f64, f64) {
    match (ion, gate.direction) {
        (Ion::First, _) => (1.0, 1.0),
        (Ion::Second, ForceDirection::Same) => (1.0, -1.0),
        (Ion::Second, ForceDirection::Opposite) => (-1.0, 1.0),
    }
}

fn offset(gate: &PushGate, ion: Ion) -> f64 {
    match ion {
        Ion::First => gate.offset1,
        Ion::Second => gate.offset2,
    }
}

/// Offset `s` of the force potential, `V_F(x) ≈ (s − x)F` near the ion:
/// `−w²/4x0` for a travelling wave, `tan(kz0)/2k` for a standing wave.
pub fn geometry_offset(species: &IonSpecies, laser: &LaserConfig) -> Result<f64> {
    match laser.mode {
        LaserMode::Travelling { x0 } => {
            ensure(x0 != 0.0 && x0.is_finite(), "x0", "beam centre must be offset from the ion")?;
            Ok(-laser.waist * laser.waist / (4.0 * x0))
        }
        LaserMode::Standing { kz0 } => {
            ensure(kz0.cos().abs() > 1e-12, "kz0", "offset diverges at an intensity maximum")?;
            Ok(kz0.tan() / (2.0 * species.wavenumber()))
        }
    }
}

/// Trap frequency at which the geometric offset `s` coincides with the
/// leading sweet-spot offset `εd/4`: `ω = (1/d)√(ℓ/(m|s|))`.
pub fn omega_sweet(species: &IonSpecies, separation: f64, s: f64) -> Result<f64> {
    ensure(s != 0.0 && s.is_finite(), "s", "must be non-zero")?;
    ensure(separation > 0.0, "separation", "must be positive")?;
    Ok((species.coulomb_length() / (species.mass * s.abs())).sqrt() / separation)
}

/// `𝒜 = [1 − ε/2 − 1/(ωτ)²] d⟨ξ²⟩/dξ`.
pub fn curvature_factor(eps: f64, omega_tau: f64, mean_sq_slope: f64) -> f64 {
    (1.0 - eps / 2.0 - 1.0 / (omega_tau * omega_tau)) * mean_sq_slope
}

/// Thermal mean single-qubit phase of one ion, from the assembled phases.
pub fn single_qubit_phase(gate: &PushGate, ion: Ion, kt_over_hw: f64) -> f64 {
    let set = gate.mean_phase_set(kt_over_hw);
    match ion {
        Ion::First => set.total(2) - set.total(0),
        Ion::Second => set.total(1) - set.total(0),
    }
}

/// Same phase in closed form,
/// `√(π/8)εωτ[ξ²(1/ε − 1/ε(ωτ)² − 1/2) − πξ(s/a)√8/ε − σξ(d/a)/√2
/// − σκ(ξ³/√6 + 6tξ/√2) − κ²(ξ⁴/√8 + 6tξ²)]`.
pub fn single_qubit_phase_closed(gate: &PushGate, ion: Ion, kt_over_hw: f64) -> f64 {
    let (p, sg) = signs(gate, ion);
    let eps = gate.epsilon();
    let u = gate.omega_tau();
    let xi = gate.pulse.xi;
    let k = gate.a_over_d();
    let t = kt_over_hw;
    let s = offset(gate, ion) / gate.a();
    let bracket = xi * xi * (1.0 / eps - 1.0 / (eps * u * u) - 0.5)
        - p * xi * s * 8f64.sqrt() / eps
        - sg * xi / (k * SQRT_2)
        - sg * k * (xi.powi(3) / 6f64.sqrt() + 6.0 * t * xi / SQRT_2)
        - k * k * (xi.powi(4) / 8f64.sqrt() + 6.0 * t * xi * xi);
    (PI / 8.0).sqrt() * eps * u * bracket
}

/// `dΦ_j/dξ` at fixed `τ`.
pub fn dphi_dxi(gate: &PushGate, ion: Ion, kt_over_hw: f64) -> f64 {
    let (p, sg) = signs(gate, ion);
    let eps = gate.epsilon();
    let u = gate.omega_tau();
    let xi = gate.pulse.xi;
    let k = gate.a_over_d();
    let t = kt_over_hw;
    let s = offset(gate, ion) / gate.a();
    let bracket = curvature_factor(eps, u, 2.0 * xi) / eps
        - p * s * 8f64.sqrt() / eps
        - sg / (k * SQRT_2)
        - sg * k * (3.0 * xi * xi / 6f64.sqrt() + 6.0 * t / SQRT_2)
        - k * k * (4.0 * xi.powi(3) / 8f64.sqrt() + 12.0 * t * xi);
    (PI / 8.0).sqrt() * eps * u * bracket
}

/// Offsets `(s, s')` that make `dΦ1/dξ` and `dΦ2/dξ` vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweetSpot {
    /// m, including Coulomb corrections through fourth order.
    pub s1: f64,
    pub s2: f64,
    /// Leading order: `∓εd/4 + (a/√8)𝒜`.
    pub leading1: f64,
    pub leading2: f64,
}

pub fn sweet_spot(gate: &PushGate, kt_over_hw: f64) -> SweetSpot {
    sweet_spot_with_slope(gate, kt_over_hw, 2.0 * gate.pulse.xi)
}

/// Sweet spot for a caller-supplied `d⟨ξ²⟩/dξ` (`2ξ` when the force does
/// not fluctuate within a pulse).
pub fn sweet_spot_with_slope(gate: &PushGate, kt_over_hw: f64, mean_sq_slope: f64) -> SweetSpot {
    let eps = gate.epsilon();
    let xi = gate.pulse.xi;
    let k = gate.a_over_d();
    let t = kt_over_hw;
    let a = gate.a();
    let curv = curvature_factor(eps, gate.omega_tau(), mean_sq_slope);
    let solve = |ion| {
        let (p, sg) = signs(gate, ion);
        let full = curv
            - eps * sg / (k * SQRT_2)
            - eps * sg * k * (3.0 * xi * xi / 6f64.sqrt() + 6.0 * t / SQRT_2)
            - eps * k * k * (4.0 * xi.powi(3) / 8f64.sqrt() + 12.0 * t * xi);
        let leading = curv - eps * sg / (k * SQRT_2);
        (p * a / 8f64.sqrt() * full, p * a / 8f64.sqrt() * leading)
    };
    let (s1, leading1) = solve(Ion::First);
    let (s2, leading2) = solve(Ion::Second);
    SweetSpot { s1, s2, leading1, leading2 }
}

/// Phases, their slopes and the infidelity from a relative intensity
/// fluctuation `ΔI/I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityReport {
    pub phi: [f64; 2],
    pub dphi_dxi: [f64; 2],
    /// `|dΦ_j/d ln ξ|`.
    pub log_slope: [f64; 2],
    /// `[C_j ΔI/I]²` per ion.
    pub infidelity_per_ion: [f64; 2],
    pub infidelity: f64,
}

/// Infidelity `[C ΔI/I]²` of a phase with log-slope `C`.
pub fn noise_infidelity(log_slope: f64, relative_intensity_noise: f64) -> f64 {
    (log_slope * relative_intensity_noise).powi(2)
}

pub fn intensity_noise(gate: &PushGate, kt_over_hw: f64, relative_intensity_noise: f64) -> Result<SensitivityReport> {
    ensure(
        relative_intensity_noise >= 0.0 && relative_intensity_noise.is_finite(),
        "relative_intensity_noise",
        "must be non-negative",
    )?;
    let phi = Ion::BOTH.map(|ion| single_qubit_phase(gate, ion, kt_over_hw));
    let slope = Ion::BOTH.map(|ion| dphi_dxi(gate, ion, kt_over_hw));
    let log_slope = slope.map(|d| (d * gate.pulse.xi).abs());
    let per_ion = log_slope.map(|c| noise_infidelity(c, relative_intensity_noise));
    Ok(SensitivityReport {
        phi,
        dphi_dxi: slope,
        log_slope,
        infidelity_per_ion: per_ion,
        infidelity: per_ion[0] + per_ion[1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedConstraints {
    /// `v = ωτ ℓ√8/(ħ√π)`, m/s.
    pub characteristic_speed: f64,
    /// `aξ/d` for the actual pulse.
    pub displacement_over_d: f64,
    /// `√(ωd/v)`, equal to `aξ/d` when `2θ = π`.
    pub displacement_scaling: f64,
    /// Peak displacement `aξ`, m.
    pub max_displacement: f64,
    /// `w/4` (travelling) or `λ/10` (standing), m.
    pub displacement_limit: f64,
    /// `(d/x̄max)² ωd/(αc)`.
    pub min_omega_tau: f64,
    /// The same bound with the `√(π/8)` factor of the exact relation.
    pub min_omega_tau_exact: f64,
    /// Echo sequence time `2τ`, s.
    pub sequence_time: f64,
    pub within_limit: bool,
}

pub fn speed_constraints(gate: &PushGate, laser: &LaserConfig) -> Result<SpeedConstraints> {
    let species = &gate.species;
    let TrapConfig { omega, separation: d } = gate.trap;
    let u = gate.omega_tau();
    if !(u > 0.0) {
        return Err(invalid("omega_tau", "must be positive"));
    }
    let v = u * species.coulomb_length() * 8f64.sqrt() / (HBAR * PI.sqrt());
    let max_displacement = gate.a() * gate.pulse.xi.abs();
    let displacement_limit = match laser.mode {
        LaserMode::Travelling { .. } => laser.waist / 4.0,
        LaserMode::Standing { .. } => species.wavelength / 10.0,
    };
    let min_omega_tau = (d / displacement_limit).powi(2) * omega * d / (FINE_STRUCTURE * C_LIGHT);
    Ok(SpeedConstraints {
        characteristic_speed: v,
        displacement_over_d: max_displacement / d,
        displacement_scaling: (omega * d / v).sqrt(),
        max_displacement,
        displacement_limit,
        min_omega_tau,
        min_omega_tau_exact: min_omega_tau * (PI / 8.0).sqrt(),
        sequence_time: 2.0 * gate.pulse.tau,
        within_limit: max_displacement <= displacement_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dipole_force::light_shift;
    use crate::phase_engine::gate_time_for_angle;
    use crate::trap_dynamics::ForcePulse;

    fn gate(direction: ForceDirection, omega_tau: f64, xi: f64) -> PushGate {
        let species = IonSpecies::calcium40();
        let trap = TrapConfig { omega: 2.0 * PI * 2e6, separation: 20e-6 };
        let pulse = ForcePulse { xi, tau: omega_tau / trap.omega };
        PushGate::new(species, trap, pulse, direction, 3e-8, -2e-8).unwrap()
    }

    #[test]
    fn closed_phase_matches_assembled() {
        for dir in [ForceDirection::Same, ForceDirection::Opposite] {
            let g = gate(dir, 7.0, 0.4);
            for ion in Ion::BOTH {
                let a = single_qubit_phase(&g, ion, 3.0);
                let b = single_qubit_phase_closed(&g, ion, 3.0);
                assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{dir:?} {ion:?}: {a} {b}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for dir in [ForceDirection::Same, ForceDirection::Opposite] {
            let g = gate(dir, 6.0, 0.5);
            for ion in Ion::BOTH {
                let h = 1e-4;
                let at = |dx: f64| {
                    let mut p = g;
                    p.pulse.xi += dx;
                    single_qubit_phase(&p, ion, 2.0)
                };
                let fd = (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h);
                let d = dphi_dxi(&g, ion, 2.0);
                assert!((fd - d).abs() < 1e-7 * d.abs(), "{fd} {d}");
            }
        }
    }

    #[test]
    fn sweet_spot_zeroes_slope() {
        for dir in [ForceDirection::Same, ForceDirection::Opposite] {
            let mut g = gate(dir, 5.0, 0.3);
            let spot = sweet_spot(&g, 4.0);
            assert!(spot.s1 < 0.0 && spot.s2 > 0.0, "{spot:?}");
            let quarter = g.epsilon() * g.trap.separation / 4.0;
            assert!((spot.leading1 + quarter).abs() < g.a());
            g.offset1 = spot.s1;
            g.offset2 = spot.s2;
            let scale = g.theta() / g.a_over_d();
            for ion in Ion::BOTH {
                assert!(dphi_dxi(&g, ion, 4.0).abs() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn offset_reproduces_linearised_potential() {
        let species = IonSpecies::calcium40();
        let modes = [LaserMode::Travelling { x0: 1e-6 }, LaserMode::Standing { kz0: 0.5 }];
        for mode in modes {
            let laser = LaserConfig { power: 0.01, waist: 2e-6, detuning: 2.0 * PI * 1e12, mode };
            let s = geometry_offset(&species, &laser).unwrap();
            let v = |x: f64| light_shift(&species, &laser, x);
            let h = 1e-10;
            let force = -(v(h) - v(-h)) / (2.0 * h);
            let x = 2e-10;
            let err = (v(x) - (s - x) * force).abs();
            assert!(err < 1e-4 * v(0.0).abs(), "{mode:?}");
        }
        let half = LaserConfig {
            power: 0.01,
            waist: 4e-6,
            detuning: 1e12,
            mode: LaserMode::Travelling { x0: 2e-6 },
        };
        assert!((geometry_offset(&species, &half).unwrap() + 2e-6).abs() < 1e-18);
    }

    #[test]
    fn omega_sweet_puts_offset_at_quarter_eps_d() {
        let species = IonSpecies::calcium40();
        let (d, s) = (10e-6, 1e-7);
        let omega = omega_sweet(&species, d, s).unwrap();
        let eps = TrapConfig { omega, separation: d }.coulomb_parameter(&species);
        assert!((eps * d / 4.0 / s - 1.0).abs() < 1e-12);
        assert!(omega_sweet(&species, d, 0.0).is_err());
    }

    #[test]
    fn characteristic_speed_and_scaling() {
        let species = IonSpecies::calcium40();
        let trap = TrapConfig { omega: 2.0 * PI * 1e6, separation: 10e-6 };
        let eps = trap.coulomb_parameter(&species);
        let xi_for = |tau: f64| (PI / 2.0 * (8.0 / PI).sqrt() / (eps * trap.omega * tau)).sqrt();
        let tau = 5.0 / trap.omega;
        let pulse = ForcePulse { xi: xi_for(tau), tau };
        assert!((gate_time_for_angle(PI / 2.0, eps, trap.omega, pulse.xi).unwrap() / tau - 1.0).abs() < 1e-12);
        let g = PushGate::new(species, trap, pulse, ForceDirection::Same, 0.0, 0.0).unwrap();
        let laser = LaserConfig { power: 0.1, waist: 2e-6, detuning: 1e12, mode: LaserMode::Standing { kz0: PI / 4.0 } };
        let c = speed_constraints(&g, &laser).unwrap();
        assert!((c.characteristic_speed / 1.8e7 - 1.0).abs() < 0.05);
        assert!((c.displacement_over_d / c.displacement_scaling - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noise_anchor() {
        assert!((noise_infidelity(500.0, 1e-3) - 0.25).abs() < 1e-15);
        assert_eq!(noise_infidelity(500.0, 0.0), 0.0);
    }
}
