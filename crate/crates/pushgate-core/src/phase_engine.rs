//! Kinetic, light-shift and Coulomb phases acquired during the push, and
//! the resulting conditional gate angle.
//!
//! Phases are indexed by the qubit states `α` (ion 1) and `β` (ion 2); an
//! ion in state 1 feels the force, an ion in state 0 does not. The Coulomb
//! phase is expanded to fourth order in the relative displacement. Terms
//! that only shift the global phase (`Q_n`) and the oscillatory cross terms
//! dropped in the adiabatic limit are reported in separate buckets and are
//! never part of a [`PhaseSet`].

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::consts::HBAR;
use crate::error::{ensure, Result};
use crate::gate_algebra::DiagonalGate;
use crate::trap_dynamics::{ForcePulse, IonSpecies, MotionState, Oscillation, TrapConfig, WINDOW_TAUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceDirection {
    /// Both ions are pushed the same way.
    Same,
    /// The force on ion 2 is reversed.
    Opposite,
}

impl ForceDirection {
    fn sign(self) -> f64 {
        match self {
            ForceDirection::Same => 1.0,
            ForceDirection::Opposite => -1.0,
        }
    }
}

/// Kinetic phase of one ion: the pulse-only part `φ^I` and the part `φ^II`
/// linear in the initial oscillation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticPhases {
    pub first: f64,
    pub second: f64,
}

/// Coulomb phases for one `(α, β)` pair, `n = 1..4` at index `n − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombPhases {
    /// Contributions kept in the gate.
    pub terms: [f64; 4],
    /// `Q_n`: state-independent, evaluated over the ±6τ window.
    pub global: [f64; 4],
    /// Cross terms between the pulse and the free oscillation that the
    /// adiabatic expansion drops; they are suppressed by
    /// `exp(−(ωτ)²/4k)` with `k ≤ 3`.
    pub remainder: [f64; 4],
}

/// Phases `Θ_αβ` split by origin, indexed `2α + β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSet {
    pub kinetic: [f64; 4],
    pub potential: [f64; 4],
    /// `coulomb[n − 1][2α + β]`.
    pub coulomb: [[f64; 4]; 4],
}

impl PhaseSet {
    pub fn total(&self, index: usize) -> f64 {
        self.kinetic[index] + self.potential[index] + self.coulomb.iter().map(|c| c[index]).sum::<f64>()
    }

    pub fn gate(&self) -> DiagonalGate {
        DiagonalGate::new(core::array::from_fn(|i| self.total(i))).expect("finite phases")
    }

    pub fn gate_angle(&self) -> f64 {
        self.gate().gate_angle()
    }
}

/// `B = E1/ħω + E2/ħω − 2√(E1E2)/ħω cos(ψ1 − ψ2)`, the squared relative
/// oscillation amplitude in units of `a²/2`.
pub fn relative_energy(motion: &MotionState, omega: f64) -> f64 {
    let e1 = motion.ion1.energy / (HBAR * omega);
    let e2 = motion.ion2.energy / (HBAR * omega);
    e1 + e2 - 2.0 * (e1 * e2).sqrt() * (motion.ion1.phase - motion.ion2.phase).cos()
}

/// The pushing gate: species, trap, pulse and the light-shift offsets
/// `s` (ion 1) and `s'` (ion 2) of the force potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PushGate {
    pub species: IonSpecies,
    pub trap: TrapConfig,
    pub pulse: ForcePulse,
    pub direction: ForceDirection,
    /// m
    pub offset1: f64,
    /// m
    pub offset2: f64,
}

impl PushGate {
    pub fn new(
        species: IonSpecies,
        trap: TrapConfig,
        pulse: ForcePulse,
        direction: ForceDirection,
        offset1: f64,
        offset2: f64,
    ) -> Result<Self> {
        species.validate()?;
        trap.validate()?;
        pulse.validate()?;
        ensure(offset1.is_finite(), "offset1", "must be finite")?;
        ensure(offset2.is_finite(), "offset2", "must be finite")?;
        Ok(Self { species, trap, pulse, direction, offset1, offset2 })
    }

    pub fn epsilon(&self) -> f64 {
        self.trap.coulomb_parameter(&self.species)
    }

    pub fn a(&self) -> f64 {
        self.species.oscillator_length(self.trap.omega)
    }

    pub fn omega_tau(&self) -> f64 {
        self.trap.omega * self.pulse.tau
    }

    pub fn a_over_d(&self) -> f64 {
        self.a() / self.trap.separation
    }

    /// Leading-order conditional phase `θ = √(π/8) ε ωτ ξ²`.
    pub fn theta(&self) -> f64 {
        (PI / 8.0).sqrt() * self.epsilon() * self.omega_tau() * self.pulse.xi * self.pulse.xi
    }

    /// Kinetic phase of an ion pushed with strength `push` (α, negated for
    /// a reversed force) starting from `osc`.
    pub fn kinetic(&self, push: f64, osc: &Oscillation) -> KineticPhases {
        let wt = self.omega_tau();
        let xi = self.pulse.xi;
        let e = osc.energy / (HBAR * self.trap.omega);
        KineticPhases {
            first: -push * push * xi * xi * (PI / 8.0).sqrt() / wt,
            second: -push * wt * xi * (-(wt * wt) / 2.0).exp() * (2.0 * PI * e).sqrt() * osc.phase.cos(),
        }
    }

    /// Light-shift phase of ion 1 (`ion2 == false`) or ion 2 in state
    /// `state`.
    pub fn potential(&self, ion2: bool, state: f64) -> f64 {
        let wt = self.omega_tau();
        let xi = self.pulse.xi;
        let a = self.a();
        let (offset, sign) = if ion2 { (self.offset2, self.direction.sign()) } else { (self.offset1, 1.0) };
        (PI / 8.0).sqrt() * state * wt * xi * xi - sign * PI.sqrt() * state * wt * xi * offset / a
    }

    fn coulomb_with(&self, g: f64, b: f64) -> [f64; 4] {
        let ewx = self.epsilon() * self.omega_tau() * self.pulse.xi;
        let xi = self.pulse.xi;
        let k = self.a_over_d();
        [
            -(PI.sqrt() / 4.0) * g * ewx / k,
            -(PI / 32.0).sqrt() * g * g * ewx * xi,
            -(PI / 48.0).sqrt() * g.powi(3) * ewx * xi * xi * k - 0.75 * PI.sqrt() * g * ewx * k * b,
            -(PI.sqrt() / 8.0) * g.powi(4) * ewx * xi.powi(3) * k * k
                - (9.0 * PI / 8.0).sqrt() * g * g * ewx * xi * k * k * b,
        ]
    }

    /// Coulomb phases for qubit states `(α, β)` and the given motion.
    pub fn coulomb(&self, alpha: f64, beta: f64, motion: &MotionState) -> CoulombPhases {
        let omega = self.trap.omega;
        let g = alpha - self.direction.sign() * beta;
        let b = relative_energy(motion, omega);
        let terms = self.coulomb_with(g, b);

        // Relative free oscillation C cos(s + χ) in units of a.
        let a1 = motion.ion1.amplitude_over_a(omega);
        let a2 = motion.ion2.amplitude_over_a(omega);
        let re = a1 * motion.ion1.phase.cos() - a2 * motion.ion2.phase.cos();
        let im = a1 * motion.ion1.phase.sin() - a2 * motion.ion2.phase.sin();
        let c = re.hypot(im);
        let chi = im.atan2(re);

        let eps = self.epsilon();
        let k = self.a_over_d();
        let u = self.omega_tau();
        let xi = self.pulse.xi;
        let pref = |n: i32| -(eps / 4.0) * k.powi(n - 2);

        let half = WINDOW_TAUS * u;
        let cos_power_integral = |n: i32| {
            let at = |s: f64| {
                let x = s + chi;
                match n {
                    1 => x.sin(),
                    2 => s / 2.0 + (2.0 * x).sin() / 4.0,
                    3 => 0.75 * x.sin() + (3.0 * x).sin() / 12.0,
                    _ => 3.0 * s / 8.0 + (2.0 * x).sin() / 4.0 + (4.0 * x).sin() / 32.0,
                }
            };
            at(half) - at(-half)
        };
        let global = core::array::from_fn(|i| {
            let n = i as i32 + 1;
            pref(n) * c.powi(n) * cos_power_integral(n)
        });

        // ∫ f^p cos(m(s + χ)) ds over the real line.
        let gauss = |p: i32, m: f64| {
            let p_f = p as f64;
            xi.powi(p) * u * (PI / p_f).sqrt() * (-(m * u).powi(2) / (4.0 * p_f)).exp() * (m * chi).cos()
        };
        let remainder = [
            0.0,
            pref(2) * 2.0 * g * c * gauss(1, 1.0),
            pref(3) * (3.0 * g * g * c * gauss(2, 1.0) + 1.5 * g * c * c * gauss(1, 2.0)),
            pref(4)
                * (4.0 * g.powi(3) * c * gauss(3, 1.0)
                    + 3.0 * g * g * c * c * gauss(2, 2.0)
                    + g * c.powi(3) * (3.0 * gauss(1, 1.0) + gauss(1, 3.0))),
        ];
        CoulombPhases { terms, global, remainder }
    }

    fn assemble(&self, b: f64, second1: f64, second2: f64) -> PhaseSet {
        let sign = self.direction.sign();
        let mut set = PhaseSet { kinetic: [0.0; 4], potential: [0.0; 4], coulomb: [[0.0; 4]; 4] };
        for alpha in 0..2 {
            for beta in 0..2 {
                let i = 2 * alpha + beta;
                let (a, bb) = (alpha as f64, beta as f64);
                let k1 = self.kinetic(a, &Oscillation::REST).first;
                let k2 = self.kinetic(sign * bb, &Oscillation::REST).first;
                set.kinetic[i] = k1 + k2 + a * second1 + sign * bb * second2;
                set.potential[i] = self.potential(false, a) + self.potential(true, bb);
                let c = self.coulomb_with(a - sign * bb, b);
                for n in 0..4 {
                    set.coulomb[n][i] = c[n];
                }
            }
        }
        set
    }

    /// Phases for one motional state.
    pub fn phase_set(&self, motion: &MotionState) -> PhaseSet {
        self.assemble(
            relative_energy(motion, self.trap.omega),
            self.kinetic(1.0, &motion.ion1).second,
            self.kinetic(1.0, &motion.ion2).second,
        )
    }

    /// Thermal mean phases `Θ̄_αβ`: `φ^II` averages to zero and `⟨B⟩ = 2k_BT/ħω`.
    pub fn mean_phase_set(&self, kt_over_hw: f64) -> PhaseSet {
        self.assemble(2.0 * kt_over_hw, 0.0, 0.0)
    }

    pub fn gate_angle(&self, motion: &MotionState) -> f64 {
        self.phase_set(motion).gate_angle()
    }

    pub fn mean_gate_angle(&self, kt_over_hw: f64) -> f64 {
        self.mean_phase_set(kt_over_hw).gate_angle()
    }
}

/// Gate angle `ϑ = θ{1 + (a/d)²[ξ²/√2 + 6B]}` for same-direction forces.
pub fn gate_angle_closed(theta: f64, a_over_d: f64, xi: f64, b: f64) -> f64 {
    theta * (1.0 + a_over_d * a_over_d * (xi * xi / 2f64.sqrt() + 6.0 * b))
}

/// Pulse duration giving leading-order phase `θ`: `τ = θ√(8/π)/(εωξ²)`.
pub fn gate_time_for_angle(theta: f64, eps: f64, omega: f64, xi: f64) -> Result<f64> {
    ensure(eps > 0.0 && omega > 0.0, "eps", "ε and ω must be positive")?;
    ensure(xi != 0.0 && xi.is_finite(), "xi", "must be non-zero")?;
    Ok(theta * (8.0 / PI).sqrt() / (eps * omega * xi * xi))
}

/// Thermal fidelity without spin echo,
/// `1 − (6θk_BT/ħω)²[(a/d)²/ξ² − 2(a/d)⁴]`.
pub fn fidelity_no_echo_closed(theta: f64, a_over_d: f64, xi: f64, kt_over_hw: f64) -> f64 {
    let x = 6.0 * theta * kt_over_hw;
    let k2 = a_over_d * a_over_d;
    1.0 - x * x * (k2 / (xi * xi) - 2.0 * k2 * k2)
}

/// No-echo fidelity averaged exactly over the thermal distribution, keeping
/// only the `(a/d)` term. The worst state weights |01> and |10> equally, so
/// `F = ⟨cos²(c δB)⟩` with `c = (3/√2)θκ/ξ` and `B` exponential with mean
/// `2k_BT/ħω`. In closed form that is `½[1 + (cos y + y sin y)/(1 + y²)]`
/// with `y = 6√2 θκt/ξ`, and for small `y` it is `1 − 18(θκt/ξ)²`.
pub fn fidelity_no_echo_thermal(theta: f64, a_over_d: f64, xi: f64, kt_over_hw: f64) -> f64 {
    let y = 6.0 * 2f64.sqrt() * theta * a_over_d * kt_over_hw / xi;
    0.5 * (1.0 + (y.cos() + y * y.sin()) / (1.0 + y * y))
}

/// Thermal fidelity with spin echo, `1 − (6θk_BT/ħω)²(a/d)⁴`.
pub fn fidelity_echo_closed(theta: f64, a_over_d: f64, kt_over_hw: f64) -> f64 {
    let x = 6.0 * theta * kt_over_hw;
    1.0 - x * x * a_over_d.powi(4)
}
