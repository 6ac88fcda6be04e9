use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fidelity_min_diag, min_expectation_sq, DiagonalGate, Ket, Mat4, SingleQubitOp, TwoQubitDensity, TwoQubitState, C64};
use crate::error::{ensure, Result};
use crate::numeric::{nelder_mead, NelderMead};

fn wrap(phase: f64) -> f64 {
    let r = phase - 2.0 * PI * (phase / (2.0 * PI)).floor();
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// `S' = Z1(−ϑ̄) Z2(−ϑ̄)` as a diagonal gate.
fn echo_correction(target: f64) -> DiagonalGate {
    DiagonalGate::local_z(-target, -target)
}

/// Diagonal phases of `S'(R G2)(R G1)`. The π pulses swap |αβ> with
/// |ᾱβ̄> and their signs cancel in pairs, so the product stays diagonal.
fn echo_phases(g1: &DiagonalGate, g2: &DiagonalGate, target: f64) -> [f64; 4] {
    let p1 = g1.phases();
    let p2 = g2.phases();
    let s = echo_correction(target).phases();
    core::array::from_fn(|i| p1[i] + p2[3 - i] + s[i])
}

/// Residual of the echo sequence `S'(R G2)(R G1)` against the ideal
/// output `P_{2ϑ̄}` (the CZ gate `P_π` for the intended `2ϑ̄ = π`),
/// normalized so the |00> phase is zero and phases lie in `(−π, π]`.
///
/// For `G1 = G2 = G` the residual is `diag(1, e^{−iδϑ}, e^{−iδϑ}, 1)`,
/// i.e. `E' = diag(e^{iδϑ}, 1, 1, e^{iδϑ})` up to a global phase.
pub fn echo_sequence_residual(g1: &DiagonalGate, g2: &DiagonalGate, target: f64) -> DiagonalGate {
    let mut phases = echo_phases(g1, g2, target);
    phases[3] -= 2.0 * target;
    let p0 = phases[0];
    DiagonalGate::new(phases.map(|p| wrap(p - p0))).expect("finite phases")
}

/// Fidelity without spin echo: the residual `G G_perf†` is diagonal.
pub fn fidelity_no_echo(g: &DiagonalGate, g_perf: &DiagonalGate) -> f64 {
    let [_, a, b, c] = g.then(&g_perf.inverse()).relative();
    fidelity_min_diag(a, b, c)
}

/// Echo fidelity with perfect π pulses, `cos²(δϑ/2)`.
pub fn echo_fidelity_perfect(g: &DiagonalGate, g_perf: &DiagonalGate) -> f64 {
    let target = g_perf.gate_angle();
    let r = echo_sequence_residual(g, g, target).then(&echo_sequence_residual(g_perf, g_perf, target).inverse());
    let [_, a, b, c] = r.relative();
    fidelity_min_diag(a, b, c)
}

/// Phase errors `Z1(ε̃1) Z2(ε̃2)` on the first pair of π pulses and
/// `Z1(p1 ε̃1) Z2(p2 ε̃2)` on the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseErrors {
    pub eps1: f64,
    pub eps2: f64,
    pub p1: f64,
    pub p2: f64,
}

/// Echo fidelity with π-pulse phase errors; the residual is
/// `Z1((1−p1)ε̃1) Z2((1−p2)ε̃2) E'`.
pub fn echo_fidelity_phase_errors(delta_vartheta: f64, errs: &PhaseErrors) -> f64 {
    let local = DiagonalGate::local_z((1.0 - errs.p1) * errs.eps1, (1.0 - errs.p2) * errs.eps2);
    let e_prime = DiagonalGate::from_phases(delta_vartheta, 0.0, 0.0, delta_vartheta).expect("finite");
    let [_, a, b, c] = local.then(&e_prime).relative();
    fidelity_min_diag(a, b, c)
}

/// Echo fidelity when each π pulse over-rotates: the first pair carries
/// `M(ε)⊗M(ε)`, the second `M(pε)⊗M(pε)`.
pub fn echo_fidelity_overrotation(g: &DiagonalGate, g_perf: &DiagonalGate, eps: f64, p: f64) -> f64 {
    let r = SingleQubitOp::pi_pulse().on_both();
    let m_a = SingleQubitOp::over_rotated(eps).on_both();
    let m_b = SingleQubitOp::over_rotated(p * eps).on_both();
    let gm = g.matrix();
    let gp = g_perf.matrix();
    let actual = r * m_b * gm * r * m_a * gm;
    let ideal = r * gp * r * gp;
    min_expectation_sq(&(ideal.adjoint() * actual))
}

fn bitflip_kraus(zeta1: f64, zeta2: f64) -> [Mat4; 4] {
    let r = SingleQubitOp::pi_pulse();
    let both = r.on_both();
    let first = r.on_first();
    let second = r.on_second();
    let c = |w: f64| C64::new(w.sqrt(), 0.0);
    [
        both * c((1.0 - zeta1) * (1.0 - zeta2)),
        first * c((1.0 - zeta1) * zeta2),
        second * c(zeta1 * (1.0 - zeta2)),
        Mat4::identity() * c(zeta1 * zeta2),
    ]
}

/// The sixteen Kraus paths of the bit-flip echo, `M_k S̃ G M_j S G`, with the
/// ideal output `P_{2ϑ̄}` already divided out.
fn bitflip_paths(g: &DiagonalGate, g_perf: &DiagonalGate, zeta1: f64, zeta2: f64) -> Vec<Mat4> {
    let vt = g_perf.gate_angle();
    let bar = g_perf.phases();
    // S = diag(e^{−iΘ̄αβ} e^{iϑ̄ αβ}), S̃ = diag(e^{−iΘ̄αβ} e^{iϑ̄(δαβ − αβ)}).
    let s = DiagonalGate::from_phases(-bar[0], -bar[1], -bar[2], -bar[3] + vt).expect("finite");
    let s_tilde = DiagonalGate::from_phases(-bar[0] + vt, -bar[1], -bar[2], -bar[3]).expect("finite");
    let first = s.then(g).matrix();
    let second = s_tilde.then(g).matrix();
    let ideal_inv = DiagonalGate::controlled_phase(-2.0 * vt).matrix();
    let kraus = bitflip_kraus(zeta1, zeta2);
    let mut paths = Vec::with_capacity(16);
    for mj in &kraus {
        for mk in &kraus {
            paths.push(ideal_inv * mk * second * mj * first);
        }
    }
    paths
}

/// Output density of the bit-flip echo channel for input `state`, before
/// comparison with the ideal output.
pub fn bitflip_output_density(
    g: &DiagonalGate,
    g_perf: &DiagonalGate,
    zeta1: f64,
    zeta2: f64,
    state: &TwoQubitState,
) -> Result<TwoQubitDensity> {
    check_zeta(zeta1, zeta2)?;
    let ideal = DiagonalGate::controlled_phase(2.0 * g_perf.gate_angle()).matrix();
    let rho0 = state.density();
    let rho = bitflip_paths(g, g_perf, zeta1, zeta2)
        .iter()
        .map(|k| ideal * k * rho0.matrix() * k.adjoint() * ideal.adjoint())
        .fold(Mat4::zeros(), |acc, m| acc + m);
    TwoQubitDensity::new(rho)
}

fn check_zeta(zeta1: f64, zeta2: f64) -> Result<()> {
    ensure((0.0..=1.0).contains(&zeta1), "zeta1", "must lie in [0, 1]")?;
    ensure((0.0..=1.0).contains(&zeta2), "zeta2", "must lie in [0, 1]")
}

fn ket_from(x: &[f64]) -> Ket {
    Ket::from_fn(|i, _| C64::new(x[2 * i], x[2 * i + 1]))
}

/// Worst-case fidelity of the echo when each π pulse independently fails
/// to flip qubit `j` with probability `ζ_j`.
///
/// The objective `Σ_k |<ψ|Q_k|ψ>|²` over the Kraus paths is minimized by
/// Nelder-Mead from the four basis states and a fixed set of pseudo-random
/// starts, so repeated calls are deterministic.
pub fn echo_fidelity_bitflip(g: &DiagonalGate, g_perf: &DiagonalGate, zeta1: f64, zeta2: f64) -> Result<f64> {
    check_zeta(zeta1, zeta2)?;
    let paths = bitflip_paths(g, g_perf, zeta1, zeta2);
    let objective = |x: &[f64]| {
        let ket = ket_from(x);
        let norm2 = ket.norm_squared();
        if norm2 == 0.0 {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for q in &paths {
            acc += (ket.adjoint() * q * ket)[(0, 0)].norm_sqr();
        }
        acc / (norm2 * norm2)
    };
    let mut starts: Vec<[f64; 8]> = (0..4)
        .map(|i| {
            let mut x = [0.0; 8];
            x[2 * i] = 1.0;
            x
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b17f);
    for _ in 0..12 {
        starts.push(core::array::from_fn(|_| rng.gen::<f64>() * 2.0 - 1.0));
    }
    let opts = NelderMead { max_evaluations: 40_000, ..NelderMead::default() };
    let mut best = f64::INFINITY;
    for x0 in &starts {
        let mut m = nelder_mead(objective, x0, &opts);
        for _ in 0..3 {
            let again = nelder_mead(objective, &m.x, &NelderMead { initial_step: 0.01, ..opts });
            let improved = again.value < m.value - 1e-16;
            m = again;
            if !improved {
                break;
            }
        }
        best = best.min(m.value);
    }
    Ok(best.clamp(0.0, 1.0))
}

/// The π-pulse error mechanisms; exactly one is active per evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PiPulseErrorModel {
    Perfect,
    PhaseErrors(PhaseErrors),
    OverRotation { eps: f64, p: f64 },
    BitFlip { zeta1: f64, zeta2: f64 },
}

pub fn echo_fidelity(g: &DiagonalGate, g_perf: &DiagonalGate, model: &PiPulseErrorModel) -> Result<f64> {
    Ok(match model {
        PiPulseErrorModel::Perfect => echo_fidelity_perfect(g, g_perf),
        PiPulseErrorModel::PhaseErrors(errs) => {
            echo_fidelity_phase_errors(g.gate_angle() - g_perf.gate_angle(), errs)
        }
        PiPulseErrorModel::OverRotation { eps, p } => echo_fidelity_overrotation(g, g_perf, *eps, *p),
        PiPulseErrorModel::BitFlip { zeta1, zeta2 } => echo_fidelity_bitflip(g, g_perf, *zeta1, *zeta2)?,
    })
}
