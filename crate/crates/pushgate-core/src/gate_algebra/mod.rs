//! Two-qubit diagonal phase gates, spin-echo sequences and their
//! worst-case fidelities.
//!
//! Basis order is |00>, |01>, |10>, |11> with qubit 1 the left tensor
//! factor. A gate diagonal in this basis is stored as its four phases
//! `Θ_αβ`, indexed `2α + β`.

mod echo;
mod fidelity;

pub use echo::{
    bitflip_output_density, echo_fidelity, echo_fidelity_bitflip, echo_fidelity_overrotation,
    echo_fidelity_perfect, echo_fidelity_phase_errors, echo_sequence_residual, fidelity_no_echo,
    PhaseErrors, PiPulseErrorModel,
};
pub use fidelity::{fidelity_min_diag, min_expectation_sq};

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;
pub type Ket = Vector4<C64>;

const UNITARY_TOL: f64 = 1e-12;

pub(crate) fn cis(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

fn unitarity_deviation<const N: usize>(
    m: &nalgebra::SMatrix<C64, N, N>,
) -> f64 {
    let p = m.adjoint() * m;
    let mut dev: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((p[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    dev
}

/// A gate that is diagonal in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalGate {
    phases: [f64; 4],
}

impl DiagonalGate {
    pub fn new(phases: [f64; 4]) -> Result<Self> {
        if phases.iter().all(|p| p.is_finite()) {
            Ok(Self { phases })
        } else {
            Err(Error::InvalidParameter { name: "phases", reason: "must be finite" })
        }
    }

    pub fn from_phases(t00: f64, t01: f64, t10: f64, t11: f64) -> Result<Self> {
        Self::new([t00, t01, t10, t11])
    }

    pub fn identity() -> Self {
        Self { phases: [0.0; 4] }
    }

    /// The controlled phase `P_ϑ = diag(1, 1, 1, e^{iϑ})`.
    pub fn controlled_phase(vartheta: f64) -> Self {
        Self { phases: [0.0, 0.0, 0.0, vartheta] }
    }

    /// Product of single-qubit rotations `Z1(a) Z2(b)`.
    pub fn local_z(a: f64, b: f64) -> Self {
        Self { phases: [(a + b) / 2.0, (a - b) / 2.0, (b - a) / 2.0, -(a + b) / 2.0] }
    }

    pub fn phases(&self) -> [f64; 4] {
        self.phases
    }

    pub fn phase(&self, alpha: usize, beta: usize) -> f64 {
        self.phases[2 * alpha + beta]
    }

    /// `ϑ = Θ11 − Θ10 − Θ01 + Θ00`, the only entangling combination.
    pub fn gate_angle(&self) -> f64 {
        let [t00, t01, t10, t11] = self.phases;
        t11 - t10 - t01 + t00
    }

    /// `self · other` (both diagonal, so order is irrelevant).
    pub fn then(&self, other: &DiagonalGate) -> DiagonalGate {
        let mut phases = self.phases;
        for (p, q) in phases.iter_mut().zip(other.phases) {
            *p += q;
        }
        DiagonalGate { phases }
    }

    pub fn inverse(&self) -> DiagonalGate {
        DiagonalGate { phases: self.phases.map(|p| -p) }
    }

    /// Phases with the |00> phase removed.
    pub fn relative(&self) -> [f64; 4] {
        let p0 = self.phases[0];
        self.phases.map(|p| p - p0)
    }

    /// Single-qubit corrections `S1 = Z1(Θ10 − Θ00)`, `S2 = Z2(Θ01 − Θ00)`.
    /// `S1 S2 G` equals the controlled phase `P_ϑ` up to a global phase.
    pub fn local_correction(&self) -> (SingleQubitOp, SingleQubitOp) {
        let [t00, t01, t10, _] = self.phases;
        (SingleQubitOp::z(t10 - t00), SingleQubitOp::z(t01 - t00))
    }

    pub fn matrix(&self) -> Mat4 {
        Mat4::from_diagonal(&Vector4::from_fn(|i, _| cis(self.phases[i])))
    }
}

/// A 2×2 unitary acting on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitOp {
    matrix: Mat2,
}

impl SingleQubitOp {
    pub fn new(matrix: Mat2) -> Result<Self> {
        let deviation = unitarity_deviation(&matrix);
        if deviation <= UNITARY_TOL {
            Ok(Self { matrix })
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }

    /// `Z(Θ) = diag(e^{iΘ/2}, e^{−iΘ/2})`.
    pub fn z(theta: f64) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self { matrix: Mat2::new(cis(theta / 2.0), zero, zero, cis(-theta / 2.0)) }
    }

    /// The spin-echo π pulse `R = |0><1| − |1><0|`.
    pub fn pi_pulse() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self { matrix: Mat2::new(zero, one, -one, zero) }
    }

    /// Rotation error `M(ε) = [[cos ε/2, −sin ε/2], [sin ε/2, cos ε/2]]`.
    pub fn over_rotated(eps: f64) -> Self {
        let (s, c) = (eps / 2.0).sin_cos();
        Self { matrix: Mat2::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)) }
    }

    pub fn identity() -> Self {
        Self { matrix: Mat2::identity() }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    /// `self · other`.
    pub fn compose(&self, other: &SingleQubitOp) -> SingleQubitOp {
        SingleQubitOp { matrix: self.matrix * other.matrix }
    }

    pub fn on_first(&self) -> Mat4 {
        kron(&self.matrix, &Mat2::identity())
    }

    pub fn on_second(&self) -> Mat4 {
        kron(&Mat2::identity(), &self.matrix)
    }

    pub fn on_both(&self) -> Mat4 {
        kron(&self.matrix, &self.matrix)
    }
}

/// A normalized two-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    ket: Ket,
}

impl TwoQubitState {
    pub fn new(ket: Ket) -> Result<Self> {
        let norm = ket.norm();
        if (norm - 1.0).abs() <= 1e-12 {
            Ok(Self { ket })
        } else {
            Err(Error::NotNormalized { norm })
        }
    }

    /// Normalizes `ket` (which must be non-zero).
    pub fn normalized(ket: Ket) -> Result<Self> {
        let norm = ket.norm();
        if norm > 0.0 && norm.is_finite() {
            Ok(Self { ket: ket / C64::new(norm, 0.0) })
        } else {
            Err(Error::NotNormalized { norm })
        }
    }

    pub fn basis(index: usize) -> Self {
        let mut ket = Ket::zeros();
        ket[index] = C64::new(1.0, 0.0);
        Self { ket }
    }

    pub fn ket(&self) -> &Ket {
        &self.ket
    }

    pub fn density(&self) -> TwoQubitDensity {
        TwoQubitDensity { rho: self.ket * self.ket.adjoint() }
    }
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    rho: Mat4,
}

impl TwoQubitDensity {
    /// Checks hermiticity and unit trace to 1e-12 and positivity to −1e-10
    /// on the smallest eigenvalue.
    pub fn new(rho: Mat4) -> Result<Self> {
        let herm = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > 1e-12 {
            return Err(Error::InvalidDensity { what: "hermiticity", deviation: herm });
        }
        let trace = (rho.trace() - C64::new(1.0, 0.0)).norm();
        if trace > 1e-12 {
            return Err(Error::InvalidDensity { what: "unit trace", deviation: trace });
        }
        let hermitian = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
        let lowest = SymmetricEigen::new(hermitian).eigenvalues.min();
        if lowest < -1e-10 {
            return Err(Error::InvalidDensity { what: "positivity", deviation: -lowest });
        }
        Ok(Self { rho })
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.rho
    }

    /// `<ψ|ρ|ψ>`.
    pub fn overlap(&self, state: &TwoQubitState) -> f64 {
        (state.ket.adjoint() * self.rho * state.ket)[(0, 0)].re
    }
}
