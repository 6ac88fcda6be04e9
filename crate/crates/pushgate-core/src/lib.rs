//! Error budget for the two-ion "pushing" phase gate.
//!
//! A state-dependent optical force briefly pushes two trapped ions; the
//! modulated Coulomb interaction imprints a conditional phase. This crate
//! computes the resulting gate phases, the spin-echo error model, photon
//! scattering, sweet-spot conditions and the thermal infidelity of
//! non-uniform laser profiles. It is `no_std` (with `alloc`) and does no IO;
//! the `pushgate` crate adds config files, CSV output and the CLI.
//!
//! All quantities at the public interface are SI unless a name says
//! otherwise (`*_over_*` ratios, `omega_tau`, `kt_over_hw`).

#![no_std]
// `num_traits::Float` imports carry `allow(unused_imports)`: when std is in
// the dependency graph its inherent float methods take precedence.

extern crate alloc;

pub mod consts;
pub mod dipole_force;
pub mod error;
pub mod figures;
pub mod gate_algebra;
pub mod numeric;
pub mod oracle;
pub mod phase_engine;
pub mod sampling;
pub mod scenario;
pub mod stability;
pub mod thermal_nonuniform;
pub mod trap_dynamics;

pub use error::{Error, Result};
