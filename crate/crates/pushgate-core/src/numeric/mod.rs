//! Small numerical kernels: adaptive quadrature, an embedded Runge-Kutta
//! integrator and a Nelder-Mead minimizer.

pub mod minimize;
pub mod ode;
pub mod quad;

pub use minimize::{nelder_mead, NelderMead};
pub use ode::{Dopri5, OdeTolerance};
pub use quad::{integrate, Quadrature};
