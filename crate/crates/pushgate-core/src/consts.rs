//! CODATA 2018 constants.

pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_B: f64 = 1.380_649e-23;
pub const E_CHARGE: f64 = 1.602_176_634e-19;
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
pub const C_LIGHT: f64 = 299_792_458.0;
pub const ATOMIC_MASS: f64 = 1.660_539_066_60e-27;
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
