//! Echo-gate fidelity when the force depends on where the thermally moving
//! ion happens to be.
//!
//! The ion position is Gaussian with `σ = √(k_BT/mω²) = a√(k_BT/ħω)`, and the
//! gate angle scales as `θ = θ0 ξ²(x)/ξ0²`. Everything here is expressed
//! through the moments `ξⁿ̄ = ∫ ξⁿ(x) P(x) dx` for `n = 2, 4, 6, 8`.

use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)]
use num_traits::Float;

use crate::dipole_force::{LaserConfig, LaserMode};
use crate::error::{ensure, Result};
use crate::numeric::integrate;
use crate::trap_dynamics::{IonSpecies, TrapConfig};

/// Above this `r = 2σ/w` the travelling-wave series is not trusted.
pub const TW_SERIES_MAX_R: f64 = 0.3;
/// `η²⟨n⟩` below this counts as Lamb-Dicke.
pub const LAMB_DICKE_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionDistribution {
    /// m
    pub sigma: f64,
}

impl PositionDistribution {
    pub fn new(sigma: f64) -> Result<Self> {
        ensure(sigma >= 0.0 && sigma.is_finite(), "sigma", "must be non-negative")?;
        Ok(Self { sigma })
    }

    pub fn thermal(species: &IonSpecies, trap: &TrapConfig, kt_over_hw: f64) -> Result<Self> {
        ensure(kt_over_hw >= 0.0, "kt_over_hw", "must be non-negative")?;
        Self::new(species.oscillator_length(trap.omega) * kt_over_hw.sqrt())
    }

    pub fn density(&self, x: f64) -> f64 {
        let s = self.sigma;
        (-x * x / (2.0 * s * s)).exp() / (s * (2.0 * PI).sqrt())
    }
}

/// Position dependence of the force amplitude, normalised to `ξ0` at the
/// equilibrium position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForceProfile {
    Travelling { xi0: f64, x0: f64, waist: f64 },
    Standing { xi0: f64, k: f64, kz0: f64 },
}

impl ForceProfile {
    pub fn from_laser(species: &IonSpecies, laser: &LaserConfig, xi0: f64) -> Result<Self> {
        let p = match laser.mode {
            LaserMode::Travelling { x0 } => ForceProfile::Travelling { xi0, x0, waist: laser.waist },
            LaserMode::Standing { kz0 } => ForceProfile::Standing { xi0, k: species.wavenumber(), kz0 },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ForceProfile::Travelling { xi0, x0, waist } => {
                ensure(xi0.is_finite(), "xi0", "must be finite")?;
                ensure(waist > 0.0, "waist", "must be positive")?;
                ensure(x0 != 0.0 && x0.is_finite(), "x0", "must be non-zero")
            }
            ForceProfile::Standing { xi0, k, kz0 } => {
                ensure(xi0.is_finite(), "xi0", "must be finite")?;
                ensure(k > 0.0, "k", "must be positive")?;
                ensure((2.0 * kz0).sin().abs() > 1e-12, "kz0", "sin(2kz0) must be non-zero")
            }
        }
    }

    pub fn xi0(&self) -> f64 {
        match *self {
            ForceProfile::Travelling { xi0, .. } | ForceProfile::Standing { xi0, .. } => xi0,
        }
    }

    pub fn at(&self, pos: f64) -> f64 {
        match *self {
            ForceProfile::Travelling { xi0, x0, waist } => {
                xi0 * (x0 - pos) / x0 * (-2.0 * (pos * pos - 2.0 * x0 * pos) / (waist * waist)).exp()
            }
            ForceProfile::Standing { xi0, k, kz0 } => xi0 * (2.0 * (kz0 - k * pos)).sin() / (2.0 * kz0).sin(),
        }
    }
}

/// `ξⁿ̄` for `n = 2, 4, 6, 8`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiMoments {
    pub m2: f64,
    pub m4: f64,
    pub m6: f64,
    pub m8: f64,
}

impl XiMoments {
    /// All moments of a force that does not vary: `ξ0ⁿ`.
    pub fn point(xi0: f64) -> Self {
        let x2 = xi0 * xi0;
        Self { m2: x2, m4: x2 * x2, m6: x2 * x2 * x2, m8: x2 * x2 * x2 * x2 }
    }

    fn scaled(xi0: f64, rel: [f64; 4]) -> Self {
        let p = Self::point(xi0);
        Self { m2: p.m2 * rel[0], m4: p.m4 * rel[1], m6: p.m6 * rel[2], m8: p.m8 * rel[3] }
    }

    /// `ξ⁴̄ − (ξ²̄)² ≥ 0` and `ξ⁸̄ − (ξ⁴̄)² ≥ 0`, with a relative slack.
    pub fn is_consistent(&self) -> bool {
        let slack = 1e-12;
        self.m2 >= 0.0
            && self.m4 - self.m2 * self.m2 >= -slack * self.m4.abs()
            && self.m8 - self.m4 * self.m4 >= -slack * self.m8.abs()
    }
}

/// Moments by adaptive quadrature over ±12σ.
pub fn moments_quadrature(profile: &ForceProfile, dist: &PositionDistribution) -> Result<XiMoments> {
    profile.validate()?;
    if dist.sigma == 0.0 {
        return Ok(XiMoments::point(profile.xi0()));
    }
    let lim = 12.0 * dist.sigma;
    let scale = profile.xi0().abs();
    let m = |n: i32| -> Result<f64> {
        let q = integrate(|x| (profile.at(x) / scale).powi(n) * dist.density(x), -lim, lim, 1e-14, 1e-12)?;
        Ok(q.value * scale.powi(n))
    };
    Ok(XiMoments { m2: m(2)?, m4: m(4)?, m6: m(6)?, m8: m(8)? })
}

/// Travelling-wave moments as a series in `r = 2σ/w`,
/// `ξⁿ̄ = ξ0ⁿ[1 + r²A⁽ⁿ⁾ + r⁴B⁽ⁿ⁾]` with `R = 2x0/w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesMoments {
    pub moments: XiMoments,
    pub r: f64,
    /// `r ≤ 0.3`.
    pub valid: bool,
}

pub fn series_coefficients(big_r: f64) -> [(f64, f64); 4] {
    let r2 = big_r * big_r;
    let r4 = r2 * r2;
    [
        (1.0 / r2 + 2.0 * r2 - 5.0, -3.0 / r2 + 19.5 - 14.0 * r2 + 2.0 * r4),
        (6.0 / r2 + 8.0 * r2 - 18.0, 3.0 / r4 - 84.0 / r2 + 246.0 - 176.0 * r2 + 32.0 * r4),
        (15.0 / r2 + 18.0 * r2 - 39.0, 45.0 / r4 - 495.0 / r2 + 1147.5 - 810.0 * r2 + 162.0 * r4),
        (28.0 / r2 + 32.0 * r2 - 68.0, 210.0 / r4 - 1680.0 / r2 + 3480.0 - 2432.0 * r2 + 512.0 * r4),
    ]
}

pub fn moments_tw_series(profile: &ForceProfile, dist: &PositionDistribution) -> Result<SeriesMoments> {
    let ForceProfile::Travelling { xi0, x0, waist } = *profile else {
        return Err(crate::error::invalid("profile", "series applies to the travelling wave"));
    };
    profile.validate()?;
    let r = 2.0 * dist.sigma / waist;
    let coeffs = series_coefficients(2.0 * x0 / waist);
    let r2 = r * r;
    let rel = coeffs.map(|(a, b)| 1.0 + r2 * a + r2 * r2 * b);
    Ok(SeriesMoments { moments: XiMoments::scaled(xi0, rel), r, valid: r <= TW_SERIES_MAX_R })
}

/// Standing-wave moments, exact in `kσ`.
pub fn moments_sw_closed(profile: &ForceProfile, dist: &PositionDistribution) -> Result<XiMoments> {
    let ForceProfile::Standing { xi0, k, kz0 } = *profile else {
        return Err(crate::error::invalid("profile", "closed moments apply to the standing wave"));
    };
    profile.validate()?;
    let q = (k * dist.sigma).powi(2);
    // e^{−8j²(kσ)²} cos(4j kz0)
    let h = |j: f64| (-8.0 * j * j * q).exp() * (4.0 * j * kz0).cos();
    let s2 = (2.0 * kz0).sin().powi(2);
    let rel = [
        (1.0 - h(1.0)) / (2.0 * s2),
        (3.0 - 4.0 * h(1.0) + h(2.0)) / (8.0 * s2 * s2),
        (10.0 - 15.0 * h(1.0) + 6.0 * h(2.0) - h(3.0)) / (32.0 * s2.powi(3)),
        (35.0 - 56.0 * h(1.0) + 28.0 * h(2.0) - 8.0 * h(3.0) + h(4.0)) / (128.0 * s2.powi(4)),
    ];
    Ok(XiMoments::scaled(xi0, rel))
}

/// Echo fidelity through fourth order in `a/d` for a position-dependent
/// force with `θ = θ0 ξ²/ξ0²`:
/// `1 − (θ0²/4ξ0⁴){V42 + κ²[2(12t)V42 + √2 V62] + κ⁴[(12t)²(2ξ⁴̄ − (ξ²̄)²) + √2(12t)V62 + V84/2]}`
/// with `V42 = ξ⁴̄ − (ξ²̄)²`, `V62 = ξ⁶̄ − ξ²̄ξ⁴̄`, `V84 = ξ⁸̄ − (ξ⁴̄)²`.
pub fn fidelity_nonuniform_full(theta0: f64, a_over_d: f64, kt_over_hw: f64, xi0: f64, m: &XiMoments) -> f64 {
    let t12 = 12.0 * kt_over_hw;
    let k2 = a_over_d * a_over_d;
    let v42 = m.m4 - m.m2 * m.m2;
    let v62 = m.m6 - m.m2 * m.m4;
    let v84 = m.m8 - m.m4 * m.m4;
    let braces = v42
        + k2 * (2.0 * t12 * v42 + SQRT_2 * v62)
        + k2 * k2 * (t12 * t12 * (2.0 * m.m4 - m.m2 * m.m2) + SQRT_2 * t12 * v62 + 0.5 * v84);
    1.0 - theta0 * theta0 / (4.0 * xi0.powi(4)) * braces
}

/// `𝒬(y) = 12y⁴ − 64y² + 89 − 34/y² + 1/y⁴`.
pub fn q_poly(y: f64) -> f64 {
    let y2 = y * y;
    12.0 * y2 * y2 - 64.0 * y2 + 89.0 - 34.0 / y2 + 1.0 / (y2 * y2)
}

/// Leading travelling-wave terms,
/// `1 − (6θ0t)²κ⁴ − (2θ0/3)(6θ0t)(a/w)²(R − 1/R)² − (2/9)(6θ0t)²(a/w)⁴𝒬(R)`.
pub fn fidelity_tw_closed(theta0: f64, a_over_d: f64, a_over_w: f64, kt_over_hw: f64, big_r: f64) -> f64 {
    let x = 6.0 * theta0 * kt_over_hw;
    let aw2 = a_over_w * a_over_w;
    1.0 - x * x * a_over_d.powi(4)
        - 2.0 * theta0 / 3.0 * x * aw2 * (big_r - 1.0 / big_r).powi(2)
        - 2.0 / 9.0 * x * x * aw2 * aw2 * q_poly(big_r)
}

/// Standing wave at `kz0 = π/4`: `1 − (θ0²/32){1 − exp[−16(ka)²k_BT/ħω]}²`.
pub fn fidelity_sw_closed(theta0: f64, ka: f64, kt_over_hw: f64) -> f64 {
    let e = 1.0 - (-16.0 * ka * ka * kt_over_hw).exp();
    1.0 - theta0 * theta0 / 32.0 * e * e
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambDicke {
    /// `η = ka/√2`.
    pub eta: f64,
    /// `(kσ)² = 2η²⟨n⟩`.
    pub k_sigma_sq: f64,
    /// `η²⟨n⟩ < 0.1`.
    pub inside: bool,
}

pub fn lamb_dicke(ka: f64, mean_n: f64) -> LambDicke {
    let eta = ka / SQRT_2;
    let x = eta * eta * mean_n;
    LambDicke { eta, k_sigma_sq: 2.0 * x, inside: x < LAMB_DICKE_THRESHOLD }
}
