//! Dormand-Prince 5(4) integrator with adaptive step control.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        Self { abs: 1e-12, rel: 1e-12 }
    }
}

/// Adaptive integrator state for `y' = f(t, y)` with `N` components.
///
/// The step size persists between calls to [`Dopri5::advance`], so sampling
/// a trajectory at many output times costs little more than one long run.
pub struct Dopri5<F, const N: usize> {
    f: F,
    tol: OdeTolerance,
    t: f64,
    y: [f64; N],
    h: f64,
    pub steps: usize,
    pub rejected: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

impl<F, const N: usize> Dopri5<F, N>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    pub fn new(f: F, t0: f64, y0: [f64; N], tol: OdeTolerance) -> Self {
        Self { f, tol, t: t0, y: y0, h: 0.0, steps: 0, rejected: 0 }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> [f64; N] {
        self.y
    }

    fn error_norm(&self, y_new: &[f64; N], err: &[f64; N]) -> f64 {
        let mut sum = 0.0;
        for i in 0..N {
            let scale = self.tol.abs + self.tol.rel * self.y[i].abs().max(y_new[i].abs());
            let r = err[i] / scale;
            sum += r * r;
        }
        (sum / N as f64).sqrt()
    }

    /// Integrates up to exactly `t_end` (which may be earlier than the
    /// current time).
    pub fn advance(&mut self, t_end: f64) -> Result<[f64; N]> {
        let span = t_end - self.t;
        if span == 0.0 {
            return Ok(self.y);
        }
        let dir = span.signum();
        if self.h == 0.0 || self.h.signum() != dir {
            self.h = dir * span.abs().min(1e-3 * (1.0 + self.t.abs()));
        }
        let min_step = 16.0 * f64::EPSILON * (self.t.abs() + t_end.abs()).max(1.0);
        let mut k1 = (self.f)(self.t, &self.y);
        while (t_end - self.t) * dir > 0.0 {
            let mut h = self.h;
            let last = (self.t + h - t_end) * dir >= 0.0;
            if last {
                h = t_end - self.t;
            }
            let t = self.t;
            let y = &self.y;
            let k2 = (self.f)(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
            let k3 = (self.f)(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = (self.f)(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = (self.f)(
                t + C5 * h,
                &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = (self.f)(
                t + h,
                &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = axpy(y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = (self.f)(t + h, &y_new);
            let mut err = [0.0; N];
            for i in 0..N {
                err[i] = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }
            let norm = self.error_norm(&y_new, &err);
            let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
            if norm <= 1.0 {
                self.t = if last { t_end } else { t + h };
                self.y = y_new;
                k1 = k7;
                self.steps += 1;
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
            } else {
                self.rejected += 1;
                self.h = h * factor.min(1.0);
                if self.h.abs() < min_step {
                    return Err(Error::StepSizeUnderflow { t: self.t });
                }
            }
        }
        Ok(self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let mut ode = Dopri5::new(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], OdeTolerance::default());
        let y = ode.advance(5.0).unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn backwards_integration() {
        let mut ode = Dopri5::new(|_, y: &[f64; 1]| [y[0]], 1.0, [1.0], OdeTolerance::default());
        let y = ode.advance(0.0).unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn underflow_is_reported() {
        // Finite-time blow-up at t = 1.
        let mut ode = Dopri5::new(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], OdeTolerance::default());
        assert!(matches!(ode.advance(2.0), Err(Error::StepSizeUnderflow { .. })));
    }
}
