use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
#[allow(unused_imports)]
use num_traits::Float;

use super::{cis, Mat4};

fn half_chord_sq(a: f64, b: f64) -> f64 {
    let s = ((a - b) / 2.0).sin();
    s * s
}

/// Worst-case fidelity `min_ψ |<ψ|E|ψ>|²` of the diagonal error
/// `E = diag(1, e^{iθ01}, e^{iθ10}, e^{iθ11})`.
///
/// With populations `p` the objective is `1 − 4 f(p)`, where
/// `f = Σ_{k<l} p_k p_l sin²((θ_k − θ_l)/2)` is a quadratic form on the
/// probability simplex. Its maximum lies at a stationary point in the
/// relative interior of some face, so every face is solved exactly and the
/// best feasible candidate wins. Faces whose stationarity system is singular
/// are skipped: there the quadratic is flat along the null direction and the
/// same value is reached on a lower-dimensional face.
pub fn fidelity_min_diag(theta01: f64, theta10: f64, theta11: f64) -> f64 {
    let theta = [0.0, theta01, theta10, theta11];
    let mut a = [[0.0; 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            a[k][l] = half_chord_sq(theta[k], theta[l]);
        }
    }
    let objective = |p: &[f64; 4]| {
        let mut f = 0.0;
        for k in 0..4 {
            for l in (k + 1)..4 {
                f += p[k] * p[l] * a[k][l];
            }
        }
        f
    };

    let mut best: f64 = 0.0;
    for mask in 1u32..16 {
        let nodes: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
        let m = nodes.len();
        if m < 2 {
            continue;
        }
        // [A_S  −1] [p]   [0]
        // [1ᵀ    0] [λ] = [1]
        let mut lhs = DMatrix::<f64>::zeros(m + 1, m + 1);
        let mut rhs = DVector::<f64>::zeros(m + 1);
        for (r, &k) in nodes.iter().enumerate() {
            for (c, &l) in nodes.iter().enumerate() {
                lhs[(r, c)] = a[k][l];
            }
            lhs[(r, m)] = -1.0;
            lhs[(m, r)] = 1.0;
        }
        rhs[m] = 1.0;
        let Some(sol) = lhs.lu().solve(&rhs) else { continue };
        if sol.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let mut p = [0.0; 4];
        for (r, &k) in nodes.iter().enumerate() {
            if sol[r] < -1e-12 {
                p = [f64::NAN; 4];
                break;
            }
            p[k] = sol[r].max(0.0);
        }
        let total: f64 = p.iter().sum();
        if !(total > 0.0) {
            continue;
        }
        p.iter_mut().for_each(|v| *v /= total);
        best = best.max(objective(&p));
    }
    (1.0 - 4.0 * best).clamp(0.0, 1.0)
}

fn support(q: &Mat4, phi: f64) -> f64 {
    let rot = cis(-phi);
    let h = (q * rot + q.adjoint() * rot.conj()) * super::C64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.max()
}

/// `min_ψ |<ψ|Q|ψ>|²` over normalized two-qubit states for an arbitrary
/// (not necessarily normal) operator `Q`.
///
/// The numerical range `W(Q) = {<ψ|Q|ψ>}` is convex, so the minimum modulus
/// is the distance from the origin to `W(Q)`. That distance is
/// `max(0, −min_φ h(φ))` with support function
/// `h(φ) = λ_max((e^{−iφ}Q + e^{iφ}Q†)/2)`, which is scanned on a grid and
/// refined by golden-section search around every local minimum.
pub fn min_expectation_sq(q: &Mat4) -> f64 {
    const GRID: usize = 360;
    let step = 2.0 * core::f64::consts::PI / GRID as f64;
    let values: Vec<f64> = (0..GRID).map(|i| support(q, i as f64 * step)).collect();
    let mut lowest = f64::INFINITY;
    for i in 0..GRID {
        let prev = values[(i + GRID - 1) % GRID];
        let next = values[(i + 1) % GRID];
        if values[i] > prev || values[i] > next {
            continue;
        }
        let center = i as f64 * step;
        lowest = lowest.min(golden_min(|phi| support(q, phi), center - step, center + step));
    }
    let dist = (-lowest).max(0.0);
    (dist * dist).min(1.0)
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-13 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}
