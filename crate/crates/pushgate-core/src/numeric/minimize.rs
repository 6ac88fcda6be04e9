//! Derivative-free minimization (Nelder-Mead downhill simplex).

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub initial_step: f64,
    pub f_tol: f64,
    pub x_tol: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self { initial_step: 0.2, f_tol: 1e-15, x_tol: 1e-10, max_evaluations: 20_000 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Standard Nelder-Mead with reflection 1, expansion 2, contraction and
/// shrink 1/2.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMead) -> Minimum {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    let mut evaluations = n + 1;
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    while evaluations < opts.max_evaluations {
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(core::cmp::Ordering::Equal));
        let best = order[0];
        let worst = order[n];
        let second = order[n - 1];

        let spread = values[worst] - values[best];
        let size = simplex
            .iter()
            .map(|p| p.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= opts.f_tol && size <= opts.x_tol {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / n as f64;
            }
        }
        let along = |coef: f64, out: &mut Vec<f64>, worst_p: &[f64]| {
            for j in 0..n {
                out[j] = centroid[j] + coef * (worst_p[j] - centroid[j]);
            }
        };

        along(-1.0, &mut trial, &simplex[worst]);
        let fr = f(&trial);
        evaluations += 1;
        if fr < values[best] {
            along(-2.0, &mut trial2, &simplex[worst]);
            let fe = f(&trial2);
            evaluations += 1;
            if fe < fr {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = fe;
            } else {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = fr;
            continue;
        }
        let outside = fr < values[worst];
        along(if outside { -0.5 } else { 0.5 }, &mut trial2, &simplex[worst]);
        let fc = f(&trial2);
        evaluations += 1;
        if fc < fr.min(values[worst]) {
            simplex[worst].copy_from_slice(&trial2);
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                *x = a + 0.5 * (*x - a);
            }
            values[i] = f(&simplex[i]);
            evaluations += 1;
        }
    }
    let (best, value) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    Minimum { x: simplex.swap_remove(best), value, evaluations }
}
