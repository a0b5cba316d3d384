//! Independent brute-force oracle for 2 ⊗ 2 operators.
//!
//! Parametrizes the product manifold as a = (cos θ_a, e^{iφ_a} sin θ_a),
//! b = (cos θ_b, e^{iφ_b} sin θ_b), sweeps a uniform grid over the four
//! angles, and refines the best grid points by coordinate pattern search.
//! Every evaluation is a genuine product value, so the reported maximum never
//! exceeds the true supremum. No solver code is reused here.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::Error;
use crate::linalg::BipartiteOperator;
use crate::Result;

/// (max, min) of ⟨a,b|Â|a,b⟩ over the 2 ⊗ 2 product manifold, from a
/// `grid_points`-per-angle sweep plus local refinement.
pub fn brute_force_extrema(op: &BipartiteOperator, grid_points: usize) -> Result<(f64, f64)> {
    if op.dims().d_a() != 2 || op.dims().d_b() != 2 {
        return Err(Error::dims(format!(
            "brute-force oracle supports 2x2 factors only, got {}",
            op.dims()
        )));
    }
    if grid_points < 8 {
        return Err(Error::InvalidParam(
            "brute-force oracle needs grid_points >= 8".into(),
        ));
    }

    let m = op.entries();
    let mut best_max = (f64::NEG_INFINITY, [0.0f64; 4]);
    let mut best_min = (f64::INFINITY, [0.0f64; 4]);

    let thetas: Vec<f64> = (0..grid_points)
        .map(|i| FRAC_PI_2 * i as f64 / (grid_points - 1) as f64)
        .collect();
    let phis: Vec<f64> = (0..grid_points)
        .map(|i| TAU * i as f64 / grid_points as f64)
        .collect();

    for &ta in &thetas {
        for &pa in &phis {
            for &tb in &thetas {
                for &pb in &phis {
                    let x = [ta, pa, tb, pb];
                    let g = eval(m, &x);
                    if g > best_max.0 {
                        best_max = (g, x);
                    }
                    if g < best_min.0 {
                        best_min = (g, x);
                    }
                }
            }
        }
    }

    let step0 = FRAC_PI_2 / (grid_points - 1) as f64;
    let refined_max = pattern_search(m, best_max.1, step0, true);
    let refined_min = pattern_search(m, best_min.1, step0, false);
    Ok((refined_max, refined_min))
}

fn eval(m: &DMatrix<Complex64>, x: &[f64; 4]) -> f64 {
    let a = [
        Complex64::new(x[0].cos(), 0.0),
        Complex64::from_polar(x[0].sin(), x[1]),
    ];
    let b = [
        Complex64::new(x[2].cos(), 0.0),
        Complex64::from_polar(x[2].sin(), x[3]),
    ];
    let v = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
    let mut acc = Complex64::default();
    for i in 0..4 {
        for j in 0..4 {
            acc += v[i].conj() * m[(i, j)] * v[j];
        }
    }
    acc.re
}

/// Coordinate pattern search: try ± step on each angle, keep improvements,
/// halve the step otherwise. Angles may leave their nominal ranges; the
/// parametrization extends smoothly.
fn pattern_search(m: &DMatrix<Complex64>, mut x: [f64; 4], mut step: f64, maximize: bool) -> f64 {
    let sign = if maximize { 1.0 } else { -1.0 };
    let mut best = sign * eval(m, &x);
    while step > 1e-8 {
        let mut improved = false;
        for k in 0..4 {
            for delta in [step, -step] {
                let mut y = x;
                y[k] += delta;
                let v = sign * eval(m, &y);
                if v > best + f64::EPSILON * best.abs() {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    sign * best
}
