//! Special functions needed by the closed-form radial kernels.

use std::f64::consts::PI;

use libm::erfc;

/// Scaled complementary error function `exp(x²) erfc(x)` for `x >= 0`.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 26.0 {
        return (x * x).exp() * erfc(x);
    }
    // Asymptotic series; at x >= 26 six terms reach machine precision.
    let inv2 = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..8 {
        term *= -((2 * k - 1) as f64) * inv2;
        sum += term;
    }
    sum / (x * PI.sqrt())
}

/// Moments `I_n = ∫_0^∞ r^n exp(−c r² − b r) dr` for `n = 0..=n_max`, with
/// `c > 0` and `b >= 0`.
pub fn gauss_exp_moments(c: f64, b: f64, n_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    gauss_exp_moments_into(c, b, &mut out);
    out
}

/// As [`gauss_exp_moments`], filling `out[n]` for `n < out.len()`.
pub fn gauss_exp_moments_into(c: f64, b: f64, out: &mut [f64]) {
    debug_assert!(c > 0.0 && b >= 0.0);
    let sqrt_c = c.sqrt();
    scaled_moments(b / (2.0 * sqrt_c), out);
    // I_n = c^{-(n+1)/2} J_n(t)
    let mut scale = 1.0 / sqrt_c;
    for v in out.iter_mut() {
        *v *= scale;
        scale /= sqrt_c;
    }
}

// J_n(t) = ∫_0^∞ s^n exp(−s² − 2ts) ds.
//
// Upward recursion loses digits once t is large (the wanted solution is the
// minimal one), so above t = 1.2 the sequence is generated downward from a
// truncated tail and normalized against J_0.
fn scaled_moments(t: f64, j: &mut [f64]) {
    let Some(n_max) = j.len().checked_sub(1) else {
        return;
    };
    let j0 = 0.5 * PI.sqrt() * erfcx(t);
    j[0] = j0;
    if n_max == 0 {
        return;
    }
    if t <= 1.2 {
        j[1] = 0.5 * (1.0 - 2.0 * t * j0);
        for n in 2..=n_max {
            j[n] = 0.5 * ((n - 1) as f64 * j[n - 2] - 2.0 * t * j[n - 1]);
        }
        return;
    }
    let extra = if t < 2.0 {
        130
    } else if t < 3.0 {
        80
    } else {
        40
    };
    let top = n_max + extra;
    let mut upper = 0.0; // J_{n}
    let mut lower = 1.0; // J_{n-1}
    j.iter_mut().for_each(|v| *v = 0.0);
    for n in (2..=top).rev() {
        // J_{n-2} = (2 J_n + 2t J_{n-1}) / (n - 1)
        let next = (2.0 * upper + 2.0 * t * lower) / (n - 1) as f64;
        upper = lower;
        lower = next;
        if n - 1 <= n_max {
            j[n - 1] = upper;
        }
        if n - 2 <= n_max {
            j[n - 2] = lower;
        }
        if lower.abs() > 1e200 {
            upper *= 1e-200;
            lower *= 1e-200;
            j.iter_mut().for_each(|v| *v *= 1e-200);
        }
    }
    let norm = j0 / j[0];
    j.iter_mut().for_each(|v| *v *= norm);
}
