//! Adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 2000;

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    heap.push(kronrod(&f, a, b));
    for _ in 0..MAX_INTERVALS {
        let (total, err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(kronrod(&f, worst.a, mid));
        heap.push(kronrod(&f, mid, worst.b));
    }
    let (total, err) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Err(Error::Quadrature(format!(
        "estimate {total:e} with error {err:e} after {MAX_INTERVALS} subdivisions"
    )))
}

/// Integrates `f` over `[0, ∞)` through the map `r = scale · t / (1 − t)`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    scale: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let one_minus = 1.0 - t;
        let r = scale * t / one_minus;
        let v = f(r) * scale / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, rel_tol, abs_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1e-14, 0.0).unwrap();
        assert!((v - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_half_line() {
        let v = integrate_half_line(|r| (-r * r).exp(), 1.0, 1e-13, 0.0).unwrap();
        assert!((v - 0.5 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn singular_but_integrable() {
        let v = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10, 0.0).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }
}
