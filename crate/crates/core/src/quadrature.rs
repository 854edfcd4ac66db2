//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-14,
            max_intervals: 2000,
        }
    }
}

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
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7K15 panel: (Kronrod estimate, |Kronrod - Gauss|).
fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Integral of `f` over `[a, b]`; reversed limits give the negated value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, cfg).map(|v| -v);
    }
    let (v0, e0) = panel(&f, a, b);
    if !v0.is_finite() {
        return Err(Error::Convergence {
            what: format!("integrand not finite on [{a}, {b}]"),
            achieved: f64::INFINITY,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a,
        b,
        value: v0,
        err: e0,
    });
    let (mut total, mut err) = (v0, e0);
    let mut count = 1;
    loop {
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(total);
        }
        if count >= cfg.max_intervals {
            return Err(Error::Convergence {
                what: format!("quadrature on [{a}, {b}]"),
                achieved: err,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Interval cannot be split further in floating point.
            return Err(Error::Convergence {
                what: format!("quadrature on [{a}, {b}] (interval exhausted)"),
                achieved: err,
            });
        }
        let (lv, le) = panel(&f, worst.a, m);
        let (rv, re) = panel(&f, m, worst.b);
        if !(lv.is_finite() && rv.is_finite()) {
            return Err(Error::Convergence {
                what: format!("integrand not finite near {m}"),
                achieved: f64::INFINITY,
            });
        }
        total += lv + rv - worst.value;
        err += le + re - worst.err;
        heap.push(Piece {
            a: worst.a,
            b: m,
            value: lv,
            err: le,
        });
        heap.push(Piece {
            a: m,
            b: worst.b,
            value: rv,
            err: re,
        });
        count += 1;
        // Guard against cancellation drift in the running error.
        if count % 64 == 0 {
            err = heap.iter().map(|p| p.err).sum();
            total = heap.iter().map(|p| p.value).sum();
        }
    }
}
