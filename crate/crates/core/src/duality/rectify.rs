use crate::error::Result;
use crate::funcore::ScalarFunction;
use crate::quadrature::QuadConfig;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rectification {
    pub len_spiral: f64,
    pub len_diagonal_dual: f64,
    pub difference: f64,
}

/// Arclength of the spiral `r f(theta) = 1` against that of the curve
/// `(G, g)`, `g = 1/f`, over the same parameter interval.
pub fn rectification_check(f: &ScalarFunction, t1: f64, t2: f64) -> Result<Rectification> {
    let cfg = QuadConfig::default();
    let len_spiral = f.integrate_map(t1, t2, &cfg, |j| {
        let f2 = j.value * j.value;
        (f2 + j.d1 * j.d1).sqrt() / f2
    })?;
    let g = f.reciprocal();
    let len_diagonal_dual = g.integrate_map(t1, t2, &cfg, |j| j.value.hypot(j.d1))?;
    Ok(Rectification {
        len_spiral,
        len_diagonal_dual,
        difference: (len_spiral - len_diagonal_dual).abs(),
    })
}
