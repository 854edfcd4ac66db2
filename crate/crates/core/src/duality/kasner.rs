use crate::error::{Error, Result};
use crate::funcore::ScalarFunction;
use serde::Serialize;

/// `g + g'' = c1 g^e1 + c2 g^e2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPowerLaw {
    pub terms: [(f64, f64); 2],
}

impl TwoPowerLaw {
    pub fn eval(&self, g: f64) -> f64 {
        self.terms.iter().map(|(c, e)| c * g.powf(*e)).sum()
    }

    /// The single surviving term when the law is a pure power.
    pub fn pure_power(&self) -> Option<(f64, f64)> {
        let [(c1, e1), (c2, e2)] = self.terms;
        match (c1 == 0.0, c2 == 0.0) {
            (true, _) => Some((c2, e2)),
            (false, true) => Some((c1, e1)),
            _ if e1 == e2 => Some((c1 + c2, e1)),
            _ => None,
        }
    }
}

/// Why a dual law reduced to a single power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Collapse {
    /// `c = 0`: the original orbit is force-free.
    NoForce,
    /// `2 + alpha d - d = 0`: the force term drops out; the classical
    /// inverse-square / linear pairing is the case `alpha = 0, d = 2`.
    ForceTermVanishes,
    /// `b = 0`: orbit constant zero.
    NoOrbitConstant,
    /// `d = 1`: the transform is the identity.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualLaw {
    pub law: TwoPowerLaw,
    pub collapses: Vec<Collapse>,
    /// Force exponent `-2 - alpha` of the source law.
    pub source_beta: f64,
    /// Force exponent of the dual when it is a pure power.
    pub dual_beta: Option<f64>,
}

/// Law satisfied by `g = f(d t)^(1/d)` when `f + f'' = c f^alpha` with
/// `f^2 + f'^2 = 2c f^(alpha+1)/(alpha+1) + b`.
pub fn kasner_dual_law(c: f64, alpha: f64, b: f64, d: f64) -> Result<DualLaw> {
    if alpha == -1.0 {
        return Err(Error::LogarithmicCase);
    }
    if d == 0.0 || !d.is_finite() {
        return Err(Error::Parameter("dual law requires finite d != 0".into()));
    }
    let k = 2.0 + alpha * d - d;
    let law = TwoPowerLaw {
        terms: [(c * k / (alpha + 1.0), 1.0 + alpha * d - d), (b * (1.0 - d), 1.0 - 2.0 * d)],
    };
    let mut collapses = Vec::new();
    if c == 0.0 {
        collapses.push(Collapse::NoForce);
    }
    if k == 0.0 {
        collapses.push(Collapse::ForceTermVanishes);
    }
    if b == 0.0 {
        collapses.push(Collapse::NoOrbitConstant);
    }
    if d == 1.0 {
        collapses.push(Collapse::Identity);
    }
    let dual_beta = law.pure_power().map(|(_, e)| -2.0 - e);
    Ok(DualLaw { law, collapses, source_beta: -2.0 - alpha, dual_beta })
}

/// `f^2 + f'^2 - 2c f^(alpha+1)/(alpha+1)` at `t`; constant along ns solutions.
pub fn orbit_constant(f: &ScalarFunction, c: f64, alpha: f64, t: f64) -> Result<f64> {
    if alpha == -1.0 {
        return Err(Error::LogarithmicCase);
    }
    let j = f.jet(t)?;
    Ok(j.value * j.value + j.d1 * j.d1 - 2.0 * c * j.value.powf(alpha + 1.0) / (alpha + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kepler_to_hooke() {
        let r = kasner_dual_law(1.0, 0.0, -0.5, 2.0).unwrap();
        assert_eq!(r.law.pure_power(), Some((0.5, -3.0)));
        assert_eq!(r.dual_beta, Some(1.0));
        assert!(r.collapses.contains(&Collapse::ForceTermVanishes));
        let (b, bp) = (r.source_beta, r.dual_beta.unwrap());
        assert_eq!((b + 3.0) * (bp + 3.0), 4.0);
    }

    #[test]
    fn force_free_source() {
        let r = kasner_dual_law(0.0, 2.0, 0.7, 3.0).unwrap();
        assert_eq!(r.law.pure_power(), Some((0.7 * -2.0, -5.0)));
        assert_eq!(r.collapses, vec![Collapse::NoForce]);
    }

    #[test]
    fn logarithmic_case_rejected() {
        assert_eq!(kasner_dual_law(1.0, -1.0, 0.0, 2.0).unwrap_err(), Error::LogarithmicCase);
    }

    #[test]
    fn inverse_fifth_is_self_dual_under_inversion() {
        // alpha = 3 with d = -1: the force term vanishes and 1 - 2d = 3.
        let r = kasner_dual_law(1.0, 3.0, 0.4, -1.0).unwrap();
        assert_eq!(r.law.pure_power(), Some((0.8, 3.0)));
        assert_eq!(r.dual_beta, Some(-5.0));
        // With b = 0 the c-term survives alone: exponent 1 + alpha d - d.
        let s = kasner_dual_law(1.0, 1.0, 0.0, -1.0).unwrap();
        assert_eq!(s.law.pure_power().unwrap().1, 1.0);
    }

    #[test]
    fn exponents_coincide_only_at_log_case() {
        for &alpha in &[-3.0f64, -0.5, 0.0, 0.5, 2.0] {
            for &d in &[-2.0, 0.5, 3.0] {
                let e1 = 1.0 + alpha * d - d;
                let e2 = 1.0 - 2.0 * d;
                assert!((e1 - e2).abs() > 1e-12, "alpha={alpha} d={d}");
            }
        }
    }
}
