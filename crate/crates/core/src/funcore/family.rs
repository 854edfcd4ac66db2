use crate::error::{Error, Result};
use crate::jet::Jet;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use super::Interval;

/// Closed catalog of analytic families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `p (cos d(t - t0))^(1/d)`
    MaclaurinCos { p: f64, d: f64, t0: f64 },
    /// `p (cosh d(t - t0))^(1/d)`
    MaclaurinCosh { p: f64, d: f64, t0: f64 },
    /// `c + a cos t + b sin t`
    ConicFocal { c: f64, a: f64, b: f64 },
    /// `k |t|^q` on one half-line
    Power { k: f64, q: f64 },
    /// `k e^(m t)`
    ExpAffine { k: f64, m: f64 },
    /// `k exp(q2 t^2 + q1 t + q0)`
    ExpQuadratic { k: f64, q2: f64, q1: f64, q0: f64 },
    /// `a (b - c)^2 e^(a(b+c)t) / (e^(abt) + e^(act))^2`
    LogisticPlus { a: f64, b: f64, c: f64 },
    /// `a (b - c)^2 e^(a(b+c)t) / (e^(abt) - e^(act))^2`
    LogisticMinus { a: f64, b: f64, c: f64 },
    /// `a c^2 sec^2(a c t)`
    SecSq { a: f64, c: f64 },
    /// `c0 + c1 t + c2 t^2`
    AffinePoly { c0: f64, c1: f64, c2: f64 },
    /// `c0 + a cos(k t) + b sin(k t)`
    TrigAffine { c0: f64, a: f64, b: f64, k: f64 },
    /// `c0 + a e^(k t) + b e^(-k t)`
    ExpPair { c0: f64, a: f64, b: f64, k: f64 },
    /// Reciprocal polar radius of the unit circle centred at `(a, 0)`.
    /// For `|a| > 1` the nearer intersection is taken.
    CircleOffset { a: f64 },
}

/// Parameter names and defaults (None means required), by family tag.
pub(crate) const PARAM_TABLE: &[(&str, &[(&str, Option<f64>)])] = &[
    ("maclaurin_cos", &[("p", Some(1.0)), ("d", None), ("t0", Some(0.0))]),
    ("maclaurin_cosh", &[("p", Some(1.0)), ("d", None), ("t0", Some(0.0))]),
    ("conic_focal", &[("c", None), ("a", Some(0.0)), ("b", Some(0.0))]),
    ("power", &[("k", Some(1.0)), ("q", None)]),
    ("exp_affine", &[("k", Some(1.0)), ("m", None)]),
    (
        "exp_quadratic",
        &[("k", Some(1.0)), ("q2", None), ("q1", Some(0.0)), ("q0", Some(0.0))],
    ),
    ("logistic_plus", &[("a", None), ("b", None), ("c", None)]),
    ("logistic_minus", &[("a", None), ("b", None), ("c", None)]),
    ("sec_sq", &[("a", None), ("c", None)]),
    ("affine_poly", &[("c0", None), ("c1", Some(0.0)), ("c2", Some(0.0))]),
    (
        "trig_affine",
        &[("c0", None), ("a", Some(0.0)), ("b", Some(0.0)), ("k", Some(1.0))],
    ),
    (
        "exp_pair",
        &[("c0", Some(0.0)), ("a", Some(0.0)), ("b", Some(0.0)), ("k", Some(1.0))],
    ),
    ("circle_offset", &[("a", None)]),
];

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::MaclaurinCos { .. } => "maclaurin_cos",
            Family::MaclaurinCosh { .. } => "maclaurin_cosh",
            Family::ConicFocal { .. } => "conic_focal",
            Family::Power { .. } => "power",
            Family::ExpAffine { .. } => "exp_affine",
            Family::ExpQuadratic { .. } => "exp_quadratic",
            Family::LogisticPlus { .. } => "logistic_plus",
            Family::LogisticMinus { .. } => "logistic_minus",
            Family::SecSq { .. } => "sec_sq",
            Family::AffinePoly { .. } => "affine_poly",
            Family::TrigAffine { .. } => "trig_affine",
            Family::ExpPair { .. } => "exp_pair",
            Family::CircleOffset { .. } => "circle_offset",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Family::MaclaurinCos { p, d, t0 } | Family::MaclaurinCosh { p, d, t0 } => {
                vec![("p", p), ("d", d), ("t0", t0)]
            }
            Family::ConicFocal { c, a, b } => vec![("c", c), ("a", a), ("b", b)],
            Family::Power { k, q } => vec![("k", k), ("q", q)],
            Family::ExpAffine { k, m } => vec![("k", k), ("m", m)],
            Family::ExpQuadratic { k, q2, q1, q0 } => {
                vec![("k", k), ("q2", q2), ("q1", q1), ("q0", q0)]
            }
            Family::LogisticPlus { a, b, c } | Family::LogisticMinus { a, b, c } => {
                vec![("a", a), ("b", b), ("c", c)]
            }
            Family::SecSq { a, c } => vec![("a", a), ("c", c)],
            Family::AffinePoly { c0, c1, c2 } => vec![("c0", c0), ("c1", c1), ("c2", c2)],
            Family::TrigAffine { c0, a, b, k } | Family::ExpPair { c0, a, b, k } => {
                vec![("c0", c0), ("a", a), ("b", b), ("k", k)]
            }
            Family::CircleOffset { a } => vec![("a", a)],
        }
    }

    /// Build a family from its tag and a name lookup; missing optional
    /// parameters take their defaults.
    pub fn from_lookup(tag: &str, get: impl Fn(&str) -> Option<f64>) -> Result<Family> {
        let (_, table) = PARAM_TABLE
            .iter()
            .find(|(t, _)| *t == tag)
            .ok_or_else(|| Error::Parameter(format!("unknown family '{tag}'")))?;
        let mut v = Vec::with_capacity(table.len());
        for (name, default) in table.iter() {
            match get(name).or(*default) {
                Some(x) => v.push(x),
                None => {
                    return Err(Error::Parameter(format!(
                        "family '{tag}' requires parameter '{name}'"
                    )))
                }
            }
        }
        Ok(match tag {
            "maclaurin_cos" => Family::MaclaurinCos { p: v[0], d: v[1], t0: v[2] },
            "maclaurin_cosh" => Family::MaclaurinCosh { p: v[0], d: v[1], t0: v[2] },
            "conic_focal" => Family::ConicFocal { c: v[0], a: v[1], b: v[2] },
            "power" => Family::Power { k: v[0], q: v[1] },
            "exp_affine" => Family::ExpAffine { k: v[0], m: v[1] },
            "exp_quadratic" => Family::ExpQuadratic { k: v[0], q2: v[1], q1: v[2], q0: v[3] },
            "logistic_plus" => Family::LogisticPlus { a: v[0], b: v[1], c: v[2] },
            "logistic_minus" => Family::LogisticMinus { a: v[0], b: v[1], c: v[2] },
            "sec_sq" => Family::SecSq { a: v[0], c: v[1] },
            "affine_poly" => Family::AffinePoly { c0: v[0], c1: v[1], c2: v[2] },
            "trig_affine" => Family::TrigAffine { c0: v[0], a: v[1], b: v[2], k: v[3] },
            "exp_pair" => Family::ExpPair { c0: v[0], a: v[1], b: v[2], k: v[3] },
            "circle_offset" => Family::CircleOffset { a: v[0] },
            _ => unreachable!("tag validated against table"),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.params().iter().any(|(_, x)| !x.is_finite()) {
            return Err(Error::Parameter(format!("{}: parameters must be finite", self.tag())));
        }
        let fail = |what: &str| Err(Error::Parameter(format!("{}: {what}", self.tag())));
        match *self {
            Family::MaclaurinCos { p, d, .. } | Family::MaclaurinCosh { p, d, .. } => {
                if p <= 0.0 {
                    return fail("requires p > 0");
                }
                if d == 0.0 {
                    return fail("requires d != 0");
                }
            }
            Family::Power { k, .. } | Family::ExpAffine { k, .. } | Family::ExpQuadratic { k, .. } => {
                if k <= 0.0 {
                    return fail("requires k > 0");
                }
            }
            Family::LogisticPlus { a, b, c } | Family::LogisticMinus { a, b, c } => {
                if a <= 0.0 {
                    return fail("requires a > 0");
                }
                if b >= c {
                    return fail("requires b < c");
                }
            }
            Family::SecSq { a, c } => {
                if a <= 0.0 {
                    return fail("requires a > 0");
                }
                if c == 0.0 {
                    return fail("requires c != 0");
                }
            }
            Family::TrigAffine { k, .. } | Family::ExpPair { k, .. } => {
                if k == 0.0 {
                    return fail("requires k != 0");
                }
            }
            Family::ConicFocal { .. } | Family::AffinePoly { .. } | Family::CircleOffset { .. } => {}
        }
        Ok(())
    }

    pub(crate) fn jet(&self, t: f64) -> Jet {
        match *self {
            Family::MaclaurinCos { p, d, t0 } => Jet::affine(t, d, -d * t0).cos().powf(1.0 / d) * p,
            Family::MaclaurinCosh { p, d, t0 } => {
                Jet::affine(t, d, -d * t0).cosh().powf(1.0 / d) * p
            }
            Family::ConicFocal { c, a, b } => trig_affine(t, c, a, b, 1.0),
            Family::TrigAffine { c0, a, b, k } => trig_affine(t, c0, a, b, k),
            Family::Power { k, q } => {
                let s = if t < 0.0 { -1.0 } else { 1.0 };
                Jet::affine(t, s, 0.0).powf(q) * k
            }
            Family::ExpAffine { k, m } => Jet::affine(t, m, 0.0).exp() * k,
            Family::ExpQuadratic { k, q2, q1, q0 } => {
                let arg = Jet::new(q2 * t * t + q1 * t + q0, 2.0 * q2 * t + q1, 2.0 * q2, 0.0, 0.0);
                arg.exp() * k
            }
            Family::LogisticPlus { a, b, c } => {
                let (amp, w) = logistic_shape(a, b, c);
                Jet::affine(t, w, 0.0).cosh().powi(-2) * amp
            }
            Family::LogisticMinus { a, b, c } => {
                let (amp, w) = logistic_shape(a, b, c);
                Jet::affine(t, w, 0.0).sinh().powi(-2) * amp
            }
            Family::SecSq { a, c } => Jet::affine(t, a * c, 0.0).cos().powi(-2) * (a * c * c),
            Family::AffinePoly { c0, c1, c2 } => Jet::new(
                c0 + t * (c1 + t * c2),
                c1 + 2.0 * c2 * t,
                2.0 * c2,
                0.0,
                0.0,
            ),
            Family::ExpPair { c0, a, b, k } => {
                Jet::affine(t, k, 0.0).exp() * a + Jet::affine(t, -k, 0.0).exp() * b + c0
            }
            Family::CircleOffset { a } => circle_offset(t, a),
        }
    }

    /// Maximal open interval containing `anchor` on which the function is
    /// defined and positive.
    pub(crate) fn component(&self, anchor: f64) -> Result<Interval> {
        let outside = || {
            Error::Parameter(format!(
                "{}: anchor {anchor} is not inside a positive domain component",
                self.tag()
            ))
        };
        let iv = match *self {
            Family::MaclaurinCos { d, t0, .. } => {
                let (lo, hi) = cos_above(d * (anchor - t0), 0.0).ok_or_else(outside)?;
                affine_back(lo, hi, d, -d * t0)
            }
            Family::MaclaurinCosh { .. } | Family::ExpAffine { .. } | Family::ExpQuadratic { .. } => {
                Interval::REAL
            }
            Family::LogisticPlus { .. } => Interval::REAL,
            Family::ConicFocal { c, a, b } => trig_component(anchor, c, a, b, 1.0).ok_or_else(outside)?,
            Family::TrigAffine { c0, a, b, k } => trig_component(anchor, c0, a, b, k).ok_or_else(outside)?,
            Family::Power { q, .. } => {
                if q == 0.0 {
                    Interval::REAL
                } else {
                    half_line(anchor).ok_or_else(outside)?
                }
            }
            Family::LogisticMinus { .. } => half_line(anchor).ok_or_else(outside)?,
            Family::SecSq { a, c } => {
                let w = a * c;
                let u = w * anchor;
                let n = (u / PI).round();
                if (u - n * PI).abs() >= FRAC_PI_2 {
                    return Err(outside());
                }
                affine_back(n * PI - FRAC_PI_2, n * PI + FRAC_PI_2, w, 0.0)
            }
            Family::AffinePoly { c0, c1, c2 } => {
                let mut roots = Vec::new();
                if c2 != 0.0 {
                    let disc = c1 * c1 - 4.0 * c2 * c0;
                    if disc >= 0.0 {
                        // Numerically stable pair.
                        let sgn = if c1 >= 0.0 { 1.0 } else { -1.0 };
                        let qq = -0.5 * (c1 + sgn * disc.sqrt());
                        if qq != 0.0 {
                            roots.push(qq / c2);
                            roots.push(c0 / qq);
                        } else {
                            roots.push(0.0);
                        }
                    }
                } else if c1 != 0.0 {
                    roots.push(-c0 / c1);
                }
                between_breaks(anchor, roots).ok_or_else(outside)?
            }
            Family::ExpPair { c0, a, b, k } => {
                // Roots of a x^2 + c0 x + b with x = e^(k t) > 0.
                let mut xs = Vec::new();
                if a != 0.0 {
                    let disc = c0 * c0 - 4.0 * a * b;
                    if disc >= 0.0 {
                        let s = disc.sqrt();
                        xs.push((-c0 + s) / (2.0 * a));
                        xs.push((-c0 - s) / (2.0 * a));
                    }
                } else if c0 != 0.0 {
                    xs.push(-b / c0);
                }
                let roots = xs.into_iter().filter(|x| *x > 0.0).map(|x| x.ln() / k).collect();
                between_breaks(anchor, roots).ok_or_else(outside)?
            }
            Family::CircleOffset { a } => {
                let aa = a.abs();
                if aa < 1.0 {
                    Interval::REAL
                } else {
                    let centre = if a > 0.0 { 0.0 } else { PI };
                    let level = if aa == 1.0 { 0.0 } else { (1.0 - 1.0 / (a * a)).sqrt() };
                    let (lo, hi) = cos_above(anchor - centre, level).ok_or_else(outside)?;
                    Interval::open(lo + centre, hi + centre)
                }
            }
        };
        let v = self.jet(anchor).value;
        if !(v > 0.0 && v.is_finite()) {
            return Err(outside());
        }
        Ok(iv)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.tag(), ps.join(", "))
    }
}

fn logistic_shape(a: f64, b: f64, c: f64) -> (f64, f64) {
    (a * (c - b) * (c - b) / 4.0, a * (c - b) / 2.0)
}

fn trig_affine(t: f64, c0: f64, a: f64, b: f64, k: f64) -> Jet {
    let u = Jet::affine(t, k, 0.0);
    u.cos() * a + u.sin() * b + c0
}

fn circle_offset(t: f64, a: f64) -> Jet {
    let th = Jet::variable(t);
    let aa = a.abs();
    if aa == 1.0 {
        return (th.cos() * (2.0 * a)).recip();
    }
    let s = th.sin();
    let root = (s * s * (-a * a) + 1.0).sqrt();
    let c = th.cos() * a;
    if aa < 1.0 {
        (root - c) * (1.0 / (1.0 - a * a))
    } else {
        (root + c) * (1.0 / (a * a - 1.0))
    }
}

/// Component of `{u : cos u > level}` containing `u`, for `level` in `[-1, 1)`.
fn cos_above(u: f64, level: f64) -> Option<(f64, f64)> {
    if u.cos() <= level {
        return None;
    }
    let g = level.clamp(-1.0, 1.0).acos();
    let n = (u / TAU).round();
    Some((n * TAU - g, n * TAU + g))
}

/// Map `u`-interval back through `u = k t + off`.
fn affine_back(lo: f64, hi: f64, k: f64, off: f64) -> Interval {
    let a = (lo - off) / k;
    let b = (hi - off) / k;
    Interval::open(a.min(b), a.max(b))
}

fn trig_component(anchor: f64, c0: f64, a: f64, b: f64, k: f64) -> Option<Interval> {
    let r = a.hypot(b);
    if c0 > r {
        return Some(Interval::REAL);
    }
    if r == 0.0 {
        return None;
    }
    let phi = b.atan2(a);
    let u = k * anchor - phi;
    let (lo, hi) = cos_above(u, -c0 / r)?;
    Some(affine_back(lo, hi, k, -phi))
}

fn half_line(anchor: f64) -> Option<Interval> {
    if anchor > 0.0 {
        Some(Interval::open(0.0, f64::INFINITY))
    } else if anchor < 0.0 {
        Some(Interval::open(f64::NEG_INFINITY, 0.0))
    } else {
        None
    }
}

fn between_breaks(anchor: f64, mut breaks: Vec<f64>) -> Option<Interval> {
    breaks.retain(|b| b.is_finite());
    breaks.sort_by(f64::total_cmp);
    if breaks.contains(&anchor) {
        return None;
    }
    let lo = breaks.iter().copied().filter(|b| *b < anchor).fold(f64::NEG_INFINITY, f64::max);
    let hi = breaks.iter().copied().filter(|b| *b > anchor).fold(f64::INFINITY, f64::min);
    Some(Interval::open(lo, hi))
}
