//! Analytic scalar functions with exact fourth-order jets.
//!
//! A [`ScalarFunction`] is either a member of the closed family catalog or a
//! composite built from one (d-transform, reciprocal, shift, positive
//! scaling), or a numeric profile such as a quadrature solution. Every
//! function carries a single connected domain chosen by an anchor point.

mod family;

pub use family::Family;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::quadrature::{self, QuadConfig};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// A real interval; open unless `closed` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub closed: bool,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        closed: false,
    };

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, closed: false }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, closed: true }
    }

    pub fn contains(&self, t: f64) -> bool {
        if self.closed {
            self.lo <= t && t <= self.hi
        } else {
            self.lo < t && t < self.hi
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Image under `t -> t / d`.
    pub fn scaled_by_inverse(&self, d: f64) -> Self {
        let (a, b) = (self.lo / d, self.hi / d);
        Interval { lo: a.min(b), hi: a.max(b), closed: self.closed }
    }

    pub fn shifted(&self, by: f64) -> Self {
        Interval { lo: self.lo + by, hi: self.hi + by, closed: self.closed }
    }

    /// Nearest bound to `t`, for error reporting.
    pub fn nearest_bound(&self, t: f64) -> f64 {
        if (t - self.lo).abs() <= (t - self.hi).abs() {
            self.lo
        } else {
            self.hi
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.closed {
            write!(f, "[{}, {}]", self.lo, self.hi)
        } else {
            write!(f, "({}, {})", self.lo, self.hi)
        }
    }
}

/// A numerically represented function that can still produce full jets.
pub trait Profile: Send + Sync + fmt::Debug {
    /// Jet at `t`; callers have already checked `t` against [`Profile::domain`].
    fn jet(&self, t: f64) -> Result<Jet>;
    fn domain(&self) -> Interval;
    fn describe(&self) -> String;
}

#[derive(Debug, Clone)]
pub enum Kind {
    Family(Family),
    /// `g(t) = f(d t)^(1/d)`
    DTransform { inner: Arc<ScalarFunction>, d: f64 },
    /// `g(t) = 1 / f(t)`
    Reciprocal(Arc<ScalarFunction>),
    /// `g(t) = f(t + offset)`
    Shift { inner: Arc<ScalarFunction>, offset: f64 },
    /// `g(t) = k f(t)` with `k > 0`
    Scaled { inner: Arc<ScalarFunction>, k: f64 },
    Numeric(Arc<dyn Profile>),
}

/// Immutable positive function of one variable on a connected domain.
#[derive(Debug, Clone)]
pub struct ScalarFunction {
    kind: Kind,
    domain: Interval,
}

impl ScalarFunction {
    /// Catalog member on the positive component containing `anchor`.
    pub fn new(family: Family, anchor: f64) -> Result<Self> {
        family.validate()?;
        let domain = family.component(anchor)?;
        Ok(ScalarFunction { kind: Kind::Family(family), domain })
    }

    /// Look up a family by tag with named parameters.
    pub fn from_tag(tag: &str, params: &[(&str, f64)], anchor: f64) -> Result<Self> {
        if let Some((_, names)) = family::PARAM_TABLE.iter().find(|(t, _)| *t == tag) {
            if let Some((name, _)) = params.iter().find(|(p, _)| !names.iter().any(|(n, _)| n == p)) {
                return Err(Error::Parameter(format!("family '{tag}' has no parameter '{name}'")));
            }
        }
        let fam = Family::from_lookup(tag, |n| {
            params.iter().find(|(k, _)| *k == n).map(|(_, v)| *v)
        })?;
        ScalarFunction::new(fam, anchor)
    }

    pub fn from_profile(p: Arc<dyn Profile>) -> Self {
        let domain = p.domain();
        ScalarFunction { kind: Kind::Numeric(p), domain }
    }

    /// `cos t` on `(-pi/2, pi/2)`.
    pub fn cos() -> Self {
        ScalarFunction::new(Family::MaclaurinCos { p: 1.0, d: 1.0, t0: 0.0 }, 0.0)
            .expect("cosine is positive at 0")
    }

    pub fn constant(c: f64) -> Result<Self> {
        ScalarFunction::new(Family::AffinePoly { c0: c, c1: 0.0, c2: 0.0 }, 0.0)
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn family(&self) -> Option<&Family> {
        match &self.kind {
            Kind::Family(f) => Some(f),
            _ => None,
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Restrict to a sub-interval of the current domain. Overshoot at the
    /// level of rounding is clipped.
    pub fn restricted(&self, mut to: Interval) -> Result<Self> {
        let slack = |a: f64, b: f64| (a - b).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs()));
        if to.lo < self.domain.lo && slack(to.lo, self.domain.lo) {
            to.lo = self.domain.lo;
        }
        if to.hi > self.domain.hi && slack(to.hi, self.domain.hi) {
            to.hi = self.domain.hi;
        }
        if to.lo < self.domain.lo || to.hi > self.domain.hi || to.lo >= to.hi {
            return Err(Error::Parameter(format!(
                "restriction {to} not inside domain {}",
                self.domain
            )));
        }
        Ok(ScalarFunction { kind: self.kind.clone(), domain: to })
    }

    pub fn contains(&self, t: f64) -> bool {
        self.domain.contains(t)
    }

    fn check(&self, t: f64) -> Result<()> {
        if self.domain.contains(t) {
            Ok(())
        } else {
            Err(Error::Domain {
                t,
                domain: format!("{} (nearest bound {})", self.domain, self.domain.nearest_bound(t)),
            })
        }
    }

    /// Integration limits may sit on a finite bound; quadrature nodes stay inside.
    fn check_limit(&self, t: f64) -> Result<()> {
        if t == self.domain.lo || t == self.domain.hi {
            Ok(())
        } else {
            self.check(t)
        }
    }

    /// Full order-4 jet at `t`.
    pub fn jet(&self, t: f64) -> Result<Jet> {
        self.check(t)?;
        self.raw_jet(t)
    }

    fn raw_jet(&self, t: f64) -> Result<Jet> {
        match &self.kind {
            Kind::Family(f) => Ok(f.jet(t)),
            Kind::DTransform { inner, d } => {
                Ok(inner.raw_jet(d * t)?.rescale_argument(*d).powf(1.0 / d))
            }
            Kind::Reciprocal(inner) => Ok(inner.raw_jet(t)?.recip()),
            Kind::Shift { inner, offset } => inner.raw_jet(t + offset),
            Kind::Scaled { inner, k } => Ok(inner.raw_jet(t)? * *k),
            Kind::Numeric(p) => p.jet(t),
        }
    }

    /// Jet truncated at `order`; entries above it are zero.
    pub fn eval_jet(&self, t: f64, order: usize) -> Result<Jet> {
        if order > 4 {
            return Err(Error::Parameter(format!("jet order {order} exceeds 4")));
        }
        let mut a = self.jet(t)?.to_array();
        for x in a.iter_mut().skip(order + 1) {
            *x = 0.0;
        }
        Ok(Jet::from_array(a))
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t)?.value)
    }

    /// Integral of the function from `t_ref` to `t`.
    pub fn primitive(&self, t_ref: f64, t: f64) -> Result<f64> {
        self.primitive_with(t_ref, t, &QuadConfig::default())
    }

    pub fn primitive_with(&self, t_ref: f64, t: f64, cfg: &QuadConfig) -> Result<f64> {
        self.check_limit(t_ref)?;
        self.check_limit(t)?;
        quadrature::integrate(|s| self.raw_jet(s).map(|j| j.value).unwrap_or(f64::NAN), t_ref, t, cfg)
    }

    /// Integral of `map(jet)` from `a` to `b`.
    pub fn integrate_map(
        &self,
        a: f64,
        b: f64,
        cfg: &QuadConfig,
        map: impl Fn(&Jet) -> f64,
    ) -> Result<f64> {
        self.check_limit(a)?;
        self.check_limit(b)?;
        quadrature::integrate(|s| self.raw_jet(s).map(|j| map(&j)).unwrap_or(f64::NAN), a, b, cfg)
    }

    /// `g(t) = f(d t)^(1/d)` as a composite; see [`crate::diffexpr::d_transform`]
    /// for the catalog-closing version.
    pub fn d_composite(self: &Arc<Self>, d: f64) -> Result<Self> {
        if d == 0.0 || !d.is_finite() {
            return Err(Error::Parameter("d-transform requires finite d != 0".into()));
        }
        Ok(ScalarFunction {
            kind: Kind::DTransform { inner: Arc::clone(self), d },
            domain: self.domain.scaled_by_inverse(d),
        })
    }

    pub fn reciprocal(&self) -> Self {
        ScalarFunction {
            kind: Kind::Reciprocal(Arc::new(self.clone())),
            domain: self.domain,
        }
    }

    /// `g(t) = f(t + offset)`.
    pub fn shifted(&self, offset: f64) -> Self {
        ScalarFunction {
            kind: Kind::Shift { inner: Arc::new(self.clone()), offset },
            domain: self.domain.shifted(-offset),
        }
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Parameter("scaling requires k > 0".into()));
        }
        Ok(ScalarFunction {
            kind: Kind::Scaled { inner: Arc::new(self.clone()), k },
            domain: self.domain,
        })
    }

    /// Interior point of the domain at relative position `s` in `(0, 1)`;
    /// infinite sides are truncated to a window of `span` around the finite data.
    pub fn interior_point(&self, s: f64, span: f64) -> f64 {
        let Interval { lo, hi, .. } = self.domain;
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => lo + s * (hi - lo),
            (true, false) => lo + s * span,
            (false, true) => hi - (1.0 - s) * span,
            (false, false) => (s - 0.5) * 2.0 * span,
        }
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Family(fam) => write!(f, "{fam}"),
            Kind::DTransform { inner, d } => write!(f, "d_transform({inner}, d={d})"),
            Kind::Reciprocal(inner) => write!(f, "1/({inner})"),
            Kind::Shift { inner, offset } => write!(f, "shift({inner}, {offset})"),
            Kind::Scaled { inner, k } => write!(f, "{k}*({inner})"),
            Kind::Numeric(p) => write!(f, "{}", p.describe()),
        }
    }
}
