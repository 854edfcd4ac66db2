use crate::CliError;
use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    Emit,
    Dual,
    Simulate,
    Rectify,
    Verify,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// `r f(theta) = 1` under a central force.
    #[default]
    Central,
    /// `(F, f)` under a force parallel to the y-axis.
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub count: Option<usize>,
    /// Leave out the end point.
    pub open: bool,
}

impl GridSpec {
    /// `a:b`, `a:b:n` or `a:b:n:open`; bounds accept multiples of `pi`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Usage(format!("grid '{s}' is not a:b[:n[:open]]"));
        if !(2..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let count = match parts.get(2) {
            Some(n) => Some(n.trim().parse::<usize>().map_err(|_| bad())?),
            None => None,
        };
        let open = match parts.get(3) {
            Some(&"open") => true,
            Some(_) => return Err(bad()),
            None => false,
        };
        let g = GridSpec { start: parse_real(parts[0])?, end: parse_real(parts[1])?, count, open };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.start.is_finite() && self.end.is_finite() && self.end > self.start) {
            return Err(CliError::Usage(format!("grid must be increasing, got {} to {}", self.start, self.end)));
        }
        if matches!(self.count, Some(n) if n < 2) {
            return Err(CliError::Usage("grid needs at least 2 points".into()));
        }
        Ok(())
    }

    pub fn points(&self, default_count: usize) -> Vec<f64> {
        let n = self.count.unwrap_or(default_count);
        if self.open {
            let h = (self.end - self.start) / n as f64;
            (0..n).map(|i| self.start + h * i as f64).collect()
        } else {
            curveforge::par::linspace(self.start, self.end, n)
        }
    }
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Parts { start: f64, end: f64, count: Option<usize>, #[serde(default)] open: bool },
        }
        let g = match Raw::deserialize(d)? {
            Raw::Text(s) => GridSpec::parse(&s),
            Raw::Parts { start, end, count, open } => {
                let g = GridSpec { start, end, count, open };
                g.validate().map(|_| g)
            }
        };
        g.map_err(serde::de::Error::custom)
    }
}

/// A real number, optionally a rational multiple of `pi`: `1.5`, `-pi/2`, `2pi`, `3*pi/4`.
pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let bad = || CliError::Usage(format!("'{s}' is not a number"));
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let coef = match num.strip_suffix("pi") {
        Some(c) => match c.trim_end_matches('*') {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        },
        None => num.parse::<f64>().map_err(|_| bad())? / PI,
    };
    Ok(coef * PI / den)
}

/// `k=v,k2=v2` into a map.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("parameter '{item}' is not k=v")))?;
        out.insert(k.trim().to_string(), parse_real(v)?);
    }
    Ok(out)
}

/// `x,y,vx,vy`
pub fn parse_init(s: &str) -> Result<[f64; 4], CliError> {
    let v: Vec<f64> = s.split(',').map(parse_real).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| CliError::Usage(format!("init '{s}' is not x,y,vx,vy")))
}

/// Everything a single run needs. Loaded from `--config` JSON, then
/// overridden field by field from the command line.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub family: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub anchor: Option<f64>,
    pub kind: CurveKind,
    pub transform_d: Option<f64>,
    pub input: Option<PathBuf>,
    pub grid: Option<GridSpec>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub field: Option<CurveKind>,
    pub coefficient: Option<f64>,
    pub exponent: Option<f64>,
    pub init: Option<[f64; 4]>,
    pub t_end: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
            }
        }
        if let Some(t) = self.t_end {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("t-end must be positive, got {t}")));
            }
        }
        if self.family.is_some() && self.input.is_some() {
            return Err(CliError::Usage("give either a family or an input file, not both".into()));
        }
        Ok(())
    }
}
