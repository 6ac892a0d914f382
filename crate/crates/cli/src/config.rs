//! Run configuration: defaults, INI-style config files and flag overrides.

use std::collections::BTreeSet;
use std::path::Path;

use ini::Ini;
use nctorus::gauge::{Coupling, DEFAULT_TOL_UNITARY};
use nctorus::powers_rieffel::{PRConfig, DEFAULT_TOL_PROJECTION};
use nctorus::selftest::DEFAULT_SEED;
use nctorus::spectral::DEFAULT_T_GRID;
use nctorus::{DeformationMatrix, Error, Result};

/// Every recognized config key with its section. Keys may also appear
/// before the first section header.
pub const KEYS: &[(&str, &str)] = &[
    ("theta", "theta12"),
    ("theta", "theta13"),
    ("theta", "theta23"),
    ("projection", "alpha"),
    ("projection", "eps"),
    ("projection", "trunc"),
    ("projection", "samples"),
    ("gauge", "n"),
    ("gauge", "k"),
    ("gauge", "cases"),
    ("winding", "max_power"),
    ("residue", "scale"),
    ("residue", "grid"),
    ("run", "seed"),
    ("tolerances", "winding"),
    ("tolerances", "chern"),
    ("tolerances", "trace"),
    ("tolerances", "gauge"),
    ("tolerances", "residue"),
    ("tolerances", "projection"),
    ("tolerances", "unitary"),
];

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub winding: f64,
    pub chern: f64,
    pub trace: f64,
    pub gauge: f64,
    pub residue: f64,
    pub projection: f64,
    pub unitary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            winding: 1e-3,
            chern: 1e-4,
            trace: 1e-12,
            gauge: 1e-10,
            residue: 1e-2,
            projection: DEFAULT_TOL_PROJECTION,
            unitary: DEFAULT_TOL_UNITARY,
        }
    }
}

impl Tolerances {
    pub fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("winding", self.winding),
            ("chern", self.chern),
            ("trace", self.trace),
            ("gauge", self.gauge),
            ("residue", self.residue),
            ("projection", self.projection),
            ("unitary", self.unitary),
        ]
    }

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "winding" => &mut self.winding,
            "chern" => &mut self.chern,
            "trace" => &mut self.trace,
            "gauge" => &mut self.gauge,
            "residue" => &mut self.residue,
            "projection" => &mut self.projection,
            "unitary" => &mut self.unitary,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub theta: [f64; 3],
    pub n: usize,
    pub pr: PRConfig,
    pub k: f64,
    pub cases: usize,
    pub max_power: u32,
    pub scale: f64,
    pub grid: Vec<f64>,
    pub seed: u64,
    pub tol: Tolerances,
    /// Set once `samples` is given explicitly; until then it follows `trunc`.
    samples_fixed: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            theta: [0.0; 3],
            n: 1,
            pr: PRConfig::default(),
            k: 1.0,
            cases: 50,
            max_power: 1,
            scale: 1.0,
            grid: DEFAULT_T_GRID.to_vec(),
            seed: DEFAULT_SEED,
            tol: Tolerances::default(),
            samples_fixed: false,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

pub fn parse_grid(value: &str) -> Result<Vec<f64>> {
    value.split(',').map(|s| parse_value::<f64>("grid", s)).collect()
}

impl RunConfig {
    pub fn deformation(&self) -> Result<DeformationMatrix> {
        DeformationMatrix::new(self.theta[0], self.theta[1], self.theta[2])
    }

    pub fn coupling(&self) -> Result<Coupling> {
        Coupling::new(self.k)
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "theta12" => self.theta[0] = parse_value(key, value)?,
            "theta13" => self.theta[1] = parse_value(key, value)?,
            "theta23" => self.theta[2] = parse_value(key, value)?,
            "alpha" => self.pr.alpha = parse_value(key, value)?,
            "eps" => self.pr.eps = parse_value(key, value)?,
            "trunc" => {
                self.pr.trunc = parse_value(key, value)?;
                if !self.samples_fixed {
                    self.pr = PRConfig {
                        samples: PRConfig::default().samples,
                        ..self.pr
                    }
                    .with_trunc(self.pr.trunc);
                }
            }
            "samples" => {
                self.pr.samples = parse_value(key, value)?;
                self.samples_fixed = true;
            }
            "n" => self.n = parse_value(key, value)?,
            "k" => self.k = parse_value(key, value)?,
            "cases" => self.cases = parse_value(key, value)?,
            "max_power" => self.max_power = parse_value(key, value)?,
            "scale" => self.scale = parse_value(key, value)?,
            "grid" => self.grid = parse_grid(value)?,
            "seed" => self.seed = parse_value(key, value)?,
            other => {
                let slot = other
                    .strip_prefix("tol_")
                    .and_then(|name| self.tol.slot(name))
                    .ok_or_else(|| Error::Config(format!("unknown key `{other}`")))?;
                *slot = parse_value(key, value)?;
            }
        }
        Ok(())
    }

    /// Reads settings from an INI-style file on top of `self`.
    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.merge_str(&text)
    }

    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::Parse {
            line: e.line + 1,
            msg: e.msg.into_owned(),
        })?;
        let mut seen = BTreeSet::new();
        for (section, props) in ini.iter() {
            for (key, value) in props.iter() {
                let Some((home, _)) = KEYS.iter().find(|(_, k)| *k == key) else {
                    return Err(Error::Config(format!("unknown key `{key}`")));
                };
                if let Some(s) = section {
                    if s != *home {
                        return Err(Error::Config(format!(
                            "key `{key}` belongs in section [{home}], found in [{s}]"
                        )));
                    }
                }
                if !seen.insert(key.to_string()) {
                    return Err(Error::Config(format!("duplicate key `{key}`")));
                }
                let key = if *home == "tolerances" {
                    format!("tol_{key}")
                } else {
                    key.to_string()
                };
                self.set(&key, value)?;
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.deformation()?;
        self.coupling()?;
        self.pr.validate()?;
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.cases == 0 {
            return Err(Error::Config("cases must be positive".into()));
        }
        if self.max_power == 0 {
            return Err(Error::Config("max_power must be positive".into()));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::Config(format!("scale must be positive, got {}", self.scale)));
        }
        for (name, value) in self.tol.entries() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!(
                    "tolerance `{name}` must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}
