//! JSON run configuration.
//!
//! Every key is optional; missing keys take the defaults of
//! [`RunConfig::default`] and unknown keys are rejected. The physical keys
//! are `k, r0, r1, E0, eta0, field, sigma_w2 | wnr_db, lmax`; the rest
//! configure individual commands.

use std::fs;
use std::path::{Path, PathBuf};

use crbspec_core::emsource::{SourceConfig, WhiteNoise};
use crbspec_core::fisher::ScalarField;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Real,
    #[default]
    Complex,
}

impl From<FieldKind> for ScalarField {
    fn from(f: FieldKind) -> Self {
        match f {
            FieldKind::Real => ScalarField::Real,
            FieldKind::Complex => ScalarField::Complex,
        }
    }
}

/// One entry of a WNR list: a level in dB or `"none"` (isotropic noise only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WnrRaw", into = "WnrRaw")]
pub enum Wnr {
    None,
    Db(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WnrRaw {
    Db(f64),
    Word(String),
}

impl TryFrom<WnrRaw> for Wnr {
    type Error = String;
    fn try_from(raw: WnrRaw) -> Result<Self, String> {
        match raw {
            WnrRaw::Db(v) => Ok(Wnr::Db(v)),
            WnrRaw::Word(w) => w.parse(),
        }
    }
}

impl From<Wnr> for WnrRaw {
    fn from(w: Wnr) -> Self {
        match w {
            Wnr::None => WnrRaw::Word("none".into()),
            Wnr::Db(v) => WnrRaw::Db(v),
        }
    }
}

impl std::str::FromStr for Wnr {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("none") {
            return Ok(Wnr::None);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Wnr::Db(v)),
            _ => Err(format!("invalid WNR entry {s:?}; expected a number of dB or \"none\"")),
        }
    }
}

impl std::fmt::Display for Wnr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Wnr::None => f.write_str("none"),
            Wnr::Db(v) => write!(f, "{v}"),
        }
    }
}

/// Parses a comma-separated WNR list such as `none,-60,-20,20`.
pub fn parse_wnr_list(s: &str) -> Result<Vec<Wnr>, String> {
    s.split(',').map(str::parse).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub k: f64,
    pub r0: f64,
    pub r1: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    pub eta0: f64,
    pub field: FieldKind,
    /// Absolute white-noise variance; excludes `wnr_db`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_w2: Option<f64>,
    /// White-noise ratio in dB; excludes `sigma_w2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wnr_db: Option<f64>,
    pub lmax: usize,
    /// Largest `L` of the `crb` curves; defaults to `lmax`.
    #[serde(rename = "L_max", skip_serializing_if = "Option::is_none")]
    pub l_max: Option<usize>,
    /// WNR levels of the `crb` command. The isotropic-only curve is always
    /// written.
    pub wnr_db_list: Vec<Wnr>,
    /// Estimation trials of `mc`.
    pub trials: usize,
    /// Noise realizations of `mc`.
    pub realizations: usize,
    pub seed: u64,
    /// Plane-wave directions per noise realization.
    pub n_directions: usize,
    /// Highest multipole order of the simulated noise in `mc`.
    pub mc_lmax: usize,
    /// Retained modes `r` of the estimation trials in `mc`.
    pub estimation_modes: usize,
    /// Point pairs of `green-check`.
    pub n_pairs: usize,
    /// `green-check` samples points with `k|r| ≤ green_kr_max`.
    pub green_kr_max: f64,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SourceConfig::default();
        Self {
            schema_version: SCHEMA_VERSION,
            k: s.k,
            r0: s.r0,
            r1: s.r1,
            e0: s.e0,
            eta0: s.eta0,
            field: FieldKind::Complex,
            sigma_w2: None,
            wnr_db: None,
            lmax: s.lmax,
            l_max: None,
            wnr_db_list: vec![Wnr::Db(-60.0), Wnr::Db(-20.0), Wnr::Db(20.0)],
            trials: 10_000,
            realizations: 200,
            seed: 0,
            n_directions: 1000,
            mc_lmax: 5,
            estimation_modes: 10,
            n_pairs: 20,
            green_kr_max: 5.0,
            out: None,
        }
    }
}

/// Command-line values that replace configuration keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub lmax: Option<usize>,
    pub wnr_db: Option<Vec<Wnr>>,
    pub trials: Option<usize>,
    pub realizations: Option<usize>,
    pub seed: Option<u64>,
    pub n_directions: Option<usize>,
    pub n_pairs: Option<usize>,
    pub green_kr_max: Option<f64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Applies `ov`. With `wnr_list` the `--wnr-db` values replace
    /// `wnr_db_list`; otherwise exactly one value is expected and it replaces
    /// the white-noise setting.
    pub fn apply(&mut self, ov: &Overrides, wnr_list: bool) -> Result<(), CliError> {
        if let Some(v) = ov.lmax {
            self.lmax = v;
        }
        if let Some(list) = &ov.wnr_db {
            if wnr_list {
                self.wnr_db_list = list.clone();
            } else {
                let [w] = list.as_slice() else {
                    return Err(CliError::Input("--wnr-db takes a single value for this command".into()));
                };
                self.sigma_w2 = None;
                self.wnr_db = match w {
                    Wnr::None => None,
                    Wnr::Db(v) => Some(*v),
                };
            }
        }
        macro_rules! take {
            ($($f:ident),*) => {$(if let Some(v) = ov.$f.clone() { self.$f = v; })*};
        }
        take!(trials, realizations, seed, n_directions, n_pairs, green_kr_max);
        if ov.out.is_some() {
            self.out = ov.out.clone();
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.sigma_w2.is_some() && self.wnr_db.is_some() {
            return Err(CliError::Input("sigma_w2 and wnr_db are mutually exclusive".into()));
        }
        self.source().validate()?;
        if let Some(l) = self.l_max {
            if l < 1 || l > self.lmax {
                return Err(CliError::Input(format!("L_max = {l} outside 1..={}", self.lmax)));
            }
        }
        if !(self.green_kr_max >= 0.0) || !self.green_kr_max.is_finite() {
            return Err(CliError::Input("green_kr_max must be finite and >= 0".into()));
        }
        Ok(())
    }

    pub fn white(&self) -> WhiteNoise {
        match (self.sigma_w2, self.wnr_db) {
            (Some(v), _) => WhiteNoise::Variance(v),
            (None, Some(db)) => WhiteNoise::WnrDb(db),
            (None, None) => WhiteNoise::None,
        }
    }

    pub fn source(&self) -> SourceConfig {
        SourceConfig {
            k: self.k,
            r0: self.r0,
            r1: self.r1,
            e0: self.e0,
            eta0: self.eta0,
            field: self.field.into(),
            white: self.white(),
            lmax: self.lmax,
        }
    }

    pub fn l_max(&self) -> usize {
        self.l_max.unwrap_or(self.lmax)
    }

    /// Compact JSON of every key, used as the `#` header line of outputs.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.source(), SourceConfig::default());
    }

    #[test]
    fn keys_and_rejections() {
        let cfg = RunConfig::from_json(r#"{"k": 5, "E0": 2, "field": "real", "wnr_db": -20}"#).unwrap();
        assert_eq!(cfg.e0, 2.0);
        assert_eq!(cfg.source().field, ScalarField::Real);
        assert_eq!(cfg.white(), WhiteNoise::WnrDb(-20.0));
        assert!(RunConfig::from_json(r#"{"kk": 5}"#).is_err());
        assert!(RunConfig::from_json(r#"{"sigma_w2": 1, "wnr_db": 0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"schema_version": 2}"#).is_err());
        assert!(RunConfig::from_json(r#"{"r0": 2}"#).is_err());
        assert!(RunConfig::from_json(r#"{"L_max": 41}"#).is_err());
    }

    #[test]
    fn wnr_lists() {
        assert_eq!(parse_wnr_list("none, -60,20").unwrap(), [Wnr::None, Wnr::Db(-60.0), Wnr::Db(20.0)]);
        assert!(parse_wnr_list("-60,x").is_err());
        let cfg = RunConfig::from_json(r#"{"wnr_db_list": ["none", -3]}"#).unwrap();
        assert_eq!(cfg.wnr_db_list, [Wnr::None, Wnr::Db(-3.0)]);
        assert!(RunConfig::from_json(r#"{"wnr_db_list": ["loud"]}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut cfg = RunConfig {
            sigma_w2: Some(0.5),
            ..RunConfig::default()
        };
        cfg.wnr_db_list.insert(0, Wnr::None);
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn overrides() {
        let mut cfg = RunConfig::from_json(r#"{"sigma_w2": 1}"#).unwrap();
        let ov = Overrides {
            wnr_db: Some(vec![Wnr::Db(-20.0)]),
            lmax: Some(12),
            ..Default::default()
        };
        cfg.apply(&ov, false).unwrap();
        assert_eq!((cfg.sigma_w2, cfg.wnr_db, cfg.lmax), (None, Some(-20.0), 12));
        let two = Overrides {
            wnr_db: Some(vec![Wnr::None, Wnr::Db(1.0)]),
            ..Default::default()
        };
        assert!(cfg.clone().apply(&two, false).is_err());
        cfg.apply(&two, true).unwrap();
        assert_eq!(cfg.wnr_db_list.len(), 2);
    }
}
