//! Simulation configuration and its flat `key = value` text form.
//!
//! ```text
//! # comment
//! n = 8
//! trials = 100000
//! seed = 1
//! prediction = laplacian      # exact | uniform | laplacian
//! prediction_scale = 2
//! channel = iid               # iid | at-most-m
//! p_flip = 0.02
//! flip_weights = 0.9,0.08,0.02
//! schemes = binary:threshold,counting:neighborhood
//! threshold = 4
//! radius = 1
//! include_center = true
//! tie_break = smaller         # smaller | larger
//! image = frame.pgm
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

use super::channel::ChannelModel;
use super::prediction::PredictionModel;
use crate::codeword::{check_width, CodeTable};
use crate::counting::generate_counting;
use crate::error::{Error, Result};
use crate::graycode::generate_gray;
use crate::reconstruct::{ReconstructionPolicy, TieBreak};

/// Value-to-codeword remapping applied before the channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mapping {
    Binary,
    Gray,
    Counting,
}

impl Mapping {
    pub const ALL: [Mapping; 3] = [Mapping::Binary, Mapping::Gray, Mapping::Counting];

    pub fn table(self, width: u32) -> Result<CodeTable> {
        match self {
            Mapping::Binary => CodeTable::natural_binary(width),
            Mapping::Gray => generate_gray(width),
            Mapping::Counting => generate_counting(width),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mapping::Binary => "binary",
            Mapping::Gray => "gray",
            Mapping::Counting => "counting",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Mapping::ALL.into_iter().find(|m| m.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Strategy {
    /// Revert to the prediction when the decoded value is more than
    /// `threshold` away from it.
    Threshold { threshold: u32 },
    /// Closest-to-prediction value within a Hamming ball of the decoded word.
    Neighborhood { policy: ReconstructionPolicy },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Threshold { .. } => "threshold",
            Strategy::Neighborhood { .. } => "neighborhood",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Scheme {
    pub mapping: Mapping,
    pub strategy: Strategy,
}

impl Scheme {
    pub fn new(mapping: Mapping, strategy: Strategy) -> Self {
        Scheme { mapping, strategy }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.strategy {
            Strategy::Threshold { threshold } => {
                write!(f, "{}+threshold(t={threshold})", self.mapping.name())
            }
            Strategy::Neighborhood { policy } => write!(
                f,
                "{}+neighborhood(r={}{})",
                self.mapping.name(),
                policy.radius,
                if policy.include_center {
                    ""
                } else {
                    ",no-center"
                }
            ),
        }
    }
}

pub const DEFAULT_THRESHOLD: u32 = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub prediction: PredictionModel,
    pub channel: ChannelModel,
    pub schemes: Vec<Scheme>,
    /// Optional 8-bit PGM supplying original values; uniform draws otherwise.
    pub image: Option<PathBuf>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            n: 8,
            trials: 100_000,
            seed: 0,
            prediction: PredictionModel::DiscreteLaplacian { scale: 2.0 },
            channel: ChannelModel::iid(0.02),
            schemes: default_schemes(DEFAULT_THRESHOLD, ReconstructionPolicy::default()),
            image: None,
        }
    }
}

/// Every mapping paired with both strategies.
pub fn default_schemes(threshold: u32, policy: ReconstructionPolicy) -> Vec<Scheme> {
    let mut out = Vec::new();
    for mapping in Mapping::ALL {
        out.push(Scheme::new(mapping, Strategy::Threshold { threshold }));
        out.push(Scheme::new(mapping, Strategy::Neighborhood { policy }));
    }
    out
}

const KEYS: &[&str] = &[
    "n",
    "trials",
    "seed",
    "prediction",
    "prediction_scale",
    "channel",
    "p_flip",
    "flip_weights",
    "schemes",
    "threshold",
    "radius",
    "include_center",
    "tie_break",
    "image",
];

/// Parses `key = value` lines into a map. Blank lines and `#` comments are
/// skipped; unknown or repeated keys are errors.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::config(format!("line {}", lineno + 1), "expected `key = value`")
        })?;
        let key = key.trim().to_string();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::config(key, "given more than once"));
        }
    }
    Ok(map)
}

impl SimulationConfig {
    /// Builds a config from key/value pairs, using defaults for absent keys.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(key) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::config(key.clone(), "unknown key"));
        }
        let defaults = SimulationConfig::default();
        let get = |k: &str| map.get(k).map(String::as_str);

        let n = parse_or(get("n"), "n", defaults.n)?;
        let trials = parse_or(get("trials"), "trials", defaults.trials)?;
        let seed = parse_or(get("seed"), "seed", defaults.seed)?;

        let scale: f64 = parse_or(get("prediction_scale"), "prediction_scale", 2.0)?;
        let prediction = match get("prediction").unwrap_or("laplacian") {
            "exact" => PredictionModel::Exact,
            "uniform" => {
                if scale < 0.0 || scale.fract() != 0.0 || scale > f64::from(u32::MAX) {
                    return Err(Error::config(
                        "prediction_scale",
                        "uniform offset bound must be a non-negative integer",
                    ));
                }
                PredictionModel::UniformOffset {
                    bound: scale as u32,
                }
            }
            "laplacian" => PredictionModel::DiscreteLaplacian { scale },
            other => {
                return Err(Error::config(
                    "prediction",
                    format!("`{other}` is not one of exact, uniform, laplacian"),
                ))
            }
        };

        let channel = match get("channel").unwrap_or("iid") {
            "iid" => ChannelModel::iid(parse_or(get("p_flip"), "p_flip", 0.02)?),
            "at-most-m" => {
                let raw = get("flip_weights")
                    .ok_or_else(|| Error::config("flip_weights", "required by at-most-m"))?;
                let weights = raw
                    .split(',')
                    .map(|w| parse_value::<f64>(w.trim(), "flip_weights"))
                    .collect::<Result<Vec<_>>>()?;
                ChannelModel::AtMostMFlips { weights }
            }
            other => {
                return Err(Error::config(
                    "channel",
                    format!("`{other}` is not one of iid, at-most-m"),
                ))
            }
        };

        let threshold = parse_or(get("threshold"), "threshold", DEFAULT_THRESHOLD)?;
        let policy = ReconstructionPolicy {
            radius: parse_or(get("radius"), "radius", 1)?,
            include_center: parse_or(get("include_center"), "include_center", true)?,
            tie_break: match get("tie_break").unwrap_or("smaller") {
                "smaller" => TieBreak::PreferSmaller,
                "larger" => TieBreak::PreferLarger,
                other => {
                    return Err(Error::config(
                        "tie_break",
                        format!("`{other}` is not one of smaller, larger"),
                    ))
                }
            },
        };
        let schemes = match get("schemes") {
            None => default_schemes(threshold, policy),
            Some(list) => list
                .split(',')
                .map(|item| parse_scheme(item.trim(), threshold, policy))
                .collect::<Result<Vec<_>>>()?,
        };

        let config = SimulationConfig {
            n,
            trials,
            seed,
            prediction,
            channel,
            schemes,
            image: get("image").map(PathBuf::from),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_map(&parse_key_values(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        check_width(self.n, 2).map_err(|e| Error::config("n", e.to_string()))?;
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        self.prediction.validate()?;
        self.channel.validate(self.n)?;
        if self.schemes.is_empty() {
            return Err(Error::config("schemes", "no schemes given"));
        }
        for scheme in &self.schemes {
            if let Strategy::Neighborhood { policy } = scheme.strategy {
                if policy.radius > self.n {
                    return Err(Error::config(
                        "radius",
                        format!("{} exceeds width {}", policy.radius, self.n),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Largest pixel value, `2^n - 1`.
    pub fn max_value(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }
}

fn parse_scheme(item: &str, threshold: u32, policy: ReconstructionPolicy) -> Result<Scheme> {
    let (mapping, strategy) = item
        .split_once(':')
        .ok_or_else(|| Error::config("schemes", format!("`{item}` is not mapping:strategy")))?;
    let mapping = Mapping::parse(mapping)
        .ok_or_else(|| Error::config("schemes", format!("unknown mapping `{mapping}`")))?;
    let strategy = match strategy {
        "threshold" => Strategy::Threshold { threshold },
        "neighborhood" => Strategy::Neighborhood { policy },
        other => {
            return Err(Error::config(
                "schemes",
                format!("unknown strategy `{other}`"),
            ))
        }
    };
    Ok(Scheme::new(mapping, strategy))
}

fn parse_value<T: std::str::FromStr>(raw: &str, field: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::config(field, format!("cannot parse `{raw}`")))
}

fn parse_or<T: std::str::FromStr>(raw: Option<&str>, field: &str, default: T) -> Result<T> {
    raw.map_or(Ok(default), |r| parse_value(r, field))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(err: Error) -> String {
        match err {
            Error::Config { field, .. } => field,
            other => panic!("not a config error: {other}"),
        }
    }

    #[test]
    fn defaults_and_overrides() {
        let c = SimulationConfig::from_text("").unwrap();
        assert_eq!(c, SimulationConfig::default());
        let c = SimulationConfig::from_text(
            "n = 4 # width\ntrials=10\nprediction = uniform\nprediction_scale = 3\n\
             channel = at-most-m\nflip_weights = 1, 2\nschemes = counting:neighborhood\nradius = 2\n",
        )
        .unwrap();
        assert_eq!(c.n, 4);
        assert_eq!(c.prediction, PredictionModel::UniformOffset { bound: 3 });
        assert_eq!(
            c.channel,
            ChannelModel::AtMostMFlips {
                weights: vec![1.0, 2.0]
            }
        );
        assert_eq!(c.schemes.len(), 1);
        assert_eq!(c.schemes[0].to_string(), "counting+neighborhood(r=2)");
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            ("bogus = 1", "bogus"),
            ("n = 1", "n"),
            ("n = 17", "n"),
            ("trials = 0", "trials"),
            ("trials = many", "trials"),
            ("p_flip = 2", "p_flip"),
            ("prediction = oracle", "prediction"),
            (
                "prediction = laplacian\nprediction_scale = -1",
                "prediction_scale",
            ),
            (
                "prediction = uniform\nprediction_scale = 1.5",
                "prediction_scale",
            ),
            ("channel = at-most-m", "flip_weights"),
            ("schemes = counting", "schemes"),
            ("schemes = counting:magic", "schemes"),
            ("n = 3\nradius = 4", "radius"),
            ("n = 2\nn = 3", "n"),
            ("tie_break = random", "tie_break"),
            ("just words", "line 1"),
        ];
        for (text, field) in cases {
            let err = SimulationConfig::from_text(text).unwrap_err();
            assert_eq!(field_of(err), field, "{text}");
        }
    }

    #[test]
    fn scheme_labels() {
        let s = Scheme::new(Mapping::Binary, Strategy::Threshold { threshold: 4 });
        assert_eq!(s.to_string(), "binary+threshold(t=4)");
        let policy = ReconstructionPolicy {
            include_center: false,
            ..ReconstructionPolicy::default()
        };
        let s = Scheme::new(Mapping::Gray, Strategy::Neighborhood { policy });
        assert_eq!(s.to_string(), "gray+neighborhood(r=1,no-center)");
    }
}
