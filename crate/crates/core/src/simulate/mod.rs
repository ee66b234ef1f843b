//! Monte-Carlo comparison of remapping schemes under prediction errors and
//! mis-correction bit errors.
//!
//! Each trial draws an original value, a prediction of it and a bit-error
//! pattern. The original is encoded under every scheme's mapping, the same
//! error pattern is applied to each encoding (paired design), and each
//! scheme reconstructs a value from the corrupted word and the prediction.
//!
//! Trial `i` draws from a ChaCha8 stream keyed by `(seed, i)`, and errors
//! are accumulated as integers, so results do not depend on thread count
//! or scheduling.

mod channel;
mod config;
mod pgm;
mod prediction;
mod report;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use channel::{flip_bits, ChannelModel};
pub use config::{
    default_schemes, parse_key_values, Mapping, Scheme, SimulationConfig, Strategy,
    DEFAULT_THRESHOLD,
};
pub use pgm::{parse_pgm, read_pgm, GrayImage};
pub use prediction::PredictionModel;
pub use report::{psnr, SchemeRecord, SimulationReport};

use crate::codeword::CodeTable;
use crate::error::{Error, Result};
use crate::reconstruct::{reconstruct, threshold_reconstruct};

/// Random inputs of one trial, shared by all schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialDraw {
    pub original: u32,
    pub predicted: u32,
    /// Bits flipped in the transmitted codeword.
    pub pattern: u32,
}

/// Result of one scheme on one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub output: u32,
    pub squared_error: u64,
    pub exact: bool,
    /// Output strictly farther from the original than the prediction was.
    pub worse_than_prediction: bool,
}

/// Paired difference of squared errors between two schemes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairedDifference {
    pub trials: u64,
    /// Mean of `err_a^2 - err_b^2`.
    pub mean: f64,
    pub std_err: f64,
}

/// A validated configuration with its code tables and pixel source loaded.
pub struct Simulator {
    config: SimulationConfig,
    tables: Vec<CodeTable>,
    pixels: Option<Vec<u32>>,
}

impl Simulator {
    pub fn new(config: SimulationConfig) -> Result<Self> {
        config.validate()?;
        let pixels = match &config.image {
            Some(path) => {
                let image = read_pgm(path)?;
                Some(image.requantized(config.n))
            }
            None => None,
        };
        Self::build(config, pixels)
    }

    /// Like [`Simulator::new`] but with original values supplied directly
    /// instead of drawn uniformly or read from `config.image`.
    pub fn with_pixels(config: SimulationConfig, pixels: Vec<u32>) -> Result<Self> {
        config.validate()?;
        if pixels.is_empty() {
            return Err(Error::config("image", "no pixels"));
        }
        if let Some(p) = pixels.iter().find(|&&p| p > config.max_value()) {
            return Err(Error::config(
                "image",
                format!("pixel {p} exceeds {}", config.max_value()),
            ));
        }
        Self::build(config, Some(pixels))
    }

    fn build(config: SimulationConfig, pixels: Option<Vec<u32>>) -> Result<Self> {
        let tables = config
            .schemes
            .iter()
            .map(|s| s.mapping.table(config.n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Simulator {
            config,
            tables,
            pixels,
        })
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    /// The inputs of trial `index`.
    pub fn draw(&self, index: u64) -> TrialDraw {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(index);
        let max = self.config.max_value();
        let original = match &self.pixels {
            Some(p) => p[(index % p.len() as u64) as usize],
            None => rng.random_range(0..=max),
        };
        let predicted = self.config.prediction.predict(original, max, &mut rng);
        let pattern = self.config.channel.sample_pattern(self.config.n, &mut rng);
        TrialDraw {
            original,
            predicted,
            pattern,
        }
    }

    /// Runs scheme `scheme` (an index into `config.schemes`) on one draw.
    pub fn evaluate(&self, scheme: usize, draw: &TrialDraw) -> TrialOutcome {
        let table = &self.tables[scheme];
        let sent = table
            .encode(draw.original)
            .expect("original within pixel range");
        let received = sent.flip(draw.pattern);
        let output = match self.config.schemes[scheme].strategy {
            Strategy::Threshold { threshold } => {
                threshold_reconstruct(table.decode(received), draw.predicted, threshold)
            }
            Strategy::Neighborhood { policy } => {
                reconstruct(received, draw.predicted, table, &policy)
            }
        };
        let error = output.abs_diff(draw.original);
        TrialOutcome {
            output,
            squared_error: u64::from(error) * u64::from(error),
            exact: error == 0,
            worse_than_prediction: error > draw.predicted.abs_diff(draw.original),
        }
    }

    pub fn run(&self) -> SimulationReport {
        let schemes = self.config.schemes.len();
        let totals = (0..self.config.trials)
            .into_par_iter()
            .fold(
                || vec![Totals::default(); schemes],
                |mut acc, index| {
                    let draw = self.draw(index);
                    for (s, slot) in acc.iter_mut().enumerate() {
                        slot.add(&self.evaluate(s, &draw));
                    }
                    acc
                },
            )
            .reduce(
                || vec![Totals::default(); schemes],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        x.merge(&y);
                    }
                    a
                },
            );
        let max_value = self.config.max_value();
        let records = self
            .config
            .schemes
            .iter()
            .zip(totals)
            .map(|(scheme, t)| {
                SchemeRecord::new(
                    scheme,
                    self.config.trials,
                    max_value,
                    t.sse,
                    t.exact,
                    t.worse,
                )
            })
            .collect();
        SimulationReport {
            config: self.config.clone(),
            master_seed: self.config.seed,
            max_value,
            schemes: records,
        }
    }

    /// Paired statistics of `sq_err(a) - sq_err(b)` over all trials.
    pub fn paired_difference(&self, a: usize, b: usize) -> PairedDifference {
        let (sum, sum_sq) = (0..self.config.trials)
            .into_par_iter()
            .map(|index| {
                let draw = self.draw(index);
                let d = i128::from(self.evaluate(a, &draw).squared_error)
                    - i128::from(self.evaluate(b, &draw).squared_error);
                (d, d.unsigned_abs() * d.unsigned_abs())
            })
            .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
        let n = self.config.trials as f64;
        let mean = sum as f64 / n;
        let var = if self.config.trials > 1 {
            (sum_sq as f64 - n * mean * mean) / (n - 1.0)
        } else {
            0.0
        };
        PairedDifference {
            trials: self.config.trials,
            mean,
            std_err: (var.max(0.0) / n).sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Totals {
    sse: u128,
    exact: u64,
    worse: u64,
}

impl Totals {
    fn add(&mut self, o: &TrialOutcome) {
        self.sse += u128::from(o.squared_error);
        self.exact += u64::from(o.exact);
        self.worse += u64::from(o.worse_than_prediction);
    }

    fn merge(&mut self, o: &Totals) {
        self.sse += o.sse;
        self.exact += o.exact;
        self.worse += o.worse;
    }
}

/// Validates `config`, loads its inputs and runs every trial.
pub fn run_simulation(config: SimulationConfig) -> Result<SimulationReport> {
    Ok(Simulator::new(config)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::ReconstructionPolicy;

    fn small_config() -> SimulationConfig {
        SimulationConfig {
            n: 4,
            trials: 2_000,
            seed: 9,
            ..SimulationConfig::default()
        }
    }

    #[test]
    fn noiseless_pipeline_is_exact() {
        let config = SimulationConfig {
            prediction: PredictionModel::Exact,
            channel: ChannelModel::iid(0.0),
            ..small_config()
        };
        let report = run_simulation(config).unwrap();
        assert_eq!(report.schemes.len(), 6);
        for r in &report.schemes {
            assert_eq!(r.mse, 0.0, "{}", r.scheme);
            assert_eq!(r.exact_recovery_rate, 1.0);
            assert!(r.psnr_db.is_infinite());
        }
    }

    #[test]
    fn forced_worked_example() {
        let config = SimulationConfig {
            schemes: vec![Scheme::new(
                Mapping::Counting,
                Strategy::Neighborhood {
                    policy: ReconstructionPolicy::default(),
                },
            )],
            ..small_config()
        };
        let sim = Simulator::new(config).unwrap();
        // 7 -> 1011; flipping bit 2 gives 1001, which decodes to 11.
        let draw = TrialDraw {
            original: 7,
            predicted: 8,
            pattern: 0b0010,
        };
        let out = sim.evaluate(0, &draw);
        assert_eq!(out.output, 7);
        assert_eq!(out.squared_error, 0);
        assert!(out.exact && !out.worse_than_prediction);
    }

    #[test]
    fn draws_are_keyed_by_trial_index() {
        let sim = Simulator::new(small_config()).unwrap();
        let again = Simulator::new(small_config()).unwrap();
        for i in [0, 1, 17, 1999] {
            assert_eq!(sim.draw(i), again.draw(i));
        }
        assert_ne!(
            (0..20).map(|i| sim.draw(i)).collect::<Vec<_>>(),
            (20..40).map(|i| sim.draw(i)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn parallel_matches_serial() {
        let sim = Simulator::new(small_config()).unwrap();
        let report = sim.run();
        for (s, record) in report.schemes.iter().enumerate() {
            let sse: u128 = (0..2_000)
                .map(|i| u128::from(sim.evaluate(s, &sim.draw(i)).squared_error))
                .sum();
            assert_eq!(record.sum_squared_error, sse);
        }
    }

    #[test]
    fn pixels_drive_originals() {
        let config = SimulationConfig {
            trials: 6,
            ..small_config()
        };
        let sim = Simulator::with_pixels(config.clone(), vec![3, 9, 14]).unwrap();
        let originals: Vec<u32> = (0..6).map(|i| sim.draw(i).original).collect();
        assert_eq!(originals, [3, 9, 14, 3, 9, 14]);
        assert!(Simulator::with_pixels(config.clone(), vec![16]).is_err());
        assert!(Simulator::with_pixels(config, vec![]).is_err());
    }

    #[test]
    fn paired_difference_of_scheme_with_itself() {
        let sim = Simulator::new(small_config()).unwrap();
        let d = sim.paired_difference(1, 1);
        assert_eq!((d.mean, d.std_err), (0.0, 0.0));
    }
}
