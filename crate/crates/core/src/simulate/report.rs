use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use super::config::{Mapping, Scheme, SimulationConfig};

/// Peak signal-to-noise ratio in dB, `10 log10(maxval^2 / mse)`; infinite
/// when `mse` is zero.
///
/// # Panics
///
/// Panics if `mse` is negative or `maxval` is not positive.
pub fn psnr(mse: f64, maxval: f64) -> f64 {
    assert!(mse >= 0.0, "negative mse {mse}");
    assert!(maxval > 0.0, "non-positive peak value {maxval}");
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (maxval * maxval / mse).log10()
    }
}

fn serialize_db<S: Serializer>(db: &f64, s: S) -> Result<S::Ok, S::Error> {
    if db.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*db)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchemeRecord {
    pub scheme: String,
    pub mapping: Mapping,
    pub strategy: String,
    pub trials: u64,
    pub sum_squared_error: u128,
    pub mse: f64,
    #[serde(serialize_with = "serialize_db")]
    pub psnr_db: f64,
    pub exact_recovery_rate: f64,
    pub worse_than_prediction_rate: f64,
}

impl SchemeRecord {
    pub(crate) fn new(
        scheme: &Scheme,
        trials: u64,
        max_value: u32,
        sse: u128,
        exact: u64,
        worse: u64,
    ) -> Self {
        let n = trials as f64;
        let mse = sse as f64 / n;
        SchemeRecord {
            scheme: scheme.to_string(),
            mapping: scheme.mapping,
            strategy: scheme.strategy.name().to_string(),
            trials,
            sum_squared_error: sse,
            mse,
            psnr_db: psnr(mse, f64::from(max_value)),
            exact_recovery_rate: exact as f64 / n,
            worse_than_prediction_rate: worse as f64 / n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub config: SimulationConfig,
    pub master_seed: u64,
    pub max_value: u32,
    pub schemes: Vec<SchemeRecord>,
}

impl SimulationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "n={} trials={} seed={} prediction={:?} channel={:?}",
            c.n, c.trials, self.master_seed, c.prediction, c.channel
        );
        let width = self
            .schemes
            .iter()
            .map(|r| r.scheme.len())
            .max()
            .unwrap_or(0)
            .max("scheme".len());
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>9}  {:>8}  {:>8}",
            "scheme", "mse", "psnr_db", "exact", "worse"
        );
        for r in &self.schemes {
            let db = if r.psnr_db.is_infinite() {
                "inf".to_string()
            } else {
                format!("{:.3}", r.psnr_db)
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:>12.6}  {:>9}  {:>8.5}  {:>8.5}",
                r.scheme, r.mse, db, r.exact_recovery_rate, r.worse_than_prediction_rate
            );
        }
        out
    }
}
