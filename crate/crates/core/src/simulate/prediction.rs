//! Side-information models: how far the decoder's prediction lands from
//! the original value.

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PredictionModel {
    /// Prediction always equals the original.
    Exact,
    /// Offset uniform on `-bound..=bound`.
    UniformOffset { bound: u32 },
    /// Offset `k` with probability proportional to `exp(-|k| / scale)`.
    DiscreteLaplacian { scale: f64 },
}

impl PredictionModel {
    pub fn validate(&self) -> Result<()> {
        if let PredictionModel::DiscreteLaplacian { scale } = self {
            if !scale.is_finite() || *scale < 0.0 {
                return Err(Error::config(
                    "prediction_scale",
                    format!("{scale} must be finite and >= 0"),
                ));
            }
        }
        Ok(())
    }

    /// Draws an unclamped prediction offset.
    pub fn sample_offset<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        match *self {
            PredictionModel::Exact => 0,
            PredictionModel::UniformOffset { bound } => {
                let bound = i64::from(bound);
                rng.random_range(-bound..=bound)
            }
            PredictionModel::DiscreteLaplacian { scale } => {
                if scale == 0.0 {
                    return 0;
                }
                // Difference of two iid geometrics is two-sided geometric
                // with ratio q = exp(-1/scale).
                let q = (-1.0 / scale).exp();
                let geo = Geometric::new(1.0 - q).expect("ratio in (0, 1)");
                let up = geo.sample(rng) as i64;
                let down = geo.sample(rng) as i64;
                up - down
            }
        }
    }

    /// Prediction for `original`, clamped to `0..=max_value`.
    pub fn predict<R: Rng + ?Sized>(&self, original: u32, max_value: u32, rng: &mut R) -> u32 {
        let offset = self.sample_offset(rng);
        (i64::from(original) + offset).clamp(0, i64::from(max_value)) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for v in [0, 7, 15] {
            assert_eq!(PredictionModel::Exact.predict(v, 15, &mut rng), v);
            let u0 = PredictionModel::UniformOffset { bound: 0 };
            assert_eq!(u0.predict(v, 15, &mut rng), v);
            let l0 = PredictionModel::DiscreteLaplacian { scale: 0.0 };
            assert_eq!(l0.predict(v, 15, &mut rng), v);
        }
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = PredictionModel::UniformOffset { bound: 3 };
        for _ in 0..10_000 {
            let q = m.predict(1, 15, &mut rng);
            assert!(q <= 4);
        }
    }

    /// Mean and variance of `|clamp(original + K) - original|` for the
    /// two-sided geometric `K`, by direct summation of its pmf.
    fn truncated_abs_moments(scale: f64, original: i64, max_value: i64) -> (f64, f64) {
        let q = (-1.0 / scale).exp();
        let norm = (1.0 - q) / (1.0 + q);
        let (mut m1, mut m2) = (0.0, 0.0);
        for k in -4000i64..=4000 {
            let p = norm * q.powi(k.unsigned_abs() as i32);
            let d = ((original + k).clamp(0, max_value) - original).abs() as f64;
            m1 += p * d;
            m2 += p * d * d;
        }
        (m1, m2 - m1 * m1)
    }

    #[test]
    fn laplacian_mean_abs_offset() {
        for (scale, original, max_value) in [(2.0, 2u32, 15u32), (2.0, 128, 255), (0.7, 0, 15)] {
            let (mean, var) = truncated_abs_moments(scale, original.into(), max_value.into());
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let model = PredictionModel::DiscreteLaplacian { scale };
            let trials = 100_000;
            let total: u64 = (0..trials)
                .map(|_| {
                    u64::from(
                        model
                            .predict(original, max_value, &mut rng)
                            .abs_diff(original),
                    )
                })
                .sum();
            let empirical = total as f64 / f64::from(trials);
            let std_err = (var / f64::from(trials)).sqrt();
            assert!(
                (empirical - mean).abs() <= 3.0 * std_err,
                "scale {scale} orig {original}: {empirical} vs {mean} (se {std_err})"
            );
        }
    }

    #[test]
    fn rejects_negative_scale() {
        assert!(PredictionModel::DiscreteLaplacian { scale: -1.0 }
            .validate()
            .is_err());
        assert!(PredictionModel::DiscreteLaplacian { scale: f64::NAN }
            .validate()
            .is_err());
    }
}
