//! Bit-error models standing in for failed error correction.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::codeword::Codeword;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChannelModel {
    /// Each bit flips independently with probability `p_flip`.
    IidBitflip { p_flip: f64 },
    /// Exactly `k` distinct bits flip with probability proportional to
    /// `weights[k]`, `k = 0..weights.len()`.
    AtMostMFlips { weights: Vec<f64> },
}

impl ChannelModel {
    pub fn iid(p_flip: f64) -> Self {
        ChannelModel::IidBitflip { p_flip }
    }

    /// Checks parameters against codeword width `width`.
    pub fn validate(&self, width: u32) -> Result<()> {
        match self {
            ChannelModel::IidBitflip { p_flip } => {
                if !(0.0..=1.0).contains(p_flip) {
                    return Err(Error::config("p_flip", format!("{p_flip} not in [0, 1]")));
                }
            }
            ChannelModel::AtMostMFlips { weights } => {
                if weights.is_empty() {
                    return Err(Error::config("flip_weights", "no weights given"));
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(Error::config(
                        "flip_weights",
                        "weights must be finite and >= 0",
                    ));
                }
                if weights.iter().sum::<f64>() <= 0.0 {
                    return Err(Error::config("flip_weights", "weights sum to zero"));
                }
                if weights.len() - 1 > width as usize {
                    return Err(Error::config(
                        "flip_weights",
                        format!(
                            "{} flips cannot happen in a {width}-bit word",
                            weights.len() - 1
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Draws an error pattern for a `width`-bit word. Assumes
    /// [`ChannelModel::validate`] passed.
    pub fn sample_pattern<R: Rng + ?Sized>(&self, width: u32, rng: &mut R) -> u32 {
        match self {
            ChannelModel::IidBitflip { p_flip } => {
                let mut pattern = 0;
                for bit in 0..width {
                    if rng.random_bool(*p_flip) {
                        pattern |= 1 << bit;
                    }
                }
                pattern
            }
            ChannelModel::AtMostMFlips { weights } => {
                let count = WeightedIndex::new(weights)
                    .expect("validated weights")
                    .sample(rng);
                index::sample(rng, width as usize, count)
                    .into_iter()
                    .fold(0, |acc, i| acc | (1 << i))
            }
        }
    }
}

/// Passes `cw` through the channel.
pub fn flip_bits<R: Rng + ?Sized>(cw: Codeword, channel: &ChannelModel, rng: &mut R) -> Codeword {
    cw.flip(channel.sample_pattern(cw.width(), rng))
}
