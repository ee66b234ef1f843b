//! Prediction-guided reconstruction.
//!
//! A decoded codeword that disagrees with the prediction is treated as a
//! possible mis-correction: the codewords in a small Hamming ball around it
//! are decoded and the value closest to the prediction is kept.

use std::cmp::Ordering;

use serde::Serialize;

use crate::codeword::{CodeTable, Codeword};

/// How equidistant candidate values are ordered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Smaller value first, then the lexicographically smaller codeword.
    #[default]
    PreferSmaller,
    /// Larger value first, then the lexicographically smaller codeword.
    PreferLarger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReconstructionPolicy {
    /// Largest Hamming distance from the decoded word searched.
    pub radius: u32,
    /// Whether the decoded word itself competes.
    pub include_center: bool,
    pub tie_break: TieBreak,
}

impl Default for ReconstructionPolicy {
    fn default() -> Self {
        ReconstructionPolicy {
            radius: 1,
            include_center: true,
            tie_break: TieBreak::PreferSmaller,
        }
    }
}

impl ReconstructionPolicy {
    pub fn with_radius(radius: u32) -> Self {
        ReconstructionPolicy {
            radius,
            ..Self::default()
        }
    }
}

/// All codewords at distance `1..=radius` from `cw`, ordered by distance and
/// then by error pattern.
///
/// # Panics
///
/// Panics if `radius` exceeds the codeword width.
pub fn neighbors_within(cw: Codeword, radius: u32) -> Vec<Codeword> {
    let width = cw.width();
    assert!(radius <= width, "radius {radius} exceeds width {width}");
    let mut out = Vec::new();
    for weight in 1..=radius {
        for_each_pattern(width, weight, |mask| out.push(cw.flip(mask)));
    }
    out
}

/// Calls `f` with every `width`-bit mask of exactly `weight` ones, in
/// increasing order.
fn for_each_pattern(width: u32, weight: u32, mut f: impl FnMut(u32)) {
    if weight == 0 || weight > width {
        return;
    }
    let limit = 1u64 << width;
    let mut mask = (1u64 << weight) - 1;
    while mask < limit {
        f(mask as u32);
        // Gosper's hack: next larger integer with the same popcount.
        let lowest = mask & mask.wrapping_neg();
        let ripple = mask + lowest;
        mask = (((ripple ^ mask) >> 2) / lowest) | ripple;
    }
}

/// Candidate `(codeword, value)` pairs considered by [`reconstruct`], in
/// enumeration order (center first when included).
pub fn candidates(
    decoded: Codeword,
    table: &CodeTable,
    policy: &ReconstructionPolicy,
) -> Vec<(Codeword, u32)> {
    let mut out = Vec::new();
    if policy.include_center {
        out.push((decoded, table.decode(decoded)));
    }
    out.extend(
        neighbors_within(decoded, policy.radius)
            .into_iter()
            .map(|cw| (cw, table.decode(cw))),
    );
    out
}

/// The candidate value closest to `predicted`.
///
/// With `include_center` off and `radius == 0` there are no candidates; the
/// decoded value is returned unchanged.
///
/// # Panics
///
/// Panics if `decoded` does not match the table width or the radius exceeds
/// it.
pub fn reconstruct(
    decoded: Codeword,
    predicted: u32,
    table: &CodeTable,
    policy: &ReconstructionPolicy,
) -> u32 {
    let mut best: Option<(Codeword, u32)> = None;
    let mut consider = |cw: Codeword| {
        let value = table.decode(cw);
        let better = match best {
            None => true,
            Some(current) => {
                compare(policy.tie_break, predicted, (cw, value), current) == Ordering::Less
            }
        };
        if better {
            best = Some((cw, value));
        }
    };
    if policy.include_center {
        consider(decoded);
    }
    assert!(
        policy.radius <= decoded.width(),
        "radius {} exceeds width {}",
        policy.radius,
        decoded.width()
    );
    for weight in 1..=policy.radius {
        for_each_pattern(decoded.width(), weight, |mask| consider(decoded.flip(mask)));
    }
    best.map_or_else(|| table.decode(decoded), |(_, v)| v)
}

fn compare(tie: TieBreak, predicted: u32, a: (Codeword, u32), b: (Codeword, u32)) -> Ordering {
    let by_distance = a.1.abs_diff(predicted).cmp(&b.1.abs_diff(predicted));
    let by_value = match tie {
        TieBreak::PreferSmaller => a.1.cmp(&b.1),
        TieBreak::PreferLarger => b.1.cmp(&a.1),
    };
    by_distance.then(by_value).then(a.0.cmp(&b.0))
}

/// Thresholding baseline: keep the decoded value unless it is more than
/// `threshold` away from the prediction, in which case return the
/// prediction.
pub fn threshold_reconstruct(decoded_value: u32, predicted: u32, threshold: u32) -> u32 {
    if decoded_value.abs_diff(predicted) > threshold {
        predicted
    } else {
        decoded_value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::generate_counting;

    fn cw(s: &str) -> Codeword {
        Codeword::parse(s).unwrap()
    }

    #[test]
    fn radius_one_ball() {
        let mut got = neighbors_within(cw("1001"), 1);
        got.sort();
        let mut want = vec![cw("0001"), cw("1101"), cw("1011"), cw("1000")];
        want.sort();
        assert_eq!(got, want);
        assert!(neighbors_within(cw("1001"), 0).is_empty());
        assert_eq!(neighbors_within(cw("0110"), 2).len(), 10);
        assert_eq!(neighbors_within(cw("0110"), 4).len(), 15);
    }

    #[test]
    #[should_panic(expected = "exceeds width")]
    fn radius_beyond_width() {
        neighbors_within(cw("101"), 4);
    }

    #[test]
    fn worked_decode() {
        let t = generate_counting(4).unwrap();
        let policy = ReconstructionPolicy::default();
        let mut values: Vec<u32> = neighbors_within(cw("1001"), 1)
            .into_iter()
            .map(|c| t.decode(c))
            .collect();
        values.sort_unstable();
        assert_eq!(values, [3, 5, 7, 14]);
        assert_eq!(reconstruct(cw("1001"), 8, &t, &policy), 7);
        // 3 and 5 are both one away from 4; the smaller value wins.
        assert_eq!(reconstruct(cw("1001"), 4, &t, &policy), 3);
    }

    #[test]
    fn tie_break_rules() {
        let t = generate_counting(4).unwrap();
        // Candidates {11, 14, 3, 7, 5}; prediction 4 -> 3 and 5 tie at distance 1.
        let mut p = ReconstructionPolicy::default();
        assert_eq!(reconstruct(cw("1001"), 4, &t, &p), 3);
        // Prediction 6 -> 5 and 7 tie.
        assert_eq!(reconstruct(cw("1001"), 6, &t, &p), 5);
        p.tie_break = TieBreak::PreferLarger;
        assert_eq!(reconstruct(cw("1001"), 6, &t, &p), 7);
        assert_eq!(reconstruct(cw("1001"), 4, &t, &p), 5);
    }

    #[test]
    fn center_exclusion() {
        let t = generate_counting(4).unwrap();
        let mut p = ReconstructionPolicy::default();
        // 1001 decodes to 11; predicting 11 keeps it only with the center.
        assert_eq!(reconstruct(cw("1001"), 11, &t, &p), 11);
        p.include_center = false;
        assert_eq!(reconstruct(cw("1001"), 11, &t, &p), 14);
        p.radius = 0;
        assert_eq!(reconstruct(cw("1001"), 3, &t, &p), 11);
    }

    #[test]
    fn uncorrupted_decode_is_fixpoint() {
        let t = generate_counting(6).unwrap();
        let p = ReconstructionPolicy::with_radius(2);
        for v in 0..64 {
            assert_eq!(reconstruct(t.encode(v).unwrap(), v, &t, &p), v);
        }
    }

    #[test]
    fn threshold_baseline() {
        assert_eq!(threshold_reconstruct(11, 8, 1), 8);
        assert_eq!(threshold_reconstruct(9, 8, 2), 9);
        assert_eq!(threshold_reconstruct(5, 5, 0), 5);
        assert_eq!(threshold_reconstruct(6, 8, 2), 6);
    }

    #[test]
    fn candidate_listing() {
        let t = generate_counting(4).unwrap();
        let c = candidates(cw("1001"), &t, &ReconstructionPolicy::default());
        assert_eq!(c[0], (cw("1001"), 11));
        assert_eq!(c.len(), 5);
    }
}
