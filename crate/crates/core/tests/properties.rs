use counting_code::analysis::{even_steps_share_parity, is_counting_sequence};
use counting_code::reconstruct::candidates;
use counting_code::{
    check_near1_law, check_near2_law, generate_counting, hamming, near_k_profile, neighbors_within,
    reconstruct, CodeTable, Codeword, ReconstructionPolicy, TieBreak,
};
use proptest::prelude::*;

fn policy_strategy(width: u32) -> impl Strategy<Value = ReconstructionPolicy> {
    (0..=width.min(3), any::<bool>(), any::<bool>()).prop_map(|(radius, center, larger)| {
        ReconstructionPolicy {
            radius,
            include_center: center,
            tie_break: if larger {
                TieBreak::PreferLarger
            } else {
                TieBreak::PreferSmaller
            },
        }
    })
}

proptest! {
    #[test]
    fn complement_is_an_involution(width in 1u32..=16, raw in any::<u32>()) {
        let cw = Codeword::new(raw & ((1 << width) - 1), width).unwrap();
        prop_assert_eq!(cw.complement().complement(), cw);
        prop_assert_eq!(hamming(cw, cw.complement()), width);
    }

    #[test]
    fn laws_hold_for_all_widths(n in 3u32..=12) {
        let t = generate_counting(n).unwrap();
        prop_assert!(check_near1_law(&t).pass);
        prop_assert!(check_near2_law(&t).pass);
    }

    #[test]
    fn profile_rotates_with_table(n in 2u32..=8, shift in 0usize..256, k in 0usize..6) {
        let t = generate_counting(n).unwrap();
        let len = t.len();
        let shift = shift % len;
        let mut rotated = t.entries().to_vec();
        rotated.rotate_left(shift);
        let mut expected = near_k_profile(t.entries(), k).distances;
        expected.rotate_left(shift);
        prop_assert_eq!(near_k_profile(&rotated, k).distances, expected);
    }

    #[test]
    fn reconstruct_returns_a_candidate(
        n in 2u32..=8,
        raw in any::<u32>(),
        pred in any::<u32>(),
        policy in (2u32..=8).prop_flat_map(policy_strategy),
    ) {
        prop_assume!(policy.radius <= n);
        let t = generate_counting(n).unwrap();
        let decoded = Codeword::new(raw & t.max_value(), n).unwrap();
        let predicted = pred & t.max_value();
        let out = reconstruct(decoded, predicted, &t, &policy);
        prop_assert!(out <= t.max_value());
        let cands = candidates(decoded, &t, &policy);
        if cands.is_empty() {
            prop_assert_eq!(out, t.decode(decoded));
        } else {
            prop_assert!(cands.iter().any(|&(_, v)| v == out));
            let best = cands.iter().map(|&(_, v)| v.abs_diff(predicted)).min().unwrap();
            prop_assert_eq!(out.abs_diff(predicted), best);
        }
    }

    #[test]
    fn reconstruct_ignores_enumeration_order(
        n in 2u32..=8,
        raw in any::<u32>(),
        pred in any::<u32>(),
        radius in 0u32..=2,
        seed in any::<u64>(),
    ) {
        // Brute force over a shuffled candidate list with the documented
        // ordering key.
        let t = generate_counting(n).unwrap();
        let decoded = Codeword::new(raw & t.max_value(), n).unwrap();
        let predicted = pred & t.max_value();
        let policy = ReconstructionPolicy::with_radius(radius);
        let mut cands: Vec<(Codeword, u32)> = std::iter::once(decoded)
            .chain(neighbors_within(decoded, radius))
            .map(|c| (c, t.decode(c)))
            .collect();
        let mut state = seed | 1;
        for i in (1..cands.len()).rev() {
            state ^= state << 13; state ^= state >> 7; state ^= state << 17;
            cands.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let oracle = cands
            .iter()
            .min_by_key(|&&(c, v)| (v.abs_diff(predicted), v, c))
            .unwrap()
            .1;
        prop_assert_eq!(reconstruct(decoded, predicted, &t, &policy), oracle);
    }

    #[test]
    fn uncorrupted_word_with_matching_prediction(n in 2u32..=10, v in any::<u32>(), radius in 0u32..=2) {
        let t = generate_counting(n).unwrap();
        let v = v & t.max_value();
        let out = reconstruct(t.encode(v).unwrap(), v, &t, &ReconstructionPolicy::with_radius(radius));
        prop_assert_eq!(out, v);
    }

    #[test]
    fn even_step_walks_never_count(n in 2u32..=8, start in any::<u32>(), steps in prop::collection::vec(any::<u32>(), 1..64)) {
        let size = 1u32 << n;
        let mut word = start % size;
        let mut walk = vec![Codeword::new(word, n).unwrap()];
        for s in steps {
            let mut mask = s % size;
            if mask.count_ones() % 2 == 1 {
                mask ^= 1;
            }
            word ^= mask;
            walk.push(Codeword::new(word, n).unwrap());
        }
        prop_assert!(even_steps_share_parity(&walk));
        let parity = walk[0].odd_parity();
        prop_assert!(walk.iter().all(|w| w.odd_parity() == parity));
        prop_assert!(!is_counting_sequence(&walk));
    }
}

/// Every single-bit corruption of every width-4 codeword, reconstructed with
/// the original value as prediction.
#[test]
fn single_bit_errors_at_width_four() {
    let t = generate_counting(4).unwrap();
    let policy = ReconstructionPolicy::default();
    let mut misses = Vec::new();
    for v in 0..16u32 {
        let sent = t.encode(v).unwrap();
        for bit in 0..4 {
            let received = sent.flip(1 << bit);
            let cands = candidates(received, &t, &policy);
            // The original is one bit away, so it is always a candidate and
            // at distance 0 from the prediction: always the unique minimum.
            let zero = cands.iter().filter(|&&(_, c)| c == v).count();
            assert_eq!(zero, 1);
            let out = reconstruct(received, v, &t, &policy);
            if out != v {
                misses.push((v, bit));
            }
        }
    }
    assert!(misses.is_empty(), "{misses:?}");
}

#[test]
fn natural_binary_table_is_identity() {
    let t = CodeTable::natural_binary(5).unwrap();
    for v in 0..32 {
        assert_eq!(t.encode(v).unwrap().bits(), v);
    }
}
