//! Hamming-distance profiles and checks of the distance laws of the
//! counting code.
//!
//! Every profile is cyclic: offset `k` compares entry `j` with entry
//! `(j + k) mod len`, so the last entries wrap around to the first.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;

use crate::codeword::{check_width, CodeTable, Codeword};
use crate::error::{Error, Result};

/// Number of bit positions in which `a` and `b` differ.
///
/// # Panics
///
/// Panics if the widths differ.
pub fn hamming(a: Codeword, b: Codeword) -> u32 {
    assert_eq!(a.width(), b.width(), "hamming distance of unequal widths");
    (a.bits() ^ b.bits()).count_ones()
}

/// Cyclic near-`k` distances of a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceProfile {
    pub offset: usize,
    /// `distances[j] = hamming(seq[(j + offset) % len], seq[j])`.
    pub distances: Vec<u32>,
}

impl DistanceProfile {
    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.distances.iter().map(|&d| u64::from(d)).sum()
    }

    pub fn min(&self) -> Option<u32> {
        self.distances.iter().copied().min()
    }
}

pub fn near_k_profile(seq: &[Codeword], offset: usize) -> DistanceProfile {
    let len = seq.len();
    let distances = (0..len)
        .map(|j| hamming(seq[(j + offset) % len], seq[j]))
        .collect();
    DistanceProfile { offset, distances }
}

/// Mean cyclic near-1 distance, as an exact fraction.
///
/// # Panics
///
/// Panics on an empty sequence.
pub fn average_hamming(seq: &[Codeword]) -> Ratio<u64> {
    assert!(!seq.is_empty(), "average distance of an empty sequence");
    Ratio::new(near_k_profile(seq, 1).total(), seq.len() as u64)
}

/// True if `seq` visits each of the `2^width` words exactly once.
pub fn is_counting_sequence(seq: &[Codeword]) -> bool {
    counting_table(seq).is_ok()
}

fn counting_table(seq: &[Codeword]) -> Result<CodeTable> {
    CodeTable::from_sequence(seq.to_vec())
}

/// Outcome of one distance-law check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub theorem: String,
    pub n: u32,
    pub pass: bool,
    pub details: String,
}

impl Verdict {
    fn new(theorem: &str, n: u32, pass: bool, details: String) -> Self {
        Verdict {
            theorem: theorem.to_string(),
            n,
            pass,
            details,
        }
    }
}

pub const AVERAGE_BOUND: &str = "average-distance-bound";
pub const NEAR1_LAW: &str = "near1-distance-law";
pub const NEAR2_LAW: &str = "near2-distance-law";
pub const EVEN_STEP_PARITY: &str = "even-step-parity";

/// Checks `1 <= average_hamming(seq) <= n - 1/2` for a counting sequence of
/// width `n > 1`, with exact arithmetic.
pub fn check_average_bound(seq: &[Codeword]) -> Result<Verdict> {
    let table = counting_table(seq)?;
    let n = table.width();
    if n < 2 {
        return Err(Error::NotCountingSequence(
            "average-distance bound needs width > 1".into(),
        ));
    }
    let avg = average_hamming(seq);
    let upper = Ratio::new(2 * u64::from(n) - 1, 2);
    let pass = Ratio::from_integer(1) <= avg && avg <= upper;
    Ok(Verdict::new(
        AVERAGE_BOUND,
        n,
        pass,
        format!("average {avg} within [1, {upper}]"),
    ))
}

/// Checks the near-1 law of the counting code: every cyclic near-1 distance
/// is at least `n - 1`, equal to `n` exactly at indices `p - 1` and
/// `2p - 1`, and `n - 1` everywhere else.
pub fn check_near1_law(table: &CodeTable) -> Verdict {
    let n = table.width();
    let half = table.len() / 2;
    let profile = near_k_profile(table.entries(), 1);
    let bound_holds = profile.distances.iter().all(|&d| d + 1 >= n);
    let mut mismatches = Vec::new();
    for (k, &d) in profile.distances.iter().enumerate() {
        let expected = if k % half == half - 1 { n } else { n - 1 };
        if d != expected {
            mismatches.push(k);
        }
    }
    let pass = bound_holds && mismatches.is_empty();
    let details = format!(
        "min distance {} (bound {}); pattern mismatches at {}",
        profile.min().unwrap_or(0),
        n.saturating_sub(1),
        list_or_none(&mismatches)
    );
    Verdict::new(NEAR1_LAW, n, pass, details)
}

/// Checks the near-2 law of the counting code: distance 1 exactly where
/// `k mod p` is `p - 2` or `p - 1`, distance 2 elsewhere.
pub fn check_near2_law(table: &CodeTable) -> Verdict {
    let n = table.width();
    let half = table.len() / 2;
    let profile = near_k_profile(table.entries(), 2);
    let mut ones = Vec::new();
    let mut mismatches = Vec::new();
    for (k, &d) in profile.distances.iter().enumerate() {
        if d == 1 {
            ones.push(k);
        }
        let expected = if k % half + 2 >= half { 1 } else { 2 };
        if d != expected {
            mismatches.push(k);
        }
    }
    let details = format!(
        "distance 1 at {}; pattern mismatches at {}",
        list_or_none(&ones),
        list_or_none(&mismatches)
    );
    Verdict::new(NEAR2_LAW, n, mismatches.is_empty(), details)
}

/// True unless every cyclic step of `seq` has even distance while the words
/// do not all share one parity. Even steps preserve parity, so this always
/// holds; it is the lemma behind [`check_even_step_parity`].
pub fn even_steps_share_parity(seq: &[Codeword]) -> bool {
    let all_even = near_k_profile(seq, 1).distances.iter().all(|d| d % 2 == 0);
    if !all_even {
        return true;
    }
    match seq.first() {
        Some(first) => seq.iter().all(|cw| cw.odd_parity() == first.odd_parity()),
        None => true,
    }
}

/// Checks that a counting sequence cannot have all its near-1 distances
/// equal to one even number: such a sequence would only visit words of one
/// parity.
pub fn check_even_step_parity(seq: &[Codeword]) -> Result<Verdict> {
    let table = counting_table(seq)?;
    let profile = near_k_profile(seq, 1);
    let constant_even = profile
        .distances
        .first()
        .is_some_and(|&d| d % 2 == 0 && profile.distances.iter().all(|&x| x == d));
    let lemma = even_steps_share_parity(seq);
    let odd_words = seq.iter().filter(|cw| cw.odd_parity()).count();
    let details = format!(
        "near-1 profile constant and even: {constant_even}; {odd_words} of {} words have odd parity",
        seq.len()
    );
    Ok(Verdict::new(
        EVEN_STEP_PARITY,
        table.width(),
        lemma && !constant_even,
        details,
    ))
}

/// All checks applicable to a table of width `n`: the average bound for
/// `n > 1`, the near-1 law, the near-2 law for `n >= 3`, and the parity law.
pub fn verify_all(table: &CodeTable) -> Result<Vec<Verdict>> {
    let mut verdicts = Vec::new();
    if table.width() >= 2 {
        verdicts.push(check_average_bound(table.entries())?);
        verdicts.push(check_near1_law(table));
    }
    if table.width() >= 3 {
        verdicts.push(check_near2_law(table));
    }
    verdicts.push(check_even_step_parity(table.entries())?);
    Ok(verdicts)
}

/// Exhaustively searches all `(2^n)!` orderings of the `n`-bit words for one
/// whose cyclic near-1 distance is constantly `l`. Returns the
/// lexicographically first witness, or `None`.
///
/// Only `n` in `{2, 3}` is accepted; `l` must be even with `2 <= l <= n`.
pub fn search_constant_even_near1(n: u32, l: u32) -> Result<Option<Vec<Codeword>>> {
    if !(2..=3).contains(&n) {
        return Err(Error::SearchRange(format!(
            "width {n}: exhaustive search only supports widths 2 and 3"
        )));
    }
    if !l.is_multiple_of(2) || l < 2 || l > n {
        return Err(Error::SearchRange(format!(
            "distance {l} must be even and within 2..={n}"
        )));
    }
    Ok(search_constant_near1(n, l))
}

fn search_constant_near1(n: u32, l: u32) -> Option<Vec<Codeword>> {
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    loop {
        let len = order.len();
        let hit = (0..len).all(|i| (order[i] ^ order[(i + 1) % len]).count_ones() == l);
        if hit {
            return Some(order.iter().map(|&b| Codeword::from_raw(b, n)).collect());
        }
        if !next_permutation(&mut order) {
            return None;
        }
    }
}

/// Every ordering of the `n`-bit words, in lexicographic order of the
/// underlying integers.
pub fn orderings(n: u32) -> Result<Orderings> {
    check_width(n, 1)?;
    Ok(Orderings {
        width: n,
        next: Some((0..1u32 << n).collect()),
    })
}

pub struct Orderings {
    width: u32,
    next: Option<Vec<u32>>,
}

impl Iterator for Orderings {
    type Item = Vec<Codeword>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let item = current
            .iter()
            .map(|&b| Codeword::from_raw(b, self.width))
            .collect();
        let mut following = current;
        if next_permutation(&mut following) {
            self.next = Some(following);
        }
        Some(item)
    }
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation(items: &mut [u32]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

/// Table-2-style CSV: `k,codeword,near-1,near-2,...` for the given offsets.
pub fn profile_csv(table: &CodeTable, offsets: &[usize]) -> String {
    let profiles: Vec<DistanceProfile> = offsets
        .iter()
        .map(|&k| near_k_profile(table.entries(), k))
        .collect();
    let mut out = String::new();
    for (k, cw) in table.entries().iter().enumerate() {
        let _ = write!(out, "{k},{cw}");
        for p in &profiles {
            let _ = write!(out, ",{}", p.distances[k]);
        }
        out.push('\n');
    }
    out
}

fn list_or_none(items: &[usize]) -> String {
    if items.is_empty() {
        "none".to_string()
    } else {
        let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
        parts.join(",")
    }
}
