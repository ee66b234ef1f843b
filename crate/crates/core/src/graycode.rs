//! Binary-reflected Gray codes.

use crate::codeword::{check_width, CodeTable, Codeword};
use crate::error::Result;

/// Binary-reflected Gray code of length `n`, built by reflection.
///
/// Starting from `(0, 1)`, each step appends the reversed list and sets the
/// new top bit on the reversed half.
pub fn generate_gray(n: u32) -> Result<CodeTable> {
    check_width(n, 1)?;
    CodeTable::from_bits(&reflect(n), n)
}

pub(crate) fn reflect(n: u32) -> Vec<u32> {
    let mut code = vec![0u32, 1];
    for width in 1..n {
        let prefix = 1 << width;
        let mirrored: Vec<u32> = code.iter().rev().map(|&w| w | prefix).collect();
        code.extend(mirrored);
    }
    code
}

/// True if every cyclically adjacent pair, last to first included, differs
/// in exactly one bit.
pub fn is_cyclic_gray(seq: &[Codeword]) -> bool {
    if seq.is_empty() {
        return false;
    }
    let len = seq.len();
    (0..len).all(|i| (seq[i].bits() ^ seq[(i + 1) % len].bits()).count_ones() == 1)
}
