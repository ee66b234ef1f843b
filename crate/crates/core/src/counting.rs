//! The Gray-derived counting code.
//!
//! A length-`n` code is derived from the reflected Gray code `y_0..y_{p-1}`
//! of length `n - 1` (`p = 2^(n-1)`) in three steps:
//!
//! 1. mirror: append the reversed Gray code, giving `2p` words;
//! 2. complement: bitwise-complement every word at an odd index;
//! 3. prefix: prepend `0` to even-indexed words and `1` to odd-indexed ones.
//!
//! The result is
//! `(0y_0, 1Cy_1, 0y_2, ..., 1Cy_{p-1}, 0y_{p-1}, 1Cy_{p-2}, ..., 0y_1, 1Cy_0)`
//! where `C` is the bitwise complement. Adjacent values then differ in at
//! least `n - 1` bits and values two apart in one or two bits.

use std::fmt::Write as _;

use crate::codeword::{check_width, CodeTable, Codeword};
use crate::error::Result;
use crate::graycode::reflect;

/// Every intermediate sequence of the construction, for inspection.
#[derive(Clone, Debug)]
pub struct ConstructionTrace {
    /// Reflected Gray code of length `n - 1`.
    pub gray: Vec<Codeword>,
    /// Gray code followed by its reverse.
    pub mirrored: Vec<Codeword>,
    /// Mirrored sequence with odd indices complemented.
    pub complemented: Vec<Codeword>,
    /// Final code with alternating prefix bits.
    pub code: CodeTable,
}

/// Runs the construction for width `n` (`2..=16`) and keeps every step.
pub fn trace_counting(n: u32) -> Result<ConstructionTrace> {
    check_width(n, 2)?;
    let seed_width = n - 1;
    let gray: Vec<Codeword> = reflect(seed_width)
        .into_iter()
        .map(|b| Codeword::from_raw(b, seed_width))
        .collect();

    let mut mirrored = gray.clone();
    mirrored.extend(gray.iter().rev());

    let complemented: Vec<Codeword> = mirrored
        .iter()
        .enumerate()
        .map(|(i, &cw)| if i % 2 == 1 { cw.complement() } else { cw })
        .collect();

    let prefixed = complemented
        .iter()
        .enumerate()
        .map(|(i, cw)| cw.with_prefix(i % 2 == 1))
        .collect::<Result<Vec<_>>>()?;

    Ok(ConstructionTrace {
        gray,
        mirrored,
        complemented,
        code: CodeTable::from_sequence(prefixed)?,
    })
}

/// The counting code of width `n` (`2..=16`).
pub fn generate_counting(n: u32) -> Result<CodeTable> {
    Ok(trace_counting(n)?.code)
}

/// Renders a table as `k,codeword` lines, codewords MSB-first.
pub fn table_csv(table: &CodeTable) -> String {
    let mut out = String::new();
    for (k, cw) in table.entries().iter().enumerate() {
        let _ = writeln!(out, "{k},{cw}");
    }
    out
}
