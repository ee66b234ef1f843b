//! Counting codes with large Hamming distance between nearby values.
//!
//! The counting code of width `n` is a reordering of all `n`-bit words,
//! derived from the reflected Gray code of width `n - 1`, in which the
//! codewords of values `v` and `v + 1` differ in at least `n - 1` bits and
//! those of `v` and `v + 2` in one or two bits. Used as a pixel remapping,
//! it lets a decoder that holds a prediction of each value undo a few
//! mis-corrected bits: the words one bit away from a suspicious decode are
//! tried and the value closest to the prediction is kept.
//!
//! ```
//! use counting_code::{generate_counting, reconstruct, Codeword, ReconstructionPolicy};
//!
//! let table = generate_counting(4).unwrap();
//! assert_eq!(table.encode(7).unwrap().to_string(), "1011");
//!
//! // 7 was sent, one bit flipped on the way, and the prediction was 8.
//! let received = Codeword::parse("1001").unwrap();
//! assert_eq!(table.decode(received), 11);
//! assert_eq!(reconstruct(received, 8, &table, &ReconstructionPolicy::default()), 7);
//! ```

pub mod analysis;
pub mod cli;
pub mod codeword;
pub mod counting;
pub mod error;
pub mod graycode;
pub mod reconstruct;
pub mod simulate;

pub use analysis::{
    average_hamming, check_average_bound, check_even_step_parity, check_near1_law, check_near2_law,
    hamming, near_k_profile, search_constant_even_near1, DistanceProfile, Verdict,
};
pub use codeword::{CodeTable, Codeword, MAX_WIDTH};
pub use counting::{generate_counting, trace_counting, ConstructionTrace};
pub use error::{Error, Result};
pub use graycode::{generate_gray, is_cyclic_gray};
pub use reconstruct::{
    neighbors_within, reconstruct, threshold_reconstruct, ReconstructionPolicy, TieBreak,
};
pub use simulate::{run_simulation, SimulationConfig, SimulationReport};
