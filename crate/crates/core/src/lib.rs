//! Synchronizing automata: synchronizability checks, reset thresholds, the Set-Cover
//! reduction and the binary alphabet encoding.
//!
//! States and letters are 0-based throughout the API; the text formats are 1-based.

pub mod automaton;
pub mod bench;
pub mod encoding;
pub mod error;
pub mod fast;
pub mod functional;
pub mod pair;
pub mod random;
pub mod reset;
pub mod setcover;

pub use automaton::{CollectStates, Dfa, StateSet, Word};
pub use encoding::{
    approx_rt_via_encoding, decode_and_verify, decode_blocks, decode_word, encode_binary,
    encode_reset_word, BinaryCodec, EncodedEstimate,
};
pub use error::{Error, Result};
pub use fast::{
    is_synchronizing_fast, is_synchronizing_fast_with, FastCheckConfig, FastCheckOutcome, Path,
    Stage,
};
pub use functional::{cluster_structure, highest_tree_info, ClusterStructure, HighestTreeInfo};
pub use pair::{is_synchronizing_quadratic, merge_word, PairBfsTable};
pub use random::{estimate_sync_probability, sample_dfa, sample_set_cover, SeededRng};
pub use reset::{gen_cerny, greedy_reset, performance_ratio, shortest_reset, Method, ResetResult};
pub use setcover::{
    cover_from_word, exact_set_cover, greedy_set_cover, reduce_to_automaton, SetCoverInstance,
};
