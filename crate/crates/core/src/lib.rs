//! Balanced reconstruction codes for single-edit channels.
//!
//! A code `C ⊆ U_n` of balanced binary words is an `(n, N; B)`-reconstruction
//! code when any two distinct codewords share fewer than `N` words in their
//! error balls `B(x)`, so every codeword is pinned down by any `N` distinct
//! noisy reads. This crate provides
//!
//! * [`words`]: packed binary words and their run, period and inversion statistics;
//! * [`channels`]: the seven single-edit balls and read coverage `ν(C; B)`;
//! * [`confusability`]: Type-A/Type-B structure and intersection-size prediction;
//! * [`constructions`]: BVT, BLT, periodicity-constrained and inversion-residue codes;
//! * [`verifier`]: certification, decoding from reads, exact and greedy extremal search;
//! * [`bounds`] and [`tables`]: exact bound evaluation and redundancy tables;
//! * [`audit`]: the exhaustive intersection-characterization audit.
//!
//! Data-parallel loops go through [`Exec`]; the `parallel` feature (on by
//! default) backs them with rayon.

pub mod audit;
pub mod bounds;
pub mod channels;
pub mod confusability;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod tables;
pub mod verifier;
pub mod words;

pub use channels::{
    ball, ball_intersection_size, read_coverage, read_coverage_with, Ball, Channel,
    CoverageOptions, CoverageReport,
};
pub use confusability::{
    predict_intersection, type_a_confusable, type_b_confusable, ConfusabilityKind,
    ConfusabilityWitness, Prediction,
};
pub use constructions::{best_residue, redundancy, Code, CodeMeta, Construction, Family};
pub use error::{Error, Result};
pub use exec::Exec;
pub use verifier::{
    certify, exact_max_code, greedy_code, reconstruct, Certification, DecodeError, Decoder,
};
pub use words::{enumerate_balanced, Word};
