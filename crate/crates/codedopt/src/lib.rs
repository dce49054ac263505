//! Straggler-resilient distributed black-box optimization with coded
//! perturbation directions.
//!
//! A master holds the iterate `theta` of a `d`-dimensional derivative-free
//! optimization problem and farms out `n >= d` directional-derivative probes
//! to workers. The probe directions are the rows of a Hadamard-based erasure
//! code, so the master can recover the full finite-difference gradient by
//! successive cancellation from whichever subset of workers answers first,
//! instead of waiting for the slowest machine. The crate bundles:
//!
//! * [`code`] — erasure-channel reliability analysis and frozen-channel
//!   selection (which of the `n` combined channels carry coordinates).
//! * [`codec`] — the butterfly encoder, decodability check, and the
//!   successive-cancellation decoder over real-valued worker outputs.
//! * [`objectives`] — black-box objectives with exact evaluation counting:
//!   least absolute deviations, least squares, and adversarial-input search
//!   against a bundled softmax classifier.
//! * [`estimators`] — finite-difference, averaged random-direction, and
//!   coded gradient estimators built from worker outputs.
//! * [`sim`] — worker runtime distributions, arrival schedules, and stopping
//!   rules (`first_k`, `first_decodable`, `all`) for straggler studies.
//! * [`optimizer`] — gradient-descent / Adam loops driven by simulated
//!   worker pools, with per-iteration traces.
//! * [`cli`] / [`config`] — a small command-line front end (`run`,
//!   `construct`, `encode-debug`, `decode-debug`, `simulate-timing`) around
//!   flat key=value experiment configs and CSV traces.
//!
//! Each major capability has a runnable demo under `examples/`:
//!
//! ```text
//! cargo run --release -p codedopt --example construct_code
//! cargo run --release -p codedopt --example encode_decode
//! cargo run --release -p codedopt --example gradient_estimators
//! cargo run --release -p codedopt --example straggler_timing
//! cargo run --release -p codedopt --example l1_benchmark
//! cargo run --release -p codedopt --example adversarial_attack
//! ```

pub mod cli;
pub mod code;
pub mod codec;
pub mod config;
pub mod estimators;
pub mod matrix;
pub mod objectives;
pub mod optimizer;
pub mod problems;
pub mod sim;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
