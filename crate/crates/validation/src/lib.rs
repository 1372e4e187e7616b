//! The acceptance gate lives in `tests/acceptance.rs`; run it with
//! `cargo test -p spinboson-validation --test acceptance`.
