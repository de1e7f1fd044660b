//! Host crate for the `acceptance` test target.
//!
//! Run it with `cargo test -p fermiswap-validation --test acceptance`.
