//! Exit-criteria suite; see `tests/acceptance.rs`.
