//! Holds the `acceptance` test target (`tests/acceptance.rs`), which prints
//! one pass/fail line per criterion and exits non-zero if any fails.
