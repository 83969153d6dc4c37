//! Holds the `acceptance` test target, which prints one PASS/FAIL line per
//! acceptance criterion; run it with `cargo test -p recsum-validation`.
