//! Inputs shared by the benchmarks.

use freeha_core::Formula;

/// Formulas timed by the decision benchmarks: `(text, expected validity)`.
pub const DECIDE_CASES: &[(&str, bool)] = &[
    ("x -> ~~x", true),
    ("((x -> 0) -> x) -> x", false),
    ("~x | ~~x", false),
    ("x -> (y -> x)", true),
    ("(x -> y) | (y -> x)", false),
];

pub fn parsed_cases() -> Vec<(Formula, bool)> {
    DECIDE_CASES
        .iter()
        .map(|&(s, v)| (Formula::parse(s).expect("bench formula parses"), v))
        .collect()
}
