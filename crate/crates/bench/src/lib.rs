//! Fixed inputs shared by the pipeline benchmarks.

use punk_hedonics::econometrics::Design;
use punk_hedonics::study::ModelSpec;
use punk_hedonics::synthetic::{synthetic_panel, GENERATING_COEFFICIENTS};
use punk_hedonics::DateRange;

/// Short texts exercising boosters, negation, caps, "but" and punctuation.
pub const TEXTS: [&str; 6] = [
    "The punk sale was GREAT!!!",
    "not a good week for the floor, but the art is beautiful",
    "extremely sad to see this dump :(",
    "kind of okay i guess",
    "never so happy with a purchase",
    "just listed a punk",
];

/// Model 4 design and response over an `n`-row synthetic panel.
pub fn model4_problem(n: usize) -> (Design, Vec<f64>) {
    let rows = synthetic_panel(42, n, &GENERATING_COEFFICIENTS, 1.0, DateRange::study_default());
    let y = rows.iter().map(|r| r.log_usd_price).collect();
    (ModelSpec::M4.design(&rows), y)
}
