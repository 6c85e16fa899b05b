//! Runs the acceptance criteria and prints one line per criterion.
//!
//! cargo run --release --example verify [criterion numbers…]

use robin_clusters::verify::{run_timed, VerifyOptions};

fn main() {
    let only = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let opts = VerifyOptions {
        only,
        ..VerifyOptions::default()
    };
    let report = run_timed(&opts, |v, secs| println!("{} [{secs:.2} s]", v.line()));
    std::process::exit(if report.all_pass { 0 } else { 1 });
}
