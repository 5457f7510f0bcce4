//! Run the bundled rule fixtures.
//!
//! cargo run --release --example theorems

use statsupport::census::CensusOptions;
use statsupport::theorems::run_theorems;

fn main() {
    let report = run_theorems(&CensusOptions::default());
    println!("{report}");
    if !report.all_passed() {
        std::process::exit(1);
    }
}
