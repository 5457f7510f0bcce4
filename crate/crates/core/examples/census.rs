//! Count premise models exactly, by enumeration and by cell counts.
//!
//! cargo run --release --example census

use statsupport::census::{count_conditional, count_monadic, CensusOptions};
use statsupport::syntax::{parse_kb, parse_sentence};

fn main() -> statsupport::Result<()> {
    let kb = parse_kb("%(A(x), B(x), 4/5, 4/5). B(a).")?;
    let q = parse_sentence("A(a)")?;
    let opts = CensusOptions::default();

    let naive = count_conditional(&kb, &q, 5, &opts)?;
    let cells = count_monadic(&kb, Some(&q), 5, &opts)?;
    assert_eq!(naive, cells);
    println!("n=5 enumerated: {}", serde_json::to_string(&naive).unwrap());

    // Past anything enumerable: 2^60 * 30 interpretations.
    for n in [10, 20, 30] {
        let r = count_monadic(&kb, Some(&q), n, &opts)?;
        println!(
            "n={n:<3} premises {:>24}  with A(a) {:>24}",
            r.satisfying_premises, r.satisfying_premises_and_query
        );
    }

    // Thread count never changes a count.
    let one = count_conditional(&kb, &q, 5, &opts.with_threads(1))?;
    assert_eq!(one, naive);
    Ok(())
}
