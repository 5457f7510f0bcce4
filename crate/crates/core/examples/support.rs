//! Degree of support per domain size, and how the size range matters.
//!
//! cargo run --release --example support

use statsupport::support::{support, EngineConfig, Mode, SizeRange};
use statsupport::syntax::{parse_kb, parse_sentence};

fn main() -> statsupport::Result<()> {
    let kb = parse_kb("%(A(x), B(x), 1/2, 1). B(a). A(a) <-> C(a).")?;
    let cfg = EngineConfig::default()
        .with_sizes(SizeRange::new(1, 5)?)
        .with_mode(Mode::Enumerate);

    for q in ["A(a)", "C(a)", "A(a) & C(a)", "~A(a)"] {
        let v = support(&kb, &parse_sentence(q)?, &cfg)?;
        println!("{q:<12} {}", serde_json::to_string(&v.per_size).unwrap());
    }

    // The default mode answers ground atoms from the statistics directly.
    let v = support(&kb, &parse_sentence("A(a)")?, &cfg.with_mode(Mode::Auto))?;
    println!("\n{}", serde_json::to_string_pretty(&v).unwrap());
    Ok(())
}
