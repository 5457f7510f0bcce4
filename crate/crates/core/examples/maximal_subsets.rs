//! Inconsistent premises: maximal consistent subsets and per-subset support.
//!
//! cargo run --release --example maximal_subsets

use statsupport::support::{maximal_consistent_subsets, satisfiable, support, EngineConfig};
use statsupport::syntax::{parse_kb, parse_sentence};

fn main() -> statsupport::Result<()> {
    let kb = parse_kb(include_str!("../fixtures/lottery.kb"))?;
    let cfg = EngineConfig::default();
    println!("satisfiable at sizes 2..6: {}", satisfiable(&kb, &cfg)?);

    for (i, ids) in maximal_consistent_subsets(&kb, &cfg)?.iter().enumerate() {
        let dropped: Vec<String> = (0..kb.len())
            .filter(|j| !ids.contains(j))
            .map(|j| kb.sentences()[j].to_string())
            .collect();
        println!("subset {i} drops {}", dropped.join(", "));
    }

    for q in ["H(c)", "~W(t1)", "W(t1) | W(t2) | W(t3)"] {
        let v = support(&kb, &parse_sentence(q)?, &cfg)?;
        let per: Vec<String> = v
            .mcs_breakdown
            .iter()
            .flatten()
            .map(|e| e.interval.as_ref().map_or("-".into(), |i| i.to_string()))
            .collect();
        println!("{q:<22} {:?} {:<18} subsets: {}", v.status, v.interval.map_or("".into(), |i| i.to_string()), per.join(" "));
    }
    Ok(())
}
