//! Evaluate sentences and statistical statements in one finite model.
//!
//! cargo run --example models

use std::sync::Arc;

use statsupport::model::{holds, satisfaction_set, stat_ratio, FiniteModel};
use statsupport::syntax::{parse_kb, parse_sentence, Formula, Term};

fn main() -> statsupport::Result<()> {
    let kb = parse_kb("B(a). %(A(x), B(x), 4/5, 4/5).")?;
    let sig = Arc::new(kb.signature(&[])?);

    // Five Bs, four of them As, with a pointing at element 0.
    let mut m = FiniteModel::new(sig, 5)?;
    m.set_constant("a", 0)?;
    for e in 0..5 {
        m.insert("B", &[e])?;
    }
    for e in 0..4 {
        m.insert("A", &[e])?;
    }
    println!("{}", serde_json::to_string(&m.dump()).unwrap());

    for s in kb.sentences() {
        println!("{s:<28} {}", holds(&m, s)?);
    }
    let q = parse_sentence("A(a)")?;
    println!("{q:<28} {}", holds(&m, &q)?);

    let (a, b) = (
        Formula::atom("A", vec![Term::var("x")]),
        Formula::atom("B", vec![Term::var("x")]),
    );
    println!("A&B satisfied by {:?}", satisfaction_set(&m, &Formula::and(a.clone(), b.clone()), &["x".into()])?.tuples);
    println!("ratio of A among B: {:?}", stat_ratio(&m, &a, &b)?);
    Ok(())
}
