//! Parse a knowledge base, report its signature and print it back.
//!
//! cargo run --example parse

use statsupport::syntax::{parse_kb, parse_sentence};

const KB: &str = "
# most birds fly; penguins are birds that mostly don't
%(Flies(x), Bird(x), 9/10, 1).
forall x (Penguin(x) -> Bird(x)).
%(Flies(x), Penguin(x), 0, 1/20).
Penguin(opus).
";

fn main() {
    let kb = parse_kb(KB).expect("fixture parses");
    println!("{} sentences; {}", kb.len(), kb.signature(&[]).unwrap());
    for (label, s) in kb.labels().iter().zip(kb.sentences()) {
        println!("{label:>8}  {s}");
    }

    // Printing then re-parsing gives the same tree.
    let s = parse_sentence("~(P(a) | Q(a)) -> forall y (R(y, a) <-> ~P(y))").unwrap();
    assert_eq!(parse_sentence(&s.to_string()).unwrap(), s);
    println!("\n{s}");

    // Errors carry positions.
    for bad in ["P(a) & .", "%(A(x), B(x), 9/10, 1/2).", "P(x)."] {
        match parse_kb(bad) {
            Ok(_) => unreachable!(),
            Err(diags) => {
                for d in diags {
                    println!("{bad:<28} {d}");
                }
            }
        }
    }
}
