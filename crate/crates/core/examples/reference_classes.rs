//! Competing reference classes: specificity, strength and conflict.
//!
//! cargo run --example reference_classes

use statsupport::support::{detect_inference_structures, resolve};
use statsupport::syntax::{parse_kb, parse_sentence};

fn show(title: &str, text: &str) {
    let kb = parse_kb(text).unwrap();
    let (structures, inclusions) = detect_inference_structures(&kb, &parse_sentence("A(a)").unwrap());
    println!("{title}");
    for s in &structures {
        println!("  %({}, {}) {}", s.target, s.reference, s.interval);
    }
    for i in &inclusions {
        println!("  {} within {}", i.sub, i.sup);
    }
    match resolve(&structures, &inclusions) {
        Some(iv) => println!("  => {iv}\n"),
        None => println!("  => nothing to resolve\n"),
    }
}

fn main() {
    show(
        "narrower class, shifted interval",
        "%(A(x), B(x), 3/5, 7/10). %(A(x), Bp(x), 4/5, 9/10). B(a). Bp(a). forall x (Bp(x) -> B(x)).",
    );
    show(
        "nested intervals",
        "%(A(x), B(x), 4/5, 9/10). %(A(x), Bp(x), 7/10, 19/20). B(a). Bp(a). forall x (B(x) -> Bp(x)).",
    );
    show(
        "no known inclusion",
        "%(A(x), B(x), 3/5, 7/10). %(A(x), Bp(x), 3/4, 17/20). B(a). Bp(a).",
    );
    show(
        "inclusion through a chain",
        "%(A(x), B(x), 1/10, 1/5). %(A(x), D(x), 1/2, 3/5). B(a). D(a). forall x (D(x) -> C(x)). forall x (C(x) -> B(x)).",
    );
    show("no statistics about a", "B(a).");
}
