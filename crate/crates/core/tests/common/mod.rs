#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use statsupport::model::{holds, FiniteModel};
use statsupport::syntax::{KnowledgeBase, Sentence, Signature};

/// Every interpretation of `sig` over `0..n`, built one tuple at a time
/// through the public model API.
pub fn all_models(sig: &Signature, n: usize) -> Vec<FiniteModel> {
    let sig = Arc::new(sig.clone());
    let consts: Vec<String> = sig.constants.iter().cloned().collect();
    let mut slots: Vec<(String, Vec<usize>)> = Vec::new();
    for (p, &arity) in &sig.predicates {
        let rows = n.pow(arity as u32);
        for row in 0..rows {
            let mut t = vec![0; arity];
            let mut r = row;
            for k in (0..arity).rev() {
                t[k] = r % n;
                r /= n;
            }
            slots.push((p.clone(), t));
        }
    }
    let placements = n.pow(consts.len() as u32);
    let mut out = Vec::new();
    for bits in 0u64..1 << slots.len() {
        for place in 0..placements {
            let mut m = FiniteModel::new(sig.clone(), n).unwrap();
            let mut p = place;
            for c in &consts {
                m.set_constant(c, p % n).unwrap();
                p /= n;
            }
            for (i, (pred, t)) in slots.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    m.insert(pred, t).unwrap();
                }
            }
            out.push(m);
        }
    }
    out
}

/// (premise models, premise-and-query models) by checking every model.
pub fn brute_counts(kb: &KnowledgeBase, query: &Sentence, n: usize) -> (u64, u64) {
    let sig = kb.signature(std::slice::from_ref(query)).unwrap();
    let (mut premises, mut both) = (0, 0);
    for m in all_models(&sig, n) {
        if kb.sentences().iter().all(|s| holds(&m, s).unwrap()) {
            premises += 1;
            if holds(&m, query).unwrap() {
                both += 1;
            }
        }
    }
    (premises, both)
}

const PREDS: [&str; 3] = ["P", "Q", "R"];
const CONSTS: [&str; 2] = ["a", "b"];

fn open<R: Rng>(rng: &mut R, depth: usize) -> String {
    let atom = |rng: &mut R| {
        let p = PREDS[rng.gen_range(0..PREDS.len())];
        if rng.gen_bool(0.8) {
            format!("{p}(x)")
        } else {
            format!("{p}({})", CONSTS[rng.gen_range(0..2)])
        }
    };
    if depth == 0 || rng.gen_bool(0.4) {
        return atom(rng);
    }
    match rng.gen_range(0..3) {
        0 => format!("~{}", open(rng, depth - 1)),
        1 => format!("({} & {})", open(rng, depth - 1), open(rng, depth - 1)),
        _ => format!("({} | {})", open(rng, depth - 1), open(rng, depth - 1)),
    }
}

/// A random closed sentence over at most three unary predicates and two
/// constants, `%` statements included.
pub fn monadic_sentence<R: Rng>(rng: &mut R, depth: usize) -> String {
    match rng.gen_range(0..6) {
        0 | 1 => {
            let p = PREDS[rng.gen_range(0..3)];
            let c = CONSTS[rng.gen_range(0..2)];
            if rng.gen_bool(0.3) {
                format!("~{p}({c})")
            } else {
                format!("{p}({c})")
            }
        }
        2 => {
            let q = if rng.gen_bool(0.5) { "forall" } else { "exists" };
            format!("{q} x ({})", open(rng, 2))
        }
        3 => {
            let (a, b) = (rng.gen_range(0..=10), rng.gen_range(0..=10));
            let (lo, hi) = (a.min(b), a.max(b));
            format!("%({}, {}, {lo}/10, {hi}/10)", open(rng, 1), open(rng, 1))
        }
        _ if depth > 0 => {
            let op = ["&", "|", "->", "<->"][rng.gen_range(0..4)];
            format!("({}) {op} ({})", monadic_sentence(rng, depth - 1), monadic_sentence(rng, depth - 1))
        }
        _ => format!("{}({})", PREDS[rng.gen_range(0..3)], CONSTS[rng.gen_range(0..2)]),
    }
}

pub fn monadic_kb<R: Rng>(rng: &mut R) -> String {
    let k = rng.gen_range(1..=3);
    (0..k).map(|_| monadic_sentence(rng, 1) + ".\n").collect()
}
