//! Reference-class competition for ground-atom queries.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::Interval;
use crate::syntax::{Formula, KnowledgeBase, Sentence, Term};

/// A statistical statement `%(target, reference, p, q)` together with a
/// premise placing the query's constant in the reference class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InferenceStructure {
    #[serde(serialize_with = "as_text")]
    pub target: Formula,
    #[serde(serialize_with = "as_text")]
    pub reference: Formula,
    pub instance: String,
    pub interval: Interval,
    pub stat_id: usize,
    pub instance_id: usize,
}

impl InferenceStructure {
    /// The reference predicate when the reference class is a single atom.
    pub fn reference_predicate(&self) -> Option<&str> {
        match &self.reference {
            Formula::Atom(p, args) if args.len() == 1 => Some(p),
            _ => None,
        }
    }
}

/// `forall x (sub(x) -> sup(x))` in the knowledge base.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct InclusionFact {
    pub sub: String,
    pub sup: String,
    pub id: usize,
}

fn as_text<S: serde::Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

fn ground_unary_atom(query: &Sentence) -> Option<(&str, &str)> {
    match query.formula() {
        Formula::Atom(p, args) => match args.as_slice() {
            [Term::Const(c)] => Some((p, c)),
            _ => None,
        },
        _ => None,
    }
}

fn inclusion(sentence: &Sentence) -> Option<(String, String)> {
    let Formula::Forall(v, body) = sentence.formula() else {
        return None;
    };
    let Formula::Implies(l, r) = body.as_ref() else {
        return None;
    };
    let unary_on_v = |f: &Formula| match f {
        Formula::Atom(p, args) if matches!(args.as_slice(), [Term::Var(x)] if x == v) => Some(p.clone()),
        _ => None,
    };
    Some((unary_on_v(l)?, unary_on_v(r)?))
}

/// Finds every inference structure bearing on a ground atom `A(a)`, and the
/// inclusion facts on paths between their reference predicates. Any other
/// query shape yields nothing.
pub fn detect_inference_structures(kb: &KnowledgeBase, query: &Sentence) -> (Vec<InferenceStructure>, Vec<InclusionFact>) {
    let Some((_, instance)) = ground_unary_atom(query) else {
        return (Vec::new(), Vec::new());
    };
    let constant = Term::constant(instance);
    let mut structures = Vec::new();
    for (stat_id, s) in kb.sentences().iter().enumerate() {
        let Formula::Stat { target, reference, lower, upper } = s.formula() else {
            continue;
        };
        let vars = target.free_vars();
        if vars.len() != 1 || reference.free_vars() != vars {
            continue;
        }
        let v = vars.first().expect("one variable");
        if target.substitute(v, &constant) != *query.formula() {
            continue;
        }
        let fact = reference.substitute(v, &constant);
        let Some(instance_id) = kb.sentences().iter().position(|t| *t.formula() == fact) else {
            continue;
        };
        let Ok(interval) = Interval::new(lower.clone(), upper.clone()) else {
            continue;
        };
        structures.push(InferenceStructure {
            target: target.as_ref().clone(),
            reference: reference.as_ref().clone(),
            instance: instance.to_string(),
            interval,
            stat_id,
            instance_id,
        });
    }

    let all: Vec<InclusionFact> = kb
        .sentences()
        .iter()
        .enumerate()
        .filter_map(|(id, s)| inclusion(s).map(|(sub, sup)| InclusionFact { sub, sup, id }))
        .collect();
    let refs: BTreeSet<&str> = structures.iter().filter_map(|s| s.reference_predicate()).collect();
    let reach = closure(&all);
    let from_ref = |p: &str| refs.contains(p) || refs.iter().any(|r| reach.contains(&(r.to_string(), p.to_string())));
    let to_ref = |p: &str| refs.contains(p) || refs.iter().any(|r| reach.contains(&(p.to_string(), r.to_string())));
    let inclusions = all.into_iter().filter(|f| from_ref(&f.sub) && to_ref(&f.sup)).collect();
    (structures, inclusions)
}

/// Transitive closure of the inclusion relation as `(sub, sup)` pairs.
fn closure(facts: &[InclusionFact]) -> BTreeSet<(String, String)> {
    let mut up: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for f in facts {
        up.entry(&f.sub).or_default().insert(&f.sup);
    }
    let mut out = BTreeSet::new();
    for &start in up.keys() {
        let mut stack = vec![start];
        let mut seen = BTreeSet::new();
        while let Some(p) = stack.pop() {
            for &q in up.get(p).into_iter().flatten() {
                if seen.insert(q) {
                    stack.push(q);
                }
            }
        }
        out.extend(seen.into_iter().map(|q| (start.to_string(), q.to_string())));
    }
    out
}

/// Combines competing structures into one interval.
///
/// 1. A structure loses to one whose reference class is strictly included
///    in its own when the two intervals are shifted.
/// 2. Among the rest, an interval strictly containing another is dropped.
/// 3. Whatever remains is covered by `[min lower, max upper]`.
///
/// Each step looks at the whole set at once, so the result does not depend
/// on input order. `None` for an empty input.
pub fn resolve(structures: &[InferenceStructure], inclusions: &[InclusionFact]) -> Option<Interval> {
    let reach = closure(inclusions);
    let below = |i: &InferenceStructure, j: &InferenceStructure| match (i.reference_predicate(), j.reference_predicate()) {
        (Some(a), Some(b)) if a != b => {
            reach.contains(&(a.to_string(), b.to_string())) && !reach.contains(&(b.to_string(), a.to_string()))
        }
        _ => false,
    };
    let specific: Vec<&InferenceStructure> = structures
        .iter()
        .filter(|j| {
            !structures
                .iter()
                .any(|i| below(i, j) && i.interval.is_shifted_from(&j.interval))
        })
        .collect();
    let strongest: Vec<&Interval> = specific
        .iter()
        .map(|s| &s.interval)
        .filter(|j| !specific.iter().any(|i| i.interval != **j && i.interval.is_within(j)))
        .collect();
    strongest.into_iter().cloned().reduce(|a, b| a.cover(&b))
}
