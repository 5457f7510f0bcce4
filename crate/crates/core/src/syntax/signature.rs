use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::ast::{Formula, Sentence, Term};

/// Predicate arities, function arities and constant names, in sorted order.
/// The sort order fixes predicate and constant indices everywhere else.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub predicates: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} `{name}` used with arity {first} and arity {second}")]
pub struct ArityClash {
    pub kind: &'static str,
    pub name: String,
    pub first: usize,
    pub second: usize,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the symbols of `formula`, failing on the first arity clash.
    pub fn add_formula(&mut self, formula: &Formula) -> Result<(), ArityClash> {
        let mut result = Ok(());
        formula.for_each_atom(&mut |pred, args| {
            if result.is_err() {
                return;
            }
            result = insert_arity(&mut self.predicates, "predicate", pred, args.len())
                .and_then(|_| args.iter().try_for_each(|t| self.add_term(t)));
        });
        result
    }

    fn add_term(&mut self, term: &Term) -> Result<(), ArityClash> {
        match term {
            Term::Var(_) => Ok(()),
            Term::Const(c) => {
                self.constants.insert(c.clone());
                Ok(())
            }
            Term::App(f, args) => {
                insert_arity(&mut self.functions, "function", f, args.len())?;
                args.iter().try_for_each(|t| self.add_term(t))
            }
        }
    }

    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates.keys().position(|p| p == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    /// True when every predicate has arity at most one and there are no
    /// function symbols.
    pub fn is_monadic(&self) -> bool {
        self.functions.is_empty() && self.predicates.values().all(|&a| a <= 1)
    }
}

fn insert_arity(
    map: &mut BTreeMap<String, usize>,
    kind: &'static str,
    name: &str,
    arity: usize,
) -> Result<(), ArityClash> {
    match map.get(name) {
        Some(&first) if first != arity => Err(ArityClash {
            kind,
            name: name.to_string(),
            first,
            second: arity,
        }),
        Some(_) => Ok(()),
        None => {
            map.insert(name.to_string(), arity);
            Ok(())
        }
    }
}

/// Signature of a knowledge base plus any extra sentences (queries,
/// candidates).
pub fn extract_signature<'a>(
    sentences: impl IntoIterator<Item = &'a Sentence>,
    extra: impl IntoIterator<Item = &'a Sentence>,
) -> Result<Signature, ArityClash> {
    let mut sig = Signature::new();
    for s in sentences.into_iter().chain(extra) {
        sig.add_formula(s.formula())?;
    }
    Ok(sig)
}

impl fmt::Display for Signature {
    /// `predicates A/1, B/1; constants a`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let preds: Vec<String> = self.predicates.iter().map(|(p, a)| format!("{p}/{a}")).collect();
        let consts: Vec<&str> = self.constants.iter().map(String::as_str).collect();
        write!(f, "predicates {}; constants {}", join_or_none(&preds), join_or_none(&consts))?;
        if !self.functions.is_empty() {
            let funcs: Vec<String> = self.functions.iter().map(|(p, a)| format!("{p}/{a}")).collect();
            write!(f, "; functions {}", funcs.join(", "))?;
        }
        Ok(())
    }
}

fn join_or_none<S: AsRef<str>>(items: &[S]) -> String {
    if items.is_empty() {
        "(none)".to_string()
    } else {
        items.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(", ")
    }
}
