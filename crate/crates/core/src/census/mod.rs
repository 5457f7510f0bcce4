//! Exact model counting.
//!
//! Both counters produce a [`Profile`]: for one domain size, the number of
//! models realizing each pattern of truth values over a list of *probes*
//! (conjunctions of sentences). Every count the engine reports (premise
//! models, premise-and-query models, satisfiability of any subset of the
//! knowledge base) is a sum over a profile.
//!
//! The naive counter walks every interpretation; the monadic counter sums
//! multinomial coefficients over Boolean cell-count vectors and is exact for
//! signatures whose predicates are all unary or nullary.

mod monadic;
mod naive;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{Compiled, Structure};
use crate::syntax::{KnowledgeBase, Sentence, Signature};

pub use monadic::count_monadic;
pub use naive::{count_conditional, enumerate_models, total_models, ModelStream};

/// Default cap on the work units of one census.
pub const DEFAULT_GUARD: u128 = 1 << 24;

/// Environment variable overriding [`DEFAULT_GUARD`] in the CLI.
pub const GUARD_ENV: &str = "STATSUPPORT_GUARD";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Monadic counter when the signature allows it, naive otherwise.
    #[default]
    Auto,
    Naive,
    Monadic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    /// Upper bound on the work of a single census: models visited by the
    /// naive counter, cell-vector and constant placements visited by the
    /// monadic one. Exceeding it is an error, never an approximation.
    pub guard: u128,
    /// Worker cap; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub strategy: Strategy,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            guard: DEFAULT_GUARD,
            threads: None,
            strategy: Strategy::Auto,
        }
    }
}

impl CensusOptions {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_guard(mut self, guard: u128) -> Self {
        self.guard = guard;
        self
    }

    /// Runs `f` on a pool with the configured worker cap.
    pub(crate) fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
}

/// Model counts for one knowledge base and query at one domain size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusResult {
    pub domain_size: usize,
    #[serde(serialize_with = "crate::census::as_decimal")]
    pub total_models: BigUint,
    #[serde(serialize_with = "crate::census::as_decimal")]
    pub satisfying_premises: BigUint,
    #[serde(serialize_with = "crate::census::as_decimal")]
    pub satisfying_premises_and_query: BigUint,
}

pub(crate) fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Truth-pattern histogram over probes. Bit `i` of a mask is set when probe
/// `i` holds. Only patterns realized by at least one model are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub domain_size: usize,
    pub total: BigUint,
    pub masks: BTreeMap<u128, BigUint>,
}

impl Profile {
    /// Number of models in which every probe of `required` holds.
    pub fn count(&self, required: u128) -> BigUint {
        self.masks
            .iter()
            .filter(|(&m, _)| m & required == required)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn realizes(&self, required: u128) -> bool {
        self.masks.keys().any(|&m| m & required == required)
    }

    /// Adds another partial count of the same census.
    pub fn merge(&mut self, other: Profile) {
        debug_assert_eq!(self.domain_size, other.domain_size);
        for (m, c) in other.masks {
            *self.masks.entry(m).or_insert_with(BigUint::zero) += c;
        }
    }
}

/// Conjunctions of sentences compiled against a common signature.
pub(crate) struct Probes {
    conjunctions: Vec<Vec<Compiled>>,
    slots: usize,
}

impl Probes {
    pub fn new(sig: &Signature, probes: &[Vec<&Sentence>]) -> Result<Probes> {
        if probes.len() > 128 {
            return Err(Error::TooManySentences(probes.len()));
        }
        let conjunctions = probes
            .iter()
            .map(|conj| {
                conj.iter()
                    .map(|s| Compiled::new(s.formula(), sig, &[]))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let slots = conjunctions.iter().flatten().map(Compiled::slots).max().unwrap_or(0);
        Ok(Probes { conjunctions, slots })
    }

    pub fn scratch(&self) -> Vec<usize> {
        vec![0; self.slots]
    }

    pub fn mask<S: Structure>(&self, s: &S, scratch: &mut [usize]) -> u128 {
        let mut mask = 0u128;
        for (i, conj) in self.conjunctions.iter().enumerate() {
            if conj.iter().all(|c| c.eval(s, &mut scratch[..c.slots()])) {
                mask |= 1 << i;
            }
        }
        mask
    }
}

/// Profile of `probes` over all models of `sig` at size `n`.
pub fn profile(sig: &Signature, probes: &[Vec<&Sentence>], n: usize, opts: &CensusOptions) -> Result<Profile> {
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    if let Some(f) = sig.functions.keys().next() {
        return Err(Error::FunctionSymbol(f.clone()));
    }
    let compiled = Probes::new(sig, probes)?;
    let monadic = match opts.strategy {
        Strategy::Auto => sig.is_monadic(),
        Strategy::Naive => false,
        Strategy::Monadic => {
            if !sig.is_monadic() {
                return Err(not_monadic(sig));
            }
            true
        }
    };
    if monadic {
        monadic::profile(sig, &compiled, n, opts)
    } else {
        naive::profile(sig, &compiled, n, opts)
    }
}

fn not_monadic(sig: &Signature) -> Error {
    let offending: Vec<String> = sig
        .predicates
        .iter()
        .filter(|(_, &a)| a > 1)
        .map(|(p, a)| format!("{p}/{a}"))
        .chain(sig.functions.keys().map(|f| format!("function {f}")))
        .collect();
    Error::NotMonadic(offending.join(", "))
}

/// Premise and premise-and-query counts with the configured strategy.
pub fn census(kb: &KnowledgeBase, query: Option<&Sentence>, n: usize, opts: &CensusOptions) -> Result<CensusResult> {
    let extra: Vec<Sentence> = query.into_iter().cloned().collect();
    let sig = kb.signature(&extra)?;
    let premises: Vec<&Sentence> = kb.sentences().iter().collect();
    let query_probe: Vec<&Sentence> = query.into_iter().collect();
    let p = profile(&sig, &[premises, query_probe], n, opts)?;
    Ok(CensusResult {
        domain_size: n,
        total_models: p.total.clone(),
        satisfying_premises: p.count(0b01),
        satisfying_premises_and_query: p.count(0b11),
    })
}
