use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{CensusOptions, CensusResult, Probes, Profile};
use crate::error::{Error, Result};
use crate::model::FiniteModel;
use crate::syntax::{KnowledgeBase, Sentence, Signature};

/// `2^(sum of n^arity) * n^constants`.
pub fn total_models(sig: &Signature, n: usize) -> BigUint {
    let bits: usize = sig.predicates.values().map(|&a| n.pow(a as u32)).sum();
    let consts = BigUint::from(n).pow(sig.constants.len() as u32);
    (BigUint::from(1u8) << bits) * consts
}

fn checked_total(sig: &Signature, n: usize, guard: u128) -> Result<u64> {
    if n == 0 {
        return Err(Error::EmptyDomain);
    }
    if let Some(f) = sig.functions.keys().next() {
        return Err(Error::FunctionSymbol(f.clone()));
    }
    let total = total_models(sig, n);
    match total.to_u128() {
        Some(t) if t <= guard && t <= u64::MAX as u128 => Ok(t as u64),
        _ => Err(Error::GuardExceeded {
            size: n,
            required: total.to_string(),
            limit: guard,
        }),
    }
}

/// Walks models in index order. Constants are the fastest-varying digits
/// (base `n`, in signature order), followed by the extension bits of each
/// predicate in signature order, row-major within a predicate.
struct Cursor {
    model: FiniteModel,
    n: usize,
}

impl Cursor {
    fn at(sig: Arc<Signature>, n: usize, mut index: u64) -> Cursor {
        let mut model = FiniteModel::new(sig, n).expect("checked signature");
        for c in model.constants_mut() {
            *c = (index % n as u64) as usize;
            index /= n as u64;
        }
        for ext in model.extensions_mut() {
            for bit in ext.iter_mut() {
                *bit = index & 1 == 1;
                index >>= 1;
            }
        }
        Cursor { model, n }
    }

    fn advance(&mut self) {
        if crate::eval::advance(self.model.constants_mut(), self.n) {
            return;
        }
        for ext in self.model.extensions_mut() {
            for bit in ext.iter_mut() {
                *bit = !*bit;
                if *bit {
                    return;
                }
            }
        }
    }
}

/// Every model of a signature at domain size `n`, exactly once, in a fixed
/// order. Supports splitting by index range.
pub struct ModelStream {
    cursor: Option<Cursor>,
    next: u64,
    end: u64,
}

impl ModelStream {
    pub fn len(&self) -> u64 {
        self.end - self.next
    }

    pub fn is_empty(&self) -> bool {
        self.next == self.end
    }

    /// The sub-stream of models with indices in `start..end`.
    pub fn range(sig: &Signature, n: usize, start: u64, end: u64, guard: u128) -> Result<ModelStream> {
        let total = checked_total(sig, n, guard)?;
        let end = end.min(total);
        let start = start.min(end);
        Ok(ModelStream {
            cursor: (start < end).then(|| Cursor::at(Arc::new(sig.clone()), n, start)),
            next: start,
            end,
        })
    }
}

impl Iterator for ModelStream {
    type Item = FiniteModel;

    fn next(&mut self) -> Option<FiniteModel> {
        if self.next >= self.end {
            return None;
        }
        let cursor = self.cursor.as_mut()?;
        let out = cursor.model.clone();
        self.next += 1;
        if self.next < self.end {
            cursor.advance();
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let len = self.len() as usize;
        (len, Some(len))
    }
}

/// All models of `sig` at size `n`.
pub fn enumerate_models(sig: &Signature, n: usize, guard: u128) -> Result<ModelStream> {
    ModelStream::range(sig, n, 0, u64::MAX, guard)
}

const CHUNK: u64 = 1 << 12;

pub(super) fn profile(sig: &Signature, probes: &Probes, n: usize, opts: &CensusOptions) -> Result<Profile> {
    let total = checked_total(sig, n, opts.guard)?;
    let sig = Arc::new(sig.clone());
    let chunks = total.div_ceil(CHUNK);
    let masks = opts.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let start = chunk * CHUNK;
                let end = (start + CHUNK).min(total);
                let mut cursor = Cursor::at(sig.clone(), n, start);
                let mut scratch = probes.scratch();
                let mut local: HashMap<u128, u64> = HashMap::new();
                for i in start..end {
                    *local.entry(probes.mask(&cursor.model, &mut scratch)).or_default() += 1;
                    if i + 1 < end {
                        cursor.advance();
                    }
                }
                local
            })
            .fold(BTreeMap::new, |mut acc: BTreeMap<u128, BigUint>, local| {
                for (m, c) in local {
                    *acc.entry(m).or_insert_with(BigUint::zero) += c;
                }
                acc
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (m, c) in b {
                    *a.entry(m).or_insert_with(BigUint::zero) += c;
                }
                a
            })
    });
    Ok(Profile {
        domain_size: n,
        total: total.into(),
        masks,
    })
}

/// Counts premise models and premise-and-query models by visiting every
/// interpretation of the signature of `kb` plus `query`.
pub fn count_conditional(kb: &KnowledgeBase, query: &Sentence, n: usize, opts: &CensusOptions) -> Result<CensusResult> {
    let opts = opts.with_strategy(super::Strategy::Naive);
    super::census(kb, Some(query), n, &opts)
}
