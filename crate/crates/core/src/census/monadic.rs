//! Closed-form counting for unary signatures.
//!
//! With `k` unary predicates every element falls into one of `2^k` Boolean
//! cells. A model is fixed by which cell each element lands in, where each
//! constant points, and the values of any nullary predicates. For a vector
//! of cell sizes `c`, there are `n! / prod(c_i!)` ways to place labeled
//! elements, and a constant placed in cell `j` has `c_j` possible
//! denotations. Every sentence's truth depends only on the cell sizes and
//! the cells the constants land in, so each (vector, constant cells) pair is
//! evaluated once and weighted by its number of models.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{CensusOptions, CensusResult, Probes, Profile};
use crate::error::{Error, Result};
use crate::eval::Structure;
use crate::syntax::{KnowledgeBase, Sentence, Signature};

struct Cells<'a> {
    counts: &'a [u64],
    /// For each predicate: its bit in a cell index (unary) or in `nullary`.
    bit: &'a [u32],
    nullary: u64,
    constants: &'a [usize],
}

impl Structure for Cells<'_> {
    fn points(&self) -> usize {
        self.counts.len()
    }

    fn weight(&self, point: usize) -> u64 {
        self.counts[point]
    }

    fn constant(&self, index: usize) -> usize {
        self.constants[index]
    }

    fn atom(&self, pred: usize, args: &[usize]) -> bool {
        match args {
            [cell] => (*cell >> self.bit[pred]) & 1 == 1,
            _ => (self.nullary >> self.bit[pred]) & 1 == 1,
        }
    }
}

/// Weak compositions of `n` into `parts` parts, lexicographically
/// descending from `[n, 0, .., 0]`.
struct Compositions {
    current: Option<Vec<u64>>,
}

impl Compositions {
    fn new(n: u64, parts: usize) -> Self {
        let mut first = vec![0; parts];
        first[0] = n;
        Compositions { current: Some(first) }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut c = out.clone();
        if let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| c[i] > 0) {
            c[i] -= 1;
            let tail = c[k - 1];
            c[k - 1] = 0;
            c[i + 1] = tail + 1;
            self.current = Some(c);
        }
        Some(out)
    }
}

fn factorials(n: usize) -> Vec<BigUint> {
    let mut f = vec![BigUint::from(1u8)];
    for i in 1..=n {
        let next = &f[i - 1] * BigUint::from(i);
        f.push(next);
    }
    f
}

pub(super) fn profile(sig: &Signature, probes: &Probes, n: usize, opts: &CensusOptions) -> Result<Profile> {
    let unary = sig.predicates.values().filter(|&&a| a == 1).count();
    let nullary = sig.predicates.len() - unary;
    if unary >= 32 || nullary >= 64 {
        return Err(Error::GuardExceeded {
            size: n,
            required: format!("2^{} cells", unary),
            limit: opts.guard,
        });
    }
    let cells = 1usize << unary;
    let consts = sig.constants.len();
    let work = (BigUint::from(1u8) << nullary)
        * binomial(BigUint::from(n + cells - 1), BigUint::from(cells - 1))
        * BigUint::from(n.min(cells)).pow(consts as u32);
    if work.to_u128().is_none_or(|w| w > opts.guard) {
        return Err(Error::GuardExceeded {
            size: n,
            required: work.to_string(),
            limit: opts.guard,
        });
    }

    let (mut next_unary, mut next_nullary) = (0u32, 0u32);
    let bit: Vec<u32> = sig
        .predicates
        .values()
        .map(|&a| {
            let counter = if a == 1 { &mut next_unary } else { &mut next_nullary };
            *counter += 1;
            *counter - 1
        })
        .collect();
    let fact = factorials(n);

    let masks = opts.install(|| {
        Compositions::new(n as u64, cells)
            .par_bridge()
            .map(|counts| {
                let multinomial = counts
                    .iter()
                    .fold(fact[n].clone(), |acc, &c| acc / &fact[c as usize]);
                let occupied: Vec<usize> = (0..cells).filter(|&j| counts[j] > 0).collect();
                let mut local: HashMap<u128, u128> = HashMap::new();
                let mut scratch = probes.scratch();
                let mut choice = vec![0usize; consts];
                let mut constant_cells = vec![0usize; consts];
                loop {
                    let mut ways = 1u128;
                    for (slot, &c) in constant_cells.iter_mut().zip(&choice) {
                        *slot = occupied[c];
                        ways *= counts[*slot] as u128;
                    }
                    for nullary_bits in 0..(1u64 << nullary) {
                        let s = Cells {
                            counts: &counts,
                            bit: &bit,
                            nullary: nullary_bits,
                            constants: &constant_cells,
                        };
                        *local.entry(probes.mask(&s, &mut scratch)).or_default() += ways;
                    }
                    if !crate::eval::advance(&mut choice, occupied.len()) {
                        break;
                    }
                }
                local
                    .into_iter()
                    .map(|(m, w)| (m, &multinomial * BigUint::from(w)))
                    .collect::<Vec<_>>()
            })
            .fold(BTreeMap::new, |mut acc: BTreeMap<u128, BigUint>, part| {
                for (m, c) in part {
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
        total: super::total_models(sig, n),
        masks,
    })
}

/// Same counts as [`count_conditional`](super::count_conditional) computed
/// from cell-count vectors. Without a query, the query count equals the
/// premise count.
pub fn count_monadic(
    kb: &KnowledgeBase,
    query: Option<&Sentence>,
    n: usize,
    opts: &CensusOptions,
) -> Result<CensusResult> {
    let opts = opts.with_strategy(super::Strategy::Monadic);
    super::census(kb, query, n, &opts)
}
