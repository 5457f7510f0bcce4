//! Finite models `<D, interpretation>` over a signature and exact truth
//! evaluation, including the proportion semantics of `%` statements.
//!
//! Domain elements are the integers `0..n`. Models that differ only by a
//! permutation of the domain are distinct models.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{Compiled, Proportion, Structure};
use crate::rational::Rational;
use crate::syntax::{Formula, Sentence, Signature};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    signature: Arc<Signature>,
    domain_size: usize,
    /// Indexed like `signature.constants`.
    constants: Vec<usize>,
    /// Indexed like `signature.predicates`; each relation is a row-major
    /// bit table over `D^arity`.
    extensions: Vec<Vec<bool>>,
}

impl FiniteModel {
    /// The model with every constant at element 0 and every extension
    /// empty.
    pub fn new(signature: Arc<Signature>, domain_size: usize) -> Result<FiniteModel> {
        if domain_size == 0 {
            return Err(Error::EmptyDomain);
        }
        if let Some(f) = signature.functions.keys().next() {
            return Err(Error::FunctionSymbol(f.clone()));
        }
        let extensions = signature
            .predicates
            .values()
            .map(|&arity| vec![false; domain_size.pow(arity as u32)])
            .collect();
        Ok(FiniteModel {
            constants: vec![0; signature.constants.len()],
            extensions,
            signature,
            domain_size,
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn set_constant(&mut self, name: &str, element: usize) -> Result<&mut Self> {
        assert!(element < self.domain_size, "element {element} outside the domain");
        let i = self
            .signature
            .constant_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        self.constants[i] = element;
        Ok(self)
    }

    pub fn insert(&mut self, pred: &str, tuple: &[usize]) -> Result<&mut Self> {
        let i = self
            .signature
            .predicate_index(pred)
            .ok_or_else(|| Error::UnknownSymbol(pred.to_string()))?;
        let row = self.row(i, tuple);
        self.extensions[i][row] = true;
        Ok(self)
    }

    /// Replaces an extension with the given tuples.
    pub fn with_extension<'a>(
        mut self,
        pred: &str,
        tuples: impl IntoIterator<Item = &'a [usize]>,
    ) -> Result<Self> {
        let i = self
            .signature
            .predicate_index(pred)
            .ok_or_else(|| Error::UnknownSymbol(pred.to_string()))?;
        self.extensions[i].iter_mut().for_each(|b| *b = false);
        for t in tuples {
            let row = self.row(i, t);
            self.extensions[i][row] = true;
        }
        Ok(self)
    }

    fn row(&self, pred: usize, tuple: &[usize]) -> usize {
        let arity = self.extensions_arity(pred);
        assert_eq!(tuple.len(), arity, "tuple length does not match arity");
        tuple.iter().fold(0, |acc, &e| {
            assert!(e < self.domain_size, "element {e} outside the domain");
            acc * self.domain_size + e
        })
    }

    fn extensions_arity(&self, pred: usize) -> usize {
        *self.signature.predicates.values().nth(pred).expect("predicate index")
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.signature.constant_index(name).map(|i| self.constants[i])
    }

    /// The extension of a predicate as sorted tuples.
    pub fn extension(&self, pred: &str) -> Option<BTreeSet<Vec<usize>>> {
        let i = self.signature.predicate_index(pred)?;
        let arity = self.extensions_arity(i);
        Some(
            self.extensions[i]
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(row, _)| unrank(row, arity, self.domain_size))
                .collect(),
        )
    }

    pub(crate) fn constants_mut(&mut self) -> &mut [usize] {
        &mut self.constants
    }

    pub(crate) fn extensions_mut(&mut self) -> &mut [Vec<bool>] {
        &mut self.extensions
    }

    /// JSON debug dump with sorted keys and sorted tuple lists.
    pub fn dump(&self) -> ModelDump {
        ModelDump {
            domain_size: self.domain_size,
            constant_map: self
                .signature
                .constants
                .iter()
                .zip(&self.constants)
                .map(|(c, &e)| (c.clone(), e))
                .collect(),
            extensions: self
                .signature
                .predicates
                .keys()
                .map(|p| (p.clone(), self.extension(p).unwrap().into_iter().collect()))
                .collect(),
        }
    }
}

fn unrank(mut row: usize, arity: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = row % n;
        row /= n;
    }
    t
}

impl Structure for FiniteModel {
    fn points(&self) -> usize {
        self.domain_size
    }

    fn weight(&self, _point: usize) -> u64 {
        1
    }

    fn constant(&self, index: usize) -> usize {
        self.constants[index]
    }

    fn atom(&self, pred: usize, args: &[usize]) -> bool {
        let row = args.iter().fold(0, |acc, &e| acc * self.domain_size + e);
        self.extensions[pred][row]
    }
}

/// Byte-stable JSON form of a model.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ModelDump {
    pub domain_size: usize,
    pub constant_map: BTreeMap<String, usize>,
    pub extensions: BTreeMap<String, Vec<Vec<usize>>>,
}

/// Variable assignment for open formulas.
pub type Valuation = BTreeMap<String, usize>;

/// Tuples over `D` satisfying an open formula, one component per variable
/// in `variable_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatSet {
    pub variable_order: Vec<String>,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// Result of a proportion: an exact ratio, or an empty reference class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatRatio {
    Ratio(Rational),
    EmptyReference,
}

fn check_order(formula: &Formula, order: &[String]) -> Result<()> {
    let expected: Vec<String> = formula.free_vars().into_iter().collect();
    let mut given = order.to_vec();
    given.sort();
    let dup = given.windows(2).any(|w| w[0] == w[1]);
    if dup || given != expected {
        return Err(Error::VariableOrder {
            given: order.to_vec(),
            expected,
        });
    }
    Ok(())
}

/// The set of tuples `t` such that binding `variable_order` to `t` makes
/// `formula` true in `model`.
pub fn satisfaction_set(model: &FiniteModel, formula: &Formula, variable_order: &[String]) -> Result<SatSet> {
    check_order(formula, variable_order)?;
    let compiled = Compiled::new(formula, &model.signature, variable_order)?;
    let k = variable_order.len();
    let mut val = vec![0; compiled.slots()];
    let mut tuples = BTreeSet::new();
    let mut odometer = vec![0; k];
    loop {
        val[..k].copy_from_slice(&odometer);
        if compiled.eval(model, &mut val) {
            // Odometer digits run least significant first; tuples are read
            // in variable order.
            tuples.insert(odometer.clone());
        }
        if !crate::eval::advance(&mut odometer, model.domain_size) {
            break;
        }
    }
    Ok(SatSet {
        variable_order: variable_order.to_vec(),
        tuples,
    })
}

/// `|S(target & reference)| / |S(reference)|`, counted over tuples of the
/// reference's variables. When the two formulas have different free
/// variables, no tuple of the joint arity lies among the reference tuples
/// and the ratio is zero.
pub fn stat_ratio(model: &FiniteModel, target: &Formula, reference: &Formula) -> Result<StatRatio> {
    let stat = Formula::stat(target.clone(), reference.clone(), Rational::zero(), Rational::one());
    let compiled = Compiled::new(&stat, &model.signature, &[])?;
    let Proportion { both, reference } = compiled.root_proportion(model).expect("root is a `%`");
    Ok(if reference == 0 {
        StatRatio::EmptyReference
    } else {
        StatRatio::Ratio(Rational::new(both as i64, reference as i64))
    })
}

/// Truth of a closed sentence in a model.
pub fn holds(model: &FiniteModel, sentence: &Sentence) -> Result<bool> {
    Ok(Compiled::new(sentence.formula(), &model.signature, &[])?.holds(model))
}

/// Truth of a formula under a valuation of its free variables.
pub fn holds_under(model: &FiniteModel, formula: &Formula, valuation: &Valuation) -> Result<bool> {
    let order: Vec<String> = formula.free_vars().into_iter().collect();
    let compiled = Compiled::new(formula, &model.signature, &order)?;
    let mut val = vec![0; compiled.slots()];
    for (slot, v) in order.iter().enumerate() {
        val[slot] = *valuation
            .get(v)
            .ok_or_else(|| Error::UnknownSymbol(v.clone()))?;
    }
    Ok(compiled.eval(model, &mut val))
}
