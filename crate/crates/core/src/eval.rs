//! Formulas compiled against a signature, and their evaluation over any
//! finite structure whose points may carry a multiplicity.
//!
//! A plain [`FiniteModel`](crate::model::FiniteModel) is a structure whose
//! points are domain elements of weight one. The monadic counter uses the
//! same evaluator over Boolean cells weighted by how many elements they
//! hold: without equality, elements in the same cell are indistinguishable,
//! so truth only depends on cells and their sizes.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::{Formula, Signature, Term};

pub(crate) trait Structure {
    /// Number of points. Points with weight zero are skipped.
    fn points(&self) -> usize;
    fn weight(&self, point: usize) -> u64;
    fn constant(&self, index: usize) -> usize;
    fn atom(&self, pred: usize, args: &[usize]) -> bool;
}

#[derive(Clone, Copy, Debug)]
enum Arg {
    Slot(usize),
    Const(usize),
}

#[derive(Clone, Debug)]
enum Node {
    Atom(usize, Vec<Arg>),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
    Stat(Box<StatNode>),
}

#[derive(Clone, Debug)]
struct StatNode {
    target: Node,
    reference: Node,
    /// Slots bound by the `%`: the reference's variables first, then any
    /// target-only ones.
    ref_slots: Vec<usize>,
    /// Number of reference variables: the prefix of `ref_slots` that is
    /// iterated when sizing the reference.
    ref_arity: usize,
    /// Target and reference have the same free variables.
    same_vars: bool,
    lower: Rational,
    upper: Rational,
}

/// Outcome of a proportion computation inside one structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Proportion {
    /// Weighted count of tuples satisfying target and reference. Zero when
    /// the free variables differ.
    pub both: u64,
    /// Weighted count of tuples satisfying the reference.
    pub reference: u64,
}

/// A formula with predicates, constants and variables resolved to indices.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    root: Node,
    slots: usize,
}

struct Compiler<'s> {
    sig: &'s Signature,
    scope: Vec<(String, usize)>,
    next_slot: usize,
}

impl Compiler<'_> {
    fn fresh(&mut self, name: &str) -> usize {
        let slot = self.next_slot;
        self.next_slot += 1;
        self.scope.push((name.to_string(), slot));
        slot
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.scope.iter().rev().find(|(n, _)| n == name).map(|&(_, s)| s)
    }

    fn term(&self, t: &Term) -> Result<Arg> {
        match t {
            Term::Var(v) => self
                .lookup(v)
                .map(Arg::Slot)
                .ok_or_else(|| Error::UnknownSymbol(v.clone())),
            Term::Const(c) => self
                .sig
                .constant_index(c)
                .map(Arg::Const)
                .ok_or_else(|| Error::UnknownSymbol(c.clone())),
            Term::App(f, _) => Err(Error::FunctionSymbol(f.clone())),
        }
    }

    fn node(&mut self, f: &Formula) -> Result<Node> {
        let bin = |c: &mut Self, l: &Formula, r: &Formula| -> Result<(Box<Node>, Box<Node>)> {
            Ok((Box::new(c.node(l)?), Box::new(c.node(r)?)))
        };
        Ok(match f {
            Formula::Atom(p, args) => {
                let pred = self
                    .sig
                    .predicate_index(p)
                    .ok_or_else(|| Error::UnknownSymbol(p.clone()))?;
                let args = args.iter().map(|t| self.term(t)).collect::<Result<_>>()?;
                Node::Atom(pred, args)
            }
            Formula::Not(g) => Node::Not(Box::new(self.node(g)?)),
            Formula::And(l, r) => {
                let (l, r) = bin(self, l, r)?;
                Node::And(l, r)
            }
            Formula::Or(l, r) => {
                let (l, r) = bin(self, l, r)?;
                Node::Or(l, r)
            }
            Formula::Implies(l, r) => {
                let (l, r) = bin(self, l, r)?;
                Node::Implies(l, r)
            }
            Formula::Iff(l, r) => {
                let (l, r) = bin(self, l, r)?;
                Node::Iff(l, r)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let slot = self.fresh(v);
                let body = Box::new(self.node(body)?);
                self.scope.pop();
                if matches!(f, Formula::Forall(..)) {
                    Node::Forall(slot, body)
                } else {
                    Node::Exists(slot, body)
                }
            }
            Formula::Stat {
                target,
                reference,
                lower,
                upper,
            } => {
                let target_vars = target.free_vars();
                let ref_vars = reference.free_vars();
                let depth = self.scope.len();
                let mut ref_slots = Vec::new();
                for v in ref_vars.iter().chain(target_vars.difference(&ref_vars)) {
                    ref_slots.push(self.fresh(v));
                }
                let target = self.node(target)?;
                let reference = self.node(reference)?;
                self.scope.truncate(depth);
                Node::Stat(Box::new(StatNode {
                    target,
                    reference,
                    ref_slots,
                    ref_arity: ref_vars.len(),
                    same_vars: target_vars == ref_vars,
                    lower: lower.clone(),
                    upper: upper.clone(),
                }))
            }
        })
    }
}

impl Compiled {
    /// Compiles a formula whose free variables, if any, are listed in
    /// `free`; they occupy slots `0..free.len()` in that order.
    pub fn new(formula: &Formula, sig: &Signature, free: &[String]) -> Result<Compiled> {
        let mut c = Compiler {
            sig,
            scope: Vec::new(),
            next_slot: 0,
        };
        for v in free {
            c.fresh(v);
        }
        let root = c.node(formula)?;
        Ok(Compiled {
            root,
            slots: c.next_slot,
        })
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Evaluates with the leading slots of `valuation` bound to the free
    /// variables given at compile time. `valuation` must have `slots()`
    /// entries.
    pub fn eval<S: Structure>(&self, s: &S, valuation: &mut [usize]) -> bool {
        debug_assert_eq!(valuation.len(), self.slots);
        eval(&self.root, s, valuation)
    }

    pub fn holds<S: Structure>(&self, s: &S) -> bool {
        let mut val = vec![0; self.slots];
        self.eval(s, &mut val)
    }

    /// The proportion computed by a top-level `%`, or `None` when the root
    /// is not a `%` formula.
    pub fn root_proportion<S: Structure>(&self, s: &S) -> Option<Proportion> {
        match &self.root {
            Node::Stat(stat) => {
                let mut val = vec![0; self.slots];
                Some(proportion(stat, s, &mut val))
            }
            _ => None,
        }
    }
}

fn eval<S: Structure>(node: &Node, s: &S, val: &mut [usize]) -> bool {
    match node {
        Node::Atom(pred, args) => {
            let mut buf = [0usize; 8];
            if args.len() <= buf.len() {
                for (slot, a) in buf.iter_mut().zip(args) {
                    *slot = resolve(*a, s, val);
                }
                s.atom(*pred, &buf[..args.len()])
            } else {
                let points: Vec<usize> = args.iter().map(|a| resolve(*a, s, val)).collect();
                s.atom(*pred, &points)
            }
        }
        Node::Not(g) => !eval(g, s, val),
        Node::And(l, r) => eval(l, s, val) && eval(r, s, val),
        Node::Or(l, r) => eval(l, s, val) || eval(r, s, val),
        Node::Implies(l, r) => !eval(l, s, val) || eval(r, s, val),
        Node::Iff(l, r) => eval(l, s, val) == eval(r, s, val),
        Node::Forall(slot, body) => {
            (0..s.points()).all(|p| s.weight(p) == 0 || {
                val[*slot] = p;
                eval(body, s, val)
            })
        }
        Node::Exists(slot, body) => {
            (0..s.points()).any(|p| s.weight(p) != 0 && {
                val[*slot] = p;
                eval(body, s, val)
            })
        }
        Node::Stat(stat) => {
            if !stat.same_vars {
                // The proportion is zero whether or not the reference is
                // empty, so the statement holds exactly when lower = 0.
                return stat.lower.is_zero();
            }
            let prop = proportion(stat, s, val);
            stat_truth(prop, &stat.lower, &stat.upper)
        }
    }
}

pub(crate) fn stat_truth(prop: Proportion, lower: &Rational, upper: &Rational) -> bool {
    if prop.reference == 0 {
        return lower.is_zero();
    }
    lower.cmp_counts(prop.both, prop.reference) != Ordering::Greater
        && upper.cmp_counts(prop.both, prop.reference) != Ordering::Less
}

fn resolve<S: Structure>(a: Arg, s: &S, val: &[usize]) -> usize {
    match a {
        Arg::Slot(slot) => val[slot],
        Arg::Const(c) => s.constant(c),
    }
}

fn proportion<S: Structure>(stat: &StatNode, s: &S, val: &mut [usize]) -> Proportion {
    let points = s.points();
    let slots = &stat.ref_slots;
    let ref_arity = stat.ref_arity;
    let mut both = 0u64;
    let mut reference = 0u64;
    let mut odometer = vec![0usize; ref_arity];
    loop {
        let mut weight = 1u64;
        for (k, &p) in odometer.iter().enumerate() {
            weight *= s.weight(p);
            val[slots[k]] = p;
        }
        if weight > 0 && eval(&stat.reference, s, val) {
            reference += weight;
            if stat.same_vars && eval(&stat.target, s, val) {
                both += weight;
            }
        }
        if !advance(&mut odometer, points) {
            break;
        }
    }
    Proportion { both, reference }
}

/// Advances a base-`radix` odometer; false once it wraps around.
pub(crate) fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}
