use std::collections::BTreeSet;
use std::fmt;

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    /// Representable and printable, but no model enumerator accepts it.
    App(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// `%(target, reference, lower, upper)`: the proportion of tuples
    /// satisfying `reference` that also satisfy `target` lies in
    /// `[lower, upper]`. Binds every variable occurring in either argument.
    Stat {
        target: Box<Formula>,
        reference: Box<Formula>,
        lower: Rational,
        upper: Rational,
    },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn substitute(&self, var: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => replacement.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.substitute(var, replacement)).collect(),
            ),
        }
    }
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.to_string(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.to_string(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.to_string(), Box::new(body))
    }

    pub fn stat(target: Formula, reference: Formula, lower: Rational, upper: Rational) -> Formula {
        Formula::Stat {
            target: Box::new(target),
            reference: Box::new(reference),
            lower,
            upper,
        }
    }

    /// Free object variables. Quantifiers bind their variable; `%` binds
    /// everything in its arguments.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Formula::Not(f) => f.collect_free(out),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.collect_free(out);
                r.collect_free(out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
            Formula::Stat { .. } => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Stat { .. } => false,
            Formula::Not(f) => f.has_quantifier(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => l.has_quantifier() || r.has_quantifier(),
            Formula::Forall(..) | Formula::Exists(..) => true,
        }
    }

    pub fn has_stat(&self) -> bool {
        match self {
            Formula::Atom(..) => false,
            Formula::Stat { .. } => true,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.has_stat(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => l.has_stat() || r.has_stat(),
        }
    }

    /// Replaces free occurrences of `var` with `replacement`. Binders of the
    /// same name shadow; `%` shadows everything.
    pub fn substitute(&self, var: &str, replacement: &Term) -> Formula {
        let sub = |f: &Formula| Box::new(f.substitute(var, replacement));
        match self {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter().map(|a| a.substitute(var, replacement)).collect(),
            ),
            Formula::Not(f) => Formula::Not(sub(f)),
            Formula::And(l, r) => Formula::And(sub(l), sub(r)),
            Formula::Or(l, r) => Formula::Or(sub(l), sub(r)),
            Formula::Implies(l, r) => Formula::Implies(sub(l), sub(r)),
            Formula::Iff(l, r) => Formula::Iff(sub(l), sub(r)),
            Formula::Forall(v, _) | Formula::Exists(v, _) if v == var => self.clone(),
            Formula::Forall(v, body) => Formula::Forall(v.clone(), sub(body)),
            Formula::Exists(v, body) => Formula::Exists(v.clone(), sub(body)),
            Formula::Stat { .. } => self.clone(),
        }
    }

    /// Visits every atom, including those inside `%`.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a str, &'a [Term])) {
        match self {
            Formula::Atom(p, args) => f(p, args),
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.for_each_atom(f),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.for_each_atom(f);
                r.for_each_atom(f);
            }
            Formula::Stat {
                target, reference, ..
            } => {
                target.for_each_atom(f);
                reference.for_each_atom(f);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 5,
        }
    }
}

/// A closed formula: no free object variables once `%` is treated as a
/// binder.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sentence(Formula);

impl Sentence {
    /// Returns the formula back if it has free variables.
    #[allow(clippy::result_large_err)]
    pub fn new(formula: Formula) -> Result<Sentence, Formula> {
        if formula.is_closed() {
            Ok(Sentence(formula))
        } else {
            Err(formula)
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

struct Paren<'a>(&'a Formula, bool);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        // `&`, `|` and `<->` associate left, `->` associates right.
        let binary = |f: &mut fmt::Formatter<'_>, l: &Formula, op: &str, r: &Formula, right: bool| {
            let (lp, rp) = if right {
                (l.precedence() <= prec, r.precedence() < prec)
            } else {
                (l.precedence() < prec, r.precedence() <= prec)
            };
            write!(f, "{} {op} {}", Paren(l, lp), Paren(r, rp))
        };
        match self {
            Formula::Atom(p, args) if args.is_empty() => f.write_str(p),
            Formula::Atom(p, args) => {
                write!(f, "{p}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Formula::Not(g) => write!(f, "~{}", Paren(g, g.precedence() < 5)),
            Formula::And(l, r) => binary(f, l, "&", r, false),
            Formula::Or(l, r) => binary(f, l, "|", r, false),
            Formula::Implies(l, r) => binary(f, l, "->", r, true),
            Formula::Iff(l, r) => binary(f, l, "<->", r, false),
            Formula::Forall(v, body) => write!(f, "forall {v} {}", Paren(body, body.precedence() < 5)),
            Formula::Exists(v, body) => write!(f, "exists {v} {}", Paren(body, body.precedence() < 5)),
            Formula::Stat {
                target,
                reference,
                lower,
                upper,
            } => write!(f, "%({target}, {reference}, {lower}, {upper})"),
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
