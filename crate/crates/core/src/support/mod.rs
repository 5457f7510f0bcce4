//! Degree of support: the fraction of selected premise models in which a
//! query holds, with the specificity, strength and conflict rules for
//! competing reference classes and maximal consistent subsets for
//! inconsistent knowledge bases.

mod engine;
mod structures;

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::census::CensusOptions;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub use engine::{maximal_consistent_subsets, satisfiable, support, support_by_enumeration, support_many};
pub use structures::{detect_inference_structures, resolve, InclusionFact, InferenceStructure};

/// A closed sub-interval of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: Rational,
    upper: Rational,
}

impl Interval {
    pub fn new(lower: Rational, upper: Rational) -> Result<Interval> {
        if !lower.is_unit() || !upper.is_unit() || lower > upper {
            return Err(Error::InvalidInterval(lower.to_string(), upper.to_string()));
        }
        Ok(Interval { lower, upper })
    }

    pub fn point(value: Rational) -> Result<Interval> {
        Interval::new(value.clone(), value)
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.lower <= *value && *value <= self.upper
    }

    pub fn is_within(&self, other: &Interval) -> bool {
        other.lower <= self.lower && self.upper <= other.upper
    }

    /// Each interval sits strictly to one side of the other: `p < p' & q < q'`
    /// or `p > p' & q > q'`. Two intervals are either shifted or nested.
    pub fn is_shifted_from(&self, other: &Interval) -> bool {
        (self.lower < other.lower && self.upper < other.upper)
            || (self.lower > other.lower && self.upper > other.upper)
    }

    /// Smallest interval covering both.
    pub fn cover(&self, other: &Interval) -> Interval {
        Interval {
            lower: self.lower.clone().min(other.lower.clone()),
            upper: self.upper.clone().max(other.upper.clone()),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.lower)?;
        seq.serialize_element(&self.upper)?;
        seq.end()
    }
}

/// Inclusive range of domain sizes considered. "Inconsistent" always means
/// "no model at any size in this range".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeRange {
    min: usize,
    max: usize,
}

impl SizeRange {
    pub fn new(min: usize, max: usize) -> Result<SizeRange> {
        if min == 0 || min > max {
            return Err(Error::InvalidSizeRange(min, max));
        }
        Ok(SizeRange { min, max })
    }

    pub fn min(&self) -> usize {
        self.min
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.min..=self.max
    }
}

impl Default for SizeRange {
    fn default() -> Self {
        SizeRange { min: 2, max: 6 }
    }
}

impl Serialize for SizeRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.min, self.max].serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Defined,
    /// Maximal consistent subsets disagree: no degree of support at all.
    Conflicted,
    /// No premise model at any size in range.
    Vacuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    Enumeration,
    Resolver,
    Mcs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Resolver when the query is a ground atom matched by inference
    /// structures (and not itself a premise), enumeration otherwise.
    #[default]
    Auto,
    Enumerate,
    Resolve,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Mode::Auto),
            "enumerate" => Ok(Mode::Enumerate),
            "resolve" => Ok(Mode::Resolve),
            other => Err(format!("unknown mode `{other}` (auto, enumerate, resolve)")),
        }
    }
}

/// Support fraction at one domain size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SizeFraction {
    Fraction(Rational),
    NoPremiseModels,
}

impl Serialize for SizeFraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SizeFraction::Fraction(r) => r.serialize(s),
            SizeFraction::NoPremiseModels => s.serialize_str("no premise models"),
        }
    }
}

/// Verdict for one maximal consistent subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McsEntry {
    pub id: usize,
    /// Sentence ids (0-based positions in the knowledge base).
    pub members: Vec<usize>,
    pub status: Status,
    pub interval: Option<Interval>,
    pub path: Path,
    pub per_size: BTreeMap<usize, SizeFraction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportVerdict {
    pub status: Status,
    /// Present exactly when the status is `Defined`.
    pub interval: Option<Interval>,
    /// For `Conflicted`: the cover of the disagreeing subset intervals.
    /// Diagnostic only; it licenses nothing.
    pub envelope: Option<Interval>,
    pub per_size: BTreeMap<usize, SizeFraction>,
    pub mcs_breakdown: Option<Vec<McsEntry>>,
    pub path: Path,
    pub size_range: SizeRange,
}

impl SupportVerdict {
    pub fn is_defined(&self) -> bool {
        self.status == Status::Defined
    }

    pub fn lower(&self) -> Option<&Rational> {
        self.interval.as_ref().map(Interval::lower)
    }
}

/// Everything a support computation needs besides the knowledge base and
/// the query.
#[derive(Clone, Copy, Debug, Default)]
pub struct EngineConfig {
    pub sizes: SizeRange,
    pub mode: Mode,
    pub census: CensusOptions,
}

impl EngineConfig {
    pub fn with_sizes(mut self, sizes: SizeRange) -> Self {
        self.sizes = sizes;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_census(mut self, census: CensusOptions) -> Self {
        self.census = census;
        self
    }
}
