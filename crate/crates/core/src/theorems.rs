//! Bundled fixtures exercising each inference rule end to end.
//!
//! Every fixture fixes its own size range so the report depends only on
//! the census options' guard, never on the worker count.

use serde::Serialize;

use crate::census::CensusOptions;
use crate::error::Result;
use crate::rational::Rational;
use crate::support::{self, EngineConfig, Interval, Mode, Path, SizeFraction, SizeRange, Status, SupportVerdict};
use crate::syntax::{parse_kb, parse_sentence, KnowledgeBase, Sentence};

pub const EQUIVALENCE: &str = include_str!("../fixtures/equivalence.kb");
pub const DIRECT_INFERENCE: &str = include_str!("../fixtures/direct_inference.kb");
pub const SPECIFICITY: &str = include_str!("../fixtures/specificity.kb");
pub const STRENGTH: &str = include_str!("../fixtures/strength.kb");
pub const CONFLICT: &str = include_str!("../fixtures/conflict.kb");
pub const LOTTERY: &str = include_str!("../fixtures/lottery.kb");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremResult {
    pub name: &'static str,
    pub claim: &'static str,
    pub fixture: &'static str,
    pub query: String,
    pub expected: String,
    pub computed: String,
    pub outcome: Outcome,
    pub verdict: Option<SupportVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub passed: usize,
    pub total: usize,
    pub results: Vec<TheoremResult>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

impl std::fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in &self.results {
            let tag = if r.outcome == Outcome::Pass { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{tag}  {:<18} {:<8} computed {} expected {}",
                r.name, r.query, r.computed, r.expected
            )?;
        }
        write!(f, "{}/{} passed", self.passed, self.total)
    }
}

fn iv(lo: (i64, i64), hi: (i64, i64)) -> Interval {
    Interval::new(Rational::new(lo.0, lo.1), Rational::new(hi.0, hi.1)).expect("valid interval")
}

fn show(v: &SupportVerdict) -> String {
    match &v.interval {
        Some(i) => format!("{:?} {i}", v.status).to_lowercase(),
        None => format!("{:?}", v.status).to_lowercase(),
    }
}

fn fixture(text: &str) -> KnowledgeBase {
    parse_kb(text).expect("bundled fixture parses")
}

fn query(text: &str) -> Sentence {
    parse_sentence(text).expect("bundled query parses")
}

fn engine(census: &CensusOptions, lo: usize, hi: usize, mode: Mode) -> EngineConfig {
    EngineConfig {
        sizes: SizeRange::new(lo, hi).expect("fixture range"),
        mode,
        census: *census,
    }
}

/// Every feasible per-size fraction of an enumeration verdict lies in `bound`.
fn contained(v: &SupportVerdict, bound: &Interval) -> bool {
    v.status == Status::Defined
        && v.per_size.values().all(|f| match f {
            SizeFraction::Fraction(x) => bound.contains(x),
            SizeFraction::NoPremiseModels => true,
        })
}

struct Check {
    query: String,
    expected: String,
    computed: String,
    pass: bool,
    verdict: SupportVerdict,
}

/// Enumeration stays inside `expected` and the resolver returns exactly it.
fn rule(census: &CensusOptions, kb: &str, q: &str, sizes: (usize, usize), expected: Interval) -> Result<Check> {
    let (kb, q) = (fixture(kb), query(q));
    let by_count = support::support(&kb, &q, &engine(census, sizes.0, sizes.1, Mode::Enumerate))?;
    let resolved = support::support(&kb, &q, &engine(census, sizes.0, sizes.1, Mode::Auto))?;
    let pass = contained(&by_count, &expected)
        && resolved.path == Path::Resolver
        && resolved.interval.as_ref() == Some(&expected);
    Ok(Check {
        query: q.to_string(),
        computed: format!("{} (counted {})", show(&resolved), show(&by_count)),
        expected: format!("defined {expected}"),
        pass,
        verdict: resolved,
    })
}

fn equivalence(census: &CensusOptions) -> Result<Check> {
    let kb = fixture(EQUIVALENCE);
    let cfg = engine(census, 2, 5, Mode::Enumerate);
    let phi = support::support_by_enumeration(&kb, &query("A(a)"), &cfg)?;
    let psi = support::support_by_enumeration(&kb, &query("C(a)"), &cfg)?;
    Ok(Check {
        query: "A(a)".into(),
        expected: format!("same as C(a): {}", show(&psi)),
        computed: show(&phi),
        pass: phi.status == Status::Defined && phi.per_size == psi.per_size,
        verdict: phi,
    })
}

fn conflict(census: &CensusOptions) -> Result<Check> {
    let kb = fixture(CONFLICT);
    let q = query("A(a)");
    let cfg = engine(census, 2, 6, Mode::Auto);
    let forward = support::support(&kb, &q, &cfg)?;
    let mut reversed = kb.sentences().to_vec();
    reversed.reverse();
    let backward = support::support(&KnowledgeBase::from_sentences(reversed), &q, &cfg)?;
    let expected = iv((3, 5), (17, 20));
    Ok(Check {
        query: q.to_string(),
        expected: format!("defined {expected}"),
        computed: show(&forward),
        pass: forward.path == Path::Resolver
            && forward.interval.as_ref() == Some(&expected)
            && backward.interval == forward.interval,
        verdict: forward,
    })
}

fn lottery(census: &CensusOptions, q: &str, expected: Option<Interval>) -> Result<Check> {
    let kb = fixture(LOTTERY);
    let v = support::support(&kb, &query(q), &engine(census, 2, 6, Mode::Auto))?;
    let pass = v.path == Path::Mcs
        && match &expected {
            Some(i) => v.status == Status::Defined && v.interval.as_ref() == Some(i),
            None => v.status == Status::Conflicted,
        };
    Ok(Check {
        query: q.into(),
        expected: match expected {
            Some(i) => format!("defined {i}"),
            None => "conflicted".into(),
        },
        computed: show(&v),
        pass,
        verdict: v,
    })
}

fn premise(census: &CensusOptions) -> Result<Check> {
    let kb = fixture(DIRECT_INFERENCE);
    let q = query("B(a)");
    let v = support::support(&kb, &q, &engine(census, 5, 10, Mode::Auto))?;
    let one = iv((1, 1), (1, 1));
    Ok(Check {
        query: q.to_string(),
        expected: format!("defined {one}"),
        computed: show(&v),
        pass: v.status == Status::Defined && v.interval.as_ref() == Some(&one),
        verdict: v,
    })
}

type Runner = fn(&CensusOptions) -> Result<Check>;

const THEOREMS: [(&str, &str, &str, Runner); 8] = [
    ("equivalence", "equivalent sentences get identical support", "equivalence.kb", equivalence),
    ("direct-inference", "a known member inherits the class interval", "direct_inference.kb", |c| {
        rule(c, DIRECT_INFERENCE, "A(a)", (5, 10), iv((4, 5), (4, 5)))
    }),
    ("specificity", "the narrower class wins a shifted conflict", "specificity.kb", |c| {
        rule(c, SPECIFICITY, "A(a)", (2, 8), iv((4, 5), (9, 10)))
    }),
    ("strength", "a tighter nested interval stands", "strength.kb", |c| {
        rule(c, STRENGTH, "A(a)", (2, 8), iv((4, 5), (9, 10)))
    }),
    ("conflict", "unrelated shifted classes widen to the cover", "conflict.kb", conflict),
    ("subset-agreement", "all maximal consistent subsets agree", "lottery.kb", |c| {
        lottery(c, "H(c)", Some(iv((49, 100), (51, 100))))
    }),
    ("subset-conflict", "disagreeing subsets give no probability", "lottery.kb", |c| {
        lottery(c, "~W(t1)", None)
    }),
    ("premise-certainty", "a premise of a consistent base gets [1, 1]", "direct_inference.kb", premise),
];

/// Runs all eight fixtures. Errors (a guard set too low, say) fail the
/// affected fixture only.
pub fn run_theorems(census: &CensusOptions) -> TheoremReport {
    let results: Vec<TheoremResult> = THEOREMS
        .iter()
        .map(|&(name, claim, fixture, run)| match run(census) {
            Ok(c) => TheoremResult {
                name,
                claim,
                fixture,
                query: c.query,
                expected: c.expected,
                computed: c.computed,
                outcome: if c.pass { Outcome::Pass } else { Outcome::Fail },
                verdict: Some(c.verdict),
            },
            Err(e) => TheoremResult {
                name,
                claim,
                fixture,
                query: String::new(),
                expected: String::new(),
                computed: format!("error: {e}"),
                outcome: Outcome::Fail,
                verdict: None,
            },
        })
        .collect();
    TheoremReport {
        passed: results.iter().filter(|r| r.outcome == Outcome::Pass).count(),
        total: results.len(),
        results,
    }
}
