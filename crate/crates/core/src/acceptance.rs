//! Threshold acceptance over support verdicts, and the scaled lottery.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::support::{self, EngineConfig, SizeRange, Status, SupportVerdict};
use crate::syntax::{parse_kb, parse_sentence, KnowledgeBase, Sentence};

/// A candidate is accepted when its verdict is `Defined` and its lower
/// bound strictly exceeds `1 - delta`.
#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    delta: Rational,
    pub engine: EngineConfig,
}

impl AcceptanceConfig {
    pub fn new(delta: Rational, engine: EngineConfig) -> Result<AcceptanceConfig> {
        if delta.is_zero() || delta >= Rational::one() {
            return Err(Error::InvalidDelta(delta.to_string()));
        }
        Ok(AcceptanceConfig { delta, engine })
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn threshold(&self) -> Rational {
        self.delta.complement()
    }

    pub fn admits(&self, verdict: &SupportVerdict) -> bool {
        verdict.status == Status::Defined && verdict.lower().is_some_and(|lo| *lo > self.threshold())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// `Conflicted` or `Vacuous`.
    NoProbability,
    BelowThreshold,
    /// The candidate could not be evaluated (guard, arity clash, ...).
    Failed(String),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NoProbability => f.write_str("no probability"),
            Rejection::BelowThreshold => f.write_str("below threshold"),
            Rejection::Failed(e) => write!(f, "error: {e}"),
        }
    }
}

impl Serialize for Rejection {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn as_text<S: Serializer>(sentence: &Sentence, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(sentence)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Accepted {
    #[serde(serialize_with = "as_text")]
    pub sentence: Sentence,
    pub verdict: SupportVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejected {
    #[serde(serialize_with = "as_text")]
    pub sentence: Sentence,
    pub verdict: Option<SupportVerdict>,
    pub reason: Rejection,
}

/// Both lists keep the candidates' input order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AcceptedSet {
    pub accepted: Vec<Accepted>,
    pub rejected: Vec<Rejected>,
}

impl AcceptedSet {
    pub fn accepted_sentences(&self) -> Vec<&Sentence> {
        self.accepted.iter().map(|a| &a.sentence).collect()
    }
}

/// Runs support for every candidate and splits them by the threshold.
/// Evaluation errors reject the offending candidate only.
pub fn accept(kb: &KnowledgeBase, candidates: &[Sentence], config: &AcceptanceConfig) -> AcceptedSet {
    let verdicts: Vec<Result<SupportVerdict>> = match support::support_many(kb, candidates, &config.engine) {
        Ok(all) => all.into_iter().map(Ok).collect(),
        Err(_) => candidates
            .iter()
            .map(|c| support::support(kb, c, &config.engine))
            .collect(),
    };
    let mut out = AcceptedSet::default();
    for (sentence, verdict) in candidates.iter().cloned().zip(verdicts) {
        match verdict {
            Ok(v) if config.admits(&v) => out.accepted.push(Accepted { sentence, verdict: v }),
            Ok(v) => {
                let reason = if v.status == Status::Defined {
                    Rejection::BelowThreshold
                } else {
                    Rejection::NoProbability
                };
                out.rejected.push(Rejected {
                    sentence,
                    verdict: Some(v),
                    reason,
                })
            }
            Err(e) => out.rejected.push(Rejected {
                sentence,
                verdict: None,
                reason: Rejection::Failed(e.to_string()),
            }),
        }
    }
    out
}

/// Knowledge base for a `k`-ticket lottery plus a coin toss.
///
/// Exactly one winner is spelled out without equality: a `k`-way
/// disjunction and every pairwise exclusion. Each ticket is also asserted
/// to lose, so the whole base has no model. Constants `t1..tk` are tickets
/// and `c` is the coin.
pub fn lottery_kb(tickets: usize) -> Result<KnowledgeBase> {
    if tickets < 2 {
        return Err(Error::TooFewTickets(tickets));
    }
    let w = |i: usize| format!("W(t{i})");
    let mut text = (1..=tickets).map(w).collect::<Vec<_>>().join(" | ") + ".\n";
    for i in 1..=tickets {
        for j in i + 1..=tickets {
            text += &format!("~({} & {}).\n", w(i), w(j));
        }
    }
    for i in 1..=tickets {
        text += &format!("~{}.\n", w(i));
    }
    text += "%(H(x), T(x), 49/100, 51/100).\nT(c).\n";
    Ok(parse_kb(&text)?)
}

/// `H(c)` followed by `~W(ti)` for every ticket.
pub fn lottery_candidates(tickets: usize) -> Vec<Sentence> {
    std::iter::once("H(c)".to_string())
        .chain((1..=tickets).map(|i| format!("~W(t{i})")))
        .map(|t| parse_sentence(&t).expect("well-formed candidate"))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LotteryReport {
    pub tickets: usize,
    pub delta: Rational,
    pub size_range: SizeRange,
    pub premises_satisfiable: bool,
    pub maximal_consistent_subsets: usize,
    /// Subsets of the ticket sentences alone, without the coin.
    pub ticket_fragment_subsets: usize,
    pub result: AcceptedSet,
    pub accepted_satisfiable: bool,
}

pub fn lottery_demo(tickets: usize, config: &AcceptanceConfig) -> Result<LotteryReport> {
    let kb = lottery_kb(tickets)?;
    let engine = &config.engine;
    let fragment: Vec<usize> = (0..kb.len() - 2).collect();
    let candidates = lottery_candidates(tickets);
    let result = accept(&kb, &candidates, config);
    if let Some(Rejected { reason: Rejection::Failed(_), .. }) = result.rejected.first() {
        // Surface the underlying error rather than a report full of failures.
        support::support(&kb, &candidates[0], engine)?;
    }
    let accepted = KnowledgeBase::from_sentences(result.accepted_sentences().into_iter().cloned());
    Ok(LotteryReport {
        tickets,
        delta: config.delta.clone(),
        size_range: engine.sizes,
        premises_satisfiable: support::satisfiable(&kb, engine)?,
        maximal_consistent_subsets: support::maximal_consistent_subsets(&kb, engine)?.len(),
        ticket_fragment_subsets: support::maximal_consistent_subsets(&kb.subset(&fragment), engine)?.len(),
        accepted_satisfiable: support::satisfiable(&accepted, engine)?,
        result,
    })
}

impl fmt::Display for LotteryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = (self.size_range.min(), self.size_range.max());
        writeln!(f, "lottery with {} tickets, delta = {}, sizes {lo}..{hi}", self.tickets, self.delta)?;
        let sat = |b: bool| if b { "satisfiable" } else { "unsatisfiable" };
        writeln!(f, "premises: {}", sat(self.premises_satisfiable))?;
        writeln!(
            f,
            "maximal consistent subsets: {} ({} in the ticket sentences alone)",
            self.maximal_consistent_subsets, self.ticket_fragment_subsets
        )?;
        for a in &self.result.accepted {
            let iv = a.verdict.interval.as_ref().expect("accepted verdicts are defined");
            writeln!(f, "  accept  {:<12} {iv}", a.sentence.to_string())?;
        }
        for r in &self.result.rejected {
            writeln!(f, "  reject  {:<12} {}", r.sentence.to_string(), r.reason)?;
        }
        write!(f, "accepted set: {}", sat(self.accepted_satisfiable))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::support::Interval;
    use proptest::prelude::*;

    fn engine(lo: usize, hi: usize) -> EngineConfig {
        EngineConfig::default().with_sizes(SizeRange::new(lo, hi).unwrap())
    }

    fn config(n: i64, d: i64) -> AcceptanceConfig {
        AcceptanceConfig::new(Rational::new(n, d), engine(2, 6)).unwrap()
    }

    #[test]
    fn delta_bounds() {
        for bad in [Rational::zero(), Rational::one(), Rational::new(3, 2)] {
            assert!(AcceptanceConfig::new(bad, EngineConfig::default()).is_err());
        }
    }

    #[test]
    fn strict_threshold() {
        let verdict = |lo: Rational| SupportVerdict {
            status: Status::Defined,
            interval: Some(Interval::new(lo, Rational::one()).unwrap()),
            envelope: None,
            per_size: Default::default(),
            mcs_breakdown: None,
            path: crate::support::Path::Enumeration,
            size_range: SizeRange::default(),
        };
        let c = config(1, 10);
        assert!(c.admits(&verdict(Rational::new(19, 20))));
        assert!(!c.admits(&verdict(Rational::new(9, 10))));
    }

    #[test]
    fn builder_matches_fixture_file() {
        let fixture = parse_kb(include_str!("../fixtures/lottery.kb")).unwrap();
        assert_eq!(fixture.sentences(), lottery_kb(3).unwrap().sentences());
    }

    #[test]
    fn lottery_three() {
        let report = lottery_demo(3, &config(3, 5)).unwrap();
        assert!(!report.premises_satisfiable);
        let accepted: Vec<String> = report.result.accepted.iter().map(|a| a.sentence.to_string()).collect();
        assert_eq!(accepted, ["H(c)"]);
        assert_eq!(report.result.rejected.len(), 3);
        assert!(report.result.rejected.iter().all(|r| r.reason == Rejection::NoProbability));
        assert!(report.accepted_satisfiable);
        assert_eq!(report.maximal_consistent_subsets, 4);
        assert_eq!(report.ticket_fragment_subsets, 4);
        let text = report.to_string();
        assert!(text.contains("premises: unsatisfiable"), "{text}");
    }

    #[test]
    fn lottery_two() {
        let report = lottery_demo(2, &config(3, 5)).unwrap();
        assert_eq!(report.ticket_fragment_subsets, 3);
    }

    #[test]
    fn tight_delta_accepts_nothing() {
        let kb = lottery_kb(3).unwrap();
        let set = accept(&kb, &lottery_candidates(3), &config(1, 100));
        assert!(set.accepted.is_empty());
        assert_eq!(set.rejected[0].reason, Rejection::BelowThreshold);
    }

    #[test]
    fn failures_stay_local() {
        let kb = parse_kb("P(a).").unwrap();
        let candidates = [parse_sentence("P(a)").unwrap(), parse_sentence("P(a, b)").unwrap()];
        let set = accept(&kb, &candidates, &config(1, 2));
        assert_eq!(set.accepted.len(), 1);
        assert!(matches!(set.rejected[0].reason, Rejection::Failed(_)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn monotone_in_delta(a in 1i64..100, b in 1i64..100) {
            let (d1, d2) = (a.min(b), a.max(b));
            let kb = parse_kb("%(A(x), B(x), 7/10, 9/10). B(a). C(a). ~C(b).").unwrap();
            let cands: Vec<Sentence> = ["A(a)", "C(a)", "C(b)", "A(a) | C(b)", "~A(a)"]
                .iter()
                .map(|t| parse_sentence(t).unwrap())
                .collect();
            let cfg = |d| AcceptanceConfig::new(Rational::new(d, 100), engine(2, 4)).unwrap();
            let small = accept(&kb, &cands, &cfg(d1));
            let large = accept(&kb, &cands, &cfg(d2));
            let big: Vec<&Sentence> = large.accepted_sentences();
            for s in small.accepted_sentences() {
                prop_assert!(big.contains(&s));
            }
            // Premises of a consistent base are always accepted.
            prop_assert!(small.accepted_sentences().contains(&&cands[1]));
        }
    }
}
