use std::collections::{BTreeMap, BTreeSet};

use super::structures::{detect_inference_structures, resolve};
use super::{EngineConfig, Interval, McsEntry, Mode, Path, SizeFraction, Status, SupportVerdict};
use crate::census::{self, Profile};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::{KnowledgeBase, Sentence};

/// Profiles over every size in range. Probe `i < sentences` is KB sentence
/// `i` alone; the probes after it are the queries, in order.
struct Tally {
    sentences: usize,
    profiles: Vec<Profile>,
}

impl Tally {
    fn new(kb: &KnowledgeBase, queries: &[&Sentence], cfg: &EngineConfig) -> Result<Tally> {
        let probes = kb.len() + queries.len();
        if probes > 128 {
            return Err(Error::TooManySentences(probes));
        }
        let extra: Vec<Sentence> = queries.iter().map(|&q| q.clone()).collect();
        let sig = kb.signature(&extra)?;
        let probes: Vec<Vec<&Sentence>> = kb
            .sentences()
            .iter()
            .chain(queries.iter().copied())
            .map(|s| vec![s])
            .collect();
        let profiles = cfg
            .sizes
            .iter()
            .map(|n| census::profile(&sig, &probes, n, &cfg.census))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tally {
            sentences: kb.len(),
            profiles,
        })
    }

    fn mask(ids: &[usize]) -> u128 {
        ids.iter().fold(0, |m, &i| m | 1 << i)
    }

    fn per_size(&self, premises: u128, query: usize) -> BTreeMap<usize, SizeFraction> {
        let q = 1u128 << (self.sentences + query);
        self.profiles
            .iter()
            .map(|p| {
                let total = p.count(premises);
                let f = if total == 0u32.into() {
                    SizeFraction::NoPremiseModels
                } else {
                    SizeFraction::Fraction(Rational::from_counts(&p.count(premises | q), &total))
                };
                (p.domain_size, f)
            })
            .collect()
    }

    /// Sets of KB sentences true together in at least one model in range.
    fn realized(&self) -> BTreeSet<u128> {
        let kb = if self.sentences == 128 { u128::MAX } else { (1u128 << self.sentences) - 1 };
        self.profiles
            .iter()
            .flat_map(|p| p.masks.keys().map(move |m| m & kb))
            .collect()
    }

    fn consistent(&self) -> bool {
        let all: Vec<usize> = (0..self.sentences).collect();
        self.realized().contains(&Tally::mask(&all))
    }

    fn maximal(&self) -> Vec<Vec<usize>> {
        let realized = self.realized();
        let mut out: Vec<Vec<usize>> = realized
            .iter()
            .filter(|&&m| !realized.iter().any(|&o| o != m && o & m == m))
            .map(|&m| (0..self.sentences).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        out.sort();
        out
    }
}

fn envelope(per_size: &BTreeMap<usize, SizeFraction>) -> Option<Interval> {
    let fractions = per_size.values().filter_map(|f| match f {
        SizeFraction::Fraction(r) => Some(r),
        SizeFraction::NoPremiseModels => None,
    });
    let lo = fractions.clone().min()?.clone();
    let hi = fractions.max()?.clone();
    Some(Interval::new(lo, hi).expect("fractions lie in [0, 1]"))
}

struct Decision {
    status: Status,
    interval: Option<Interval>,
    path: Path,
    per_size: BTreeMap<usize, SizeFraction>,
}

fn by_enumeration(per_size: BTreeMap<usize, SizeFraction>) -> Decision {
    let interval = envelope(&per_size);
    Decision {
        status: if interval.is_some() { Status::Defined } else { Status::Vacuous },
        interval,
        path: Path::Enumeration,
        per_size,
    }
}

/// Verdict for the premises `members` of `kb`, assumed satisfiable.
fn decide(kb: &KnowledgeBase, members: &[usize], query: &Sentence, q: usize, tally: &Tally, mode: Mode) -> Decision {
    let per_size = tally.per_size(Tally::mask(members), q);
    if mode == Mode::Enumerate {
        return by_enumeration(per_size);
    }
    let premise = members.iter().any(|&i| kb.sentences()[i] == *query);
    if mode == Mode::Auto && premise {
        return by_enumeration(per_size);
    }
    let sub = kb.subset(members);
    let (structures, inclusions) = detect_inference_structures(&sub, query);
    match resolve(&structures, &inclusions) {
        Some(interval) => Decision {
            status: Status::Defined,
            interval: Some(interval),
            path: Path::Resolver,
            per_size,
        },
        None if mode == Mode::Auto => by_enumeration(per_size),
        None => Decision {
            status: Status::Vacuous,
            interval: None,
            path: Path::Resolver,
            per_size,
        },
    }
}

fn verdict(d: Decision, cfg: &EngineConfig) -> SupportVerdict {
    SupportVerdict {
        status: d.status,
        interval: d.interval,
        envelope: None,
        per_size: d.per_size,
        mcs_breakdown: None,
        path: d.path,
        size_range: cfg.sizes,
    }
}

/// Fraction of premise models satisfying `query` at each size in range,
/// summarized by its `[min, max]` over sizes that have premise models.
/// `Vacuous` when no size does.
pub fn support_by_enumeration(kb: &KnowledgeBase, query: &Sentence, cfg: &EngineConfig) -> Result<SupportVerdict> {
    let tally = Tally::new(kb, &[query], cfg)?;
    let all: Vec<usize> = (0..kb.len()).collect();
    Ok(verdict(by_enumeration(tally.per_size(Tally::mask(&all), 0)), cfg))
}

/// Whether some model of size in range satisfies every sentence.
pub fn satisfiable(kb: &KnowledgeBase, cfg: &EngineConfig) -> Result<bool> {
    Ok(Tally::new(kb, &[], cfg)?.consistent())
}

/// Maximal subsets (as sorted sentence ids) satisfiable at some size in
/// range, in lexicographic order. A satisfiable `kb` gives one subset with
/// every id.
pub fn maximal_consistent_subsets(kb: &KnowledgeBase, cfg: &EngineConfig) -> Result<Vec<Vec<usize>>> {
    Ok(Tally::new(kb, &[], cfg)?.maximal())
}

/// Degree of support for `query`. An inconsistent `kb` is answered through
/// its maximal consistent subsets: `Defined` only when every subset gives
/// the same interval.
pub fn support(kb: &KnowledgeBase, query: &Sentence, cfg: &EngineConfig) -> Result<SupportVerdict> {
    Ok(support_many(kb, std::slice::from_ref(query), cfg)?.remove(0))
}

/// [`support`] for several queries over one shared census.
pub fn support_many(kb: &KnowledgeBase, queries: &[Sentence], cfg: &EngineConfig) -> Result<Vec<SupportVerdict>> {
    let refs: Vec<&Sentence> = queries.iter().collect();
    let tally = Tally::new(kb, &refs, cfg)?;
    if tally.consistent() {
        let all: Vec<usize> = (0..kb.len()).collect();
        return Ok(queries
            .iter()
            .enumerate()
            .map(|(q, query)| verdict(decide(kb, &all, query, q, &tally, cfg.mode), cfg))
            .collect());
    }
    let subsets = tally.maximal();
    let none: Vec<usize> = (0..kb.len()).collect();
    Ok(queries
        .iter()
        .enumerate()
        .map(|(q, query)| {
            let entries: Vec<McsEntry> = subsets
                .iter()
                .enumerate()
                .map(|(id, members)| {
                    let d = decide(kb, members, query, q, &tally, cfg.mode);
                    McsEntry {
                        id,
                        members: members.clone(),
                        status: d.status,
                        interval: d.interval,
                        path: d.path,
                        per_size: d.per_size,
                    }
                })
                .collect();
            let first = entries[0].interval.clone();
            let agree = entries.iter().all(|e| e.status == Status::Defined && e.interval == first);
            let cover = entries
                .iter()
                .filter_map(|e| e.interval.clone())
                .reduce(|a, b| a.cover(&b));
            SupportVerdict {
                status: if agree { Status::Defined } else { Status::Conflicted },
                interval: if agree { first } else { None },
                envelope: if agree { None } else { cover },
                per_size: tally.per_size(Tally::mask(&none), q),
                mcs_breakdown: Some(entries),
                path: Path::Mcs,
                size_range: cfg.sizes,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{count_conditional, CensusOptions};
    use crate::support::SizeRange;
    use crate::syntax::{parse_kb, parse_sentence};
    use proptest::prelude::*;

    fn cfg(lo: usize, hi: usize) -> EngineConfig {
        EngineConfig::default().with_sizes(SizeRange::new(lo, hi).unwrap())
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn point(n: i64, d: i64) -> Option<Interval> {
        Some(Interval::point(r(n, d)).unwrap())
    }

    const LOTTERY: &str = "
        W(t1) | W(t2) | W(t3).
        ~(W(t1) & W(t2)). ~(W(t1) & W(t3)). ~(W(t2) & W(t3)).
        ~W(t1). ~W(t2). ~W(t3).
        %(H(x), T(x), 49/100, 51/100). T(c).";

    #[test]
    fn direct_inference_by_enumeration() {
        let kb = parse_kb("B(a). %(A(x), B(x), 4/5, 4/5).").unwrap();
        let v = support_by_enumeration(&kb, &parse_sentence("A(a)").unwrap(), &cfg(5, 5)).unwrap();
        assert_eq!(v.status, Status::Defined);
        assert_eq!(v.interval, point(4, 5));
        assert_eq!(v.per_size[&5], SizeFraction::Fraction(r(20, 25)));
        assert_eq!(v.path, Path::Enumeration);
    }

    #[test]
    fn premises_and_their_negations() {
        let kb = parse_kb("P(a).").unwrap();
        let yes = support_by_enumeration(&kb, &parse_sentence("P(a)").unwrap(), &cfg(2, 4)).unwrap();
        assert_eq!(yes.interval, point(1, 1));
        let no = support_by_enumeration(&kb, &parse_sentence("~P(a)").unwrap(), &cfg(2, 4)).unwrap();
        assert_eq!(no.interval, point(0, 1));
    }

    #[test]
    fn infeasible_sizes_are_marked() {
        // Exactly four fifths of B needs |B| a multiple of five.
        let kb = parse_kb("B(a). %(A(x), B(x), 4/5, 4/5).").unwrap();
        let v = support_by_enumeration(&kb, &parse_sentence("A(a)").unwrap(), &cfg(2, 5)).unwrap();
        for n in 2..5 {
            assert_eq!(v.per_size[&n], SizeFraction::NoPremiseModels);
        }
        assert_eq!(v.interval, point(4, 5));
        let never = parse_kb("P(a). ~P(a).").unwrap();
        let v = support_by_enumeration(&never, &parse_sentence("P(a)").unwrap(), &cfg(1, 3)).unwrap();
        assert_eq!(v.status, Status::Vacuous);
        assert_eq!(v.interval, None);
    }

    #[test]
    fn mcs_small_cases() {
        let kb = parse_kb("P(a). Q(b).").unwrap();
        assert_eq!(maximal_consistent_subsets(&kb, &cfg(2, 3)).unwrap(), vec![vec![0, 1]]);
        let kb = parse_kb("P(a). ~P(a).").unwrap();
        assert_eq!(maximal_consistent_subsets(&kb, &cfg(2, 3)).unwrap(), vec![vec![0], vec![1]]);
        assert!(!satisfiable(&kb, &cfg(2, 3)).unwrap());
    }

    /// Every subset checked on its own with the naive counter.
    fn mcs_oracle(kb: &KnowledgeBase, sizes: std::ops::RangeInclusive<usize>) -> Vec<Vec<usize>> {
        let m = kb.len();
        let opts = CensusOptions::default();
        let top = parse_sentence("forall x (P(x) | ~P(x))").unwrap();
        let sat: Vec<bool> = (0u32..1 << m)
            .map(|bits| {
                let ids: Vec<usize> = (0..m).filter(|i| bits >> i & 1 == 1).collect();
                let sub = kb.subset(&ids);
                sizes
                    .clone()
                    .any(|n| count_conditional(&sub, &top, n, &opts).unwrap().satisfying_premises > 0u32.into())
            })
            .collect();
        let mut out: Vec<Vec<usize>> = (0u32..1 << m)
            .filter(|&b| sat[b as usize] && (0..m).all(|i| b >> i & 1 == 1 || !sat[(b | 1 << i) as usize]))
            .map(|b| (0..m).filter(|i| b >> i & 1 == 1).collect())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn lottery_fragment_subsets_match_oracle() {
        // Without the coin statements: the seven W sentences, all 128 subsets.
        let text: String = LOTTERY.lines().take(4).collect::<Vec<_>>().join("\n");
        let kb = parse_kb(&text).unwrap();
        assert_eq!(kb.len(), 7);
        let expected = mcs_oracle(&kb, 3..=3);
        // Three drop one losing-ticket sentence; the fourth drops the
        // disjunction and keeps every ticket losing.
        assert_eq!(expected.len(), 4);
        assert!(expected.contains(&vec![1, 2, 3, 4, 5, 6]));
        assert_eq!(maximal_consistent_subsets(&kb, &cfg(3, 3)).unwrap(), expected);
        assert_eq!(maximal_consistent_subsets(&kb, &cfg(2, 6)).unwrap(), expected);
    }

    #[test]
    fn two_ticket_fragment() {
        let kb = parse_kb("W(t1) | W(t2). ~(W(t1) & W(t2)). ~W(t1). ~W(t2).").unwrap();
        let expected = mcs_oracle(&kb, 2..=3);
        assert_eq!(expected.len(), 3);
        assert_eq!(maximal_consistent_subsets(&kb, &cfg(2, 3)).unwrap(), expected);
    }

    #[test]
    fn lottery_coin_and_tickets() {
        let kb = parse_kb(LOTTERY).unwrap();
        let c = cfg(2, 6);
        assert!(!satisfiable(&kb, &c).unwrap());
        let coin = support(&kb, &parse_sentence("H(c)").unwrap(), &c).unwrap();
        assert_eq!(coin.status, Status::Defined);
        assert_eq!(coin.path, Path::Mcs);
        assert_eq!(
            coin.interval,
            Some(Interval::new(r(49, 100), r(51, 100)).unwrap())
        );
        let breakdown = coin.mcs_breakdown.as_ref().unwrap();
        assert_eq!(breakdown.len(), 4);
        assert!(breakdown.iter().all(|e| e.path == Path::Resolver));

        let ticket = support(&kb, &parse_sentence("~W(t1)").unwrap(), &c).unwrap();
        assert_eq!(ticket.status, Status::Conflicted);
        assert_eq!(ticket.interval, None);
        assert_eq!(ticket.envelope, Some(Interval::new(r(0, 1), r(1, 1)).unwrap()));
        let intervals: BTreeSet<_> = ticket
            .mcs_breakdown
            .unwrap()
            .into_iter()
            .map(|e| e.interval.unwrap().to_string())
            .collect();
        assert_eq!(intervals, ["[0, 0]", "[1, 1]"].map(String::from).into());
    }

    #[test]
    fn contradiction_conflicts() {
        let kb = parse_kb("P(a). ~P(a).").unwrap();
        let v = support(&kb, &parse_sentence("P(a)").unwrap(), &cfg(2, 4)).unwrap();
        assert_eq!(v.status, Status::Conflicted);
        let got: Vec<_> = v.mcs_breakdown.unwrap().into_iter().map(|e| e.interval).collect();
        assert_eq!(got, vec![point(1, 1), point(0, 1)]);
        let ok = parse_kb("P(a). Q(a).").unwrap();
        let v = support(&ok, &parse_sentence("P(a)").unwrap(), &cfg(2, 4)).unwrap();
        assert_eq!((v.status, v.interval), (Status::Defined, point(1, 1)));
    }

    #[test]
    fn premise_query_wins_over_structures() {
        let kb = parse_kb("B(a). %(A(x), B(x), 4/5, 4/5). A(a).").unwrap();
        let q = parse_sentence("A(a)").unwrap();
        let auto = support(&kb, &q, &cfg(5, 5)).unwrap();
        assert_eq!((auto.path, auto.interval), (Path::Enumeration, point(1, 1)));
        let forced = support(&kb, &q, &cfg(5, 5).with_mode(Mode::Resolve)).unwrap();
        assert_eq!((forced.path, forced.interval), (Path::Resolver, point(4, 5)));
    }

    #[test]
    fn modes() {
        let kb = parse_kb("%(A(x), B(x), 1/2, 1). B(a).").unwrap();
        let q = parse_sentence("A(a)").unwrap();
        let auto = support(&kb, &q, &cfg(2, 4)).unwrap();
        assert_eq!(auto.path, Path::Resolver);
        assert_eq!(auto.interval, Some(Interval::new(r(1, 2), r(1, 1)).unwrap()));
        let en = support(&kb, &q, &cfg(2, 4).with_mode(Mode::Enumerate)).unwrap();
        assert_eq!(en.path, Path::Enumeration);
        assert!(en.interval.unwrap().is_within(auto.interval.as_ref().unwrap()));
        let plain = parse_kb("B(a).").unwrap();
        let v = support(&plain, &q, &cfg(2, 3).with_mode(Mode::Resolve)).unwrap();
        assert_eq!((v.status, v.path), (Status::Vacuous, Path::Resolver));
        let v = support(&plain, &q, &cfg(2, 3)).unwrap();
        assert_eq!((v.status, v.interval), (Status::Defined, point(1, 2)));
    }

    #[test]
    fn batch_matches_single_queries() {
        let kb = parse_kb(LOTTERY).unwrap();
        let qs: Vec<Sentence> = ["H(c)", "~W(t2)", "W(t1) | W(t2)"]
            .iter()
            .map(|t| parse_sentence(t).unwrap())
            .collect();
        let c = cfg(2, 4);
        let batch = support_many(&kb, &qs, &c).unwrap();
        for (q, v) in qs.iter().zip(batch) {
            assert_eq!(support(&kb, q, &c).unwrap(), v);
        }
    }

    #[test]
    fn too_many_probes() {
        let text: String = (0..129).map(|i| format!("P{i}(a).\n")).collect();
        let kb = parse_kb(&text).unwrap();
        assert!(matches!(satisfiable(&kb, &cfg(1, 1)), Err(Error::TooManySentences(129))));
    }

    fn stat(lo: u32, hi: u32) -> String {
        format!("{}/10, {}/10", lo.min(hi), lo.max(hi))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn equivalents_get_equal_support(neg in any::<bool>(), lo in 0u32..=10, hi in 0u32..=10) {
            let psi = if neg { "~C(a)" } else { "C(a) & B(a)" };
            let kb = parse_kb(&format!("%(A(x), B(x), {}). B(a). A(a) <-> {psi}.", stat(lo, hi))).unwrap();
            let c = cfg(2, 4).with_mode(Mode::Enumerate);
            let phi = support_by_enumeration(&kb, &parse_sentence("A(a)").unwrap(), &c).unwrap();
            let psi = support_by_enumeration(&kb, &parse_sentence(psi).unwrap(), &c).unwrap();
            prop_assert_eq!(phi.per_size, psi.per_size);
        }

        #[test]
        fn direct_inference_stays_in_bounds(lo in 0u32..=10, hi in 0u32..=10) {
            let (p, q) = (r(lo.min(hi) as i64, 10), r(lo.max(hi) as i64, 10));
            let kb = parse_kb(&format!("%(A(x), B(x), {}). B(a).", stat(lo, hi))).unwrap();
            let v = support_by_enumeration(&kb, &parse_sentence("A(a)").unwrap(), &cfg(1, 6)).unwrap();
            for f in v.per_size.values() {
                if let SizeFraction::Fraction(x) = f {
                    prop_assert!(p <= *x && *x <= q, "{} outside [{}, {}]", x, p, q);
                }
            }
        }
    }
}
