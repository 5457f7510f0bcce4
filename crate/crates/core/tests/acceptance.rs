//! One line per acceptance criterion. Run with `cargo test --test acceptance`.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statsupport::acceptance::{accept, lottery_candidates, lottery_kb, AcceptanceConfig};
use statsupport::census::{count_conditional, count_monadic, CensusOptions};
use statsupport::rational::Rational;
use statsupport::support::{
    detect_inference_structures, resolve, satisfiable, support, support_by_enumeration, EngineConfig, Interval, Mode,
    Path, SizeFraction, SizeRange, Status, SupportVerdict,
};
use statsupport::syntax::{parse_kb, parse_sentence, KnowledgeBase};
use statsupport::theorems::{CONFLICT, DIRECT_INFERENCE, EQUIVALENCE, LOTTERY, SPECIFICITY, STRENGTH};

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg(lo: usize, hi: usize, mode: Mode) -> EngineConfig {
    EngineConfig::default().with_sizes(SizeRange::new(lo, hi).unwrap()).with_mode(mode)
}

fn iv(a: i64, b: i64, c: i64, d: i64) -> Interval {
    Interval::new(Rational::new(a, b), Rational::new(c, d)).unwrap()
}

fn kb(text: &str) -> KnowledgeBase {
    parse_kb(text).unwrap()
}

fn fractions_within(v: &SupportVerdict, bound: &Interval) -> Outcome {
    let mut feasible = 0;
    for (n, f) in &v.per_size {
        if let SizeFraction::Fraction(x) = f {
            feasible += 1;
            ensure(bound.contains(x), || format!("n={n}: {x} outside {bound}"))?;
        }
    }
    ensure(feasible > 0, || "no feasible size".into())
}

fn direct_inference_counts() -> Outcome {
    let base = kb(DIRECT_INFERENCE);
    let q = parse_sentence("A(a)").unwrap();
    let (premises, both) = common::brute_counts(&base, &q, 5);
    let r = count_conditional(&base, &q, 5, &CensusOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.total_models == BigUint::from(5120u32), || format!("total {}", r.total_models))?;
    ensure(premises == 25 && both == 20, || format!("oracle gave {both}/{premises}"))?;
    ensure(
        r.satisfying_premises == BigUint::from(premises) && r.satisfying_premises_and_query == BigUint::from(both),
        || format!("engine {}/{}", r.satisfying_premises_and_query, r.satisfying_premises),
    )?;
    let v = support_by_enumeration(&base, &q, &cfg(5, 10, Mode::Enumerate)).map_err(|e| e.to_string())?;
    ensure(v.per_size[&5] == SizeFraction::Fraction(Rational::new(4, 5)), || "n=5 fraction".into())?;
    fractions_within(&v, &iv(4, 5, 4, 5))
}

fn monadic_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let opts = CensusOptions::default();
    for i in 0..50 {
        let text = common::monadic_kb(&mut rng);
        let base = kb(&text);
        let q = parse_sentence(&common::monadic_sentence(&mut rng, 1)).unwrap();
        for n in 1..=4 {
            let fast = count_monadic(&base, Some(&q), n, &opts).map_err(|e| e.to_string())?;
            let slow = count_conditional(&base, &q, n, &opts).map_err(|e| e.to_string())?;
            ensure(fast == slow, || format!("kb #{i} at n={n} disagrees:\n{text}query {q}"))?;
        }
    }
    Ok(())
}

fn equivalence() -> Outcome {
    let base = kb(EQUIVALENCE);
    let c = cfg(2, 5, Mode::Enumerate);
    let phi = support_by_enumeration(&base, &parse_sentence("A(a)").unwrap(), &c).map_err(|e| e.to_string())?;
    let psi = support_by_enumeration(&base, &parse_sentence("C(a)").unwrap(), &c).map_err(|e| e.to_string())?;
    ensure(phi.per_size.len() == 4, || "expected four sizes".into())?;
    ensure(phi.per_size == psi.per_size, || format!("{:?} vs {:?}", phi.per_size, psi.per_size))
}

fn containment() -> Outcome {
    let q = parse_sentence("A(a)").unwrap();
    for (name, text) in [("specificity", SPECIFICITY), ("strength", STRENGTH)] {
        let expected = iv(4, 5, 9, 10);
        let base = kb(text);
        let counted = support(&base, &q, &cfg(2, 8, Mode::Enumerate)).map_err(|e| e.to_string())?;
        fractions_within(&counted, &expected).map_err(|e| format!("{name}: {e}"))?;
        let resolved = support(&base, &q, &cfg(2, 8, Mode::Resolve)).map_err(|e| e.to_string())?;
        ensure(resolved.interval.as_ref() == Some(&expected), || {
            format!("{name}: resolver gave {:?}", resolved.interval)
        })?;
    }
    Ok(())
}

fn conflict() -> Outcome {
    let base = kb(CONFLICT);
    let (mut s, mut i) = detect_inference_structures(&base, &parse_sentence("A(a)").unwrap());
    ensure(s.len() == 2 && i.is_empty(), || "fixture shape".into())?;
    let expected = Some(iv(3, 5, 17, 20));
    ensure(resolve(&s, &i) == expected, || "forward order".into())?;
    s.reverse();
    i.reverse();
    ensure(resolve(&s, &i) == expected, || "reversed order".into())
}

fn lottery() -> Outcome {
    let base = kb(LOTTERY);
    ensure(base.sentences() == lottery_kb(3).unwrap().sentences(), || "fixture drift".into())?;
    let c = cfg(2, 6, Mode::Auto);
    let unsat = !satisfiable(&base, &cfg(1, 6, Mode::Auto)).map_err(|e| e.to_string())?;
    ensure(unsat, || "premises satisfiable".into())?;
    let coin = support(&base, &parse_sentence("H(c)").unwrap(), &c).map_err(|e| e.to_string())?;
    ensure(
        coin.status == Status::Defined && coin.path == Path::Mcs && coin.interval == Some(iv(49, 100, 51, 100)),
        || format!("H(c): {:?} {:?} {:?}", coin.status, coin.path, coin.interval),
    )?;
    for t in 1..=3 {
        let v = support(&base, &parse_sentence(&format!("~W(t{t})")).unwrap(), &c).map_err(|e| e.to_string())?;
        ensure(v.status == Status::Conflicted, || format!("~W(t{t}): {:?}", v.status))?;
    }
    let config = AcceptanceConfig::new(Rational::new(3, 5), c).unwrap();
    let set = accept(&base, &lottery_candidates(3), &config);
    let accepted: Vec<String> = set.accepted.iter().map(|a| a.sentence.to_string()).collect();
    ensure(accepted == ["H(c)"], || format!("accepted {accepted:?}"))
}

fn non_monotonic() -> Outcome {
    let small = kb(DIRECT_INFERENCE);
    let large = kb(&format!("{DIRECT_INFERENCE}\nBp(a). forall x (Bp(x) -> B(x)). %(A(x), Bp(x), 9/10, 1)."));
    ensure(small.sentences().iter().all(|s| large.contains(s)), || "not an extension".into())?;
    let q = parse_sentence("A(a)").unwrap();
    let c = cfg(5, 10, Mode::Auto);
    let before = support(&small, &q, &c).map_err(|e| e.to_string())?;
    let after = support(&large, &q, &c).map_err(|e| e.to_string())?;
    ensure(before.is_defined() && after.is_defined(), || "undefined verdict".into())?;
    ensure(before.interval != after.interval, || format!("both {:?}", before.interval))
}

fn premise_without_consistency() -> Outcome {
    let q = parse_sentence("P(a)").unwrap();
    let c = cfg(2, 6, Mode::Auto);
    let bad = support(&kb("P(a). ~P(a)."), &q, &c).map_err(|e| e.to_string())?;
    ensure(bad.status == Status::Conflicted, || format!("inconsistent: {:?}", bad.status))?;
    let good = support(&kb("P(a). Q(a)."), &q, &c).map_err(|e| e.to_string())?;
    ensure(good.interval == Some(iv(1, 1, 1, 1)), || format!("consistent: {:?}", good.interval))
}

fn deterministic() -> Outcome {
    let run = |extra: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_statsupport"))
            .arg("theorems")
            .args(extra)
            .env_remove("STATSUPPORT_GUARD")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || String::from_utf8_lossy(&out.stdout).into_owned())?;
        Ok(out.stdout)
    };
    let first = run(&[])?;
    for extra in [&[][..], &["--threads", "1"], &["--threads", "8"]] {
        ensure(run(extra)? == first, || format!("output differs with {extra:?}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("direct inference counts match the enumeration oracle", Duration::from_secs(5), direct_inference_counts),
        ("cell counting agrees with enumeration on 50 random KBs", Duration::from_secs(60), monadic_oracle),
        ("equivalent queries get identical per-size support", Duration::from_secs(60), equivalence),
        ("specific and tighter intervals contain every fraction", Duration::from_secs(60), containment),
        ("unrelated shifted intervals resolve to their cover", Duration::from_secs(60), conflict),
        ("lottery: coin defined, tickets conflicted, H(c) accepted", Duration::from_secs(30), lottery),
        ("adding premises changes the defined interval", Duration::from_secs(60), non_monotonic),
        ("a premise of an inconsistent base is not certain", Duration::from_secs(60), premise_without_consistency),
        ("theorem report is byte-identical across runs and threads", Duration::from_secs(120), deterministic),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|()| {
            ensure(took < *limit, || format!("took {took:.2?}, limit {limit:?}"))
        });
        match result {
            Ok(()) => println!("PASS {}: {name} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {}: {name}: {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
