//! One PASS/FAIL line per acceptance criterion. Exits non-zero when any
//! criterion fails.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use metaplectic_packets::adams::RootNumberTable;
use metaplectic_packets::discrete::DiscreteParam;
use metaplectic_packets::format::Workspace;
use metaplectic_packets::nonvanish::Rule;
use metaplectic_packets::suites::{self, SuiteReport};
use metaplectic_packets::{Inventory, Sign};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn criterion(
    id: u32,
    name: &'static str,
    limit_secs: u64,
    f: impl FnOnce() -> (bool, String),
) -> Line {
    let start = Instant::now();
    let (pass, detail) = f();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_secs);
    Line {
        id,
        name,
        pass: pass && elapsed <= limit,
        detail,
        elapsed,
        limit,
    }
}

fn note(rep: &SuiteReport, key: &str) -> usize {
    rep.notes.get(key).copied().unwrap_or(0)
}

fn main() {
    let inv = Arc::new(Inventory::standard());
    let roots = RootNumberTable::from_inventory(&inv);
    let triv = inv.lookup("triv").unwrap();
    let mut lines = Vec::new();

    lines.push(criterion(1, "cuspidality of (triv,2)", 1, || {
        let plus = DiscreteParam::from_pairs(inv.clone(), [(triv, 2, Sign::Plus)]).unwrap();
        let minus = DiscreteParam::from_pairs(inv.clone(), [(triv, 2, Sign::Minus)]).unwrap();
        let (p, m) = (plus.is_cuspidal(), minus.is_cuspidal());
        (p && !m, format!("eps = +1 -> {}, eps = -1 -> {}", p, m))
    }));

    lines.push(criterion(2, "tempered cardinality, 2n <= 10", 60, || {
        let r = suites::tempered(&inv, 10).unwrap();
        (r.passed() && r.parameters > 0, r.summary())
    }));

    lines.push(criterion(3, "row-exchange suite, 2n <= 10", 300, || {
        let r = suites::rowex(&inv, 10).unwrap();
        let verdict = r.violations.iter().filter(|v| v.contains("changes the verdict")).count();
        let zero_to_nonzero = r.violations.iter().filter(|v| v.contains("(zero to nonzero)")).count();
        let literal = note(&r, "literal eps_E changes");
        let back_vanishing = note(&r, "double exchange differs on vanishing inputs");
        let detail = format!(
            "{} exchanges on {} parameters; psi or normalized character changed: {}; \
             literal eps_E changed: {}; verdict changed: {} ({} zero to nonzero, {} without reduction mod b); \
             double exchange not equivalent: {} on vanishing inputs, {} otherwise",
            r.checks,
            r.parameters,
            r.violations.len() - verdict - r.violations.iter().filter(|v| v.contains("twice")).count(),
            literal,
            verdict,
            zero_to_nonzero,
            note(&r, "verdict changes without reduction mod b"),
            back_vanishing,
            r.violations.iter().filter(|v| v.contains("twice")).count(),
        );
        (r.passed() && literal == 0 && back_vanishing == 0, detail)
    }));

    lines.push(criterion(4, "DDR recursion, 2n <= 12", 300, || {
        let r = suites::ddr(&inv, 12, Rule::Standard).unwrap();
        let m = suites::ddr(&inv, 12, Rule::FlippedCaseOneMismatch).unwrap();
        (
            r.passed() && r.checks > 0,
            format!(
                "{}; flipped-inequality mutant: {} discrepancies",
                r.summary(),
                m.violations.len()
            ),
        )
    }));

    lines.push(criterion(5, "cuspidality oracle, 2n <= 10", 60, || {
        let r = suites::cuspidal_oracle(&inv, 10);
        (r.passed() && r.checks > 0, r.summary())
    }));

    lines.push(criterion(
        6,
        "Adams suite, 2n <= 8, alpha = 2n+2 and 2n+4",
        120,
        || {
            let r = suites::adams(&inv, 8, &roots).unwrap();
            (r.passed() && r.checks > 0, r.summary())
        },
    ));

    lines.push(criterion(7, "Atobe character laws, 2n <= 10", 60, || {
        let r = suites::ato(&inv, 10).unwrap();
        (r.passed() && note(&r, "non-negative DDR") > 0, r.summary())
    }));

    lines.push(criterion(8, "serialization", 60, || {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut exact = 0;
        for _ in 0..100 {
            let ws = common::random_workspace(&mut rng);
            let text = ws.emit();
            let fallback = (!ws.embed_inventory).then(|| ws.inventory.clone());
            if let Ok(back) = Workspace::parse(&text, fallback) {
                if back.emit() == text {
                    exact += 1;
                }
            }
        }
        let fixtures = common::run_invalid_fixtures(env!("CARGO_BIN_EXE_mpp"));
        let wrong: Vec<_> = fixtures
            .iter()
            .filter(|(_, e, a)| e != a)
            .map(|(f, e, a)| format!("{} expected {} got {}", f, e, a))
            .collect();
        (
            exact == 100 && wrong.is_empty(),
            format!(
                "{}/100 round-trips bit-exact; {}/{} invalid fixtures with the documented exit code{}",
                exact,
                fixtures.len() - wrong.len(),
                fixtures.len(),
                if wrong.is_empty() { String::new() } else { format!(" ({})", wrong.join(", ")) }
            ),
        )
    }));

    let mut failed = 0;
    for l in &lines {
        println!(
            "criterion {}: {} - {} [{:.2?} of {:?}] {}",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            l.name,
            l.elapsed,
            l.limit,
            l.detail
        );
        failed += !l.pass as usize;
    }
    println!("{} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
