//! One line per acceptance criterion; exits non-zero if any criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use hallforge::backend::Backend;
use hallforge::fq::max_enum_from_env;
use hallforge::quiver::Quiver;
use hallforge::verify::{run_suite, Report, SuiteConfig, ORACLE_BUDGET};

struct Line {
    ok: bool,
    detail: String,
}

fn suite(quiver: &str, q: u64, name: &str, threads: usize) -> Report {
    let quiv = Quiver::preset(quiver).expect("preset quiver");
    let budget = if quiver == "a1" { ORACLE_BUDGET } else { max_enum_from_env() };
    let b = Arc::new(Backend::with_budget(quiv, q, budget).expect("preset backend"));
    let mut cfg = SuiteConfig::new(name);
    cfg.threads = threads;
    run_suite(b, &cfg).unwrap_or_else(|e| panic!("suite {name} on {quiver}: {e}"))
}

fn reports(rs: &[Report]) -> Line {
    let ok = rs.iter().all(|r| r.exit_code() == 0 && r.instances > 0);
    let detail = rs
        .iter()
        .map(|r| {
            let mut s = format!("{}@{}/q={} {}/{}", r.suite, r.quiver, r.q, r.passes, r.instances);
            if r.cap_hits > 0 {
                s.push_str(&format!(" ({} cap hits)", r.cap_hits));
            }
            if let Some(f) = r.failures.first() {
                s.push_str(&format!(" first failure {} [{}]", f.relation, f.params));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ");
    Line { ok, detail }
}

fn c1() -> Line {
    let r = suite("a2", 2, "green", 1);
    let mut l = reports(std::slice::from_ref(&r));
    l.ok &= r.instances == 2401;
    l
}

fn c2() -> Line {
    reports(&[suite("a2", 2, "bialgebra", 1), suite("a1", 3, "bialgebra", 1)])
}

fn c3() -> Line {
    reports(&[suite("a2", 2, "pairing", 1)])
}

fn c4() -> Line {
    reports(&[suite("a2", 2, "heis-oracle", 1)])
}

fn c5() -> Line {
    reports(&[suite("a2", 2, "kashaev", 1)])
}

fn c6() -> Line {
    reports(&[suite("a2", 2, "kappa", 1), suite("a2", 2, "psi", 1)])
}

fn c7() -> Line {
    reports(&[suite("a2", 2, "bridgeland-derived", 1)])
}

fn c8() -> Line {
    reports(&[suite("a2", 2, "varphi", 1)])
}

fn c9() -> Line {
    reports(&[suite("a1", 2, "backend-oracle", 1), suite("a1", 3, "backend-oracle", 1)])
}

fn c10() -> Line {
    reports(&[suite("a2", 2, "rewrite-sanity", 1), suite("a2", 2, "gradings", 1)])
}

fn c11() -> Line {
    let one = suite("a2", 2, "green", 1);
    let four = suite("a2", 2, "green", 4);
    let same = one.to_json_untimed() == four.to_json_untimed();
    Line { ok: same && one.exit_code() == 0, detail: format!("threads 1 vs 4 reports identical: {same}") }
}

fn main() {
    let criteria: [(&str, u64, fn() -> Line); 11] = [
        ("Green's formula", 60, c1),
        ("bialgebra", 60, c2),
        ("Hopf pairing", 60, c3),
        ("Heisenberg and Drinfeld oracles", 120, c4),
        ("Kashaev embedding", 300, c5),
        ("kappa, kappa-check and psi", 300, c6),
        ("phi and its inverse", 300, c7),
        ("varphi", 300, c8),
        ("A1 backend oracle", 30, c9),
        ("rewrite sanity and gradings", 300, c10),
        ("thread determinism", 600, c11),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let line = run();
        let took = start.elapsed();
        let in_time = took < Duration::from_secs(*limit);
        let ok = line.ok && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({:.1}s, limit {}s) {}",
            k + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit,
            line.detail
        );
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
