//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion does.

use std::io::Write;
use std::time::{Duration, Instant};

use padic_kernel::suites::{run_suite, Suite, SuiteConfig, SuiteOutcome};
use padic_kernel::Place;

const SEED: u64 = 20_241_015;

struct Criterion {
    id: u32,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn judge(
    id: u32,
    name: &'static str,
    limit: Duration,
    min_checks: usize,
    run: impl FnOnce() -> SuiteOutcome,
) -> Criterion {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let failed: Vec<_> = out.failures().collect();
    let mut problems = Vec::new();
    if !failed.is_empty() {
        problems.push(format!(
            "{} failing checks, first: {}",
            failed.len(),
            serde_json::to_string(failed[0]).unwrap()
        ));
    }
    if out.reports.len() < min_checks {
        problems.push(format!(
            "only {} checks, need {min_checks}",
            out.reports.len()
        ));
    }
    if elapsed >= limit {
        problems.push(format!("took {elapsed:.2?}, limit {limit:?}"));
    }
    Criterion {
        id,
        name,
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            format!(
                "{} checks in {elapsed:.2?} (limit {limit:?})",
                out.reports.len()
            )
        } else {
            problems.join("; ")
        },
    }
}

fn cfg(count: usize, places: Option<Vec<Place>>) -> SuiteConfig {
    SuiteConfig {
        seed: SEED,
        count: Some(count),
        places,
        ..Default::default()
    }
}

fn merge(a: SuiteOutcome, b: SuiteOutcome) -> SuiteOutcome {
    let mut a = a;
    a.reports.extend(b.reports);
    a.budget_exhausted |= b.budget_exhausted;
    a
}

fn primes(ps: &[u64]) -> Option<Vec<Place>> {
    Some(ps.iter().map(|&p| Place::Prime(p)).collect())
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let all_places = {
        let mut v = primes(&[2, 3, 5, 7]).unwrap();
        v.push(Place::Infinity);
        v
    };
    let lambda_places = {
        let mut v = primes(&[2, 3, 5, 7, 13]).unwrap();
        v.push(Place::Infinity);
        v
    };

    let mut results = vec![
        judge(1, "lambda identities", secs(5), 6 * 1000, || {
            run_suite(Suite::Lambda, &cfg(1000, Some(lambda_places)))
        }),
        judge(2, "gauss closed form vs brute force", secs(60), 200, || {
            run_suite(Suite::Gauss, &cfg(2, primes(&[2, 3, 5, 7])))
        }),
        judge(3, "group property", secs(30), 100 * 2 * 5, || {
            run_suite(Suite::Group, &cfg(100, Some(all_places.clone())))
        }),
        judge(
            4,
            "normalization modulus and u, v",
            secs(10),
            2 * 50,
            || {
                merge(
                    run_suite(Suite::Norms, &cfg(50, Some(all_places.clone()))),
                    run_suite(Suite::Uv, &cfg(50, Some(all_places.clone()))),
                )
            },
        ),
        judge(5, "time slicing", secs(10), 6, || {
            run_suite(Suite::Slice, &cfg(5, Some(all_places.clone())))
        }),
        judge(6, "off-diagonal unitarity", secs(60), 50, || {
            run_suite(Suite::Unitarity, &cfg(25, primes(&[3, 5])))
        }),
        judge(7, "delta limit", secs(60), 3, || {
            run_suite(Suite::Delta, &cfg(1, primes(&[3])))
        }),
        judge(8, "real place vs textbook kernel", secs(1), 50, || {
            run_suite(Suite::Archimedean, &cfg(50, None))
        }),
    ];
    results.sort_by_key(|c| c.id);
    // written to the stdout handle directly so the lines survive test capture
    let mut out = std::io::stdout().lock();
    for c in &results {
        let status = if c.ok { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "criterion {} {}: {status} ({})",
            c.id, c.name, c.detail
        )
        .unwrap();
    }
    drop(out);
    assert!(
        results.iter().all(|c| c.ok),
        "some acceptance criteria failed"
    );
}
