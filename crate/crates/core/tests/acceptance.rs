//! Runs every acceptance criterion at its exact threshold and prints one line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use conforma::report::Report;
use conforma::suites::{
    annihilation_report, axiom_suite, classify_suite, derivations_suite, gc_suite, hv_specializations, modules_suite,
    nilpotent_suite, ClassifyConfig, DerivationConfig, NilpotentConfig,
};
use conforma::{Exec, Result};

const SEED: u64 = 7;

type Suite = Box<dyn Fn() -> Result<Report>>;

fn suites() -> Vec<(&'static str, Suite)> {
    let exec = Exec::default();
    vec![
        ("axioms: standard examples and symbolic HV(alpha,beta), grades [-1, 8]", Box::new(move || Ok(axiom_suite(8, exec)))),
        ("gc_N: N in {1, 2}, x-degrees <= 4", Box::new(move || gc_suite(&[1, 2], 4, exec))),
        ("annihilation: mode bracket matches closed form, modes <= 5, grades [-1, 5]", Box::new(move || annihilation_report(5, 5, false, exec))),
        ("modules: rank-one families, degree 3, window 5, 3 specializations", Box::new(move || modules_suite(&hv_specializations(SEED, 3), 3, 5, exec))),
        (
            "derivations: inner on shifts [-1, 4], window 6, degree 4, stable at 8, skipped < 20%",
            Box::new(move || {
                derivations_suite(
                    &DerivationConfig {
                        specializations: hv_specializations(SEED, 3),
                        shifts: (-1, 4),
                        window: 6,
                        growth_window: Some(8),
                        degree: 4,
                        max_skipped: 0.2,
                        inner_samples: 5,
                        outer_bound: Some(6),
                        seed: SEED,
                    },
                    exec,
                )
            }),
        ),
        (
            "classification: forward window 6, inverse window 4 degree 2 at 3 specializations",
            Box::new(move || {
                classify_suite(
                    &ClassifyConfig {
                        window: 4,
                        degree: 2,
                        forward_window: 6,
                        specializations: 3,
                        drop_nonvanishing: true,
                        replay_window: 6,
                        seed: SEED,
                    },
                    exec,
                )
            }),
        ),
        (
            "nilpotency: 10 + 10 random elements and L, window 6, bound 12",
            Box::new(move || nilpotent_suite(&NilpotentConfig { count: 10, degree: 3, level: 6, bound: 12, top: 3, seed: SEED }, exec)),
        ),
    ]
}

fn line(n: usize, ok: bool, what: &str, elapsed: Duration, extra: &str) {
    println!("criterion {n}: {} {what} ({:.1}s){extra}", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
}

fn main() -> ExitCode {
    let mut all = true;
    let mut stable = true;
    let mut rerun = Duration::ZERO;
    for (k, (what, run)) in suites().into_iter().enumerate() {
        let t = Instant::now();
        let first = run();
        let elapsed = t.elapsed();
        let t2 = Instant::now();
        let second = run();
        rerun += t2.elapsed();
        match (first, second) {
            (Ok(a), Ok(b)) => {
                let ok = a.passed() && (k != 0 || elapsed < Duration::from_secs(60));
                all &= ok;
                stable &= serde_json::to_vec(&a.to_stable_json()).ok() == serde_json::to_vec(&b.to_stable_json()).ok();
                let extra = if ok {
                    format!(" [{} checks]", a.checks.len())
                } else {
                    format!("\n{}", a.to_text())
                };
                line(k + 1, ok, what, elapsed, &extra);
            }
            (Err(e), _) | (_, Err(e)) => {
                all = false;
                stable = false;
                line(k + 1, false, what, elapsed, &format!(" error: {e}"));
            }
        }
    }
    all &= stable;
    line(8, stable, "determinism: identical configs give byte-identical JSON reports", rerun, "");
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
