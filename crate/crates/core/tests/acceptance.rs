//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use tempent::axioms::{self, sample_simplex};
use tempent::entropy::{entropy, shannon_entropy, EntropyParams, ProbDist};
use tempent::fracderiv::{self, laplace_singular_quad};
use tempent::lesche::{self, Family, StructuredPair};

const DELTA: f64 = 1e-3;
const GRID_FROM_100: [usize; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn params(sigma: f64, lambda: f64) -> EntropyParams {
    EntropyParams::new(sigma, lambda).unwrap()
}

/// 1000 seeded draws with n cycling through 2..=20.
fn shared_samples() -> Vec<ProbDist> {
    (0..1000)
        .map(|i| {
            let n = 2 + i % 19;
            sample_simplex(n, 1, 1000 + i as u64).unwrap().remove(0)
        })
        .collect()
}

fn ac1_shannon_collapse() -> Verdict {
    let samples = shared_samples();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for lambda in [0.0, 0.5, 1.0, 10.0] {
        let pr = params(1.0, lambda);
        for p in &samples {
            let h = shannon_entropy(p).get();
            let gap = (entropy(p, &pr).get() - h).abs() / h.max(1.0);
            worst = worst.max(gap);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!(
            "max scaled gap {worst:.3e} (tol 1e-12), {} ms (limit 1000)",
            elapsed.as_millis()
        ),
    )
}

fn ac2_ubriaco_alias() -> Verdict {
    let samples = shared_samples();
    let mut worst: f64 = 0.0;
    for alpha in [0.1, 0.25, 0.5, 0.75, 1.0] {
        let pr = params(alpha, 0.0);
        for p in &samples {
            // direct formula written out here, independent of the library alias
            let direct: f64 = p
                .weights()
                .iter()
                .filter(|&&w| w > 0.0)
                .map(|&w| w * (-w.ln()).powf(alpha))
                .sum();
            worst = worst.max((entropy(p, &pr).get() - direct).abs());
        }
    }
    verdict(
        worst <= 1e-15,
        format!("max |difference| {worst:.3e} (tol 1e-15)"),
    )
}

fn ac3_axiom_suite() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst_max: f64 = f64::NEG_INFINITY;
    let mut worst_conc: f64 = f64::NEG_INFINITY;
    let mut configs = 0;
    for sigma in [0.25, 0.5, 0.75, 1.0] {
        for lambda in [0.0, 1.0, 5.0] {
            let pr = params(sigma, lambda);
            let conc = axioms::check_generator_concavity(&pr, 199).unwrap();
            worst_conc = worst_conc.max(conc.worst_violation);
            if !conc.passed() {
                failures.push(format!("concavity s={sigma} l={lambda}"));
            }
            for n in [2, 3, 5, 10] {
                configs += 1;
                let seed = 7 + n as u64;
                let reports = [
                    axioms::check_nonnegativity(n, &pr, 10_000, seed).unwrap(),
                    axioms::check_maximality(n, &pr, 10_000, seed).unwrap(),
                    axioms::check_expansibility_sampled(n, &pr, 10_000, seed).unwrap(),
                ];
                worst_max = worst_max.max(reports[1].worst_violation);
                for r in &reports {
                    if !r.passed() {
                        failures.push(format!("{} n={n} s={sigma} l={lambda}", r.axiom));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures.is_empty() && elapsed < Duration::from_secs(30),
        format!(
            "{configs} configs x 1e4 samples; worst maximality {worst_max:.3e} (tol 1e-9), worst f'' {worst_conc:.3e} (tol 1e-6), {} ms (limit 30000){}",
            elapsed.as_millis(),
            if failures.is_empty() { String::new() } else { format!("; failed: {failures:?}") }
        ),
    )
}

fn ac4_lambda_inequality() -> Verdict {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut ok = true;
    for sigma in [0.25, 0.5, 0.75, 1.0] {
        for lambda in [0.5, 1.0, 5.0, 10.0] {
            let r = axioms::check_lambda_inequality_sampled(5, &params(sigma, lambda), 10_000, 99)
                .unwrap();
            worst = worst.max(r.worst_violation);
            ok &= r.worst_violation <= 1e-12;
        }
    }
    verdict(
        ok,
        format!("worst S_l - S_0 = {worst:.3e} over 16 x 1e4 samples (tol 1e-12)"),
    )
}

fn ac5_fractional_closure() -> Verdict {
    let start = Instant::now();
    let rows = fracderiv::verify_grid(
        &fracderiv::tenths(),
        &fracderiv::tenths(),
        &fracderiv::LAMBDA_GRID,
        &[-1.0],
        fracderiv::DEFAULT_QUAD_TOL,
    )
    .unwrap();
    let elapsed = start.elapsed();
    let bad = rows.iter().filter(|r| !r.within(1e-6, 1e-9)).count();
    let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    verdict(
        bad == 0 && rows.len() == 324 && elapsed < Duration::from_secs(60),
        format!(
            "{} grid points, {bad} outside max(1e-6 rel, 1e-9 abs), worst rel err {worst:.3e}, {} ms (limit 60000)",
            rows.len(),
            elapsed.as_millis()
        ),
    )
}

fn ac6_quadrature_identity() -> Verdict {
    let mut worst: f64 = 0.0;
    for c in [0.1, 1.0, 2.0, 10.0, 50.0] {
        for sigma in [0.05, 0.25, 0.5, 0.75, 0.95] {
            let q = laplace_singular_quad(c, sigma, 1e-10).unwrap();
            // independent gamma implementation as the reference
            let exact = statrs::function::gamma::gamma(1.0 - sigma) * c.powf(sigma - 1.0);
            worst = worst.max((q.value / exact - 1.0).abs());
        }
    }
    verdict(
        worst <= 1e-8,
        format!("max relative error {worst:.3e} (tol 1e-8)"),
    )
}

fn ac7_stability_evidence() -> Verdict {
    let mut failures = Vec::new();
    let mut worst_end: f64 = 0.0;
    let mut worst_xcheck: f64 = 0.0;
    for family in [Family::CertaintyA, Family::UniformB] {
        for sigma in [0.25, 0.5, 0.75] {
            for lambda in [0.0, 1.0, 5.0] {
                let pr = params(sigma, lambda);
                let recs = lesche::sweep(&[family], &GRID_FROM_100, DELTA, &pr, None).unwrap();
                let ratios: Vec<f64> = recs.iter().map(|r| r.ratio).collect();
                let end = *ratios.last().unwrap();
                worst_end = worst_end.max(end);
                if end >= 0.05 {
                    failures.push(format!(
                        "{} s={sigma} l={lambda}: ratio(1e6)={end:.3e}",
                        family.label()
                    ));
                }
                if let Some(w) = ratios.windows(2).position(|w| w[1] > w[0]) {
                    failures.push(format!(
                        "{} s={sigma} l={lambda}: increases {:.3e} -> {:.3e} at n={}",
                        family.label(),
                        ratios[w],
                        ratios[w + 1],
                        GRID_FROM_100[w + 1]
                    ));
                }
                for n in [100, 1_000, 10_000] {
                    let sp = StructuredPair::new(family, n, DELTA).unwrap();
                    let a = lesche::structured_ratio(&sp, &pr).unwrap().ratio;
                    let b = lesche::stability_ratio(&sp.expand().unwrap(), &pr)
                        .unwrap()
                        .ratio;
                    worst_xcheck = worst_xcheck.max((a - b).abs());
                }
            }
        }
    }
    if worst_xcheck > 1e-12 {
        failures.push(format!(
            "aggregated vs vector path differ by {worst_xcheck:.3e}"
        ));
    }
    verdict(
        failures.is_empty(),
        format!(
            "max ratio(1e6) {worst_end:.3e} (limit < 0.05), path cross-check {worst_xcheck:.1e} (tol 1e-12){}",
            if failures.is_empty() { String::new() } else { format!("; violations: {}", failures.join(" | ")) }
        ),
    )
}

fn ac8_instability_control() -> Verdict {
    let pr = params(0.5, 0.0);
    let grid = [10, 100, 1_000, 10_000, 100_000, 1_000_000];
    let recs = lesche::sweep(&[Family::CertaintyA], &grid, DELTA, &pr, Some(0.5)).unwrap();
    let control: Vec<f64> = recs
        .iter()
        .filter(|r| r.renyi_q.is_some())
        .map(|r| r.ratio)
        .collect();
    let end = *control.last().unwrap();
    let increasing = control.windows(2).all(|w| w[1] > w[0]);
    let n = 1e6_f64;
    let oracle = 2.0 * (1.0 + (DELTA * (n - 1.0) / 2.0).sqrt()).ln() / n.ln();

    let b = lesche::sweep(&[Family::UniformB], &grid, DELTA, &pr, Some(0.5)).unwrap();
    let b_end = b.last().unwrap().ratio;
    verdict(
        end > 0.4 && increasing && (end - 0.45).abs() <= 0.02,
        format!(
            "family A Renyi(0.5) ratio(1e6) {end:.4} (> 0.4; oracle {oracle:.4}), increasing: {increasing}; [info, not gated] family B Renyi ratio(1e6) {b_end:.3e}"
        ),
    )
}

fn ac9_cli_determinism() -> Verdict {
    let exe = env!("CARGO_BIN_EXE_tempent");
    let commands: [&[&str]; 5] = [
        &[
            "entropy", "--sigma", "0.5", "--lambda", "0", "--dist", "0.5,0.5",
        ],
        &[
            "check-axioms",
            "--sigma",
            "0.5",
            "--lambda",
            "1",
            "--n",
            "3,5",
            "--samples",
            "500",
            "--seed",
            "3",
        ],
        &[
            "sweep",
            "--family",
            "A,B",
            "--sigma",
            "0.5",
            "--lambda",
            "1",
            "--delta",
            "1e-3",
            "--n",
            "10,100,1000",
            "--control-renyi",
            "0.5",
        ],
        &[
            "search",
            "--n",
            "6",
            "--delta",
            "0.1",
            "--sigma",
            "0.5",
            "--lambda",
            "1",
            "--samples",
            "2000",
            "--seed",
            "11",
        ],
        &["verify-frac", "--sigma", "0.3"],
    ];
    let mut failures = Vec::new();
    for args in commands {
        let first = Command::new(exe).args(args).output().unwrap();
        let second = Command::new(exe).args(args).output().unwrap();
        let same = first.stdout == second.stdout && !first.stdout.is_empty();
        if !same || !first.status.success() || !second.status.success() {
            failures.push(args[0]);
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "5 subcommands run twice{}",
            if failures.is_empty() {
                ", byte-identical".to_string()
            } else {
                format!("; mismatched or failed: {failures:?}")
            }
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("AC1 Shannon collapse", ac1_shannon_collapse),
        ("AC2 untempered alias", ac2_ubriaco_alias),
        ("AC3 axiom suite", ac3_axiom_suite),
        ("AC4 lambda inequality", ac4_lambda_inequality),
        ("AC5 fractional-derivative closure", ac5_fractional_closure),
        ("AC6 quadrature identity", ac6_quadrature_identity),
        ("AC7 stability evidence", ac7_stability_evidence),
        ("AC8 instability control", ac8_instability_control),
        ("AC9 CLI determinism", ac9_cli_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "[{}] {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
