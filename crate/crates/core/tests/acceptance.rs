//! Acceptance suite: one pass/fail line per criterion. Runs without the
//! libtest harness so the lines always reach the console.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use padic_regress::dataset::{generate, Dataset, Partition, Split, TargetFamily, TargetSpec};
use padic_regress::embedding::{deinterleave, interleave, PointND};
use padic_regress::mahler::{mahler_coefficients, MahlerSeries};
use padic_regress::model::rational_to_f64;
use padic_regress::padic::{PAdic, PrecisionPolicy};
use padic_regress::training::{
    check_integrality, fit_exact, fit_stochastic, GibbsLattice, TrainerConfig,
};
use rand::Rng;

use common::*;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

// 1. ring axioms, ultrametric inequality and div(mul) against a rational oracle
fn arithmetic_soundness() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (pi, &p) in [2u64, 3, 5, 7].iter().enumerate() {
        let prime = prime(p);
        let pu = prime.get();
        let mut rng = rng(100 + pi as u64);
        for trial in 0..10_000 {
            let draw = |rng: &mut TestRng| {
                let v = rng.gen_range(-3..=3);
                random_nonzero(rng, prime, v, 32)
            };
            let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            let (ra, rb) = (a.representative(), b.representative());
            let mut fail = |what: &str| failures.push(format!("p={p} trial {trial}: {what}"));

            let sum = &a + &b;
            if sum != &b + &a {
                fail("a + b != b + a");
            }
            if !congruent(&sum.representative(), &(&ra + &rb), pu, sum.abs_precision().unwrap()) {
                fail("sum disagrees with oracle");
            }
            let prod = &a * &b;
            if prod != &b * &a {
                fail("a * b != b * a");
            }
            let expected_prec = (a.abs_precision().unwrap() + b.valuation().unwrap())
                .min(b.abs_precision().unwrap() + a.valuation().unwrap());
            if prod.abs_precision() != Some(expected_prec) {
                fail("product precision");
            }
            if !congruent(&prod.representative(), &(&ra * &rb), pu, expected_prec) {
                fail("product disagrees with oracle");
            }
            if !(&(&a + &b) + &c).agrees_with(&(&a + &(&b + &c))) {
                fail("addition not associative");
            }
            if !(&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))) {
                fail("multiplication not associative");
            }
            if !(&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))) {
                fail("distributivity");
            }
            if !(&a + &PAdic::exact_zero(prime)).agrees_with(&a) || !(&a + &(-&a)).is_zero() {
                fail("additive identity or inverse");
            }
            let diff = &a - &b;
            if !congruent(&diff.representative(), &(&ra - &rb), pu, diff.abs_precision().unwrap()) {
                fail("difference disagrees with oracle");
            }

            // ultrametric inequality, equality when the norms differ
            let (na, nb, ns) = (a.norm().value(), b.norm().value(), sum.norm().value());
            let max = if na > nb { na.clone() } else { nb.clone() };
            if ns > max {
                fail("ultrametric inequality");
            }
            if na != nb && ns != max {
                fail("ultrametric equality for distinct norms");
            }

            let quotient = prod.checked_div(&b).unwrap();
            if !quotient.agrees_with(&a) {
                fail("(a * b) / b != a");
            }
            let q = a.checked_div(&b).unwrap();
            if !congruent(&(&q.representative() * &rb), &ra, pu, q.abs_precision().unwrap() + b.valuation().unwrap()) {
                fail("quotient disagrees with oracle");
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && within(elapsed, 10);
    outcome(
        pass,
        format!(
            "4 x 10^4 triples, {} violations, {:.2}s{}",
            failures.len(),
            elapsed.as_secs_f64(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

// 2. coefficients from samples, then evaluation, reproduces f exactly mod p^{M-G}
fn mahler_roundtrip() -> Outcome {
    let start = Instant::now();
    let (m, g) = (32i64, 16i64);
    let policy = PrecisionPolicy::new(m, g).unwrap();
    let mut violations = 0;
    let mut checks = 0;
    for (pi, &p) in [2u64, 3, 5].iter().enumerate() {
        let prime = prime(p);
        let mut rng = rng(200 + pi as u64);
        for _ in 0..100 {
            let degree = rng.gen_range(0..=8usize);
            let coefs: Vec<BigInt> = (0..=degree).map(|_| BigInt::from(rng.gen_range(-50..=50))).collect();
            let f = |x: &BigInt| {
                coefs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
            };
            let samples: Vec<PAdic> = (0..=8)
                .map(|j| {
                    let v: i128 = f(&BigInt::from(j)).try_into().unwrap();
                    PAdic::from_integer_abs(v, prime, m + g)
                })
                .collect();
            let series = mahler_coefficients(&samples).unwrap();
            for _ in 0..50 {
                let x = random_integer(&mut rng, prime, (m + g) as usize);
                let y = series.eval(&x, policy).unwrap();
                let surviving = (m - g) as u32;
                checks += 1;
                let ok = y.abs_precision().unwrap() >= m - g
                    && modulo(&integer_of(&y.truncate(m - g)), prime.get(), surviving)
                        == modulo(&f(&integer_of(&x)), prime.get(), surviving);
                if !ok {
                    violations += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && within(elapsed, 5),
        format!("{checks} evaluations, {violations} mismatches mod p^(M-G), {:.2}s", elapsed.as_secs_f64()),
    )
}

// 3. the tail bound of a truncated series
fn truncation_bound() -> Outcome {
    let policy = PrecisionPolicy::new(32, 16).unwrap();
    let mut rng = rng(300);
    let mut violations = 0;
    for trial in 0..1000 {
        let p = [2u64, 3, 5, 7][trial % 4];
        let prime = prime(p);
        let degree = rng.gen_range(1..=10usize);
        let weights: Vec<PAdic> = (0..=degree)
            .map(|_| {
                let v = rng.gen_range(0..=12);
                random_nonzero(&mut rng, prime, v, 24)
            })
            .collect();
        let series = MahlerSeries::new(prime, weights.clone()).unwrap();
        let cut = rng.gen_range(0..degree);
        let x = random_integer(&mut rng, prime, 48);
        let full = series.eval(&x, policy).unwrap();
        let truncated = series.eval_truncated(&x, cut, policy).unwrap();
        let gap = (&full - &truncated).norm().value();
        let tail = weights[cut + 1..].iter().map(|w| w.norm().value()).max().unwrap();
        if gap > tail {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("1000 evaluations, {violations} violations"))
}

// 4. interleaving is a bijection and brackets distances by the first differing digit
fn embedding_properties() -> Outcome {
    let digits = 12usize;
    let mut roundtrip_failures = 0;
    let mut bracket_failures = 0;
    for (ci, &(p, n)) in [(2u64, 2usize), (3, 3), (5, 2)].iter().enumerate() {
        let prime = prime(p);
        let mut rng = rng(400 + ci as u64);
        let point = |rng: &mut TestRng| {
            PointND::new(prime, (0..n).map(|_| random_integer(rng, prime, digits)).collect()).unwrap()
        };
        for _ in 0..1000 {
            let x = point(&mut rng);
            if deinterleave(&interleave(&x), n).unwrap() != x {
                roundtrip_failures += 1;
            }
        }
        for _ in 0..1000 {
            let x = point(&mut rng);
            // share a random prefix so that j* takes many values
            let keep = rng.gen_range(0..digits);
            let y_coords: Vec<PAdic> = x
                .coords()
                .iter()
                .map(|c| {
                    let mut d: Vec<u32> = (0..digits as i64).map(|j| c.digit(j).unwrap()).collect();
                    for slot in d.iter_mut().skip(keep) {
                        *slot = rng.gen_range(0..prime.get());
                    }
                    PAdic::from_digits(prime, 0, d).unwrap()
                })
                .collect();
            let y = PointND::new(prime, y_coords).unwrap();
            // oracle: first digit index where any coordinate differs
            let j_star = (0..digits as i64).find(|&j| {
                x.coords().iter().zip(y.coords()).any(|(a, b)| a.digit(j) != b.digit(j))
            });
            let Some(j_star) = j_star else { continue };
            let gap = &interleave(&x).representative() - &interleave(&y).representative();
            let v = rational_valuation(&gap, prime.get()).unwrap();
            let n = n as i64;
            if !(n * j_star <= v && v <= n * j_star + n - 1) {
                bracket_failures += 1;
            }
        }
    }
    outcome(
        roundtrip_failures == 0 && bracket_failures == 0,
        format!("3 x 10^3 roundtrips, {roundtrip_failures} failures; 3 x 10^3 pairs, {bracket_failures} bracket violations"),
    )
}

fn planted_weights(rng: &mut TestRng, count: usize) -> Vec<i64> {
    (0..count).map(|_| rng.gen_range(-1000..=1000)).collect()
}

fn distinct_nodes(data: &Dataset) -> bool {
    let z: Vec<PAdic> = data.records().iter().map(|r| interleave(&r.x)).collect();
    (0..z.len()).all(|a| (a + 1..z.len()).all(|b| !z[a].agrees_with(&z[b])))
}

// 5. exact interpolation of planted instances
fn exact_interpolation() -> Outcome {
    let (m, g) = (32i64, 16i64);
    let p = prime(3);
    let bound = pow_rational(3, -(m - g));
    let policy = PrecisionPolicy::new(m, 0).unwrap();
    let mut rng = rng(500);
    let mut failures = 0;
    let mut worst_det = 0;
    for instance in 0..100u64 {
        let n_records = 2 + (instance as usize % 7);
        let weights = planted_weights(&mut rng, n_records);
        let spec = TargetSpec::new(TargetFamily::MahlerWeights(weights.clone()));
        let mut seed = 5000 + instance;
        let data = loop {
            let d = generate(&spec, 2, n_records, p, m, seed).unwrap();
            if distinct_nodes(&d) {
                break d;
            }
            seed += 1000;
        };
        let fit = fit_exact(&data, g).unwrap();
        let exact = fit.exact.as_ref().unwrap();
        worst_det = worst_det.max(exact.det_valuation);
        let residuals_ok = exact.residual_norms.iter().all(|n| n.value() <= bound);
        let weights_ok = fit
            .model
            .weights()
            .weights()
            .iter()
            .zip(&weights)
            .all(|(w, &e)| w.abs_precision().unwrap() >= m - g && w.agrees_with(&PAdic::from_integer(e, p, policy)));
        if !(residuals_ok && weights_ok) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("100 instances, {failures} failures, max v_p(det A) = {worst_det}"),
    )
}

// 6. whenever the integrality check passes, the exact solution lies in Z_p^N
fn integrality_certificate() -> Outcome {
    let p = prime(3);
    let m = 32;
    let mut rng = rng(600);
    let (mut passed, mut sound, mut necessity_counterexamples, mut attempts) = (0, 0, 0, 0);
    while passed < 100 && attempts < 10_000 {
        attempts += 1;
        let n_records = rng.gen_range(2..=6usize);
        let weights = planted_weights(&mut rng, n_records);
        let spec = TargetSpec::new(TargetFamily::MahlerWeights(weights.clone()));
        let mut data = generate(&spec, 2, n_records, p, m, 6000 + attempts).unwrap();
        if !distinct_nodes(&data) {
            continue;
        }
        // perturb every label by a multiple of p^e
        let e = rng.gen_range(0..=12);
        for a in 0..data.len() {
            let bump = random_integer(&mut rng, p, m as usize).shifted(e);
            let y = (&data.records()[a].y + &bump).with_abs_precision(m);
            data.set_label(a, y).unwrap();
        }
        let fit = fit_exact(&data, 16).unwrap();
        let det_norm = &fit.exact.as_ref().unwrap().det_norm;
        let w0: Vec<PAdic> = weights.iter().map(|&w| PAdic::from_integer_abs(w as i128, p, m)).collect();
        if check_integrality(&w0, &data, det_norm).unwrap() {
            passed += 1;
            if fit.is_integral() {
                sound += 1;
            }
        } else if fit.is_integral() {
            necessity_counterexamples += 1;
        }
    }
    outcome(
        passed == 100 && sound == passed,
        format!(
            "{sound}/{passed} certified instances integral ({attempts} drawn; {necessity_counterexamples} integral solutions not certified by the planted w0)"
        ),
    )
}

// 7. exact Gibbs enumeration at p = 2, K + 1 = 2, t = 3
fn supermartingale() -> Outcome {
    let start = Instant::now();
    let p = prime(2);
    let spec = TargetSpec::new(TargetFamily::MahlerWeights(vec![3, 5]));
    let data = generate(&spec, 2, 6, p, 8, 700).unwrap();
    let base = vec![PAdic::zero_at(p, 8); 2];
    let lattice = GibbsLattice::new(&data, &base, 3).unwrap();

    let h = 1e-4;
    let mut worst_fd = 0.0f64;
    let mut worst_closed = 0.0f64;
    for state in 0..lattice.len() {
        for beta in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let step = lattice.step(state, beta);
            let up = lattice.step(state, beta + h).log_normalizer;
            let down = lattice.step(state, beta - h).log_normalizer;
            let fd = (up - down) / (2.0 * h);
            let l = rational_to_f64(&step.loss);
            let scale = step.expectation.abs().max(1e-300);
            worst_fd = worst_fd.max((step.expectation - (l - fd)).abs() / scale);
            worst_closed = worst_closed.max((step.expectation - (l - step.dlog_normalizer)).abs() / scale);
        }
    }

    let sweep: Vec<f64> = (0..=32).map(|i| 10f64.powf(-2.0 + i as f64 * 0.25)).collect();
    let (mut improvable, mut violations) = (0, 0);
    for state in 0..lattice.len() {
        let l = lattice.loss(state).clone();
        if lattice.step(state, 1.0).improving_measure.is_zero() {
            continue;
        }
        improvable += 1;
        let decreases = sweep.iter().any(|&beta| {
            let e = lattice.step(state, beta).expectation;
            e < rational_to_f64(&l)
        });
        if !decreases {
            violations += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_fd <= 1e-6 && worst_closed <= 1e-9 && violations == 0 && within(elapsed, 60);
    outcome(
        pass,
        format!(
            "{} states; finite-difference rel err {worst_fd:.1e}, closed-form rel err {worst_closed:.1e}; {improvable} improvable states, {violations} without a decreasing beta; {:.2}s",
            lattice.len(),
            elapsed.as_secs_f64()
        ),
    )
}

// 8. stochastic trainer on a planted K < N - 1 instance
fn stochastic_regression() -> Outcome {
    let start = Instant::now();
    let p = prime(2);
    let spec = TargetSpec::new(TargetFamily::MahlerWeights(vec![5, 3, 6, 1]));
    let data = generate(&spec, 2, 12, p, 16, 800).unwrap();
    let target = pow_rational(2, -2);
    let (mut reached, mut monotone, mut reproducible) = (0, 0, 0);
    let mut finals = Vec::new();
    for seed in 0..5u64 {
        let cfg = TrainerConfig {
            degree: 3,
            steps: 20_000,
            seed,
            ..TrainerConfig::default()
        };
        let a = fit_stochastic(&data, &cfg).unwrap();
        let b = fit_stochastic(&data, &cfg).unwrap();
        if a.train_loss().value() <= &target {
            reached += 1;
        }
        if a.trajectory.windows(2).all(|w| w[1] <= w[0]) {
            monotone += 1;
        }
        if a == b && a.to_text() == b.to_text() {
            reproducible += 1;
        }
        finals.push(a.train_loss().value().to_string());
    }
    let elapsed = start.elapsed();
    outcome(
        reached >= 4 && monotone == 5 && reproducible == 5 && within(elapsed, 120),
        format!(
            "{reached}/5 seeds reach loss <= 1/4 (final {}), {monotone}/5 monotone, {reproducible}/5 bit-identical, {:.2}s",
            finals.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_padic-regress"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn loss_field(report: &str, partition: &str) -> Option<(String, String)> {
    let line = report.lines().find(|l| l.starts_with(&format!("loss {partition} ")))?;
    let mut fields = line.split_whitespace().skip(2);
    Some((fields.next()?.to_string(), fields.next()?.to_string()))
}

// 9. gen -> fit (exact) -> eval through the binary
fn end_to_end() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (data, model) = (path("data.txt"), path("model.txt"));
    let steps = [
        cli(&["gen", "--p", "3", "--n", "2", "--N", "10", "--M", "32", "--target", "mahler:2,1,0,4", "--train-frac", "1/2", "--seed", "11", "--out", &data]),
        cli(&["fit", "--in", &data, "--mode", "exact", "--out", &model]),
    ];
    if let Some((code, _)) = steps.iter().find(|(c, _)| *c != 0) {
        return outcome(false, format!("pipeline step exited with {code}"));
    }
    let (code, clean) = cli(&["eval", "--model", &model, "--in", &data]);
    let clean_ok = code == 0
        && loss_field(&clean, "train") == Some(("0/1".into(), "bound".into()))
        && loss_field(&clean, "val") == Some(("0/1".into(), "bound".into()));

    let mut dataset = Dataset::from_text(&std::fs::read_to_string(&data).unwrap()).unwrap();
    let n_val = dataset.count(Partition::Validation);
    let a = dataset.records().iter().position(|r| r.split == Split::Validation).unwrap();
    let y = (&dataset.records()[a].y + &PAdic::from_integer_abs(9, prime(3), 32)).with_abs_precision(32);
    dataset.set_label(a, y).unwrap();
    let corrupted = path("corrupted.txt");
    std::fs::write(&corrupted, dataset.to_text()).unwrap();
    let (code, dirty) = cli(&["eval", "--model", &model, "--in", &corrupted]);
    let expected = BigRational::new(BigInt::from(1), BigInt::from(9 * n_val));
    let expected = format!("{}/{}", expected.numer(), expected.denom());
    let dirty_ok = code == 0
        && loss_field(&dirty, "val").map(|(v, _)| v) == Some(expected.clone())
        && loss_field(&dirty, "train") == Some(("0/1".into(), "bound".into()));
    outcome(
        clean_ok && dirty_ok,
        format!(
            "clean: train {:?}, val {:?}; corrupted val {:?} (expected {expected})",
            loss_field(&clean, "train"),
            loss_field(&clean, "val"),
            loss_field(&dirty, "val").map(|(v, _)| v)
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("arithmetic soundness", arithmetic_soundness),
        ("Mahler roundtrip", mahler_roundtrip),
        ("truncation bound", truncation_bound),
        ("embedding bijection and distances", embedding_properties),
        ("exact interpolation", exact_interpolation),
        ("integrality certificate", integrality_certificate),
        ("Gibbs supermartingale", supermartingale),
        ("stochastic trainer", stochastic_regression),
        ("end-to-end CLI", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        if !result.pass {
            failed += 1;
        }
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name}: {}", i + 1, result.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
