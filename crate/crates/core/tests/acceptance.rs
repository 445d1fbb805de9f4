//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero on any unexpected outcome.
//!
//! Oracles are computed here, independently of the library: Chebyshev
//! derivatives by the three-term recurrence, the interval Green function
//! from `acosh`, arc lengths by closed form or Simpson's rule, and exponent
//! fits by explicit normal equations.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use markov_curves::curve::{builtin_germ, chebyshev_interval_points, geodesic_distance, SampleSet, BUILTIN_GERMS};
use markov_curves::green::{bos_disk_bound_check, proposition5_check, siciak_lp, DEFAULT_FACETS};
use markov_curves::markov::{cauchy_derivative_check, markov_factor, scaling_study, MarkovProblem};
use markov_curves::poly::MultiPoly;
use markov_curves::rng::Lcg;
use num_complex::Complex64;

/// Criteria expected to fail; see the decision record. Reported as FAIL,
/// and a pass is itself an unexpected outcome.
const UNATTAINABLE: [u32; 1] = [7];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// `(T_n(x), T_n'(x))` by the three-term recurrence.
fn chebyshev_with_derivative(n: u32, x: f64) -> (f64, f64) {
    let (mut t0, mut t1, mut d0, mut d1) = (1.0, x, 0.0, 1.0);
    if n == 0 {
        return (1.0, 0.0);
    }
    for _ in 1..n {
        let t2 = 2.0 * x * t1 - t0;
        let d2 = 2.0 * t1 + 2.0 * x * d1 - d0;
        (t0, t1, d0, d1) = (t1, t2, d1, d2);
    }
    (t1, d1)
}

/// `log|z + √(z² − 1)|` with the root making the modulus at least 1.
fn green_oracle(z: Complex64) -> f64 {
    let root = (z * z - 1.0).sqrt();
    (z + root).norm().max((z - root).norm()).ln()
}

/// Ordinary least squares `y ≈ X·β` via normal equations (intercept last).
fn ols(columns: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let m = columns.len() + 1;
    let row = |i: usize| -> Vec<f64> {
        let mut r: Vec<f64> = columns.iter().map(|c| c[i]).collect();
        r.push(1.0);
        r
    };
    let mut a = vec![vec![0.0; m + 1]; m];
    for (i, &yi) in y.iter().enumerate() {
        let r = row(i);
        for p in 0..m {
            for q in 0..m {
                a[p][q] += r[p] * r[q];
            }
            a[p][m] += r[p] * yi;
        }
    }
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col] / pivot_row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= f * p;
                }
            }
        }
    }
    (0..m).map(|i| a[i][m] / a[i][i]).collect()
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    ols(&[lx], &ly)[0]
}

fn interval_samples(count: usize) -> SampleSet {
    SampleSet::from_points(chebyshev_interval_points(-1.0, 1.0, count), "interval")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let samples = interval_samples(2001);
    let mut worst = 0.0f64;
    for n in 1..=10 {
        let problem = MarkovProblem::new(samples.clone(), vec![1.0], vec![1.0], n, 1.0).unwrap();
        let factor = markov_factor(&problem).unwrap().factor;
        let (_, oracle) = chebyshev_with_derivative(n, 1.0);
        assert_eq!(oracle, f64::from(n * n), "recurrence oracle");
        worst = worst.max((factor - oracle).abs() / oracle);
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 0.01 && elapsed <= Duration::from_secs(30),
        format!(
            "max |M - T_n'(1)|/T_n'(1) = {worst:.2e} (<= 1e-2), {:.1} s (<= 30 s)",
            elapsed.as_secs_f64()
        ),
    )
}

/// Refits the scan independently and checks every fitted cell against
/// `oracle(n, ε)` when one is given.
fn scan(id: &str, degrees: &[u32], oracle: Option<fn(u32, f64) -> f64>) -> (f64, f64, f64) {
    let germ = builtin_germ(id).unwrap();
    let study = scaling_study(&germ, degrees, &[1.0, 0.5, 0.25, 0.125], 200).unwrap();
    let used: Vec<_> = study.cells.iter().filter(|c| c.epsilon < 1.0).collect();
    let log_n: Vec<f64> = used.iter().map(|c| f64::from(c.degree).ln()).collect();
    let log_inv_eps: Vec<f64> = used.iter().map(|c| -c.epsilon.ln()).collect();
    let log_m: Vec<f64> = used.iter().map(|c| c.factor.ln()).collect();
    let beta = ols(&[log_n, log_inv_eps], &log_m);
    assert!(
        (beta[0] - study.fit.alpha_deg).abs() < 1e-9,
        "library fit disagrees with refit"
    );
    let mut worst = 0.0f64;
    if let Some(oracle) = oracle {
        for c in &study.cells {
            let expected = oracle(c.degree, c.epsilon);
            worst = worst.max((c.factor - expected).abs() / expected);
        }
    }
    (beta[0], beta[1], worst)
}

fn criterion_2() -> Outcome {
    // |T_n'(0)| = n for odd n, scaled by 1/ε on [−ε, ε].
    let (alpha_deg, _, worst) = scan(
        "interval_interior",
        &[3, 5, 7, 9, 11, 13],
        Some(|n, e| f64::from(n) / e),
    );
    outcome(
        (0.9..=1.1).contains(&alpha_deg) && worst <= 0.01,
        format!("alpha_deg = {alpha_deg:.4} in [0.9, 1.1]; cells vs n/eps max rel err {worst:.1e}"),
    )
}

fn criterion_3() -> Outcome {
    // Endpoint of [0, ε]: d/dx T_n(2x/ε − 1) at 0 is 2n²/ε in modulus.
    let (alpha_deg, _, worst) = scan(
        "interval_boundary",
        &[2, 3, 4, 6, 8, 12],
        Some(|n, e| 2.0 * f64::from(n * n) / e),
    );
    outcome(
        (1.9..=2.1).contains(&alpha_deg) && worst <= 0.01,
        format!("alpha_deg = {alpha_deg:.4} in [1.9, 2.1]; cells vs 2n^2/eps max rel err {worst:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let germ = builtin_germ("cusp_2_3").unwrap();
    let multiplicity = germ.branch().multiplicity().unwrap();
    // Independent estimate: ‖φ(t)‖ ~ t^k as t → 0.
    let t: Vec<f64> = (10..=16).map(|m| 0.5f64.powi(m)).collect();
    let norms: Vec<f64> = t
        .iter()
        .map(|&s| {
            germ.point_at(Complex64::new(s, 0.0))
                .unwrap()
                .iter()
                .map(|c| c.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let order = slope(&t, &norms);
    let (alpha_deg, alpha_eps, _) = scan("cusp_2_3", &[2, 3, 4, 6, 8, 12], None);
    outcome(
        multiplicity == 2 && (order - 2.0).abs() < 1e-3 && (2.0..=4.2).contains(&alpha_deg) && alpha_eps <= 2.3,
        format!(
            "multiplicity {multiplicity} (vanishing order {order:.4}); alpha_deg = {alpha_deg:.4} in [2.0, 4.2]; alpha_eps = {alpha_eps:.4} <= 2.3"
        ),
    )
}

fn criterion_5() -> Outcome {
    let deltas: Vec<f64> = (0..13).map(|i| 1e-1 * 10f64.powf(-0.25 * f64::from(i))).collect();
    let values: Vec<f64> = deltas.iter().map(|&d| (1.0 + d).acosh()).collect();
    let library = markov_curves::hcp::hcp_fit(&deltas, markov_curves::hcp::interval_endpoint_probe).unwrap();
    let alpha = slope(&deltas, &values);
    outcome(
        (library.alpha - 0.5).abs() <= 0.03 && (library.alpha - alpha).abs() < 1e-9,
        format!(
            "alpha = {:.4} (oracle refit {alpha:.4}), target 0.50 +- 0.03",
            library.alpha
        ),
    )
}

/// Arc length of `s ↦ (s^p, s^q)` on `[0, t]` by composite Simpson.
fn arc_length(p: i32, q: i32, t: f64) -> f64 {
    let speed = |s: f64| {
        let a = f64::from(p) * s.powi(p - 1);
        let b = f64::from(q) * s.powi(q - 1);
        (a * a + b * b).sqrt()
    };
    let n = 2000;
    let h = t / f64::from(n);
    let mut sum = speed(0.0) + speed(t);
    for i in 1..n {
        sum += speed(h * f64::from(i)) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

fn criterion_6() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (id, p, q) in [("cusp_2_3", 2, 3), ("cusp_3_4", 3, 4)] {
        let germ = builtin_germ(id).unwrap();
        let radii: Vec<f64> = (3..=10).map(|m| 0.5f64.powi(m)).collect();
        let mut distances = Vec::new();
        let mut oracle_error = 0.0f64;
        for &r in &radii {
            let d = geodesic_distance(germ.branch(), Complex64::new(0.0, 0.0), Complex64::new(r, 0.0)).unwrap();
            oracle_error = oracle_error.max((d - arc_length(p, q, r)).abs() / d);
            distances.push(d);
        }
        if p == 2 {
            // ∫₀ᵗ s√(4 + 9s²) ds
            let closed = |t: f64| ((4.0 + 9.0 * t * t).powf(1.5) - 8.0) / 27.0;
            for (&r, &d) in radii.iter().zip(&distances) {
                oracle_error = oracle_error.max((d - closed(r)).abs() / d);
            }
        }
        let k = f64::from(p);
        let s = slope(&radii, &distances);
        passed &= (s - k).abs() <= 0.05 && oracle_error < 1e-8;
        parts.push(format!(
            "{id}: slope {s:.4} (k = {p} +- 0.05), arc length rel err {oracle_error:.1e}"
        ));
    }
    outcome(passed, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let points = chebyshev_interval_points(-1.0, 1.0, 2001);
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for z in [
        Complex64::new(2.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(-3.0, 0.0),
    ] {
        let evaluation = siciak_lp(&points, &[z], 16, DEFAULT_FACETS).unwrap();
        let exact = green_oracle(z);
        // (1/16)·log|T_16(z)| with w = z + √(z²−1): the degree-16 extremal
        // value for real z outside [−1, 1], a feasible lower bound otherwise.
        let root = (z * z - 1.0).sqrt();
        let w = if (z + root).norm() >= 1.0 { z + root } else { z - root };
        let chebyshev = (w.powu(16) + w.powu(16).inv()).norm().ln() / 16.0 - 2f64.ln() / 16.0;
        let tolerance = evaluation.relaxation_slack + 1e-6;
        if z.im == 0.0 {
            assert!(
                (evaluation.value - chebyshev).abs() <= tolerance,
                "LP {} departs from the degree-16 Chebyshev value {chebyshev}",
                evaluation.value
            );
        } else {
            assert!(evaluation.value >= chebyshev - tolerance, "LP below the T_16 value");
        }
        let error = (evaluation.value - exact).abs();
        worst = worst.max(error);
        parts.push(format!("z={z}: |V16 - V| = {error:.4}"));
    }
    outcome(worst <= 0.02, format!("{} (<= 0.02)", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let seed = 1u64;
    // Bernstein–Walsh, evaluated here from the polynomial terms.
    let samples: Vec<f64> = chebyshev_interval_points(-1.0, 1.0, 2001)
        .iter()
        .map(|p| p[0].re)
        .collect();
    let mut rng = Lcg::new(seed);
    let mut bw = 0;
    let growth = green_oracle(Complex64::new(1.5, 0.0));
    for _ in 0..100 {
        let p = MultiPoly::random(1, 10, &mut rng);
        let eval = |x: f64| -> f64 { p.terms().iter().map(|(e, c)| c * x.powi(e[0] as i32)).sum() };
        let sup = samples.iter().map(|&x| eval(x).abs()).fold(0.0, f64::max);
        let bound = sup * (f64::from(p.degree()) * growth).exp();
        bw += usize::from(eval(1.5).abs() > bound * (1.0 + 1e-9));
    }
    // Bos: closed-form Green of [−ε, ε] on a polar grid, and the library check.
    let mut bos = 0;
    for (b, r, eps) in [(0.0, 0.5, 1.0), (0.9, 0.05, 1.0), (0.5, 0.25, 1.0)] {
        let c = f64::max(1.0, 2.0 / (eps - f64::abs(b)));
        let mut sup = 0.0f64;
        for i in 1..=32 {
            for j in 0..256 {
                let w = Complex64::new(b, 0.0)
                    + Complex64::from_polar(r * f64::from(i) / 32.0, 2.0 * PI * f64::from(j) / 256.0);
                sup = sup.max(green_oracle(w / eps));
            }
        }
        let report = bos_disk_bound_check(Complex64::new(b, 0.0), r, eps, 32).unwrap();
        bos += usize::from(sup > c * r.ln_1p() || !report.holds);
    }
    // Norm lower bound: infimum of ‖φ(z)‖/|z|^k on the punctured disk of radius 1/2.
    let mut norm = 0;
    for id in BUILTIN_GERMS {
        let germ = builtin_germ(id).unwrap();
        let k = germ.branch().k() as i32;
        let mut inf = f64::INFINITY;
        for i in 1..=64 {
            let r = 0.5 * f64::from(i) / 64.0;
            for j in 0..64 {
                let z = Complex64::from_polar(r, 2.0 * PI * f64::from(j) / 64.0);
                let image = germ.branch().eval(z).unwrap();
                inf = inf.min(image.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() / r.powi(k));
            }
        }
        let report = markov_curves::curve::norm_lower_bound_check(germ.branch(), 0.5, 8).unwrap();
        norm += usize::from(inf <= 0.5 || report.violations > 0);
    }
    // Cauchy: library check per polynomial; the left side is cross-checked by
    // central differences along the tangent.
    let mut cauchy = 0;
    for (i, id) in ["cusp_2_3", "cusp_2_5", "cusp_3_4"].iter().enumerate() {
        let germ = builtin_germ(id).unwrap();
        let mut rng = Lcg::new(seed.wrapping_add(1 + i as u64));
        for _ in 0..50 {
            let p = MultiPoly::random(2, 8, &mut rng);
            let report = cauchy_derivative_check(&germ, &p, 0.25, 256).unwrap();
            let v = germ.tangent_vector();
            let h = 1e-5;
            let fd = (p.eval_real(&[h * v[0], h * v[1]]) - p.eval_real(&[-h * v[0], -h * v[1]])) / (2.0 * h);
            assert!(
                (fd.abs() - report.lhs).abs() <= 1e-6 * (1.0 + report.lhs),
                "Cauchy left side"
            );
            cauchy += usize::from(!report.holds);
        }
    }
    outcome(
        bw + bos + norm + cauchy == 0,
        format!("violations: bernstein_walsh {bw}/100, bos {bos}/3, norm_lower_bound {norm}/6, cauchy {cauchy}/150"),
    )
}

fn criterion_9() -> Outcome {
    let germ = builtin_germ("cusp_2_3").unwrap();
    let low = proposition5_check(&germ, 0.25, 8, 6, 100).unwrap();
    let high = proposition5_check(&germ, 0.25, 12, 6, 100).unwrap();
    let change = (high.max_ratio - low.max_ratio).abs() / low.max_ratio;
    outcome(
        low.max_ratio.is_finite() && high.max_ratio.is_finite() && change <= 0.10,
        format!(
            "max ratio {:.4} (degree 8), {:.4} (degree 12), change {:.2}% (<= 10%)",
            low.max_ratio,
            high.max_ratio,
            100.0 * change
        ),
    )
}

fn criterion_10() -> Outcome {
    let binary = env!("CARGO_BIN_EXE_markov-curves");
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    let mut slowest = Duration::ZERO;
    for run in ["first", "second"] {
        let out = dir.path().join(run);
        let start = Instant::now();
        let status = Command::new(binary)
            .args(["verify", "--out-dir"])
            .arg(&out)
            .status()
            .expect("run verify");
        slowest = slowest.max(start.elapsed());
        // Exit 1 reflects the unattainable criteria, 0 would mean none fail.
        assert!(matches!(status.code(), Some(0 | 1)), "verify exited with {status}");
        let read = |f: &str| std::fs::read(out.join(f)).unwrap();
        outputs.push((read("verify_raw.csv"), read("verify_fit.csv")));
    }
    let identical = outputs[0] == outputs[1];
    outcome(
        identical && slowest < Duration::from_secs(300),
        format!(
            "two verify runs byte-identical: {identical}; slowest {:.1} s (< 300 s)",
            slowest.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "interval endpoint Markov factor", criterion_1),
        (2, "interior degree exponent", criterion_2),
        (3, "boundary degree exponent", criterion_3),
        (4, "cusp (2,3) multiplicity and exponents", criterion_4),
        (5, "interval HCP exponent", criterion_5),
        (6, "geodesic exponent", criterion_6),
        (7, "Siciak LP convergence at degree 16", criterion_7),
        (8, "zero-violation suites", criterion_8),
        (9, "trace-to-star Green ratio stability", criterion_9),
        (10, "verify runtime and reproducibility", criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        let result = run();
        let verdict = if result.passed { "PASS" } else { "FAIL" };
        let expected_fail = UNATTAINABLE.contains(&id);
        let note = if expected_fail { " [known unattainable]" } else { "" };
        println!("{verdict} criterion {id:>2} ({title}): {}{note}", result.detail);
        if result.passed == expected_fail {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all outcomes as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
