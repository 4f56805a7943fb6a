//! The acceptance checklist: every numbered criterion as a runnable check
//! returning a structured report, shared by the `verify` CLI subcommand and
//! the integration test suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bands::{gd_determinant, sweep_bands};
use crate::gauss::{decay_fit, gamma_bound, gauss_partial_sum, is_prime, log_diagonal_product};
use crate::params::{validate_resonance, ResonanceParams};
use crate::perturb::{alpha_exponent, path_sum_coefficient, scaling_fit};

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {:2} [{}] {} ({:.2}s){}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.seconds,
            if self.passed || self.details.is_empty() {
                String::new()
            } else {
                format!("\n    {}", self.details.replace('\n', "\n    "))
            }
        )
    }
}

pub const CRITERION_COUNT: usize = 11;

pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERION_COUNT).map(run_criterion).collect()
}

pub fn run_criterion(id: usize) -> CriterionReport {
    let t0 = std::time::Instant::now();
    let (name, result) = match id {
        1 => ("anti-resonance flatness", anti_resonance_flatness()),
        2 => ("order-1 band closed form", order_one_band()),
        3 => ("no flat band, q <= 12", theorem_one_sweep()),
        4 => ("leading-block determinant", determinant_criterion()),
        5 => ("bandwidth exponent law", exponent_law()),
        6 => ("coefficient cross-validation", coefficient_cross_validation()),
        7 => ("dp equals enumeration", dp_equals_enumeration()),
        8 => ("gauss partial sums", gauss_sums()),
        9 => ("gamma optimization", gamma_value()),
        10 => ("direct-integral oracle", decomposition_oracle()),
        11 => ("coefficient decay trend", decay_trend()),
        _ => panic!("criterion id out of range: {id}"),
    };
    let (passed, details) = result;
    CriterionReport {
        id,
        name,
        passed,
        details,
        seconds: t0.elapsed().as_secs_f64(),
    }
}

fn check(cond: bool, failures: &mut Vec<String>, msg: impl FnOnce() -> String) {
    if !cond {
        failures.push(msg());
    }
}

fn finish(failures: Vec<String>, ok_details: String) -> (bool, String) {
    if failures.is_empty() {
        (true, ok_details)
    } else {
        (false, failures.join("\n"))
    }
}

/// Primitive (p, q) pairs with β fixed by ν = 0.
fn primitive_cases(q_max: u64) -> Vec<ResonanceParams> {
    let mut out = Vec::new();
    for q in 1..=q_max {
        for p in 1..=q {
            if num_gcd(p, q) == 1 {
                let beta = (q as f64 / 2.0).rem_euclid(1.0);
                out.push(validate_resonance(p, q, beta, 0).expect("nu=0 beta is admissible"));
            }
        }
    }
    out
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn anti_resonance_flatness() -> (bool, String) {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for mu in [0.5, 1.0, 2.0] {
        let p = validate_resonance(2, 2, 0.0, 0)
            .unwrap()
            .with_mu(mu)
            .unwrap();
        match sweep_bands(&p, 256) {
            Ok(b) => {
                for (i, w) in b.widths.iter().enumerate() {
                    worst = worst.max(*w);
                    check(*w < 1e-12, &mut failures, || {
                        format!("mu={mu}: band {} width {w:e} >= 1e-12", i + 1)
                    });
                }
            }
            Err(e) => failures.push(format!("mu={mu}: {e}")),
        }
    }
    finish(failures, format!("max width {worst:.2e} < 1e-12"))
}

fn order_one_band() -> (bool, String) {
    let mut failures = Vec::new();
    for p in [1u64, 2] {
        for mu in [0.25, 1.0] {
            let params = validate_resonance(p, 1, 0.5, 0)
                .unwrap()
                .with_mu(mu)
                .unwrap();
            match sweep_bands(&params, 256) {
                Ok(b) => {
                    check(
                        (b.widths[0] - 2.0 * mu).abs() < 1e-10,
                        &mut failures,
                        || format!("p={p} mu={mu}: width {} != {}", b.widths[0], 2.0 * mu),
                    );
                    let phi0 = b.phases[0][0];
                    for (k, &vt) in b.grid.iter().enumerate() {
                        let want = phi0 - mu * (vt.cos() - 1.0);
                        if (b.phases[0][k] - want).abs() >= 1e-10 {
                            failures.push(format!(
                                "p={p} mu={mu}: profile deviates at theta={vt}: {} vs {}",
                                b.phases[0][k], want
                            ));
                            break;
                        }
                    }
                }
                Err(e) => failures.push(format!("p={p} mu={mu}: {e}")),
            }
        }
    }
    finish(failures, "band is const - mu cos(theta), width 2 mu".into())
}

fn theorem_one_sweep() -> (bool, String) {
    let mut failures = Vec::new();
    let mut min_width = f64::INFINITY;
    let mut min_case = String::new();
    for params in primitive_cases(12) {
        for mu in [0.5, 1.0, 2.0] {
            let p = params.with_mu(mu).unwrap();
            match sweep_bands(&p, 256) {
                Ok(b) => {
                    for (i, w) in b.widths.iter().enumerate() {
                        if *w < min_width {
                            min_width = *w;
                            min_case = format!("p={} q={} mu={mu} band {}", p.p, p.q, i + 1);
                        }
                        check(*w > 1e-9, &mut failures, || {
                            format!(
                                "p={} q={} mu={mu}: band {} width {w:.3e} <= 1e-9",
                                p.p,
                                p.q,
                                i + 1
                            )
                        });
                    }
                }
                Err(e) => failures.push(format!("p={} q={} mu={mu}: {e}", p.p, p.q)),
            }
        }
    }
    finish(
        failures,
        format!("min width {min_width:.3e} at {min_case}"),
    )
}

fn determinant_criterion() -> (bool, String) {
    let mut failures = Vec::new();
    let mut min_det = f64::INFINITY;
    for params in primitive_cases(12) {
        let d = gd_determinant(&params);
        min_det = min_det.min(d);
        check(d > 1e-10, &mut failures, || {
            format!("p={} q={}: |det| = {d:.3e} <= 1e-10", params.p, params.q)
        });
    }
    for q in 1..=50u64 {
        let beta = (q as f64 / 2.0).rem_euclid(1.0);
        let params = validate_resonance(1, q, beta, 0).unwrap();
        let d = gd_determinant(&params);
        check(d > 1e-10, &mut failures, || {
            format!("p=1 q={q}: |det| = {d:.3e} <= 1e-10")
        });
    }
    let anti = validate_resonance(2, 2, 0.0, 0).unwrap();
    let d = gd_determinant(&anti);
    check(d < 1e-13, &mut failures, || {
        format!("anti-resonance |det| = {d:.3e} >= 1e-13")
    });
    finish(
        failures,
        format!("min primitive |det| (q<=12) = {min_det:.3e}; anti = {d:.1e}"),
    )
}

fn exponent_law() -> (bool, String) {
    let mut failures = Vec::new();
    let mus = [1e-4, 2e-4, 5e-4, 1e-3];
    let mut worst = 0.0f64;
    for (q, j) in [(3u64, 1usize), (3, 2), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2), (7, 3)] {
        for p in [1u64, 2] {
            let params = validate_resonance(p, q, 0.5, 0).unwrap();
            let alpha = alpha_exponent(j, q).unwrap() as f64;
            match scaling_fit(&params, j, &mus) {
                Ok(slope) => {
                    worst = worst.max((slope - alpha).abs());
                    check((slope - alpha).abs() <= 0.05, &mut failures, || {
                        format!("q={q} j={j} p={p}: slope {slope:.4} vs alpha {alpha}")
                    });
                }
                Err(e) => failures.push(format!("q={q} j={j} p={p}: {e}")),
            }
        }
    }
    finish(failures, format!("max |slope - alpha| = {worst:.4}"))
}

fn coefficient_cross_validation() -> (bool, String) {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for q in [3u64, 5, 7] {
        for p in [1u64, 2] {
            for j in 1..=((q + 1) / 2) as usize {
                let params = validate_resonance(p, q, 0.5, 0).unwrap();
                match path_sum_coefficient(&params, j) {
                    Ok(c) => match c.relative_gap {
                        Some(gap) => {
                            worst = worst.max(gap);
                            check(gap < 0.02, &mut failures, || {
                                format!("q={q} p={p} j={j}: oracle gap {gap:.4}")
                            });
                        }
                        None => failures.push(format!("q={q} p={p} j={j}: oracle skipped")),
                    },
                    Err(e) => failures.push(format!("q={q} p={p} j={j}: {e}")),
                }
            }
        }
    }
    finish(failures, format!("max oracle gap {worst:.4}"))
}

fn dp_equals_enumeration() -> (bool, String) {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for q in [3u64, 5, 7, 11, 13] {
        for p in [1u64, 2] {
            for j in 1..=((q + 1) / 2) as usize {
                let params = validate_resonance(p, q, 0.5, 0).unwrap();
                match path_sum_coefficient(&params, j) {
                    Ok(c) => {
                        worst = worst.max(c.dp_vs_enum_gap);
                        check(c.dp_vs_enum_gap < 1e-10, &mut failures, || {
                            format!("q={q} p={p} j={j}: dp/enum gap {:e}", c.dp_vs_enum_gap)
                        });
                    }
                    Err(e) => failures.push(format!("q={q} p={p} j={j}: {e}")),
                }
            }
        }
    }
    finish(failures, format!("max dp/enum gap {worst:.2e}"))
}

fn gauss_sums() -> (bool, String) {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let qs = [5u64, 7, 11, 13, 101];
    for &q in &qs {
        for _ in 0..50 {
            let p = rng.gen_range(1..q);
            let t = rng.gen_range(1..=q);
            let j = rng.gen_range(1..=q);
            let m = q as i64 * rng.gen_range(1..5i64);
            let r = gauss_partial_sum(p, q, 0.5, m, j, t).unwrap();
            check(
                (r.magnitude_squared - (t * t) as f64).abs() < 1e-9 * ((t * t) as f64).max(1.0),
                &mut failures,
                || format!("multiple-of-q case q={q} p={p} T={t}: {}", r.magnitude_squared),
            );
            let mut n = rng.gen_range(1..200i64);
            if n % q as i64 == 0 {
                n += 1;
            }
            let r = gauss_partial_sum(p, q, 0.5, n, j, q).unwrap();
            check(
                (r.magnitude_squared - q as f64).abs() < 1e-9 * q as f64,
                &mut failures,
                || format!("full-period case q={q} p={p} N={n}: {}", r.magnitude_squared),
            );
        }
    }
    let primes: Vec<u64> = (2..=101).filter(|&n| is_prime(n)).collect();
    let mut max_ratio = 0.0f64;
    for _ in 0..500 {
        let q = primes[rng.gen_range(0..primes.len())];
        if q < 3 {
            continue;
        }
        let p = rng.gen_range(1..q);
        let mut n = rng.gen_range(1..300i64);
        if n % q as i64 == 0 {
            n += 1;
        }
        let t = rng.gen_range(1..q);
        let j = rng.gen_range(1..=q);
        let r = gauss_partial_sum(p, q, 0.5, n, j, t).unwrap();
        max_ratio = max_ratio.max(r.magnitude_squared / r.bound);
        check(r.satisfied, &mut failures, || {
            format!(
                "partial bound violated: q={q} p={p} N={n} T={t}: {} > {}",
                r.magnitude_squared, r.bound
            )
        });
    }
    finish(
        failures,
        format!("identities hold to 1e-9; max partial ratio {max_ratio:.3}"),
    )
}

fn gamma_value() -> (bool, String) {
    let mut failures = Vec::new();
    let g = gamma_bound(1000);
    check(
        g.value > -0.0020 && g.value < -0.0013,
        &mut failures,
        || format!("gamma value {} outside [-0.0020, -0.0013]", g.value),
    );
    let g4 = gamma_bound(4000);
    check((g.value - g4.value).abs() < 1e-5, &mut failures, || {
        format!(
            "value unstable under refinement: {} vs {}",
            g.value, g4.value
        )
    });
    finish(
        failures,
        format!(
            "-gamma = {:.6} at x* = {:.4}, lambda* = {:.4}",
            g.value, g.x_star, g.lambda_star
        ),
    )
}

fn decomposition_oracle() -> (bool, String) {
    let mut failures = Vec::new();
    let cases: [(u64, u64, f64, f64, usize); 5] = [
        (2, 2, 0.0, 1.0, 128),
        (1, 3, 0.5, 1.0, 192),
        (2, 5, 0.5, 0.7, 160),
        (1, 12, 0.0, 2.0, 240),
        (3, 7, 0.5, 1.3, 280),
    ];
    let mut worst = 0.0f64;
    for (bp, bq, beta, mu, m) in cases {
        let params = validate_resonance(bp, bq, beta, 0)
            .unwrap()
            .with_mu(mu)
            .unwrap();
        for seed in 0..2u64 {
            match crate::floquet::verify_direct_integral(&params, m, None, seed) {
                Ok(err) => {
                    worst = worst.max(err);
                    check(err < 1e-10, &mut failures, || {
                        format!("P={bp} Q={bq} mu={mu} seed={seed}: error {err:e}")
                    });
                }
                Err(e) => failures.push(format!("P={bp} Q={bq}: {e}")),
            }
        }
    }
    finish(failures, format!("max pointwise error {worst:.2e}"))
}

fn decay_trend() -> (bool, String) {
    let mut failures = Vec::new();
    match decay_fit(|_| 1, &[3, 5, 7, 11, 13], |_| 1) {
        Ok(rate) => {
            check(rate < 0.0, &mut failures, || {
                format!("decay rate {rate:.4} is not negative")
            });
            check(
                rate.abs() >= 0.3 && rate.abs() <= 0.9,
                &mut failures,
                || format!("decay rate magnitude {:.4} outside [0.3, 0.9]", rate.abs()),
            );
            finish(failures, format!("fitted log10 rate {rate:.4}"))
        }
        Err(e) => (false, format!("decay fit failed: {e}")),
    }
}

/// Criterion-adjacent diagnostics that are reported, not asserted: the
/// asymptotic decay and big-O claims have unspecified constants at desk
/// scale.
pub fn diagnostics_report() -> String {
    let mut out = String::new();
    out.push_str("== leading-block determinant decay (p=1) ==\n");
    for q in (1..=50u64).step_by(7) {
        let beta = (q as f64 / 2.0).rem_euclid(1.0);
        let params = validate_resonance(1, q, beta, 0).unwrap();
        out.push_str(&format!("  q={q:2}: |det G^(d)| = {:.3e}\n", gd_determinant(&params)));
    }
    out.push_str("== log-diagonal sum ratio to sqrt(q log^3 q), j=1, p=1 ==\n");
    let mut max_ratio = 0.0f64;
    for q in (5..=199u64).filter(|&n| is_prime(n)) {
        let params = validate_resonance(1, q, 0.5, 0).unwrap();
        if let Ok((_, ratio)) = log_diagonal_product(&params, 1) {
            max_ratio = max_ratio.max(ratio);
        }
    }
    out.push_str(&format!("  max ratio over primes 5..199: {max_ratio:.4}\n"));
    out.push_str("== coefficient decay slopes, p=1 ==\n");
    if let Ok(r1) = decay_fit(|_| 1, &[3, 5, 7, 11, 13], |_| 1) {
        out.push_str(&format!(
            "  j=1:      log10 slope {r1:.4} (natural-log slope {:.4})\n",
            r1 * std::f64::consts::LN_10
        ));
    }
    if let Ok(rm) = decay_fit(
        |_| 1,
        &[3, 5, 7, 11, 13],
        |q| (((q + 2) as f64 / 4.0).round() as usize).max(1),
    ) {
        out.push_str(&format!(
            "  mid-band: log10 slope {rm:.4} (natural-log slope {:.4})\n",
            rm * std::f64::consts::LN_10
        ));
    }
    let g = gamma_bound(4000);
    out.push_str(&format!(
        "== gamma optimization ==\n  -gamma = {:.6} at x* = {:.6}, lambda* = {:.6} (quadrature error {:.1e})\n",
        g.value, g.x_star, g.lambda_star, g.quadrature_error
    ));
    out
}
