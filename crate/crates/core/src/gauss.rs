//! Gauss-type partial sums and the number-theoretic estimates behind the
//! bandwidth decay: the three-case partial-sum bound, the Fourier expansion
//! of log|1 − ρe^{iφ}|, the log-diagonal products, the γ optimization, and
//! the empirical decay fit of |s_j| against the order.

use num_complex::Complex64;

use crate::error::{Result, RotorError};
use crate::params::ResonanceParams;
use crate::perturb::path_sum_value;

/// Deterministic Miller-Rabin for u64 (valid for all n < 2^64 with this
/// witness set).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mul = |a: u64, b: u64| -> u64 { ((a as u128 * b as u128) % n as u128) as u64 };
    let pow = |mut b: u64, mut e: u64| -> u64 {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Which case of the partial-sum lemma applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussCase {
    /// N ≡ 0 (mod q): |Σ|² = T².
    MultipleOfQ,
    /// N ≢ 0 and T = q: |Σ|² = q.
    FullPeriod,
    /// Otherwise: |Σ|² ≤ 2q(1 + log q).
    Partial,
}

/// Partial power sum of the unperturbed eigenvalues with its applicable
/// bound.
#[derive(Clone, Debug)]
pub struct GaussSumReport {
    pub value: Complex64,
    pub magnitude_squared: f64,
    pub case: GaussCase,
    pub bound: f64,
    pub satisfied: bool,
}

/// Σ_{n=j}^{j+T-1} a_n^N with a_n = e^{-iπp(n+β-1)²/q}. Quadratic phase
/// exponents are reduced mod 8q in integer arithmetic when 2β is an integer.
pub fn gauss_partial_sum(
    p: u64,
    q: u64,
    beta: f64,
    n_pow: i64,
    j: u64,
    t_len: u64,
) -> Result<GaussSumReport> {
    if !is_prime(q) {
        return Err(RotorError::InvalidInput(format!("q = {q} is not prime")));
    }
    if t_len < 1 || t_len > q {
        return Err(RotorError::InvalidInput(format!(
            "window length must satisfy 1 <= T <= q, got T = {t_len}"
        )));
    }
    if p % q == 0 {
        return Err(RotorError::InvalidInput(
            "p must not be a multiple of q".into(),
        ));
    }
    let beta = beta.rem_euclid(1.0);
    let two_beta = 2.0 * beta;
    let exact = (two_beta - two_beta.round()).abs() < 1e-12;
    let mut value = Complex64::new(0.0, 0.0);
    for n in j..j + t_len {
        let phase = if exact {
            let tb = two_beta.round() as i128;
            let m = 2 * n as i128 - 2 + tb;
            let k = (p as i128 * n_pow as i128 * m * m).rem_euclid(8 * q as i128);
            -std::f64::consts::PI * k as f64 / (4.0 * q as f64)
        } else {
            let x = n as f64 + beta - 1.0;
            let e = (p as f64 * n_pow as f64 * x * x / q as f64).rem_euclid(2.0);
            -std::f64::consts::PI * e
        };
        value += Complex64::from_polar(1.0, phase);
    }
    let mag2 = value.norm_sqr();
    let (case, bound) = if n_pow.rem_euclid(q as i64) == 0 {
        (GaussCase::MultipleOfQ, (t_len * t_len) as f64)
    } else if t_len == q {
        (GaussCase::FullPeriod, q as f64)
    } else {
        (
            GaussCase::Partial,
            2.0 * q as f64 * (1.0 + (q as f64).ln()),
        )
    };
    let satisfied = match case {
        GaussCase::Partial => mag2 <= bound * (1.0 + 1e-12) + 1e-9,
        _ => (mag2 - bound).abs() <= 1e-9 * bound.max(1.0),
    };
    Ok(GaussSumReport {
        value,
        magnitude_squared: mag2,
        case,
        bound,
        satisfied,
    })
}

/// Fourier coefficient of log|1 − ρe^{iφ}|: σ_N(ρ) = −ρ^{|N|}/|N|, σ_0 = 0.
pub fn fourier_log_coeff(n: i64, rho: f64) -> f64 {
    debug_assert!(rho > 0.0 && rho < 1.0);
    if n == 0 {
        return 0.0;
    }
    let k = n.unsigned_abs() as f64;
    -rho.powf(k) / k
}

/// Σ_{l=1}^{α_j−1} log|a_{j+l} a_j* − 1| (indices wrap mod q) and its ratio
/// to √(q log³ q). The constant in front of the asymptotic bound is not
/// pinned anywhere, so only the ratio is reported.
pub fn log_diagonal_product(params: &ResonanceParams, j: usize) -> Result<(f64, f64)> {
    let (sum, _) = log_diagonal_terms(params, j, None)?;
    let q = params.q as f64;
    let ratio = sum.abs() / (q * q.ln().powi(3)).sqrt();
    Ok((sum, ratio))
}

/// ρ-regularized variant: Σ log|ρ a_{j+l} a_j* − 1|.
pub fn log_diagonal_product_regularized(
    params: &ResonanceParams,
    j: usize,
    rho: f64,
) -> Result<f64> {
    let (sum, _) = log_diagonal_terms(params, j, Some(rho))?;
    Ok(sum)
}

fn log_diagonal_terms(
    params: &ResonanceParams,
    j: usize,
    rho: Option<f64>,
) -> Result<(f64, usize)> {
    if !params.primitive || !params.is_half_beta() || !is_prime(params.q) {
        return Err(RotorError::UnsupportedParams(
            "log-diagonal products need a primitive prime-order resonance at beta = 1/2".into(),
        ));
    }
    let q = params.q;
    if j < 1 || j as u64 > (q + 1) / 2 {
        return Err(RotorError::InvalidBand { j, q });
    }
    let alpha = crate::perturb::alpha_exponent(j, q)?;
    let a_j = params.unperturbed_value::<f64>(j as u64).to_c64();
    let mut sum = 0.0;
    let mut count = 0;
    for l in 1..alpha as u64 {
        let idx = (j as u64 + l - 1) % q + 1;
        let a_l = params.unperturbed_value::<f64>(idx).to_c64();
        let factor = match rho {
            None => (a_l * a_j.conj() - 1.0).norm(),
            Some(r) => (r * a_l * a_j.conj() - 1.0).norm(),
        };
        if factor < 1e-14 {
            return Err(RotorError::DegenerateFactor {
                site: idx as usize,
                j,
            });
        }
        sum += factor.ln();
        count += 1;
    }
    Ok((sum, count))
}

/// Result of maximizing −2(x−λ)² + F(x) with F(x) = ∫₀ˣ log cos(πt/4) dt.
#[derive(Clone, Copy, Debug)]
pub struct GammaBoundResult {
    pub x_star: f64,
    pub lambda_star: f64,
    /// The maximum: −γ, expected ≈ −0.0016.
    pub value: f64,
    pub quadrature_error: f64,
}

fn log_cos_integrand(t: f64) -> f64 {
    (std::f64::consts::PI * t / 4.0).cos().ln()
}

fn adaptive_simpson(f: fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn rec(
        f: fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, fa, m, fm, left, lm, flm, tol * 0.5, depth - 1)
                + rec(f, m, fm, b, fb, right, rm, frm, tol * 0.5, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, whole, m, fm, tol, 40)
}

/// F(x) = ∫₀ˣ log cos(πt/4) dt; smooth on [0, 1] since cos(π/4) > 0.
fn capital_f(x: f64, tol: f64) -> f64 {
    adaptive_simpson(log_cos_integrand, 0.0, x, tol)
}

/// Maximizes −2(x−λ)² + F(x) over [0,1] × (1/4, 1/2) by a dense grid plus
/// golden-section refinement. For fixed x the best λ is the clamp of x into
/// the λ interval, so the search is effectively one-dimensional.
pub fn gamma_bound(quadrature_points: usize) -> GammaBoundResult {
    let n = quadrature_points.max(1000);
    let tol = 1e-13;
    // cumulative Simpson table of F on the dense grid (n panels, n even)
    let n = n + n % 2;
    let h = 1.0 / n as f64;
    let mut fx = vec![0.0; n + 1];
    for k in (2..=n).step_by(2) {
        let a = (k - 2) as f64 * h;
        let f0 = log_cos_integrand(a);
        let f1 = log_cos_integrand(a + h);
        let f2 = log_cos_integrand(a + 2.0 * h);
        fx[k] = fx[k - 2] + h / 3.0 * (f0 + 4.0 * f1 + f2);
        fx[k - 1] = fx[k - 2] + h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
    }
    let lambda_of = |x: f64| x.clamp(0.25, 0.5);
    let objective_tab = |k: usize| -> f64 {
        let x = k as f64 * h;
        let l = lambda_of(x);
        -2.0 * (x - l) * (x - l) + fx[k]
    };
    let mut best_k = 0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..=n {
        let v = objective_tab(k);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    // golden-section refinement on the adaptive-quadrature objective
    let obj = |x: f64| -> f64 {
        let l = lambda_of(x);
        -2.0 * (x - l) * (x - l) + capital_f(x, tol)
    };
    let mut lo = (best_k.saturating_sub(1)) as f64 * h;
    let mut hi = ((best_k + 1).min(n)) as f64 * h;
    let phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = obj(x1);
    let mut f2 = obj(x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = obj(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = obj(x1);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let x_star = 0.5 * (lo + hi);
    let value = obj(x_star);
    let quadrature_error = (capital_f(x_star, tol) - capital_f(x_star, tol * 10.0)).abs();
    GammaBoundResult {
        x_star,
        lambda_star: lambda_of(x_star).clamp(0.25 + 1e-9, 0.5 - 1e-9),
        value,
        quadrature_error,
    }
}

/// Least-squares slope of log10|s_j| against q over a list of prime orders.
/// `p_rule` and `j_rule` pick the numerator and band per order.
pub fn decay_fit(
    p_rule: impl Fn(u64) -> u64,
    q_list: &[u64],
    j_rule: impl Fn(u64) -> usize,
) -> Result<f64> {
    if q_list.len() < 2 {
        return Err(RotorError::InsufficientData(format!(
            "need at least two orders for a slope, got {}",
            q_list.len()
        )));
    }
    let mut xs = Vec::with_capacity(q_list.len());
    let mut ys = Vec::with_capacity(q_list.len());
    for &q in q_list {
        let p = p_rule(q);
        let j = j_rule(q);
        let params = crate::params::validate_resonance(p, q, 0.5, 0)?;
        let s = path_sum_value(&params, j)?;
        xs.push(q as f64);
        ys.push(s.abs().to_f64().log10());
    }
    Ok(crate::perturb::least_squares_slope(&xs, &ys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_resonance;

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(101) && is_prime(104729));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(91) && !is_prime(104730));
    }

    #[test]
    fn gauss_multiple_of_q_case() {
        let r = gauss_partial_sum(1, 7, 0.5, 7, 1, 4).unwrap();
        assert_eq!(r.case, GaussCase::MultipleOfQ);
        assert!((r.magnitude_squared - 16.0).abs() < 1e-9);
        assert!(r.satisfied);
    }

    #[test]
    fn gauss_full_period_case() {
        let r = gauss_partial_sum(2, 5, 0.5, 3, 1, 5).unwrap();
        assert_eq!(r.case, GaussCase::FullPeriod);
        assert!((r.magnitude_squared - 5.0).abs() < 1e-10);
        assert!(r.satisfied);
    }

    #[test]
    fn gauss_partial_case_bounded() {
        let r = gauss_partial_sum(3, 11, 0.5, 2, 2, 6).unwrap();
        assert_eq!(r.case, GaussCase::Partial);
        assert!(r.bound > 74.0 && r.bound < 75.0);
        assert!(r.magnitude_squared <= r.bound);
        assert!(r.satisfied);
    }

    #[test]
    fn gauss_input_validation() {
        assert!(gauss_partial_sum(1, 9, 0.5, 1, 1, 3).is_err()); // not prime
        assert!(gauss_partial_sum(1, 7, 0.5, 1, 1, 8).is_err()); // T > q
    }

    #[test]
    fn sigma_coefficients() {
        assert_eq!(fourier_log_coeff(0, 0.9), 0.0);
        assert!((fourier_log_coeff(1, 0.5) + 0.5).abs() < 1e-15);
        assert!((fourier_log_coeff(-3, 0.5) + 0.125 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sigma_series_converges_to_log_modulus() {
        // Re Σ_{n>=1} σ_n(ρ) e^{inφ} = Re log(1 − ρe^{iφ}) = log|1 − ρe^{iφ}|
        let (rho, phi) = (0.9, std::f64::consts::PI / 3.0);
        let want = (1.0 - Complex64::from_polar(rho, phi)).norm().ln();
        let mut sum = 0.0;
        for n in 1..=10_000i64 {
            sum += fourier_log_coeff(n, rho) * (n as f64 * phi).cos();
        }
        assert!((sum - want).abs() < 1e-8, "{sum} vs {want}");
    }

    #[test]
    fn log_diagonal_unrolled() {
        // q=3, j=1: alpha=2, single term l=1
        let params = validate_resonance(1, 3, 0.5, 0).unwrap();
        let (sum, ratio) = log_diagonal_product(&params, 1).unwrap();
        let a1 = params.unperturbed_value::<f64>(1).to_c64();
        let a2 = params.unperturbed_value::<f64>(2).to_c64();
        let want = (a2 * a1.conj() - 1.0).norm().ln();
        assert!((sum - want).abs() < 1e-12);
        assert!(ratio > 0.0);
    }

    #[test]
    fn log_diagonal_regularized_close() {
        for q in [5u64, 13, 101, 199] {
            let params = validate_resonance(1, q, 0.5, 0).unwrap();
            let (direct, _) = log_diagonal_product(&params, 1).unwrap();
            let rho = 1.0 - 1.0 / (q as f64 * (q as f64).ln());
            let reg = log_diagonal_product_regularized(&params, 1, rho).unwrap();
            let bound = 16.0 * q as f64 * (1.0 - rho) * (2.0 * q as f64).ln();
            assert!(
                (direct - reg).abs() < bound,
                "q={q}: |{direct} - {reg}| vs {bound}"
            );
        }
    }

    #[test]
    fn log_diagonal_degenerate_factor() {
        // leftward-path bands hit the mirror collision at l = q-2j+1
        let params = validate_resonance(1, 7, 0.5, 0).unwrap();
        assert!(matches!(
            log_diagonal_product(&params, 3),
            Err(RotorError::DegenerateFactor { .. })
        ));
    }

    #[test]
    fn gamma_bound_value() {
        let g = gamma_bound(4000);
        assert!(
            g.value > -0.0020 && g.value < -0.0013,
            "gamma value {}",
            g.value
        );
        assert!((g.x_star - 0.2455).abs() < 0.01, "x* = {}", g.x_star);
        assert!(g.lambda_star > 0.25 && g.lambda_star < 0.5);
        assert!((g.lambda_star - 0.25).abs() < 1e-6);
        // F(0) = 0 exactly
        assert_eq!(capital_f(0.0, 1e-13), 0.0);
    }

    #[test]
    fn gamma_bound_quadrature_stability() {
        let a = gamma_bound(1000);
        let b = gamma_bound(4000);
        assert!((a.value - b.value).abs() < 1e-5);
    }

    #[test]
    fn decay_single_point_rejected() {
        assert!(matches!(
            decay_fit(|_| 1, &[5], |_| 1),
            Err(RotorError::InsufficientData(_))
        ));
    }

    #[test]
    fn decay_fit_small_range() {
        let rate = decay_fit(|_| 1, &[3, 5, 7], |_| 1).unwrap();
        assert!(rate < 0.0, "expected decay, got {rate}");
    }
}
