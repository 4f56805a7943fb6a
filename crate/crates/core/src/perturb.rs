//! Perturbative bandwidth coefficients for primitive prime-order resonances
//! at β = 1/2: the exponents α_j, the canonical shortest paths, the
//! composition/residue sums for s_j, and the finite-difference eigenphase
//! oracle that cross-validates them.
//!
//! The leading θ-dependence of band j enters at order μ^{α_j}, which at the
//! oracle's μ = 1e-3 can sit 20+ decades below the O(1) eigenphases. All
//! band-resolving arithmetic here therefore runs in double-double; the
//! composition sums do too, since their terms cancel down by factors of
//! 1e5..1e12 already for q ≤ 23.

use num_complex::Complex64;

use crate::bands::{match_by_overlap, s_frame_start_basis, x_frame_start_basis};
use crate::error::{Result, RotorError};
use crate::floquet::{s_matrix, x_matrix};
use crate::gauss::is_prime;
use crate::linalg::unitary_eig;
use crate::num::{phase_step, Cx, Dd, Real};
use crate::params::ResonanceParams;

/// Hard budget on the leading order: 2^(α-1) compositions are enumerated.
pub const ALPHA_BUDGET: u32 = 30;
/// Default kick strength of the finite-difference oracle.
pub const ORACLE_MU: f64 = 1e-3;
/// Largest α the oracle can resolve at ORACLE_MU in double-double.
const ORACLE_ALPHA_MAX: u32 = 9;
const ORACLE_STEP: f64 = 1e-3;
const POLE_TOL: f64 = 1e-14;

/// Nearest-neighbour path on the q-site ring, 1-based sites.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticePath {
    sites: Vec<u64>,
    q: u64,
}

impl LatticePath {
    pub fn new(sites: Vec<u64>, q: u64) -> Result<LatticePath> {
        if sites.is_empty() || sites.iter().any(|&s| s < 1 || s > q) {
            return Err(RotorError::InvalidInput(
                "path sites must lie in 1..=q".into(),
            ));
        }
        for w in sites.windows(2) {
            let d = (w[1] as i64 - w[0] as i64).rem_euclid(q as i64);
            if q > 2 && d != 1 && d != q as i64 - 1 {
                return Err(RotorError::InvalidInput(format!(
                    "sites {} -> {} are not nearest neighbours mod {}",
                    w[0], w[1], q
                )));
            }
        }
        Ok(LatticePath { sites, q })
    }

    pub fn sites(&self) -> &[u64] {
        &self.sites
    }

    /// Number of steps ℓ.
    pub fn len_steps(&self) -> usize {
        self.sites.len() - 1
    }

    /// Winding index ν: q→1 jumps minus 1→q jumps. In the operator reading a
    /// consecutive pair (m_{i-1}, m_i) = (1, q) is the matrix element
    /// ⟨1|V|q⟩, i.e. the transition q→1, and carries the phase e^{+iθ}.
    pub fn winding(&self) -> i64 {
        let mut nu = 0i64;
        for w in self.sites.windows(2) {
            if w[0] == 1 && w[1] == self.q {
                nu += 1;
            } else if w[0] == self.q && w[1] == 1 {
                nu -= 1;
            }
        }
        nu
    }

    pub fn reversed(&self) -> LatticePath {
        let mut sites = self.sites.clone();
        sites.reverse();
        LatticePath {
            sites,
            q: self.q,
        }
    }
}

/// Ordered tuple of strictly positive parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Composition> {
        if parts.is_empty() || parts.iter().any(|&r| r == 0) {
            return Err(RotorError::InvalidInput(
                "composition parts must be strictly positive".into(),
            ));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// l_s = r_1 + … + r_s for s = 1..n.
    pub fn partial_sums(&self) -> Vec<u32> {
        let mut acc = 0;
        self.parts
            .iter()
            .map(|&r| {
                acc += r;
                acc
            })
            .collect()
    }

    pub fn reversed(&self) -> Composition {
        let mut parts = self.parts.clone();
        parts.reverse();
        Composition { parts }
    }
}

/// Leading μ-exponent of band j: α_j = max(2j−1, q−2j+1); the central band
/// j = (q+1)/2 comes out at q.
pub fn alpha_exponent(j: usize, q: u64) -> Result<u32> {
    if q < 3 || q % 2 == 0 || !is_prime(q) {
        return Err(RotorError::InvalidInput(format!(
            "alpha exponent defined for odd prime order, got q = {q}"
        )));
    }
    if j < 1 || j as u64 > (q + 1) / 2 {
        return Err(RotorError::InvalidBand { j, q });
    }
    let up = 2 * j as u64 - 1;
    let down = (q + 1).saturating_sub(2 * j as u64);
    Ok(up.max(down) as u32)
}

/// The shortest path carrying the leading θ-dependent contribution of band j:
/// rightward j→j' when j < (q+2)/4, leftward through the corner otherwise,
/// and for the central band the length-q winding loop.
pub fn canonical_path(j: usize, q: u64) -> Result<LatticePath> {
    if q < 3 || q % 2 == 0 || !is_prime(q) {
        return Err(RotorError::InvalidInput(format!(
            "canonical path defined for odd prime order, got q = {q}"
        )));
    }
    if j < 1 || j as u64 > (q + 1) / 2 {
        return Err(RotorError::InvalidBand { j, q });
    }
    let j = j as u64;
    let jp = q - j + 1;
    let sites: Vec<u64> = if j == (q + 1) / 2 {
        // loop j → 1 → q → j, length q
        (1..=j).rev().chain((j..=q).rev()).collect()
    } else if 4 * j < q + 2 {
        (j..=jp).collect()
    } else {
        (1..=j).rev().chain((jp..=q).rev()).collect()
    };
    LatticePath::new(sites, q)
}

fn g_weight<R: Real>(a_m: Cx<R>, z: Cx<R>) -> Cx<R> {
    a_m / (a_m - z)
}

/// The path weight G(m, r⃗, z) = g(m_0,z) g(m_{l_1},z) … g(m_ℓ,z) h(m_ℓ)
/// with g(m,z) = a_m/(a_m − z) and h(m) = 1/a_m.
pub fn path_operator_element(
    params: &ResonanceParams,
    path: &LatticePath,
    comp: &Composition,
    z: Complex64,
) -> Result<Complex64> {
    if comp.total() as usize != path.len_steps() {
        return Err(RotorError::InvalidInput(format!(
            "composition total {} != path length {}",
            comp.total(),
            path.len_steps()
        )));
    }
    let zz = Cx::<f64>::from_c64(z);
    let mut marked: Vec<usize> = vec![0];
    marked.extend(comp.partial_sums().iter().map(|&l| l as usize));
    let mut w = Cx::<f64>::one();
    for &pos in &marked {
        let site = path.sites()[pos];
        let a_m = params.unperturbed_value::<f64>(site);
        let dist = (a_m - zz).abs();
        if dist < POLE_TOL {
            return Err(RotorError::PoleHit {
                site: site as usize,
                dist,
            });
        }
        w = w * g_weight(a_m, zz);
    }
    let last = *path.sites().last().unwrap();
    let h = Cx::<f64>::one() / params.unperturbed_value::<f64>(last);
    Ok((w * h).to_c64())
}

/// (j, α_j, s_j) from the composition/residue sum, with the eigenphase
/// oracle estimate when the order is resolvable.
#[derive(Clone, Debug)]
pub struct PathSumCoefficient {
    pub j: usize,
    pub alpha: u32,
    pub s: Complex64,
    /// |s_j| as measured by the finite-difference oracle; skipped when μ^α
    /// is below the extended-precision floor.
    pub oracle_estimate: Option<Complex64>,
    pub relative_gap: Option<f64>,
    /// Agreement between the subset enumeration and the dynamic program.
    pub dp_vs_enum_gap: f64,
}

fn factorial_table_dd(n: u32) -> Vec<Dd> {
    let mut f = vec![Dd::ONE; (n + 1) as usize];
    let mut acc: i128 = 1;
    for k in 1..=n as i128 {
        acc *= k;
        f[k as usize] = Dd::from_i128(acc);
    }
    f
}

struct PathSumSetup {
    alpha: u32,
    a_j: Cx<Dd>,
    /// g(m_l, a_j) for the interior marked positions l = 1..α−1.
    interior: Vec<Cx<Dd>>,
    double_loop: bool,
}

fn path_sum_setup(params: &ResonanceParams, j: usize) -> Result<PathSumSetup> {
    if !params.primitive || !params.is_half_beta() {
        return Err(RotorError::UnsupportedParams(
            "path sums need a primitive resonance at beta = 1/2".into(),
        ));
    }
    let q = params.q;
    if q < 3 || !is_prime(q) || q % 2 == 0 {
        return Err(RotorError::UnsupportedParams(format!(
            "path sums need odd prime order, got q = {q}"
        )));
    }
    if params.p % q == 0 {
        return Err(RotorError::UnsupportedParams(
            "p must not be a multiple of q".into(),
        ));
    }
    let alpha = alpha_exponent(j, q)?;
    if alpha > ALPHA_BUDGET {
        return Err(RotorError::BudgetExceeded { alpha });
    }
    let path = canonical_path(j, q)?;
    let a_j = params.unperturbed_value::<Dd>(j as u64);
    let mut interior = Vec::with_capacity(alpha as usize - 1);
    for l in 1..alpha as usize {
        let site = path.sites()[l];
        let a_m = params.unperturbed_value::<Dd>(site);
        if (a_m - a_j).abs().to_f64() < POLE_TOL {
            return Err(RotorError::DegenerateResidue {
                site: site as usize,
                j,
            });
        }
        interior.push(g_weight(a_m, a_j));
    }
    Ok(PathSumSetup {
        alpha,
        a_j,
        interior,
        double_loop: j as u64 == (q + 1) / 2,
    })
}

/// Direct enumeration: compositions of α correspond to subsets of the
/// interior positions {1..α−1} (marks at the partial sums). Depth-first with
/// incremental products, O(2^{α−1}) leaves.
fn composition_sum_enum(setup: &PathSumSetup, fact: &[Dd]) -> Cx<Dd> {
    let alpha = setup.alpha as usize;
    fn recurse(last: usize, acc: Cx<Dd>, alpha: usize, interior: &[Cx<Dd>], fact: &[Dd]) -> Cx<Dd> {
        let mut total = acc.scale(Dd::ONE / fact[alpha - last]);
        for m in last + 1..alpha {
            let next = -(acc * interior[m - 1]).scale(Dd::ONE / fact[m - last]);
            total = total + recurse(m, next, alpha, interior, fact);
        }
        total
    }
    recurse(0, Cx::one(), alpha, &setup.interior, fact)
}

/// Dynamic program over the last marked position: O(α²) terms, same sum.
fn composition_sum_dp(setup: &PathSumSetup, fact: &[Dd]) -> Cx<Dd> {
    let alpha = setup.alpha as usize;
    let mut dp: Vec<Cx<Dd>> = vec![Cx::zero(); alpha];
    dp[0] = Cx::one();
    for l in 1..alpha {
        let mut acc = Cx::zero();
        for lp in 0..l {
            acc = acc + dp[lp].scale(Dd::ONE / fact[l - lp]);
        }
        dp[l] = -(acc * setup.interior[l - 1]);
    }
    let mut total = Cx::zero();
    for lp in 0..alpha {
        total = total + dp[lp].scale(Dd::ONE / fact[alpha - lp]);
    }
    total
}

fn assemble_s(setup: &PathSumSetup, subset_sum: Cx<Dd>, j: usize) -> Cx<Dd> {
    // s_j = (i / 2^α) Σ_n (−1)^{n+j} Σ_{r⃗} (−a_j) Π g / r⃗!
    //     = (i / 2^α) (−1)^{j+1} (−a_j) · subset_sum, marks carrying −g.
    let sign = if (j + 1) % 2 == 0 { Dd::ONE } else { -Dd::ONE };
    let mut scale = Dd::ONE;
    for _ in 0..setup.alpha {
        scale = scale * Dd::from_f64(0.5);
    }
    let mut s = (Cx::new(Dd::ZERO, Dd::ONE) * (-setup.a_j) * subset_sum).scale(sign * scale);
    if setup.double_loop {
        // both length-q winding loops (mutually reverse) contribute equally
        s = s.scale(Dd::from_f64(2.0));
    }
    s
}

/// s_j as a double-double complex value, without the oracle.
pub(crate) fn path_sum_value(params: &ResonanceParams, j: usize) -> Result<Cx<Dd>> {
    let setup = path_sum_setup(params, j)?;
    let fact = factorial_table_dd(setup.alpha);
    Ok(assemble_s(&setup, composition_sum_dp(&setup, &fact), j))
}

/// Exact residue evaluation of the composition sums for s_j, by direct
/// enumeration and by the dynamic program (both in double-double, cross
/// checked), plus the finite-difference oracle estimate.
pub fn path_sum_coefficient(params: &ResonanceParams, j: usize) -> Result<PathSumCoefficient> {
    let setup = path_sum_setup(params, j)?;
    let fact = factorial_table_dd(setup.alpha);
    let s_enum = assemble_s(&setup, composition_sum_enum(&setup, &fact), j);
    let s_dp = assemble_s(&setup, composition_sum_dp(&setup, &fact), j);
    let dp_vs_enum_gap = ((s_enum - s_dp).abs() / s_dp.abs()).to_f64();

    let alpha = setup.alpha;
    let (oracle_estimate, relative_gap) = if alpha <= ORACLE_ALPHA_MAX {
        let smag = s_dp.abs().to_f64();
        let mut best: Option<(f64, f64)> = None;
        for mu in [ORACLE_MU, ORACLE_MU / 10.0] {
            let est = oracle_magnitude(params, j, alpha, mu)?;
            let gap = (smag - est).abs() / est;
            if best.map_or(true, |(_, g)| gap < g) {
                best = Some((est, gap));
            }
            if gap < 0.02 {
                break;
            }
        }
        let (est, gap) = best.unwrap();
        (Some(Complex64::new(est, 0.0)), Some(gap))
    } else {
        (None, None)
    };

    Ok(PathSumCoefficient {
        j,
        alpha,
        s: s_dp.to_c64(),
        oracle_estimate,
        relative_gap,
        dp_vs_enum_gap,
    })
}

/// |s_j| from the tracked eigenphase derivative: |dφ_j/dθ| / (μ^α sin θ*)
/// at θ* = π/2 (sin-profile bands) or π/4 (the cos-profile central band).
fn oracle_magnitude(params: &ResonanceParams, j: usize, alpha: u32, mu: f64) -> Result<f64> {
    let theta_star = if j as u64 == (params.q + 1) / 2 {
        std::f64::consts::FRAC_PI_4
    } else {
        std::f64::consts::FRAC_PI_2
    };
    let d = numerical_band_derivative(params, j, mu, theta_star, ORACLE_STEP)?;
    Ok(d.abs() / (mu.powi(alpha as i32) * theta_star.sin()))
}

/// Tracked unwrapped eigenphases of band j at the given ring angles, in
/// double-double. The band is seeded from the μ → 0 basis at the first angle
/// and continued by eigenvector overlap.
fn tracked_phases_dd(
    params: &ResonanceParams,
    j: usize,
    mu: f64,
    thetas: &[f64],
) -> Result<Vec<Dd>> {
    let p = params.with_mu(mu)?;
    let use_x = p.primitive && p.is_half_beta();
    let block = |theta: f64| -> Result<crate::linalg::Mat<Dd>> {
        if use_x {
            x_matrix::<Dd>(&p, Dd::from_f64(theta))
        } else {
            Ok(s_matrix::<Dd>(
                &p,
                Dd::from_f64(theta) / Dd::from_f64(p.big_q as f64),
            ))
        }
    };
    let start = if use_x {
        x_frame_start_basis::<Dd>(&p)
    } else {
        s_frame_start_basis::<Dd>(&p)
    };
    if j < 1 || j > start.len() {
        return Err(RotorError::InvalidBand { j, q: p.big_q });
    }
    let seed = &start[j - 1];

    let pairs0 = unitary_eig(&block(thetas[0])?)?;
    let mut best = (0usize, f64::NEG_INFINITY);
    for (b, pair) in pairs0.iter().enumerate() {
        let ov = crate::linalg::overlap(seed, &pair.vector).to_f64();
        if ov > best.1 {
            best = (b, ov);
        }
    }
    let mut vec_prev = pairs0[best.0].vector.clone();
    let mut val_prev = pairs0[best.0].value;
    let mut phases = vec![Dd::ZERO];

    for (k, &th) in thetas.iter().enumerate().skip(1) {
        let pairs = unitary_eig(&block(th)?)?;
        let assignment = match_by_overlap(std::slice::from_ref(&vec_prev), &pairs, (k, th))?;
        let b = assignment[0];
        let last = *phases.last().unwrap();
        phases.push(last + phase_step(pairs[b].value, val_prev));
        vec_prev = pairs[b].vector.clone();
        val_prev = pairs[b].value;
    }
    Ok(phases)
}

/// Centered finite difference of the tracked eigenphase of band j over the
/// ring angle θ, Richardson-extrapolated once.
pub fn numerical_band_derivative(
    params: &ResonanceParams,
    j: usize,
    mu: f64,
    theta: f64,
    h: f64,
) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1e-2) {
        return Err(RotorError::InvalidInput(format!(
            "oracle kick strength must lie in (0, 1e-2], got {mu}"
        )));
    }
    if !(1e-5..=1e-2).contains(&h) {
        return Err(RotorError::InvalidInput(format!(
            "step must lie in [1e-5, 1e-2], got {h}"
        )));
    }
    let thetas = [theta - h, theta - h / 2.0, theta + h / 2.0, theta + h];
    let ph = tracked_phases_dd(params, j, mu, &thetas)?;
    let h_dd = Dd::from_f64(h);
    let d1 = (ph[3] - ph[0]) / (h_dd + h_dd);
    let d2 = (ph[2] - ph[1]) / h_dd;
    let four = Dd::from_f64(4.0);
    let third = Dd::ONE / Dd::from_f64(3.0);
    Ok(((four * d2 - d1) * third).to_f64())
}

/// Least-squares slope of log|dφ_j/dθ| against log μ; the measured exponent
/// of the bandwidth law.
pub fn scaling_fit(params: &ResonanceParams, j: usize, mu_values: &[f64]) -> Result<f64> {
    if mu_values.len() < 4 {
        return Err(RotorError::InsufficientData(format!(
            "need at least 4 kick strengths, got {}",
            mu_values.len()
        )));
    }
    let lo = mu_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = mu_values.iter().cloned().fold(0.0_f64, f64::max);
    if !(lo > 0.0 && hi <= 1e-2) {
        return Err(RotorError::InsufficientData(
            "kick strengths must lie in (0, 1e-2]".into(),
        ));
    }
    if hi / lo < 10.0 {
        return Err(RotorError::InsufficientData(
            "kick strengths must span at least one decade".into(),
        ));
    }
    let theta_star = if params.primitive && params.is_half_beta() && j as u64 == (params.q + 1) / 2
    {
        std::f64::consts::FRAC_PI_4
    } else {
        std::f64::consts::FRAC_PI_2
    };
    let mut xs = Vec::with_capacity(mu_values.len());
    let mut ys = Vec::with_capacity(mu_values.len());
    for &mu in mu_values {
        let d = numerical_band_derivative(params, j, mu, theta_star, ORACLE_STEP)?;
        xs.push(mu.ln());
        ys.push(d.abs().ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_resonance;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn prime_params(p: u64, q: u64) -> ResonanceParams {
        validate_resonance(p, q, 0.5, 0).unwrap()
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha_exponent(1, 3).unwrap(), 2);
        assert_eq!(alpha_exponent(2, 3).unwrap(), 3);
        assert_eq!(alpha_exponent(1, 5).unwrap(), 4);
        assert_eq!(alpha_exponent(2, 5).unwrap(), 3);
        assert_eq!(alpha_exponent(3, 5).unwrap(), 5);
        assert!(matches!(
            alpha_exponent(4, 5),
            Err(RotorError::InvalidBand { .. })
        ));
        assert!(alpha_exponent(1, 9).is_err()); // not prime
    }

    #[test]
    fn alpha_range_constraint() {
        for q in [3u64, 5, 7, 11, 13] {
            for j in 1..=((q + 1) / 2) as usize {
                let a = alpha_exponent(j, q).unwrap() as u64;
                assert!(q / 2 < a && a <= q, "alpha constraint fails at q={q} j={j}");
            }
        }
    }

    #[test]
    fn canonical_paths() {
        let p = canonical_path(1, 5).unwrap();
        assert_eq!(p.sites(), &[1, 2, 3, 4, 5]);
        assert_eq!(p.winding(), 0);
        assert_eq!(p.len_steps(), 4);

        let p = canonical_path(2, 5).unwrap();
        assert_eq!(p.sites(), &[2, 1, 5, 4]);
        assert_eq!(p.winding(), 1);
        assert_eq!(p.len_steps(), 3);

        let p = canonical_path(2, 3).unwrap();
        assert_eq!(p.sites(), &[2, 1, 3, 2]);
        assert_eq!(p.winding(), 1);
        assert_eq!(p.len_steps(), 3);
    }

    #[test]
    fn path_lengths_match_alpha() {
        for q in [3u64, 5, 7, 11, 13] {
            for j in 1..=((q + 1) / 2) as usize {
                let path = canonical_path(j, q).unwrap();
                assert_eq!(path.len_steps() as u32, alpha_exponent(j, q).unwrap());
            }
        }
    }

    #[test]
    fn single_step_weight_at_origin() {
        let params = prime_params(1, 5);
        let path = LatticePath::new(vec![2, 3], 5).unwrap();
        let comp = Composition::new(vec![1]).unwrap();
        let w = path_operator_element(&params, &path, &comp, Complex64::new(0.0, 0.0)).unwrap();
        let want = 1.0 / params.unperturbed_value::<f64>(3).to_c64();
        assert!((w - want).norm() < 1e-14);
    }

    #[test]
    fn weight_matches_term_by_term_product() {
        let params = prime_params(1, 3);
        let path = LatticePath::new(vec![1, 2, 3, 2], 3).unwrap();
        let comp = Composition::new(vec![2, 1]).unwrap();
        let z = 2.0 * params.unperturbed_value::<f64>(1).to_c64();
        let got = path_operator_element(&params, &path, &comp, z).unwrap();
        // marked positions: 0, 2, 3
        let a = |r: u64| params.unperturbed_value::<f64>(r).to_c64();
        let g = |m: u64| a(m) / (a(m) - z);
        let want = g(1) * g(3) * g(2) / a(2);
        assert!((got - want).norm() < 1e-13);
    }

    #[test]
    fn pole_is_reported() {
        let params = prime_params(1, 5);
        let path = LatticePath::new(vec![2, 3], 5).unwrap();
        let comp = Composition::new(vec![1]).unwrap();
        let z = params.unperturbed_value::<f64>(2).to_c64();
        assert!(matches!(
            path_operator_element(&params, &path, &comp, z),
            Err(RotorError::PoleHit { .. })
        ));
    }

    #[test]
    fn reverse_symmetry_of_weights() {
        // paths between mirror partners (a_{m0} = a_{ml}): the weight is
        // invariant under reversing both the path and the composition,
        // and the winding index flips sign.
        let params = prime_params(2, 7);
        let cases: &[(&[u64], &[u32])] = &[
            (&[2, 3, 4, 5, 6], &[2, 2]),
            (&[2, 1, 7, 6], &[1, 1, 1]),
            (&[3, 2, 3, 4, 5], &[1, 3]),
            (&[4, 5, 4], &[2]),
            (&[1, 7, 1, 2, 1, 7], &[1, 2, 2]),
        ];
        let z = Complex64::new(0.3, 0.6);
        for (sites, parts) in cases {
            let path = LatticePath::new(sites.to_vec(), 7).unwrap();
            let comp = Composition::new(parts.to_vec()).unwrap();
            let a = path_operator_element(&params, &path, &comp, z).unwrap();
            let b =
                path_operator_element(&params, &path.reversed(), &comp.reversed(), z).unwrap();
            assert!((a - b).norm() < 1e-12, "weights differ for {sites:?}");
            assert_eq!(path.winding(), -path.reversed().winding());
        }
    }

    #[test]
    fn dp_equals_enumeration() {
        for (p, q) in [(1u64, 5u64), (2, 5), (1, 7), (2, 13)] {
            let params = prime_params(p, q);
            for j in 1..=((q + 1) / 2) as usize {
                let c = path_sum_coefficient(&params, j).unwrap();
                assert!(
                    c.dp_vs_enum_gap < 1e-10,
                    "q={q} p={p} j={j}: gap {}",
                    c.dp_vs_enum_gap
                );
            }
        }
    }

    #[test]
    fn frozen_coefficient_magnitudes() {
        // values pinned from the validated composition sums
        let cases = [
            (1u64, 3u64, 1usize, 7.216878364870322e-2),
            (1, 3, 2, 4.1666666666666664e-2),
            (1, 5, 2, 6.961751638541404e-2),
            (1, 5, 3, 4.2690630859429764e-4),
            (1, 7, 1, 7.003735277229679e-5),
            (2, 7, 4, 1.0613232886993388e-4),
        ];
        for (p, q, j, want) in cases {
            let c = path_sum_coefficient(&prime_params(p, q), j).unwrap();
            let got = c.s.norm();
            assert!(
                (got - want).abs() / want < 1e-9,
                "q={q} p={p} j={j}: got {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn oracle_agrees_q3() {
        let params = prime_params(1, 3);
        for j in [1usize, 2] {
            let c = path_sum_coefficient(&params, j).unwrap();
            assert!(
                c.relative_gap.unwrap() < 0.02,
                "j={j} gap {:?}",
                c.relative_gap
            );
        }
    }

    #[test]
    fn budget_guard() {
        // q=37, j=1: alpha = 36 > 30
        let params = prime_params(1, 37);
        assert!(matches!(
            path_sum_coefficient(&params, 1),
            Err(RotorError::BudgetExceeded { alpha: 36 })
        ));
    }

    #[test]
    fn derivative_order_one_closed_form() {
        // q=1 band: phase = const − μ cos θ, derivative μ sin θ
        let params = validate_resonance(1, 1, 0.5, 0).unwrap();
        for mu in [1e-3, 5e-3, 1e-2] {
            let d = numerical_band_derivative(&params, 1, mu, FRAC_PI_2, 1e-3).unwrap();
            assert!((d - mu).abs() < 1e-6 * mu.max(1e-9), "mu={mu}: d={d}");
        }
    }

    #[test]
    fn derivative_anti_resonance_flat() {
        let params = validate_resonance(2, 2, 0.0, 0).unwrap();
        for theta in [0.3, FRAC_PI_2, 2.7] {
            let d = numerical_band_derivative(&params, 1, 1e-3, theta, 1e-3).unwrap();
            assert!(d.abs() < 1e-10, "theta={theta}: d={d:e}");
        }
    }

    #[test]
    fn derivative_vanishes_at_symmetry_points() {
        // sin θ profile: derivative ~ 0 at θ = π for a degenerate-pair band
        let params = prime_params(1, 5);
        let d_pi = numerical_band_derivative(&params, 2, 1e-3, PI, 1e-3).unwrap();
        let d_mid = numerical_band_derivative(&params, 2, 1e-3, FRAC_PI_2, 1e-3).unwrap();
        assert!(d_pi.abs() < 1e-2 * d_mid.abs());
    }

    #[test]
    fn sin_profile_is_odd_about_pi() {
        let params = prime_params(1, 5);
        let mu = 1e-3;
        let amp = numerical_band_derivative(&params, 2, mu, FRAC_PI_2, 1e-3)
            .unwrap()
            .abs();
        for k in 1..=8 {
            let theta = PI * k as f64 / 9.0;
            let d1 = numerical_band_derivative(&params, 2, mu, theta, 1e-3).unwrap();
            let d2 = numerical_band_derivative(&params, 2, mu, 2.0 * PI - theta, 1e-3).unwrap();
            assert!(
                (d1 + d2).abs() < 0.1 * amp,
                "odd-profile violation at theta={theta}: {d1:e} vs {d2:e}"
            );
        }
    }

    #[test]
    fn scaling_fit_q3() {
        let params = prime_params(1, 3);
        let mus = [1e-4, 2e-4, 5e-4, 1e-3];
        let s1 = scaling_fit(&params, 1, &mus).unwrap();
        assert!((s1 - 2.0).abs() < 0.05, "slope {s1}");
        let s2 = scaling_fit(&params, 2, &mus).unwrap();
        assert!((s2 - 3.0).abs() < 0.1, "slope {s2}");
    }

    #[test]
    fn scaling_fit_input_validation() {
        let params = prime_params(1, 3);
        assert!(matches!(
            scaling_fit(&params, 1, &[1e-3, 2e-3]),
            Err(RotorError::InsufficientData(_))
        ));
        assert!(matches!(
            scaling_fit(&params, 1, &[1e-3, 2e-3, 3e-3, 4e-3]),
            Err(RotorError::InsufficientData(_))
        ));
    }

    #[test]
    fn derivative_input_validation() {
        let params = prime_params(1, 3);
        assert!(numerical_band_derivative(&params, 1, 0.5, 1.0, 1e-3).is_err());
        assert!(numerical_band_derivative(&params, 1, 1e-3, 1.0, 1e-6).is_err());
    }
}
