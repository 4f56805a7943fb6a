//! Construction of the resonant Floquet blocks and the direct-integral
//! decomposition oracle.
//!
//! Two angle conventions coexist and are both exposed to keep them from
//! drifting silently:
//!   - the fiber angle ϑ ∈ [0, 2π/Q) parameterizes the block S(ϑ, μ);
//!   - the ring angle θ = qϑ ∈ [0, 2π) parameterizes the transformed block
//!     X(θ, μ) used by perturbation theory.
//!
//! S(ϑ, μ) = D(ϑ) G with D the diagonal of kick phases and G the Fourier
//! conjugate of diag(a_r). The one-period action of the full propagator on a
//! fiber is G D(ϑ) — the kick acts first — which is unitarily similar to
//! S(ϑ, μ) and therefore carries the same bands; `verify_direct_integral`
//! checks that ordering against a split-step grid oracle.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::error::{Result, RotorError};
use crate::linalg::Mat;
use crate::num::{Cx, Real};
use crate::params::ResonanceParams;

pub const UNITARITY_TOL: f64 = 1e-12;

/// Bloch angle in both conventions. Stored as the fiber angle ϑ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAngle {
    fiber: f64,
}

impl BlochAngle {
    /// From ϑ (the S-block convention, natural range [0, 2π/Q)).
    pub fn from_fiber(vartheta: f64) -> BlochAngle {
        BlochAngle { fiber: vartheta }
    }

    /// From θ = qϑ (the X-block convention, natural range [0, 2π)).
    pub fn from_ring(theta: f64, q: u64) -> BlochAngle {
        BlochAngle {
            fiber: theta / q as f64,
        }
    }

    pub fn fiber(&self) -> f64 {
        self.fiber
    }

    pub fn ring(&self, q: u64) -> f64 {
        self.fiber * q as f64
    }
}

/// Dense unitary matrix with the crate-wide unitarity contract.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix {
    mat: Mat<f64>,
}

impl UnitaryMatrix {
    /// Wraps a matrix, enforcing ‖U†U − I‖_max < 1e-12.
    pub fn new(mat: Mat<f64>) -> Result<UnitaryMatrix> {
        let defect = mat.unitarity_defect();
        if defect >= UNITARITY_TOL {
            return Err(RotorError::NotUnitary {
                defect,
                tol: UNITARITY_TOL,
            });
        }
        Ok(UnitaryMatrix { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)].to_c64()
    }

    pub fn as_mat(&self) -> &Mat<f64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<f64> {
        self.mat
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<Complex64> {
        self.mat.entries_c64()
    }
}

/// G_jk = (1/Q) Σ_s e^{2πi s(j−k)/Q} a_{s+1}, generic over the scalar.
pub fn g_matrix<R: Real>(params: &ResonanceParams) -> Mat<R> {
    let n = params.big_q as usize;
    let a: Vec<Cx<R>> = (1..=params.big_q)
        .map(|r| params.unperturbed_value::<R>(r))
        .collect();
    let inv_n = R::ONE / R::from_f64(n as f64);
    let mut g = Mat::zeros(n);
    // circulant: depends on (j - k) mod Q only
    let mut row0 = vec![Cx::<R>::zero(); n];
    for (d, slot) in row0.iter_mut().enumerate() {
        let mut s = Cx::zero();
        for (sidx, av) in a.iter().enumerate() {
            let ang = R::TAU * R::from_f64((sidx * d % n) as f64) * inv_n;
            s = s + *av * Cx::cis(ang);
        }
        *slot = s.scale(inv_n);
    }
    for j in 0..n {
        for k in 0..n {
            g[(j, k)] = row0[(j + n - k) % n];
        }
    }
    g
}

/// Diagonal of kick phases e^{-iμ cos(ϑ + 2π(j-1)/Q)}.
fn kick_diagonal<R: Real>(params: &ResonanceParams, vartheta: R) -> Vec<Cx<R>> {
    let n = params.big_q as usize;
    let mu = R::from_f64(params.mu);
    (0..n)
        .map(|j| {
            let ang = vartheta + R::TAU * R::from_f64(j as f64) / R::from_f64(n as f64);
            Cx::cis(-(mu * ang.cos()))
        })
        .collect()
}

/// S(ϑ, μ) = D(ϑ) G.
pub fn s_matrix<R: Real>(params: &ResonanceParams, vartheta: R) -> Mat<R> {
    let n = params.big_q as usize;
    let mut s = g_matrix::<R>(params);
    let d = kick_diagonal(params, vartheta);
    for j in 0..n {
        for k in 0..n {
            s[(j, k)] = d[j] * s[(j, k)];
        }
    }
    s
}

/// The hopping matrix V(θ): nearest-neighbour couplings 1/2 with corner
/// phases e^{±iθ}.
pub fn hopping_matrix<R: Real>(q: usize, theta: R) -> Mat<R> {
    let mut v = Mat::zeros(q);
    let half = R::from_f64(0.5);
    for j in 0..q.saturating_sub(1) {
        v[(j, j + 1)] = v[(j, j + 1)] + Cx::new(half, R::ZERO);
        v[(j + 1, j)] = v[(j + 1, j)] + Cx::new(half, R::ZERO);
    }
    let corner = Cx::cis(theta).scale(half);
    v[(0, q - 1)] = v[(0, q - 1)] + corner;
    v[(q - 1, 0)] = v[(q - 1, 0)] + corner.conj();
    v
}

/// X(θ, μ) = C e^{-iμV(θ)}, for primitive resonances at β = 1/2.
/// The exponential is taken through the eigendecomposition of V.
pub fn x_matrix<R: Real>(params: &ResonanceParams, theta: R) -> Result<Mat<R>> {
    if !params.primitive {
        return Err(RotorError::UnsupportedParams(format!(
            "X block needs a primitive resonance, got Q={} != q={}",
            params.big_q, params.q
        )));
    }
    if !params.is_half_beta() {
        return Err(RotorError::UnsupportedParams(format!(
            "X block is parameterized for beta = 1/2, got beta = {}",
            params.beta
        )));
    }
    let q = params.q as usize;
    let c: Vec<Cx<R>> = (1..=params.q)
        .map(|r| params.unperturbed_value::<R>(r))
        .collect();
    if params.mu == 0.0 {
        let mut x = Mat::zeros(q);
        for (j, cj) in c.iter().enumerate() {
            x[(j, j)] = *cj;
        }
        return Ok(x);
    }
    let v = hopping_matrix(q, theta);
    let (vals, w) = crate::linalg::hermitian_eig(&v)?;
    let mu = R::from_f64(params.mu);
    let phases: Vec<Cx<R>> = vals.iter().map(|&l| Cx::cis(-(mu * l))).collect();
    let mut x = Mat::zeros(q);
    for i in 0..q {
        for j in 0..q {
            let mut s = Cx::zero();
            for k in 0..q {
                s = s + w[(i, k)] * phases[k] * w[(j, k)].conj();
            }
            x[(i, j)] = c[i] * s;
        }
    }
    Ok(x)
}

/// Spec-facing f64 builders with the unitarity contract applied.
pub fn build_g(params: &ResonanceParams) -> Result<UnitaryMatrix> {
    UnitaryMatrix::new(g_matrix::<f64>(params))
}

pub fn build_s(params: &ResonanceParams, vartheta: f64) -> Result<UnitaryMatrix> {
    UnitaryMatrix::new(s_matrix::<f64>(params, vartheta))
}

pub fn build_x(params: &ResonanceParams, theta: f64) -> Result<UnitaryMatrix> {
    UnitaryMatrix::new(x_matrix::<f64>(params, theta)?)
}

/// One split-step application of the full propagator on an angle grid:
/// kick phase pointwise, then the kinetic phase e^{-iτ(n+β)²/2} on the
/// symmetric momentum window.
fn grid_propagate(params: &ResonanceParams, psi: &[Complex64]) -> Vec<Complex64> {
    let m = psi.len();
    let tau_half = std::f64::consts::PI * params.big_p as f64 / params.big_q as f64;
    let mut buf: Vec<Complex64> = psi
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let theta = std::f64::consts::TAU * idx as f64 / m as f64;
            z * Complex64::from_polar(1.0, -params.mu * theta.cos())
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    fwd.process(&mut buf);
    for (idx, z) in buf.iter_mut().enumerate() {
        let n = if idx < m.div_ceil(2) {
            idx as f64
        } else {
            idx as f64 - m as f64
        };
        let w = n + params.beta;
        *z *= Complex64::from_polar(1.0, -tau_half * w * w);
    }
    inv.process(&mut buf);
    let scale = 1.0 / m as f64;
    buf.iter_mut().for_each(|z| *z *= scale);
    buf
}

/// Same step through the Bloch fibers: gather each fiber, apply the kick
/// diagonal then G, scatter back.
fn blockwise_propagate(params: &ResonanceParams, psi: &[Complex64]) -> Vec<Complex64> {
    let m = psi.len();
    let nq = params.big_q as usize;
    let fibers = m / nq;
    let g = g_matrix::<f64>(params);
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..fibers {
        let vartheta = std::f64::consts::TAU * k as f64 / m as f64;
        let d = kick_diagonal::<f64>(params, vartheta);
        let fiber: Vec<Cx<f64>> = (0..nq)
            .map(|j| Cx::from_c64(psi[k + j * fibers]) * d[j])
            .collect();
        let moved = g.mul_vec(&fiber);
        for j in 0..nq {
            out[k + j * fibers] = moved[j].to_c64();
        }
    }
    out
}

/// Applies the propagator once on a grid and once blockwise under the Bloch
/// map, returning the maximum pointwise discrepancy.
///
/// `psi` defaults to a seed-deterministic pseudo-random state; resolving its
/// momentum content is the caller's responsibility via `grid_points`.
pub fn verify_direct_integral(
    params: &ResonanceParams,
    grid_points: usize,
    psi: Option<Vec<Complex64>>,
    seed: u64,
) -> Result<f64> {
    if grid_points == 0 || grid_points % params.big_q as usize != 0 {
        return Err(RotorError::GridMismatch {
            grid_points,
            q_len: params.big_q,
        });
    }
    let psi = match psi {
        Some(v) => {
            if v.len() != grid_points {
                return Err(RotorError::InvalidInput(format!(
                    "psi length {} != grid_points {}",
                    v.len(),
                    grid_points
                )));
            }
            v
        }
        None => random_state(grid_points, seed),
    };
    let a = grid_propagate(params, &psi);
    let b = blockwise_propagate(params, &psi);
    Ok(a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Normalized pseudo-random state, deterministic in the seed.
pub fn random_state(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_resonance;
    use std::f64::consts::{PI, TAU};

    fn anti() -> ResonanceParams {
        validate_resonance(2, 2, 0.0, 0).unwrap()
    }

    #[test]
    fn g_anti_resonance_is_swap() {
        let g = build_g(&anti()).unwrap();
        let want = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        for (z, w) in g.entries().iter().zip(want) {
            assert!((z - w).norm() < 1e-15);
        }
    }

    #[test]
    fn g_order_one_is_scalar() {
        let p = validate_resonance(1, 1, 0.5, 0).unwrap();
        let g = build_g(&p).unwrap();
        assert_eq!(g.dim(), 1);
        let a1 = Complex64::from_polar(1.0, -PI * 0.25);
        assert!((g.entry(0, 0) - a1).norm() < 1e-15);
    }

    #[test]
    fn g_spectrum_is_unperturbed_multiset() {
        for (bp, bq, beta) in [(1, 3, 0.5), (2, 5, 0.5), (1, 12, 0.0), (2, 2, 0.0)] {
            let p = validate_resonance(bp, bq, beta, 0).unwrap();
            let g = build_g(&p).unwrap();
            let pairs = crate::linalg::unitary_eig(g.as_mat()).unwrap();
            let mut got: Vec<f64> = pairs.iter().map(|e| e.value.arg()).collect();
            let spec = crate::params::unperturbed_eigenvalues(&p);
            let mut want: Vec<f64> = spec.a.iter().map(|z| z.arg()).collect();
            got.sort_by(|a, b| a.partial_cmp(b).unwrap());
            want.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (g_, w_) in got.iter().zip(&want) {
                assert!((g_ - w_).abs() < 1e-12, "{bp}/{bq}: {g_} vs {w_}");
            }
        }
    }

    #[test]
    fn s_at_mu_zero_equals_g_exactly() {
        let p = validate_resonance(1, 3, 0.5, 0).unwrap();
        let g = g_matrix::<f64>(&p);
        let s = s_matrix::<f64>(&p, 0.77);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s[(i, j)].to_c64(), g[(i, j)].to_c64());
            }
        }
    }

    #[test]
    fn s_order_one_closed_form() {
        let p = validate_resonance(1, 1, 0.5, 0)
            .unwrap()
            .with_mu(0.8)
            .unwrap();
        for vt in [0.0, 0.3, 2.0] {
            let s = build_s(&p, vt).unwrap();
            let want = Complex64::from_polar(1.0, -PI * 0.25 - 0.8 * vt.cos());
            assert!((s.entry(0, 0) - want).norm() < 1e-15);
        }
    }

    #[test]
    fn anti_resonance_eigenvalues_pm_one() {
        let p = anti().with_mu(1.7).unwrap();
        for vt in [0.1, 0.9, 2.5] {
            let s = build_s(&p, vt).unwrap();
            let pairs = crate::linalg::unitary_eig(s.as_mat()).unwrap();
            let mut phases: Vec<f64> = pairs.iter().map(|e| e.value.arg()).collect();
            phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!((phases[0].abs() - PI).abs() < 1e-12 || phases[0].abs() < 1e-12);
            assert!(
                (pairs[0].value.to_c64() + pairs[1].value.to_c64()).norm() < 1e-12,
                "eigenvalues should be ±1"
            );
        }
    }

    #[test]
    fn x_at_mu_zero_is_c_exactly() {
        let p = validate_resonance(1, 5, 0.5, 0).unwrap();
        let x = x_matrix::<f64>(&p, 1.3).unwrap();
        for j in 0..5 {
            let want = p.unperturbed_value::<f64>(j as u64 + 1).to_c64();
            assert_eq!(x[(j, j)].to_c64(), want);
            for k in 0..5 {
                if k != j {
                    assert_eq!(x[(j, k)].to_c64(), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn hopping_at_zero_is_circulant_with_cosine_spectrum() {
        let q = 7;
        let v = hopping_matrix::<f64>(q, 0.0);
        let (vals, _) = crate::linalg::hermitian_eig(&v).unwrap();
        let mut want: Vec<f64> = (0..q).map(|k| (TAU * k as f64 / q as f64).cos()).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g_, w_) in vals.iter().zip(&want) {
            assert!((g_ - w_).abs() < 1e-13);
        }
    }

    #[test]
    fn x_spectrum_matches_s_spectrum() {
        for (p_, q_) in [(1u64, 3u64), (2, 5), (1, 7)] {
            let params = validate_resonance(p_, q_, 0.5, 0)
                .unwrap()
                .with_mu(0.9)
                .unwrap();
            for theta in [0.4, 2.0, 5.5] {
                let x = x_matrix::<f64>(&params, theta).unwrap();
                let s = s_matrix::<f64>(&params, theta / q_ as f64);
                let ex = crate::linalg::unitary_eig(&x).unwrap();
                let es = crate::linalg::unitary_eig(&s).unwrap();
                for (a, b) in ex.iter().zip(&es) {
                    assert!(
                        (a.value.to_c64() - b.value.to_c64()).norm() < 1e-10,
                        "spectra differ at q={q_} theta={theta}"
                    );
                }
            }
        }
    }

    #[test]
    fn x_periodic_in_theta() {
        let params = validate_resonance(1, 5, 0.5, 0)
            .unwrap()
            .with_mu(1.1)
            .unwrap();
        let x1 = x_matrix::<f64>(&params, 0.9).unwrap();
        let x2 = x_matrix::<f64>(&params, 0.9 + TAU).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((x1[(i, j)].to_c64() - x2[(i, j)].to_c64()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn x_rejects_non_primitive_and_wrong_beta() {
        let e = x_matrix::<f64>(&anti(), 0.0).unwrap_err();
        assert!(matches!(e, RotorError::UnsupportedParams(_)));
        let p2 = validate_resonance(1, 2, 0.0, 0).unwrap();
        assert!(matches!(
            x_matrix::<f64>(&p2, 0.0),
            Err(RotorError::UnsupportedParams(_))
        ));
    }

    #[test]
    fn direct_integral_small_errors() {
        let cases = [
            (2u64, 2u64, 0.0, 1.0, 128usize),
            (1, 3, 0.5, 1.0, 192),
            (2, 5, 0.5, 0.7, 160),
        ];
        for (bp, bq, beta, mu, m) in cases {
            let p = validate_resonance(bp, bq, beta, 0)
                .unwrap()
                .with_mu(mu)
                .unwrap();
            let err = verify_direct_integral(&p, m, None, 42).unwrap();
            assert!(err < 1e-10, "P={bp} Q={bq}: err {err:e}");
        }
    }

    #[test]
    fn direct_integral_mu_zero_tighter() {
        let p = validate_resonance(1, 3, 0.5, 0).unwrap();
        let err = verify_direct_integral(&p, 192, None, 7).unwrap();
        assert!(err < 1e-12);
    }

    #[test]
    fn direct_integral_grid_mismatch() {
        let p = validate_resonance(1, 3, 0.5, 0).unwrap();
        assert!(matches!(
            verify_direct_integral(&p, 128, None, 0),
            Err(RotorError::GridMismatch { .. })
        ));
    }

    #[test]
    fn det_g_modulus_one() {
        for (bp, bq, beta) in [(1u64, 3u64, 0.5), (1, 12, 0.0), (2, 2, 0.0)] {
            let p = validate_resonance(bp, bq, beta, 0).unwrap();
            let g = g_matrix::<f64>(&p);
            assert!((g.abs_det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_angle_conventions() {
        let b = BlochAngle::from_ring(2.1, 3);
        assert!((b.fiber() - 0.7).abs() < 1e-15);
        assert!((b.ring(3) - 2.1).abs() < 1e-15);
        let b2 = BlochAngle::from_fiber(0.7);
        assert!((b2.ring(3) - 2.1).abs() < 1e-15);
    }
}
