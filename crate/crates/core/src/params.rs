//! Resonance parameters, arithmetic classification, and the unperturbed
//! spectrum with its degeneracy structure.
//!
//! A resonance of the kicked rotor is a commensurability τ = 2π P/Q together
//! with a quasi-momentum β satisfying β ≡ ν/P + Q/2 (mod 1). The reduced
//! fraction P/Q = p/q defines the order q; the resonance is primitive when
//! the length Q equals the order.

use crate::error::{Result, RotorError};
use crate::num::{Cx, Real};

const BETA_TOL: f64 = 1e-12;
const PHASE_CLASS_TOL: f64 = 1e-12;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The validated tuple (P, Q, p, q, ν, β, μ) with its classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonanceParams {
    pub big_p: u64,
    pub big_q: u64,
    pub p: u64,
    pub q: u64,
    pub nu: i64,
    /// Quasi-momentum, stored normalized to [0, 1).
    pub beta: f64,
    /// Kick strength, ≥ 0.
    pub mu: f64,
    /// Kick period 2πP/Q in radians.
    pub tau: f64,
    pub primitive: bool,
}

/// Checks the resonance condition for the given ν and returns the classified
/// parameters with μ = 0. Only the supplied ν is checked; see
/// [`admissible_nu`] to enumerate candidates.
pub fn validate_resonance(big_p: u64, big_q: u64, beta: f64, nu: i64) -> Result<ResonanceParams> {
    if big_p < 1 || big_q < 1 {
        return Err(RotorError::InvalidInput(format!(
            "P and Q must be >= 1, got P={big_p}, Q={big_q}"
        )));
    }
    if !beta.is_finite() {
        return Err(RotorError::InvalidInput("beta must be finite".into()));
    }
    let beta = beta.rem_euclid(1.0);
    let expected = (nu as f64 / big_p as f64 + big_q as f64 / 2.0).rem_euclid(1.0);
    // compare on the circle
    let diff = (beta - expected).rem_euclid(1.0);
    let circ = diff.min(1.0 - diff);
    if circ > BETA_TOL {
        return Err(RotorError::NotAResonance { beta, expected, nu });
    }
    let g = gcd(big_p, big_q);
    let (p, q) = (big_p / g, big_q / g);
    Ok(ResonanceParams {
        big_p,
        big_q,
        p,
        q,
        nu,
        beta,
        mu: 0.0,
        tau: core::f64::consts::TAU * big_p as f64 / big_q as f64,
        primitive: big_q == q,
    })
}

impl ResonanceParams {
    pub fn with_mu(mut self, mu: f64) -> Result<ResonanceParams> {
        if !(mu >= 0.0) {
            return Err(RotorError::InvalidInput(format!(
                "mu must be >= 0, got {mu}"
            )));
        }
        self.mu = mu;
        Ok(self)
    }

    /// True when β is the half-integer point the prime-order machinery
    /// assumes (β = 1/2 after normalization).
    pub fn is_half_beta(&self) -> bool {
        (self.beta - 0.5).abs() <= BETA_TOL
    }

    /// Exponent of e^{-iπ·k/(4q)} for a_r when 2β is an integer, reduced
    /// mod 8q. Exact integer arithmetic, so degeneracy classes are exact.
    fn phase_index(&self, r: u64) -> Option<u64> {
        let two_beta = 2.0 * self.beta;
        if (two_beta - two_beta.round()).abs() > BETA_TOL {
            return None;
        }
        let tb = two_beta.round() as i128;
        let m = 2 * (r as i128) - 2 + tb; // 2(r + beta - 1)
        let k = (self.p as i128 * m * m).rem_euclid(8 * self.q as i128);
        Some(k as u64)
    }

    /// a_r = e^{-iπ p (r + β - 1)² / q} for 1 ≤ r ≤ Q, in any real scalar.
    pub fn unperturbed_value<R: Real>(&self, r: u64) -> Cx<R> {
        debug_assert!(r >= 1 && r <= self.big_q);
        if let Some(k) = self.phase_index(r) {
            let angle = -R::PI * R::from_f64(k as f64) / R::from_f64(4.0 * self.q as f64);
            Cx::cis(angle)
        } else {
            let x = r as f64 + self.beta - 1.0;
            let angle = -R::PI * R::from_f64(self.p as f64) * R::from_f64(x * x)
                / R::from_f64(self.q as f64);
            Cx::cis(angle)
        }
    }
}

/// Enumerates ν in [0, P) compatible with β (convenience layer; the strict
/// check remains per-ν).
pub fn admissible_nu(big_p: u64, big_q: u64, beta: f64) -> Vec<i64> {
    let beta = beta.rem_euclid(1.0);
    (0..big_p as i64)
        .filter(|&nu| {
            let expected = (nu as f64 / big_p as f64 + big_q as f64 / 2.0).rem_euclid(1.0);
            let diff = (beta - expected).rem_euclid(1.0);
            diff.min(1.0 - diff) <= BETA_TOL
        })
        .collect()
}

/// Unperturbed eigenvalues a_r with their exact degeneracy classes.
#[derive(Clone, Debug)]
pub struct UnperturbedSpectrum {
    pub a: Vec<num_complex::Complex64>,
    /// Index sets (1-based r values) of equal a_r.
    pub classes: Vec<Vec<u64>>,
}

/// Computes a_r for 1 ≤ r ≤ Q and groups equal values. For half-integer 2β
/// the grouping uses exact integer phase keys; otherwise phases are compared
/// modulo 2π with absolute tolerance 1e-12.
pub fn unperturbed_eigenvalues(params: &ResonanceParams) -> UnperturbedSpectrum {
    let q_len = params.big_q;
    let a: Vec<num_complex::Complex64> = (1..=q_len)
        .map(|r| params.unperturbed_value::<f64>(r).to_c64())
        .collect();

    let mut classes: Vec<Vec<u64>> = Vec::new();
    if params.phase_index(1).is_some() {
        let mut by_key: Vec<(u64, u64)> = (1..=q_len)
            .map(|r| (params.phase_index(r).unwrap(), r))
            .collect();
        by_key.sort();
        let mut cur_key = None;
        for (k, r) in by_key {
            if cur_key == Some(k) {
                classes.last_mut().unwrap().push(r);
            } else {
                classes.push(vec![r]);
                cur_key = Some(k);
            }
        }
    } else {
        let mut items: Vec<(f64, u64)> = (1..=q_len)
            .map(|r| {
                let z = a[(r - 1) as usize];
                (z.arg().rem_euclid(core::f64::consts::TAU), r)
            })
            .collect();
        items.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        for (ph, r) in items {
            match classes.last_mut() {
                Some(c)
                    if {
                        let last = &a[(c[c.len() - 1] - 1) as usize];
                        let lastph = last.arg().rem_euclid(core::f64::consts::TAU);
                        let d = (ph - lastph).abs();
                        d.min(core::f64::consts::TAU - d) <= PHASE_CLASS_TOL
                    } =>
                {
                    c.push(r)
                }
                _ => classes.push(vec![r]),
            }
        }
        // wrap-around: first and last class may touch across 2π
        if classes.len() > 1 {
            let first_ph = a[(classes[0][0] - 1) as usize]
                .arg()
                .rem_euclid(core::f64::consts::TAU);
            let lc = classes.last().unwrap();
            let last_ph = a[(lc[lc.len() - 1] - 1) as usize]
                .arg()
                .rem_euclid(core::f64::consts::TAU);
            let d = (first_ph - last_ph).abs();
            if d.min(core::f64::consts::TAU - d) <= PHASE_CLASS_TOL {
                let tail = classes.pop().unwrap();
                classes[0].extend(tail);
            }
        }
    }
    for c in &mut classes {
        c.sort();
    }
    classes.sort();
    UnperturbedSpectrum { a, classes }
}

impl UnperturbedSpectrum {
    /// Class containing index r (1-based).
    pub fn class_of(&self, r: u64) -> &[u64] {
        self.classes
            .iter()
            .find(|c| c.contains(&r))
            .map(|c| c.as_slice())
            .expect("index within 1..=Q")
    }
}
