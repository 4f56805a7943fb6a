//! Dense complex linear algebra over a generic real scalar.
//!
//! Everything here is sized for the resonance blocks (dimension = resonance
//! length, at most a few hundred): cyclic Jacobi for Hermitian matrices and a
//! two-stage simultaneous diagonalization for unitary ones. The two-stage
//! scheme diagonalizes K = (U+U†)/2, then re-diagonalizes A = (U−U†)/(2i)
//! inside each K-eigenvalue cluster. On the unit circle a pair of eigenvalues
//! can collide in cos or in sin but not in both unless the eigenvalues
//! themselves are close, so every returned vector mixes only eigenvalues
//! within O(eps) of each other and the basis stays orthonormal through
//! degeneracies — which zgeev-style general solvers do not guarantee.

use crate::error::RotorError;
use crate::num::{Cx, Real};

#[derive(Clone, Debug)]
pub struct Mat<R> {
    n: usize,
    a: Vec<Cx<R>>,
}

impl<R: Real> Mat<R> {
    pub fn zeros(n: usize) -> Mat<R> {
        Mat {
            n,
            a: vec![Cx::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Mat<R> {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m[(i, i)] = Cx::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, o: &Mat<R>) -> Mat<R> {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut c = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                for j in 0..n {
                    c[(i, j)] = c[(i, j)] + aik * o[(k, j)];
                }
            }
        }
        c
    }

    pub fn adjoint(&self) -> Mat<R> {
        let n = self.n;
        let mut c = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                c[(j, i)] = self[(i, j)].conj();
            }
        }
        c
    }

    pub fn mul_vec(&self, v: &[Cx<R>]) -> Vec<Cx<R>> {
        let n = self.n;
        let mut out = vec![Cx::zero(); n];
        for i in 0..n {
            let mut s = Cx::zero();
            for j in 0..n {
                s = s + self[(i, j)] * v[j];
            }
            out[i] = s;
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Cx<R>> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    /// max_ij |(U†U − I)_ij|
    pub fn unitarity_defect(&self) -> R {
        let p = self.adjoint().mul(self);
        let mut worst = R::ZERO;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = if i == j {
                    p[(i, j)] - Cx::one()
                } else {
                    p[(i, j)]
                };
                worst = worst.maxv(d.abs());
            }
        }
        worst
    }

    /// |det| via LU with partial pivoting.
    pub fn abs_det(&self) -> R {
        let n = self.n;
        let mut a = self.a.clone();
        let mut det = R::ONE;
        for k in 0..n {
            let mut piv = k;
            let mut best = a[k * n + k].norm_sqr();
            for i in k + 1..n {
                let m = a[i * n + k].norm_sqr();
                if m > best {
                    best = m;
                    piv = i;
                }
            }
            if best == R::ZERO {
                return R::ZERO;
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
            }
            let pivot = a[k * n + k];
            det = det * pivot.abs();
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                for j in k + 1..n {
                    let t = a[k * n + j];
                    a[i * n + j] = a[i * n + j] - f * t;
                }
            }
        }
        det
    }

    pub fn entries_c64(&self) -> Vec<num_complex::Complex64> {
        self.a.iter().map(|z| z.to_c64()).collect()
    }
}

impl<R: Real> core::ops::Index<(usize, usize)> for Mat<R> {
    type Output = Cx<R>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<R> {
        &self.a[i * self.n + j]
    }
}

impl<R: Real> core::ops::IndexMut<(usize, usize)> for Mat<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<R> {
        &mut self.a[i * self.n + j]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi.
/// Returns eigenvalues ascending with matching orthonormal columns.
pub fn hermitian_eig<R: Real>(m: &Mat<R>) -> Result<(Vec<R>, Mat<R>), RotorError> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = Mat::identity(n);
    if n <= 1 {
        let vals = (0..n).map(|i| a[(i, i)].re).collect();
        return Ok((vals, v));
    }

    let mut scale = R::ZERO;
    for i in 0..n {
        for j in 0..n {
            scale = scale.maxv(a[(i, j)].abs());
        }
    }
    if scale == R::ZERO {
        return Ok((vec![R::ZERO; n], v));
    }
    let tol = scale * R::from_f64(R::EPS);

    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut off = R::ZERO;
        for p in 0..n {
            for q in p + 1..n {
                off = off.maxv(a[(p, q)].abs());
            }
        }
        if off <= tol {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
            let vals = order.iter().map(|&i| a[(i, i)].re).collect();
            let mut vv = Mat::zeros(n);
            for (newc, &oldc) in order.iter().enumerate() {
                for r in 0..n {
                    vv[(r, newc)] = v[(r, oldc)];
                }
            }
            return Ok((vals, vv));
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                let gm = g.abs();
                if gm <= tol {
                    continue;
                }
                // phase of the off-diagonal entry, then a real Jacobi rotation
                let eip = g.scale(R::ONE / gm);
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                // zero the (p,q) entry: |g| t² − (β−α) t − |g| = 0, take the
                // root of smaller magnitude
                let tau = (beta - alpha) / (gm + gm);
                let t = {
                    let root = (tau * tau + R::ONE).sqrt();
                    if tau >= R::ZERO {
                        -(R::ONE / (tau + root))
                    } else {
                        -(R::ONE / (tau - root))
                    }
                };
                let c = R::ONE / (t * t + R::ONE).sqrt();
                let s = t * c;
                // unitary: [[c, -s e^{i phi}], [s e^{-i phi}, c]]
                let spq = eip.scale(s);
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp.scale(c) + arq * spq.conj();
                    a[(r, q)] = arq.scale(c) - arp * spq;
                }
                for cidx in 0..n {
                    let apc = a[(p, cidx)];
                    let aqc = a[(q, cidx)];
                    a[(p, cidx)] = apc.scale(c) + aqc * spq;
                    a[(q, cidx)] = aqc.scale(c) - apc * spq.conj();
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp.scale(c) + vrq * spq.conj();
                    v[(r, q)] = vrq.scale(c) - vrp * spq;
                }
            }
        }
    }
    Err(RotorError::ConvergenceFailure {
        what: "Jacobi eigensolver did not converge".into(),
    })
}

/// One eigenpair of a unitary matrix.
#[derive(Clone, Debug)]
pub struct UnitaryEigenpair<R> {
    /// Eigenvalue renormalized to unit modulus.
    pub value: Cx<R>,
    pub vector: Vec<Cx<R>>,
    /// ‖Uv − wv‖₂
    pub residual: R,
}

/// Complete eigensystem of a unitary matrix via two-stage simultaneous
/// diagonalization of its Hermitian and anti-Hermitian parts.
/// Pairs come back sorted by principal eigenphase.
pub fn unitary_eig<R: Real>(u: &Mat<R>) -> Result<Vec<UnitaryEigenpair<R>>, RotorError> {
    let n = u.dim();
    let ua = u.adjoint();
    let mut k = Mat::zeros(n);
    let mut a = Mat::zeros(n);
    let half = R::from_f64(0.5);
    let mhalf_i = Cx::new(R::ZERO, -half);
    for i in 0..n {
        for j in 0..n {
            k[(i, j)] = (u[(i, j)] + ua[(i, j)]).scale(half);
            a[(i, j)] = (u[(i, j)] - ua[(i, j)]) * mhalf_i;
        }
    }
    let (kvals, mut w) = hermitian_eig(&k)?;

    // clusters of nearby cosines; stage two splits them by the sine part
    let cluster_tol = R::from_f64(1e-3);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (kvals[end] - kvals[end - 1]).abs() < cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let m = end - start;
            let mut block = Mat::zeros(m);
            // block = W_c† A W_c
            for bi in 0..m {
                let wi = w.column(start + bi);
                let awi = a.mul_vec(&wi);
                for bj in 0..m {
                    let wj = w.column(start + bj);
                    let mut s = Cx::zero();
                    for r in 0..n {
                        s = s + wj[r].conj() * awi[r];
                    }
                    block[(bj, bi)] = s;
                }
            }
            let (_, z) = hermitian_eig(&block)?;
            let cols: Vec<Vec<Cx<R>>> = (start..end).map(|c| w.column(c)).collect();
            for bj in 0..m {
                for r in 0..n {
                    let mut s = Cx::zero();
                    for bi in 0..m {
                        s = s + cols[bi][r] * z[(bi, bj)];
                    }
                    w[(r, start + bj)] = s;
                }
            }
        }
        start = end;
    }

    let mut pairs: Vec<UnitaryEigenpair<R>> = (0..n)
        .map(|c| {
            let v = w.column(c);
            let uv = u.mul_vec(&v);
            let mut ray = Cx::zero();
            for r in 0..n {
                ray = ray + v[r].conj() * uv[r];
            }
            let value = ray.scale(R::ONE / ray.abs());
            let mut rs = R::ZERO;
            for r in 0..n {
                rs = rs + (uv[r] - value * v[r]).norm_sqr();
            }
            UnitaryEigenpair {
                value,
                vector: v,
                residual: rs.sqrt(),
            }
        })
        .collect();
    pairs.sort_by(|x, y| x.value.arg().partial_cmp(&y.value.arg()).unwrap());
    Ok(pairs)
}

/// |⟨u, v⟩|
pub fn overlap<R: Real>(u: &[Cx<R>], v: &[Cx<R>]) -> R {
    let mut s = Cx::zero();
    for i in 0..u.len() {
        s = s + u[i].conj() * v[i];
    }
    s.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Dd;

    fn haar_ish_unitary(n: usize, seed: u64) -> Mat<f64> {
        // product of random complex Givens rotations: exactly unitary up to roundoff
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut rnd = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut u = Mat::identity(n);
        for p in 0..n {
            for q in p + 1..n {
                let th = rnd() * std::f64::consts::TAU;
                let ph = rnd() * std::f64::consts::TAU;
                let (s, c) = th.sin_cos();
                let e = Cx::cis(ph);
                let mut g = Mat::identity(n);
                g[(p, p)] = Cx::new(c, 0.0);
                g[(q, q)] = Cx::new(c, 0.0);
                g[(p, q)] = e.scale(s);
                g[(q, p)] = -e.conj().scale(s);
                u = u.mul(&g);
            }
        }
        for i in 0..n {
            let ph = rnd() * std::f64::consts::TAU;
            for r in 0..n {
                let t = u[(r, i)];
                u[(r, i)] = t * Cx::cis(ph);
            }
        }
        u
    }

    #[test]
    fn hermitian_eig_diagonalizes() {
        let n = 7;
        let u = haar_ish_unitary(n, 5);
        // H = U D U† with a known real spectrum
        let d: Vec<f64> = (0..n).map(|i| (i as f64) * 0.7 - 2.0).collect();
        let mut h = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = Cx::zero();
                for k in 0..n {
                    s = s + u[(i, k)].scale(d[k]) * u[(j, k)].conj();
                }
                h[(i, j)] = s;
            }
        }
        let (vals, v) = hermitian_eig(&h).unwrap();
        for i in 0..n {
            assert!((vals[i] - d[i]).abs() < 1e-13);
        }
        assert!(v.unitarity_defect() < 1e-13);
    }

    #[test]
    fn unitary_eig_residuals_and_gram() {
        for seed in 1..6u64 {
            let n = 9;
            let u = haar_ish_unitary(n, seed);
            let pairs = unitary_eig(&u).unwrap();
            assert_eq!(pairs.len(), n);
            for p in &pairs {
                assert!(p.residual < 1e-12, "residual {}", p.residual);
                assert!((p.value.abs() - 1.0).abs() < 1e-13);
            }
            for i in 0..n {
                for j in 0..n {
                    let mut s = Cx::zero();
                    for r in 0..n {
                        s = s + pairs[i].vector[r].conj() * pairs[j].vector[r];
                    }
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((s.abs() - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn unitary_eig_handles_exact_degeneracy() {
        // diag(i, i, -i) conjugated by a rotation: doubly degenerate +i
        let n = 3;
        let g = haar_ish_unitary(n, 11);
        let mut d = Mat::zeros(n);
        d[(0, 0)] = Cx::new(0.0, 1.0);
        d[(1, 1)] = Cx::new(0.0, 1.0);
        d[(2, 2)] = Cx::new(0.0, -1.0);
        let u = g.mul(&d).mul(&g.adjoint());
        let pairs = unitary_eig(&u).unwrap();
        for p in &pairs {
            assert!(p.residual < 1e-13);
        }
        let phases: Vec<f64> = pairs.iter().map(|p| p.value.arg()).collect();
        assert!((phases[0] + std::f64::consts::FRAC_PI_2).abs() < 1e-13);
        assert!((phases[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
        assert!((phases[2] - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn dd_unitary_eig_reaches_extended_precision() {
        // 2x2 with eigenphases ±(1e-18) around a base phase: f64 cannot see
        // the splitting, dd must resolve it to ~1e-30.
        let eps = 1e-18;
        let base = 0.4;
        let mut u: Mat<Dd> = Mat::zeros(2);
        // U = e^{i base} * R(eps) with R a rotation by eps in the (1,i) basis:
        // eigenvalues e^{i(base±eps)}
        let c = Dd::from_f64(eps).cos();
        let s = Dd::from_f64(eps).sin();
        let b = Cx::cis(Dd::from_f64(base));
        u[(0, 0)] = b.scale(c);
        u[(0, 1)] = b.scale(-s);
        u[(1, 0)] = b.scale(s);
        u[(1, 1)] = b.scale(c);
        let pairs = unitary_eig(&u).unwrap();
        // the split must be taken in dd; it is far below one f64 ulp of the
        // phases themselves
        let split = (pairs[1].value.arg() - pairs[0].value.arg()).abs().to_f64();
        assert!(
            (split - 2.0 * eps).abs() < 1e-28,
            "split {:e} want {:e}",
            split,
            2.0 * eps
        );
    }

    #[test]
    fn abs_det_of_unitary_is_one() {
        for seed in 1..4 {
            let u = haar_ish_unitary(6, seed);
            assert!((u.abs_det() - 1.0).abs() < 1e-12);
        }
    }
}
