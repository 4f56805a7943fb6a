//! Eigenphase extraction, band tracking over the Bloch angle, width and
//! flatness measurement, and the leading-block determinant criterion.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, RotorError};
use crate::floquet::{g_matrix, s_matrix, UnitaryMatrix};
use crate::linalg::{overlap, unitary_eig, Mat, UnitaryEigenpair};
use crate::num::{phase_step, Cx, Real};
use crate::params::{unperturbed_eigenvalues, ResonanceParams};

pub const DEFAULT_FLATNESS_THRESHOLD: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 256;
const MAX_GRID: usize = 4096;
const AMBIGUITY_TOL: f64 = 1e-6;

/// Complete eigensystem of a unitary matrix: unimodular eigenvalues sorted by
/// principal phase, orthonormal eigenvectors, and per-pair residuals.
#[derive(Clone, Debug)]
pub struct EigenSolution {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
}

/// Eigen-decomposes a unitary matrix. Deterministic ordering by
/// principal-value phase.
pub fn eigenphases(u: &UnitaryMatrix) -> Result<EigenSolution> {
    let pairs = unitary_eig(u.as_mat())?;
    Ok(EigenSolution {
        eigenvalues: pairs.iter().map(|p| p.value.to_c64()).collect(),
        eigenvectors: pairs
            .iter()
            .map(|p| p.vector.iter().map(|z| z.to_c64()).collect())
            .collect(),
        residuals: pairs.iter().map(|p| p.residual).collect(),
    })
}

/// Eigenphase curves over the Bloch-angle grid.
#[derive(Clone, Debug)]
pub struct BandStructure {
    /// Fiber angles ϑ_k, half-open uniform grid on [0, 2π/Q).
    pub grid: Vec<f64>,
    /// Unwrapped eigenphases, `phases[band][grid_index]`, in radians.
    pub phases: Vec<Vec<f64>>,
    /// Band labels j (1-based), tied to a_j at μ → 0.
    pub labels: Vec<u64>,
    /// Total phase extent per band.
    pub widths: Vec<f64>,
}

/// Start vectors at μ = 0 in the S frame: Fourier columns of G, combined
/// into symmetric/antisymmetric pairs inside two-fold degeneracy classes.
pub(crate) fn s_frame_start_basis<R: Real>(params: &ResonanceParams) -> Vec<Vec<Cx<R>>> {
    let n = params.big_q as usize;
    let norm = R::ONE / R::from_f64(n as f64).sqrt();
    let fourier = |s: usize| -> Vec<Cx<R>> {
        (0..n)
            .map(|j| {
                Cx::cis(R::TAU * R::from_f64((s * j % n) as f64) / R::from_f64(n as f64))
                    .scale(norm)
            })
            .collect()
    };
    combine_pairs(params, (0..n).map(fourier).collect())
}

/// Start vectors at μ = 0 in the X frame: canonical basis with the same
/// pair combinations.
pub(crate) fn x_frame_start_basis<R: Real>(params: &ResonanceParams) -> Vec<Vec<Cx<R>>> {
    let n = params.big_q as usize;
    let canonical = |s: usize| -> Vec<Cx<R>> {
        let mut v = vec![Cx::zero(); n];
        v[s] = Cx::one();
        v
    };
    combine_pairs(params, (0..n).map(canonical).collect())
}

fn combine_pairs<R: Real>(
    params: &ResonanceParams,
    mut basis: Vec<Vec<Cx<R>>>,
) -> Vec<Vec<Cx<R>>> {
    let spec = unperturbed_eigenvalues(params);
    let inv_sqrt2 = R::ONE / R::from_f64(2.0).sqrt();
    for class in spec.classes.iter().filter(|c| c.len() == 2) {
        let (lo, hi) = ((class[0] - 1) as usize, (class[1] - 1) as usize);
        let plus: Vec<Cx<R>> = basis[lo]
            .iter()
            .zip(&basis[hi])
            .map(|(x, y)| (*x + *y).scale(inv_sqrt2))
            .collect();
        let minus: Vec<Cx<R>> = basis[lo]
            .iter()
            .zip(&basis[hi])
            .map(|(x, y)| (*x - *y).scale(inv_sqrt2))
            .collect();
        basis[lo] = plus;
        basis[hi] = minus;
    }
    basis
}

/// Matches tracked bands onto a fresh eigensystem by maximal overlap.
/// Returns the pair index assigned to each band.
pub(crate) fn match_by_overlap<R: Real>(
    prev: &[Vec<Cx<R>>],
    pairs: &[UnitaryEigenpair<R>],
    context: (usize, f64),
) -> Result<Vec<usize>> {
    let n = prev.len();
    let mut scored: Vec<(f64, usize, usize)> = Vec::with_capacity(n * pairs.len());
    for (a, pv) in prev.iter().enumerate() {
        let mut best = f64::NEG_INFINITY;
        let mut second = f64::NEG_INFINITY;
        for (b, pair) in pairs.iter().enumerate() {
            let ov = overlap(pv, &pair.vector).to_f64();
            scored.push((ov, a, b));
            if ov > best {
                second = best;
                best = ov;
            } else if ov > second {
                second = ov;
            }
        }
        if best - second < AMBIGUITY_TOL {
            return Err(RotorError::TrackingAmbiguity {
                grid_index: context.0,
                theta: context.1,
                best,
                second,
            });
        }
    }
    scored.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .unwrap()
            .then(x.1.cmp(&y.1))
            .then(x.2.cmp(&y.2))
    });
    let mut out = vec![usize::MAX; n];
    let mut used = vec![false; pairs.len()];
    let mut assigned = 0;
    for (_, a, b) in scored {
        if out[a] == usize::MAX && !used[b] {
            out[a] = b;
            used[b] = true;
            assigned += 1;
            if assigned == n {
                break;
            }
        }
    }
    Ok(out)
}

/// Geometric μ ladder from a seed scale up to the target.
pub(crate) fn mu_ladder(mu: f64) -> Vec<f64> {
    const SEED: f64 = 0.02;
    if mu == 0.0 {
        return vec![0.0];
    }
    let mut rungs = vec![mu];
    let mut m = mu;
    while m > SEED {
        m /= 2.0;
        rungs.push(m);
    }
    rungs.reverse();
    rungs
}

/// First-rung label assignment, degeneracy-class aware. Pairs are matched to
/// unperturbed classes by their projection weight onto the class subspace;
/// inside a two-fold class the ± combination decides which member is which,
/// inside larger classes members are ordered by principal phase (the limit
/// basis there is a property of the perturbation, not of the labels, and no
/// observable depends on the within-class order).
fn assign_first_rung<R: Real>(
    params: &ResonanceParams,
    start: &[Vec<Cx<R>>],
    pairs: &[UnitaryEigenpair<R>],
) -> Result<Vec<usize>> {
    let n = start.len();
    let spec = unperturbed_eigenvalues(params);
    let mut scored: Vec<(f64, usize, usize)> = Vec::new(); // (weight, class, pair)
    for (ci, class) in spec.classes.iter().enumerate() {
        for (b, pair) in pairs.iter().enumerate() {
            let mut w = R::ZERO;
            for &r in class {
                let ov = overlap(&start[(r - 1) as usize], &pair.vector);
                w = w + ov * ov;
            }
            scored.push((w.to_f64(), ci, b));
        }
    }
    scored.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .unwrap()
            .then(x.1.cmp(&y.1))
            .then(x.2.cmp(&y.2))
    });
    let mut class_members: Vec<Vec<usize>> = vec![Vec::new(); spec.classes.len()];
    let mut used = vec![false; pairs.len()];
    let mut left = n;
    for (_, ci, b) in scored {
        if used[b] || class_members[ci].len() == spec.classes[ci].len() {
            continue;
        }
        used[b] = true;
        class_members[ci].push(b);
        left -= 1;
        if left == 0 {
            break;
        }
    }
    let mut out = vec![usize::MAX; n];
    for (ci, class) in spec.classes.iter().enumerate() {
        let members = &mut class_members[ci];
        if class.len() == 2 {
            // the + combination seeds the lower label
            let lo = (class[0] - 1) as usize;
            let o0 = overlap(&start[lo], &pairs[members[0]].vector).to_f64();
            let o1 = overlap(&start[lo], &pairs[members[1]].vector).to_f64();
            if o1 > o0 {
                members.swap(0, 1);
            }
        } else if class.len() > 2 {
            members.sort_by(|&x, &y| {
                pairs[x]
                    .value
                    .arg()
                    .partial_cmp(&pairs[y].value.arg())
                    .unwrap()
                    .then(x.cmp(&y))
            });
        }
        for (&r, &b) in class.iter().zip(members.iter()) {
            out[(r - 1) as usize] = b;
        }
    }
    Ok(out)
}

/// Labels the eigensystem at one fiber angle by continuing each band from
/// μ = 0 through the ladder. Returns pair indices in label order.
fn seed_labels<R: Real>(
    params: &ResonanceParams,
    vartheta: R,
    start: &[Vec<Cx<R>>],
) -> Result<(Vec<UnitaryEigenpair<R>>, Vec<usize>)> {
    let rungs = mu_ladder(params.mu);
    let first = params.with_mu(rungs[0]).expect("rungs are nonnegative");
    let pairs = unitary_eig(&s_matrix(&first, vartheta))?;
    let mut assignment = assign_first_rung(params, start, &pairs)?;
    let mut tracked: Vec<Vec<Cx<R>>> = assignment
        .iter()
        .map(|&b| pairs[b].vector.clone())
        .collect();
    let mut final_pairs = pairs;
    for &rung in &rungs[1..] {
        let p = params.with_mu(rung).expect("rungs are nonnegative");
        let pairs = unitary_eig(&s_matrix(&p, vartheta))?;
        assignment = match_by_overlap(&tracked, &pairs, (0, vartheta.to_f64()))?;
        tracked = assignment
            .iter()
            .map(|&b| pairs[b].vector.clone())
            .collect();
        final_pairs = pairs;
    }
    Ok((final_pairs, assignment))
}

fn sweep_attempt(params: &ResonanceParams, grid_size: usize) -> Result<BandStructure> {
    let n = params.big_q as usize;
    let cell = std::f64::consts::TAU / params.big_q as f64;
    let grid: Vec<f64> = (0..grid_size)
        .map(|k| cell * k as f64 / grid_size as f64)
        .collect();

    let systems: Vec<Result<Vec<UnitaryEigenpair<f64>>>> = grid
        .par_iter()
        .map(|&vt| unitary_eig(&s_matrix::<f64>(params, vt)))
        .collect();
    let mut systems_ok = Vec::with_capacity(grid_size);
    for s in systems {
        systems_ok.push(s?);
    }

    let start = s_frame_start_basis::<f64>(params);
    let (pairs0, order0) = seed_labels(params, grid[0], &start)?;

    let mut phases: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut prev_vecs: Vec<Vec<Cx<f64>>> = Vec::with_capacity(n);
    let mut prev_vals: Vec<Cx<f64>> = Vec::with_capacity(n);
    for &b in &order0 {
        phases.push(vec![pairs0[b].value.arg()]);
        prev_vecs.push(pairs0[b].vector.clone());
        prev_vals.push(pairs0[b].value);
    }

    for (k, pairs) in systems_ok.iter().enumerate().skip(1) {
        let assignment = match_by_overlap(&prev_vecs, pairs, (k, grid[k]))?;
        for (band, &b) in assignment.iter().enumerate() {
            let step = phase_step(pairs[b].value, prev_vals[band]);
            if step.abs() >= std::f64::consts::FRAC_PI_2 {
                return Err(RotorError::TrackingAmbiguity {
                    grid_index: k,
                    theta: grid[k],
                    best: step.abs(),
                    second: std::f64::consts::FRAC_PI_2,
                });
            }
            let last = *phases[band].last().unwrap();
            phases[band].push(last + step);
            prev_vecs[band] = pairs[b].vector.clone();
            prev_vals[band] = pairs[b].value;
        }
    }

    let widths = phases
        .iter()
        .map(|ph| {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &p in ph {
                lo = lo.min(p);
                hi = hi.max(p);
            }
            hi - lo
        })
        .collect();
    Ok(BandStructure {
        grid,
        phases,
        labels: (1..=params.big_q).collect(),
        widths,
    })
}

/// Tracks all Q bands of S(ϑ, μ) across a uniform fiber grid.
///
/// Labels are assigned by μ-homotopy at the first grid point and carried
/// across ϑ by maximal eigenvector overlap; the grid is doubled (up to 4096)
/// when the matching is ambiguous.
pub fn sweep_bands(params: &ResonanceParams, grid_size: usize) -> Result<BandStructure> {
    if grid_size < 8 {
        return Err(RotorError::InvalidInput(format!(
            "grid_size must be >= 8, got {grid_size}"
        )));
    }
    let mut size = grid_size;
    loop {
        match sweep_attempt(params, size) {
            Err(RotorError::TrackingAmbiguity { .. }) if size < MAX_GRID => size *= 2,
            other => return other,
        }
    }
}

/// Total unwrapped phase extent per band. Exactly zero only when every
/// sample of a band coincides.
pub fn band_widths(bands: &BandStructure) -> Vec<f64> {
    bands.widths.clone()
}

/// True where a band is flat at the given threshold (width < threshold).
pub fn flatness_test(bands: &BandStructure, threshold: f64) -> Vec<bool> {
    debug_assert!(threshold > 0.0);
    bands.widths.iter().map(|&w| w < threshold).collect()
}

/// |det G^(d)| with d = ⌊(Q+1)/2⌋: the singularity criterion separating
/// flat-band candidates (singular) from primitive resonances (nonsingular).
pub fn gd_determinant(params: &ResonanceParams) -> f64 {
    let g = g_matrix::<f64>(params);
    let d = ((params.big_q + 1) / 2) as usize;
    let mut block: Mat<f64> = Mat::zeros(d);
    for i in 0..d {
        for j in 0..d {
            block[(i, j)] = g[(i, j)];
        }
    }
    block.abs_det()
}

/// Nearest-phase tracking twin of `sweep_attempt`, used to cross-check the
/// overlap tracker where eigenphase gaps are comfortably larger than the
/// per-step motion.
pub fn sweep_bands_nearest_phase(
    params: &ResonanceParams,
    grid_size: usize,
) -> Result<BandStructure> {
    let n = params.big_q as usize;
    let cell = std::f64::consts::TAU / params.big_q as f64;
    let grid: Vec<f64> = (0..grid_size)
        .map(|k| cell * k as f64 / grid_size as f64)
        .collect();
    let start = s_frame_start_basis::<f64>(params);
    let (pairs0, order0) = seed_labels(params, grid[0], &start)?;
    let mut phases: Vec<Vec<f64>> = order0
        .iter()
        .map(|&b| vec![pairs0[b].value.arg()])
        .collect();
    let mut prev_vals: Vec<Cx<f64>> = order0.iter().map(|&b| pairs0[b].value).collect();

    for &vt in grid.iter().skip(1) {
        let pairs = unitary_eig(&s_matrix::<f64>(params, vt))?;
        let mut used = vec![false; n];
        for band in 0..n {
            let (mut bi, mut bd) = (usize::MAX, f64::INFINITY);
            for (b, pair) in pairs.iter().enumerate() {
                if used[b] {
                    continue;
                }
                let d = phase_step(pair.value, prev_vals[band]).abs();
                if d < bd {
                    bd = d;
                    bi = b;
                }
            }
            used[bi] = true;
            let last = *phases[band].last().unwrap();
            phases[band].push(last + phase_step(pairs[bi].value, prev_vals[band]));
            prev_vals[band] = pairs[bi].value;
        }
    }
    let widths = phases
        .iter()
        .map(|ph| ph.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - ph.iter().cloned().fold(f64::INFINITY, f64::min))
        .collect();
    Ok(BandStructure {
        grid,
        phases,
        labels: (1..=params.big_q).collect(),
        widths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::build_g;
    use crate::params::validate_resonance;
    use std::f64::consts::PI;

    #[test]
    fn eigenphases_identity() {
        let u = UnitaryMatrix::new(Mat::identity(3)).unwrap();
        let sol = eigenphases(&u).unwrap();
        for w in &sol.eigenvalues {
            assert!((w - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn eigenphases_of_g_match_unperturbed() {
        let p = validate_resonance(1, 3, 0.5, 0).unwrap();
        let sol = eigenphases(&build_g(&p).unwrap()).unwrap();
        let spec = unperturbed_eigenvalues(&p);
        for w in &sol.eigenvalues {
            let d = spec.a.iter().map(|a| (a - w).norm()).fold(1.0, f64::min);
            assert!(d < 1e-12);
        }
        for r in &sol.residuals {
            assert!(*r < 1e-10);
        }
    }

    #[test]
    fn eigenphases_anti_resonance_kicked() {
        let p = validate_resonance(2, 2, 0.0, 0)
            .unwrap()
            .with_mu(1.7)
            .unwrap();
        let s = crate::floquet::build_s(&p, 0.4).unwrap();
        let sol = eigenphases(&s).unwrap();
        let mut found = [false, false];
        for w in &sol.eigenvalues {
            if (w - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
                found[0] = true;
            }
            if (w + Complex64::new(1.0, 0.0)).norm() < 1e-12 {
                found[1] = true;
            }
        }
        assert!(found[0] && found[1]);
    }

    #[test]
    fn rejects_non_unitary() {
        let mut m: Mat<f64> = Mat::identity(2);
        m[(0, 0)] = Cx::new(1.5, 0.0);
        assert!(matches!(
            UnitaryMatrix::new(m),
            Err(RotorError::NotUnitary { .. })
        ));
    }

    #[test]
    fn single_band_order_one() {
        // q=1: phase is const - mu cos(theta); width 2*mu
        let p = validate_resonance(1, 1, 0.5, 0)
            .unwrap()
            .with_mu(0.5)
            .unwrap();
        let b = sweep_bands(&p, 256).unwrap();
        assert_eq!(b.phases.len(), 1);
        assert!((b.widths[0] - 1.0).abs() < 1e-10);
        // profile check at a few points
        let base = -PI * 0.25;
        for (k, &vt) in b.grid.iter().enumerate().step_by(37) {
            let want = base - 0.5 * vt.cos();
            let got = b.phases[0][k];
            let d = (got - want).rem_euclid(std::f64::consts::TAU);
            assert!(d.min(std::f64::consts::TAU - d) < 1e-12);
        }
    }

    #[test]
    fn anti_resonance_flat() {
        let p = validate_resonance(2, 2, 0.0, 0)
            .unwrap()
            .with_mu(2.0)
            .unwrap();
        let b = sweep_bands(&p, 256).unwrap();
        assert_eq!(b.phases.len(), 2);
        assert!(b.widths[0] < 1e-12 && b.widths[1] < 1e-12);
        let flags = flatness_test(&b, DEFAULT_FLATNESS_THRESHOLD);
        assert_eq!(flags, vec![true, true]);
    }

    #[test]
    fn q3_all_bands_move() {
        let p = validate_resonance(1, 3, 0.5, 0)
            .unwrap()
            .with_mu(0.5)
            .unwrap();
        let b = sweep_bands(&p, 256).unwrap();
        assert_eq!(b.phases.len(), 3);
        for w in &b.widths {
            assert!(*w > 1e-6);
        }
        let flags = flatness_test(&b, DEFAULT_FLATNESS_THRESHOLD);
        assert!(flags.iter().all(|f| !f));
    }

    #[test]
    fn mu_zero_bands_all_flat() {
        let p = validate_resonance(1, 5, 0.5, 0).unwrap();
        let b = sweep_bands(&p, 64).unwrap();
        for w in &b.widths {
            assert_eq!(*w, 0.0);
        }
        assert!(flatness_test(&b, DEFAULT_FLATNESS_THRESHOLD)
            .iter()
            .all(|&f| f));
    }

    #[test]
    fn labels_connect_to_unperturbed_at_tiny_mu() {
        let p = validate_resonance(1, 5, 0.5, 0)
            .unwrap()
            .with_mu(1e-4)
            .unwrap();
        let b = sweep_bands(&p, 32).unwrap();
        let spec = unperturbed_eigenvalues(&p);
        for (i, ph) in b.phases.iter().enumerate() {
            let a = spec.a[i];
            for &x in ph.iter() {
                let w = Complex64::from_polar(1.0, x);
                assert!((w - a).norm() < 1e-2, "band {i} strays from a_j");
            }
        }
    }

    #[test]
    fn width_invariant_under_global_phase() {
        // multiplying S by a unimodular constant shifts all phases equally
        let p = validate_resonance(1, 3, 0.5, 0)
            .unwrap()
            .with_mu(0.8)
            .unwrap();
        let b = sweep_bands(&p, 64).unwrap();
        let shift = Cx::<f64>::cis(1.234);
        let grid = b.grid.clone();
        let mut widths2 = Vec::new();
        {
            // manual sweep of the shifted family
            let mut prev: Option<(Vec<Vec<Cx<f64>>>, Vec<Cx<f64>>, Vec<Vec<f64>>)> = None;
            for &vt in &grid {
                let mut m = s_matrix::<f64>(&p, vt);
                for i in 0..3 {
                    for j in 0..3 {
                        m[(i, j)] = m[(i, j)] * shift;
                    }
                }
                let pairs = unitary_eig(&m).unwrap();
                prev = Some(match prev {
                    None => (
                        pairs.iter().map(|e| e.vector.clone()).collect(),
                        pairs.iter().map(|e| e.value).collect(),
                        pairs.iter().map(|e| vec![e.value.arg()]).collect(),
                    ),
                    Some((vecs, vals, mut phases)) => {
                        let asg = match_by_overlap(&vecs, &pairs, (0, vt)).unwrap();
                        let mut nv = Vec::new();
                        let mut nw = Vec::new();
                        for (band, &b_) in asg.iter().enumerate() {
                            let last = *phases[band].last().unwrap();
                            phases[band].push(last + phase_step(pairs[b_].value, vals[band]));
                            nv.push(pairs[b_].vector.clone());
                            nw.push(pairs[b_].value);
                        }
                        (nv, nw, phases)
                    }
                });
            }
            let (_, _, phases) = prev.unwrap();
            for ph in phases {
                let lo = ph.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = ph.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                widths2.push(hi - lo);
            }
        }
        let mut a = b.widths.clone();
        let mut c = widths2;
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        c.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (x, y) in a.iter().zip(&c) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn overlap_and_nearest_phase_agree_when_gaps_are_wide() {
        let p = validate_resonance(1, 2, 0.0, 0)
            .unwrap()
            .with_mu(0.3)
            .unwrap();
        let a = sweep_bands(&p, 128).unwrap();
        let b = sweep_bands_nearest_phase(&p, 128).unwrap();
        for (x, y) in a.widths.iter().zip(&b.widths) {
            assert!((x - y).abs() < 1e-12);
        }
        for (pa, pb) in a.phases.iter().zip(&b.phases) {
            for (x, y) in pa.iter().zip(pb) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gd_determinant_cases() {
        // anti-resonance: G11 = 0, d=1
        let anti = validate_resonance(2, 2, 0.0, 0).unwrap();
        assert!(gd_determinant(&anti) < 1e-14);
        // q=1: single unimodular entry
        let one = validate_resonance(1, 1, 0.5, 0).unwrap();
        assert!((gd_determinant(&one) - 1.0).abs() < 1e-14);
        // primitive q=3
        let p3 = validate_resonance(1, 3, 0.5, 0).unwrap();
        assert!(gd_determinant(&p3) > 1e-8);
    }

    #[test]
    fn grid_size_validation() {
        let p = validate_resonance(1, 3, 0.5, 0).unwrap();
        assert!(matches!(
            sweep_bands(&p, 4),
            Err(RotorError::InvalidInput(_))
        ));
    }
}
