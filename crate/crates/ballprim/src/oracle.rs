//! Slow, assumption-free cross-checks for the certifying solvers.
//!
//! Everything here deliberately avoids the KKT machinery of
//! [`crate::certify`]: maxima come from multistart projected gradient
//! ascent on the sphere, contact dimensions from the numerical rank of
//! converged image clouds, and subspheres from a singular value fit. The
//! routines are seeded and deterministic so disagreements are
//! reproducible.

use crate::cone::{AffineBallMap, Subsphere};
use crate::error::Error;
use crate::util::{project_onto_span, random_unit_vector};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Gradient ascent iterations per refined start.
const ASCEND_STEPS: usize = 200;

/// Projected gradient ascent for `||phi(x)||` over the unit sphere,
/// starting from `start`. The radial gradient component is projected out,
/// so a vanishing tangent step means a stationary point.
fn ascend(phi: &AffineBallMap, start: &DVector<f64>, steps: usize) -> (DVector<f64>, f64) {
    let mut x = start.clone();
    let mut value = phi.apply(&x).norm();
    let mut step = 0.1;
    for _ in 0..steps {
        let grad = phi.linear().transpose() * phi.apply(&x);
        let tangent = &grad - &x * grad.dot(&x);
        if tangent.norm() <= 1e-14 * (1.0 + grad.norm()) {
            break;
        }
        let dir = &tangent / tangent.norm();
        loop {
            let raw = &x + &dir * step;
            let cand = &raw / raw.norm();
            let cand_value = phi.apply(&cand).norm();
            if cand_value > value {
                x = cand;
                value = cand_value;
                break;
            }
            step *= 0.5;
            if step < 1e-16 {
                return (x, value);
            }
        }
    }
    (x, value)
}

/// Brute-force estimate of `max ||phi(x)||` over the unit sphere: `samples`
/// uniform starts (normalized Gaussians), the best ten refined by
/// projected gradient ascent. A lower bound on the true maximum,
/// deterministic in `seed`.
pub fn brute_sphere_max(phi: &AffineBallMap, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = phi.dim();
    let mut starts: Vec<(f64, DVector<f64>)> = (0..samples.max(1))
        .map(|_| {
            let x = random_unit_vector(&mut rng, n);
            (phi.apply(&x).norm(), x)
        })
        .collect();
    starts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = starts[0].0;
    for (_, x) in starts.into_iter().take(10) {
        let (_, value) = ascend(phi, &x, ASCEND_STEPS);
        best = best.max(value);
    }
    best
}

/// Brute-force affine dimension of the contact set of the `k`-th iterate of
/// a self-map of the ball: every start is ascended to a local maximum, the
/// images of those that reach the sphere (within 1e-6) are collected, and
/// the affine dimension is the numerical rank of the centered image cloud
/// (relative threshold 1e-2). Returns -1 when no start reaches the sphere.
pub fn brute_contact_dim(
    phi: &AffineBallMap,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<i64, Error> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "contact sets are defined for iterates k >= 1".into(),
        ));
    }
    let composite = phi.iterate(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = phi.dim();
    let mut images: Vec<DVector<f64>> = Vec::new();
    for _ in 0..samples.max(1) {
        let start = random_unit_vector(&mut rng, n);
        let (x, value) = ascend(&composite, &start, ASCEND_STEPS);
        if (value - 1.0).abs() <= 1e-6 {
            images.push(composite.apply(&x));
        }
    }
    if images.is_empty() {
        return Ok(-1);
    }
    let m = images.len();
    let mut centroid = DVector::zeros(n);
    for p in &images {
        centroid += p;
    }
    centroid /= m as f64;
    let centered = DMatrix::from_fn(n, m, |i, j| images[j][i] - centroid[i]);
    let singular = centered.svd(false, false).singular_values;
    let top = singular[0];
    if top <= 1e-6 * (m as f64).sqrt() {
        return Ok(0);
    }
    Ok(singular.iter().filter(|&&s| s > 1e-2 * top).count() as i64)
}

/// Least-squares subsphere through a cloud of unit vectors: the affine
/// hull comes from the singular values of the centered cloud (absolute
/// threshold `1e-5 sqrt(#points)`), the center is the projection of the
/// origin onto the hull, and the radius follows from `||center||`. Points
/// further than 1e-4 from the fitted subsphere are a fit violation.
pub fn subsphere_fit(points: &[DVector<f64>]) -> Result<Subsphere, Error> {
    if points.is_empty() {
        return Ok(Subsphere::empty());
    }
    let n = points[0].len();
    if n == 0 || points.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidInput(
            "points must share a positive dimension".into(),
        ));
    }
    let m = points.len();
    let mut centroid = DVector::zeros(n);
    for p in points {
        centroid += p;
    }
    centroid /= m as f64;
    let centered = DMatrix::from_fn(n, m, |i, j| points[j][i] - centroid[i]);
    let svd = centered.svd(true, false);
    let u = svd.u.expect("svd requested u");
    let tau = 1e-5 * (m as f64).sqrt();
    let basis: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s > tau)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    let center = &centroid - project_onto_span(&basis, &centroid);
    let c2 = center.norm_squared();
    if c2 > 1.0 + 1e-4 {
        return Err(Error::FitViolation {
            deviation: c2.sqrt() - 1.0,
        });
    }
    let radius = (1.0 - c2).max(0.0).sqrt();
    let sub = Subsphere::new(center, radius, basis)?;
    let deviation = points.iter().map(|p| sub.distance(p)).fold(0.0, f64::max);
    if deviation > 1e-4 {
        return Err(Error::FitViolation { deviation });
    }
    Ok(sub)
}
