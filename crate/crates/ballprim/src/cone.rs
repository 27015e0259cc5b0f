//! Core geometric types: affine self-maps of the closed unit ball, linear
//! maps of the Lorentz cone, and the homogenization correspondence between
//! the two.
//!
//! The Lorentz cone in R^m is `L = { (y, t) : t >= ||y|| }` with the last
//! coordinate playing the role of "height". The unit ball in R^n is its
//! sole at height 1, and an affine map `x -> Ax + b` of the ball corresponds
//! to the linear cone map `[[A, b], [0, 1]]` on R^{n+1}. All certification
//! routines work with explicit tolerance thresholds collected in
//! [`Tolerances`].

use crate::certify;
use crate::error::Error;
use crate::util::{orthonormalize, project_onto_span, random_unit_vector};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Numerical thresholds used throughout certification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Width of the indeterminate band around norm 1 when classifying
    /// boundary contact: values in `[1 - positivity_tol, 1 + positivity_tol]`
    /// count as contact.
    pub positivity_tol: f64,
    /// Relative threshold for rank decisions, eigenvalue clustering and
    /// interior tests.
    pub rank_tol: f64,
    /// Convergence threshold for one-dimensional root finding and power
    /// iteration.
    pub root_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            positivity_tol: 1e-8,
            rank_tol: 1e-9,
            root_tol: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn new(positivity_tol: f64, rank_tol: f64, root_tol: f64) -> Result<Self, Error> {
        for (name, v) in [
            ("positivity_tol", positivity_tol),
            ("rank_tol", rank_tol),
            ("root_tol", root_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be a positive finite number, got {v}"
                )));
            }
        }
        Ok(Tolerances {
            positivity_tol,
            rank_tol,
            root_tol,
        })
    }
}

/// Affine self-map candidate `x -> Ax + b` of the closed unit ball in R^n.
///
/// Construction validates shapes and finiteness only; whether the map
/// actually sends the ball into itself is decided by the certification
/// routines.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineBallMap {
    n: usize,
    a: DMatrix<f64>,
    b: DVector<f64>,
}

impl AffineBallMap {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self, Error> {
        let n = a.nrows();
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if a.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "linear part must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.len() != n {
            return Err(Error::InvalidInput(format!(
                "offset has length {}, expected {}",
                b.len(),
                n
            )));
        }
        if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("entries must be finite".into()));
        }
        Ok(AffineBallMap { n, a, b })
    }

    pub fn identity(n: usize) -> Self {
        AffineBallMap {
            n,
            a: DMatrix::identity(n, n),
            b: DVector::zeros(n),
        }
    }

    /// Ambient dimension n.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn translation(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x + &self.b
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &AffineBallMap) -> AffineBallMap {
        AffineBallMap {
            n: self.n,
            a: &self.a * &other.a,
            b: &self.a * &other.b + &self.b,
        }
    }

    /// k-fold composition; `k = 0` gives the identity.
    pub fn iterate(&self, k: usize) -> AffineBallMap {
        let mut out = AffineBallMap::identity(self.n);
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    /// Solves `Ax + b = y` when the linear part is invertible.
    pub fn inverse_apply(&self, y: &DVector<f64>) -> Option<DVector<f64>> {
        self.a.clone().lu().solve(&(y - &self.b))
    }
}

/// Linear self-map candidate of the Lorentz cone in R^m, m >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeLinearMap {
    m: usize,
    mat: DMatrix<f64>,
}

impl ConeLinearMap {
    pub fn new(mat: DMatrix<f64>) -> Result<Self, Error> {
        let m = mat.nrows();
        if m < 2 {
            return Err(Error::InvalidInput(
                "cone dimension must be at least 2".into(),
            ));
        }
        if mat.ncols() != m {
            return Err(Error::InvalidInput(format!(
                "matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("entries must be finite".into()));
        }
        Ok(ConeLinearMap { m, mat })
    }

    /// Ambient dimension m.
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.mat * x
    }
}

/// A subsphere of the unit sphere S^{n-1}, or the empty set.
///
/// A nonempty subsphere is `{ center + radius * u : u in span(basis), ||u|| = 1 }`
/// with `basis` orthonormal and orthogonal to `center`, and
/// `||center||^2 + radius^2 = 1`. Affine dimension is `basis.len()`: the
/// full sphere has dimension n, a pair of antipodal points on a diameter
/// line has dimension 1, a single point has dimension 0 (radius 0, empty
/// basis), and the empty set reports -1.
#[derive(Debug, Clone)]
pub enum Subsphere {
    Empty,
    NonEmpty {
        center: DVector<f64>,
        radius: f64,
        basis: Vec<DVector<f64>>,
    },
}

impl Subsphere {
    /// Validation slack for constructor inputs; inputs within this distance
    /// of a valid configuration are snapped onto it exactly.
    const SNAP_TOL: f64 = 1e-6;

    pub fn empty() -> Self {
        Subsphere::Empty
    }

    /// The full unit sphere S^{n-1} (affine dimension n).
    pub fn full(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                let mut e = DVector::zeros(n);
                e[i] = 1.0;
                e
            })
            .collect();
        Subsphere::NonEmpty {
            center: DVector::zeros(n),
            radius: 1.0,
            basis,
        }
    }

    /// A single point, which must lie within `SNAP_TOL` of the unit sphere;
    /// it is renormalized exactly onto it.
    pub fn point(p: DVector<f64>) -> Result<Self, Error> {
        let norm = p.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > Self::SNAP_TOL {
            return Err(Error::InvalidInput(format!(
                "point norm {norm} is not within tolerance of 1"
            )));
        }
        Ok(Subsphere::NonEmpty {
            center: p / norm,
            radius: 0.0,
            basis: Vec::new(),
        })
    }

    /// General constructor. The basis is re-orthonormalized, the center is
    /// projected onto the orthogonal complement of the basis span, and the
    /// radius is recomputed from `||center||`; inputs further than
    /// `SNAP_TOL` from a consistent configuration are rejected. A radius
    /// below 1e-12 collapses to a single point.
    pub fn new(
        center: DVector<f64>,
        radius: f64,
        basis: Vec<DVector<f64>>,
    ) -> Result<Self, Error> {
        if center.iter().any(|x| !x.is_finite()) || !radius.is_finite() {
            return Err(Error::InvalidInput("subsphere data must be finite".into()));
        }
        if radius < -Self::SNAP_TOL {
            return Err(Error::InvalidInput(format!("negative radius {radius}")));
        }
        let n = center.len();
        for b in &basis {
            if b.len() != n {
                return Err(Error::InvalidInput("basis dimension mismatch".into()));
            }
        }
        let ortho = orthonormalize(&basis, 1e-10);
        if ortho.len() != basis.len() {
            return Err(Error::InvalidInput(
                "basis vectors are linearly dependent".into(),
            ));
        }
        for (b, o) in basis.iter().zip(&ortho) {
            if (b - o).norm() > Self::SNAP_TOL {
                return Err(Error::InvalidInput(
                    "basis is not orthonormal within tolerance".into(),
                ));
            }
        }
        let in_span = project_onto_span(&ortho, &center);
        if in_span.norm() > Self::SNAP_TOL {
            return Err(Error::InvalidInput(
                "center is not orthogonal to the basis".into(),
            ));
        }
        let center = center - in_span;
        let c2 = center.norm_squared();
        if c2 > 1.0 + Self::SNAP_TOL {
            return Err(Error::InvalidInput(format!(
                "center norm {} exceeds 1",
                c2.sqrt()
            )));
        }
        let r = (1.0 - c2).max(0.0).sqrt();
        if (r - radius.max(0.0)).abs() > Self::SNAP_TOL {
            return Err(Error::InvalidInput(format!(
                "radius {radius} inconsistent with center norm {}",
                c2.sqrt()
            )));
        }
        if r < 1e-12 {
            let norm = center.norm();
            if norm == 0.0 {
                return Err(Error::InvalidInput("degenerate subsphere".into()));
            }
            return Ok(Subsphere::NonEmpty {
                center: center / norm,
                radius: 0.0,
                basis: Vec::new(),
            });
        }
        Ok(Subsphere::NonEmpty {
            center,
            radius: r,
            basis: ortho,
        })
    }

    /// Affine dimension: -1 for the empty set, otherwise the number of
    /// basis vectors.
    pub fn aff_dim(&self) -> i64 {
        match self {
            Subsphere::Empty => -1,
            Subsphere::NonEmpty { basis, .. } => basis.len() as i64,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Subsphere::Empty)
    }

    /// Uniform sample from the subsphere; `None` for the empty set.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<DVector<f64>> {
        match self {
            Subsphere::Empty => None,
            Subsphere::NonEmpty {
                center,
                radius,
                basis,
            } => {
                if basis.is_empty() {
                    return Some(center.clone());
                }
                let dir = random_unit_vector(rng, basis.len());
                let mut p = center.clone();
                for (i, b) in basis.iter().enumerate() {
                    p += b * (radius * dir[i]);
                }
                Some(p)
            }
        }
    }

    /// Euclidean distance from `p` to the subsphere (infinite for the empty
    /// set).
    pub fn distance(&self, p: &DVector<f64>) -> f64 {
        match self {
            Subsphere::Empty => f64::INFINITY,
            Subsphere::NonEmpty {
                center,
                radius,
                basis,
            } => {
                let q = p - center;
                let pr = project_onto_span(basis, &q);
                let residual = (&q - &pr).norm();
                let tangential = pr.norm() - radius;
                (residual * residual + tangential * tangential).sqrt()
            }
        }
    }

    pub fn contains(&self, p: &DVector<f64>, tol: f64) -> bool {
        self.distance(p) <= tol
    }

    /// Structural comparison: equal variants, equal affine dimension, and
    /// centers, radii and basis spans within `tol`.
    pub fn approx_eq(&self, other: &Subsphere, tol: f64) -> bool {
        match (self, other) {
            (Subsphere::Empty, Subsphere::Empty) => true,
            (
                Subsphere::NonEmpty {
                    center: c1,
                    radius: r1,
                    basis: b1,
                },
                Subsphere::NonEmpty {
                    center: c2,
                    radius: r2,
                    basis: b2,
                },
            ) => {
                if b1.len() != b2.len() {
                    return false;
                }
                if (c1 - c2).norm() > tol || (r1 - r2).abs() > tol {
                    return false;
                }
                b1.iter()
                    .all(|v| (v - project_onto_span(b2, v)).norm() <= tol)
            }
            _ => false,
        }
    }

    /// Checks the structural invariants, returning a description of the
    /// first violation found.
    pub fn validate(&self, tol: f64) -> Result<(), String> {
        match self {
            Subsphere::Empty => Ok(()),
            Subsphere::NonEmpty {
                center,
                radius,
                basis,
            } => {
                if *radius < 0.0 {
                    return Err(format!("negative radius {radius}"));
                }
                let c2 = center.norm_squared();
                if (c2 + radius * radius - 1.0).abs() > tol {
                    return Err(format!(
                        "||center||^2 + radius^2 = {} differs from 1",
                        c2 + radius * radius
                    ));
                }
                for (i, b) in basis.iter().enumerate() {
                    if (b.norm() - 1.0).abs() > tol {
                        return Err(format!("basis vector {i} is not unit"));
                    }
                    if b.dot(center).abs() > tol {
                        return Err(format!("basis vector {i} is not orthogonal to center"));
                    }
                    for (j, b2) in basis.iter().enumerate().skip(i + 1) {
                        if b.dot(b2).abs() > tol {
                            return Err(format!("basis vectors {i} and {j} not orthogonal"));
                        }
                    }
                }
                if basis.is_empty() && *radius != 0.0 {
                    return Err("positive radius with empty basis".into());
                }
                if !basis.is_empty() && *radius == 0.0 {
                    return Err("zero radius with nonempty basis".into());
                }
                Ok(())
            }
        }
    }
}

/// Embeds an affine ball map as a linear Lorentz-cone map one dimension up:
/// `[[A, b], [0, 1]]`.
pub fn homogenize(phi: &AffineBallMap) -> ConeLinearMap {
    let n = phi.dim();
    let m = n + 1;
    let mut mat = DMatrix::zeros(m, m);
    mat.view_mut((0, 0), (n, n)).copy_from(phi.linear());
    mat.view_mut((0, n), (n, 1)).copy_from(phi.translation());
    mat[(n, n)] = 1.0;
    ConeLinearMap { m, mat }
}

/// Result of [`dehomogenize`]: the recovered ball map together with the
/// Lorentz basis change `S` and the spectral radius `rho`, satisfying
/// `homogenize(map) = S * (psi / rho) * S^{-1}`.
#[derive(Debug, Clone)]
pub struct Dehomogenization {
    pub map: AffineBallMap,
    pub basis_change: DMatrix<f64>,
    pub spectral_radius: f64,
}

/// Inverts homogenization for a positive primitive cone map, up to scale
/// and a Lorentz change of basis.
///
/// The dual Perron eigenvector `f` of `psi` is found by power iteration on
/// the transpose; it must lie in the cone interior. A hyperbolic (Lorentz
/// boost) change of basis moves `f` to the height axis, after which
/// `S * (psi / rho) * S^{-1}` has last row `(0, ..., 0, 1)` and its
/// remaining blocks are read off as the affine map.
///
/// Errors: [`Error::SpectralRadiusZero`] for nilpotent maps,
/// [`Error::BoundaryEigenvector`] when `f` sits on the cone boundary, and
/// [`Error::NotPrimitive`] when the recovered map fails the primitivity
/// pre-check (the identity map, for example, is rejected here).
pub fn dehomogenize(psi: &ConeLinearMap, tol: &Tolerances) -> Result<Dehomogenization, Error> {
    let m = psi.dim();
    let mut start = DVector::zeros(m);
    start[m - 1] = 1.0;

    let (rho, _) = power_iteration(psi.matrix(), &start, tol)?;
    let scale = psi.matrix().norm();
    if rho.abs() <= tol.rank_tol * scale.max(1.0) {
        return Err(Error::SpectralRadiusZero);
    }
    let (_, f) = power_iteration(&psi.matrix().transpose(), &start, tol)?;
    // Perron eigenvectors come back with an arbitrary sign; orient the
    // height coordinate upward.
    let f = if f[m - 1] < 0.0 { -f } else { f };
    let interior_margin = f[m - 1] - f.rows(0, m - 1).norm();
    if interior_margin <= tol.rank_tol {
        return Err(Error::BoundaryEigenvector {
            margin: interior_margin,
        });
    }

    // Hyperbolic normalization f_m^2 - ||f'||^2 = 1, then the symmetric
    // boost S with S e_m = f_hat; S is a Lorentz transformation, so the
    // conjugated map still acts on the same cone.
    let q = f[m - 1] * f[m - 1] - f.rows(0, m - 1).norm_squared();
    let f_hat = &f / q.sqrt();
    let s = lorentz_boost(&f_hat);
    let s_inv = {
        let mut neg = f_hat.clone();
        for i in 0..m - 1 {
            neg[i] = -neg[i];
        }
        lorentz_boost(&neg)
    };

    let conj = &s * (psi.matrix() / rho) * &s_inv;
    // With an exact eigenpair the last row of the conjugated map is exactly
    // e_m; a large residual means the dominant eigenpair did not converge.
    let mut row_residual: f64 = 0.0;
    for j in 0..m {
        let target = if j == m - 1 { 1.0 } else { 0.0 };
        row_residual = row_residual.max((conj[(m - 1, j)] - target).abs());
    }
    if row_residual > 1e-6 {
        return Err(Error::InvalidInput(format!(
            "dominant eigenpair did not converge (last-row residual {row_residual:.3e}); \
             the map may not be positive"
        )));
    }

    let n = m - 1;
    let a = conj.view((0, 0), (n, n)).into_owned();
    let b = DVector::from_fn(n, |i, _| conj[(i, n)]);
    let map = AffineBallMap::new(a, b)?;

    let cert = certify::primitivity_index(&map, tol)?;
    if cert.verdict != certify::Verdict::Primitive {
        return Err(Error::NotPrimitive);
    }

    Ok(Dehomogenization {
        map,
        basis_change: s,
        spectral_radius: rho,
    })
}

/// Power iteration with Rayleigh-quotient convergence test.
///
/// Returns the (signed) dominant eigenvalue estimate and a unit eigenvector
/// estimate. Detects collapse to zero (nilpotent action) as
/// [`Error::SpectralRadiusZero`].
pub(crate) fn power_iteration(
    m: &DMatrix<f64>,
    start: &DVector<f64>,
    tol: &Tolerances,
) -> Result<(f64, DVector<f64>), Error> {
    let scale = m.norm();
    if scale == 0.0 {
        return Err(Error::SpectralRadiusZero);
    }
    let mut x = start.clone();
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::InvalidInput("zero start vector".into()));
    }
    x /= norm;
    let mut rayleigh = f64::NAN;
    for iter in 0..100_000 {
        let y = m * &x;
        let ny = y.norm();
        if ny <= 1e-280 * scale {
            return Err(Error::SpectralRadiusZero);
        }
        let r = x.dot(&y);
        if iter > 0 && (r - rayleigh).abs() <= tol.root_tol * (1.0 + r.abs()) {
            return Ok((r, x));
        }
        rayleigh = r;
        x = y / ny;
    }
    Ok((rayleigh, x))
}

/// Symmetric Lorentz boost `L` with `L e_m = f_hat`, for a hyperbolically
/// normalized interior vector (`f_m^2 - ||f'||^2 = 1`).
///
/// `L = [[I + u u^T / (1 + g), u], [u^T, g]]` where `f_hat = (u, g)`; it
/// satisfies `L^T J L = J` and `L(u)^{-1} = L(-u)`.
fn lorentz_boost(f_hat: &DVector<f64>) -> DMatrix<f64> {
    let m = f_hat.len();
    let n = m - 1;
    let u = f_hat.rows(0, n).into_owned();
    let g = f_hat[n];
    let mut l = DMatrix::zeros(m, m);
    let block = DMatrix::identity(n, n) + &u * u.transpose() / (1.0 + g);
    l.view_mut((0, 0), (n, n)).copy_from(&block);
    for i in 0..n {
        l[(i, n)] = u[i];
        l[(n, i)] = u[i];
    }
    l[(n, n)] = g;
    l
}

/// Outcome of the S-procedure positivity test for a cone map.
#[derive(Debug, Clone, Copy)]
pub struct LorentzPositivity {
    /// Whether the map preserves the Lorentz cone (within tolerance).
    pub positive: bool,
    /// Whether the certified margin sits inside the indeterminate band
    /// around zero, i.e. the map is positive but only just (boundary
    /// contact).
    pub indeterminate: bool,
    /// Best value of `lambda_min(M^T J M - mu J)` over `mu >= 0`.
    pub margin: f64,
    /// The multiplier `mu` attaining the margin.
    pub multiplier: f64,
}

/// S-procedure positivity check: `M` preserves the Lorentz cone iff there
/// is `mu >= 0` with `M^T J M - mu J` positive semidefinite (plus an
/// orientation test singling out the cone rather than its negative), where
/// `J = diag(-I, 1)`.
///
/// `lambda_min` of the pencil is concave in `mu`, so a coarse grid followed
/// by golden-section refinement finds the global maximum. The multiplier is
/// capped at `(M^T J M)_{mm} + 1`: any feasible `mu` obeys
/// `mu <= (M^T J M)_{mm}`.
pub fn lorentz_positivity(psi: &ConeLinearMap, tol: &Tolerances) -> LorentzPositivity {
    let m = psi.dim();
    let j = lorentz_j(m);
    let g0 = {
        let raw = psi.matrix().transpose() * &j * psi.matrix();
        (&raw + raw.transpose()) * 0.5
    };
    let mu_hi = g0[(m - 1, m - 1)].max(0.0) + 1.0;

    let lambda_min = |mu: f64| -> f64 {
        let pencil = &g0 - &j * mu;
        nalgebra::SymmetricEigen::new(pencil)
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
    };

    // Seed with a coarse grid, then refine the bracketing interval.
    let grid = 32usize;
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=grid {
        let mu = mu_hi * i as f64 / grid as f64;
        let v = lambda_min(mu);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = mu_hi * best_i.saturating_sub(1) as f64 / grid as f64;
    let hi = mu_hi * (best_i + 1).min(grid) as f64 / grid as f64;
    let (mut mu_star, mut margin) = golden_max(lambda_min, lo, hi, 1e-13 * (1.0 + mu_hi));
    if best_v > margin {
        mu_star = mu_hi * best_i as f64 / grid as f64;
        margin = best_v;
    }

    let scale = 1.0 + g0.norm();
    let oriented = orientation_ok(psi, tol);
    LorentzPositivity {
        positive: margin >= -tol.positivity_tol * scale && oriented,
        indeterminate: margin.abs() < tol.positivity_tol * scale,
        margin,
        multiplier: mu_star,
    }
}

/// Convenience wrapper returning only the verdict of [`lorentz_positivity`].
pub fn is_lorentz_positive(psi: &ConeLinearMap, tol: &Tolerances) -> bool {
    lorentz_positivity(psi, tol).positive
}

/// The PSD condition certifies that the double cone `L u -L` is preserved;
/// this test picks the component. The image of a probe point in the cone
/// interior must have a nonnegative height coordinate.
fn orientation_ok(psi: &ConeLinearMap, tol: &Tolerances) -> bool {
    let m = psi.dim();
    let mut probes = Vec::with_capacity(2 * m - 1);
    let mut apex = DVector::zeros(m);
    apex[m - 1] = 1.0;
    probes.push(apex.clone());
    for i in 0..m - 1 {
        for sign in [0.5, -0.5] {
            let mut p = apex.clone();
            p[i] = sign;
            probes.push(p);
        }
    }
    let mut best: Option<DVector<f64>> = None;
    let mut best_norm = 0.0;
    for p in &probes {
        let img = psi.apply(p);
        let norm = img.norm();
        if norm > best_norm {
            best_norm = norm;
            best = Some(img);
        }
    }
    match best {
        // The whole probe set maps to (numerically) zero: the map crushes
        // the cone to the apex, which is positive.
        None => true,
        Some(img) => img[m - 1] >= -tol.positivity_tol * best_norm.max(1.0),
    }
}

pub(crate) fn lorentz_j(m: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(m, m) * -1.0;
    j[(m - 1, m - 1)] = 1.0;
    j
}

/// Golden-section search for the maximum of a unimodal function on
/// `[lo, hi]`; returns the argmax and the value.
fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, width_tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > width_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
