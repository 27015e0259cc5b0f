//! Small linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Returns an orthonormal basis of the span of `vectors`. Vectors whose
/// residual norm falls below `tol` times the largest input norm are treated
/// as dependent and dropped.
pub(crate) fn orthonormalize(vectors: &[DVector<f64>], tol: f64) -> Vec<DVector<f64>> {
    let scale = vectors
        .iter()
        .map(|v| v.norm())
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&r);
                r -= b * c;
            }
        }
        let norm = r.norm();
        if norm > tol * scale {
            basis.push(r / norm);
        }
    }
    basis
}

/// Orthogonal projection of `v` onto the span of an orthonormal `basis`.
pub(crate) fn project_onto_span(basis: &[DVector<f64>], v: &DVector<f64>) -> DVector<f64> {
    let mut p = DVector::zeros(v.len());
    for b in basis {
        let c = b.dot(v);
        p += b * c;
    }
    p
}

/// Extends an orthonormal set to a full orthonormal basis of R^n.
///
/// The returned vectors complete `basis`; together they span R^n.
pub(crate) fn orthonormal_complement(basis: &[DVector<f64>], n: usize) -> Vec<DVector<f64>> {
    let mut full: Vec<DVector<f64>> = basis.to_vec();
    let mut complement = Vec::new();
    for i in 0..n {
        if full.len() == n {
            break;
        }
        let mut r = DVector::zeros(n);
        r[i] = 1.0;
        for _ in 0..2 {
            for b in &full {
                let c = b.dot(&r);
                r -= b * c;
            }
        }
        let norm = r.norm();
        if norm > 1e-8 {
            let u = r / norm;
            full.push(u.clone());
            complement.push(u);
        }
    }
    complement
}

/// Standard normal sample via Box-Muller.
pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen::<f64>();
        if u > f64::MIN_POSITIVE {
            let v: f64 = rng.gen::<f64>();
            return (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos();
        }
    }
}

/// Uniformly distributed point on the unit sphere S^{n-1}.
pub(crate) fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| standard_normal(rng));
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}

/// Haar-ish random orthogonal matrix from the QR factorization of a Gaussian
/// matrix, with the sign convention fixed so the distribution is uniform.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| standard_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Eigenvalues of a real symmetric matrix together with eigenvectors,
/// sorted descending.
pub(crate) fn sorted_symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let sym = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..sym.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| sym.eigenvalues[b].total_cmp(&sym.eigenvalues[a]));
    let values = order.iter().map(|&i| sym.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| DVector::from_column_slice(sym.eigenvectors.column(i).as_slice()))
        .collect();
    (values, vectors)
}
