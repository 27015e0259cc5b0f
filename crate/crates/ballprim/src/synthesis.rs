//! Synthesis of extremal maps: affine self-maps of the ball in R^n whose
//! primitivity index attains the maximal value n + 1.
//!
//! The construction places n points on a common latitude circle with Gram
//! matrix `a_ij = 1 - c^min(i,j)`, lifts the latitude-alpha circle to the
//! latitude-beta circle by a norm-respecting affine contraction, and closes
//! the orbit with a rotation carrying each lifted point to the next orbit
//! point. The first iterate touches the sphere along a full rotated
//! latitude circle, and each further iterate touches along a
//! one-dimension-smaller subsphere, emptying exactly at step n + 1.

use crate::certify::{primitivity_index_with, CertifyOptions, PrimitivityCertificate, Verdict};
use crate::cone::{AffineBallMap, Tolerances};
use crate::error::Error;
use crate::util::orthonormal_complement;
use nalgebra::{DMatrix, DVector};

/// Gram matrix of the extremal point family: unit diagonal and
/// `a_ij = 1 - c^min(i,j)` off the diagonal (indices starting at 1).
pub fn build_gram(n: usize, c: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            1.0 - c.powi(i.min(j) as i32 + 1)
        }
    })
}

/// Picks the smallest parameter of the form `1 - 2^{-k}` whose Gram matrix
/// is positive definite with margin 1e-4, starting at c = 1/2 and halving
/// the gap to 1.
pub fn choose_c(n: usize) -> Result<f64, Error> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let mut c = 0.5;
    let attempts = 60;
    for _ in 0..attempts {
        let shifted = build_gram(n, c) - DMatrix::<f64>::identity(n, n) * 1e-4;
        if shifted.cholesky().is_some() {
            return Ok(c);
        }
        c = (1.0 + c) / 2.0;
    }
    Err(Error::SearchExhausted { attempts })
}

/// Realizes a unit-diagonal positive definite Gram matrix as n points on a
/// common latitude circle of S^{n-1}.
///
/// The Cholesky factor gives points `y_i` with the prescribed inner
/// products; they all satisfy `<h, y_i> = 1` for the solution of `L h = 1`,
/// so they lie on the sphere cut by a plane at distance `1 / ||h||` from
/// the origin, i.e. at common latitude `alpha = arcsin(1 / ||h||)`. A
/// Householder reflection moves the plane normal onto the last coordinate
/// axis, so every returned point has last coordinate `sin(alpha)`.
pub fn gram_to_latitude(gram: &DMatrix<f64>) -> Result<(f64, Vec<DVector<f64>>), Error> {
    let n = gram.nrows();
    if n == 0 || gram.ncols() != n {
        return Err(Error::InvalidInput(format!(
            "gram matrix must be square and nonempty, got {}x{}",
            gram.nrows(),
            gram.ncols()
        )));
    }
    if (gram - gram.transpose()).norm() > 1e-10 * (1.0 + gram.norm()) {
        return Err(Error::InvalidInput("gram matrix is not symmetric".into()));
    }
    for i in 0..n {
        let v = gram[(i, i)];
        if (v - 1.0).abs() > 1e-8 {
            return Err(Error::NotUnitDiagonal { index: i, value: v });
        }
    }
    let chol = gram.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    // Columns of L^T realize the Gram matrix.
    let y: Vec<DVector<f64>> = (0..n)
        .map(|i| DVector::from_column_slice(l.row(i).transpose().as_slice()))
        .collect();
    let ones = DVector::from_element(n, 1.0);
    let h = l
        .solve_lower_triangular(&ones)
        .ok_or(Error::NotPositiveDefinite)?;
    let h_norm = h.norm();
    let sin_alpha = 1.0 / h_norm;
    let alpha = sin_alpha.asin();

    // Householder reflection sending h / ||h|| to e_n.
    let u = &h / h_norm;
    let mut v = u.clone();
    v[n - 1] -= 1.0;
    let vn = v.norm();
    let points = y
        .iter()
        .map(|p| {
            if vn < 1e-12 {
                p.clone()
            } else {
                let coeff = 2.0 * v.dot(p) / (vn * vn);
                p - &v * coeff
            }
        })
        .collect();
    Ok((alpha, points))
}

/// The affine contraction lifting latitude alpha to latitude beta:
/// `A = diag(lambda, ..., lambda, lambda * mu)`, `b = (0, ..., 0, shift)`
/// with `lambda = cos(beta)/cos(alpha)`, `mu = tan(alpha)/tan(beta)` and
/// `shift = sqrt((1 - lambda^2)(1 - mu^2))`.
///
/// For a unit vector with last coordinate `sin(theta)` the image norm
/// satisfies
/// `1 - ||Psi x||^2 = (mu sqrt(1-lambda^2) - lambda sqrt(1-mu^2) sin(theta))^2`,
/// which vanishes exactly on the latitude-alpha circle: the sphere maps
/// inside the ball touching along that circle, whose image is the
/// latitude-beta circle, and on it the map scales distances by `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatitudeLift {
    n: usize,
    alpha: f64,
    beta: f64,
    lambda: f64,
    mu: f64,
    shift: f64,
}

impl LatitudeLift {
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn as_map(&self) -> AffineBallMap {
        let mut a = DMatrix::identity(self.n, self.n) * self.lambda;
        a[(self.n - 1, self.n - 1)] = self.lambda * self.mu;
        let mut b = DVector::zeros(self.n);
        b[self.n - 1] = self.shift;
        AffineBallMap::new(a, b).expect("lift parameters are finite")
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        self.as_map().apply(x)
    }
}

/// Constructs the latitude lift for `0 < alpha < beta < pi/2`.
pub fn latitude_lift(n: usize, alpha: f64, beta: f64) -> Result<LatitudeLift, Error> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    if !(alpha.is_finite() && beta.is_finite()) || alpha <= 0.0 || beta <= alpha || beta >= half_pi
    {
        return Err(Error::BadAngles { alpha, beta });
    }
    let lambda = beta.cos() / alpha.cos();
    let mu = alpha.tan() / beta.tan();
    let shift = ((1.0 - lambda * lambda) * (1.0 - mu * mu)).sqrt();
    Ok(LatitudeLift {
        n,
        alpha,
        beta,
        lambda,
        mu,
        shift,
    })
}

/// Extends the partial isometry `sources[i] -> targets[i]` between unit
/// vectors to a rotation of R^n (orthogonal, determinant +1).
///
/// Gram-Schmidt runs on the sources; the same expansion coefficients are
/// replayed on the targets, which produces the matched orthonormal frame
/// exactly when the pairwise distances agree. Both frames are completed to
/// full bases, a complement sign is flipped if needed to reach determinant
/// +1, and a final polar projection removes the residual drift inherited
/// from the input tolerance.
pub fn procrustes_rotation(
    sources: &[DVector<f64>],
    targets: &[DVector<f64>],
) -> Result<DMatrix<f64>, Error> {
    if sources.is_empty() || sources.len() != targets.len() {
        return Err(Error::InvalidInput(
            "need equally many sources and targets, at least one pair".into(),
        ));
    }
    let n = sources[0].len();
    for v in sources.iter().chain(targets.iter()) {
        if v.len() != n {
            return Err(Error::InvalidInput("ambient dimension mismatch".into()));
        }
        if (v.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidInput(format!(
                "points must be unit vectors, got norm {}",
                v.norm()
            )));
        }
    }
    let mut deviation: f64 = 0.0;
    for i in 0..sources.len() {
        for j in i + 1..sources.len() {
            let ds = (&sources[i] - &sources[j]).norm();
            let dt = (&targets[i] - &targets[j]).norm();
            deviation = deviation.max((ds - dt).abs());
        }
    }
    if deviation > 1e-8 {
        return Err(Error::DistanceMismatch { deviation });
    }

    // Mirrored Gram-Schmidt: source coefficients drive both sides.
    let mut us: Vec<DVector<f64>> = Vec::new();
    let mut ut: Vec<DVector<f64>> = Vec::new();
    for (s, t) in sources.iter().zip(targets) {
        let mut rs = s.clone();
        let mut rt = t.clone();
        for _ in 0..2 {
            for (bs, bt) in us.iter().zip(&ut) {
                let c = bs.dot(&rs);
                rs -= bs * c;
                rt -= bt * c;
            }
        }
        let norm = rs.norm();
        if norm > 1e-8 {
            us.push(rs / norm);
            ut.push(rt / norm);
        }
    }
    let cs = orthonormal_complement(&us, n);
    let mut ct = orthonormal_complement(&ut, n);
    if cs.len() != ct.len() {
        return Err(Error::InvalidInput(
            "source and target spans have different dimensions".into(),
        ));
    }

    let assemble = |ut: &[DVector<f64>], ct: &[DVector<f64>]| -> DMatrix<f64> {
        let mut r = DMatrix::zeros(n, n);
        for (u_t, u_s) in ut.iter().zip(&us) {
            r += u_t * u_s.transpose();
        }
        for (c_t, c_s) in ct.iter().zip(&cs) {
            r += c_t * c_s.transpose();
        }
        r
    };
    let mut r0 = assemble(&ut, &ct);
    if r0.determinant() < 0.0 {
        match ct.last_mut() {
            Some(last) => {
                *last = -last.clone();
                r0 = assemble(&ut, &ct);
            }
            None => {
                return Err(Error::InvalidInput(
                    "matched frames span R^n and require a reflection".into(),
                ))
            }
        }
    }
    // Polar projection onto the orthogonal group.
    let svd = r0.svd(true, true);
    let r = svd.u.as_ref().unwrap() * svd.v_t.as_ref().unwrap();

    let mut residual: f64 = 0.0;
    for (s, t) in sources.iter().zip(targets) {
        residual = residual.max((&r * s - t).norm());
    }
    if residual > 1e-6 {
        return Err(Error::DistanceMismatch {
            deviation: residual,
        });
    }
    Ok(r)
}

/// A synthesized extremal map together with everything needed to re-verify
/// it: the Gram parameter, the latitude angles, the orbit points
/// `x_0, ..., x_{n+1}`, the lift and rotation factors, the assembled map
/// and its certified index.
///
/// `x_1, ..., x_n` sit on the latitude-alpha circle, `x_{i+1} = map(x_i)`,
/// and `x_0` is the affine preimage of `x_1`, which lies strictly outside
/// the ball. For n = 1 the construction degenerates to the closed-form
/// reflection `x -> -c x - (1 - c)` with both angles at pi/2 and no lift
/// factor.
#[derive(Debug, Clone)]
pub struct ExtremalWitness {
    pub n: usize,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub points: Vec<DVector<f64>>,
    pub lift: Option<LatitudeLift>,
    pub rotation: DMatrix<f64>,
    pub map: AffineBallMap,
    pub index: usize,
}

/// Builds an affine self-map of the ball in R^n with primitivity index
/// n + 1 and certifies it.
///
/// `c` overrides the Gram parameter (must lie in (0, 1) with a positive
/// definite Gram matrix); by default [`choose_c`] picks it. Every claimed
/// property of the construction is re-checked numerically and any failure
/// surfaces as [`Error::WitnessViolation`], including the final
/// certification of the index itself.
pub fn synthesize(n: usize, c: Option<f64>) -> Result<ExtremalWitness, Error> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let c = match c {
        Some(v) => {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "gram parameter must lie in (0, 1), got {v}"
                )));
            }
            v
        }
        None => choose_c(n)?,
    };
    if n == 1 {
        return synthesize_line(c);
    }
    let tol = Tolerances::default();

    let gram = build_gram(n, c);
    let (alpha, xs) = gram_to_latitude(&gram)?;
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in xs.iter().enumerate() {
            if (x.dot(y) - gram[(i, j)]).abs() > 1e-10 {
                return Err(Error::WitnessViolation(format!(
                    "gram entry ({i}, {j}) off by {:.3e}",
                    (x.dot(y) - gram[(i, j)]).abs()
                )));
            }
        }
    }

    // The image points must shrink distances by sqrt(c), which pins the
    // target latitude: cos(beta) = sqrt(c) cos(alpha).
    let beta = (c.sqrt() * alpha.cos()).acos();
    let lift = latitude_lift(n, alpha, beta)?;
    let ys: Vec<DVector<f64>> = xs.iter().map(|x| lift.apply(x)).collect();

    let rotation = procrustes_rotation(&ys[..n - 1], &xs[1..])?;
    let lift_map = lift.as_map();
    let map = AffineBallMap::new(
        &rotation * lift_map.linear(),
        &rotation * lift_map.translation(),
    )?;

    let mut points = Vec::with_capacity(n + 2);
    let x0 = map
        .inverse_apply(&xs[0])
        .ok_or_else(|| Error::WitnessViolation("map is singular".into()))?;
    if x0.norm() <= 1.0 {
        return Err(Error::WitnessViolation(format!(
            "pre-orbit point has norm {} <= 1",
            x0.norm()
        )));
    }
    points.push(x0);
    points.extend(xs.iter().cloned());
    points.push(map.apply(&xs[n - 1]));

    validate_witness_geometry(n, alpha, &points, &rotation, &map)?;

    let cert = certify_witness(n, &points, &map, &tol)?;
    Ok(ExtremalWitness {
        n,
        c,
        alpha,
        beta,
        points,
        lift: Some(lift),
        rotation,
        map,
        index: cert.index.expect("verdict checked"),
    })
}

/// n = 1: the reflection-contraction `x -> -c x - (1 - c)` has orbit
/// `1 -> -1 -> 2c - 1` with exactly one boundary touch, so its index is 2.
fn synthesize_line(c: f64) -> Result<ExtremalWitness, Error> {
    let tol = Tolerances::default();
    let rotation = DMatrix::from_element(1, 1, -1.0);
    let map = AffineBallMap::new(
        DMatrix::from_element(1, 1, -c),
        DVector::from_element(1, -(1.0 - c)),
    )?;
    let points = vec![
        DVector::from_element(1, -(2.0 - c) / c),
        DVector::from_element(1, 1.0),
        DVector::from_element(1, -1.0),
    ];
    let half_pi = std::f64::consts::FRAC_PI_2;
    let cert = certify_witness(1, &points, &map, &tol)?;
    Ok(ExtremalWitness {
        n: 1,
        c,
        alpha: half_pi,
        beta: half_pi,
        points,
        lift: None,
        rotation,
        map,
        index: cert.index.expect("verdict checked"),
    })
}

fn validate_witness_geometry(
    n: usize,
    alpha: f64,
    points: &[DVector<f64>],
    rotation: &DMatrix<f64>,
    map: &AffineBallMap,
) -> Result<(), Error> {
    let ortho = (rotation.transpose() * rotation - DMatrix::<f64>::identity(n, n)).norm();
    if ortho > 1e-10 {
        return Err(Error::WitnessViolation(format!(
            "rotation fails orthogonality by {ortho:.3e}"
        )));
    }
    if n > 1 && (rotation.determinant() - 1.0).abs() > 1e-8 {
        return Err(Error::WitnessViolation(format!(
            "rotation determinant {} is not +1",
            rotation.determinant()
        )));
    }
    let sin_alpha = alpha.sin();
    for (i, x) in points.iter().enumerate().skip(1) {
        if (x.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::WitnessViolation(format!(
                "orbit point {i} has norm {}",
                x.norm()
            )));
        }
        // x_1 .. x_n share the latitude; the final point x_{n+1} does not.
        if i <= n && n > 1 && (x[n - 1] - sin_alpha).abs() > 1e-8 {
            return Err(Error::WitnessViolation(format!(
                "orbit point {i} is off the latitude by {:.3e}",
                (x[n - 1] - sin_alpha).abs()
            )));
        }
    }
    for i in 1..points.len() - 1 {
        let img = map.apply(&points[i]);
        let residual = (&img - &points[i + 1]).norm();
        if residual > 1e-8 {
            return Err(Error::WitnessViolation(format!(
                "orbit step {i} misses its target by {residual:.3e}"
            )));
        }
    }
    Ok(())
}

fn certify_witness(
    n: usize,
    points: &[DVector<f64>],
    map: &AffineBallMap,
    tol: &Tolerances,
) -> Result<PrimitivityCertificate, Error> {
    let opts = CertifyOptions {
        tolerances: *tol,
        max_iterations: None,
        contact_witnesses: points[1..=n].to_vec(),
    };
    let cert = primitivity_index_with(map, &opts)?;
    if cert.verdict != Verdict::Primitive || cert.index != Some(n + 1) {
        return Err(Error::WitnessViolation(format!(
            "synthesized map certified with verdict {:?}, index {:?}; expected index {}",
            cert.verdict,
            cert.index,
            n + 1
        )));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{contact_set, sphere_max};
    use crate::util::{random_orthogonal, random_unit_vector, standard_normal};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    #[test]
    fn gram_matrix_frozen_values() {
        let g = build_gram(3, 0.5);
        let expected = DMatrix::from_row_slice(
            3,
            3,
            &[1.0, 0.5, 0.5, 0.5, 1.0, 0.75, 0.5, 0.75, 1.0],
        );
        assert_eq!(g, expected);
        // Leading principal minors: 1, 3/4, 5/16.
        assert_abs_diff_eq!(g.view((0, 0), (1, 1)).determinant(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.view((0, 0), (2, 2)).determinant(), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(g.determinant(), 0.3125, epsilon = 1e-15);

        let g2 = build_gram(2, 0.5);
        assert_eq!(
            g2,
            DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0])
        );
    }

    #[test]
    fn choose_c_returns_positive_definite_parameter() {
        // The n = 3 Gram matrix at c = 1/2 is already comfortably positive
        // definite, so the search accepts the starting value.
        assert_eq!(choose_c(3).unwrap(), 0.5);
        for n in 1..=8 {
            let c = choose_c(n).unwrap();
            assert!((0.0..1.0).contains(&c));
            let gram = build_gram(n, c);
            let min_eig = nalgebra::SymmetricEigen::new(gram)
                .eigenvalues
                .iter()
                .fold(f64::INFINITY, |a, &b| a.min(b));
            assert!(min_eig >= 1e-4, "n={n}: margin {min_eig}");
        }
    }

    #[test]
    fn gram_to_latitude_identity_gram() {
        let (alpha, points) = gram_to_latitude(&DMatrix::identity(2, 2)).unwrap();
        assert_abs_diff_eq!(alpha.sin(), 1.0 / 2.0_f64.sqrt(), epsilon = 1e-12);
        for p in &points {
            assert_abs_diff_eq!(p.norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p[1], alpha.sin(), epsilon = 1e-12);
        }
        assert!(points[0].dot(&points[1]).abs() < 1e-12);
    }

    #[test]
    fn gram_to_latitude_recovers_gram_on_common_latitude() {
        let gram = build_gram(3, 0.5);
        let (alpha, points) = gram_to_latitude(&gram).unwrap();
        for (i, x) in points.iter().enumerate() {
            assert_abs_diff_eq!(x[2], alpha.sin(), epsilon = 1e-12);
            for (j, y) in points.iter().enumerate() {
                assert_abs_diff_eq!(x.dot(y), gram[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn gram_to_latitude_rejects_bad_input() {
        let mut g = DMatrix::identity(2, 2);
        g[(0, 0)] = 1.01;
        match gram_to_latitude(&g) {
            Err(Error::NotUnitDiagonal { index, value }) => {
                assert_eq!(index, 0);
                assert_abs_diff_eq!(value, 1.01, epsilon = 1e-15);
            }
            other => panic!("expected NotUnitDiagonal, got {other:?}"),
        }

        let ones = DMatrix::from_element(2, 2, 1.0);
        assert!(matches!(
            gram_to_latitude(&ones),
            Err(Error::NotPositiveDefinite)
        ));

        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, -0.3, 1.0]);
        assert!(matches!(
            gram_to_latitude(&skew),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn latitude_lift_frozen_parameters() {
        let lift = latitude_lift(3, FRAC_PI_6, FRAC_PI_3).unwrap();
        assert_abs_diff_eq!(lift.lambda(), 1.0 / 3.0_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(lift.mu(), 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(lift.shift(), 4.0 / (3.0 * 3.0_f64.sqrt()), epsilon = 1e-14);

        let x = DVector::from_column_slice(&[3.0_f64.sqrt() / 2.0, 0.0, 0.5]);
        let y = lift.apply(&x);
        let expected = DVector::from_column_slice(&[0.5, 0.0, 3.0_f64.sqrt() / 2.0]);
        assert!((y - expected).norm() < 1e-14);
    }

    #[test]
    fn latitude_lift_rejects_bad_angles() {
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!(matches!(
            latitude_lift(3, FRAC_PI_3, FRAC_PI_6),
            Err(Error::BadAngles { .. })
        ));
        assert!(matches!(
            latitude_lift(3, FRAC_PI_6, FRAC_PI_6),
            Err(Error::BadAngles { .. })
        ));
        assert!(matches!(
            latitude_lift(3, 0.0, FRAC_PI_3),
            Err(Error::BadAngles { .. })
        ));
        assert!(matches!(
            latitude_lift(3, FRAC_PI_6, half_pi),
            Err(Error::BadAngles { .. })
        ));
    }

    #[test]
    fn latitude_lift_norm_identity() {
        // 1 - ||Psi x||^2 = (mu sqrt(1-lambda^2) - lambda sqrt(1-mu^2) t)^2
        // for unit x with last coordinate t; the zero is at t = sin(alpha).
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for &(a, b) in &[(FRAC_PI_6, FRAC_PI_3), (0.2, 0.9), (0.7, 1.1)] {
            let lift = latitude_lift(4, a, b).unwrap();
            let ca = lift.mu() * (1.0 - lift.lambda() * lift.lambda()).sqrt();
            let cb = lift.lambda() * (1.0 - lift.mu() * lift.mu()).sqrt();
            assert_abs_diff_eq!(ca / cb, a.sin(), epsilon = 1e-12);
            for _ in 0..200 {
                let x = random_unit_vector(&mut rng, 4);
                let lhs = 1.0 - lift.apply(&x).norm_squared();
                let rhs = (ca - cb * x[3]).powi(2);
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn latitude_lift_is_similarity_between_latitudes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let lift = latitude_lift(3, FRAC_PI_6, FRAC_PI_3).unwrap();
        let sin_a = FRAC_PI_6.sin();
        let cos_a = FRAC_PI_6.cos();
        for _ in 0..100 {
            let d = random_unit_vector(&mut rng, 2);
            let x = DVector::from_column_slice(&[cos_a * d[0], cos_a * d[1], sin_a]);
            let y = lift.apply(&x);
            assert_abs_diff_eq!(y.norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(y[2], FRAC_PI_3.sin(), epsilon = 1e-12);

            let d2 = random_unit_vector(&mut rng, 2);
            let x2 = DVector::from_column_slice(&[cos_a * d2[0], cos_a * d2[1], sin_a]);
            let y2 = lift.apply(&x2);
            assert_abs_diff_eq!(
                (y - y2).norm(),
                lift.lambda() * (x - x2).norm(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn lift_contact_set_is_latitude_circle() {
        let tol = Tolerances::default();
        let lift = latitude_lift(3, FRAC_PI_6, FRAC_PI_3).unwrap();
        let res = sphere_max(&lift.as_map(), &tol);
        assert_abs_diff_eq!(res.value, 1.0, epsilon = 1e-12);
        let contact = contact_set(&lift.as_map(), &tol).unwrap();
        // The image circle sits at latitude beta: center (0, 0, sin(beta)).
        assert_eq!(contact.aff_dim(), 2);
        match &contact {
            crate::cone::Subsphere::NonEmpty { center, radius, .. } => {
                assert!((center - DVector::from_column_slice(&[0.0, 0.0, FRAC_PI_3.sin()]))
                    .norm()
                    .abs()
                    < 1e-9);
                assert_abs_diff_eq!(*radius, FRAC_PI_3.cos(), epsilon = 1e-9);
            }
            _ => panic!("nonempty contact expected"),
        }
    }

    #[test]
    fn procrustes_identity_on_matching_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pts: Vec<DVector<f64>> = (0..2).map(|_| random_unit_vector(&mut rng, 4)).collect();
        let r = procrustes_rotation(&pts, &pts).unwrap();
        for p in &pts {
            assert!((&r * p - p).norm() < 1e-10);
        }
        assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn procrustes_quarter_turn() {
        let src = vec![DVector::from_column_slice(&[1.0, 0.0])];
        let dst = vec![DVector::from_column_slice(&[0.0, 1.0])];
        let r = procrustes_rotation(&src, &dst).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((r - expected).norm() < 1e-12);
    }

    #[test]
    fn procrustes_recovers_random_rotation_on_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 2..6 {
            let q = random_orthogonal(&mut rng, n);
            let sources: Vec<DVector<f64>> =
                (0..n - 1).map(|_| random_unit_vector(&mut rng, n)).collect();
            let targets: Vec<DVector<f64>> = sources.iter().map(|s| &q * s).collect();
            let r = procrustes_rotation(&sources, &targets).unwrap();
            assert!((r.transpose() * &r - DMatrix::<f64>::identity(n, n)).norm() < 1e-10);
            assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-10);
            for (s, t) in sources.iter().zip(&targets) {
                assert!((&r * s - t).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn procrustes_rejects_distance_mismatch() {
        let src = vec![
            DVector::from_column_slice(&[1.0, 0.0, 0.0]),
            DVector::from_column_slice(&[0.0, 1.0, 0.0]),
        ];
        let dst = vec![
            DVector::from_column_slice(&[1.0, 0.0, 0.0]),
            DVector::from_column_slice(&[(0.5_f64).sqrt(), (0.5_f64).sqrt(), 0.0]),
        ];
        match procrustes_rotation(&src, &dst) {
            Err(Error::DistanceMismatch { deviation }) => assert!(deviation > 0.1),
            other => panic!("expected DistanceMismatch, got {other:?}"),
        }
    }

    #[test]
    fn synthesize_line_has_index_two() {
        let w = synthesize(1, None).unwrap();
        assert_eq!(w.n, 1);
        assert_eq!(w.index, 2);
        assert!(w.lift.is_none());
        assert_eq!(w.rotation[(0, 0)], -1.0);
        assert_eq!(w.points.len(), 3);
        assert_eq!(w.points[1][0], 1.0);
        assert_eq!(w.points[2][0], -1.0);
        assert!(w.points[0][0].abs() > 1.0);
        // Orbit: map(x0) = x1, map(x1) = x2.
        assert!((w.map.apply(&w.points[0]) - &w.points[1]).norm() < 1e-12);
        assert!((w.map.apply(&w.points[1]) - &w.points[2]).norm() < 1e-12);
    }

    #[test]
    fn synthesize_dimension_three() {
        let w = synthesize(3, None).unwrap();
        assert_eq!(w.index, 4);
        assert_eq!(w.points.len(), 5);
        assert!(w.points[0].norm() > 1.0);
        assert!(w.alpha < w.beta && w.beta < std::f64::consts::FRAC_PI_2);
        let lift = w.lift.as_ref().unwrap();
        assert_abs_diff_eq!(
            lift.lambda(),
            w.c.sqrt(),
            epsilon = 1e-12
        );

        // The certified chain steps down one dimension per iterate.
        let tol = Tolerances::default();
        let cert = crate::certify::primitivity_index(&w.map, &tol).unwrap();
        let dims: Vec<i64> = cert.chain.iter().map(|s| s.aff_dim()).collect();
        assert_eq!(dims, vec![3, 2, 1, 0, -1]);
    }

    #[test]
    fn synthesize_distance_telescoping() {
        // ||x_{i+1} - x_{j+1}||^2 = c ||x_i - x_j||^2 for orbit points on
        // the latitude circle.
        let w = synthesize(4, None).unwrap();
        let xs = &w.points[1..=4];
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let lhs = (&xs[i + 1] - &xs[j + 1]).norm_squared();
                let rhs = w.c * (&xs[i] - &xs[j]).norm_squared();
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn synthesize_rejects_bad_parameters() {
        assert!(matches!(synthesize(0, None), Err(Error::InvalidInput(_))));
        assert!(matches!(
            synthesize(3, Some(1.5)),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            synthesize(3, Some(0.0)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn synthesize_explicit_c_roundtrip() {
        let w = synthesize(2, Some(0.5)).unwrap();
        assert_eq!(w.c, 0.5);
        assert_eq!(w.index, 3);
        // Rebuild the map from the stored factors.
        let lift = w.lift.as_ref().unwrap().as_map();
        let rebuilt = AffineBallMap::new(
            &w.rotation * lift.linear(),
            &w.rotation * lift.translation(),
        )
        .unwrap();
        assert!((rebuilt.linear() - w.map.linear()).norm() < 1e-12);
        assert!((rebuilt.translation() - w.map.translation()).norm() < 1e-12);
    }

    #[test]
    fn synthesized_chain_is_nested() {
        // Sampled points of each contact set lie close to the previous one.
        let tol = Tolerances::default();
        let w = synthesize(3, None).unwrap();
        let cert = crate::certify::primitivity_index(&w.map, &tol).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for win in cert.chain.windows(2).skip(1) {
            let (prev, next) = (&win[0], &win[1]);
            if next.contact.is_empty() {
                continue;
            }
            for _ in 0..30 {
                let p = next.contact.sample(&mut rng).unwrap();
                assert!(
                    prev.contact.distance(&p) < 1e-6,
                    "k={} contact point escapes k={} contact",
                    next.k,
                    prev.k
                );
            }
        }
    }

    #[test]
    fn synthesize_noise_robustness_of_procrustes() {
        // Perturbing targets within the advertised tolerance must not trip
        // the distance gate.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let q = random_orthogonal(&mut rng, 3);
        let sources: Vec<DVector<f64>> =
            (0..2).map(|_| random_unit_vector(&mut rng, 3)).collect();
        let targets: Vec<DVector<f64>> = sources
            .iter()
            .map(|s| {
                let mut t = &q * s;
                for i in 0..3 {
                    t[i] += 1e-10 * standard_normal(&mut rng);
                }
                t /= t.norm();
                t
            })
            .collect();
        let r = procrustes_rotation(&sources, &targets).unwrap();
        for (s, t) in sources.iter().zip(&targets) {
            assert!((&r * s - t).norm() < 1e-8);
        }
    }
}
