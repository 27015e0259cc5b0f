//! Qubit channels and the Bloch-ball view of positive trace-preserving
//! maps.
//!
//! A qubit state is `X = (t I + r . sigma) / 2` in Pauli coordinates
//! `(t; r1, r2, r3)`; density matrices have `t = 1` and `||r|| <= 1`, so
//! trace-preserving positive maps act on the Bloch ball as affine self-maps
//! and the cone of positive semidefinite 2x2 matrices is a Lorentz cone in
//! disguise (the trace is the height coordinate, moved to the last slot by
//! the homogenization convention of [`crate::cone`]).
//!
//! The module provides Kraus channels, the Pauli transfer matrix in both
//! directions, an unnormalized-Choi complete positivity test, and the
//! explicit two-Kraus channel familiy whose primitivity index attains the
//! completely positive maximum 3.

use crate::certify::{primitivity_index, PrimitivityCertificate};
use crate::cone::{AffineBallMap, Tolerances};
use crate::error::Error;
use crate::util::standard_normal;
use nalgebra::{Complex, DMatrix, DVector, Matrix2, Matrix4, Vector2};
use rand::Rng;

pub type C64 = Complex<f64>;
pub type QubitMatrix = Matrix2<C64>;
pub type QubitVector = Vector2<C64>;

fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Pauli basis (identity, sigma_x, sigma_y, sigma_z).
pub fn paulis() -> [QubitMatrix; 4] {
    let o = c(0.0);
    let l = c(1.0);
    let i = Complex::new(0.0, 1.0);
    [
        QubitMatrix::new(l, o, o, l),
        QubitMatrix::new(o, l, l, o),
        QubitMatrix::new(o, -i, i, o),
        QubitMatrix::new(l, o, o, -l),
    ]
}

/// Bloch coordinates `r_i = tr(rho sigma_i)` of a Hermitian 2x2 matrix.
pub fn bloch_vector(rho: &QubitMatrix) -> DVector<f64> {
    let sigma = paulis();
    DVector::from_fn(3, |i, _| (rho * sigma[i + 1]).trace().re)
}

/// Rank-one projector onto a unit vector.
pub fn pure_state(psi: &QubitVector) -> QubitMatrix {
    psi * psi.adjoint()
}

/// A quantum channel in Kraus form, `Phi(X) = sum_k K_k X K_k^dagger`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<QubitMatrix>,
}

impl KrausChannel {
    /// Validates trace preservation: `sum_k K_k^dagger K_k = I` within
    /// 1e-10.
    pub fn new(kraus: Vec<QubitMatrix>) -> Result<Self, Error> {
        if kraus.is_empty() {
            return Err(Error::InvalidInput(
                "channel needs at least one Kraus operator".into(),
            ));
        }
        for k in &kraus {
            if k.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput("entries must be finite".into()));
            }
        }
        let mut sum = QubitMatrix::zeros();
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let deviation = (sum - QubitMatrix::identity()).norm();
        if deviation > 1e-10 {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(KrausChannel { kraus })
    }

    pub fn unitary(u: QubitMatrix) -> Result<Self, Error> {
        KrausChannel::new(vec![u])
    }

    pub fn kraus(&self) -> &[QubitMatrix] {
        &self.kraus
    }

    pub fn apply(&self, x: &QubitMatrix) -> QubitMatrix {
        let mut out = QubitMatrix::zeros();
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        out
    }
}

/// Angles and distinguished states of the two-Kraus construction.
///
/// `psi_pm = (cos theta, +-sin theta)` are the only pure states with a pure
/// output, and their outputs are `phi_pm = (cos delta, +-sin delta)`, with
/// `tan theta = sqrt(sin 2a / sin 2b)` and `tan delta = sqrt(tan a / tan b)`.
/// `a != b` keeps `delta != pi/4`, so `0 < |<phi_+, phi_->| < 1`.
#[derive(Debug, Clone)]
pub struct WielandtParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub delta: f64,
    pub psi_plus: QubitVector,
    pub psi_minus: QubitVector,
    pub phi_plus: QubitVector,
    pub phi_minus: QubitVector,
}

fn check_angles(alpha: f64, beta: f64) -> Result<(), Error> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    if !(alpha.is_finite() && beta.is_finite())
        || alpha <= 0.0
        || beta <= 0.0
        || alpha >= half_pi
        || beta >= half_pi
    {
        return Err(Error::BadAngles { alpha, beta });
    }
    if alpha == beta {
        return Err(Error::EqualAngles);
    }
    Ok(())
}

pub fn wielandt_params(alpha: f64, beta: f64) -> Result<WielandtParams, Error> {
    check_angles(alpha, beta)?;
    let theta = ((2.0 * alpha).sin() / (2.0 * beta).sin()).sqrt().atan();
    let delta = (alpha.tan() / beta.tan()).sqrt().atan();
    let real_pair = |t: f64| {
        (
            QubitVector::new(c(t.cos()), c(t.sin())),
            QubitVector::new(c(t.cos()), c(-t.sin())),
        )
    };
    let (psi_plus, psi_minus) = real_pair(theta);
    let (phi_plus, phi_minus) = real_pair(delta);
    Ok(WielandtParams {
        alpha,
        beta,
        theta,
        delta,
        psi_plus,
        psi_minus,
        phi_plus,
        phi_minus,
    })
}

/// The raw two-Kraus channel `Psi(X) = A X A* + B X B*` with
/// `A = diag(cos a, cos b)` and `B = [[0, sin b], [sin a, 0]]`; trace
/// preservation holds identically in the angles.
pub fn wielandt_kraus(alpha: f64, beta: f64) -> Result<KrausChannel, Error> {
    check_angles(alpha, beta)?;
    let o = c(0.0);
    let a = QubitMatrix::new(c(alpha.cos()), o, o, c(beta.cos()));
    let b = QubitMatrix::new(o, c(beta.sin()), c(alpha.sin()), o);
    KrausChannel::new(vec![a, b])
}

/// The distinguished pure states and their images under the raw channel.
#[derive(Debug, Clone)]
pub struct PureContactStates {
    pub rho_plus: QubitMatrix,
    pub rho_minus: QubitMatrix,
    pub output_plus: QubitMatrix,
    pub output_minus: QubitMatrix,
}

/// Builds `rho_pm = |psi_pm><psi_pm|` and applies the raw channel to them;
/// the outputs are the pure states `|phi_pm><phi_pm|`.
pub fn pure_contact_states(params: &WielandtParams) -> PureContactStates {
    let channel =
        wielandt_kraus(params.alpha, params.beta).expect("params carry validated angles");
    let rho_plus = pure_state(&params.psi_plus);
    let rho_minus = pure_state(&params.psi_minus);
    let output_plus = channel.apply(&rho_plus);
    let output_minus = channel.apply(&rho_minus);
    PureContactStates {
        rho_plus,
        rho_minus,
        output_plus,
        output_minus,
    }
}

/// A unitary with `U phi_+ = psi_-` whose image of `phi_-` is proportional
/// to neither `psi_+` nor `psi_-`.
///
/// Decomposes `phi_- = a phi_+ + b chi` with `chi` orthogonal to `phi_+`,
/// maps the basis `(phi_+, chi)` to `(psi_-, e^{i theta} omega)` with
/// `omega` orthogonal to `psi_-`, and picks the phase over a grid of 64
/// candidates maximizing the smaller non-proportionality margin
/// `1 - |<psi_pm, U phi_->|`. The margin must reach 1e-3.
pub fn generic_unitary(
    phi_plus: &QubitVector,
    phi_minus: &QubitVector,
    psi_plus: &QubitVector,
    psi_minus: &QubitVector,
) -> Result<QubitMatrix, Error> {
    for v in [phi_plus, phi_minus, psi_plus, psi_minus] {
        if (v.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidInput(format!(
                "states must be unit vectors, got norm {}",
                v.norm()
            )));
        }
    }
    let a = phi_plus.dotc(phi_minus);
    let overlap = a.norm();
    if !(1e-6..=1.0 - 1e-6).contains(&overlap) {
        return Err(Error::DegenerateOverlap { overlap });
    }
    let chi_raw = phi_minus - phi_plus * a;
    let chi = chi_raw.unscale(chi_raw.norm());
    let omega = QubitVector::new(-psi_minus[1].conj(), psi_minus[0].conj());

    let base = psi_minus * phi_plus.adjoint();
    let mut best: Option<(f64, QubitMatrix)> = None;
    for k in 0..64 {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
        let phase = Complex::new(0.0, theta).exp();
        let u = base + (omega * phase) * chi.adjoint();
        let image = u * phi_minus;
        let margin = (1.0 - psi_plus.dotc(&image).norm())
            .min(1.0 - psi_minus.dotc(&image).norm());
        if best.as_ref().is_none_or(|(m, _)| margin > *m) {
            best = Some((margin, u));
        }
    }
    let (margin, u) = best.expect("grid is nonempty");
    if margin < 1e-3 {
        return Err(Error::DegenerateOverlap {
            overlap: 1.0 - margin,
        });
    }
    Ok(u)
}

/// The channel `Phi(X) = U Psi(X) U*` with Kraus operators `{UA, UB}`:
/// it sends `rho_+` to `rho_-` and its primitivity index is 3, the maximum
/// over all completely positive qubit maps.
pub fn wielandt_channel(alpha: f64, beta: f64) -> Result<KrausChannel, Error> {
    let params = wielandt_params(alpha, beta)?;
    let raw = wielandt_kraus(alpha, beta)?;
    let u = generic_unitary(
        &params.phi_plus,
        &params.phi_minus,
        &params.psi_plus,
        &params.psi_minus,
    )?;
    KrausChannel::new(raw.kraus().iter().map(|k| u * k).collect())
}

/// The Bloch-ball action of a channel, from the Pauli transfer matrix
/// `T_ij = tr(sigma_i Phi(sigma_j)) / 2`: trace preservation forces the
/// first row to `(1, 0, 0, 0)` and the rest reads off as `x -> Ax + b`.
pub fn channel_to_bloch(ch: &KrausChannel) -> Result<AffineBallMap, Error> {
    let sigma = paulis();
    let mut t = Matrix4::<f64>::zeros();
    for j in 0..4 {
        let image = ch.apply(&sigma[j]);
        for i in 0..4 {
            t[(i, j)] = 0.5 * (sigma[i] * image).trace().re;
        }
    }
    let mut deviation = (t[(0, 0)] - 1.0).abs();
    for j in 1..4 {
        deviation = deviation.max(t[(0, j)].abs());
    }
    if deviation > 1e-8 {
        return Err(Error::NotTracePreserving { deviation });
    }
    let a = DMatrix::from_fn(3, 3, |i, j| t[(i + 1, j + 1)]);
    let b = DVector::from_fn(3, |i, _| t[(i + 1, 0)]);
    AffineBallMap::new(a, b)
}

/// A trace-preserving linear map on Hermitian 2x2 matrices, stored as its
/// real 4x4 action on Pauli coordinates `(t; r1, r2, r3)`.
///
/// The action extends to all complex matrices by linearity (the Pauli
/// coordinates simply become complex), which is what the Choi construction
/// feeds on.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMapMatrix {
    m: Matrix4<f64>,
}

impl HermitianMapMatrix {
    pub fn new(m: Matrix4<f64>) -> Self {
        HermitianMapMatrix { m }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        (self.m[(0, 0)] - 1.0).abs() <= tol
            && (1..4).all(|j| self.m[(0, j)].abs() <= tol)
    }

    /// Applies the map to an arbitrary complex 2x2 matrix via its (complex)
    /// Pauli coordinates.
    pub fn apply(&self, x: &QubitMatrix) -> QubitMatrix {
        let sigma = paulis();
        let coords: Vec<C64> = sigma.iter().map(|s| (x * s).trace()).collect();
        let mut out_coords = [c(0.0); 4];
        for (i, oc) in out_coords.iter_mut().enumerate() {
            for (j, cj) in coords.iter().enumerate() {
                *oc += cj * self.m[(i, j)];
            }
        }
        let mut out = QubitMatrix::zeros();
        for (s, oc) in sigma.iter().zip(&out_coords) {
            out += s * (oc * c(0.5));
        }
        out
    }

    /// The Bloch-ball action, when the map is trace preserving.
    pub fn bloch_map(&self) -> Result<AffineBallMap, Error> {
        if !self.is_trace_preserving(1e-8) {
            return Err(Error::NotTracePreserving {
                deviation: (self.m[(0, 0)] - 1.0)
                    .abs()
                    .max((1..4).map(|j| self.m[(0, j)].abs()).fold(0.0, f64::max)),
            });
        }
        let a = DMatrix::from_fn(3, 3, |i, j| self.m[(i + 1, j + 1)]);
        let b = DVector::from_fn(3, |i, _| self.m[(i + 1, 0)]);
        AffineBallMap::new(a, b)
    }
}

/// Lifts an affine Bloch-ball map to the trace-preserving map on Hermitian
/// matrices realizing it: `[[1, 0], [b, A]]` in Pauli coordinates.
pub fn bloch_to_qubit_map(phi: &AffineBallMap) -> Result<HermitianMapMatrix, Error> {
    if phi.dim() != 3 {
        return Err(Error::InvalidInput(format!(
            "Bloch maps live in dimension 3, got {}",
            phi.dim()
        )));
    }
    let mut m = Matrix4::<f64>::zeros();
    m[(0, 0)] = 1.0;
    for i in 0..3 {
        m[(i + 1, 0)] = phi.translation()[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] = phi.linear()[(i, j)];
        }
    }
    Ok(HermitianMapMatrix::new(m))
}

/// Complete positivity via the unnormalized Choi matrix
/// `C = sum_ij E_ij (x) map(E_ij)`: the map is CP iff `C >= 0`, tested as
/// `min eig >= -1e-9`. Returns the verdict and the minimal eigenvalue.
pub fn choi_cp_check(map: &HermitianMapMatrix) -> (bool, f64) {
    let mut choi = Matrix4::<C64>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut e = QubitMatrix::zeros();
            e[(i, j)] = c(1.0);
            let block = map.apply(&e);
            for r in 0..2 {
                for s in 0..2 {
                    choi[(2 * i + r, 2 * j + s)] = block[(r, s)];
                }
            }
        }
    }
    let herm = (choi + choi.adjoint()) * c(0.5);
    let min_eig = nalgebra::SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b));
    (min_eig >= -1e-9, min_eig)
}

/// Certifies the primitivity index of a channel through its Bloch-ball
/// action; contact sets in the certificate are sets of pure states.
pub fn channel_index(ch: &KrausChannel) -> Result<PrimitivityCertificate, Error> {
    let bloch = channel_to_bloch(ch)?;
    primitivity_index(&bloch, &Tolerances::default())
}

/// Random CPTP channel with `k` Kraus operators: Gaussian matrices
/// whitened by the inverse square root of their squared sum.
pub fn random_cptp_channel<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Result<KrausChannel, Error> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "channel needs at least one Kraus operator".into(),
        ));
    }
    let gs: Vec<QubitMatrix> = (0..k)
        .map(|_| {
            QubitMatrix::from_fn(|_, _| Complex::new(standard_normal(rng), standard_normal(rng)))
        })
        .collect();
    let mut s = QubitMatrix::zeros();
    for g in &gs {
        s += g.adjoint() * g;
    }
    let eig = nalgebra::SymmetricEigen::new(s);
    if eig.eigenvalues.iter().any(|&l| l <= 1e-12) {
        // Retry on the (measure zero) degenerate draw.
        return random_cptp_channel(rng, k);
    }
    let mut s_inv_sqrt = QubitMatrix::zeros();
    for i in 0..2 {
        let col = eig.eigenvectors.column(i).into_owned();
        s_inv_sqrt += (col * col.adjoint()) * c(1.0 / eig.eigenvalues[i].sqrt());
    }
    KrausChannel::new(gs.iter().map(|g| g * s_inv_sqrt).collect())
}
