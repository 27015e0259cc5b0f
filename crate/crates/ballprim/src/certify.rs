//! Certification of positivity, strict positivity and primitivity for
//! affine self-maps of the unit ball.
//!
//! The workhorse is [`sphere_max`], an exact solver for
//! `max { ||Ax + b|| : ||x|| = 1 }` based on the KKT system
//! `(lambda I - A^T A) x = A^T b` with `lambda >= lambda_max(A^T A)`. In the
//! generic case the multiplier is the root of a secular equation; when
//! `A^T b` is orthogonal to the top eigenspace the maximizer is a whole
//! subsphere (the hard case) and is returned as such. The primitivity
//! certifier iterates the map, classifies each iterate as strictly inside,
//! in boundary contact, or escaping, and tracks the strictly decreasing
//! chain of contact-set dimensions.

use crate::cone::{AffineBallMap, Subsphere, Tolerances};
use crate::error::Error;
use crate::util::{orthonormalize, project_onto_span, sorted_symmetric_eigen};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Absolute floor for the coupling `||P_top A^T b||` relative to the scale
/// `||A|| ||b||`. Couplings below the floor are floating-point noise (the
/// matrix-vector product alone carries error of order `eps_f64 * scale`) and
/// are treated as exactly zero, which keeps the hard-case decision stable
/// under compiler- and library-level reassociation of the arithmetic.
const COUPLING_FLOOR: f64 = 1e-12;

/// Result of maximizing `||Ax + b||` over the unit sphere.
#[derive(Debug, Clone)]
pub struct SphereMaxResult {
    /// The maximal norm.
    pub value: f64,
    /// KKT multiplier `lambda`; equals `lambda_max(A^T A)` exactly in the
    /// hard case and exceeds it otherwise.
    pub multiplier: f64,
    /// The full set of maximizers as a subsphere of S^{n-1}; a single point
    /// in the generic case.
    pub argmax: Subsphere,
    /// Whether the hard case occurred (`A^T b` orthogonal to the top
    /// eigenspace, maximizer set of positive dimension unless the interior
    /// component already has unit norm).
    pub hard_case: bool,
}

/// Exact maximum of `||Ax + b||` over the unit sphere `||x|| = 1`.
///
/// Stationary points satisfy `(lambda I - H) x = g` with `H = A^T A`,
/// `g = A^T b`; the global maximum is the branch with
/// `lambda >= lambda_max(H)`. Writing `lambda = lambda_max + w` and
/// expanding in the eigenbasis of `H` turns the constraint `||x|| = 1` into
/// the secular equation `sum_i gbar_i^2 / (w + d_i)^2 = 1`, solved by a
/// safeguarded Newton iteration on a sign-changing bracket.
pub fn sphere_max(phi: &AffineBallMap, tol: &Tolerances) -> SphereMaxResult {
    let n = phi.dim();
    let a = phi.linear();
    let b = phi.translation();
    let h = {
        let raw = a.transpose() * a;
        (&raw + raw.transpose()) * 0.5
    };
    let (vals, vecs) = sorted_symmetric_eigen(&h);
    let lambda_max = vals[0].max(0.0);
    let g = a.transpose() * b;
    let g_norm = g.norm();
    let gbar: Vec<f64> = vecs.iter().map(|v| v.dot(&g)).collect();

    // Eigenvalues within rank_tol * lambda_max of the top (plus the
    // floating-point noise floor) are clustered into the top eigenspace.
    let cluster = tol.rank_tol * lambda_max + f64::EPSILON * (1.0 + h.norm());
    let d: Vec<f64> = vals.iter().map(|&l| (lambda_max - l).max(0.0)).collect();
    let is_top: Vec<bool> = d.iter().map(|&di| di <= cluster).collect();
    let g_top = (0..n)
        .filter(|&i| is_top[i])
        .map(|i| gbar[i] * gbar[i])
        .sum::<f64>()
        .sqrt();

    let secular = |w: f64| -> f64 {
        gbar.iter()
            .zip(&d)
            .map(|(gi, di)| {
                let t = gi / (w + di);
                t * t
            })
            .sum::<f64>()
            - 1.0
    };
    let secular_deriv = |w: f64| -> f64 {
        -2.0 * gbar
            .iter()
            .zip(&d)
            .map(|(gi, di)| gi * gi / (w + di).powi(3))
            .sum::<f64>()
    };
    let maximizer_at = |w: f64| -> DVector<f64> {
        let mut x = DVector::zeros(n);
        for i in 0..n {
            x += &vecs[i] * (gbar[i] / (w + d[i]));
        }
        let norm = x.norm();
        x / norm
    };
    let generic_result = |w: f64| -> SphereMaxResult {
        let x = maximizer_at(w);
        let value = phi.apply(&x).norm();
        SphereMaxResult {
            value,
            multiplier: lambda_max + w,
            argmax: Subsphere::point(x).expect("secular maximizer is unit"),
            hard_case: false,
        }
    };

    let eps = tol.rank_tol * (1.0 + lambda_max);
    let w_hi = g_norm + 1.0;
    // The coupling test needs an absolute floor in addition to the relative
    // one: `g = A^T b` is computed with rounding error on the order of
    // `eps_f64 * ||A|| * ||b||`, so when the true coupling vanishes the
    // computed `g` is pure noise and `g_top / g_norm` is an arbitrary
    // direction cosine. Components below the floor are indistinguishable
    // from zero; treating them as zero perturbs reported values by at most
    // `4 * COUPLING_FLOOR * scale`, far inside the contact band.
    let g_scale = a.norm() * b.norm();
    let hard = g_norm == 0.0
        || g_top <= tol.rank_tol * g_norm
        || g_top <= COUPLING_FLOOR * g_scale;

    if !hard {
        if secular(eps) > 0.0 {
            let w = secular_root(&secular, &secular_deriv, eps, w_hi, tol.root_tol);
            return generic_result(w);
        }
        // The root sits below eps; it still exists because the top
        // component of g is nonzero. If even a bracket at g_top / 2 fails
        // the coupling is below noise and the hard-case treatment applies.
        let w_lo = g_top / 2.0;
        if w_lo > 0.0 && secular(w_lo) > 0.0 {
            let w = secular_root(&secular, &secular_deriv, w_lo, eps, tol.root_tol);
            return generic_result(w);
        }
    }

    // Hard case: project g onto the non-top eigendirections.
    let mut x_hat = DVector::zeros(n);
    for i in 0..n {
        if !is_top[i] {
            x_hat += &vecs[i] * (gbar[i] / d[i]);
        }
    }
    let r2 = 1.0 - x_hat.norm_squared();
    if r2 >= -1e-14 {
        let radius = r2.max(0.0).sqrt();
        let basis: Vec<DVector<f64>> = (0..n)
            .filter(|&i| is_top[i])
            .map(|i| vecs[i].clone())
            .collect();
        let probe = if radius > 0.0 && !basis.is_empty() {
            &x_hat + &basis[0] * radius
        } else {
            x_hat.clone()
        };
        let value = phi.apply(&probe).norm();
        let argmax = Subsphere::new(x_hat, radius, basis).expect("hard-case maximizer set");
        return SphereMaxResult {
            value,
            multiplier: lambda_max,
            argmax,
            hard_case: true,
        };
    }

    // The interior component alone exceeds the sphere, so the multiplier is
    // strictly above lambda_max after all; walk down to a sign change.
    let mut w_lo = eps;
    for _ in 0..2000 {
        if secular(w_lo) > 0.0 || w_lo < 1e-280 {
            break;
        }
        w_lo *= 0.5;
    }
    let w = secular_root(&secular, &secular_deriv, w_lo, w_hi, tol.root_tol);
    generic_result(w)
}

/// Safeguarded Newton iteration for the secular equation on a bracket with
/// `f(lo) > 0 > f(hi)`; `f` is strictly decreasing there.
fn secular_root(
    f: &dyn Fn(f64) -> f64,
    fp: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    root_tol: f64,
) -> f64 {
    let mut w = 0.5 * (lo + hi);
    for _ in 0..256 {
        let fv = f(w);
        if fv > 0.0 {
            lo = w;
        } else {
            hi = w;
        }
        let der = fp(w);
        let newton = if der < 0.0 { w - fv / der } else { f64::NAN };
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo) <= root_tol * (1.0 + w.abs()) || (next - w).abs() <= root_tol * (1.0 + w.abs())
        {
            return next;
        }
        w = next;
    }
    w
}

/// Contact set `C(phi) = S^{n-1} /\ phi(S^{n-1})`: the image of the
/// maximizer set when the maximal norm is within the indeterminate band
/// around 1, [`Subsphere::Empty`] when the image is strictly inside the
/// ball, and [`Error::NotPositive`] when it escapes.
pub fn contact_set(phi: &AffineBallMap, tol: &Tolerances) -> Result<Subsphere, Error> {
    let res = sphere_max(phi, tol);
    if res.value > 1.0 + tol.positivity_tol {
        return Err(Error::NotPositive { value: res.value });
    }
    if res.value < 1.0 - tol.positivity_tol {
        return Ok(Subsphere::Empty);
    }
    contact_image(phi, &res)
}

/// Pushes the maximizer subsphere through the map. When the maximizers'
/// images lie on the unit sphere the map restricted to the maximizer span
/// is a similarity, so the image is again a subsphere: its affine hull is
/// `phi(center) + span(A * basis)`, its center is the projection of the
/// origin onto that hull, and its radius closes up to the sphere.
fn contact_image(phi: &AffineBallMap, res: &SphereMaxResult) -> Result<Subsphere, Error> {
    match &res.argmax {
        Subsphere::Empty => Ok(Subsphere::Empty),
        Subsphere::NonEmpty {
            center,
            radius,
            basis,
        } => {
            let q = phi.apply(center);
            if *radius == 0.0 || basis.is_empty() {
                return Subsphere::point(q);
            }
            let images: Vec<DVector<f64>> = basis.iter().map(|v| phi.linear() * v).collect();
            let span = orthonormalize(&images, 1e-8);
            if span.is_empty() {
                return Subsphere::point(q);
            }
            let center_img = &q - project_onto_span(&span, &q);
            let radius_img = (1.0 - center_img.norm_squared()).max(0.0).sqrt();
            Subsphere::new(center_img, radius_img, span)
        }
    }
}

/// Verdict of the primitivity certifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Some iterate maps the closed ball strictly inside the open ball.
    Primitive,
    /// The map itself sends some unit vector strictly outside the ball.
    NotPositive,
    /// The contact-set chain stabilized, so no iterate is strictly
    /// positive.
    NotPrimitive,
}

/// One record of the certified chain: the k-th iterate's maximal image
/// norm and its contact set.
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub k: usize,
    pub max_norm: f64,
    pub contact: Subsphere,
}

impl ChainStep {
    pub fn aff_dim(&self) -> i64 {
        self.contact.aff_dim()
    }
}

/// Certificate produced by [`primitivity_index`]: the verdict, the index
/// when primitive, and the full chain of iterate classifications starting
/// from `k = 0` (where the "contact set" is the whole sphere by
/// convention).
#[derive(Debug, Clone)]
pub struct PrimitivityCertificate {
    pub index: Option<usize>,
    pub verdict: Verdict,
    pub chain: Vec<ChainStep>,
}

/// Options for [`primitivity_index_with`].
#[derive(Debug, Clone, Default)]
pub struct CertifyOptions {
    pub tolerances: Tolerances,
    /// Iteration cap; defaults to n + 1, which always suffices to decide.
    pub max_iterations: Option<usize>,
    /// Unit vectors known to witness boundary contact of some iterate;
    /// they rescue band-classification when the solver's own argmax
    /// re-evaluation is inconclusive.
    pub contact_witnesses: Vec<DVector<f64>>,
}

/// Certifies the primitivity index of `phi` with default options.
///
/// The index is the least k with `phi^k` strictly positive (image of the
/// closed ball inside the open ball). Iterates are classified by
/// [`sphere_max`]: strictly inside ends the chain with verdict
/// [`Verdict::Primitive`], escape at k = 1 gives [`Verdict::NotPositive`],
/// and boundary contact extends the chain with the contact subsphere. The
/// chain's affine dimensions strictly decrease while the map is primitive;
/// a repeat (or growth) means the chain stabilized and the verdict is
/// [`Verdict::NotPrimitive`].
pub fn primitivity_index(
    phi: &AffineBallMap,
    tol: &Tolerances,
) -> Result<PrimitivityCertificate, Error> {
    primitivity_index_with(
        phi,
        &CertifyOptions {
            tolerances: *tol,
            ..CertifyOptions::default()
        },
    )
}

/// [`primitivity_index`] with an iteration cap and contact witnesses.
pub fn primitivity_index_with(
    phi: &AffineBallMap,
    opts: &CertifyOptions,
) -> Result<PrimitivityCertificate, Error> {
    let tol = &opts.tolerances;
    let n = phi.dim();
    let cap = opts.max_iterations.unwrap_or(n + 1).max(1);

    let mut chain = vec![ChainStep {
        k: 0,
        max_norm: 1.0,
        contact: Subsphere::full(n),
    }];
    let mut prev_dim = n as i64;
    let mut current = phi.clone();

    for k in 1..=cap {
        let res = sphere_max(&current, tol);
        if res.value > 1.0 + tol.positivity_tol {
            if k == 1 {
                chain.push(ChainStep {
                    k,
                    max_norm: res.value,
                    contact: Subsphere::Empty,
                });
                return Ok(PrimitivityCertificate {
                    index: None,
                    verdict: Verdict::NotPositive,
                    chain,
                });
            }
            // A positive map keeps all iterates inside the closed ball, so
            // escape after a certified contact means the earlier
            // classification was not trustworthy.
            return Err(Error::AmbiguousMargin { k, value: res.value });
        }
        if res.value < 1.0 - tol.positivity_tol {
            chain.push(ChainStep {
                k,
                max_norm: res.value,
                contact: Subsphere::Empty,
            });
            return Ok(PrimitivityCertificate {
                index: Some(k),
                verdict: Verdict::Primitive,
                chain,
            });
        }

        if !contact_witnessed(&current, &res, opts) {
            return Err(Error::AmbiguousMargin { k, value: res.value });
        }
        let contact = contact_image(&current, &res)?;
        let dim = contact.aff_dim();
        chain.push(ChainStep {
            k,
            max_norm: res.value,
            contact,
        });
        if dim >= prev_dim {
            return Ok(PrimitivityCertificate {
                index: None,
                verdict: Verdict::NotPrimitive,
                chain,
            });
        }
        prev_dim = dim;
        current = phi.compose(&current);
    }

    Err(Error::InvalidInput(format!(
        "primitivity undecided within {cap} iterations; deciding needs up to n + 1 = {}",
        n + 1
    )))
}

/// A band-classified iterate needs evidence that the boundary touch is
/// real: either a registered witness whose image lands within the band, or
/// sampled maximizers whose images independently re-evaluate onto the
/// sphere.
fn contact_witnessed(
    current: &AffineBallMap,
    res: &SphereMaxResult,
    opts: &CertifyOptions,
) -> bool {
    let tol = &opts.tolerances;
    for w in &opts.contact_witnesses {
        if (w.norm() - 1.0).abs() <= 1e-8
            && (current.apply(w).norm() - 1.0).abs() <= tol.positivity_tol
        {
            return true;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..8 {
        match res.argmax.sample(&mut rng) {
            None => return false,
            Some(p) => {
                let v = current.apply(&p).norm();
                if (v - 1.0).abs() > tol.positivity_tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether `phi` has a finite primitivity index.
pub fn is_primitive(phi: &AffineBallMap, tol: &Tolerances) -> Result<bool, Error> {
    Ok(primitivity_index(phi, tol)?.verdict == Verdict::Primitive)
}
