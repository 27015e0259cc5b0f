//! Certified primitivity indices for affine self-maps of the Euclidean
//! ball.
//!
//! An affine map `x -> Ax + b` sending the closed unit ball into itself is
//! *primitive* when some iterate pushes the unit sphere strictly inside the
//! ball; the least such exponent is the primitivity index. Through
//! homogenization these maps are exactly the linear maps preserving a
//! Lorentz cone, so the index is simultaneously a statement about cone
//! linear maps and, in dimension three, about positive trace-preserving
//! qubit maps acting on the Bloch ball.
//!
//! The crate certifies indices by exact global sphere maximization
//! ([`certify::sphere_max`], a trust-region style secular solver with full
//! hard-case handling), tracks the resulting chain of contact subspheres,
//! synthesizes extremal maps of index `n + 1` in dimension `n`
//! ([`synthesis::synthesize`]), and builds the two-Kraus qubit channel of
//! index 3 attaining the completely positive maximum
//! ([`qubit::wielandt_channel`]). Independent brute-force oracles live in
//! [`oracle`], JSON transfer types in [`jsonio`], and a command-line front
//! end in the `ballprim` binary.

pub mod certify;
pub mod cone;
pub mod error;
pub mod jsonio;
pub mod oracle;
pub mod qubit;
pub mod synthesis;
mod util;

pub use certify::{
    contact_set, is_primitive, primitivity_index, primitivity_index_with, sphere_max, CertifyOptions,
    ChainStep, PrimitivityCertificate, SphereMaxResult, Verdict,
};
pub use cone::{
    dehomogenize, homogenize, is_lorentz_positive, lorentz_positivity, AffineBallMap,
    ConeLinearMap, Dehomogenization, LorentzPositivity, Subsphere, Tolerances,
};
pub use error::Error;
pub use qubit::{
    bloch_to_qubit_map, channel_index, channel_to_bloch, choi_cp_check, wielandt_channel,
    wielandt_kraus, wielandt_params, HermitianMapMatrix, KrausChannel, WielandtParams,
};
pub use synthesis::{synthesize, ExtremalWitness, LatitudeLift};
