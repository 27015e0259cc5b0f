//! End-to-end acceptance gates for the certified primitivity toolkit.
//!
//! Each test is one numbered criterion with its own tolerance and runtime
//! budget; the harness line per test doubles as the pass/fail report. The
//! random families are seeded, so every run checks the same maps.

use ballprim::oracle::{brute_sphere_max, subsphere_fit};
use ballprim::qubit::{random_cptp_channel, QubitMatrix};
use ballprim::synthesis::{build_gram, latitude_lift};
use ballprim::{
    bloch_to_qubit_map, channel_index, channel_to_bloch, choi_cp_check, contact_set, is_primitive,
    primitivity_index, sphere_max, synthesize, wielandt_channel, AffineBallMap, KrausChannel,
    Subsphere, Tolerances, Verdict,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, FRAC_PI_8, PI};
use std::time::{Duration, Instant};

/// Criterion 1 — extremal index: in every dimension n = 1..8 the
/// synthesized map certifies index exactly n + 1 with the contact-dimension
/// chain n, n-1, ..., 0, -1, and every strictly-inside iterate clears the
/// boundary by at least 1e-6.
#[test]
fn criterion_1_extremal_index_is_n_plus_1() {
    let start = Instant::now();
    let tol = Tolerances::default();
    for n in 1..=8usize {
        let w = synthesize(n, None).expect("synthesis succeeds");
        let cert = primitivity_index(&w.map, &tol).expect("witness map certifies");
        assert_eq!(cert.verdict, Verdict::Primitive, "dimension {n}");
        assert_eq!(cert.index, Some(n + 1), "dimension {n}: index must be n + 1");
        let dims: Vec<i64> = cert.chain.iter().map(|s| s.aff_dim()).collect();
        let expected: Vec<i64> = (-1..=n as i64).rev().collect();
        assert_eq!(dims, expected, "dimension {n}: contact chain dimensions");
        for step in &cert.chain {
            if matches!(step.contact, Subsphere::Empty) {
                assert!(
                    step.max_norm <= 1.0 - 1e-6,
                    "dimension {n}, iterate {}: margin {:.3e} below 1e-6",
                    step.k,
                    1.0 - step.max_norm
                );
            } else {
                assert!(
                    (step.max_norm - 1.0).abs() <= tol.positivity_tol,
                    "dimension {n}, iterate {}: contact step norm {} outside band",
                    step.k,
                    step.max_norm
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "budget exceeded: {elapsed:?}");
    println!("criterion 1 PASS: index n+1 and chain n..-1 for n = 1..8 ({elapsed:?})");
}

/// Criterion 2 — qubit Wielandt channels certify index exactly 3, are trace
/// preserving to 1e-10 and completely positive to -1e-9; the lifted
/// three-dimensional extremal map certifies index 4 and fails complete
/// positivity by a margin worse than -1e-3.
#[test]
fn criterion_2_qubit_wielandt_index_3_and_cp_gap() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let pairs = [(FRAC_PI_6, FRAC_PI_3), (FRAC_PI_8, FRAC_PI_3), (0.4, 1.2)];
    for &(alpha, beta) in &pairs {
        let ch = wielandt_channel(alpha, beta).expect("valid angle pair");
        assert!(
            trace_preservation_deviation(&ch) <= 1e-10,
            "({alpha}, {beta}): Kraus sum deviates from identity"
        );
        let cert = channel_index(&ch).expect("channel certifies");
        assert_eq!(cert.index, Some(3), "({alpha}, {beta}): index must be 3");
        let qmap = bloch_to_qubit_map(&channel_to_bloch(&ch).expect("trace preserving"))
            .expect("three-dimensional Bloch map lifts");
        let (is_cp, min_eig) = choi_cp_check(&qmap);
        assert!(
            is_cp && min_eig >= -1e-9,
            "({alpha}, {beta}): min Choi eigenvalue {min_eig:.3e}"
        );
    }
    let w = synthesize(3, None).expect("synthesis succeeds");
    let cert = primitivity_index(&w.map, &tol).expect("witness map certifies");
    assert_eq!(cert.index, Some(4), "lifted extremal map must have index 4");
    let qmap = bloch_to_qubit_map(&w.map).expect("witness map lifts");
    let (is_cp, min_eig) = choi_cp_check(&qmap);
    assert!(
        !is_cp && min_eig < -1e-3,
        "lifted extremal map must fail complete positivity, min Choi {min_eig:.3e}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "budget exceeded: {elapsed:?}");
    println!(
        "criterion 2 PASS: three channels at index 3 (CP), lifted map at index 4 \
         with min Choi {min_eig:.3e} ({elapsed:?})"
    );
}

/// Criterion 3 — upper bound: 1000 seeded random primitive maps per
/// dimension n = 2..5 all certify index at most n + 1.
#[test]
fn criterion_3_random_primitive_maps_respect_upper_bound() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut checked = 0usize;
    let mut worst = 0usize;
    for n in 2..=5usize {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0003 + n as u64);
        let mut kept = 0usize;
        let mut attempts = 0usize;
        while kept < 1000 {
            attempts += 1;
            assert!(attempts < 20_000, "dimension {n}: generator starved");
            let target = if rng.gen::<f64>() < 0.5 {
                1.0
            } else {
                0.9 + 0.1 * rng.gen::<f64>()
            };
            let phi = random_positive_map(n, target, &mut rng);
            if !is_primitive(&phi, &tol).unwrap_or(false) {
                continue;
            }
            let cert = primitivity_index(&phi, &tol).expect("primitive map certifies");
            let idx = cert.index.expect("primitive verdict carries an index");
            assert!(
                idx <= n + 1,
                "dimension {n}: random primitive map certified index {idx} > {}",
                n + 1
            );
            worst = worst.max(idx);
            kept += 1;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "budget exceeded: {elapsed:?}");
    println!(
        "criterion 3 PASS: {checked} random primitive maps, all indices <= n+1 \
         (worst observed {worst}) ({elapsed:?})"
    );
}

/// Criterion 4 — solver versus oracle: on 200 seeded random maps per
/// dimension n = 2..5 the certified sphere maximum matches the brute-force
/// oracle to 1e-6, and every nonempty certified contact set refits as a
/// subsphere with residual below 1e-5.
#[test]
fn criterion_4_solver_matches_brute_oracle() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut value_worst = 0.0f64;
    let mut fit_worst = 0.0f64;
    let mut contacts = 0usize;
    for n in 2..=5usize {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0004 + n as u64);
        for i in 0..200usize {
            let target = match i % 4 {
                0 => 1.0,
                1 => 0.999,
                _ => 0.8 + 0.2 * rng.gen::<f64>(),
            };
            let phi = random_positive_map(n, target, &mut rng);
            let res = sphere_max(&phi, &tol);
            let brute = brute_sphere_max(&phi, 2000, 0xB007 + (n * 1000 + i) as u64);
            let gap = (res.value - brute).abs();
            value_worst = value_worst.max(gap);
            assert!(
                gap < 1e-6,
                "dimension {n}, map {i}: certified {} vs brute {} (gap {gap:.3e})",
                res.value,
                brute
            );
            let contact = contact_set(&phi, &tol).expect("generated maps stay positive");
            if let Subsphere::NonEmpty { .. } = contact {
                let count = 2 * (contact.aff_dim().max(0) as usize + 2);
                let points = sample_subsphere(&contact, count, &mut rng);
                let fitted = subsphere_fit(&points).expect("contact points fit a subsphere");
                let residual = max_distance_to(&fitted, &points);
                fit_worst = fit_worst.max(residual);
                assert!(
                    residual < 1e-5,
                    "dimension {n}, map {i}: contact refit residual {residual:.3e}"
                );
                contacts += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "budget exceeded: {elapsed:?}");
    println!(
        "criterion 4 PASS: 800 maps, worst value gap {value_worst:.3e}, \
         {contacts} contact sets refit with worst residual {fit_worst:.3e} ({elapsed:?})"
    );
}

/// Criterion 5 — lift identity: for 20 seeded angle pairs and 10^4 random
/// unit vectors each, 1 - ||Psi x||^2 equals
/// lambda^2 (1 - mu^2) (sin theta_x - sin alpha)^2 to 1e-12.
#[test]
fn criterion_5_lift_identity_to_1e12() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0005);
    let dims = [2usize, 3, 4, 5, 8];
    let mut max_err = 0.0f64;
    for pair in 0..20usize {
        let n = dims[pair % dims.len()];
        let alpha = 0.05 + 1.3 * rng.gen::<f64>();
        let beta = alpha + 0.05 + (FRAC_PI_2 - alpha - 0.06) * rng.gen::<f64>();
        let lift = latitude_lift(n, alpha, beta).expect("valid angles");
        let factor = lift.lambda() * lift.lambda() * (1.0 - lift.mu() * lift.mu());
        let sin_alpha = alpha.sin();
        for _ in 0..10_000usize {
            let x = random_unit_vector(n, &mut rng);
            let lhs = 1.0 - lift.apply(&x).norm_squared();
            let rhs = factor * (x[n - 1] - sin_alpha).powi(2);
            max_err = max_err.max((lhs - rhs).abs());
        }
    }
    assert!(max_err < 1e-12, "max identity error {max_err:.3e}");
    let elapsed = start.elapsed();
    println!("criterion 5 PASS: 2e5 evaluations, max identity error {max_err:.3e} ({elapsed:?})");
}

/// Criterion 6 — witness integrity: for every n = 1..8 the synthesized
/// witness reproduces its Gram matrix to 1e-10, carries a rotation
/// orthogonal to 1e-10, chains its points under the map to 1e-8, and
/// starts strictly outside the closed ball.
#[test]
fn criterion_6_witness_integrity() {
    let start = Instant::now();
    for n in 1..=8usize {
        let w = synthesize(n, None).expect("synthesis succeeds");
        let gram = build_gram(n, w.c);
        let orbit = &w.points[1..=n];
        for i in 0..n {
            for j in 0..n {
                let dev = (orbit[i].dot(&orbit[j]) - gram[(i, j)]).abs();
                assert!(dev <= 1e-10, "dimension {n}: Gram entry ({i}, {j}) off by {dev:.3e}");
            }
        }
        let eye = DMatrix::<f64>::identity(n, n);
        let ortho = (w.rotation.transpose() * &w.rotation - eye).norm();
        assert!(ortho < 1e-10, "dimension {n}: rotation orthogonality {ortho:.3e}");
        for i in 0..w.points.len() - 1 {
            let resid = (w.map.apply(&w.points[i]) - &w.points[i + 1]).norm();
            assert!(resid < 1e-8, "dimension {n}: orbit step {i} residual {resid:.3e}");
        }
        assert!(
            w.points[0].norm() > 1.0,
            "dimension {n}: seed point must lie outside the closed ball"
        );
    }
    let elapsed = start.elapsed();
    println!("criterion 6 PASS: witness geometry verified for n = 1..8 ({elapsed:?})");
}

/// Criterion 7 — no pancake: across 500 seeded random CPTP channels, no
/// positive iterate produces a contact set that is a circle in the Bloch
/// ball (a subsphere spanned by two directions).
#[test]
fn criterion_7_no_pancake_on_random_channels() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0007);
    let mut steps = 0usize;
    for i in 0..500usize {
        let k = 2 + i % 3;
        let ch = random_cptp_channel(&mut rng, k).expect("random channel construction");
        let cert = channel_index(&ch).expect("Bloch certification succeeds");
        for step in &cert.chain {
            assert_ne!(
                step.aff_dim(),
                2,
                "channel {i}: iterate {} contact set is a circle",
                step.k
            );
            steps += 1;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 7 PASS: 500 channels, {steps} iterate contact sets, none a circle ({elapsed:?})"
    );
}

// ---------------------------------------------------------------------------
// Seeded generators and small geometry helpers.

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 1e-12 {
            let v: f64 = rng.gen();
            return (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos();
        }
    }
}

fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| gaussian(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Haar-ish rotation from the QR factorization of a Gaussian matrix with the
/// determinant fixed to +1.
fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, n - 1)] = -q[(i, n - 1)];
        }
    }
    q
}

/// Random contraction composed with rotations plus a shift, rescaled so the
/// exact sphere maximum equals `target` (1.0 produces boundary contact).
fn random_positive_map(n: usize, target: f64, rng: &mut ChaCha8Rng) -> AffineBallMap {
    let q1 = random_rotation(n, rng);
    let q2 = random_rotation(n, rng);
    let d = DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| 0.3 + 0.7 * rng.gen::<f64>()));
    let a = &q1 * d * q2.transpose();
    let b = DVector::from_fn(n, |_, _| 0.6 * (rng.gen::<f64>() - 0.5));
    let coarse = 1.0 / (a.norm() + b.norm() + 1e-9);
    let phi = AffineBallMap::new(a * coarse, b * coarse).expect("finite entries");
    let v = sphere_max(&phi, &Tolerances::default()).value;
    let t = target / v;
    AffineBallMap::new(phi.linear() * t, phi.translation() * t).expect("finite entries")
}

fn sample_subsphere(s: &Subsphere, count: usize, rng: &mut ChaCha8Rng) -> Vec<DVector<f64>> {
    (0..count)
        .map(|_| s.sample(rng).expect("nonempty subsphere"))
        .collect()
}

/// Distance from each point to the subsphere (in-plane radial gap plus
/// out-of-plane offset), maximized over the set.
fn max_distance_to(s: &Subsphere, points: &[DVector<f64>]) -> f64 {
    let Subsphere::NonEmpty { center, radius, basis } = s else {
        panic!("fit of nonempty points is nonempty");
    };
    points
        .iter()
        .map(|p| {
            let d = p - center;
            let mut in_plane = DVector::zeros(d.len());
            for b in basis {
                in_plane += b * b.dot(&d);
            }
            let out = (&d - &in_plane).norm();
            let radial = in_plane.norm() - radius;
            (radial * radial + out * out).sqrt()
        })
        .fold(0.0, f64::max)
}

fn trace_preservation_deviation(ch: &KrausChannel) -> f64 {
    let mut sum = QubitMatrix::zeros();
    for k in ch.kraus() {
        sum += k.adjoint() * k;
    }
    (sum - QubitMatrix::identity()).norm()
}
