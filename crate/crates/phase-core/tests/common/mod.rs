//! Shared scenario builders for the integration suites: deterministic
//! random cyclic evolutions, the analytic precession family, and the
//! engineered visibility-node case.

// not every suite uses every builder
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use phase_core::linalg::{exp_neg_i_ht, hermitian_eigen, identity, unitarity_residual, CMat};
use phase_core::scenario::{Evolution, Scenario, Segment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_c(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-ish random unitary from the QR of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian_c(rng));
    let q = g.qr().q();
    debug_assert!(unitarity_residual(&q) < 1e-12);
    q
}

/// Random Hermitian matrix with entries at the given scale.
pub fn random_hermitian(dim: usize, scale: f64, rng: &mut ChaCha8Rng) -> CMat {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian_c(rng));
    (&g + g.adjoint()) * Complex64::new(0.5 * scale, 0.0)
}

/// Nondegenerate spectrum: descending weights summing to one, pairwise gaps
/// of at least 0.04, and a largest weight of at most 0.9 so a single-level
/// winding always moves the weighted phase factor visibly.
pub fn random_spectrum(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut w: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.1..1.0)).collect();
        let sum: f64 = w.iter().sum();
        for x in &mut w {
            *x /= sum;
        }
        w.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let gaps_ok = w.windows(2).all(|p| p[0] - p[1] >= 0.04);
        if gaps_ok && w[0] <= 0.9 && w[dim - 1] >= 0.03 {
            return w;
        }
    }
}

/// Hermitian Θ with e^{iΘ} = V and eigenphases in (−π, π].
///
/// V is unitary, hence normal: its Hermitian and anti-Hermitian parts
/// commute, and any generic real combination of them has the same
/// eigenvectors as V. A failed combination (accidental degeneracy) is
/// detected by the residual check and the next one is tried.
pub fn hermitian_log_unitary(v: &CMat) -> CMat {
    let dim = v.nrows();
    let a = (v + v.adjoint()) * Complex64::new(0.5, 0.0);
    let b = (v - v.adjoint()) * Complex64::new(0.0, -0.5);
    for lambda in [0.7310, 1.3179, 0.3461, 1.9113] {
        let m = &a + &b * Complex64::new(lambda, 0.0);
        let (_, vecs) = hermitian_eigen(&m);
        let mut theta = CMat::zeros(dim, dim);
        let mut ok = true;
        for vec in &vecs {
            let image = v * vec;
            let phase = (vec.adjoint() * &image)[(0, 0)].arg();
            let residual = (&image - vec * Complex64::from_polar(1.0, phase)).norm();
            if residual > 1e-9 {
                ok = false;
                break;
            }
            theta += vec * vec.adjoint() * Complex64::new(phase, 0.0);
        }
        if ok {
            return theta;
        }
    }
    panic!("no generic combination split the unitary's spectrum");
}

pub fn mat_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

/// Random cyclic scenario: dimension 2–4, nondegenerate random spectrum,
/// 2–3 random piecewise-constant generators, and a closing segment chosen
/// so the final unitary commutes with the initial state exactly.
pub fn random_cyclic_scenario(seed: u64) -> Scenario {
    let mut rng = rng_for(seed, 0);
    let dim = rng.gen_range(2..=4usize);
    let weights = random_spectrum(dim, &mut rng);
    let q = random_unitary(dim, &mut rng);
    let mut rho = CMat::zeros(dim, dim);
    for (k, w) in weights.iter().enumerate() {
        let col = q.column(k).clone_owned();
        rho += &col * col.adjoint() * Complex64::new(*w, 0.0);
    }
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);

    let mut segments = Vec::new();
    let mut u_accum = identity(dim);
    for _ in 0..rng.gen_range(2..=3usize) {
        let h = random_hermitian(dim, 0.5, &mut rng);
        let dt = rng.gen_range(0.6..1.2);
        u_accum = exp_neg_i_ht(&h, dt) * &u_accum;
        segments.push((h, dt));
    }
    // final unitary with random phases in the ρ0 eigenbasis: commutes with
    // ρ0 by construction, so the closing generator makes the path cyclic
    let mut u_final = CMat::zeros(dim, dim);
    for k in 0..dim {
        let col = q.column(k).clone_owned();
        let mu = rng.gen_range(-PI..PI);
        u_final += &col * col.adjoint() * Complex64::from_polar(1.0, mu);
    }
    let closing_dt = 1.0;
    let theta = hermitian_log_unitary(&(u_final * u_accum.adjoint()));
    segments.push((theta * Complex64::new(-1.0 / closing_dt, 0.0), closing_dt));

    Scenario {
        name: format!("random cyclic {seed}"),
        rho0: mat_rows(&rho),
        evolution: Evolution::Hamiltonian {
            segments: segments
                .into_iter()
                .map(|(h, dt)| Segment {
                    h: mat_rows(&h),
                    dt,
                })
                .collect(),
        },
        steps: None,
        gauge: None,
        interferogram: None,
    }
}

/// Tilted qubit under a full z-precession: ρ0 has a level at polar angle θ
/// with weight w, the orthogonal level with weight 1 − w.
pub fn precession_scenario(theta: f64, w: f64) -> Scenario {
    let (c2, s2) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let p = [[c2 * c2, c2 * s2], [s2 * c2, s2 * s2]];
    let rho = |i: usize, j: usize| {
        let id = if i == j { 1.0 } else { 0.0 };
        w * p[i][j] + (1.0 - w) * (id - p[i][j])
    };
    let half_z = vec![vec![[0.5, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [-0.5, 0.0]]];
    Scenario {
        name: format!("precession theta={theta:.4} w={w}"),
        rho0: vec![
            vec![[rho(0, 0), 0.0], [rho(0, 1), 0.0]],
            vec![[rho(1, 0), 0.0], [rho(1, 1), 0.0]],
        ],
        evolution: Evolution::Hamiltonian {
            segments: vec![Segment {
                h: half_z,
                dt: 2.0 * PI,
            }],
        },
        steps: None,
        gauge: None,
        interferogram: None,
    }
}

/// Two decoupled tilted-qubit blocks tuned so the weighted phase factors
/// cancel exactly: weights (0.4, 0.3) at θ = π/3 give 0.4e^{−iπ/2} +
/// 0.3e^{iπ/2} = −0.1i, weights (0.2, 0.1) at θ = 2π/3 give +0.1i.
pub fn visibility_node_scenario() -> Scenario {
    let block = |theta: f64, wa: f64, wb: f64| -> [[f64; 2]; 2] {
        let (c2, s2) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let p = [[c2 * c2, c2 * s2], [s2 * c2, s2 * s2]];
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                out[i][j] = wa * p[i][j] + wb * (id - p[i][j]);
            }
        }
        out
    };
    let b1 = block(PI / 3.0, 0.4, 0.3);
    let b2 = block(2.0 * PI / 3.0, 0.2, 0.1);
    let mut rho0 = vec![vec![[0.0, 0.0]; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            rho0[i][j] = [b1[i][j], 0.0];
            rho0[i + 2][j + 2] = [b2[i][j], 0.0];
        }
    }
    let mut h = vec![vec![[0.0, 0.0]; 4]; 4];
    h[0][0] = [0.5, 0.0];
    h[1][1] = [-0.5, 0.0];
    h[2][2] = [0.5, 0.0];
    h[3][3] = [-0.5, 0.0];
    Scenario {
        name: "visibility node".to_string(),
        rho0,
        evolution: Evolution::Hamiltonian {
            segments: vec![Segment { h, dt: 2.0 * PI }],
        },
        steps: None,
        gauge: None,
        interferogram: None,
    }
}
