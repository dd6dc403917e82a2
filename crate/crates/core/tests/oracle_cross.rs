//! Cross-validation of the frequency-domain modules against the
//! time-domain integrator.

use num_complex::Complex64;
use optoamp::linalg::Mat2;
use optoamp::oracle::*;
use optoamp::output::{port_transfer, InputChannel, Port};
use optoamp::params::SystemParams;
use optoamp::response::h_alpha_closed;
use optoamp::spectra::{quadrature_psd, NoiseModel};

/// Deterministic pseudo-random stable parameter sets (xorshift; no RNG
/// crate needed for reproducible test fixtures).
fn rand_stable(seed: u64) -> SystemParams {
    let mut s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).max(1);
    let mut next = move || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64
    };
    SystemParams {
        kappa: 1.0,
        detuning: -1.5 * next(),
        omega_m: 0.1 + 1.2 * next(),
        gamma_m: 0.02 + 0.08 * next(),
        g_c: 0.6 * next(),
        gamma_left: 0.0,
        gamma_right: 2.0,
        gamma_vac: 0.0,
        eps_det: 1.0,
    }
    .validate()
    .unwrap()
}

fn sim_cfg() -> SimConfig {
    SimConfig {
        dt: 2e-3,
        duration: 3200.0,
        n_traj: 1,
        seed: 0,
        burn_in: 0.7,
        decimate: 1,
    }
}

/// Measured transfer columns (conjugated back to the sideband convention)
/// for optical drive at the right port.
fn measured_optical_columns(p: &SystemParams, omega: f64) -> Mat2 {
    let cfg = sim_cfg();
    let mut m = Mat2::zero();
    for quad in 0..2 {
        let resp =
            sine_response(p, omega, InputChannel::Right, quad, Port::Right, &cfg).unwrap();
        m.0[0][quad] = resp[0].conj();
        m.0[1][quad] = resp[1].conj();
    }
    m
}

#[test]
fn sine_response_matches_transfer_matrices() {
    for seed in 0..10 {
        let p = rand_stable(seed);
        let mut omega = 0.15 + 1.7 * ((seed as f64) * 0.618).fract();
        // keep clear of the cavity pole and the mechanical resonance,
        // where the closed-form path legitimately deviates at modest Q
        let pole = (p.kappa * p.kappa + p.detuning * p.detuning).sqrt();
        let (weff, _) = optoamp::params::effective_frequency(&p);
        while (omega - pole).abs() < 0.25 || (omega - weff).abs() < 0.25 {
            omega += 0.31;
        }
        let measured = measured_optical_columns(&p, omega);

        // exact resolvent path
        let exact = port_transfer(&p, omega, Port::Right, InputChannel::Right).unwrap();
        let rel = measured.sub(&exact).frobenius_norm() / exact.frobenius_norm();
        assert!(rel < 1e-6, "seed {seed}: resolvent mismatch {rel}");

        // composed closed-form path: its own O(gamma_m / kappa) deviation
        // from the resolvent dominates at these Q values, so allow the
        // measured response that same budget on top of the sim tolerance
        let composed = h_alpha_closed(&p, omega)
            .unwrap()
            .scale_re(p.gamma_right)
            .sub(&Mat2::identity());
        let gap = composed.sub(&exact).frobenius_norm() / exact.frobenius_norm();
        let rel = measured.sub(&composed).frobenius_norm() / composed.frobenius_norm();
        assert!(rel < gap + 1e-3, "seed {seed}: composed mismatch {rel} (gap {gap})");
    }
}

#[test]
fn sine_response_matches_mechanical_column() {
    let p = rand_stable(3);
    let omega = 0.9 * p.omega_m;
    let cfg = sim_cfg();
    let mut measured = [Complex64::new(0.0, 0.0); 2];
    let resp =
        sine_response(&p, omega, InputChannel::Mechanical, 0, Port::Right, &cfg).unwrap();
    measured[0] = resp[0].conj();
    measured[1] = resp[1].conj();
    let expect = port_transfer(&p, omega, Port::Right, InputChannel::Mechanical).unwrap();
    for i in 0..2 {
        assert!(
            (measured[i] - expect.0[i][0]).norm() < 1e-6 * expect.frobenius_norm(),
            "row {i}: {} vs {}",
            measured[i],
            expect.0[i][0]
        );
    }
}

#[test]
fn welch_error_scales_as_inverse_sqrt_segments() {
    use rand::SeedableRng;
    use rand_distr::Distribution;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let normal = rand_distr::StandardNormal;
    let dt = 0.01f64;
    let sigma = (1.0 / dt).sqrt();
    let n = 1 << 18;
    let series: Vec<f64> = (0..n)
        .map(|_| {
            let g: f64 = normal.sample(&mut rng);
            sigma * g
        })
        .collect();
    let spread = |count: usize| -> f64 {
        let seg_len = n / (count / 2);
        let (_, psd) = psd_estimate(&series, dt, seg_len).unwrap();
        let m = psd.len();
        let var: f64 = psd[1..m - 1].iter().map(|v| (v - 1.0) * (v - 1.0)).sum::<f64>()
            / (m - 2) as f64;
        var.sqrt()
    };
    let coarse = spread(64);
    let fine = spread(256);
    let ratio = coarse / fine;
    assert!(
        ratio > 1.4 && ratio < 2.9,
        "expected ~2x error reduction, got {ratio} ({coarse} vs {fine})"
    );
}

#[test]
fn empty_cavity_reflection_is_shot_noise_flat() {
    let p = SystemParams {
        kappa: 1.0,
        detuning: 0.0,
        omega_m: 0.2,
        gamma_m: 0.05,
        g_c: 0.0,
        gamma_left: 0.0,
        gamma_right: 2.0,
        gamma_vac: 0.0,
        eps_det: 1.0,
    }
    .validate()
    .unwrap();
    let cfg = SimConfig {
        duration: 4000.0,
        n_traj: 8,
        decimate: 8,
        ..SimConfig::default()
    };
    let (freqs, psd) = output_psd(&p, &NoiseModel::vacuum(), Port::Right, 0.4, &cfg, 1024)
        .unwrap();
    assert!(freqs.len() > 100);
    let mean: f64 = psd.iter().sum::<f64>() / psd.len() as f64;
    assert!((mean - 1.0).abs() < 0.03, "mean = {mean}");
    for (f, v) in freqs.iter().zip(&psd) {
        assert!((v - 1.0).abs() < 0.35, "omega = {f}: psd = {v}");
    }
}

#[test]
fn thermal_two_sided_psd_matches_analytic() {
    let p = SystemParams {
        kappa: 1.0,
        detuning: -0.25,
        omega_m: 0.2,
        gamma_m: 0.01,
        g_c: 0.3,
        gamma_left: 1.0,
        gamma_right: 0.8,
        gamma_vac: 0.2,
        eps_det: 1.0,
    }
    .validate()
    .unwrap();
    let noise = NoiseModel::thermal(1.5);
    let cfg = SimConfig {
        duration: 30000.0,
        n_traj: 8,
        decimate: 8,
        ..SimConfig::default()
    };
    let theta = 0.6;
    // segment length long enough to resolve the mechanical line
    let (freqs, psd) = output_psd(&p, &noise, Port::Right, theta, &cfg, 32768).unwrap();
    let half_width = 2.0 * (freqs[1] - freqs[0]);
    // smooth regions only; the narrow mechanical peak is validated
    // separately with feature-resolving segments in the acceptance suite
    for omega in [0.1, 0.35, 0.8] {
        let measured = band_average(&freqs, &psd, omega, half_width);
        // band-average the analytic spectrum over the same bins
        let mut acc = 0.0;
        let mut count = 0;
        for f in freqs.iter().copied().filter(|f| (f - omega).abs() <= half_width) {
            acc += quadrature_psd(&p, f, theta, Port::Right, &noise).unwrap();
            count += 1;
        }
        let analytic = acc / count as f64;
        let rel = (measured - analytic) / analytic;
        assert!(
            rel.abs() < 0.1,
            "omega = {omega}: measured {measured}, analytic {analytic}"
        );
    }
}
