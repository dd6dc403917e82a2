//! Independent time-domain verification: stochastic integration of the
//! quadrature Langevin system, deterministic sinusoidal transfer
//! measurement, Welch spectral estimation, and the stationary-covariance
//! Lyapunov solve. Everything here deliberately avoids the frequency-domain
//! modules so it can serve as a cross-check.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::{num_complex::Complex64, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_real;
use crate::output::{InputChannel, Port};
use crate::params::{effective_frequency, optical_damping, SystemParams};
use crate::response::drift_matrix;
use crate::spectra::NoiseModel;

const OVERFLOW_GUARD: f64 = 1e9;

/// Time-domain simulation configuration.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SimConfig {
    /// Integration step (default 2e-3 in units of 1/kappa).
    pub dt: f64,
    /// Total simulated time per trajectory, burn-in included.
    pub duration: f64,
    pub n_traj: usize,
    pub seed: u64,
    /// Fraction of the duration discarded before recording.
    pub burn_in: f64,
    /// Boxcar decimation factor applied to recorded samples.
    pub decimate: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 2e-3,
            duration: 2000.0,
            n_traj: 8,
            seed: 1,
            burn_in: 0.1,
            decimate: 1,
        }
    }
}

impl SimConfig {
    /// Step-resolution and burn-in guards for a given system.
    pub fn validate_for(&self, p: &SystemParams) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Config("dt must be positive".into()));
        }
        let fastest = p.kappa.max(p.omega_m).max(p.detuning.abs());
        if self.dt * fastest >= 0.05 {
            return Err(Error::Config(format!(
                "dt = {} too coarse: dt * max(kappa, omega_m, |detuning|) = {} >= 0.05",
                self.dt,
                self.dt * fastest
            )));
        }
        if !(self.duration > 0.0) || self.n_traj == 0 || self.decimate == 0 {
            return Err(Error::Config(
                "duration, n_traj and decimate must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.burn_in) {
            return Err(Error::Config("burn_in fraction must lie in [0, 1)".into()));
        }
        let (w_eff, _) = effective_frequency(p);
        let gamma_eff = p.gamma_m + optical_damping(p, w_eff).unwrap_or(0.0);
        let slowest = gamma_eff.min(p.kappa).max(1e-300);
        if self.burn_in * self.duration < 5.0 / slowest {
            return Err(Error::Config(format!(
                "burn-in {} shorter than 5 relaxation times {}",
                self.burn_in * self.duration,
                5.0 / slowest
            )));
        }
        Ok(())
    }

    fn burn_steps(&self) -> usize {
        (self.burn_in * self.duration / self.dt).round() as usize
    }

    fn total_steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }
}

/// Per-channel noise amplitudes: sqrt of the diffusion rate feeding each
/// state row pair. Unit-PSD white noise per quadrature at amplitude 1.
fn noise_amplitudes(p: &SystemParams, noise: &NoiseModel) -> [(usize, f64); 4] {
    [
        (0, (p.gamma_left * noise.vacuum_level).sqrt()),
        (0, (p.gamma_right * noise.vacuum_level).sqrt()),
        (0, (p.gamma_vac * noise.vacuum_level).sqrt()),
        (2, (p.gamma_m * noise.mech_level()).sqrt()),
    ]
}

/// One recorded trajectory: decimated samples at spacing `dt`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Sample spacing after decimation.
    pub dt: f64,
    /// One time series per recorded channel.
    pub channels: Vec<Vec<f64>>,
}

/// Euler-Maruyama integration of the quadrature state (a+, a-, z, p) driven
/// by white noise on every open port. Records the four state components.
pub fn integrate(p: &SystemParams, noise: &NoiseModel, cfg: &SimConfig) -> Result<Trajectory> {
    run_trajectory(p, noise, cfg, 0, Record::State)
}

/// As `integrate`, but records the two output quadratures at `port`,
/// y = sqrt(gamma) (a+, a-) - input, which is what a detector sees.
pub fn integrate_output(
    p: &SystemParams,
    noise: &NoiseModel,
    port: Port,
    cfg: &SimConfig,
    traj_index: u64,
) -> Result<Trajectory> {
    run_trajectory(p, noise, cfg, traj_index, Record::Output(port))
}

#[derive(Clone, Copy)]
enum Record {
    State,
    Output(Port),
}

fn run_trajectory(
    p: &SystemParams,
    noise: &NoiseModel,
    cfg: &SimConfig,
    traj_index: u64,
    record: Record,
) -> Result<Trajectory> {
    cfg.validate_for(p)?;
    let m = drift_matrix(p);
    let amps = noise_amplitudes(p, noise);
    let (out_port_index, out_rate) = match record {
        Record::State => (usize::MAX, 0.0),
        Record::Output(port) => {
            // amps[] order matches Port discriminants: left, right, vac
            let idx = match port {
                Port::Left => 0,
                Port::Right => 1,
                Port::Vacuum => 2,
            };
            (idx, port.rate(p).sqrt())
        }
    };
    let n_channels = match record {
        Record::State => 4,
        Record::Output(_) => 2,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(traj_index);
    let normal = StandardNormal;

    let dt = cfg.dt;
    let sqrt_dt = dt.sqrt();
    let burn = cfg.burn_steps();
    let total = cfg.total_steps();
    let n_rec = (total - burn) / cfg.decimate;
    let mut channels = vec![Vec::with_capacity(n_rec); n_channels];
    let mut boxcar = [0.0f64; 4];
    let mut in_box = 0usize;

    let mut x = [0.0f64; 4];
    for step in 0..total {
        // draw this step's noise increments first: the output record needs
        // the same increments that drive the state update
        let mut dw = [[0.0f64; 2]; 4];
        for (ch, &(_, amp)) in amps.iter().enumerate() {
            if amp > 0.0 {
                let (g0, g1): (f64, f64) = (normal.sample(&mut rng), normal.sample(&mut rng));
                dw[ch][0] = sqrt_dt * g0;
                dw[ch][1] = sqrt_dt * g1;
            }
        }

        if step >= burn {
            let sample: [f64; 4] = match record {
                Record::State => x,
                Record::Output(_) => {
                    let amp = amps[out_port_index].1;
                    let inp = if amp > 0.0 {
                        [dw[out_port_index][0] / dt, dw[out_port_index][1] / dt]
                    } else {
                        [0.0, 0.0]
                    };
                    [out_rate * x[0] - inp[0], out_rate * x[1] - inp[1], 0.0, 0.0]
                }
            };
            for c in 0..n_channels {
                boxcar[c] += sample[c];
            }
            in_box += 1;
            if in_box == cfg.decimate {
                for c in 0..n_channels {
                    channels[c].push(boxcar[c] / cfg.decimate as f64);
                    boxcar[c] = 0.0;
                }
                in_box = 0;
            }
        }

        let mut dx = [0.0f64; 4];
        for i in 0..4 {
            let mut acc = 0.0;
            for j in 0..4 {
                acc += m[i][j] * x[j];
            }
            dx[i] = acc * dt;
        }
        for (ch, &(row, amp)) in amps.iter().enumerate() {
            if amp > 0.0 {
                dx[row] += amp * dw[ch][0];
                dx[row + 1] += amp * dw[ch][1];
            }
        }
        for i in 0..4 {
            x[i] += dx[i];
            if !x[i].is_finite() || x[i].abs() > OVERFLOW_GUARD {
                return Err(Error::UnstableBlowup { step });
            }
        }
    }

    Ok(Trajectory {
        dt: dt * cfg.decimate as f64,
        channels,
    })
}

/// Time-averaged stationary covariance of the state, averaged over
/// `cfg.n_traj` independent trajectories in parallel.
pub fn stationary_covariance(
    p: &SystemParams,
    noise: &NoiseModel,
    cfg: &SimConfig,
) -> Result<[[f64; 4]; 4]> {
    cfg.validate_for(p)?;
    let partials: Result<Vec<([[f64; 4]; 4], usize)>> = (0..cfg.n_traj as u64)
        .into_par_iter()
        .map(|k| {
            let traj = run_trajectory(p, noise, cfg, k, Record::State)?;
            let n = traj.channels[0].len();
            let mut cov = [[0.0f64; 4]; 4];
            for t in 0..n {
                for i in 0..4 {
                    for j in i..4 {
                        cov[i][j] += traj.channels[i][t] * traj.channels[j][t];
                    }
                }
            }
            Ok((cov, n))
        })
        .collect();
    let partials = partials?;
    let mut cov = [[0.0f64; 4]; 4];
    let mut count = 0usize;
    for (c, n) in partials {
        for i in 0..4 {
            for j in i..4 {
                cov[i][j] += c[i][j];
            }
        }
        count += n;
    }
    for i in 0..4 {
        for j in i..4 {
            cov[i][j] /= count as f64;
            cov[j][i] = cov[i][j];
        }
    }
    Ok(cov)
}

/// Stationary covariance from the Lyapunov equation M C + C M^T + L L^T = 0,
/// solved as a dense 16x16 linear system.
pub fn lyapunov_stationary(p: &SystemParams, noise: &NoiseModel) -> Result<[[f64; 4]; 4]> {
    let m = drift_matrix(p);
    let mut diff = [0.0f64; 4];
    for &(row, amp) in &noise_amplitudes(p, noise) {
        diff[row] += amp * amp;
        diff[row + 1] += amp * amp;
    }
    // vec(C) row-major: A[(i,j),(k,l)] = M[i][k] d_jl + M[j][l] d_ik
    let mut a = vec![0.0f64; 16 * 16];
    let mut b = vec![0.0f64; 16];
    for i in 0..4 {
        for j in 0..4 {
            let r = 4 * i + j;
            for k in 0..4 {
                a[r * 16 + (4 * k + j)] += m[i][k];
                a[r * 16 + (4 * i + k)] += m[j][k];
            }
            if i == j {
                b[r] = -diff[i];
            }
        }
    }
    solve_real(16, &mut a, &mut b).ok_or(Error::SingularMatrix(0.0))?;
    let mut c = [[0.0f64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = b[4 * i + j];
        }
    }
    Ok(c)
}

/// Steady-state complex amplitudes of both output quadratures at
/// `out_port` when input quadrature `in_quad` (0 = amplitude, 1 = phase)
/// of `input` is driven by a unit cosine at `omega_drive`.
///
/// The drive is cos(omega t) and each output is demodulated against
/// exp(-i omega t), so a response H in the sideband convention used by the
/// transfer-matrix modules appears here as its complex conjugate.
pub fn sine_response(
    p: &SystemParams,
    omega_drive: f64,
    input: InputChannel,
    in_quad: usize,
    out_port: Port,
    cfg: &SimConfig,
) -> Result<[Complex64; 2]> {
    cfg.validate_for(p)?;
    assert!(in_quad < 2);
    let m = drift_matrix(p);
    let in_rate = input.rate(p).sqrt();
    let in_row = match input {
        InputChannel::Mechanical => 2 + in_quad,
        _ => in_quad,
    };
    let out_rate = out_port.rate(p).sqrt();
    let drive_is_out_port = matches!(
        (input, out_port),
        (InputChannel::Left, Port::Left)
            | (InputChannel::Right, Port::Right)
            | (InputChannel::Vacuum, Port::Vacuum)
    );

    let dt = cfg.dt;
    let deriv = |t: f64, x: &[f64; 4]| -> [f64; 4] {
        let u = (omega_drive * t).cos();
        let mut dx = [0.0f64; 4];
        for i in 0..4 {
            let mut acc = 0.0;
            for j in 0..4 {
                acc += m[i][j] * x[j];
            }
            dx[i] = acc;
        }
        dx[in_row] += in_rate * u;
        dx
    };
    let rk4_step = |t: f64, x: &mut [f64; 4]| {
        let k1 = deriv(t, x);
        let mut x2 = *x;
        for i in 0..4 {
            x2[i] = x[i] + 0.5 * dt * k1[i];
        }
        let k2 = deriv(t + 0.5 * dt, &x2);
        for i in 0..4 {
            x2[i] = x[i] + 0.5 * dt * k2[i];
        }
        let k3 = deriv(t + 0.5 * dt, &x2);
        for i in 0..4 {
            x2[i] = x[i] + dt * k3[i];
        }
        let k4 = deriv(t + dt, &x2);
        for i in 0..4 {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    };

    let burn = cfg.burn_steps();
    // demodulation window: an integer number of drive periods, at least as
    // long as the post-burn-in budget allows split into two halves
    let period_steps = if omega_drive.abs() > 1e-12 {
        (2.0 * PI / omega_drive.abs() / dt).round().max(1.0) as usize
    } else {
        cfg.total_steps().saturating_sub(burn) / 2
    };
    let avail = cfg.total_steps().saturating_sub(burn);
    let periods_per_window = (avail / (2 * period_steps)).max(1);
    let window = periods_per_window * period_steps;

    let mut x = [0.0f64; 4];
    let mut t = 0.0;
    for _ in 0..burn {
        rk4_step(t, &mut x);
        t += dt;
    }
    // Demodulate against exp(-i w t). A pure steady state
    // y_n = Re[X exp(i w t_n)] satisfies mean(2 y_n e^{-i w t_n}) =
    // X + conj(X) c with c = mean(e^{-2 i w t_n}), so solving the 2x2
    // system removes the image-band leakage exactly for any window length.
    let demod = |x: &mut [f64; 4], t: &mut f64| -> [Complex64; 2] {
        let mut acc = [Complex64::new(0.0, 0.0); 2];
        let mut image = Complex64::new(0.0, 0.0);
        for _ in 0..window {
            let u = (omega_drive * *t).cos();
            let y0 = out_rate * x[0]
                - if drive_is_out_port && in_quad == 0 { u } else { 0.0 };
            let y1 = out_rate * x[1]
                - if drive_is_out_port && in_quad == 1 { u } else { 0.0 };
            let carrier = Complex64::new(0.0, -omega_drive * *t).exp();
            acc[0] += y0 * carrier;
            acc[1] += y1 * carrier;
            image += carrier * carrier;
            rk4_step(*t, x);
            *t += dt;
        }
        let c = image / window as f64;
        let denom = (1.0 - c.norm_sqr()).max(1e-12);
        std::array::from_fn(|k| {
            let d = acc[k] * 2.0 / window as f64;
            (d - c * d.conj()) / denom
        })
    };
    let first = demod(&mut x, &mut t);
    let second = demod(&mut x, &mut t);
    let scale = (second[0].norm() + second[1].norm()).max(1e-300);
    let residual =
        ((first[0] - second[0]).norm() + (first[1] - second[1]).norm()) / scale;
    if residual > 1e-6 {
        return Err(Error::NotSettled { residual });
    }
    Ok(second)
}

/// Welch PSD estimate with a Hann window and 50% overlap. Returns
/// (angular frequencies, two-sided PSD folded to omega >= 0), normalized so
/// unit-PSD white noise reads 1.
pub fn psd_estimate(series: &[f64], dt: f64, seg_len: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    assert!(seg_len >= 2 && seg_len % 2 == 0);
    let hop = seg_len / 2;
    let n_seg = if series.len() >= seg_len {
        (series.len() - seg_len) / hop + 1
    } else {
        0
    };
    if n_seg < 8 {
        return Err(Error::TooShort { segments: n_seg });
    }
    let window: Vec<f64> = (0..seg_len)
        .map(|n| 0.5 * (1.0 - (2.0 * PI * n as f64 / seg_len as f64).cos()))
        .collect();
    let w_sq: f64 = window.iter().map(|w| w * w).sum();
    let scale = dt / (w_sq * n_seg as f64);

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(seg_len);
    let mut power = vec![0.0f64; seg_len];
    let mut buf = vec![Complex64::new(0.0, 0.0); seg_len];
    for s in 0..n_seg {
        let off = s * hop;
        for n in 0..seg_len {
            buf[n] = Complex64::new(series[off + n] * window[n], 0.0);
        }
        fft.process(&mut buf);
        for (pw, b) in power.iter_mut().zip(&buf) {
            *pw += b.norm_sqr();
        }
    }
    // fold the two-sided estimate onto omega >= 0 by averaging +-omega bins
    let half = seg_len / 2;
    let d_omega = 2.0 * PI / (seg_len as f64 * dt);
    let mut freqs = Vec::with_capacity(half + 1);
    let mut psd = Vec::with_capacity(half + 1);
    for k in 0..=half {
        freqs.push(k as f64 * d_omega);
        let v = if k == 0 || k == half {
            power[k] * scale
        } else {
            0.5 * (power[k] + power[seg_len - k]) * scale
        };
        psd.push(v);
    }
    Ok((freqs, psd))
}

/// Averaged output-quadrature PSD at angle `theta` over `cfg.n_traj`
/// trajectories run in parallel with independent RNG streams.
pub fn output_psd(
    p: &SystemParams,
    noise: &NoiseModel,
    port: Port,
    theta: f64,
    cfg: &SimConfig,
    seg_len: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let results: Result<Vec<(Vec<f64>, Vec<f64>)>> = (0..cfg.n_traj as u64)
        .into_par_iter()
        .map(|k| {
            let traj = integrate_output(p, noise, port, cfg, k)?;
            let (c, s) = (theta.cos(), theta.sin());
            let series: Vec<f64> = traj.channels[0]
                .iter()
                .zip(&traj.channels[1])
                .map(|(a, b)| c * a + s * b)
                .collect();
            psd_estimate(&series, traj.dt, seg_len)
        })
        .collect();
    let results = results?;
    let freqs = results[0].0.clone();
    let mut psd = vec![0.0f64; freqs.len()];
    for (_, p_k) in &results {
        for (acc, v) in psd.iter_mut().zip(p_k) {
            *acc += v;
        }
    }
    for v in &mut psd {
        *v /= results.len() as f64;
    }
    Ok((freqs, psd))
}

/// Mean PSD over the bins within `half_width` of `omega`.
pub fn band_average(freqs: &[f64], psd: &[f64], omega: f64, half_width: f64) -> f64 {
    let mut acc = 0.0;
    let mut n = 0usize;
    for (f, v) in freqs.iter().zip(psd) {
        if (f - omega).abs() <= half_width {
            acc += v;
            n += 1;
        }
    }
    if n == 0 {
        // fall back to the nearest bin
        let i = freqs
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1 - omega).abs().partial_cmp(&(b.1 - omega).abs()).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        return psd[i];
    }
    acc / n as f64
}
