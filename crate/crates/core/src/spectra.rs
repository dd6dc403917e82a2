//! Symmetrized power spectral densities of output quadratures for vacuum,
//! thermal, and force inputs, plus the OMIT probe trace.
//!
//! Normalization: vacuum inputs carry unit symmetrized white PSD per
//! quadrature, so relative spectra are quoted with 1 = shot noise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::output::{apply_efficiency, port_transfer, Efficiencies, InputChannel, Port};
use crate::params::{effective_frequency, SystemParams};
use crate::response::{h_alpha_elements_exact, single_sideband};
use crate::sensing::ForceDrive;

/// Input statistics per port.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Mean phonon occupancy of the mechanical bath.
    pub n_th: f64,
    /// Per-quadrature symmetrized white level of the vacuum inputs.
    pub vacuum_level: f64,
    /// Fourier-transform bandwidth normalization.
    pub f_bw: f64,
}

impl NoiseModel {
    pub fn vacuum() -> Self {
        NoiseModel {
            n_th: 0.0,
            vacuum_level: 1.0,
            f_bw: 1.0,
        }
    }

    pub fn thermal(n_th: f64) -> Self {
        NoiseModel {
            n_th,
            ..Self::vacuum()
        }
    }

    /// Occupancy from the Bose factor at hbar*omega_m / (kB T).
    pub fn from_temperature_ratio(hbar_omega_over_kbt: f64) -> Self {
        Self::thermal(1.0 / (hbar_omega_over_kbt.exp() - 1.0))
    }

    /// Symmetrized mechanical input level (2 n_th + 1) per quadrature.
    pub fn mech_level(&self) -> f64 {
        (2.0 * self.n_th + 1.0) * self.vacuum_level
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumUnits {
    /// Dimensionless, relative to shot noise.
    RelativeShotNoise,
    /// Square optical quanta (per square force quanta for drives).
    Quanta,
}

/// PSD values over a frequency grid x quadrature-angle grid, omega-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub omegas: Vec<f64>,
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
    pub units: SpectrumUnits,
    pub symmetrized: bool,
}

impl SpectrumTable {
    pub fn value(&self, i_omega: usize, i_theta: usize) -> f64 {
        self.values[i_omega * self.thetas.len() + i_theta]
    }

    /// Grid argmin: (i_omega, i_theta, value).
    pub fn argmin(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::INFINITY);
        for iw in 0..self.omegas.len() {
            for it in 0..self.thetas.len() {
                let v = self.value(iw, it);
                if v < best.2 {
                    best = (iw, it, v);
                }
            }
        }
        best
    }

    pub fn argmax(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for iw in 0..self.omegas.len() {
            for it in 0..self.thetas.len() {
                let v = self.value(iw, it);
                if v > best.2 {
                    best = (iw, it, v);
                }
            }
        }
        best
    }

    /// Observed table after extraction/detection losses (relative spectra
    /// only).
    pub fn observed(&self, eps: &Efficiencies) -> SpectrumTable {
        SpectrumTable {
            values: self
                .values
                .iter()
                .map(|&v| apply_efficiency(v, eps))
                .collect(),
            ..self.clone()
        }
    }
}

/// Default quadrature grid: 181 angles over [0, pi).
pub fn theta_grid_default() -> Vec<f64> {
    let n = 181;
    (0..n).map(|i| std::f64::consts::PI * i as f64 / n as f64).collect()
}

/// Uniform frequency grid.
pub fn omega_grid_uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Default frequency grid: a linear base plus log-dense clusters around
/// omega_m and omega_eff, about 2000 points total.
pub fn omega_grid_default(p: &SystemParams) -> Vec<f64> {
    let (omega_eff, _) = effective_frequency(p);
    let hi = (2.5 * p.kappa).max(p.omega_m + 2.0 * p.kappa);
    let lo = 1e-3 * p.kappa;
    let mut grid = omega_grid_uniform(lo, hi, 1000);
    for center in [p.omega_m, omega_eff] {
        let w_min = (1e-4 * center).max(1e-6);
        let w_max = 0.5 * center;
        let ratio = (w_max / w_min).ln();
        for i in 0..250 {
            let off = w_min * (ratio * i as f64 / 249.0).exp();
            grid.push(center - off);
            grid.push(center + off);
        }
        grid.push(center);
    }
    grid.retain(|&w| w >= lo && w <= hi);
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    grid
}

/// Symmetrize a PSD over +-omega: (S(w) + S(-w)) / 2.
pub fn symmetrize(s_plus: f64, s_minus: f64) -> f64 {
    0.5 * (s_plus + s_minus)
}

fn psd_one_sign(
    p: &SystemParams,
    omega: f64,
    theta: f64,
    port: Port,
    noise: &NoiseModel,
) -> Result<f64> {
    let v = [theta.cos(), theta.sin()];
    let mut total = 0.0;
    for input in InputChannel::ALL {
        if input.rate(p) == 0.0 {
            continue;
        }
        let h = port_transfer(p, omega, port, input)?;
        let row = h.left_mul_row(v);
        let power = row[0].norm_sqr() + row[1].norm_sqr();
        let level = match input {
            InputChannel::Mechanical => noise.mech_level(),
            _ => noise.vacuum_level,
        };
        total += power * level;
    }
    Ok(total)
}

/// Symmetrized quadrature PSD of port `port` at angle `theta`, with all
/// incoherent inputs summed at their `NoiseModel` levels. Relative to shot
/// noise (no detection losses applied).
pub fn quadrature_psd(
    p: &SystemParams,
    omega: f64,
    theta: f64,
    port: Port,
    noise: &NoiseModel,
) -> Result<f64> {
    Ok(symmetrize(
        psd_one_sign(p, omega, theta, port, noise)?,
        psd_one_sign(p, -omega, theta, port, noise)?,
    ))
}

/// Ideal (loss-free) vacuum-driven spectrum over a grid.
pub fn vacuum_spectrum(
    p: &SystemParams,
    omegas: &[f64],
    thetas: &[f64],
    port: Port,
) -> Result<SpectrumTable> {
    let noise = NoiseModel::vacuum();
    let values: Result<Vec<Vec<f64>>> = omegas
        .par_iter()
        .map(|&w| {
            thetas
                .iter()
                .map(|&t| quadrature_psd(p, w, t, port, &noise))
                .collect()
        })
        .collect();
    Ok(SpectrumTable {
        omegas: omegas.to_vec(),
        thetas: thetas.to_vec(),
        values: values?.into_iter().flatten().collect(),
        units: SpectrumUnits::RelativeShotNoise,
        symmetrized: true,
    })
}

/// Output noise due to mechanical fluctuations in the + and - quadratures:
/// S^mech = (2 e_tot / (C f_bw)) (wm^2 + w^2)/wm^2 (2 n_th + 1) |H+-a|^2.
pub fn thermal_spectrum(
    p: &SystemParams,
    omegas: &[f64],
    noise: &NoiseModel,
    port: Port,
) -> Result<SpectrumTable> {
    let thetas = vec![0.0, std::f64::consts::FRAC_PI_2];
    let eff = Efficiencies::from_params(p, port)?;
    let c_opt = p.cooperativity();
    let values: Result<Vec<Vec<f64>>> = omegas
        .par_iter()
        .map(|&w| {
            if c_opt == 0.0 {
                return Ok(vec![0.0, 0.0]);
            }
            let pre = 2.0 * eff.eps_tot() / (c_opt * noise.f_bw)
                * (p.omega_m * p.omega_m + w * w)
                / (p.omega_m * p.omega_m)
                * (2.0 * noise.n_th + 1.0);
            let (hp_p, hm_p) = h_alpha_elements_exact(p, w)?;
            let (hp_m, hm_m) = h_alpha_elements_exact(p, -w)?;
            Ok(vec![
                pre * symmetrize(hp_p.norm_sqr(), hp_m.norm_sqr()),
                pre * symmetrize(hm_p.norm_sqr(), hm_m.norm_sqr()),
            ])
        })
        .collect();
    Ok(SpectrumTable {
        omegas: omegas.to_vec(),
        thetas,
        values: values?.into_iter().flatten().collect(),
        units: SpectrumUnits::Quanta,
        symmetrized: true,
    })
}

/// External-force optical power spectrum S^ext at angle `theta`, in square
/// optical quanta per square force quanta, computed from the exact elements
/// (finite at zero detuning).
pub fn force_spectrum(
    p: &SystemParams,
    omegas: &[f64],
    theta: f64,
    drive: &ForceDrive,
    port: Port,
) -> Result<Vec<f64>> {
    let eff = Efficiencies::from_params(p, port)?;
    omegas
        .par_iter()
        .map(|&w| force_psd_exact(p, w, theta, drive, &eff))
        .collect()
}

/// Single-frequency exact-path force PSD (used by the sensing module).
pub fn force_psd_exact(
    p: &SystemParams,
    omega: f64,
    theta: f64,
    drive: &ForceDrive,
    eff: &Efficiencies,
) -> Result<f64> {
    let c_opt = p.cooperativity();
    if c_opt == 0.0 || drive.f_ext == 0.0 {
        return Ok(0.0);
    }
    let eval = |w: f64| -> Result<f64> {
        let (hp, hm) = h_alpha_elements_exact(p, w)?;
        let amp = hp * theta.cos() + hm * theta.sin();
        Ok(amp.norm_sqr())
    };
    let mag2 = symmetrize(eval(omega)?, eval(-omega)?);
    Ok(2.0 * eff.eps_tot() / c_opt * mag2 * drive.f_ext * drive.f_ext
        / (p.gamma_m * drive.f_bw * drive.f_bw * drive.p_ho * drive.p_ho))
}

/// Closed-form force PSD; diverges at zero detuning for sin(theta)
/// != 0 and reports that case instead of evaluating it.
pub fn force_psd_closed(
    p: &SystemParams,
    omega: f64,
    theta: f64,
    drive: &ForceDrive,
    eff: &Efficiencies,
) -> Result<f64> {
    use crate::error::Error;
    use crate::response::gain;
    let c_opt = p.cooperativity();
    if c_opt == 0.0 || drive.f_ext == 0.0 {
        return Ok(0.0);
    }
    if p.detuning == 0.0 && theta.sin() != 0.0 {
        return Err(Error::ZeroDetuningQuadrature);
    }
    let eval = |w: f64| {
        let kiw = num_complex::Complex64::new(p.kappa, -w);
        let quad = num_complex::Complex64::new(theta.cos(), 0.0)
            + kiw / p.detuning * theta.sin();
        (quad * gain(p, w)).norm_sqr()
    };
    let mag2 = symmetrize(eval(omega), eval(-omega));
    Ok(2.0 * eff.eps_tot() / c_opt * mag2 * drive.f_ext * drive.f_ext
        / (p.gamma_m * drive.f_bw * drive.f_bw * drive.p_ho * drive.p_ho))
}

/// One point of the single-sideband probe trace.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OmitPoint {
    pub omega: f64,
    /// gamma_T (|H^SS_11|^2 + |H^SS_21|^2): probe-tone intensity gain.
    pub raw: f64,
    /// Same quantity for the empty cavity (g_c = 0).
    pub empty: f64,
    pub ratio: f64,
}

/// Probe-tone intensity transfer |H^SS_11|^2 + |H^SS_21|^2 per frequency,
/// scaled by gamma_T so 1 is unity gain, with the empty-cavity reference.
pub fn omit_trace(p: &SystemParams, omegas: &[f64]) -> Result<Vec<OmitPoint>> {
    let empty = p.without_coupling();
    let gamma_t = p.gamma_total();
    omegas
        .par_iter()
        .map(|&w| {
            let tone = |params: &SystemParams| -> Result<f64> {
                let ss = single_sideband(params, w)?;
                Ok(gamma_t * (ss.0[0][0].norm_sqr() + ss.0[1][0].norm_sqr()))
            };
            let raw = tone(p)?;
            let e = tone(&empty)?;
            Ok(OmitPoint {
                omega: w,
                raw,
                empty: e,
                ratio: raw / e,
            })
        })
        .collect()
}
