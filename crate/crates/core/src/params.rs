//! System parameters and derived scalar quantities.
//!
//! All rates are quoted in units of the cavity half-linewidth `kappa`
//! (so `kappa = 1` in every preset), but nothing below assumes it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance (relative to kappa^2) below which the real-valued forms of the
/// spring shift and optical damping are considered invalid.
pub const NEAR_POLE_TOL: f64 = 1e-9;

/// Relative tolerance on the port-rate sum constraint 2k = yL + yR + yV.
const SUM_TOL: f64 = 1e-12;

/// Physical rates of the linearized optomechanical system.
///
/// `detuning` is the pump detuning from the (statically shifted) cavity
/// resonance and must be <= 0; the three port rates must sum to `2 * kappa`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Cavity half-linewidth.
    pub kappa: f64,
    /// Pump detuning from cavity resonance (<= 0).
    pub detuning: f64,
    /// Mechanical resonance frequency.
    pub omega_m: f64,
    /// Mechanical damping rate.
    pub gamma_m: f64,
    /// Effective optomechanical coupling rate.
    pub g_c: f64,
    /// Left-port damping rate.
    pub gamma_left: f64,
    /// Right-port damping rate.
    pub gamma_right: f64,
    /// Loss-channel damping rate.
    pub gamma_vac: f64,
    /// Detection efficiency in [0, 1].
    pub eps_det: f64,
}

/// Scalar quantities derived from a validated parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// Cooperativity g_c^2 / (kappa * gamma_m).
    pub c_opt: f64,
    /// Damping parameter Gamma_opt(omega_eff) / gamma_m.
    pub d_opt: f64,
    /// Effective (shifted) mechanical frequency.
    pub omega_eff: f64,
    /// Mechanical quality factor omega_m / gamma_m.
    pub q: f64,
    /// Extraction efficiency of the detection port, gamma_right / (2 kappa).
    pub eps_out: f64,
    /// Total efficiency eps_out * eps_det.
    pub eps_tot: f64,
}

/// Port-rate split in units where 2*kappa is the total.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortSplit {
    pub left: f64,
    pub right: f64,
    pub vac: f64,
}

impl PortSplit {
    /// One-sided lossless cavity detected in reflection off the right port.
    pub fn one_sided() -> Self {
        PortSplit {
            left: 0.0,
            right: 2.0,
            vac: 0.0,
        }
    }

    /// Symmetric two-sided lossless cavity.
    pub fn two_sided() -> Self {
        PortSplit {
            left: 1.0,
            right: 1.0,
            vac: 0.0,
        }
    }
}

impl SystemParams {
    /// Check the sign, sum, and stability constraints, returning the record
    /// unchanged on success.
    pub fn validate(self) -> Result<Self> {
        for (name, value) in [
            ("kappa", self.kappa),
            ("omega_m", self.omega_m),
            ("gamma_m", self.gamma_m),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveRate { name, value });
            }
        }
        for (name, value) in [
            ("g_c", self.g_c),
            ("gamma_left", self.gamma_left),
            ("gamma_right", self.gamma_right),
            ("gamma_vac", self.gamma_vac),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveRate { name, value });
            }
        }
        if self.detuning > 0.0 {
            return Err(Error::BlueDetuned(self.detuning));
        }
        if self.g_c >= self.kappa {
            return Err(Error::Overcoupled {
                g_c: self.g_c,
                kappa: self.kappa,
            });
        }
        let sum = self.gamma_left + self.gamma_right + self.gamma_vac;
        let expected = 2.0 * self.kappa;
        if (sum - expected).abs() > SUM_TOL * expected {
            return Err(Error::SumMismatch { sum, expected });
        }
        if !(0.0..=1.0).contains(&self.eps_det) {
            return Err(Error::BadEfficiency(self.eps_det));
        }
        Ok(self)
    }

    pub fn cooperativity(&self) -> f64 {
        self.g_c * self.g_c / (self.kappa * self.gamma_m)
    }

    pub fn quality_factor(&self) -> f64 {
        self.omega_m / self.gamma_m
    }

    pub fn gamma_total(&self) -> f64 {
        self.gamma_left + self.gamma_right + self.gamma_vac
    }

    /// Extraction efficiency through the right (detection) port.
    pub fn eps_out(&self) -> f64 {
        self.gamma_right / (2.0 * self.kappa)
    }

    pub fn derived(&self) -> DerivedParams {
        let (omega_eff, _) = effective_frequency(self);
        let d_opt = damping_parameter(self);
        let eps_out = self.eps_out();
        DerivedParams {
            c_opt: self.cooperativity(),
            d_opt,
            omega_eff,
            q: self.quality_factor(),
            eps_out,
            eps_tot: eps_out * self.eps_det,
        }
    }

    /// Same parameter set with the coupling switched off.
    pub fn without_coupling(&self) -> Self {
        SystemParams { g_c: 0.0, ..*self }
    }
}

/// Optical spring shift s(omega) = omega_m * Delta * g_c^2 / (k^2 + D^2 - w^2).
pub fn spring_shift(p: &SystemParams, omega: f64) -> Result<f64> {
    let den = p.kappa * p.kappa + p.detuning * p.detuning - omega * omega;
    if den.abs() < NEAR_POLE_TOL * p.kappa * p.kappa {
        return Err(Error::NearPole { omega });
    }
    Ok(p.omega_m * p.detuning * p.g_c * p.g_c / den)
}

/// Optomechanically induced damping rate
/// Gamma_opt(omega) = 2k (omega_m^2 - omega^2) / (k^2 + D^2 - w^2).
pub fn optical_damping(p: &SystemParams, omega: f64) -> Result<f64> {
    let den = p.kappa * p.kappa + p.detuning * p.detuning - omega * omega;
    if den.abs() < NEAR_POLE_TOL * p.kappa * p.kappa {
        return Err(Error::NearPole { omega });
    }
    Ok(2.0 * p.kappa * (p.omega_m * p.omega_m - omega * omega) / den)
}

/// Effective mechanical frequency: `(exact, approx)`.
///
/// The exact value is the minus branch of the quadratic in omega_eff^2; the
/// approximation is sqrt(omega_m^2 + s(omega_m)), valid for small shifts.
pub fn effective_frequency(p: &SystemParams) -> (f64, f64) {
    let k2d2 = p.kappa * p.kappa + p.detuning * p.detuning;
    let wm2 = p.omega_m * p.omega_m;
    let radicand =
        (k2d2 - wm2) * (k2d2 - wm2) - 4.0 * p.omega_m * p.detuning * p.g_c * p.g_c;
    // radicand >= 0 always holds for detuning <= 0
    let exact = (0.5 * (k2d2 + wm2) - 0.5 * radicand.sqrt()).max(0.0).sqrt();
    let approx = match spring_shift(p, p.omega_m) {
        Ok(s) => (wm2 + s).max(0.0).sqrt(),
        Err(_) => exact,
    };
    (exact, approx)
}

/// Damping parameter D_opt = Gamma_opt(omega_eff) / gamma_m.
pub fn damping_parameter(p: &SystemParams) -> f64 {
    let (omega_eff, _) = effective_frequency(p);
    match optical_damping(p, omega_eff) {
        Ok(g) => g / p.gamma_m,
        Err(_) => f64::NAN,
    }
}

/// Solve for the coupling g_c that reaches a damping-parameter target,
/// then return the validated parameter set. Figure-style presets quote
/// (omega_m / kappa, Q, D_opt, Delta); kappa is set to 1.
pub fn from_figure_targets(
    omega_m_over_kappa: f64,
    q: f64,
    d_opt_target: f64,
    delta: f64,
    ports: PortSplit,
    eps_det: f64,
) -> Result<SystemParams> {
    if !(d_opt_target > 0.0) {
        return Err(Error::Config(format!(
            "d_opt target must be positive (got {d_opt_target})"
        )));
    }
    if delta > 0.0 {
        return Err(Error::BlueDetuned(delta));
    }
    let base = SystemParams {
        kappa: 1.0,
        detuning: delta,
        omega_m: omega_m_over_kappa,
        gamma_m: omega_m_over_kappa / q,
        g_c: 0.0,
        gamma_left: ports.left,
        gamma_right: ports.right,
        gamma_vac: ports.vac,
        eps_det,
    }
    .validate()?;

    let d_of = |g: f64| damping_parameter(&SystemParams { g_c: g, ..base });

    // Scan for the first sign change of d(g) - target, then bisect; this
    // returns the smallest positive root when several exist.
    let n_scan = 400;
    let g_max = base.kappa * (1.0 - 1e-9);
    let mut max_attained = 0.0f64;
    let mut bracket = None;
    let mut prev_g = 0.0;
    let mut prev_f = -d_opt_target;
    for i in 1..=n_scan {
        let g = g_max * i as f64 / n_scan as f64;
        let d = d_of(g);
        if d.is_finite() {
            max_attained = max_attained.max(d);
        }
        let f = d - d_opt_target;
        if prev_f < 0.0 && f >= 0.0 {
            bracket = Some((prev_g, g));
            break;
        }
        prev_g = g;
        prev_f = f;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoRoot {
        target: d_opt_target,
        max_attainable: max_attained,
    })?;
    while hi - lo > 1e-12 * base.kappa {
        let mid = 0.5 * (lo + hi);
        if d_of(mid) - d_opt_target < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    SystemParams {
        g_c: 0.5 * (lo + hi),
        ..base
    }
    .validate()
}
