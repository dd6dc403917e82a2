//! Cavity output fields: per-port transfer matrices from the boundary
//! condition a_in + a_out = sqrt(gamma) a, carrier phase rotations in
//! reflection, and detection-efficiency degradation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::params::SystemParams;
use crate::response::{cavity_phase, h_alpha, h_eta};

/// Cavity ports. `Vacuum` carries loss and is never a detection port.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Port {
    Left,
    Right,
    Vacuum,
}

/// Input channels feeding the amplifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputChannel {
    Left,
    Right,
    Vacuum,
    Mechanical,
}

impl InputChannel {
    pub const ALL: [InputChannel; 4] = [
        InputChannel::Left,
        InputChannel::Right,
        InputChannel::Vacuum,
        InputChannel::Mechanical,
    ];

    /// Input coupling rate: the port damping rate, or gamma_m for the
    /// mechanical channel.
    pub fn rate(&self, p: &SystemParams) -> f64 {
        match self {
            InputChannel::Left => p.gamma_left,
            InputChannel::Right => p.gamma_right,
            InputChannel::Vacuum => p.gamma_vac,
            InputChannel::Mechanical => p.gamma_m,
        }
    }
}

impl Port {
    pub fn rate(&self, p: &SystemParams) -> f64 {
        match self {
            Port::Left => p.gamma_left,
            Port::Right => p.gamma_right,
            Port::Vacuum => p.gamma_vac,
        }
    }

    fn as_channel(&self) -> InputChannel {
        match self {
            Port::Left => InputChannel::Left,
            Port::Right => InputChannel::Right,
            Port::Vacuum => InputChannel::Vacuum,
        }
    }
}

/// Extraction and detection efficiencies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Efficiencies {
    /// gamma of the detection port over 2 kappa.
    pub eps_out: f64,
    /// Detected fraction of the output field.
    pub eps_det: f64,
}

impl Efficiencies {
    pub fn from_params(p: &SystemParams, detection: Port) -> Result<Self> {
        if detection == Port::Vacuum {
            return Err(Error::InvalidPort);
        }
        Ok(Efficiencies {
            eps_out: detection.rate(p) / (2.0 * p.kappa),
            eps_det: p.eps_det,
        })
    }

    pub fn ideal() -> Self {
        Efficiencies {
            eps_out: 1.0,
            eps_det: 1.0,
        }
    }

    pub fn eps_tot(&self) -> f64 {
        self.eps_out * self.eps_det
    }
}

/// Output transfer matrix for any port, including the vacuum port
/// (needed for passivity checks; vacuum is still not a detection channel).
pub fn output_transfer(
    p: &SystemParams,
    omega: f64,
    out: Port,
    input: InputChannel,
) -> Result<Mat2> {
    let gamma_j = out.rate(p);
    if input == InputChannel::Mechanical {
        let scale = (gamma_j * p.gamma_m).sqrt();
        return Ok(h_eta(p, omega)?.scale_re(scale));
    }
    let gamma_k = input.rate(p);
    let ha = h_alpha(p, omega)?;
    if out.as_channel() == input {
        Ok(ha.scale_re(gamma_j).sub(&Mat2::identity()))
    } else {
        Ok(ha.scale_re((gamma_j * gamma_k).sqrt()))
    }
}

/// Transfer matrix from input channel `input` to the detectable output at
/// port `out` (left or right only).
pub fn port_transfer(
    p: &SystemParams,
    omega: f64,
    out: Port,
    input: InputChannel,
) -> Result<Mat2> {
    if out == Port::Vacuum {
        return Err(Error::InvalidPort);
    }
    output_transfer(p, omega, out, input)
}

/// Carrier phase angles `(psi_c, phi_c)` for detection in reflection at
/// `port`.
///
/// `psi_c = arctan(Delta/kappa)` is the input carrier phase relative to the
/// (real) intracavity carrier. `phi_c` is defined through the static (w = 0)
/// boundary condition so that the output carrier phase is `psi_c + phi_c`;
/// for a one-sided lossless cavity this reduces to the two-argument form of
/// `-arctan(2 k Delta / (k^2 - Delta^2))`.
pub fn carrier_phases(p: &SystemParams, port: Port) -> Result<(f64, f64)> {
    if port == Port::Vacuum {
        return Err(Error::InvalidPort);
    }
    let psi_c = cavity_phase(p);
    // static boundary with a real intracavity carrier (1, 0):
    //   alpha_in  prop. (-M_a)(1,0)          = (kappa, Delta)
    //   alpha_out prop. gamma_j (1,0) - alpha_in = (gamma_j - kappa, -Delta)
    let gamma_j = port.rate(p);
    let vx = gamma_j - p.kappa;
    let vy = -p.detuning;
    if vx.hypot(vy) < 1e-14 * p.kappa {
        return Err(Error::ZeroCarrier);
    }
    let mut phi_c = f64::atan2(vy, vx) - psi_c;
    if phi_c > std::f64::consts::PI {
        phi_c -= 2.0 * std::f64::consts::PI;
    } else if phi_c <= -std::f64::consts::PI {
        phi_c += 2.0 * std::f64::consts::PI;
    }
    Ok((psi_c, phi_c))
}

/// Reflection modulation matrix
/// H^MT_jj = R(-psi_c) R(-phi_c) H_jj R(psi_c).
pub fn reflection_modulation(p: &SystemParams, omega: f64, port: Port) -> Result<Mat2> {
    let (psi_c, phi_c) = carrier_phases(p, port)?;
    let h_jj = port_transfer(p, omega, port, port.as_channel())?;
    Ok(Mat2::rotation(-psi_c)
        .mul(&Mat2::rotation(-phi_c))
        .mul(&h_jj)
        .mul(&Mat2::rotation(psi_c)))
}

/// Detected relative PSD: eps_tot * S + 1 - eps_tot.
pub fn apply_efficiency(ideal_relative_psd: f64, eps: &Efficiencies) -> f64 {
    let e = eps.eps_tot();
    e * ideal_relative_psd + 1.0 - e
}
