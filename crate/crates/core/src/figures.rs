//! Element-power curves behind the standard plots: modulation transfer,
//! mechanical-to-optical transduction, reflection, transparency, and
//! thermal spectra, evaluated on the preset grids.

use crate::error::Result;
use crate::output::{reflection_modulation, Port};
use crate::params::SystemParams;
use crate::response::{h_eta, modulation_transfer};
use crate::spectra::{thermal_spectrum, NoiseModel};

/// Empty-cavity (G = 0) intracavity power attenuation: the squared column
/// norm of the bare cavity filter, used to normalize modulation curves.
pub fn empty_cavity_attenuation(p: &SystemParams, omega: f64) -> f64 {
    let kiw = num_complex::Complex64::new(p.kappa, -omega);
    let da = kiw * kiw + p.detuning * p.detuning;
    (p.kappa * p.kappa + omega * omega + p.detuning * p.detuning) / da.norm_sqr()
}

/// Rows of (omega, |MT++|^2, |MT+-|^2, |MT-+|^2, |MT--|^2), each element
/// power normalized by the empty-cavity attenuation.
pub fn modulation_curve(p: &SystemParams, omegas: &[f64]) -> Result<Vec<[f64; 5]>> {
    omegas
        .iter()
        .map(|&w| {
            let mt = modulation_transfer(p, w)?;
            let norm = empty_cavity_attenuation(p, w);
            Ok([
                w,
                mt.0[0][0].norm_sqr() / norm,
                mt.0[0][1].norm_sqr() / norm,
                mt.0[1][0].norm_sqr() / norm,
                mt.0[1][1].norm_sqr() / norm,
            ])
        })
        .collect()
}

/// Rows of (omega, Gamma_m |Heta ++|^2, Gamma_m |Heta -+|^2): square
/// modulation quanta of the intracavity field per square flux quantum of
/// the mechanical input.
pub fn mech_curve(p: &SystemParams, omegas: &[f64]) -> Result<Vec<[f64; 3]>> {
    omegas
        .iter()
        .map(|&w| {
            let he = h_eta(p, w)?;
            Ok([
                w,
                p.gamma_m * he.0[0][0].norm_sqr(),
                p.gamma_m * he.0[1][0].norm_sqr(),
            ])
        })
        .collect()
}

/// Rows of (omega, four element powers of the reflection modulation matrix
/// at `port`).
pub fn reflection_curve(
    p: &SystemParams,
    omegas: &[f64],
    port: Port,
) -> Result<Vec<[f64; 5]>> {
    omegas
        .iter()
        .map(|&w| {
            let m = reflection_modulation(p, w, port)?;
            Ok([
                w,
                m.0[0][0].norm_sqr(),
                m.0[0][1].norm_sqr(),
                m.0[1][0].norm_sqr(),
                m.0[1][1].norm_sqr(),
            ])
        })
        .collect()
}

/// Rows of (omega, S_mech at theta = 0, S_mech at theta = pi/2).
pub fn thermal_curve(
    p: &SystemParams,
    omegas: &[f64],
    noise: &NoiseModel,
) -> Result<Vec<[f64; 3]>> {
    let table = thermal_spectrum(p, omegas, noise, Port::Right)?;
    Ok((0..omegas.len())
        .map(|i| [omegas[i], table.value(i, 0), table.value(i, 1)])
        .collect())
}
