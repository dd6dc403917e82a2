//! Intracavity frequency response: optical and mechanical filters, the
//! optomechanical gain, transfer matrices, the exact 4x4 resolvent, and
//! basis changes to the modulation and single-sideband representations.
//!
//! Fourier convention: f(w) = Int f(t) exp(+i w t) dt, i.e. d/dt -> -i w.
//! The canonical computation path is the exact resolvent (-iw I - M)^-1;
//! the closed forms carry a high-Q approximation in the gain and are kept
//! as a fast second route, cross-checked by tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{C64, Mat2, Mat4};
use crate::params::{spring_shift, optical_damping, SystemParams, NEAR_POLE_TOL};

/// Coupling threshold (relative to kappa) below which closed forms dividing
/// by the detuning fall back to the resolvent route.
const SMALL_DELTA: f64 = 1e-9;

fn i_omega(omega: f64) -> C64 {
    Complex64::new(0.0, omega)
}

/// Drift matrix M of the quadrature state (a+, a-, z, p).
pub fn drift_matrix(p: &SystemParams) -> [[f64; 4]; 4] {
    [
        [-p.kappa, p.detuning, 0.0, 0.0],
        [-p.detuning, -p.kappa, p.g_c, 0.0],
        [0.0, 0.0, -0.5 * p.gamma_m, -p.omega_m],
        [p.g_c, 0.0, p.omega_m, -0.5 * p.gamma_m],
    ]
}

/// Optical filter F_a(w).
pub fn cavity_filter(p: &SystemParams, omega: f64) -> Mat2 {
    let kiw = Complex64::new(p.kappa, -omega);
    let den = kiw * kiw + p.detuning * p.detuning;
    let inv = den.inv();
    Mat2([
        [kiw * inv, p.detuning * inv],
        [-p.detuning * inv, kiw * inv],
    ])
}

/// Mechanical filter F_b(w).
pub fn mech_filter(p: &SystemParams, omega: f64) -> Mat2 {
    let giw = Complex64::new(0.5 * p.gamma_m, -omega);
    let den = giw * giw + p.omega_m * p.omega_m;
    let inv = den.inv();
    Mat2([
        [giw * inv, -p.omega_m * inv],
        [p.omega_m * inv, giw * inv],
    ])
}

/// Exact resolvent (-iw I - M)^-1 in the (a+, a-, z, p) ordering.
pub fn resolvent(p: &SystemParams, omega: f64) -> Result<Mat4> {
    let m = drift_matrix(p);
    let mut a = Mat4::from_real([[0.0; 4]; 4]);
    for i in 0..4 {
        for j in 0..4 {
            a.0[i][j] = Complex64::new(-m[i][j], 0.0);
        }
        a.0[i][i] -= i_omega(omega);
    }
    a.inv().ok_or(Error::SingularMatrix(omega))
}

/// Optical gain extracted from the exact resolvent: pole-free in omega and
/// finite at zero detuning.
pub fn resolvent_gain(p: &SystemParams, omega: f64) -> Result<C64> {
    let b = decomposed_resolvent(p, omega)?;
    Ok(b.0[0][0] - 1.0)
}

/// H_alpha * F_a^-1 from the exact resolvent; equals
/// [[1 + H+a, 0], [H-a, 1]] without any high-Q approximation.
fn decomposed_resolvent(p: &SystemParams, omega: f64) -> Result<Mat2> {
    let r = resolvent(p, omega)?;
    let fa_inv = cavity_filter(p, omega)
        .inv()
        .ok_or(Error::SingularMatrix(omega))?;
    Ok(r.block2(0, 0).mul(&fa_inv))
}

/// Closed-form optomechanical gain G(w); the pole band of the real-valued
/// s and Gamma_opt forms is filled from the resolvent.
pub fn gain(p: &SystemParams, omega: f64) -> C64 {
    match (spring_shift(p, omega), optical_damping(p, omega)) {
        (Ok(s), Ok(g_opt)) => {
            let den = Complex64::new(
                p.omega_m * p.omega_m + s - omega * omega,
                -omega * (p.gamma_m + g_opt),
            );
            -s / den
        }
        _ => resolvent_gain(p, omega).unwrap_or(Complex64::new(0.0, 0.0)),
    }
}

/// Scalar elements (H+a, H-a). Closed forms where they are regular,
/// resolvent otherwise (zero detuning, pole band).
pub fn h_alpha_elements(p: &SystemParams, omega: f64) -> Result<(C64, C64)> {
    let pole = (p.kappa * p.kappa + p.detuning * p.detuning - omega * omega).abs()
        < NEAR_POLE_TOL * p.kappa * p.kappa;
    if p.detuning.abs() < SMALL_DELTA * p.kappa || pole {
        let b = decomposed_resolvent(p, omega)?;
        return Ok((b.0[0][0] - 1.0, b.0[1][0]));
    }
    let g = gain(p, omega);
    let kiw = Complex64::new(p.kappa, -omega);
    Ok((g, g * kiw / p.detuning))
}

/// Scalar elements (H+e, H-e); undefined at zero coupling.
pub fn h_eta_elements(p: &SystemParams, omega: f64) -> Result<(C64, C64)> {
    if p.g_c == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let giw = Complex64::new(0.5 * p.gamma_m, -omega);
    Ok((
        -giw / (p.g_c * p.omega_m),
        Complex64::new(1.0 / p.g_c, 0.0),
    ))
}

/// Exact elements (H+a, H-a) from the resolvent (pole-free everywhere).
pub fn h_alpha_elements_exact(p: &SystemParams, omega: f64) -> Result<(C64, C64)> {
    let b = decomposed_resolvent(p, omega)?;
    Ok((b.0[0][0] - 1.0, b.0[1][0]))
}

/// Optical-to-optical transfer matrix H_alpha (canonical resolvent path).
pub fn h_alpha(p: &SystemParams, omega: f64) -> Result<Mat2> {
    Ok(resolvent(p, omega)?.block2(0, 0))
}

/// Mechanical-to-optical transfer matrix H_eta (canonical resolvent path);
/// identically zero at zero coupling.
pub fn h_eta(p: &SystemParams, omega: f64) -> Result<Mat2> {
    Ok(resolvent(p, omega)?.block2(0, 2))
}

/// H_alpha assembled from the closed-form elements.
pub fn h_alpha_closed(p: &SystemParams, omega: f64) -> Result<Mat2> {
    let (hp, hm) = h_alpha_elements(p, omega)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let pre = Mat2([[one + hp, zero], [hm, one]]);
    Ok(pre.mul(&cavity_filter(p, omega)))
}

/// H_eta assembled from the closed-form elements; the zero matrix at zero
/// coupling (the prefactor of every element vanishes).
pub fn h_eta_closed(p: &SystemParams, omega: f64) -> Result<Mat2> {
    if p.g_c == 0.0 {
        return Ok(Mat2::zero());
    }
    let (hpa, hma) = h_alpha_elements(p, omega)?;
    let (hpe, hme) = h_eta_elements(p, omega)?;
    Ok(Mat2([[hpa * hpe, hpa * hme], [hma * hpe, hma * hme]]))
}

/// Cavity rotation angle psi_c = arctan(Delta / kappa).
pub fn cavity_phase(p: &SystemParams) -> f64 {
    f64::atan2(p.detuning, p.kappa)
}

/// Modulation transfer matrix H^MT = H_alpha R(psi_c).
pub fn modulation_transfer(p: &SystemParams, omega: f64) -> Result<Mat2> {
    Ok(h_alpha(p, omega)?.mul(&Mat2::rotation(cavity_phase(p))))
}

/// Single-sideband basis U = (1/sqrt 2) [[1, -i], [1, i]].
pub fn ss_basis() -> (Mat2, Mat2) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let u = Mat2([
        [Complex64::new(r, 0.0), Complex64::new(0.0, -r)],
        [Complex64::new(r, 0.0), Complex64::new(0.0, r)],
    ]);
    let u_inv = Mat2([
        [Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
        [Complex64::new(0.0, r), Complex64::new(0.0, -r)],
    ]);
    (u, u_inv)
}

/// Single-sideband transfer matrix H^SS = U H_alpha U^-1.
pub fn single_sideband(p: &SystemParams, omega: f64) -> Result<Mat2> {
    let (u, u_inv) = ss_basis();
    Ok(u.mul(&h_alpha(p, omega)?).mul(&u_inv))
}
