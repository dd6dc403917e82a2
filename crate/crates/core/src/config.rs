//! JSON run configuration: physical rates in either kappa units or SI
//! (rad/s), an optional coupling specification by damping target, and
//! optional noise/drive/simulation blocks. Everything is normalized to
//! kappa = 1 on ingestion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::SimConfig;
use crate::params::{from_figure_targets, PortSplit, SystemParams};
use crate::sensing::ForceDrive;
use crate::spectra::NoiseModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Kappa,
    Si,
}

impl Default for Units {
    fn default() -> Self {
        Units::Kappa
    }
}

/// Coupling rate given directly, via a damping target, or via the
/// single-photon coupling and photon number (g_c = 2 g_om sqrt(n)).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CouplingSpec {
    Rate(f64),
    DampingTarget { d_opt: f64 },
    SinglePhoton { g_om: f64, n: f64 },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PortsSpec {
    #[serde(default)]
    pub left: f64,
    #[serde(default)]
    pub right: f64,
    #[serde(default)]
    pub vac: f64,
}

/// Optional drive block for force-sensing commands.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DriveSpec {
    #[serde(default = "one")]
    pub f_ext: f64,
    #[serde(default = "one")]
    pub p_ho: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub kappa: f64,
    pub detuning: f64,
    pub omega_m: f64,
    pub gamma_m: f64,
    pub g_c: CouplingSpec,
    pub ports: Option<PortsSpec>,
    #[serde(default = "one")]
    pub eps_det: f64,
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub n_th: f64,
    #[serde(default = "one")]
    pub f_bw: f64,
    pub drive: Option<DriveSpec>,
    pub sim: Option<SimConfig>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Validated system parameters in kappa units.
    pub fn params(&self) -> Result<SystemParams> {
        if !(self.kappa > 0.0) {
            return Err(Error::NonPositiveRate {
                name: "kappa",
                value: self.kappa,
            });
        }
        // normalize to kappa = 1; in kappa units the scale divides out too
        let k = self.kappa;
        let ports = match self.ports {
            Some(p) => PortSplit {
                left: p.left / k,
                right: p.right / k,
                vac: p.vac / k,
            },
            None => PortSplit::one_sided(),
        };
        match self.g_c {
            CouplingSpec::DampingTarget { d_opt } => from_figure_targets(
                self.omega_m / k,
                self.omega_m / self.gamma_m,
                d_opt,
                self.detuning / k,
                ports,
                self.eps_det,
            ),
            spec => {
                let g_c = match spec {
                    CouplingSpec::Rate(g) => g / k,
                    CouplingSpec::SinglePhoton { g_om, n } => 2.0 * g_om * n.sqrt() / k,
                    CouplingSpec::DampingTarget { .. } => unreachable!(),
                };
                SystemParams {
                    kappa: 1.0,
                    detuning: self.detuning / k,
                    omega_m: self.omega_m / k,
                    gamma_m: self.gamma_m / k,
                    g_c,
                    gamma_left: ports.left,
                    gamma_right: ports.right,
                    gamma_vac: ports.vac,
                    eps_det: self.eps_det,
                }
                .validate()
            }
        }
    }

    pub fn noise(&self) -> NoiseModel {
        NoiseModel {
            f_bw: self.f_bw_kappa(),
            ..NoiseModel::thermal(self.n_th)
        }
    }

    pub fn force_drive(&self) -> ForceDrive {
        let d = self.drive.unwrap_or(DriveSpec {
            f_ext: 1.0,
            p_ho: 1.0,
        });
        ForceDrive::from_momentum_scale(d.f_ext, d.p_ho, self.f_bw_kappa())
    }

    /// Bandwidth in kappa units.
    fn f_bw_kappa(&self) -> f64 {
        match self.units {
            Units::Kappa => self.f_bw,
            Units::Si => self.f_bw / self.kappa,
        }
    }

    /// Simulation block with times rescaled to kappa units.
    pub fn sim(&self) -> SimConfig {
        let mut sim = self.sim.unwrap_or_default();
        if self.units == Units::Si {
            sim.dt *= self.kappa;
            sim.duration *= self.kappa;
        }
        sim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_kappa_units() {
        let cfg = RunConfig::from_json(
            r#"{"kappa": 1.0, "detuning": -0.7, "omega_m": 0.2,
                "gamma_m": 2e-4, "g_c": 0.1}"#,
        )
        .unwrap();
        let p = cfg.params().unwrap();
        assert_eq!(p.kappa, 1.0);
        assert_eq!(p.gamma_right, 2.0);
        assert_eq!(p.gamma_left, 0.0);
        assert_eq!(cfg.units, Units::Kappa);
    }

    #[test]
    fn si_units_normalize() {
        let cfg = RunConfig::from_json(
            r#"{"kappa": 2e6, "detuning": -1.4e6, "omega_m": 4e5,
                "gamma_m": 400.0, "g_c": 2e5, "units": "si",
                "ports": {"left": 2e6, "right": 2e6},
                "sim": {"dt": 1e-9, "duration": 1e-3, "n_traj": 2,
                        "seed": 3, "burn_in": 0.1, "decimate": 1}}"#,
        )
        .unwrap();
        let p = cfg.params().unwrap();
        assert!((p.detuning + 0.7).abs() < 1e-12);
        assert!((p.omega_m - 0.2).abs() < 1e-12);
        assert!((p.g_c - 0.1).abs() < 1e-12);
        assert!((p.gamma_left - 1.0).abs() < 1e-12);
        let sim = cfg.sim();
        assert!((sim.dt - 2e-3).abs() < 1e-15);
        assert!((sim.duration - 2e3).abs() < 1e-9);
    }

    #[test]
    fn damping_target_coupling() {
        let cfg = RunConfig::from_json(
            r#"{"kappa": 1.0, "detuning": -0.7, "omega_m": 0.2,
                "gamma_m": 2e-4, "g_c": {"d_opt": 30.0}}"#,
        )
        .unwrap();
        let p = cfg.params().unwrap();
        assert!(p.g_c > 0.0 && p.g_c < 1.0);
        assert!((p.derived().d_opt - 30.0).abs() < 1e-5);
    }

    #[test]
    fn single_photon_coupling() {
        let cfg = RunConfig::from_json(
            r#"{"kappa": 1.0, "detuning": 0.0, "omega_m": 0.2,
                "gamma_m": 2e-4, "g_c": {"g_om": 0.005, "n": 100.0}}"#,
        )
        .unwrap();
        assert!((cfg.params().unwrap().g_c - 0.1).abs() < 1e-12);
    }

    #[test]
    fn parse_error_is_config() {
        assert!(matches!(
            RunConfig::from_json("{"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            RunConfig::from_json(r#"{"kappa": 1.0}"#),
            Err(Error::Config(_))
        ));
    }
}
