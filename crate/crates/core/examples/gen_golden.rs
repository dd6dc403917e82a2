//! Regenerates the golden CSV tables under tests/golden/. Run manually;
//! the regression tests compare against the committed files.

use std::fmt::Write as _;
use std::fs;

use optoamp::figures::*;
use optoamp::output::Port;
use optoamp::presets::*;
use optoamp::spectra::NoiseModel;

fn write_rows<const N: usize>(path: &str, header: &str, rows: &[[f64; N]]) {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for r in rows {
        let mut line = String::new();
        for (i, v) in r.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            write!(line, "{:.16e}", v).unwrap();
        }
        out.push_str(&line);
        out.push('\n');
    }
    fs::write(path, out).unwrap();
    println!("wrote {path}");
}

fn main() {
    let dir = "crates/core/tests/golden";
    fs::create_dir_all(dir).unwrap();
    let grid = response_grid();
    for wm in SIDEBAND_CASES {
        let p = sideband_case(wm).unwrap();
        let tag = format!("{}", (wm * 10.0) as u32);
        write_rows(
            &format!("{dir}/modulation_{tag}.csv"),
            "omega_over_kappa,mt_pp,mt_pm,mt_mp,mt_mm",
            &modulation_curve(&p, &grid).unwrap(),
        );
        write_rows(
            &format!("{dir}/mech_{tag}.csv"),
            "omega_over_kappa,am_power,pm_power",
            &mech_curve(&p, &grid).unwrap(),
        );
        write_rows(
            &format!("{dir}/reflection_{tag}.csv"),
            "omega_over_kappa,r_pp,r_pm,r_mp,r_mm",
            &reflection_curve(&p, &grid, Port::Right).unwrap(),
        );
    }
    let po = omit_preset();
    let omit_rows: Vec<[f64; 4]> = optoamp::spectra::omit_trace(&po, &omit_grid())
        .unwrap()
        .iter()
        .map(|pt| [pt.omega, pt.raw, pt.empty, pt.ratio])
        .collect();
    write_rows(
        &format!("{dir}/omit_resolved.csv"),
        "omega_over_kappa,raw,empty,ratio",
        &omit_rows,
    );
    let pt = sideband_case(5.0).unwrap();
    write_rows(
        &format!("{dir}/thermal_resolved.csv"),
        "omega_over_kappa,s_theta0,s_theta_pi2",
        &thermal_curve(&pt, &thermal_grid(), &NoiseModel::thermal(10.0)).unwrap(),
    );
}
