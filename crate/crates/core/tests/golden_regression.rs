//! Regression against the frozen golden tables in tests/golden/.
//! Regenerate with `cargo run -p optoamp --example gen_golden` and inspect
//! the diff before committing.

use optoamp::figures::*;
use optoamp::output::Port;
use optoamp::presets::*;
use optoamp::spectra::{omit_trace, NoiseModel};

fn load(name: &str) -> Vec<Vec<f64>> {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn assert_rows_match<const N: usize>(rows: &[[f64; N]], golden: &[Vec<f64>], name: &str) {
    assert_eq!(rows.len(), golden.len(), "{name}: row count");
    for (r, g) in rows.iter().zip(golden) {
        for (a, b) in r.iter().zip(g) {
            let scale = b.abs().max(1e-30);
            assert!(
                (a - b).abs() <= 1e-10 * scale,
                "{name}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn modulation_curves() {
    let grid = response_grid();
    for wm in SIDEBAND_CASES {
        let p = sideband_case(wm).unwrap();
        let tag = (wm * 10.0) as u32;
        let rows = modulation_curve(&p, &grid).unwrap();
        assert_rows_match(&rows, &load(&format!("modulation_{tag}.csv")), "modulation");
    }
}

#[test]
fn mech_curves() {
    let grid = response_grid();
    for wm in SIDEBAND_CASES {
        let p = sideband_case(wm).unwrap();
        let tag = (wm * 10.0) as u32;
        let rows = mech_curve(&p, &grid).unwrap();
        assert_rows_match(&rows, &load(&format!("mech_{tag}.csv")), "mech");
    }
}

#[test]
fn reflection_curves() {
    let grid = response_grid();
    for wm in SIDEBAND_CASES {
        let p = sideband_case(wm).unwrap();
        let tag = (wm * 10.0) as u32;
        let rows = reflection_curve(&p, &grid, Port::Right).unwrap();
        assert_rows_match(&rows, &load(&format!("reflection_{tag}.csv")), "reflection");
    }
}

#[test]
fn omit_table() {
    let p = omit_preset();
    let rows: Vec<[f64; 4]> = omit_trace(&p, &omit_grid())
        .unwrap()
        .iter()
        .map(|pt| [pt.omega, pt.raw, pt.empty, pt.ratio])
        .collect();
    assert_rows_match(&rows, &load("omit_resolved.csv"), "omit");
}

#[test]
fn thermal_table() {
    let p = sideband_case(5.0).unwrap();
    let rows = thermal_curve(&p, &thermal_grid(), &NoiseModel::thermal(10.0)).unwrap();
    assert_rows_match(&rows, &load("thermal_resolved.csv"), "thermal");
}
