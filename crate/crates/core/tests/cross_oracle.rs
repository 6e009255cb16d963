use squeezed_qfi::dd::DoubleDouble;
use squeezed_qfi::gaussian::{InputFamily, InterferometerConfig};
use squeezed_qfi::qfi::{
    evolve_with_derivative, qfi_from_derivative, qfi_general, qfi_general_with, qfi_lossless_general, qfi_lossless_svac,
    qfi_lossy_cs, qfi_lossy_svac,
};
use num_traits::Float;
use squeezed_qfi::scalar::Real;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

const RG: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 2.5];

fn losses() -> impl Iterator<Item = f64> {
    (0..10).map(|i| i as f64 / 10.0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn squeezed_vacuum_grid_matches_closed_form() {
    let mut worst = 0f64;
    for r in RG {
        for g in RG {
            for l in losses() {
                let c = InterferometerConfig::squeezed_vacuum(r, g, l).unwrap();
                let e = rel(qfi_general(&c).unwrap().value, qfi_lossy_svac(r, g, l).unwrap());
                worst = worst.max(e);
            }
        }
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn coherent_squeezed_grid_matches_closed_form() {
    let mut worst = 0f64;
    for r in RG {
        for g in RG {
            for l in losses() {
                let a = r.sinh();
                let c = InterferometerConfig::new(a, 0.0, r, g, 0.0, l).unwrap();
                let e = rel(
                    qfi_general_with(&c, InputFamily::CoherentSqueezed).unwrap().value,
                    qfi_lossy_cs(a, r, g, l).unwrap(),
                );
                worst = worst.max(e);
            }
        }
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn displaced_grid_matches_lossless_closed_form() {
    let mut worst = 0f64;
    for r in RG {
        for g in RG {
            for a in [0.0, 1.0, 2.0] {
                for d in [0.0, FRAC_PI_4, FRAC_PI_2] {
                    let c = InterferometerConfig::new(a, d, r, g, 0.0, 0.0).unwrap();
                    let e = rel(qfi_general(&c).unwrap().value, qfi_lossless_general(a, d, r, g).unwrap());
                    worst = worst.max(e);
                }
            }
        }
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn double_double_pipeline_agrees_to_twenty_digits() {
    let mut worst = 0f64;
    for r in RG {
        for g in RG {
            for l in losses() {
                let c = InterferometerConfig::squeezed_vacuum(r, g, l).unwrap().map(DoubleDouble::from);
                let closed = qfi_lossy_svac(c.r, c.g, c.loss).unwrap();
                let general = qfi_general(&c).unwrap().value;
                worst = worst.max(((general - closed) / closed).abs().to_f64_lossy());

                let a = c.r.sinh();
                let cs = InterferometerConfig { alpha_mag: a, ..c };
                let closed = qfi_lossy_cs(a, c.r, c.g, c.loss).unwrap();
                let general = qfi_general_with(&cs, InputFamily::CoherentSqueezed).unwrap().value;
                worst = worst.max(((general - closed) / closed).abs().to_f64_lossy());
            }
        }
    }
    assert!(worst < 1e-20, "{worst:e}");
}

#[test]
fn double_precision_throughout_still_meets_tolerance() {
    // same formula without the widened working precision
    let mut worst = 0f64;
    for r in RG {
        for g in RG {
            for l in losses() {
                let c = InterferometerConfig::squeezed_vacuum(r, g, l).unwrap();
                let p = evolve_with_derivative(&c, InputFamily::DsvPair).unwrap();
                worst = worst.max(rel(qfi_from_derivative(&p).unwrap().value, qfi_lossy_svac(r, g, l).unwrap()));
            }
        }
    }
    assert!(worst < 1e-8, "{worst:e}");
}

#[test]
fn lossless_closed_forms_against_extended_precision() {
    for r in RG {
        for g in RG {
            let wide = qfi_lossless_svac(DoubleDouble::from(r), DoubleDouble::from(g)).unwrap().to_f64_lossy();
            assert!(rel(qfi_lossless_svac(r, g).unwrap(), wide) < 1e-13);
            let wide = qfi_lossless_general(DoubleDouble::from(1.0), DoubleDouble::from(0.3), DoubleDouble::from(r), DoubleDouble::from(g))
                .unwrap()
                .to_f64_lossy();
            assert!(rel(qfi_lossless_general(1.0, 0.3, r, g).unwrap(), wide) < 1e-13);
        }
    }
}
