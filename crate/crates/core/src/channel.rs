//! Line-of-sight channel from a waveguide to a far-field receiver.
//!
//! Entry `k` (0-based) carries the waveguide feed phase plus the free-space
//! path phase toward azimuth `phi`:
//! `-2π (f/c) k d_y (n_g + sin φ)`, optionally scaled by `e^{-α k d_y}`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DmaDesign, SPEED_OF_LIGHT};

/// Distance from an integer below which the Dirichlet kernel returns its
/// limit value.
pub const INTEGER_SNAP: f64 = 1e-9;

/// Effective channel `h(φ, f)` for one waveguide.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub entries: Vec<Complex64>,
    pub aod: f64,
    pub freq: f64,
}

/// Normalized spacing-frequency product `p = f d_y (n_g + sin φ) / c`.
pub fn normalized_product(design: &DmaDesign, phi: f64, f: f64) -> f64 {
    f * design.spacing() * (design.refractive_index() + phi.sin()) / SPEED_OF_LIGHT
}

/// Feed phase at slot `index` (0-based); zero at the waveguide input.
pub fn intrinsic_phase(design: &DmaDesign, index: usize, f: f64) -> Result<f64> {
    check_index(design, index)?;
    Ok(-design.refractive_index() * TAU * f / SPEED_OF_LIGHT * index as f64 * design.spacing())
}

/// Free-space phase at slot `index` toward azimuth `phi` from broadside.
pub fn extrinsic_phase(design: &DmaDesign, index: usize, phi: f64, f: f64) -> Result<f64> {
    check_index(design, index)?;
    Ok(-TAU * f / SPEED_OF_LIGHT * index as f64 * design.spacing() * phi.sin())
}

fn check_index(design: &DmaDesign, index: usize) -> Result<()> {
    if index >= design.n_elements() {
        return Err(Error::IndexOutOfRange {
            index,
            len: design.n_elements(),
        });
    }
    Ok(())
}

/// Builds `h(φ, f)`. With `with_attenuation` the design's attenuation
/// factor (if any) applies a frequency-flat exponential taper.
pub fn effective_channel(design: &DmaDesign, phi: f64, f: f64, with_attenuation: bool) -> Channel {
    Channel {
        entries: channel_entries(design, phi, f, with_attenuation),
        aod: phi,
        freq: f,
    }
}

pub(crate) fn channel_entries(
    design: &DmaDesign,
    phi: f64,
    f: f64,
    with_attenuation: bool,
) -> Vec<Complex64> {
    let step = -TAU * normalized_product(design, phi, f);
    let alpha = if with_attenuation {
        design.attenuation().unwrap_or(0.0)
    } else {
        0.0
    };
    (0..design.n_elements())
        .map(|k| {
            let k = k as f64;
            let magnitude = (-alpha * k * design.spacing()).exp();
            Complex64::from_polar(magnitude, step * k)
        })
        .collect()
}

/// Dirichlet kernel `sin(πNp) / sin(πp)` with the removable singularity at
/// integer `p` replaced by its limit `±N`.
pub fn dirichlet(n: usize, p: f64) -> f64 {
    let nearest = p.round();
    if (p - nearest).abs() < INTEGER_SNAP {
        // sin(πN(m+ε))/sin(π(m+ε)) → N (-1)^{m(N-1)}
        let odd = (nearest as i64).rem_euclid(2) == 1 && n % 2 == 0;
        let n = n as f64;
        return if odd { -n } else { n };
    }
    (PI * n as f64 * p).sin() / (PI * p).sin()
}

/// `S(φ, f)` for the design's element count.
pub fn dirichlet_kernel(design: &DmaDesign, phi: f64, f: f64) -> f64 {
    dirichlet(design.n_elements(), normalized_product(design, phi, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn design() -> DmaDesign {
        DmaDesign::reference()
    }

    #[test]
    fn intrinsic_phase_examples() {
        let lambda_c = SPEED_OF_LIGHT / 15e9;
        let d = DmaDesign::new(8, 0.42 * lambda_c, 2.5, 1e9, 1e-9, 12e9, 18e9).unwrap();
        assert_eq!(intrinsic_phase(&d, 0, 15e9).unwrap(), 0.0);
        let got = intrinsic_phase(&d, 1, 15e9).unwrap();
        assert!((got - (-2.5 * TAU * 0.42)).abs() < 1e-12);
        let doubled = intrinsic_phase(&d, 3, 30e9).unwrap();
        assert!((doubled - 2.0 * intrinsic_phase(&d, 3, 15e9).unwrap()).abs() < 1e-12);
        assert!(matches!(
            intrinsic_phase(&d, 8, 15e9),
            Err(Error::IndexOutOfRange { index: 8, len: 8 })
        ));
    }

    #[test]
    fn extrinsic_phase_examples() {
        let d = design();
        for k in 0..8 {
            assert_eq!(extrinsic_phase(&d, k, 0.0, 15e9).unwrap(), 0.0);
            let a = extrinsic_phase(&d, k, 0.3, 15e9).unwrap();
            let b = extrinsic_phase(&d, k, -0.3, 15e9).unwrap();
            assert!((a + b).abs() < 1e-12);
        }
        let lambda_c = SPEED_OF_LIGHT / 15e9;
        let d = DmaDesign::new(8, 0.42 * lambda_c, 2.5, 1e9, 1e-9, 12e9, 18e9).unwrap();
        let phi = (-18.0f64).to_radians();
        let f = 16.43e9;
        let expected = -TAU * f / SPEED_OF_LIGHT * 2.0 * 0.42 * lambda_c * phi.sin();
        assert!((extrinsic_phase(&d, 2, phi, f).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn channel_single_element_and_attenuation() {
        let d = design().with_elements(1).unwrap();
        let h = effective_channel(&d, 0.4, 15e9, false);
        assert_eq!(h.entries, vec![Complex64::new(1.0, 0.0)]);

        let d = design().with_attenuation(6.0).unwrap();
        let h = effective_channel(&d, 0.1, 15e9, true);
        let expected = (-6.0 * 7.0 * d.spacing()).exp();
        assert!((h.entries[7].norm() - expected).abs() < 1e-12);
        assert!(h.entries.windows(2).all(|w| w[1].norm() <= w[0].norm()));
        let ideal = effective_channel(&d, 0.1, 15e9, false);
        assert!(ideal.entries.iter().all(|e| (e.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet(8, 1.0).abs(), 8.0);
        assert_eq!(dirichlet(8, 3.0), -8.0);
        assert_eq!(dirichlet(7, 3.0), 7.0);
        assert_eq!(dirichlet(8, 2.0 + 1e-12), 8.0);
        let expected = 1.0 / (PI / 16.0).sin();
        assert!((dirichlet(8, 1.0 / 16.0) - expected).abs() < 1e-12);
        assert!(dirichlet(8, 0.125).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn dirichlet_period_two(p in -5.0f64..5.0, n in 1usize..20) {
            let a = dirichlet(n, p);
            let b = dirichlet(n, p + 2.0);
            prop_assert!((a - b).abs() <= 1e-6 * (n as f64));
        }

        #[test]
        fn dirichlet_bounded(p in -5.0f64..5.0, n in 1usize..40) {
            prop_assert!(dirichlet(n, p).abs() <= n as f64 + 1e-9);
        }

        #[test]
        fn channel_phase_identity(phi in -1.5f64..1.5, f in 1e9f64..3e10) {
            let d = design();
            let h = effective_channel(&d, phi, f, false);
            for (k, e) in h.entries.iter().enumerate() {
                prop_assert!((e.norm() - 1.0).abs() <= 1e-12);
                let expected = -TAU * f / SPEED_OF_LIGHT * k as f64 * d.spacing()
                    * (d.refractive_index() + phi.sin());
                let diff = (e.arg() - expected).rem_euclid(TAU);
                prop_assert!(diff.min(TAU - diff) <= 1e-9);
                let split = intrinsic_phase(&d, k, f).unwrap() + extrinsic_phase(&d, k, phi, f).unwrap();
                prop_assert!((split - expected).abs() <= 1e-9 * expected.abs().max(1.0));
            }
        }

        #[test]
        fn coherent_sum_matches_kernel(phi in -1.0f64..1.0, f in 1e10f64..2e10) {
            let d = design();
            let h = effective_channel(&d, phi, f, false);
            let sum: Complex64 = h.entries.iter().sum::<Complex64>() * Complex64::new(0.0, -1.0);
            let s = dirichlet_kernel(&d, phi, f);
            let p = normalized_product(&d, phi, f);
            let n = d.n_elements() as f64;
            let expected = s * Complex64::from_polar(1.0, -PI / 2.0 - PI * (n - 1.0) * p);
            prop_assert!((sum - expected).norm() <= 1e-9 * n);
        }
    }
}
