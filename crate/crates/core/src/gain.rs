//! Fixed-frequency gain maximization.
//!
//! For a waveguide the optimal shifted phases align the unit-modulus part of
//! every slot weight with the coherent sum `-j 1ᵀh`, giving the closed form
//! `G* = (N + |S|)² / 4`. The true-time-delay benchmark is solved in closed
//! form as well and is squint-free.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::channel::{channel_entries, dirichlet, normalized_product};
use crate::error::{Error, Result};
use crate::model::{resonant_from_shifted, slot_weight, DmaDesign, ResonantConfig, SPEED_OF_LIGHT};

#[derive(Clone, Debug, PartialEq)]
pub struct BeamformingSolution {
    pub resonant: ResonantConfig,
    /// Optimal shifted phases, each in `[-3π/2, π/2)`.
    pub shifted_phases: Vec<f64>,
    /// Closed-form optimum `(N + |S|)² / 4`.
    pub gain: f64,
    pub operating_freq: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TtdSolution {
    /// Per-element delays in seconds, all non-negative.
    pub delays: Vec<f64>,
}

/// `|f_DMAᵀ(f) h(φ, f)|²` for an arbitrary resonance configuration.
pub fn gain_dma(
    design: &DmaDesign,
    config: &ResonantConfig,
    phi: f64,
    f: f64,
    with_attenuation: bool,
) -> Result<f64> {
    config.check_len(design)?;
    if !(f.is_finite() && f > 0.0) {
        return Err(crate::error::domain("f", f, "finite and > 0"));
    }
    Ok(array_response(design, config.as_slice(), phi, f, with_attenuation).norm_sqr())
}

/// Complex coherent sum `Σ w_k h_k` (unsquared).
pub(crate) fn array_response(
    design: &DmaDesign,
    resonances: &[f64],
    phi: f64,
    f: f64,
    with_attenuation: bool,
) -> Complex64 {
    let h = channel_entries(design, phi, f, with_attenuation);
    resonances
        .iter()
        .zip(&h)
        .map(|(&f_r, h)| slot_weight(design.damping(), f_r, f) * h)
        .sum()
}

/// Closed-form optimum `(N + |S|)² / 4` at `(phi, f_t)`.
pub fn optimal_gain(design: &DmaDesign, phi: f64, f_t: f64) -> f64 {
    let n = design.n_elements() as f64;
    let s = dirichlet(design.n_elements(), normalized_product(design, phi, f_t));
    0.25 * (n + s.abs()).powi(2)
}

/// Wraps into `[-3π/2, π/2)`.
pub(crate) fn wrap_shifted(x: f64) -> f64 {
    let lo = -1.5 * PI;
    let wrapped = x - TAU * ((x - lo) / TAU).floor();
    // rounding can land exactly on the open end
    if wrapped >= FRAC_PI_2 {
        wrapped - TAU
    } else {
        wrapped
    }
}

/// Optimal per-slot resonances at a fixed operating frequency.
///
/// Fails with [`Error::InfeasibleElement`] (carrying the 0-based slot index)
/// when a slot would need an imaginary resonance, or [`Error::Singularity`]
/// when its phase lands on a pole.
pub fn solve_p1a(design: &DmaDesign, phi: f64, f_t: f64) -> Result<BeamformingSolution> {
    if !(design.f_min()..=design.f_max()).contains(&f_t) {
        return Err(crate::error::domain(
            "f_t",
            f_t,
            "within the design's operating band",
        ));
    }
    solve_fixed_frequency(design, phi, f_t)
}

/// Same as [`solve_p1a`] without the band check.
pub fn solve_fixed_frequency(design: &DmaDesign, phi: f64, f_t: f64) -> Result<BeamformingSolution> {
    let n = design.n_elements();
    let p = normalized_product(design, phi, f_t);
    let s = dirichlet(n, p);
    let sign = if s < 0.0 { -1.0 } else { 1.0 };
    let center = 0.5 * (n as f64 - 1.0);

    let shifted_phases: Vec<f64> = (0..n)
        .map(|k| wrap_shifted(-FRAC_PI_2 * sign + TAU * p * (k as f64 - center)))
        .collect();
    let resonant = shifted_phases
        .iter()
        .enumerate()
        .map(|(index, &psi_tilde)| {
            resonant_from_shifted(design, psi_tilde, f_t).map_err(|e| match e {
                Error::InfeasibleElement { f_r_squared, .. } => Error::InfeasibleElement {
                    index,
                    f_r_squared,
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(BeamformingSolution {
        resonant: ResonantConfig::new(resonant)?,
        shifted_phases,
        gain: 0.25 * (n as f64 + s.abs()).powi(2),
        operating_freq: f_t,
    })
}

/// Closed-form true-time-delay weights steering to `phi`.
pub fn solve_ttd(n_elements: usize, spacing: f64, phi: f64) -> TtdSolution {
    let n = n_elements as f64;
    let delays = (0..n_elements)
        .map(|k| {
            let k = k as f64;
            let offset = if phi >= 0.0 { k } else { k - (n - 1.0) };
            // (+0.0) folds a -0.0 delay at broadside
            spacing / SPEED_OF_LIGHT * offset * phi.sin() + 0.0
        })
        .collect();
    TtdSolution { delays }
}

/// Gain of a conventional (no feed phase) array with true-time delays.
pub fn gain_ttd(solution: &TtdSolution, spacing: f64, phi: f64, f: f64) -> f64 {
    let step = -TAU * f / SPEED_OF_LIGHT * spacing * phi.sin();
    solution
        .delays
        .iter()
        .enumerate()
        .map(|(k, &tau)| Complex64::from_polar(1.0, TAU * f * tau + step * k as f64))
        .sum::<Complex64>()
        .norm_sqr()
}

/// Resonance of a switched-off slot, as a multiple of the operating
/// frequency. Its weight magnitude is below 1e-8.
pub const DETUNE_FACTOR: f64 = 1e3;

/// Closed-form configuration with unreachable slots detuned instead of
/// rejected. Returns the configuration and the indices of detuned slots.
///
/// An unreachable slot needs `ψ` within about `1/Q` of `-π`, where the weight
/// magnitude `|sin ψ|` is already close to zero.
pub fn realizable_config(design: &DmaDesign, phi: f64, f_t: f64) -> Result<(ResonantConfig, Vec<usize>)> {
    let n = design.n_elements();
    let p = normalized_product(design, phi, f_t);
    let sign = if dirichlet(n, p) < 0.0 { -1.0 } else { 1.0 };
    let center = 0.5 * (n as f64 - 1.0);
    let mut detuned = Vec::new();
    let resonances = (0..n)
        .map(|k| {
            let psi_tilde = wrap_shifted(-FRAC_PI_2 * sign + TAU * p * (k as f64 - center));
            match resonant_from_shifted(design, psi_tilde, f_t) {
                Ok(f_r) => Ok(f_r),
                Err(Error::InfeasibleElement { .. } | Error::Singularity { .. }) => {
                    detuned.push(k);
                    Ok(DETUNE_FACTOR * f_t)
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ResonantConfig::new(resonances)?, detuned))
}
