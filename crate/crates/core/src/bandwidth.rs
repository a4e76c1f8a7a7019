//! Frequency response of a uniformly tuned waveguide and its ν-bandwidth.
//!
//! With every slot resonating at `f_t*`, the gain factorizes into a single
//! Lorentzian element response times the array factor `|1ᵀh|²`. The element
//! cutoffs have an exact closed form; full-array cutoffs are located
//! numerically.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{channel_entries, dirichlet_kernel};
use crate::error::{domain, Error, Result};
use crate::model::{slot_weight, DmaDesign};

/// Bisection tolerance for numeric cutoffs, Hz.
pub const CUTOFF_TOLERANCE_HZ: f64 = 1e3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffReport {
    pub f_lower: f64,
    pub f_upper: f64,
    pub bandwidth: f64,
    pub nu: f64,
    /// First-order term `Γ / (2π √ρ(ν))`.
    pub approx_bandwidth: f64,
}

/// Lorentzian element response normalized to 1 at `f_t_star`.
pub fn element_gain(design: &DmaDesign, f_t_star: f64, f: f64) -> Result<f64> {
    if !(f > 0.0) {
        return Err(domain("f", f, "> 0"));
    }
    let gf = design.damping() * f;
    let den = Complex64::new(TAU * (f_t_star * f_t_star - f * f), gf);
    Ok(gf * gf / den.norm_sqr())
}

/// Array factor `|1ᵀh(φ, f)|²` (ideal waveguide).
pub fn array_gain(design: &DmaDesign, phi: f64, f: f64) -> f64 {
    channel_entries(design, phi, f, false)
        .iter()
        .sum::<Complex64>()
        .norm_sqr()
}

/// `ρ(ν) = ν / (1 − ν)`.
pub fn rho(nu: f64) -> f64 {
    nu / (1.0 - nu)
}

/// Exact element ν-cutoffs around `f_t_star`.
pub fn cutoff_frequencies(design: &DmaDesign, f_t_star: f64, nu: f64) -> Result<CutoffReport> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(domain("nu", nu, "0 < nu < 1"));
    }
    if !(f_t_star > 0.0) {
        return Err(domain("f_t_star", f_t_star, "> 0"));
    }
    let g = design.damping();
    let r = rho(nu);
    let root = (g.powi(4) + 16.0 * g * g * PI * PI * f_t_star * f_t_star * r).sqrt();
    let denom = 8.0 * PI * PI * r;
    let lower_sq = f_t_star * f_t_star + (g * g - root) / denom;
    let upper_sq = f_t_star * f_t_star + (g * g + root) / denom;
    if lower_sq <= 0.0 {
        return Err(Error::Internal(format!("negative lower cutoff square {lower_sq}")));
    }
    let (f_lower, f_upper) = (lower_sq.sqrt(), upper_sq.sqrt());
    Ok(CutoffReport {
        f_lower,
        f_upper,
        bandwidth: f_upper - f_lower,
        nu,
        approx_bandwidth: g / (TAU * r.sqrt()),
    })
}

/// Full-array ν-cutoffs of the uniformly tuned waveguide, found by bisection
/// on each side of `f_t_star` against `ν · G(f_t_star)`.
pub fn array_cutoff_frequencies(
    design: &DmaDesign,
    phi: f64,
    f_t_star: f64,
    nu: f64,
) -> Result<CutoffReport> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(domain("nu", nu, "0 < nu < 1"));
    }
    let gain = |f: f64| uniform_gain(design, phi, f_t_star, f);
    let threshold = nu * gain(f_t_star);
    let reach = design.damping(); // comfortably beyond the element cutoffs
    let f_lower = bisect_crossing(&gain, threshold, f_t_star, (f_t_star - 10.0 * reach).max(1.0))?;
    let f_upper = bisect_crossing(&gain, threshold, f_t_star, f_t_star + 10.0 * reach)?;
    Ok(CutoffReport {
        f_lower,
        f_upper,
        bandwidth: f_upper - f_lower,
        nu,
        approx_bandwidth: design.damping() / (TAU * rho(nu).sqrt()),
    })
}

/// Gain with every slot tuned to `f_t_star`, evaluated at `f`.
pub fn uniform_gain(design: &DmaDesign, phi: f64, f_t_star: f64, f: f64) -> f64 {
    let w = slot_weight(design.damping(), f_t_star, f);
    (w * channel_entries(design, phi, f, false).iter().sum::<Complex64>()).norm_sqr()
}

fn bisect_crossing<F: Fn(f64) -> f64>(gain: &F, threshold: f64, inside: f64, outside: f64) -> Result<f64> {
    if gain(outside) >= threshold {
        return Err(Error::Internal("cutoff not bracketed".into()));
    }
    let (mut a, mut b) = (inside, outside);
    while (b - a).abs() > CUTOFF_TOLERANCE_HZ {
        let m = 0.5 * (a + b);
        if gain(m) >= threshold {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// `S(φ, f)²`, the closed form of [`array_gain`].
pub fn array_gain_closed_form(design: &DmaDesign, phi: f64, f: f64) -> f64 {
    dirichlet_kernel(design, phi, f).powi(2)
}
