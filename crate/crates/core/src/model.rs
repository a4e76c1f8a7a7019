//! Lorentzian slot model of a single dynamic metasurface waveguide.
//!
//! Each radiating slot behaves as a magnetic dipole whose polarizability
//! follows a Lorentzian resonance. Tuning the resonant frequency moves the
//! normalized weight along a circle of radius 1/2 centred at `-j/2`, so
//! phase and magnitude are coupled. The shifted phase `psi_tilde` (a full
//! 2π parameterization of that circle) is what the optimizers work with.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Speed of light, m/s. Rounded value used throughout the model.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;
/// Free-space impedance, ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730_313_668;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Distance from the tan pole below which the resonance mapping is rejected.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// Immutable physical description of one waveguide.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmaDesign {
    n_elements: usize,
    spacing: f64,
    refractive_index: f64,
    damping: f64,
    coupling: f64,
    f_min: f64,
    f_max: f64,
    attenuation: Option<f64>,
}

impl DmaDesign {
    /// `damping` is the Lorentzian Γ (so that Q(f) = 2πf/Γ), `coupling` the
    /// factor F in m³, and `[f_min, f_max]` the tunable operating band.
    pub fn new(
        n_elements: usize,
        spacing: f64,
        refractive_index: f64,
        damping: f64,
        coupling: f64,
        f_min: f64,
        f_max: f64,
    ) -> Result<Self> {
        if n_elements == 0 {
            return Err(domain("n_elements", 0.0, "at least one element"));
        }
        positive("spacing", spacing)?;
        positive("damping", damping)?;
        positive("coupling", coupling)?;
        positive("f_min", f_min)?;
        positive("f_max", f_max)?;
        if !(refractive_index.is_finite() && refractive_index >= 1.0) {
            return Err(domain("refractive_index", refractive_index, ">= 1"));
        }
        if f_min >= f_max {
            return Err(domain("f_min", f_min, "strictly below f_max"));
        }
        Ok(Self {
            n_elements,
            spacing,
            refractive_index,
            damping,
            coupling,
            f_min,
            f_max,
            attenuation: None,
        })
    }

    /// Reference waveguide: 8 slots, 12–18 GHz band designed for a ±30°
    /// sector (n_g = 2.5, d_y = λ_c / 2.4) and Q = 50 at 15 GHz.
    pub fn reference() -> Self {
        let f_c = 15e9;
        let lambda_c = SPEED_OF_LIGHT / f_c;
        Self::new(8, lambda_c / 2.4, 2.5, TAU * f_c / 50.0, 1e-9, 12e9, 18e9)
            .expect("reference design is valid")
    }

    pub fn with_attenuation(mut self, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(domain("attenuation", alpha, ">= 0"));
        }
        self.attenuation = Some(alpha);
        Ok(self)
    }

    pub fn with_elements(mut self, n_elements: usize) -> Result<Self> {
        if n_elements == 0 {
            return Err(domain("n_elements", 0.0, "at least one element"));
        }
        self.n_elements = n_elements;
        Ok(self)
    }

    pub fn with_band(self, f_min: f64, f_max: f64) -> Result<Self> {
        let mut design = Self::new(
            self.n_elements,
            self.spacing,
            self.refractive_index,
            self.damping,
            self.coupling,
            f_min,
            f_max,
        )?;
        design.attenuation = self.attenuation;
        Ok(design)
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn refractive_index(&self) -> f64 {
        self.refractive_index
    }
    pub fn damping(&self) -> f64 {
        self.damping
    }
    pub fn coupling(&self) -> f64 {
        self.coupling
    }
    pub fn f_min(&self) -> f64 {
        self.f_min
    }
    pub fn f_max(&self) -> f64 {
        self.f_max
    }
    pub fn attenuation(&self) -> Option<f64> {
        self.attenuation
    }
    pub fn center_frequency(&self) -> f64 {
        0.5 * (self.f_min + self.f_max)
    }
    pub fn tuning_range(&self) -> f64 {
        self.f_max - self.f_min
    }

    /// Quality factor at the frequency of use.
    pub fn quality_factor(&self, f: f64) -> f64 {
        TAU * f / self.damping
    }
}

/// Resonant frequencies currently programmed into the slots, Hz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonantConfig(Vec<f64>);

impl ResonantConfig {
    pub fn new(f_r: Vec<f64>) -> Result<Self> {
        for &f in &f_r {
            positive("f_r", f)?;
        }
        Ok(Self(f_r))
    }

    /// Every slot resonating at `f_r`.
    pub fn uniform(n: usize, f_r: f64) -> Result<Self> {
        Self::new(vec![f_r; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn check_len(&self, design: &DmaDesign) -> Result<()> {
        if self.0.len() != design.n_elements {
            return Err(Error::LengthMismatch {
                expected: design.n_elements,
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(domain(name, value, "finite and > 0"))
    }
}

/// Lorentzian magnetic polarizability of a slot resonating at `f_r` driven
/// at `f`, in m³.
pub fn polarizability(design: &DmaDesign, f_r: f64, f: f64) -> Result<Complex64> {
    positive("f", f)?;
    positive("f_r", f_r)?;
    let num = design.coupling * TAU * f * f;
    let den = Complex64::new(TAU * (f_r * f_r - f * f), design.damping * f);
    Ok(num / den)
}

/// Argument of the polarizability, always in `[-π, 0]`.
pub fn psi_angle(design: &DmaDesign, f_r: f64, f: f64) -> Result<f64> {
    positive("f", f)?;
    positive("f_r", f_r)?;
    Ok(lorentz_phase(design.damping, f_r, f))
}

#[inline]
pub(crate) fn lorentz_phase(damping: f64, f_r: f64, f: f64) -> f64 {
    (-damping * f).atan2(TAU * (f_r * f_r - f * f))
}

/// Dimensionless slot weight `-sin(ψ) e^{jψ}`.
pub fn beamformer_weight(design: &DmaDesign, f_r: f64, f: f64) -> Result<Complex64> {
    Ok(weight_from_phase(psi_angle(design, f_r, f)?))
}

#[inline]
pub(crate) fn weight_from_phase(psi: f64) -> Complex64 {
    -psi.sin() * Complex64::from_polar(1.0, psi)
}

#[inline]
pub(crate) fn slot_weight(damping: f64, f_r: f64, f: f64) -> Complex64 {
    weight_from_phase(lorentz_phase(damping, f_r, f))
}

/// Map `ψ ∈ [-π, 0]` to the shifted phase `ψ̃ = 2ψ + π/2 ∈ [-3π/2, π/2]`.
pub fn shift_origin(psi: f64) -> Result<f64> {
    if !(-PI..=0.0).contains(&psi) {
        return Err(domain("psi", psi, "within [-pi, 0]"));
    }
    Ok(2.0 * psi + FRAC_PI_2)
}

/// Inverse of [`shift_origin`].
pub fn unshift_origin(psi_tilde: f64) -> Result<f64> {
    if !(-1.5 * PI..=FRAC_PI_2).contains(&psi_tilde) {
        return Err(domain("psi_tilde", psi_tilde, "within [-3pi/2, pi/2]"));
    }
    Ok(0.5 * psi_tilde - FRAC_PI_4)
}

/// Resonant frequency that realises shifted phase `psi_tilde` at `f_t`.
///
/// Rejects phases within [`POLE_TOLERANCE`] of the poles at `-3π/2` and
/// `π/2`, and phases that would require an imaginary resonance.
pub fn resonant_from_shifted(design: &DmaDesign, psi_tilde: f64, f_t: f64) -> Result<f64> {
    positive("f_t", f_t)?;
    let arg = FRAC_PI_4 + 0.5 * psi_tilde;
    if !psi_tilde.is_finite() || arg.abs() >= FRAC_PI_2 - POLE_TOLERANCE {
        return Err(Error::Singularity { psi_tilde });
    }
    let f_r_squared = f_t * f_t + design.damping * f_t / TAU * arg.tan();
    if f_r_squared <= 0.0 {
        return Err(Error::InfeasibleElement {
            index: 0,
            f_r_squared,
        });
    }
    Ok(f_r_squared.sqrt())
}
