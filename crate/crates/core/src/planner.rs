//! Operating-frequency selection and waveguide design rules.

use serde::{Deserialize, Serialize};

use crate::channel::{dirichlet, INTEGER_SNAP};
use crate::error::{domain, Error, Result};
use crate::model::{DmaDesign, SPEED_OF_LIGHT};

/// Convergence tolerance of the lobe search, in units of `p`.
pub const P_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub f_t_star: f64,
    pub p_star: f64,
    /// `(N + |S(p*)|)² / 4`.
    pub gain: f64,
    /// True when an integer `p` was reachable inside the band.
    pub integer_case: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorDesign {
    pub phi_lower: f64,
    pub phi_upper: f64,
    pub n_g_star: f64,
    pub d_y_star: f64,
    pub p_star_choice: u32,
}

/// Coverage half-angle, with a flag set when the arcsin argument exceeded 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub angle: f64,
    pub saturated: bool,
}

/// Band limits of `p` at azimuth `phi`.
pub fn p_limits(design: &DmaDesign, phi: f64) -> (f64, f64) {
    let scale = design.spacing() * (design.refractive_index() + phi.sin()) / SPEED_OF_LIGHT;
    (design.f_min() * scale, design.f_max() * scale)
}

/// Frequency at which the normalized product equals `p` for azimuth `phi`.
pub fn frequency_for_product(design: &DmaDesign, phi: f64, p: f64) -> f64 {
    p * SPEED_OF_LIGHT / (design.spacing() * (phi.sin() + design.refractive_index()))
}

/// Gain-maximizing operating frequency for azimuth `phi`.
///
/// If an integer lies in `[p_min, p_max]` the smallest one is used and the
/// gain is `N²`. Otherwise `|S(p)|` is maximized over the band by a
/// golden-section search on every kernel lobe that meets the interval.
pub fn optimal_operating_freq(design: &DmaDesign, phi: f64) -> Result<OperatingPoint> {
    if design.refractive_index() + phi.sin() <= 0.0 {
        return Err(domain("phi", phi, "n_g + sin(phi) > 0"));
    }
    let n = design.n_elements();
    let (p_min, p_max) = p_limits(design, phi);
    if p_min > p_max {
        return Err(Error::Internal(format!("p_min {p_min} > p_max {p_max}")));
    }

    let candidate = (p_min - INTEGER_SNAP).ceil().max(1.0);
    if candidate <= p_max + INTEGER_SNAP {
        let f = frequency_for_product(design, phi, candidate).clamp(design.f_min(), design.f_max());
        return Ok(OperatingPoint {
            f_t_star: f,
            p_star: candidate,
            gain: (n * n) as f64,
            integer_case: true,
        });
    }

    let p_star = max_kernel_in(n, p_min, p_max);
    let s = dirichlet(n, p_star);
    let f = frequency_for_product(design, phi, p_star).clamp(design.f_min(), design.f_max());
    Ok(OperatingPoint {
        f_t_star: f,
        p_star,
        gain: 0.25 * (n as f64 + s.abs()).powi(2),
        integer_case: false,
    })
}

/// Argmax of `|S(p)|` over `[lo, hi]`; ties go to the smaller `p`.
pub(crate) fn max_kernel_in(n: usize, lo: f64, hi: f64) -> f64 {
    let objective = |p: f64| dirichlet(n, p).abs();
    let mut best = (lo, objective(lo));
    let mut consider = |p: f64| {
        let v = objective(p);
        if v > best.1 || (v == best.1 && p < best.0) {
            best = (p, v);
        }
    };
    consider(hi);

    // |S| is unimodal between consecutive nulls at multiples of 1/N.
    let width = 1.0 / n as f64;
    let first = (lo / width).floor() as i64;
    let last = (hi / width).ceil() as i64;
    for j in first..last {
        let a = (j as f64 * width).max(lo);
        let b = ((j + 1) as f64 * width).min(hi);
        if b > a {
            consider(golden_section_max(objective, a, b, P_TOLERANCE));
        }
    }
    best.0
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * b.abs().max(a.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

/// Azimuth at which the optimal frequency (with `p = 1`) equals `f_c`.
pub fn crossover_angle(design: &DmaDesign, f_c: f64) -> Result<f64> {
    let argument = SPEED_OF_LIGHT / (f_c * design.spacing()) - design.refractive_index();
    if !(-1.0..=1.0).contains(&argument) {
        return Err(Error::NoCrossover { argument });
    }
    Ok(argument.asin())
}

/// Refractive index and slot spacing such that every azimuth in
/// `[phi_lower, phi_upper]` reaches gain `N²` inside `[f_min, f_max]` with
/// product `p_star`.
pub fn design_sector(
    phi_lower: f64,
    phi_upper: f64,
    f_min: f64,
    f_max: f64,
    p_star: u32,
) -> Result<SectorDesign> {
    if !(f_min > 0.0 && f_min < f_max) {
        return Err(domain("f_min", f_min, "0 < f_min < f_max"));
    }
    if !(phi_lower < phi_upper) {
        return Err(domain("phi_lower", phi_lower, "phi_lower < phi_upper"));
    }
    if !(phi_lower > -std::f64::consts::PI && phi_upper < std::f64::consts::PI) {
        return Err(domain("phi_upper", phi_upper, "sector within (-pi, pi)"));
    }
    if p_star == 0 {
        return Err(domain("p_star", 0.0, "a positive integer"));
    }
    let (s_lo, s_up) = (phi_lower.sin(), phi_upper.sin());
    if !(s_up > s_lo) {
        return Err(Error::InfeasibleDesign(
            "sin(phi_upper) must exceed sin(phi_lower)".into(),
        ));
    }
    let n_g_star = 0.5 * (s_up - s_lo) * (f_max + f_min) / (f_max - f_min) - 0.5 * (s_up + s_lo);
    let d_y_star =
        SPEED_OF_LIGHT * p_star as f64 * (f_max - f_min) / ((s_up - s_lo) * f_min * f_max);
    if n_g_star + s_lo <= 0.0 {
        return Err(Error::InfeasibleDesign(format!(
            "n_g* = {n_g_star} does not keep n_g + sin(phi) positive"
        )));
    }
    Ok(SectorDesign {
        phi_lower,
        phi_upper,
        n_g_star,
        d_y_star,
        p_star_choice: p_star,
    })
}

/// Half-angle of the full-gain sector for a refractive index cap and tuning
/// range around `f_c`.
pub fn max_coverage_angle(n_g_max: f64, tuning_range: f64, f_c: f64) -> Result<Coverage> {
    if !(n_g_max > 0.0 && tuning_range >= 0.0 && f_c > 0.0) {
        return Err(domain("tuning_range", tuning_range, "n_g_max > 0, T_r >= 0, f_c > 0"));
    }
    let argument = n_g_max * tuning_range / (2.0 * f_c);
    if argument > 1.0 {
        return Ok(Coverage {
            angle: std::f64::consts::FRAC_PI_2,
            saturated: true,
        });
    }
    Ok(Coverage {
        angle: argument.asin(),
        saturated: false,
    })
}
