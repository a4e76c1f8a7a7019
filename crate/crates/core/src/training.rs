//! Stacked-waveguide array and single-shot beam training.
//!
//! The `N_z` waveguides are split into `L` groups. During training each group
//! is tuned to the operating frequency of one sector, so a single OFDM pilot
//! symbol probes every sector at once and the strongest subcarrier reveals
//! the azimuth.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{channel_entries, dirichlet};
use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::model::{slot_weight, DmaDesign, ResonantConfig, SPEED_OF_LIGHT};
use crate::planner::optimal_operating_freq;

/// Default number of pilot subcarriers.
pub const DEFAULT_PILOTS: usize = 256;
/// Upper bound on the number of sectors the codebook recursion may emit.
pub const MAX_SECTORS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayLayout {
    pub n_dmas: usize,
    pub per_dma: DmaDesign,
    pub groups: usize,
}

impl ArrayLayout {
    pub fn new(n_dmas: usize, per_dma: DmaDesign, groups: usize) -> Result<Self> {
        if n_dmas == 0 {
            return Err(domain("n_dmas", 0.0, "at least one waveguide"));
        }
        if groups == 0 || n_dmas % groups != 0 {
            return Err(domain("groups", groups as f64, "a divisor of n_dmas"));
        }
        Ok(Self {
            n_dmas,
            per_dma,
            groups,
        })
    }

    /// Waveguides per group, `N_z / L`.
    pub fn group_size(&self) -> usize {
        self.n_dmas / self.groups
    }

    /// `N_z² N_y²`.
    pub fn max_gain(&self) -> f64 {
        ((self.n_dmas * self.per_dma.n_elements()) as f64).powi(2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    /// Sector peak azimuths in increasing order.
    pub sector_angles: Vec<f64>,
    pub sector_freqs: Vec<f64>,
    pub delta: f64,
    /// The `Ψ_δ` value the recursion used.
    pub psi_delta: f64,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.sector_angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sector_angles.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CodebookOptions {
    /// Pin the number of sectors; `None` stops as soon as `φ_max` is covered.
    pub sectors: Option<usize>,
    /// Round `Ψ_δ` to this many decimals before the recursion.
    pub psi_decimals: Option<u32>,
}

impl CodebookOptions {
    /// Three-decimal `Ψ_δ`, automatic sector count.
    pub fn rounded() -> Self {
        Self {
            sectors: None,
            psi_decimals: Some(3),
        }
    }

    pub fn exact() -> Self {
        Self {
            sectors: None,
            psi_decimals: None,
        }
    }

    pub fn with_sectors(mut self, sectors: usize) -> Self {
        self.sectors = Some(sectors);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingResult {
    pub k_star: usize,
    pub f_k_star: f64,
    pub phi_hat: f64,
    pub gain_at_estimate: f64,
}

/// `|Σ_m f_mᵀ h(φ, f)|²` over all waveguides of the array.
pub fn array_gain_dma(layout: &ArrayLayout, configs: &[ResonantConfig], phi: f64, f: f64) -> Result<f64> {
    if configs.len() != layout.n_dmas {
        return Err(Error::LengthMismatch {
            expected: layout.n_dmas,
            got: configs.len(),
        });
    }
    let design = &layout.per_dma;
    let h = channel_entries(design, phi, f, false);
    let mut total = Complex64::new(0.0, 0.0);
    for config in configs {
        config.check_len(design)?;
        total += config
            .as_slice()
            .iter()
            .zip(&h)
            .map(|(&f_r, h)| slot_weight(design.damping(), f_r, f) * h)
            .sum::<Complex64>();
    }
    Ok(total.norm_sqr())
}

/// Group `ℓ` (waveguides `ℓQ .. (ℓ+1)Q`) resonates at `sector_freqs[ℓ]`.
pub fn training_config(layout: &ArrayLayout, codebook: &Codebook) -> Result<Vec<ResonantConfig>> {
    if codebook.len() != layout.groups {
        return Err(Error::LengthMismatch {
            expected: layout.groups,
            got: codebook.len(),
        });
    }
    let q = layout.group_size();
    (0..layout.n_dmas)
        .map(|m| ResonantConfig::uniform(layout.per_dma.n_elements(), codebook.sector_freqs[m / q]))
        .collect()
}

/// `k` uniformly spaced pilots on `[f_min, f_max]`, endpoints included.
pub fn pilot_grid(f_min: f64, f_max: f64, k: usize) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(domain("k_tr", k as f64, ">= 2"));
    }
    if !(f_min > 0.0 && f_min < f_max) {
        return Err(domain("f_min", f_min, "0 < f_min < f_max"));
    }
    let step = (f_max - f_min) / (k - 1) as f64;
    Ok((0..k)
        .map(|i| if i == k - 1 { f_max } else { f_min + step * i as f64 })
        .collect())
}

/// Merges extra frequencies into a pilot grid, sorted and deduplicated.
pub fn pilot_grid_with(mut grid: Vec<f64>, extra: &[f64]) -> Vec<f64> {
    grid.extend_from_slice(extra);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Azimuth estimate from the strongest subcarrier.
pub fn estimate_angle(design: &DmaDesign, f_k_star: f64) -> Result<f64> {
    let argument = SPEED_OF_LIGHT / (design.spacing() * f_k_star) - design.refractive_index();
    if !(-1.0..=1.0).contains(&argument) {
        return Err(Error::InvalidEstimate { argument });
    }
    Ok(argument.asin())
}

/// Noise-free single-shot training: the strongest pilot (lowest index on
/// ties) gives the estimate.
pub fn probe(
    layout: &ArrayLayout,
    codebook: &Codebook,
    phi_true: f64,
    pilots: &[f64],
    exec: Exec,
) -> Result<TrainingResult> {
    let configs = training_config(layout, codebook)?;
    let gains = exec.try_map(pilots, |&f| array_gain_dma(layout, &configs, phi_true, f))?;
    let (k_star, _) = Exec::Sequential
        .argmax_range(0..gains.len(), |k| gains[k])
        .ok_or_else(|| domain("pilots", 0.0, "a non-empty pilot grid"))?;
    let f_k_star = pilots[k_star];
    let phi_hat = estimate_angle(&layout.per_dma, f_k_star)?;
    Ok(TrainingResult {
        k_star,
        f_k_star,
        phi_hat,
        gain_at_estimate: gain_at_estimate(layout, phi_true, phi_hat),
    })
}

/// `N_z² (sin(πN_yΨ)/sin(πΨ))²` with `Ψ = (n_g + sin φ)/(n_g + sin φ̂)`.
pub fn gain_at_estimate(layout: &ArrayLayout, phi_true: f64, phi_hat: f64) -> f64 {
    let n_g = layout.per_dma.refractive_index();
    let psi = (n_g + phi_true.sin()) / (n_g + phi_hat.sin());
    let n_z = layout.n_dmas as f64;
    n_z * n_z * dirichlet(layout.per_dma.n_elements(), psi).powi(2)
}

/// Mainlobe half-width where the normalized squared kernel stays `≥ δ`.
pub fn psi_delta(n_y: usize, delta: f64) -> Result<f64> {
    if n_y == 0 {
        return Err(domain("n_y", 0.0, ">= 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(domain("delta", delta, "0 < delta < 1"));
    }
    if n_y == 1 {
        // flat kernel: never drops below δ within the period
        return Ok(1.0);
    }
    let n = n_y as f64;
    let normalized = |x: f64| (dirichlet(n_y, x) / n).powi(2);
    let (mut lo, mut hi) = (0.0, 1.0 / n);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normalized(mid) >= delta {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Range of estimates `φ̂` for which the gain at `phi_true` stays above
/// `δ · N_z² N_y²`.
pub fn allowed_estimate_interval(phi_true: f64, n_g: f64, psi: f64) -> Result<(f64, f64)> {
    if !(psi > 0.0 && psi < 1.0) {
        return Err(domain("psi_delta", psi, "0 < psi < 1"));
    }
    let base = n_g + phi_true.sin();
    let lower = base / (1.0 + psi) - n_g;
    let upper = base / (1.0 - psi) - n_g;
    for argument in [lower, upper] {
        if !(-1.0..=1.0).contains(&argument) {
            return Err(Error::SectorEdge { argument });
        }
    }
    Ok((lower.asin(), upper.asin()))
}

/// Sequential codebook covering `[-phi_max, phi_max]` with gain floor `δ`.
pub fn build_codebook(
    layout: &ArrayLayout,
    phi_max: f64,
    delta: f64,
    options: CodebookOptions,
) -> Result<Codebook> {
    let design = &layout.per_dma;
    if !(phi_max > 0.0 && phi_max < std::f64::consts::FRAC_PI_2) {
        return Err(domain("phi_max", phi_max, "0 < phi_max < pi/2"));
    }
    let exact = psi_delta(design.n_elements(), delta)?;
    let psi = match options.psi_decimals {
        Some(d) => {
            let scale = 10f64.powi(d as i32);
            (exact * scale).round() / scale
        }
        None => exact,
    };
    let phi_max_deg = phi_max.to_degrees();
    let infeasible = |reason: String| Error::CoverageInfeasible {
        phi_max_deg,
        reason,
    };
    if !(psi > 0.0 && psi < 1.0) {
        return Err(infeasible(format!("psi_delta = {psi} leaves no sector width")));
    }

    let n_g = design.refractive_index();
    let ratio = (1.0 + psi) / (1.0 - psi);
    let target = n_g + phi_max.sin();
    let covered = |s: f64| (n_g + s) / (1.0 - psi) >= target;

    let mut sines = vec![((n_g - phi_max.sin()) * (1.0 + psi)) - n_g];
    loop {
        let last = *sines.last().expect("non-empty");
        if !(-1.0..=1.0).contains(&last) {
            return Err(infeasible(format!(
                "sector {} needs arcsin({last}) before covering the sector",
                sines.len()
            )));
        }
        let done = match options.sectors {
            Some(l) => sines.len() == l,
            None => covered(last),
        };
        if done {
            break;
        }
        if sines.len() >= MAX_SECTORS {
            return Err(infeasible(format!("more than {MAX_SECTORS} sectors required")));
        }
        sines.push((last + n_g) * ratio - n_g);
    }
    if !covered(*sines.last().expect("non-empty")) {
        return Err(infeasible(format!("{} sectors do not reach +phi_max", sines.len())));
    }

    let sector_angles: Vec<f64> = sines.iter().map(|s| s.asin()).collect();
    let sector_freqs = sector_angles
        .iter()
        .map(|&phi| optimal_operating_freq(design, phi).map(|op| op.f_t_star))
        .collect::<Result<Vec<_>>>()?;
    Ok(Codebook {
        sector_angles,
        sector_freqs,
        delta,
        psi_delta: psi,
    })
}

/// Converts a threshold in dB below the peak into a linear factor.
pub fn delta_from_db(db: f64) -> f64 {
    10f64.powf(-db / 10.0)
}
