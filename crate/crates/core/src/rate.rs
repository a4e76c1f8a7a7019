//! OFDM link budget and achievable rate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exec::Exec;
use crate::gain::{gain_ttd, realizable_config, solve_ttd};
use crate::model::{ResonantConfig, BOLTZMANN, SPEED_OF_LIGHT};
use crate::planner::optimal_operating_freq;
use crate::training::{array_gain_dma, probe, ArrayLayout, Codebook};

/// Receiver noise temperature in kelvin used by default.
pub const REFERENCE_NOISE_TEMP: f64 = 290.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// Total transmit power in watts, spread flat over the band.
    pub tx_power: f64,
    pub distance: f64,
    pub noise_temp: f64,
    pub bandwidth: f64,
    pub n_subcarriers: usize,
    /// Band center `f_t`.
    pub center: f64,
}

impl LinkBudget {
    pub fn new(
        tx_power: f64,
        distance: f64,
        noise_temp: f64,
        bandwidth: f64,
        n_subcarriers: usize,
        center: f64,
    ) -> Result<Self> {
        let budget = Self {
            tx_power,
            distance,
            noise_temp,
            bandwidth,
            n_subcarriers,
            center,
        };
        budget.validate()?;
        Ok(budget)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tx_power", self.tx_power),
            ("distance", self.distance),
            ("noise_temp", self.noise_temp),
            ("bandwidth", self.bandwidth),
            ("center", self.center),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(domain(name, v, "finite and > 0"));
            }
        }
        if self.n_subcarriers == 0 {
            return Err(domain("n_subcarriers", 0.0, ">= 1"));
        }
        if self.center - 0.5 * self.bandwidth <= 0.0 {
            return Err(domain("bandwidth", self.bandwidth, "band must stay above 0 Hz"));
        }
        Ok(())
    }

    pub fn with_center(&self, center: f64) -> Self {
        Self {
            center,
            ..self.clone()
        }
    }

    pub fn with_bandwidth(&self, bandwidth: f64) -> Self {
        Self {
            bandwidth,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    /// bits/s
    pub rate: f64,
    pub per_subcarrier_snr: Vec<f64>,
}

/// Centered subcarrier bins `f_t − B/2 + (k − ½) B/K_d`, `k = 1..K_d`.
pub fn subcarrier_grid(budget: &LinkBudget) -> Vec<f64> {
    let k_d = budget.n_subcarriers as f64;
    let spacing = budget.bandwidth / k_d;
    (1..=budget.n_subcarriers)
        .map(|k| budget.center - 0.5 * budget.bandwidth + (k as f64 - 0.5) * spacing)
        .collect()
}

/// Received PSD in W/Hz for beamforming gain `gain` at frequency `f`.
pub fn received_psd(budget: &LinkBudget, gain: f64, f: f64) -> f64 {
    let lambda = SPEED_OF_LIGHT / f;
    (lambda / (4.0 * PI * budget.distance)).powi(2) * budget.tx_power / budget.bandwidth * gain
}

/// Rate for a given per-subcarrier gain profile.
pub fn rate_from_gains<F: Fn(f64) -> Result<f64>>(budget: &LinkBudget, gain: F) -> Result<RateReport> {
    let n0 = BOLTZMANN * budget.noise_temp;
    let per_subcarrier_snr = subcarrier_grid(budget)
        .into_iter()
        .map(|f| gain(f).map(|g| received_psd(budget, g, f) / n0))
        .collect::<Result<Vec<_>>>()?;
    let rate = budget.bandwidth / budget.n_subcarriers as f64
        * per_subcarrier_snr.iter().map(|s| (1.0 + s).log2()).sum::<f64>();
    Ok(RateReport {
        rate,
        per_subcarrier_snr,
    })
}

/// Rate of the DMA array under the given per-waveguide resonances.
pub fn achievable_rate(
    budget: &LinkBudget,
    layout: &ArrayLayout,
    configs: &[ResonantConfig],
    phi: f64,
) -> Result<RateReport> {
    rate_from_gains(budget, |f| array_gain_dma(layout, configs, phi, f))
}

/// Rate of a true-time-delay array with the same geometry.
pub fn rate_ttd(budget: &LinkBudget, layout: &ArrayLayout, phi: f64) -> Result<RateReport> {
    let spacing = layout.per_dma.spacing();
    let ttd = solve_ttd(layout.per_dma.n_elements(), spacing, phi);
    let n_z = layout.n_dmas as f64;
    rate_from_gains(budget, |f| Ok(n_z * n_z * gain_ttd(&ttd, spacing, phi, f)))
}

/// Inputs shared by the four strategy comparisons.
#[derive(Clone, Debug)]
pub struct RateSetup {
    pub layout: ArrayLayout,
    pub codebook: Codebook,
    pub pilots: Vec<f64>,
    /// Center is ignored; each strategy sets its own.
    pub budget: LinkBudget,
}

/// Rates in bits/s for one azimuth or averaged over a grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StrategyRates {
    /// Band centered at `f_c`, resonances optimal there.
    pub fixed: f64,
    /// Band centered at the trained pilot, resonances from the estimate.
    pub trained: f64,
    /// Band centered at `f_t*(φ)` with the true azimuth.
    pub perfect: f64,
    pub ttd: f64,
}

impl StrategyRates {
    fn add(self, o: Self) -> Self {
        Self {
            fixed: self.fixed + o.fixed,
            trained: self.trained + o.trained,
            perfect: self.perfect + o.perfect,
            ttd: self.ttd + o.ttd,
        }
    }

    fn scale(self, s: f64) -> Self {
        Self {
            fixed: self.fixed * s,
            trained: self.trained * s,
            perfect: self.perfect * s,
            ttd: self.ttd * s,
        }
    }
}

fn uniform(layout: &ArrayLayout, config: ResonantConfig) -> Vec<ResonantConfig> {
    vec![config; layout.n_dmas]
}

/// All four strategies at azimuth `phi`.
pub fn strategy_rates(setup: &RateSetup, phi: f64) -> Result<StrategyRates> {
    let layout = &setup.layout;
    let design = &layout.per_dma;

    let f_c = design.center_frequency();
    let (fixed_cfg, _) = realizable_config(design, phi, f_c)?;
    let fixed = achievable_rate(&setup.budget.with_center(f_c), layout, &uniform(layout, fixed_cfg), phi)?;

    let f_star = optimal_operating_freq(design, phi)?.f_t_star;
    let (perfect_cfg, _) = realizable_config(design, phi, f_star)?;
    let perfect_budget = setup.budget.with_center(f_star);
    let perfect = achievable_rate(&perfect_budget, layout, &uniform(layout, perfect_cfg), phi)?;
    let ttd = rate_ttd(&perfect_budget, layout, phi)?;

    let trained = probe(layout, &setup.codebook, phi, &setup.pilots, Exec::Sequential)?;
    let (trained_cfg, _) = realizable_config(design, trained.phi_hat, trained.f_k_star)?;
    let trained = achievable_rate(
        &setup.budget.with_center(trained.f_k_star),
        layout,
        &uniform(layout, trained_cfg),
        phi,
    )?;

    Ok(StrategyRates {
        fixed: fixed.rate,
        trained: trained.rate,
        perfect: perfect.rate,
        ttd: ttd.rate,
    })
}

/// Mean of [`strategy_rates`] over `angles`.
pub fn average_strategy_rates(setup: &RateSetup, angles: &[f64], exec: Exec) -> Result<StrategyRates> {
    if angles.is_empty() {
        return Err(domain("angles", 0.0, "at least one azimuth"));
    }
    let per_angle = exec.try_map(angles, |&phi| strategy_rates(setup, phi))?;
    Ok(per_angle
        .into_iter()
        .fold(StrategyRates::default(), StrategyRates::add)
        .scale(1.0 / angles.len() as f64))
}

/// `count` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DmaDesign;
    use crate::training::{build_codebook, delta_from_db, pilot_grid, pilot_grid_with, CodebookOptions};

    fn budget(bandwidth: f64, k_d: usize, center: f64) -> LinkBudget {
        LinkBudget::new(0.25, 500.0, REFERENCE_NOISE_TEMP, bandwidth, k_d, center).unwrap()
    }

    fn layout() -> ArrayLayout {
        ArrayLayout::new(4, DmaDesign::reference(), 4).unwrap()
    }

    fn setup(bandwidth: f64) -> RateSetup {
        let layout = layout();
        let codebook = build_codebook(&layout, 30f64.to_radians(), delta_from_db(3.0), CodebookOptions::rounded()).unwrap();
        let pilots = pilot_grid_with(pilot_grid(12e9, 18e9, 256).unwrap(), &codebook.sector_freqs);
        RateSetup {
            layout,
            codebook,
            pilots,
            budget: budget(bandwidth, 64, 15e9),
        }
    }

    #[test]
    fn subcarrier_grid_examples() {
        assert_eq!(subcarrier_grid(&budget(300e6, 1, 16.43e9)), vec![16.43e9]);
        let b = budget(300e6, 64, 16.43e9);
        let g = subcarrier_grid(&b);
        assert_eq!(g.len(), 64);
        assert!((g[0] - (16.43e9 - 150e6 + 300e6 / 128.0)).abs() < 1e-3);
        let mean = g.iter().sum::<f64>() / 64.0;
        assert!((mean - 16.43e9).abs() < 1e-3);
    }

    #[test]
    fn received_psd_examples() {
        let b = budget(300e6, 64, 16.43e9);
        assert_eq!(received_psd(&b, 0.0, 16.43e9), 0.0);
        let far = LinkBudget { distance: 1000.0, ..b.clone() };
        let ratio = received_psd(&far, 7.0, 16e9) / received_psd(&b, 7.0, 16e9);
        assert!((ratio - 0.25).abs() < 1e-12);
        let lambda = SPEED_OF_LIGHT / 16.43e9;
        let expected = (lambda / (4.0 * PI * 500.0)).powi(2) * 0.25 / 300e6 * 1024.0;
        assert!((received_psd(&b, 1024.0, 16.43e9) - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn single_subcarrier_hand_computation() {
        let l = layout();
        let phi = (-18f64).to_radians();
        let f = optimal_operating_freq(&l.per_dma, phi).unwrap().f_t_star;
        let b = budget(300e6, 1, f);
        let cfg = vec![ResonantConfig::uniform(8, f).unwrap(); 4];
        let r = achievable_rate(&b, &l, &cfg, phi).unwrap();
        let lambda = SPEED_OF_LIGHT / f;
        let snr = (lambda / (4.0 * PI * 500.0)).powi(2) * 0.25 / 300e6 * 1024.0 / (BOLTZMANN * 290.0);
        assert!((r.per_subcarrier_snr[0] - snr).abs() <= 1e-9 * snr);
        assert!((r.rate - 300e6 * (1.0 + snr).log2()).abs() <= 1e-9 * r.rate);
    }

    #[test]
    fn rate_vanishes_with_power_and_grows_with_it() {
        let l = layout();
        let cfg = vec![ResonantConfig::uniform(8, 15e9).unwrap(); 4];
        let mut last = 0.0;
        for p in [1e-30, 1e-6, 1e-3, 0.25, 1.0] {
            let b = LinkBudget { tx_power: p, ..budget(300e6, 16, 15e9) };
            let r = achievable_rate(&b, &l, &cfg, 0.1).unwrap().rate;
            assert!(r >= last);
            last = r;
        }
        let tiny = LinkBudget { tx_power: 1e-30, ..budget(300e6, 16, 15e9) };
        assert!(achievable_rate(&tiny, &l, &cfg, 0.1).unwrap().rate < 1e-3);
    }

    #[test]
    fn ttd_is_flat_and_closed_form() {
        let l = layout();
        let b = budget(1e9, 64, 15e9);
        let r = rate_ttd(&b, &l, 0.3).unwrap();
        let lambda_ratio = |i: usize| r.per_subcarrier_snr[i] * subcarrier_grid(&b)[i].powi(2);
        for i in 1..64 {
            assert!((lambda_ratio(i) - lambda_ratio(0)).abs() <= 1e-9 * lambda_ratio(0));
        }
        let narrow = budget(1e3, 4, 15e9);
        let flat = rate_ttd(&narrow, &l, 0.3).unwrap();
        let s = flat.per_subcarrier_snr[0];
        assert!((flat.rate - 1e3 * (1.0 + s).log2()).abs() <= 1e-6 * flat.rate);
    }

    #[test]
    fn narrowband_dma_matches_ttd() {
        let l = layout();
        let phi = 0.2;
        let f = optimal_operating_freq(&l.per_dma, phi).unwrap().f_t_star;
        let b = budget(1e3, 8, f);
        let cfg = vec![ResonantConfig::uniform(8, f).unwrap(); 4];
        let dma = achievable_rate(&b, &l, &cfg, phi).unwrap().rate;
        let ttd = rate_ttd(&b, &l, phi).unwrap().rate;
        assert!((ttd - dma) / ttd <= 1e-4);
    }

    #[test]
    fn strategy_ordering_on_reference_setup() {
        let s = setup(300e6);
        let angles = linspace(-30f64.to_radians(), 30f64.to_radians(), 31);
        let avg = average_strategy_rates(&s, &angles, Exec::default()).unwrap();
        assert!(avg.fixed <= avg.trained, "{avg:?}");
        assert!(avg.trained <= avg.perfect, "{avg:?}");
        assert!(avg.perfect <= avg.ttd, "{avg:?}");
        assert!(avg.trained >= 0.85 * avg.perfect);
        for phi in angles {
            let r = strategy_rates(&s, phi).unwrap();
            assert!(r.perfect <= r.ttd * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sequential_and_parallel_averages_agree() {
        let s = setup(100e6);
        let angles = linspace(-0.5, 0.5, 9);
        let a = average_strategy_rates(&s, &angles, Exec::Sequential).unwrap();
        let b = average_strategy_rates(&s, &angles, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn linspace_shape() {
        let v = linspace(-30.0, 30.0, 181);
        assert_eq!(v.len(), 181);
        assert_eq!((v[0], v[180]), (-30.0, 30.0));
        assert!(((v[1] - v[0]) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.5]);
    }

    #[test]
    fn budget_validation() {
        assert!(LinkBudget::new(0.0, 500.0, 290.0, 1e8, 4, 15e9).is_err());
        assert!(LinkBudget::new(0.25, 500.0, 290.0, 1e8, 0, 15e9).is_err());
        assert!(LinkBudget::new(0.25, 500.0, 290.0, 40e9, 4, 15e9).is_err());
    }
}
