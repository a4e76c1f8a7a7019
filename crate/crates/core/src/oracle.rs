//! Brute-force reference implementations for cross-checking closed forms.
//!
//! Nothing here calls into the channel, gain, planner or binary modules:
//! channel phases and Lorentzian weights are recomputed from their defining
//! formulas so that a shared bug cannot hide.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::binary::BinarySolution;
use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::model::{DmaDesign, SPEED_OF_LIGHT};

pub const MAX_GRID_ELEMENTS: usize = 4;
pub const MAX_GRID_POINTS: usize = 400;
pub const MAX_ENUMERATED_ELEMENTS: usize = 20;
pub const MIN_SCAN_RESOLUTION: usize = 100_000;

fn steering(design: &DmaDesign, phi: f64, f: f64) -> Vec<Complex64> {
    let wavenumber = TAU * f / SPEED_OF_LIGHT;
    (0..design.n_elements())
        .map(|k| {
            let path = k as f64 * design.spacing();
            let intrinsic = -design.refractive_index() * wavenumber * path;
            let extrinsic = -wavenumber * path * phi.sin();
            Complex64::new(0.0, intrinsic + extrinsic).exp()
        })
        .collect()
}

/// Normalized Lorentzian weight `Γf / (2π(f_r² − f²) + jΓf)`.
fn lorentz_weight(damping: f64, f_r: f64, f: f64) -> Complex64 {
    let gf = damping * f;
    Complex64::new(gf, 0.0) / Complex64::new(TAU * (f_r * f_r - f * f), gf)
}

/// Maximum gain over the full tensor grid of per-element resonances, each on
/// `points` geometric steps across `[f_t/1.5, 1.5 f_t]`.
///
/// All but the last element are enumerated. For the last one the best grid
/// point is found exactly: its candidate contributions lie on a circle, and
/// the distance from a fixed point to a point on a circle grows with their
/// angular separation from the antipode, so only the two angular neighbours
/// of the antipode need checking.
pub fn grid_max_gain(design: &DmaDesign, phi: f64, f_t: f64, points: usize, exec: Exec) -> Result<f64> {
    let n = design.n_elements();
    if n > MAX_GRID_ELEMENTS {
        return Err(Error::EnumerationLimit {
            n,
            limit: MAX_GRID_ELEMENTS,
        });
    }
    if !(2..=MAX_GRID_POINTS).contains(&points) {
        return Err(domain("points", points as f64, "2..=400"));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| f_t / 1.5 * 2.25f64.powf(i as f64 / (points - 1) as f64))
        .collect();
    let h = steering(design, phi, f_t);
    let table: Vec<Vec<Complex64>> = h
        .iter()
        .map(|hk| grid.iter().map(|&f_r| lorentz_weight(design.damping(), f_r, f_t) * hk).collect())
        .collect();

    let last = &table[n - 1];
    let center = Complex64::new(0.0, -0.5) * h[n - 1];
    let mut by_angle: Vec<(f64, Complex64)> = last.iter().map(|z| ((z - center).arg(), *z)).collect();
    by_angle.sort_by(|a, b| a.0.total_cmp(&b.0));
    let best_last = |partial: Complex64| -> f64 {
        let target = (-partial - center).arg() + PI;
        let target = if target > PI { target - TAU } else { target };
        let i = by_angle.partition_point(|(a, _)| *a < target);
        let m = by_angle.len();
        [i % m, (i + m - 1) % m]
            .iter()
            .map(|&j| (partial + by_angle[j].1).norm_sqr())
            .fold(0.0, f64::max)
    };

    let leading = points.pow((n - 1) as u32);
    let best = exec
        .argmax_range(0..leading, |mut code| {
            let mut partial = Complex64::new(0.0, 0.0);
            for row in table.iter().take(n - 1) {
                partial += row[code % points];
                code /= points;
            }
            best_last(partial)
        })
        .map(|(_, g)| g)
        .unwrap_or(0.0);
    Ok(best)
}

/// Largest angular gap, on the Lorentzian circle, between neighbouring
/// points of the resonance grid used by [`grid_max_gain`].
pub fn grid_phase_step(design: &DmaDesign, f_t: f64, points: usize) -> f64 {
    let mut angles: Vec<f64> = (0..points)
        .map(|i| f_t / 1.5 * 2.25f64.powf(i as f64 / (points.max(2) - 1) as f64))
        .map(|f_r| (lorentz_weight(design.damping(), f_r, f_t) + Complex64::new(0.0, 0.5)).arg())
        .collect();
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + TAU - angles[angles.len() - 1];
    angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

/// Lower bound on `grid_max_gain / G*` from rounding each optimal weight to
/// its nearest grid point: every weight moves by at most the chord
/// `sin(step/4)`, so `√G_grid ≥ √G* − N sin(step/4)`.
pub fn grid_ratio_bound(design: &DmaDesign, f_t: f64, points: usize, optimum: f64) -> f64 {
    let shift = design.n_elements() as f64 * (grid_phase_step(design, f_t, points) / 4.0).sin();
    let root = (optimum.sqrt() - shift).max(0.0);
    root * root / optimum
}

/// Argmax of `|sin(πNp)/sin(πp)|` over a uniform `p` grid spanning the band.
pub fn dense_p_scan(design: &DmaDesign, phi: f64, resolution: usize) -> Result<(f64, f64)> {
    if resolution < MIN_SCAN_RESOLUTION {
        return Err(domain("resolution", resolution as f64, ">= 1e5"));
    }
    let scale = design.spacing() * (design.refractive_index() + phi.sin()) / SPEED_OF_LIGHT;
    let (lo, hi) = (design.f_min() * scale, design.f_max() * scale);
    let n = design.n_elements() as f64;
    let kernel = |p: f64| {
        let den = (PI * p).sin();
        if den.abs() < 1e-12 {
            n
        } else {
            ((PI * n * p).sin() / den).abs()
        }
    };
    let mut best = (lo, kernel(lo));
    for i in 1..resolution {
        let p = lo + (hi - lo) * i as f64 / (resolution - 1) as f64;
        let v = kernel(p);
        if v > best.1 {
            best = (p, v);
        }
    }
    Ok(best)
}

/// Depth-first enumeration of on/off masks in lexicographic order.
pub fn enumerate_binary(design: &DmaDesign, phi: f64, f_c: f64) -> Result<BinarySolution> {
    let n = design.n_elements();
    if n > MAX_ENUMERATED_ELEMENTS {
        return Err(Error::EnumerationLimit {
            n,
            limit: MAX_ENUMERATED_ELEMENTS,
        });
    }
    let h = steering(design, phi, f_c);
    let mut best = BinarySolution {
        mask: vec![false; n],
        gain: f64::NEG_INFINITY,
    };
    let mut all = Vec::with_capacity(1 << n);
    visit(&h, &mut Vec::with_capacity(n), &mut all);
    let top = all.iter().map(|(_, g)| *g).fold(f64::NEG_INFINITY, f64::max);
    // visit order is lexicographic, so the first near-maximal mask wins
    if let Some((mask, gain)) = all.into_iter().find(|(_, g)| *g >= top * (1.0 - 1e-12)) {
        best = BinarySolution { mask, gain };
    }
    Ok(best)
}

fn visit(h: &[Complex64], mask: &mut Vec<bool>, out: &mut Vec<(Vec<bool>, f64)>) {
    if mask.len() == h.len() {
        let mut sum = Complex64::new(0.0, 0.0);
        for (on, e) in mask.iter().zip(h) {
            if *on {
                sum += e;
            }
        }
        out.push((mask.clone(), sum.norm_sqr()));
        return;
    }
    for bit in [false, true] {
        mask.push(bit);
        visit(h, mask, out);
        mask.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::solve_p4;
    use crate::gain::solve_p1a;
    use crate::planner::{crossover_angle, optimal_operating_freq};

    fn small(n: usize) -> DmaDesign {
        DmaDesign::reference().with_elements(n).unwrap()
    }

    #[test]
    fn lorentz_weight_on_circle() {
        for f_r in [10e9, 14.9e9, 15e9, 15.1e9, 30e9] {
            let w = lorentz_weight(TAU * 15e9 / 50.0, f_r, 15e9);
            assert!(((w + Complex64::new(0.0, 0.5)).norm() - 0.5).abs() < 1e-12);
        }
        assert!((lorentz_weight(1e9, 15e9, 15e9) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn single_element_grid() {
        let d = small(1);
        let g = grid_max_gain(&d, 0.1, 15e9, 200, Exec::default()).unwrap();
        assert!(g <= 1.0 + 1e-12);
        assert!(g >= grid_ratio_bound(&d, 15e9, 200, 1.0));
        // an odd grid contains f_t itself
        let g = grid_max_gain(&d, 0.1, 15e9, 201, Exec::default()).unwrap();
        assert!((g - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_elements_match_closed_form() {
        let d = small(2);
        for (phi, f) in [(0.1, 15e9), (-0.4, 13.2e9), (0.35, 16.7e9)] {
            let closed = solve_p1a(&d, phi, f).unwrap().gain;
            let grid = grid_max_gain(&d, phi, f, 200, Exec::default()).unwrap();
            assert!(grid <= closed * (1.0 + 1e-12));
            assert!(grid >= closed * grid_ratio_bound(&d, f, 200, closed), "{grid} vs {closed}");
            let fine = grid_max_gain(&d, phi, f, 400, Exec::default()).unwrap();
            assert!(fine <= closed * (1.0 + 1e-12));
            assert!(closed - fine < closed - grid + 1e-12);
        }
    }

    #[test]
    fn last_element_shortcut_matches_full_enumeration() {
        let d = small(2);
        let (phi, f, m) = (0.23, 14.4e9, 60);
        let grid: Vec<f64> = (0..m).map(|i| f / 1.5 * 2.25f64.powf(i as f64 / (m - 1) as f64)).collect();
        let h = steering(&d, phi, f);
        let mut full = 0.0f64;
        for &a in &grid {
            for &b in &grid {
                let s = lorentz_weight(d.damping(), a, f) * h[0] + lorentz_weight(d.damping(), b, f) * h[1];
                full = full.max(s.norm_sqr());
            }
        }
        let fast = grid_max_gain(&d, phi, f, m, Exec::Sequential).unwrap();
        assert!((fast - full).abs() <= 1e-12 * full);
    }

    #[test]
    fn four_elements_at_crossover() {
        let d = small(4);
        let phi_c = crossover_angle(&d, 15e9).unwrap();
        let coarse = grid_max_gain(&d, phi_c, 15e9, 40, Exec::default()).unwrap();
        let g = grid_max_gain(&d, phi_c, 15e9, 81, Exec::default()).unwrap();
        assert!(coarse < 16.0 && coarse >= 16.0 * grid_ratio_bound(&d, 15e9, 40, 16.0));
        assert!((g - 16.0).abs() < 1e-9, "{g}");
    }

    #[test]
    fn phase_step_shrinks_with_points() {
        let d = small(2);
        let coarse = grid_phase_step(&d, 15e9, 50);
        let fine = grid_phase_step(&d, 15e9, 400);
        assert!(fine < coarse);
        assert!(fine > 0.0 && coarse < PI);
    }

    #[test]
    fn grid_guards() {
        assert!(grid_max_gain(&small(5), 0.0, 15e9, 10, Exec::default()).is_err());
        assert!(grid_max_gain(&small(2), 0.0, 15e9, 401, Exec::default()).is_err());
        assert!(dense_p_scan(&small(8), 0.0, 1000).is_err());
        assert!(enumerate_binary(&small(21), 0.0, 15e9).is_err());
    }

    #[test]
    fn dense_scan_agrees_with_planner() {
        let d = DmaDesign::reference();
        let step = |phi: f64| {
            let scale = d.spacing() * (d.refractive_index() + f64::sin(phi)) / SPEED_OF_LIGHT;
            (d.f_max() - d.f_min()) * scale / (200_000 - 1) as f64
        };
        for deg in [-50.0f64, -40.0, -18.0, 0.0, 25.0, 40.0] {
            let phi = deg.to_radians();
            let (p, _) = dense_p_scan(&d, phi, 200_000).unwrap();
            let planner = optimal_operating_freq(&d, phi).unwrap().p_star;
            assert!((p - planner).abs() <= 2.0 * step(phi), "{deg}: {p} vs {planner}");
        }
    }

    #[test]
    fn binary_enumeration_matches_solver() {
        for (n, phi, f) in [(3, 0.3, 14e9), (8, -0.6, 17e9), (10, 0.05, 12.5e9), (8, 0.9, 15e9)] {
            let d = small(n);
            let (a, b) = (enumerate_binary(&d, phi, f).unwrap(), solve_p4(&d, phi, f).unwrap());
            assert_eq!(a.mask, b.mask);
            assert!((a.gain - b.gain).abs() <= 1e-12 * b.gain);
        }
        let d = DmaDesign::reference();
        let phi_c = crossover_angle(&d, 15e9).unwrap();
        let r = enumerate_binary(&d, phi_c, 15e9).unwrap();
        assert!((r.gain - 64.0).abs() < 1e-9);
    }

    #[test]
    fn binary_all_ones_for_in_phase_channel() {
        // p = 1 puts every entry at phase 0 (mod 2π)
        let d = small(3);
        let phi = 0.2f64;
        let f = SPEED_OF_LIGHT / (d.spacing() * (d.refractive_index() + phi.sin()));
        let r = enumerate_binary(&d, phi, f).unwrap();
        assert_eq!(r.mask, vec![true; 3]);
    }
}
