//! The `dmasim` experiments, each turning a scenario into a [`Report`].

use serde_json::json;

use crate::bandwidth::{array_cutoff_frequencies, array_gain, cutoff_frequencies, element_gain};
use crate::binary::solve_p4_with;
use crate::error::Result;
use crate::exec::Exec;
use crate::gain::{gain_dma, optimal_gain, realizable_config};
use crate::model::{DmaDesign, SPEED_OF_LIGHT};
use crate::oracle::{dense_p_scan, enumerate_binary, grid_max_gain, grid_ratio_bound, MAX_ENUMERATED_ELEMENTS, MAX_GRID_ELEMENTS};
use crate::output::{Cell, Report, Table};
use crate::planner::{crossover_angle, max_coverage_angle, optimal_operating_freq};
use crate::rate::{average_strategy_rates, linspace, RateSetup, StrategyRates};
use crate::scenario::Scenario;
use crate::training::{
    allowed_estimate_interval, build_codebook, pilot_grid, pilot_grid_with, probe, ArrayLayout, Codebook,
};
use crate::channel::dirichlet;

/// Half-power level used for the reported cutoffs.
pub const CUTOFF_LEVEL: f64 = 0.5;
/// Grid size of the continuous-resonance oracle in `verify`.
pub const VERIFY_GRID_POINTS: usize = 200;
/// `p` resolution of the kernel scan in `verify`.
pub const VERIFY_SCAN_RESOLUTION: usize = 200_000;

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Azimuth grid of the gain sweep, in radians.
pub fn sweep_angles(s: &Scenario) -> Vec<f64> {
    let count = ((s.sweep_phi_max - s.sweep_phi_min) / s.sweep_phi_step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| s.sweep_phi_min + s.sweep_phi_step * i as f64).collect()
}

/// Layout and codebook for `design`. With `training.groups = auto` the
/// sector count comes from the codebook and must divide `n_z`.
pub fn training_setup(s: &Scenario, design: &DmaDesign) -> Result<(ArrayLayout, Codebook)> {
    let options = s.codebook_options();
    let probe_layout = ArrayLayout::new(s.n_z, design.clone(), options.sectors.unwrap_or(1).min(s.n_z))
        .or_else(|_| ArrayLayout::new(s.n_z, design.clone(), 1))?;
    let codebook = build_codebook(&probe_layout, s.codebook_phi_max, s.delta.linear(), options)?;
    let layout = s.layout(design.clone(), codebook.len())?;
    Ok((layout, codebook))
}

pub fn rate_setup(s: &Scenario, design: &DmaDesign, sectors: Option<usize>) -> Result<RateSetup> {
    let mut pinned = s.clone();
    if let Some(l) = sectors {
        pinned.groups = crate::scenario::Auto::Value(l);
    }
    let (layout, codebook) = training_setup(&pinned, design)?;
    let pilots = pilot_grid_with(
        pilot_grid(design.f_min(), design.f_max(), s.pilots)?,
        &codebook.sector_freqs,
    );
    Ok(RateSetup {
        layout,
        codebook,
        pilots,
        budget: s.budget(design.center_frequency())?,
    })
}

pub fn design(s: &Scenario) -> Result<Report> {
    let resolved = s.resolved()?;
    let d = resolved.design()?;
    let f_c = d.center_frequency();
    let mut report = Report::new("design");
    let phi_c = crossover_angle(&d, f_c).ok();
    let edges = [s.phi_lower, s.phi_upper]
        .iter()
        .map(|&phi| optimal_operating_freq(&d, phi).map(|op| op.f_t_star))
        .collect::<Result<Vec<_>>>()?;

    let mut t = Table::new(
        "design",
        [
            "n_y", "n_z", "n_g", "d_y_m", "d_y_over_lambda_c", "damping_hz", "quality_factor", "f_min_hz", "f_max_hz",
            "phi_c_deg", "phi_lower_deg", "phi_upper_deg", "f_t_at_phi_lower_hz", "f_t_at_phi_upper_hz",
        ],
    );
    t.push(vec![
        d.n_elements().into(),
        s.n_z.into(),
        d.refractive_index().into(),
        d.spacing().into(),
        (d.spacing() * f_c / SPEED_OF_LIGHT).into(),
        d.damping().into(),
        d.quality_factor(f_c).into(),
        d.f_min().into(),
        d.f_max().into(),
        phi_c.map_or(f64::NAN, f64::to_degrees).into(),
        s.phi_lower.to_degrees().into(),
        s.phi_upper.to_degrees().into(),
        edges[0].into(),
        edges[1].into(),
    ]);
    report.tables.push(t);
    report.scalar("n_g", d.refractive_index());
    report.scalar("d_y_m", d.spacing());
    report.scalar("d_y_over_lambda_c", d.spacing() * f_c / SPEED_OF_LIGHT);
    report.scalar("phi_c_deg", phi_c.map(f64::to_degrees));
    report.scalar("f_t_at_phi_lower_hz", edges[0]);
    report.scalar("f_t_at_phi_upper_hz", edges[1]);
    report.attachments.push(("scenario.resolved.txt".into(), resolved.to_text()));
    Ok(report)
}

pub fn coverage(s: &Scenario) -> Result<Report> {
    let f_c = s.center_frequency();
    let mut columns = vec!["tuning_range_over_f_c".to_string()];
    for n_g in &s.coverage_ng {
        columns.push(format!("phi_max_deg_ng_{n_g}"));
        columns.push(format!("saturated_ng_{n_g}"));
    }
    let mut t = Table::new("coverage", columns);
    for fraction in linspace(0.0, s.coverage_max_fraction, s.coverage_points) {
        let mut row = vec![Cell::from(fraction)];
        for &n_g in &s.coverage_ng {
            let c = max_coverage_angle(n_g, fraction * f_c, f_c)?;
            row.push(c.angle.to_degrees().into());
            row.push(c.saturated.into());
        }
        t.push(row);
    }
    let mut report = Report::new("coverage");
    report.tables.push(t);
    let design_tr = (s.f_max - s.f_min) / f_c;
    for &n_g in &s.coverage_ng {
        let c = max_coverage_angle(n_g, s.f_max - s.f_min, f_c)?;
        report.scalar(&format!("phi_max_deg_ng_{n_g}_at_design_range"), c.angle.to_degrees());
    }
    report.scalar("design_tuning_range_over_f_c", design_tr);
    Ok(report)
}

pub fn freq_response(s: &Scenario, phi: f64) -> Result<Report> {
    let d = s.design()?;
    let op = optimal_operating_freq(&d, phi)?;
    let (config, detuned) = realizable_config(&d, phi, op.f_t_star)?;
    let mut columns = vec!["f_hz", "gain_linear", "gain_db", "element_gain_linear", "array_gain_linear", "factorized_linear"];
    if s.with_attenuation {
        columns.push("gain_attenuated_linear");
    }
    let mut t = Table::new("freq_response", columns);
    for f in linspace(d.f_min(), d.f_max(), s.freq_points) {
        let g = gain_dma(&d, &config, phi, f, false)?;
        let e = element_gain(&d, op.f_t_star, f)?;
        let a = array_gain(&d, phi, f);
        let mut row = vec![f.into(), g.into(), db(g).into(), e.into(), a.into(), (e * a).into()];
        if s.with_attenuation {
            row.push(gain_dma(&d, &config, phi, f, true)?.into());
        }
        t.push(row);
    }
    let mut report = Report::new("freq_response");
    report.tables.push(t);
    report.scalar("phi_deg", phi.to_degrees());
    report.scalar("f_t_star_hz", op.f_t_star);
    report.scalar("p_star", op.p_star);
    report.scalar("integer_case", op.integer_case);
    report.scalar("gain_at_f_t_star", gain_dma(&d, &config, phi, op.f_t_star, false)?);
    report.scalar("detuned_slots", detuned.len());
    let element = cutoff_frequencies(&d, op.f_t_star, CUTOFF_LEVEL)?;
    report.scalar("element_f_lower_hz", element.f_lower);
    report.scalar("element_f_upper_hz", element.f_upper);
    report.scalar("element_bandwidth_hz", element.bandwidth);
    report.scalar("element_bandwidth_approx_hz", element.approx_bandwidth);
    if op.integer_case {
        let array = array_cutoff_frequencies(&d, phi, op.f_t_star, CUTOFF_LEVEL)?;
        report.scalar("array_f_lower_hz", array.f_lower);
        report.scalar("array_f_upper_hz", array.f_upper);
        report.scalar("array_bandwidth_hz", array.bandwidth);
    }
    Ok(report)
}

/// Contiguous run of sweep angles around `phi_c` where `gap_db` stays
/// below `threshold_db`.
fn within_gap_region(angles: &[f64], gap_db: &[f64], phi_c: f64, threshold_db: f64) -> Option<(f64, f64)> {
    let center = (0..angles.len()).min_by(|&a, &b| {
        (angles[a] - phi_c).abs().total_cmp(&(angles[b] - phi_c).abs())
    })?;
    if gap_db[center] >= threshold_db {
        return None;
    }
    let mut lo = center;
    while lo > 0 && gap_db[lo - 1] < threshold_db {
        lo -= 1;
    }
    let mut hi = center;
    while hi + 1 < angles.len() && gap_db[hi + 1] < threshold_db {
        hi += 1;
    }
    Some((angles[lo], angles[hi]))
}

pub fn gain_sweep(s: &Scenario, exec: Exec) -> Result<Report> {
    let d = s.design()?;
    let f_c = d.center_frequency();
    let angles = sweep_angles(s);
    let att = s.with_attenuation;
    let rows = exec.try_map(&angles, |&phi| -> Result<Vec<f64>> {
        let op = optimal_operating_freq(&d, phi)?;
        let fixed = optimal_gain(&d, phi, f_c);
        let binary = solve_p4_with(&d, phi, f_c, false, Exec::Sequential)?.gain;
        let mut row = vec![phi.to_degrees(), op.f_t_star, op.gain, db(op.gain), fixed, db(fixed), binary, db(binary)];
        if att {
            let (planned, _) = realizable_config(&d, phi, op.f_t_star)?;
            let (at_center, _) = realizable_config(&d, phi, f_c)?;
            row.push(gain_dma(&d, &planned, phi, op.f_t_star, true)?);
            row.push(gain_dma(&d, &at_center, phi, f_c, true)?);
            row.push(solve_p4_with(&d, phi, f_c, true, Exec::Sequential)?.gain);
        }
        Ok(row)
    })?;

    let mut columns = vec![
        "phi_deg", "f_t_star_hz", "gain_planned_linear", "gain_planned_db", "gain_fixed_linear", "gain_fixed_db",
        "gain_binary_linear", "gain_binary_db",
    ];
    if att {
        columns.extend(["gain_planned_attenuated_linear", "gain_fixed_attenuated_linear", "gain_binary_attenuated_linear"]);
    }
    let mut t = Table::new("gain_sweep", columns);
    for row in &rows {
        t.push(row.iter().map(|&v| Cell::from(v)).collect());
    }

    let mut report = Report::new("gain_sweep");
    report.tables.push(t);
    let n2 = (d.n_elements() * d.n_elements()) as f64;
    let min_planned = rows.iter().map(|r| r[2]).fold(f64::INFINITY, f64::min);
    report.scalar("n_y_squared", n2);
    report.scalar("min_planned_gain", min_planned);
    report.scalar("attenuation_np_per_m", if att { s.attenuation } else { 0.0 });
    if let Ok(phi_c) = crossover_angle(&d, f_c) {
        let binary = solve_p4_with(&d, phi_c, f_c, false, exec)?;
        report.scalar("phi_c_deg", phi_c.to_degrees());
        report.scalar("binary_gain_at_phi_c", binary.gain);
        report.scalar("fixed_gain_at_phi_c", optimal_gain(&d, phi_c, f_c));
        let gap: Vec<f64> = rows.iter().map(|r| r[5] - r[7]).collect();
        if let Some((lo, hi)) = within_gap_region(&angles, &gap, phi_c, 2.0) {
            report.scalar("binary_gap_below_2db_from_deg", lo.to_degrees());
            report.scalar("binary_gap_below_2db_to_deg", hi.to_degrees());
        }
    }
    Ok(report)
}

pub fn train(s: &Scenario, phi: Option<f64>, exec: Exec) -> Result<Report> {
    let d = s.design()?;
    let (layout, codebook) = training_setup(s, &d)?;
    let pilots = pilot_grid_with(pilot_grid(d.f_min(), d.f_max(), s.pilots)?, &codebook.sector_freqs);
    let n_g = d.refractive_index();

    let mut book = Table::new(
        "train_codebook",
        ["sector", "phi_deg", "f_hz", "estimate_lower_deg", "estimate_upper_deg"],
    );
    for (l, (&phi_l, &f_l)) in codebook.sector_angles.iter().zip(&codebook.sector_freqs).enumerate() {
        let (lo, hi) = allowed_estimate_interval(phi_l, n_g, codebook.psi_delta)
            .map_or((f64::NAN, f64::NAN), |(a, b)| (a.to_degrees(), b.to_degrees()));
        book.push(vec![l.into(), phi_l.to_degrees().into(), f_l.into(), lo.into(), hi.into()]);
    }

    let angles = match phi {
        Some(p) => vec![p],
        None => linspace(-s.codebook_phi_max, s.codebook_phi_max, s.train_angles),
    };
    let results = exec.try_map(&angles, |&p| probe(&layout, &codebook, p, &pilots, Exec::Sequential))?;
    let max_gain = layout.max_gain();
    let mut t = Table::new(
        "train",
        ["phi_deg", "k_star", "f_k_star_hz", "phi_hat_deg", "gain_normalized", "gain_normalized_db"],
    );
    let mut worst = f64::INFINITY;
    for (&p, r) in angles.iter().zip(&results) {
        let g = r.gain_at_estimate / max_gain;
        worst = worst.min(g);
        t.push(vec![
            p.to_degrees().into(),
            r.k_star.into(),
            r.f_k_star.into(),
            r.phi_hat.to_degrees().into(),
            g.into(),
            db(g).into(),
        ]);
    }

    let mut report = Report::new("train");
    report.tables.push(book);
    report.tables.push(t);
    report.scalar("sectors", codebook.len());
    report.scalar("psi_delta", codebook.psi_delta);
    report.scalar("delta", codebook.delta);
    report.scalar("pilots", pilots.len());
    report.scalar("sector_angles_deg", codebook.sector_angles.iter().map(|a| a.to_degrees()).collect::<Vec<_>>());
    report.scalar("sector_freqs_hz", codebook.sector_freqs.clone());
    report.scalar("min_gain_normalized", worst);
    report.scalar("meets_threshold", worst >= codebook.delta * (1.0 - 1e-6));
    Ok(report)
}

fn rate_cells(r: &StrategyRates) -> Vec<Cell> {
    vec![
        r.fixed.into(),
        r.trained.into(),
        r.perfect.into(),
        r.ttd.into(),
        (r.trained / r.perfect).into(),
    ]
}

pub fn ordered(r: &StrategyRates) -> bool {
    r.fixed <= r.trained && r.trained <= r.perfect && r.perfect <= r.ttd
}

pub fn rate(s: &Scenario, exec: Exec) -> Result<Report> {
    let d = s.design()?;
    let base = rate_setup(s, &d, None)?;
    let sectors = base.layout.groups;
    let angles = linspace(s.phi_lower, s.phi_upper, s.rate_angles);
    let metrics = ["fixed_bps", "trained_bps", "perfect_bps", "ttd_bps", "trained_over_perfect"];

    let mut by_bandwidth = Table::new("rate_bandwidth", ["bandwidth_hz"].into_iter().chain(metrics));
    let mut all_ordered = true;
    let mut worst_ratio = f64::INFINITY;
    for &b in &s.rate_bandwidths {
        let setup = RateSetup {
            budget: base.budget.with_bandwidth(b),
            ..base.clone()
        };
        let r = average_strategy_rates(&setup, &angles, exec)?;
        all_ordered &= ordered(&r);
        worst_ratio = worst_ratio.min(r.trained / r.perfect);
        let mut row = vec![Cell::from(b)];
        row.extend(rate_cells(&r));
        by_bandwidth.push(row);
    }

    let f_c = s.center_frequency();
    let mut by_range = Table::new(
        "rate_tuning_range",
        ["tuning_range_hz", "bandwidth_hz"].into_iter().chain(metrics).chain(["ordered"]),
    );
    let mut violations = Vec::new();
    for &tr in &s.tuning_ranges {
        let band = d.clone().with_band(f_c - 0.5 * tr, f_c + 0.5 * tr)?;
        let setup = rate_setup(s, &band, Some(sectors))?;
        for &b in &s.tr_bandwidths {
            let setup = RateSetup {
                budget: setup.budget.with_bandwidth(b),
                ..setup.clone()
            };
            let r = average_strategy_rates(&setup, &angles, exec)?;
            let ok = ordered(&r);
            if !ok {
                violations.push(json!({"tuning_range_hz": tr, "bandwidth_hz": b}));
            }
            let mut row = vec![Cell::from(tr), Cell::from(b)];
            row.extend(rate_cells(&r));
            row.push(ok.into());
            by_range.push(row);
        }
    }

    let mut report = Report::new("rate");
    report.tables.push(by_bandwidth);
    report.tables.push(by_range);
    report.scalar("sectors", sectors);
    report.scalar("angles", angles.len());
    report.scalar("ordered_at_design_range", all_ordered);
    report.scalar("min_trained_over_perfect_at_design_range", worst_ratio);
    report.scalar("ordering_violations", violations);
    Ok(report)
}

/// Cross-checks against the independent oracles. `summary.pass` is false if
/// any check fails.
pub fn verify(s: &Scenario, exec: Exec) -> Result<Report> {
    let d = s.design()?;
    let f_c = d.center_frequency();
    let n = d.n_elements();
    let angles = sweep_angles(s);
    let mut report = Report::new("verify");
    let mut pass = true;

    let mut kernel = Table::new("verify_kernel", ["phi_deg", "planner_kernel", "scan_kernel", "ok"]);
    let tol = n as f64 * 1e-3;
    let scans = exec.try_map(&angles, |&phi| -> Result<(f64, f64)> {
        let op = optimal_operating_freq(&d, phi)?;
        let planned = dirichlet(n, op.p_star).abs();
        Ok((planned, dense_p_scan(&d, phi, VERIFY_SCAN_RESOLUTION)?.1))
    })?;
    for (&phi, &(planned, scanned)) in angles.iter().zip(&scans) {
        let ok = planned + 1e-9 >= scanned && scanned + tol >= planned;
        pass &= ok;
        kernel.push(vec![phi.to_degrees().into(), planned.into(), scanned.into(), ok.into()]);
    }
    report.tables.push(kernel);

    if n <= MAX_ENUMERATED_ELEMENTS {
        let mut binary = Table::new("verify_binary", ["phi_deg", "solver_gain", "oracle_gain", "same_mask", "ok"]);
        let checked: Vec<f64> = angles.iter().copied().step_by(10).collect();
        let results = exec.try_map(&checked, |&phi| -> Result<(f64, f64, bool)> {
            let a = solve_p4_with(&d, phi, f_c, false, Exec::Sequential)?;
            let b = enumerate_binary(&d, phi, f_c)?;
            Ok((a.gain, b.gain, a.mask == b.mask))
        })?;
        for (&phi, &(a, b, same)) in checked.iter().zip(&results) {
            let ok = same && (a - b).abs() <= 1e-12 * b.max(1.0);
            pass &= ok;
            binary.push(vec![phi.to_degrees().into(), a.into(), b.into(), same.into(), ok.into()]);
        }
        report.tables.push(binary);
    } else {
        report.scalar("binary_oracle", format!("skipped: N = {n} exceeds {MAX_ENUMERATED_ELEMENTS}"));
    }

    if n <= MAX_GRID_ELEMENTS {
        let mut grid = Table::new("verify_grid", ["phi_deg", "closed_form_gain", "grid_gain", "ratio_lower_bound", "ok"]);
        let checked: Vec<f64> = angles.iter().copied().step_by(20).collect();
        for &phi in &checked {
            let closed = optimal_gain(&d, phi, f_c);
            let found = grid_max_gain(&d, phi, f_c, VERIFY_GRID_POINTS, exec)?;
            let bound = grid_ratio_bound(&d, f_c, VERIFY_GRID_POINTS, closed);
            let ok = found <= closed * (1.0 + 1e-9) && found >= closed * bound * (1.0 - 1e-9);
            pass &= ok;
            grid.push(vec![phi.to_degrees().into(), closed.into(), found.into(), bound.into(), ok.into()]);
        }
        report.tables.push(grid);
    } else {
        report.scalar("grid_oracle", format!("skipped: N = {n} exceeds {MAX_GRID_ELEMENTS}"));
    }

    report.scalar("pass", pass);
    Ok(report)
}

/// True unless the report is a failed `verify`.
pub fn passed(report: &Report) -> bool {
    report.summary.get("pass").and_then(|v| v.as_bool()).unwrap_or(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> Scenario {
        Scenario::parse(
            "sweep.phi_step_deg = 5\nsweep.freq_points = 41\nsweep.rate_angles = 7\nsweep.train_angles = 21\n\
             sweep.bandwidths_mhz = 100\nsweep.tr_bandwidths_mhz = 300\nsweep.tuning_ranges_ghz = 6\nsweep.coverage_points = 11",
        )
        .unwrap()
    }

    #[test]
    fn sweep_grid_hits_endpoints() {
        let a = sweep_angles(&Scenario::default());
        assert_eq!(a.len(), 241);
        assert!((a[0].to_degrees() + 60.0).abs() < 1e-9);
        assert!((a[240].to_degrees() - 60.0).abs() < 1e-9);
    }

    #[test]
    fn design_reports_reference_values() {
        let r = design(&Scenario::default()).unwrap();
        assert!((r.summary["n_g"].as_f64().unwrap() - 2.5).abs() < 1e-12);
        assert!((r.summary["phi_c_deg"].as_f64().unwrap() + 5.7392).abs() < 1e-3);
        assert!((r.summary["f_t_at_phi_lower_hz"].as_f64().unwrap() - 18e9).abs() < 1e3);
        assert!((r.summary["f_t_at_phi_upper_hz"].as_f64().unwrap() - 12e9).abs() < 1e3);
        let resolved = Scenario::parse(&r.attachments[0].1).unwrap();
        assert_eq!(resolved.design().unwrap(), Scenario::default().design().unwrap());
    }

    #[test]
    fn coverage_anchor() {
        let r = coverage(&Scenario::parse("sweep.coverage_points = 3").unwrap()).unwrap();
        let t = &r.tables[0];
        // fraction 0.25 with n_g = 4 gives 30 degrees
        assert_eq!(t.rows[1][0], Cell::Float(0.25));
        let Cell::Float(angle) = t.rows[1][3] else { panic!() };
        assert!((angle - 30.0).abs() < 1e-9);
    }

    #[test]
    fn gain_sweep_crossover_and_columns() {
        let r = gain_sweep(&quick(), Exec::Sequential).unwrap();
        assert_eq!(r.tables[0].columns.len(), 11);
        assert!((r.summary["binary_gain_at_phi_c"].as_f64().unwrap() - 64.0).abs() < 1e-9);
        let off = gain_sweep(&Scenario::parse("sweep.phi_step_deg = 5\nsweep.attenuation = off").unwrap(), Exec::Sequential).unwrap();
        assert_eq!(off.tables[0].columns.len(), 8);
    }

    #[test]
    fn train_meets_threshold() {
        let r = train(&quick(), None, Exec::default()).unwrap();
        assert_eq!(r.summary["sectors"], 4);
        assert_eq!(r.summary["meets_threshold"], true);
        let single = train(&quick(), Some(-18f64.to_radians()), Exec::Sequential).unwrap();
        assert_eq!(single.tables[1].rows.len(), 1);
    }

    #[test]
    fn rate_orders_strategies_on_reference_band() {
        let r = rate(&quick(), Exec::default()).unwrap();
        assert_eq!(r.summary["ordered_at_design_range"], true);
        assert_eq!(r.tables[1].rows.len(), 1);
    }

    #[test]
    fn verify_passes_small_array() {
        let s = Scenario::parse("design.n_y = 3\nsweep.phi_step_deg = 5\ntraining.groups = 1").unwrap();
        let r = verify(&s, Exec::default()).unwrap();
        assert!(passed(&r), "{:?}", r.summary);
        assert_eq!(r.tables.len(), 3);
    }

    #[test]
    fn freq_response_peaks_at_planned_frequency() {
        let r = freq_response(&quick(), -18f64.to_radians()).unwrap();
        let peak = r.summary["gain_at_f_t_star"].as_f64().unwrap();
        assert!((peak - 64.0).abs() < 1e-6);
        assert!((r.summary["element_bandwidth_hz"].as_f64().unwrap() - 300e6).abs() < 0.02 * 300e6);
    }
}
