use proptest::prelude::*;

use dma_core::exec::Exec;
use dma_core::experiments::rate_setup;
use dma_core::gain::gain_dma;
use dma_core::gain::solve_p1a;
use dma_core::model::DmaDesign;
use dma_core::planner::{design_sector, optimal_operating_freq};
use dma_core::rate::strategy_rates;
use dma_core::scenario::{Auto, Scenario, Threshold};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn designed_sector_reaches_full_gain(
        lower in -50.0f64..-5.0,
        width in 10.0f64..70.0,
        t in 0.0f64..=1.0,
        n in 2usize..12,
    ) {
        let upper = (lower + width).min(60.0);
        let s = design_sector(lower.to_radians(), upper.to_radians(), 12e9, 18e9, 1).unwrap();
        prop_assume!(s.n_g_star >= 1.0);
        let d = DmaDesign::new(n, s.d_y_star, s.n_g_star, 1.9e9, 1e-9, 12e9, 18e9).unwrap();
        let phi = (lower + t * (upper - lower)).to_radians();
        let op = optimal_operating_freq(&d, phi).unwrap();
        let n2 = (n * n) as f64;
        prop_assert!(op.integer_case);
        prop_assert!((op.gain - n2).abs() <= 1e-9 * n2);
        let sol = solve_p1a(&d, phi, op.f_t_star).unwrap();
        let g = gain_dma(&d, &sol.resonant, phi, op.f_t_star, false).unwrap();
        prop_assert!((g - n2).abs() <= 1e-6 * n2);
    }

    #[test]
    fn scenario_text_round_trips(
        n_y in 1usize..16,
        n_g in 1.0f64..5.0,
        q in 5.0f64..500.0,
        db in 0.1f64..8.0,
        step in 0.05f64..5.0,
        on in any::<bool>(),
    ) {
        let s = Scenario {
            n_y,
            n_g: Auto::Value(n_g),
            d_y_lambda: Auto::Value(0.4),
            damping: dma_core::scenario::Damping::Quality(q),
            delta: Threshold::Db(db),
            sweep_phi_step: step.to_radians(),
            with_attenuation: on,
            ..Scenario::default()
        };
        let again = Scenario::parse(&s.to_text()).unwrap();
        prop_assert_eq!(again.to_text(), s.to_text());
        prop_assert_eq!(again.fingerprint(), s.fingerprint());
        prop_assert_eq!(again.design().unwrap(), s.design().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn perfect_knowledge_never_beats_time_delays(phi in -30.0f64..30.0, b in 1e6f64..1.5e9) {
        let s = Scenario::default();
        let d = s.design().unwrap();
        let mut setup = rate_setup(&s, &d, None).unwrap();
        setup.budget = setup.budget.with_bandwidth(b);
        let r = strategy_rates(&setup, phi.to_radians()).unwrap();
        prop_assert!(r.perfect <= r.ttd * (1.0 + 1e-12));
        prop_assert!(r.fixed > 0.0 && r.trained > 0.0);
        let again = dma_core::rate::average_strategy_rates(&setup, &[phi.to_radians()], Exec::Sequential).unwrap();
        prop_assert_eq!(again, r);
    }
}
