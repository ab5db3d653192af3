//! Property tests over random states, charges and deformations.

use eup_coulomb::{
    dirac, kg, sommerfeld_mu, wavefn, DeformationParams, DiracState, EquationKind, Error, KgState, SpaceKind, State,
    UnitSystem,
};
use proptest::prelude::*;

fn kg_state() -> impl Strategy<Value = KgState> {
    (1u32..=8)
        .prop_flat_map(|n| (Just(n), 0..n))
        .prop_map(|(n, l)| KgState::new(n, l).unwrap())
}

fn dirac_state() -> impl Strategy<Value = DiracState> {
    (1u32..=8)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, k)| (Just(n), Just(k), any::<bool>()))
        .prop_filter_map("κ > 0 needs n ≥ 1", |(n, k, pos)| {
            let kappa = if pos { k as i32 } else { -(k as i32) };
            DiracState::new(n, kappa).ok()
        })
}

fn state() -> impl Strategy<Value = State> {
    prop_oneof![kg_state().prop_map(State::Kg), dirac_state().prop_map(State::Dirac)]
}

fn natural(space: SpaceKind, eta: f64) -> DeformationParams {
    DeformationParams::from_eta(space, eta, &UnitSystem::natural()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dirac_ground_state_ignores_the_deformation(z in 1u32..=137, log_eta in -12.0f64..-1.0) {
        let s = DiracState::new(1, -1).unwrap();
        let v = z as f64 * sommerfeld_mu();
        let flat = dirac::energy_ratio(&s, v, 0.0).unwrap();
        let eta = 10f64.powf(log_eta);
        for se in [eta, -eta] {
            let x = dirac::energy_ratio(&s, v, se).unwrap();
            prop_assert!((x - flat).abs() <= 1e-12 * flat);
        }
    }

    #[test]
    fn branch_identity(s in state(), z in 1u32..=60, log_eta in -10.0f64..-2.0) {
        let v = z as f64 * sommerfeld_mu();
        let eta = 10f64.powf(log_eta);
        if let (Ok(ds), Ok(ads), Ok(flat)) = (s.energy_ratio(v, eta), s.energy_ratio(v, -eta), s.energy_ratio(v, 0.0)) {
            let two = 2.0 * flat * flat;
            prop_assert!((ds * ds + ads * ads - two).abs() <= 1e-12 * two);
        }
    }

    #[test]
    fn branches_bracket_the_flat_level(s in state(), z in 1u32..=60, log_eta in -8.0f64..-2.0) {
        let v = z as f64 * sommerfeld_mu();
        let eta = 10f64.powf(log_eta);
        let slope = s.first_order_slope(v).unwrap();
        let flat = s.energy_ratio(v, 0.0).unwrap();
        if let Ok(ds) = s.energy_ratio(v, eta) {
            prop_assert!((ds - flat) * slope >= 0.0);
        }
        let ads = s.energy_ratio(v, -eta).unwrap();
        prop_assert!((ads - flat) * slope <= 0.0);
    }

    #[test]
    fn undeformed_levels_are_bound(s in state(), z in 1u32..=68) {
        let x = s.energy_ratio(z as f64 * sommerfeld_mu(), 0.0).unwrap();
        prop_assert!(x > 0.0 && x < 1.0);
    }

    #[test]
    fn spin_zero_gate_is_the_sign_of_delta_squared(s in kg_state(), z in 1u32..=400) {
        let v = z as f64 * sommerfeld_mu();
        let valid = kg::delta_squared(s.l(), v) > 0.0;
        match kg::energy_ratio(&s, v, 0.0) {
            Ok(_) => prop_assert!(valid),
            Err(Error::ComplexExponent(_)) => prop_assert!(!valid),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn closed_form_solves_the_quantization_condition(
        s in state(),
        z in 1u32..=60,
        log_eta in -8.0f64..-2.0,
        ads in any::<bool>(),
    ) {
        let space = if ads { SpaceKind::AntiDeSitter } else { SpaceKind::DeSitter };
        let d = natural(space, 10f64.powf(log_eta));
        let v = z as f64 * sommerfeld_mu();
        if let Ok(x) = s.energy_ratio(v, d.signed_eta()) {
            let root = s.quantization(v, &d).and_then(|p| p.solve()).unwrap().x;
            prop_assert!((root - x).abs() <= 1e-9 * x);
        }
    }

    #[test]
    fn mixing_invariant(k in 1i32..=6, neg in any::<bool>(), frac in 0.01f64..0.99) {
        let kappa = if neg { -k } else { k };
        let v = frac * k as f64;
        let x = wavefn::mixing_x(kappa, v).unwrap();
        prop_assert!((x * x + 2.0 * kappa as f64 * x / v + 1.0).abs() <= 1e-10 * (1.0 + x * x));
    }

    #[test]
    fn series_terminates_at_the_closed_form_level(s in kg_state(), z in 1u32..=20, log_eta in -6.0f64..-2.0, ads in any::<bool>()) {
        let space = if ads { SpaceKind::AntiDeSitter } else { SpaceKind::DeSitter };
        let d = natural(space, 10f64.powf(log_eta));
        let v = z as f64 * sommerfeld_mu();
        if let Ok((x, om)) = kg::energy_ratio_with_complement(&s, v, d.signed_eta()) {
            let sol = wavefn::RadialSolution::kg_at(&s, v, &d, x, om).unwrap();
            prop_assert!((sol.termination() + sol.n as f64).norm() <= 1e-9);
        }
    }
}

#[test]
fn every_state_enumerated_has_consistent_numbers() {
    for kind in [EquationKind::KleinGordon, EquationKind::Dirac] {
        for s in State::all_up_to(kind, 8) {
            assert!(s.l() < s.principal());
            assert!(s.radial() < s.principal());
        }
    }
}
