//! Klein-Gordon (spin-0) Coulomb spectrum in de Sitter and anti-de Sitter
//! deformations.
//!
//! With `δ = √((ℓ+1/2)² − (Zμ)²)` and `ν = N − ℓ − 1/2 + δ`, the level is
//!
//! ```text
//! E/mc² = ν √(1 ∓ η [ν² + (Zμ)² − ℓ(ℓ+1) − 1]) / √(ν² + (Zμ)²)
//! ```
//!
//! with the upper sign for de Sitter. Anti-de Sitter results are obtained by
//! flipping the sign of η, never by storing a negative λ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level;
use crate::model::{DeformationParams, EnergyResult, KgState, SpaceKind, UnitSystem, Validity};

/// δ² = (ℓ+1/2)² − (Zμ)². Its sign is the validity gate.
pub fn delta_squared(l: u32, z_mu: f64) -> f64 {
    let k = l as f64 + 0.5;
    k * k - z_mu * z_mu
}

/// Everything needed to evaluate one spin-0 level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KgSpectrumInputs {
    pub state: KgState,
    pub z: u32,
    pub deformation: DeformationParams,
    pub units: UnitSystem,
}

impl KgSpectrumInputs {
    pub fn new(state: KgState, z: u32, deformation: DeformationParams, units: UnitSystem) -> Self {
        Self {
            state,
            z,
            deformation,
            units,
        }
    }

    pub fn z_mu(&self) -> f64 {
        self.z as f64 * self.units.mu
    }

    pub fn delta_sq(&self) -> f64 {
        delta_squared(self.state.l(), self.z_mu())
    }
}

fn gate_message(l: u32, z_mu: f64) -> String {
    format!("ℓ+1/2 > Zμ (ℓ = {l}, Zμ = {z_mu:.6})")
}

/// `(ν, bracket)` for a state; fails when δ² ≤ 0.
///
/// The bracket `ν² + (Zμ)² − ℓ(ℓ+1) − 1` is evaluated as
/// `(n+1/2)(n+1/2+2δ) − 3/4`, which is the same polynomial without the
/// cancellation between `ν²` and `ℓ(ℓ+1)`.
pub(crate) fn nu_and_bracket(state: &KgState, z_mu: f64) -> Result<(f64, f64)> {
    let d2 = delta_squared(state.l(), z_mu);
    if !(d2 > 0.0) {
        return Err(Error::ComplexExponent(gate_message(state.l(), z_mu)));
    }
    let delta = d2.sqrt();
    let m = state.radial() as f64 + 0.5;
    let nu = m + delta;
    let bracket = m * (m + 2.0 * delta) - 0.75;
    Ok((nu, bracket))
}

/// Dimensionless level `E/mc²` for `(Zμ, sη)`.
pub fn energy_ratio(state: &KgState, z_mu: f64, signed_eta: f64) -> Result<f64> {
    let (nu, bracket) = nu_and_bracket(state, z_mu)?;
    level::energy_ratio(nu, bracket, z_mu, signed_eta).map_err(Error::UnphysicalRadicand)
}

/// `(E/mc², 1 − (E/mc²)²)`, the second entry free of cancellation near
/// threshold. Use it where `1 − x²` is divided by a small η.
pub fn energy_ratio_with_complement(state: &KgState, z_mu: f64, signed_eta: f64) -> Result<(f64, f64)> {
    let (nu, bracket) = nu_and_bracket(state, z_mu)?;
    level::energy_ratio_with_complement(nu, bracket, z_mu, signed_eta).map_err(Error::UnphysicalRadicand)
}

/// Closed-form deformed energy with validity classification.
pub fn energy_kg(inputs: &KgSpectrumInputs) -> EnergyResult {
    let branch = inputs.deformation.space();
    match energy_ratio(&inputs.state, inputs.z_mu(), inputs.deformation.signed_eta()) {
        Ok(x) => EnergyResult::ok(inputs.units.energy_from_ratio(x), branch),
        Err(Error::UnphysicalRadicand(_)) => EnergyResult::invalid(Validity::UnphysicalRadicand, branch),
        Err(_) => EnergyResult::invalid(Validity::ComplexExponent, branch),
    }
}

/// Undeformed relativistic level ε_KG.
pub fn epsilon_kg(state: &KgState, z_mu: f64, units: &UnitSystem) -> Result<f64> {
    let (nu, _) = nu_and_bracket(state, z_mu)?;
    Ok(units.energy_from_ratio(level::undeformed_ratio(nu, z_mu)))
}

/// First-order expansion `ε − (sη ε / 2)·bracket`.
pub fn energy_kg_first_order(inputs: &KgSpectrumInputs) -> Result<f64> {
    let z_mu = inputs.z_mu();
    let (nu, bracket) = nu_and_bracket(&inputs.state, z_mu)?;
    let eps = level::undeformed_ratio(nu, z_mu);
    let x = eps - 0.5 * inputs.deformation.signed_eta() * eps * bracket;
    Ok(inputs.units.energy_from_ratio(x))
}

/// Linear coefficient `dE/d(sη)` at η = 0, in energy units.
pub fn first_order_slope(state: &KgState, z_mu: f64, units: &UnitSystem) -> Result<f64> {
    let (nu, bracket) = nu_and_bracket(state, z_mu)?;
    Ok(units.energy_from_ratio(-0.5 * level::undeformed_ratio(nu, z_mu) * bracket))
}

/// Small-coupling expansion of the binding energy `W = E − mc²`.
///
/// Four groups: the Bohr term, the pure-deformation term, the relativistic
/// fine-structure group (with its deformation factor), and the mixed
/// `η (Zμ)²` terms.
pub fn kg_nonrel_expansion(
    state: &KgState,
    z: u32,
    deformation: &DeformationParams,
    units: &UnitSystem,
) -> Result<f64> {
    let z_mu = z as f64 * units.mu;
    nu_and_bracket(state, z_mu)?;
    let eta = deformation.signed_eta();
    let n = state.principal() as f64;
    let l = state.l() as f64;
    let k = l + 0.5;
    let v2 = z_mu * z_mu;
    let tail = n * n - l * (l + 1.0) - 1.0;

    let bohr = -v2 / (2.0 * n * n);
    let pure = -0.5 * eta * tail;
    let fine = -(v2 * v2) / (2.0 * n.powi(4)) * (n / k - 0.75) * (1.0 - 0.5 * eta * tail);
    let mixed = 0.5 * eta * v2 / (2.0 * n * n)
        * ((2.0 * n.powi(3) / k - n * n - l * (l + 1.0) - 1.0)
            + v2 * (1.0 + n.powi(3) / (2.0 * k.powi(3)) - n * n / (2.0 * k * k) - n / k));
    Ok(units.energy_from_ratio(bohr + pure + fine + mixed))
}

/// Largest N ≥ ℓ+1 whose de Sitter radicand is non-negative.
///
/// `Ok(None)` when even N = ℓ+1 is unphysical. η = 0 has no bound on N.
pub fn max_n_ds(l: u32, z: u32, deformation: &DeformationParams, units: &UnitSystem) -> Result<Option<u32>> {
    if deformation.eta() == 0.0 {
        return Err(Error::ZeroDeformation("no de Sitter bound on N"));
    }
    let z_mu = z as f64 * units.mu;
    let eta = deformation.eta();
    let mut last = None;
    let mut n = l + 1;
    loop {
        let state = KgState::new(n, l)?;
        let (_, bracket) = nu_and_bracket(&state, z_mu)?;
        if 1.0 - eta * bracket < 0.0 {
            return Ok(last);
        }
        last = Some(n);
        n += 1;
    }
}

/// Largest integer Z with δ² > 0 for the given ℓ.
pub fn max_charge(l: u32, mu: f64) -> u32 {
    let mut z = ((l as f64 + 0.5) / mu).floor() as u32 + 1;
    while delta_squared(l, z as f64 * mu) <= 0.0 {
        z -= 1;
    }
    z
}

/// A note for charges that violate δ² > 0 but would pass if `(ℓ+1/2)/μ`
/// were rounded to the nearest integer (e.g. Z = 69 for ℓ = 0).
pub fn rounded_bound_note(l: u32, z: u32, mu: f64) -> Option<String> {
    let bound = (l as f64 + 0.5) / mu;
    if delta_squared(l, z as f64 * mu) <= 0.0 && (z as f64) <= bound.round() {
        Some(format!(
            "Z = {z} exceeds (ℓ+1/2)/μ = {bound:.4} for ℓ = {l}; the rounded bound Z ≤ {} would admit it, \
             but δ² = {:.3e} ≤ 0 so the level is rejected",
            bound.round(),
            delta_squared(l, z as f64 * mu)
        ))
    } else {
        None
    }
}

/// Energy pair for both branches at one deformation magnitude.
pub fn energy_both_branches(state: &KgState, z: u32, eta: f64, units: &UnitSystem) -> Result<[EnergyResult; 2]> {
    let mut out = [EnergyResult::invalid(Validity::ComplexExponent, SpaceKind::DeSitter); 2];
    for (slot, space) in out.iter_mut().zip(SpaceKind::BOTH) {
        let d = DeformationParams::from_eta(space, eta, units)?;
        *slot = energy_kg(&KgSpectrumInputs::new(*state, z, d, *units));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sommerfeld_mu;
    use approx::assert_relative_eq;

    fn nat() -> UnitSystem {
        UnitSystem::natural()
    }

    fn inputs(n: u32, l: u32, z: u32, space: SpaceKind, eta: f64) -> KgSpectrumInputs {
        let d = DeformationParams::from_eta(space, eta, &nat()).unwrap();
        KgSpectrumInputs::new(KgState::new(n, l).unwrap(), z, d, nat())
    }

    #[test]
    fn delta_squared_examples() {
        let mu = sommerfeld_mu();
        assert_eq!(delta_squared(0, 0.0), 0.25);
        assert!(delta_squared(1, 206.0 * mu) < 0.0);
        assert!(delta_squared(0, 68.0 * mu) > 0.0);
        assert!(delta_squared(0, 69.0 * mu) < 0.0);
    }

    #[test]
    fn ground_state_without_charge_is_rest_energy() {
        for eta in [0.0, 1e-3, 0.5] {
            for space in SpaceKind::BOTH {
                let e = energy_kg(&inputs(1, 0, 0, space, eta));
                assert_eq!(e.value, Some(1.0));
            }
        }
    }

    #[test]
    fn epsilon_golden_values() {
        // 40-digit evaluations of [1 + (Zμ)²/(1/2 + √(1/4 − (Zμ)²))²]^{-1/2}.
        let mu = sommerfeld_mu();
        let s = KgState::new(1, 0).unwrap();
        assert_relative_eq!(
            epsilon_kg(&s, 50.0 * mu, &nat()).unwrap(),
            0.917_531_996_752_036_9,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            epsilon_kg(&s, 68.0 * mu, &nat()).unwrap(),
            0.749_243_759_460_883_3,
            max_relative = 1e-14
        );
        let e = energy_kg(&inputs(1, 0, 50, SpaceKind::DeSitter, 0.0));
        assert_relative_eq!(e.value.unwrap(), 0.917_531_996_752_036_9, max_relative = 1e-14);
    }

    #[test]
    fn epsilon_without_charge() {
        for s in KgState::all_up_to(5) {
            assert_eq!(epsilon_kg(&s, 0.0, &nat()).unwrap(), 1.0);
        }
    }

    #[test]
    fn undeformed_branches_agree() {
        let mu = sommerfeld_mu();
        for s in KgState::all_up_to(4) {
            let a = energy_kg(&inputs(s.principal(), s.l(), 30, SpaceKind::DeSitter, 0.0));
            let b = energy_kg(&inputs(s.principal(), s.l(), 30, SpaceKind::AntiDeSitter, 0.0));
            let eps = epsilon_kg(&s, 30.0 * mu, &nat()).unwrap();
            assert_eq!(a.value, b.value);
            assert_eq!(a.value, Some(eps));
        }
    }

    #[test]
    fn accumulation_point_for_p_states() {
        let e = energy_kg(&inputs(3, 1, 206, SpaceKind::DeSitter, 1e-3));
        assert_eq!(e.validity, Validity::ComplexExponent);
        assert!(e.value.is_none());
        assert!(energy_kg(&inputs(3, 1, 205, SpaceKind::DeSitter, 1e-3)).is_ok());
        assert_eq!(max_charge(1, sommerfeld_mu()), 205);
        assert_eq!(max_charge(0, sommerfeld_mu()), 68);
    }

    #[test]
    fn rounded_bound_note_only_for_the_rounding_gap() {
        let mu = sommerfeld_mu();
        assert!(rounded_bound_note(0, 69, mu).is_some());
        assert!(rounded_bound_note(0, 68, mu).is_none());
        assert!(rounded_bound_note(0, 70, mu).is_none());
        assert!(rounded_bound_note(1, 206, mu).is_some());
    }

    #[test]
    fn first_order_limits() {
        let mu = sommerfeld_mu();
        for s in KgState::all_up_to(4) {
            let i = inputs(s.principal(), s.l(), 7, SpaceKind::DeSitter, 0.0);
            assert_eq!(
                energy_kg_first_order(&i).unwrap(),
                epsilon_kg(&s, 7.0 * mu, &nat()).unwrap()
            );
        }
        for eta in [1e-6, 0.3] {
            assert_eq!(
                energy_kg_first_order(&inputs(1, 0, 0, SpaceKind::DeSitter, eta)).unwrap(),
                1.0
            );
        }
    }

    /// Richardson-extrapolated central difference of the exact level in sη.
    fn fd_slope(state: &KgState, z_mu: f64) -> f64 {
        let f = |h: f64| energy_ratio(state, z_mu, h).unwrap();
        let d = |h: f64| (f(h) - f(-h)) / (2.0 * h);
        let h = 1e-5;
        (4.0 * d(h / 2.0) - d(h)) / 3.0
    }

    #[test]
    fn first_order_slope_matches_finite_difference() {
        let mu = sommerfeld_mu();
        for s in KgState::all_up_to(4) {
            for z in [1u32, 20, 60] {
                let slope = first_order_slope(&s, z as f64 * mu, &nat()).unwrap();
                let fd = fd_slope(&s, z as f64 * mu);
                assert_relative_eq!(fd, slope, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn nonrel_expansion_groups() {
        let phys = UnitSystem::physical();
        let d0 = DeformationParams::undeformed(SpaceKind::DeSitter);
        let w = kg_nonrel_expansion(&KgState::new(1, 0).unwrap(), 1, &d0, &phys).unwrap();
        // Bohr term: −mc²μ²/2 = −13.6058 eV, plus a 1e-4 eV relativistic shift.
        assert!((w + 13.6058).abs() < 1e-3, "{w}");

        // At Z = 0 only the pure deformation term survives.
        let d = DeformationParams::from_eta(SpaceKind::DeSitter, 1e-4, &nat()).unwrap();
        for s in KgState::all_up_to(4) {
            let (n, l) = (s.principal() as f64, s.l() as f64);
            let w = kg_nonrel_expansion(&s, 0, &d, &nat()).unwrap();
            assert_relative_eq!(w, -0.5e-4 * (n * n - l * (l + 1.0) - 1.0), max_relative = 1e-14);
        }
    }

    #[test]
    fn nonrel_expansion_error_scales_with_neglected_orders() {
        // |W_series − (E − mc²)| / ((Zμ)⁶ + η(Zμ)⁴ + η²) stays bounded over the grid.
        let mu = sommerfeld_mu();
        let mut worst: f64 = 0.0;
        for s in KgState::all_up_to(4) {
            for z in 1..=5u32 {
                for eta in [0.0, 1e-9, 1e-8, 1e-7, 1e-6] {
                    for space in SpaceKind::BOTH {
                        let i = inputs(s.principal(), s.l(), z, space, eta);
                        let exact = energy_kg(&i).value.unwrap() - 1.0;
                        let series = kg_nonrel_expansion(&i.state, z, &i.deformation, &nat()).unwrap();
                        let v = z as f64 * mu;
                        let scale = v.powi(6) + eta * v.powi(4) + eta * eta;
                        worst = worst.max((series - exact).abs() / scale);
                    }
                }
            }
        }
        assert!(worst < 50.0, "ratio to neglected orders {worst}");
    }

    #[test]
    fn max_n_ds_examples() {
        let d = DeformationParams::from_eta(SpaceKind::DeSitter, 1.0, &nat()).unwrap();
        assert_eq!(max_n_ds(0, 0, &d, &nat()).unwrap(), Some(1));
        let d0 = DeformationParams::undeformed(SpaceKind::DeSitter);
        assert!(matches!(max_n_ds(0, 0, &d0, &nat()), Err(Error::ZeroDeformation(_))));
    }

    #[test]
    fn max_n_ds_against_scan() {
        // Pick η so that η·bracket crosses 1 between N = 10 and N = 11.
        let mu = sommerfeld_mu();
        let (l, z) = (2u32, 50u32);
        let b = |n: u32| nu_and_bracket(&KgState::new(n, l).unwrap(), z as f64 * mu).unwrap().1;
        let eta = 2.0 / (b(10) + b(11));
        let d = DeformationParams::from_eta(SpaceKind::DeSitter, eta, &nat()).unwrap();
        let brute = (l + 1..200).take_while(|&n| 1.0 - eta * b(n) >= 0.0).last();
        assert_eq!(brute, Some(10));
        assert_eq!(max_n_ds(l, z, &d, &nat()).unwrap(), brute);
        // Beyond the bound the closed form is flagged.
        let e = energy_kg(&KgSpectrumInputs::new(KgState::new(11, l).unwrap(), z, d, nat()));
        assert_eq!(e.validity, Validity::UnphysicalRadicand);
    }

    #[test]
    fn ds_ads_quadrature_identity() {
        let mu = sommerfeld_mu();
        for s in KgState::all_up_to(6) {
            for z in [1u32, 5, 20, 60] {
                for eta in [1e-8, 1e-4, 1e-2] {
                    let [ds, ads] = energy_both_branches(&s, z, eta, &nat()).unwrap();
                    let eps = epsilon_kg(&s, z as f64 * mu, &nat()).unwrap();
                    let (a, b) = (ds.value.unwrap(), ads.value.unwrap());
                    assert_relative_eq!(a * a + b * b, 2.0 * eps * eps, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn ratio_trends_in_n() {
        // Z = 50, ℓ = 0: AdS/ε grows with N, dS/ε falls with N up to the dS bound.
        let mu = sommerfeld_mu();
        for eta in [1e-4, 1e-3, 1e-2] {
            let d = DeformationParams::from_eta(SpaceKind::DeSitter, eta, &nat()).unwrap();
            let top = max_n_ds(0, 50, &d, &nat()).unwrap().unwrap();
            let ratio = |n: u32, space| {
                let s = KgState::new(n, 0).unwrap();
                energy_ratio(&s, 50.0 * mu, space * eta).unwrap() / epsilon_kg(&s, 50.0 * mu, &nat()).unwrap()
            };
            for n in 1..top {
                assert!(ratio(n + 1, -1.0) > ratio(n, -1.0));
                assert!(ratio(n + 1, 1.0) < ratio(n, 1.0));
            }
        }
    }
}
