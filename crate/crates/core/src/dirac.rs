//! Dirac (spin-1/2) Coulomb spectrum in de Sitter and anti-de Sitter
//! deformations, its small-coupling decomposition and the hydrogen table.
//!
//! With `γ = √(κ² − (Zμ)²)` and `ν = N − |κ| + γ`, the level is
//!
//! ```text
//! E/mc² = ν √(1 ∓ η [ν² + (Zμ)² − (j+1/2)²]) / √(ν² + (Zμ)²)
//! ```
//!
//! The energy depends on `(N, j)` only, so the two κ signs of a given `j`
//! are degenerate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level;
use crate::model::{make_deformation, DeformationParams, DiracState, EnergyResult, SpaceKind, UnitSystem, Validity};

/// The √λ used for the hydrogen table, in m⁻¹.
pub const REFERENCE_SQRT_LAMBDA_PER_M: f64 = 0.252e6;

/// γ = √(κ² − (Zμ)²). γ = 0 (Zμ = |κ|) is accepted.
pub fn gamma(kappa: i32, z_mu: f64) -> Result<f64> {
    if kappa == 0 {
        return Err(Error::InvalidState("κ must be nonzero".into()));
    }
    let k = kappa.unsigned_abs() as f64;
    let g2 = k * k - z_mu * z_mu;
    if g2 < 0.0 {
        return Err(Error::ComplexExponent(format!(
            "j+1/2 ≥ Zμ (j+1/2 = {k}, Zμ = {z_mu:.6})"
        )));
    }
    Ok(g2.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracSpectrumInputs {
    pub state: DiracState,
    pub z: u32,
    pub deformation: DeformationParams,
    pub units: UnitSystem,
}

impl DiracSpectrumInputs {
    pub fn new(state: DiracState, z: u32, deformation: DeformationParams, units: UnitSystem) -> Self {
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

    pub fn gamma(&self) -> Result<f64> {
        gamma(self.state.kappa(), self.z_mu())
    }
}

/// `(ν, bracket)` with the bracket written as `n(n + 2γ)`, which vanishes
/// identically at n = 0.
pub(crate) fn nu_and_bracket(state: &DiracState, z_mu: f64) -> Result<(f64, f64)> {
    let g = gamma(state.kappa(), z_mu)?;
    let n = state.radial() as f64;
    Ok((n + g, n * (n + 2.0 * g)))
}

/// Dimensionless level `E/mc²` for `(Zμ, sη)`.
pub fn energy_ratio(state: &DiracState, z_mu: f64, signed_eta: f64) -> Result<f64> {
    let (nu, bracket) = nu_and_bracket(state, z_mu)?;
    level::energy_ratio(nu, bracket, z_mu, signed_eta).map_err(Error::UnphysicalRadicand)
}

/// `(E/mc², 1 − (E/mc²)²)`, the second entry free of cancellation near
/// threshold. Use it where `1 − x²` is divided by a small η.
pub fn energy_ratio_with_complement(state: &DiracState, z_mu: f64, signed_eta: f64) -> Result<(f64, f64)> {
    let (nu, bracket) = nu_and_bracket(state, z_mu)?;
    level::energy_ratio_with_complement(nu, bracket, z_mu, signed_eta).map_err(Error::UnphysicalRadicand)
}

pub fn energy_dirac(inputs: &DiracSpectrumInputs) -> EnergyResult {
    let branch = inputs.deformation.space();
    match energy_ratio(&inputs.state, inputs.z_mu(), inputs.deformation.signed_eta()) {
        Ok(x) => EnergyResult::ok(inputs.units.energy_from_ratio(x), branch),
        Err(Error::UnphysicalRadicand(_)) => EnergyResult::invalid(Validity::UnphysicalRadicand, branch),
        Err(_) => EnergyResult::invalid(Validity::ComplexExponent, branch),
    }
}

/// Undeformed relativistic level ε_Dirac.
pub fn epsilon_dirac(state: &DiracState, z_mu: f64, units: &UnitSystem) -> Result<f64> {
    let (nu, _) = nu_and_bracket(state, z_mu)?;
    Ok(units.energy_from_ratio(level::undeformed_ratio(nu, z_mu)))
}

/// `ε − (sη ε / 2)·bracket`.
pub fn energy_dirac_first_order(inputs: &DiracSpectrumInputs) -> Result<f64> {
    let z_mu = inputs.z_mu();
    let (nu, bracket) = nu_and_bracket(&inputs.state, z_mu)?;
    let eps = level::undeformed_ratio(nu, z_mu);
    let x = eps - 0.5 * inputs.deformation.signed_eta() * eps * bracket;
    Ok(inputs.units.energy_from_ratio(x))
}

/// Linear coefficient `dE/d(sη)` at η = 0.
pub fn first_order_slope(state: &DiracState, z_mu: f64, units: &UnitSystem) -> Result<f64> {
    let (nu, bracket) = nu_and_bracket(state, z_mu)?;
    Ok(units.energy_from_ratio(-0.5 * level::undeformed_ratio(nu, z_mu) * bracket))
}

/// Bohr term plus fine structure, ϵ_{N;j}.
pub fn fine_structure_epsilon(state: &DiracState, z: u32, units: &UnitSystem) -> f64 {
    let v2 = (z as f64 * units.mu).powi(2);
    let n = state.principal() as f64;
    let k = state.j_plus_half() as f64;
    let w = -v2 / (2.0 * n * n) - v2 * v2 / (2.0 * n.powi(4)) * (n / k - 0.75);
    units.energy_from_ratio(w)
}

/// Signed deformation correction Δℰ_{N;j}; negative in de Sitter.
pub fn eup_correction(state: &DiracState, z: u32, deformation: &DeformationParams, units: &UnitSystem) -> f64 {
    let v2 = (z as f64 * units.mu).powi(2);
    let n = state.principal() as f64;
    let k = state.j_plus_half() as f64;
    let first = 1.0 - v2 / (2.0 * n * n) - v2 * v2 / (2.0 * n.powi(4)) * (n / k - 0.75);
    let second = n * n - k * k - v2 * (1.0 + v2 / (4.0 * k * k)) * (n / k - 1.0);
    units.energy_from_ratio(-0.5 * deformation.signed_eta() * first * second)
}

/// One row of the hydrogen-like level table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: u32,
    pub l: u32,
    pub two_j: u32,
    pub label: String,
    pub epsilon: f64,
    pub delta_eps: f64,
    pub delta_eps_abs: f64,
}

impl LevelRow {
    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }
}

/// Spectroscopic label such as `2p_3/2`.
pub fn spectroscopic_label(state: &DiracState) -> String {
    const LETTERS: [char; 7] = ['s', 'p', 'd', 'f', 'g', 'h', 'i'];
    let l = state.l() as usize;
    let letter = LETTERS
        .get(l)
        .map(|c| c.to_string())
        .unwrap_or_else(|| format!("[l={l}]"));
    format!("{}{}_{}/2", state.principal(), letter, state.two_j())
}

/// `(N, ℓ, 2j)` of the nine table rows, in order.
pub const HYDROGEN_STATES: [(u32, u32, u32); 9] = [
    (1, 0, 1),
    (2, 0, 1),
    (2, 1, 1),
    (2, 1, 3),
    (3, 0, 1),
    (3, 1, 1),
    (3, 1, 3),
    (3, 2, 3),
    (3, 2, 5),
];

/// Deformation used for the reference hydrogen table (de Sitter, √λ = 0.252×10⁶ m⁻¹).
pub fn reference_deformation(units: &UnitSystem) -> Result<DeformationParams> {
    let lambda = REFERENCE_SQRT_LAMBDA_PER_M * REFERENCE_SQRT_LAMBDA_PER_M;
    let eta = make_deformation(SpaceKind::DeSitter, lambda, &UnitSystem::physical())?.eta();
    DeformationParams::from_eta(SpaceKind::DeSitter, eta, units)
}

/// Regenerates the hydrogen-like (Z = 1) table.
pub fn hydrogen_table(units: &UnitSystem, deformation: &DeformationParams) -> Vec<LevelRow> {
    HYDROGEN_STATES
        .iter()
        .map(|&(n, l, two_j)| {
            let state = DiracState::from_l_j(n, l, two_j).expect("table states are valid");
            let delta = eup_correction(&state, 1, deformation, units);
            LevelRow {
                n,
                l,
                two_j,
                label: spectroscopic_label(&state),
                epsilon: fine_structure_epsilon(&state, 1, units),
                delta_eps: delta,
                delta_eps_abs: delta.abs(),
            }
        })
        .collect()
}
