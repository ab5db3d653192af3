//! Domain types shared by every solver: unit systems, the deformation
//! parameter, quantum-number records and the energy result type.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inverse of the Sommerfeld fine-structure constant.
pub const SOMMERFELD_INVERSE: f64 = 137.036_02;

/// Electron rest energy used in physical mode, in eV.
pub const REST_ENERGY_EV: f64 = 511_004.1;

/// ħc in eV·m (CODATA). The only place this constant is pinned.
pub const HBAR_C_EV_M: f64 = 1.973_269_8e-7;

/// Sommerfeld's fine-structure constant μ = e²/ħc.
pub fn sommerfeld_mu() -> f64 {
    1.0 / SOMMERFELD_INVERSE
}

/// Which deformation branch is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceKind {
    DeSitter,
    AntiDeSitter,
}

impl SpaceKind {
    pub const BOTH: [SpaceKind; 2] = [SpaceKind::DeSitter, SpaceKind::AntiDeSitter];

    /// The sign `s` in the deformed commutators: +1 for de Sitter, −1 for anti-de Sitter.
    pub fn sign(self) -> f64 {
        match self {
            SpaceKind::DeSitter => 1.0,
            SpaceKind::AntiDeSitter => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SpaceKind::DeSitter => "ds",
            SpaceKind::AntiDeSitter => "ads",
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnitMode {
    /// ħ = c = m = 1; energies are multiples of mc², lengths of ħ/mc.
    Natural,
    /// Energies in eV, lengths in metres.
    Physical,
}

/// Constants bundle for one unit convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub mode: UnitMode,
    /// Rest energy mc².
    pub mc2: f64,
    /// ħc, energy × length.
    pub hbar_c: f64,
    /// Fine-structure constant.
    pub mu: f64,
}

impl UnitSystem {
    pub fn natural() -> Self {
        Self {
            mode: UnitMode::Natural,
            mc2: 1.0,
            hbar_c: 1.0,
            mu: sommerfeld_mu(),
        }
    }

    pub fn physical() -> Self {
        Self {
            mode: UnitMode::Physical,
            mc2: REST_ENERGY_EV,
            hbar_c: HBAR_C_EV_M,
            mu: sommerfeld_mu(),
        }
    }

    pub fn new(mode: UnitMode) -> Self {
        match mode {
            UnitMode::Natural => Self::natural(),
            UnitMode::Physical => Self::physical(),
        }
    }

    /// Reduced Compton wavelength ħ/mc in this system's length unit.
    pub fn reduced_compton(&self) -> f64 {
        self.hbar_c / self.mc2
    }

    pub fn energy_to_ratio(&self, energy: f64) -> f64 {
        energy / self.mc2
    }

    pub fn energy_from_ratio(&self, ratio: f64) -> f64 {
        ratio * self.mc2
    }

    /// Length in this system → length in units of ħ/mc.
    pub fn length_to_natural(&self, length: f64) -> f64 {
        length / self.reduced_compton()
    }

    pub fn length_from_natural(&self, length: f64) -> f64 {
        length * self.reduced_compton()
    }

    /// η = (ħc)² λ / (mc²)².
    pub fn eta_from_lambda(&self, lambda: f64) -> f64 {
        let l = self.reduced_compton();
        (l * l) * lambda
    }

    pub fn lambda_from_eta(&self, eta: f64) -> f64 {
        let l = self.reduced_compton();
        eta / (l * l)
    }

    /// Energy conversion from this system into `other`.
    pub fn convert_energy(&self, energy: f64, other: &UnitSystem) -> f64 {
        other.energy_from_ratio(self.energy_to_ratio(energy))
    }
}

/// Deformation strength stored as a magnitude plus branch.
///
/// `lambda` is in inverse length squared of the unit system it was built
/// with; `eta` is the dimensionless strength every formula consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationParams {
    lambda: f64,
    space: SpaceKind,
    eta: f64,
}

impl DeformationParams {
    /// Builds parameters directly from the dimensionless strength.
    pub fn from_eta(space: SpaceKind, eta: f64, units: &UnitSystem) -> Result<Self> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::NegativeLambda(eta));
        }
        Ok(Self {
            lambda: units.lambda_from_eta(eta),
            space,
            eta,
        })
    }

    pub fn undeformed(space: SpaceKind) -> Self {
        Self {
            lambda: 0.0,
            space,
            eta: 0.0,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn space(&self) -> SpaceKind {
        self.space
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `s·η`: positive for de Sitter, negative for anti-de Sitter.
    pub fn signed_eta(&self) -> f64 {
        self.space.sign() * self.eta
    }

    pub fn with_space(self, space: SpaceKind) -> Self {
        Self { space, ..self }
    }
}

/// Packages a deformation; `lambda` must be a non-negative magnitude.
pub fn make_deformation(space: SpaceKind, lambda: f64, units: &UnitSystem) -> Result<DeformationParams> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::NegativeLambda(lambda));
    }
    Ok(DeformationParams {
        lambda,
        space,
        eta: units.eta_from_lambda(lambda),
    })
}

/// Spin-0 state `(N, ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KgState {
    principal: u32,
    l: u32,
}

impl KgState {
    pub fn new(principal: u32, l: u32) -> Result<Self> {
        if principal == 0 {
            return Err(Error::InvalidState("N must be at least 1".into()));
        }
        if l >= principal {
            return Err(Error::InvalidState(format!(
                "ℓ = {l} requires N ≥ ℓ+1, got N = {principal}"
            )));
        }
        Ok(Self { principal, l })
    }

    pub fn principal(&self) -> u32 {
        self.principal
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Radial index n = N − ℓ − 1 (polynomial degree and node count).
    pub fn radial(&self) -> u32 {
        self.principal - self.l - 1
    }

    /// Every state with principal number up to `max_principal`, ordered by (N, ℓ).
    pub fn all_up_to(max_principal: u32) -> Vec<Self> {
        (1..=max_principal)
            .flat_map(|n| (0..n).map(move |l| Self { principal: n, l }))
            .collect()
    }
}

/// Spin-1/2 state `(N, κ)`; `j = |κ| − 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiracState {
    principal: u32,
    kappa: i32,
}

impl DiracState {
    pub fn new(principal: u32, kappa: i32) -> Result<Self> {
        if principal == 0 {
            return Err(Error::InvalidState("N must be at least 1".into()));
        }
        if kappa == 0 {
            return Err(Error::InvalidState("κ must be nonzero".into()));
        }
        let k = kappa.unsigned_abs();
        if k > principal || (kappa > 0 && k == principal) {
            return Err(Error::InvalidState(format!(
                "κ = {kappa} is not allowed for N = {principal}"
            )));
        }
        Ok(Self { principal, kappa })
    }

    /// Builds the state from orbital `ℓ` and twice the total angular momentum.
    ///
    /// κ = −(ℓ+1) for j = ℓ+1/2 and κ = ℓ for j = ℓ−1/2.
    pub fn from_l_j(principal: u32, l: u32, two_j: u32) -> Result<Self> {
        let kappa = if two_j == 2 * l + 1 {
            -(l as i32 + 1)
        } else if l > 0 && two_j + 1 == 2 * l {
            l as i32
        } else {
            return Err(Error::InvalidState(format!(
                "j = {two_j}/2 is incompatible with ℓ = {l}"
            )));
        };
        Self::new(principal, kappa)
    }

    /// The κ < 0 member of the `(N, j)` pair, which exists for every allowed j.
    pub fn from_j(principal: u32, two_j: u32) -> Result<Self> {
        if two_j.is_multiple_of(2) {
            return Err(Error::InvalidState(format!("j = {two_j}/2 is not half-odd")));
        }
        Self::new(principal, -(two_j.div_ceil(2) as i32))
    }

    pub fn principal(&self) -> u32 {
        self.principal
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    /// j + 1/2 = |κ|.
    pub fn j_plus_half(&self) -> u32 {
        self.kappa.unsigned_abs()
    }

    pub fn j(&self) -> f64 {
        self.j_plus_half() as f64 - 0.5
    }

    pub fn two_j(&self) -> u32 {
        2 * self.j_plus_half() - 1
    }

    pub fn l(&self) -> u32 {
        if self.kappa < 0 {
            self.kappa.unsigned_abs() - 1
        } else {
            self.kappa as u32
        }
    }

    /// n = N − j − 1/2.
    pub fn radial(&self) -> u32 {
        self.principal - self.j_plus_half()
    }

    /// Every state with principal number up to `max_principal`, both κ signs.
    pub fn all_up_to(max_principal: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 1..=max_principal {
            for l in 0..n {
                if l > 0 {
                    out.push(Self::from_l_j(n, l, 2 * l - 1).expect("valid by construction"));
                }
                out.push(Self::from_l_j(n, l, 2 * l + 1).expect("valid by construction"));
            }
        }
        out
    }
}

/// Why a closed-form energy could not be produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Validity {
    Ok,
    /// δ² ≤ 0 (spin-0) or γ² < 0 (spin-1/2).
    ComplexExponent,
    /// The de Sitter numerator radicand is negative.
    UnphysicalRadicand,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    /// Energy in the unit system of the request; `None` unless `validity` is `Ok`.
    pub value: Option<f64>,
    pub validity: Validity,
    pub branch: SpaceKind,
}

impl EnergyResult {
    pub fn ok(value: f64, branch: SpaceKind) -> Self {
        Self {
            value: Some(value),
            validity: Validity::Ok,
            branch,
        }
    }

    pub fn invalid(validity: Validity, branch: SpaceKind) -> Self {
        Self {
            value: None,
            validity,
            branch,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.validity == Validity::Ok
    }
}
