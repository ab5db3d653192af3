//! Cross-checks of the closed-form spectra on parameter grids.
//!
//! Each check is exposed per case so callers can run grids in parallel;
//! the `run_*` helpers evaluate a whole grid sequentially.

use crate::dirac;
use crate::error::Result;
use crate::kg;
use crate::model::{sommerfeld_mu, DeformationParams, DiracState, KgState, SpaceKind, UnitSystem};
use crate::oracle::{self, ShootOptions};
use crate::quantize::{EquationKind, QuantizationProblem};
use serde::{Deserialize, Serialize};

/// A spin-0 or spin-1/2 state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum State {
    Kg(KgState),
    Dirac(DiracState),
}

impl State {
    pub fn kind(&self) -> EquationKind {
        match self {
            State::Kg(_) => EquationKind::KleinGordon,
            State::Dirac(_) => EquationKind::Dirac,
        }
    }

    pub fn principal(&self) -> u32 {
        match self {
            State::Kg(s) => s.principal(),
            State::Dirac(s) => s.principal(),
        }
    }

    pub fn l(&self) -> u32 {
        match self {
            State::Kg(s) => s.l(),
            State::Dirac(s) => s.l(),
        }
    }

    /// 2j for spin-1/2, `None` for spin-0.
    pub fn two_j(&self) -> Option<u32> {
        match self {
            State::Kg(_) => None,
            State::Dirac(s) => Some(s.two_j()),
        }
    }

    pub fn radial(&self) -> u32 {
        match self {
            State::Kg(s) => s.radial(),
            State::Dirac(s) => s.radial(),
        }
    }

    /// "N=2 l=1" or "2p_3/2".
    pub fn label(&self) -> String {
        match self {
            State::Kg(s) => format!("N={} l={}", s.principal(), s.l()),
            State::Dirac(s) => dirac::spectroscopic_label(s),
        }
    }

    /// Closed-form E/mc².
    pub fn energy_ratio(&self, z_mu: f64, signed_eta: f64) -> Result<f64> {
        match self {
            State::Kg(s) => kg::energy_ratio(s, z_mu, signed_eta),
            State::Dirac(s) => dirac::energy_ratio(s, z_mu, signed_eta),
        }
    }

    /// d(E/mc²)/dη at η = 0 on the de Sitter branch.
    pub fn first_order_slope(&self, z_mu: f64) -> Result<f64> {
        let u = UnitSystem::natural();
        match self {
            State::Kg(s) => kg::first_order_slope(s, z_mu, &u),
            State::Dirac(s) => dirac::first_order_slope(s, z_mu, &u),
        }
    }

    pub fn quantization(&self, z_mu: f64, deformation: &DeformationParams) -> Result<QuantizationProblem> {
        match self {
            State::Kg(s) => QuantizationProblem::kg(s, z_mu, deformation),
            State::Dirac(s) => QuantizationProblem::dirac(s, z_mu, deformation),
        }
    }

    pub fn shoot(
        &self,
        z_mu: f64,
        deformation: &DeformationParams,
        opts: &ShootOptions,
    ) -> Result<oracle::ShootResult> {
        match self {
            State::Kg(s) => oracle::shoot_kg(s, z_mu, deformation, opts),
            State::Dirac(s) => oracle::shoot_dirac(s, z_mu, deformation, opts),
        }
    }

    /// Every state of the given equation with principal number ≤ `max`.
    pub fn all_up_to(kind: EquationKind, max: u32) -> Vec<State> {
        match kind {
            EquationKind::KleinGordon => KgState::all_up_to(max).into_iter().map(State::Kg).collect(),
            EquationKind::Dirac => DiracState::all_up_to(max).into_iter().map(State::Dirac).collect(),
        }
    }
}

/// One point of a verification grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub state: State,
    pub z: u32,
    pub eta: f64,
    pub space: SpaceKind,
}

impl Case {
    pub fn z_mu(&self) -> f64 {
        self.z as f64 * sommerfeld_mu()
    }

    pub fn deformation(&self) -> Result<DeformationParams> {
        DeformationParams::from_eta(self.space, self.eta, &UnitSystem::natural())
    }
}

/// Cartesian grid of charges, deformations, branches and states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub charges: Vec<u32>,
    pub etas: Vec<f64>,
    pub spaces: Vec<SpaceKind>,
    pub equations: Vec<EquationKind>,
    pub max_principal: u32,
}

impl Grid {
    /// Z ∈ {1, 5, 20}, N ≤ 6, η ∈ {1e-8, 1e-4, 1e-2}, both branches and equations.
    pub fn rootfind_default() -> Self {
        Self {
            charges: vec![1, 5, 20],
            etas: vec![1e-8, 1e-4, 1e-2],
            spaces: SpaceKind::BOTH.to_vec(),
            equations: vec![EquationKind::KleinGordon, EquationKind::Dirac],
            max_principal: 6,
        }
    }

    /// AdS smoke grid for the shooting oracle: Z ∈ {1, 5, 20}, N ≤ 3,
    /// η ∈ {1e-4, 1e-2}.
    pub fn shoot_default() -> Self {
        Self {
            charges: vec![1, 5, 20],
            etas: vec![1e-4, 1e-2],
            spaces: vec![SpaceKind::AntiDeSitter],
            equations: vec![EquationKind::KleinGordon, EquationKind::Dirac],
            max_principal: 3,
        }
    }

    pub fn cases(&self) -> Vec<Case> {
        let mut out = Vec::new();
        for &kind in &self.equations {
            for &space in &self.spaces {
                for &eta in &self.etas {
                    for &z in &self.charges {
                        for state in State::all_up_to(kind, self.max_principal) {
                            out.push(Case { state, z, eta, space });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub rootfind: f64,
    pub shoot: f64,
    pub identity: f64,
    pub slope: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            rootfind: 1e-9,
            shoot: 1e-6,
            identity: 1e-12,
            slope: 1e-6,
        }
    }
}

/// Closed form against an independent value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub case: Case,
    /// Closed-form E/mc².
    pub closed: Option<f64>,
    pub other: Option<f64>,
    pub rel_error: Option<f64>,
    pub pass: bool,
    pub note: Option<String>,
}

impl Comparison {
    fn from_pair(case: Case, closed: Result<f64>, other: Result<f64>, tol: f64) -> Self {
        match (closed, other) {
            (Ok(c), Ok(o)) => {
                let rel = (c - o).abs() / c.abs();
                Self {
                    case,
                    closed: Some(c),
                    other: Some(o),
                    rel_error: Some(rel),
                    pass: rel <= tol,
                    note: None,
                }
            }
            (c, o) => Self {
                case,
                closed: c.as_ref().ok().copied(),
                other: o.as_ref().ok().copied(),
                rel_error: None,
                pass: false,
                note: Some(c.err().or(o.err()).map(|e| e.to_string()).unwrap_or_default()),
            },
        }
    }
}

/// Closed form against the quantization-condition root.
pub fn check_rootfind(case: &Case, tol: f64) -> Comparison {
    let closed = case
        .deformation()
        .and_then(|d| case.state.energy_ratio(case.z_mu(), d.signed_eta()));
    let root = case
        .deformation()
        .and_then(|d| case.state.quantization(case.z_mu(), &d))
        .and_then(|p| p.solve())
        .map(|l| l.x);
    Comparison::from_pair(*case, closed, root, tol)
}

/// Closed form against the ODE shooting oracle.
pub fn check_shoot(case: &Case, tol: f64, opts: &ShootOptions) -> Comparison {
    let closed = case
        .deformation()
        .and_then(|d| case.state.energy_ratio(case.z_mu(), d.signed_eta()));
    let shot = case
        .deformation()
        .and_then(|d| case.state.shoot(case.z_mu(), &d, opts))
        .map(|r| r.x);
    Comparison::from_pair(*case, closed, shot, tol)
}

/// `E_dS² + E_AdS² = 2ε²` at one state, charge and η.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub state: State,
    pub z: u32,
    pub eta: f64,
    pub rel_error: Option<f64>,
    pub pass: bool,
}

pub fn check_identity(state: State, z: u32, eta: f64, tol: f64) -> IdentityCheck {
    let v = z as f64 * sommerfeld_mu();
    let parts = (|| -> Result<f64> {
        let ds = state.energy_ratio(v, eta)?;
        let ads = state.energy_ratio(v, -eta)?;
        let flat = state.energy_ratio(v, 0.0)?;
        let two = 2.0 * flat * flat;
        Ok((ds * ds + ads * ads - two).abs() / two)
    })();
    let rel_error = parts.ok();
    IdentityCheck {
        state,
        z,
        eta,
        rel_error,
        pass: rel_error.is_some_and(|r| r <= tol),
    }
}

/// Central difference of the exact energy in η against the first-order
/// coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeCheck {
    pub state: State,
    pub z: u32,
    pub step: f64,
    pub finite_difference: Option<f64>,
    pub coefficient: Option<f64>,
    pub rel_error: Option<f64>,
    pub pass: bool,
}

pub fn check_slope(state: State, z: u32, step: f64, tol: f64) -> SlopeCheck {
    let v = z as f64 * sommerfeld_mu();
    // Signed η runs continuously through both branches.
    let fd =
        (|| -> Result<f64> { Ok((state.energy_ratio(v, step)? - state.energy_ratio(v, -step)?) / (2.0 * step)) })()
            .ok();
    let coefficient = state.first_order_slope(v).ok();
    let rel_error = match (fd, coefficient) {
        (Some(f), Some(c)) => Some((f - c).abs() / c.abs()),
        _ => None,
    };
    SlopeCheck {
        state,
        z,
        step,
        finite_difference: fd,
        coefficient,
        rel_error,
        pass: rel_error.is_some_and(|r| r <= tol),
    }
}

/// Twenty (state, Z) pairs over both equations, N ≤ 4 and Z up to 80.
///
/// Only n ≥ 1 states: for n = 0 the slope is O((Zμ)²) (spin-0) or exactly
/// zero (spin-1/2), and a step of 1e-8 cannot resolve it to 1e-6 relative.
pub fn slope_sample() -> Vec<(State, u32)> {
    let charges = [1u32, 5, 20, 50, 80];
    let kg: Vec<State> = [(2, 0), (3, 0), (3, 1), (4, 1), (4, 2)]
        .into_iter()
        .map(|(n, l)| State::Kg(KgState::new(n, l).expect("valid state")))
        .collect();
    let dirac: Vec<State> = [(2, -1), (2, 1), (3, -2), (3, 2), (4, -1)]
        .into_iter()
        .map(|(n, k)| State::Dirac(DiracState::new(n, k).expect("valid state")))
        .collect();
    kg.into_iter()
        .chain(dirac)
        .enumerate()
        .flat_map(|(i, s)| [(s, charges[i % 5]), (s, charges[(i + 2) % 5])])
        .collect()
}

/// Summary of a list of checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub cases: usize,
    pub failures: usize,
    pub max_rel_error: f64,
}

impl Tally {
    pub fn new(items: impl IntoIterator<Item = (bool, Option<f64>)>) -> Self {
        let mut t = Tally {
            cases: 0,
            failures: 0,
            max_rel_error: 0.0,
        };
        for (pass, rel) in items {
            t.cases += 1;
            if !pass {
                t.failures += 1;
            }
            if let Some(r) = rel {
                t.max_rel_error = t.max_rel_error.max(r);
            }
        }
        t
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

pub fn run_rootfind(grid: &Grid, tol: f64) -> Vec<Comparison> {
    grid.cases().iter().map(|c| check_rootfind(c, tol)).collect()
}

pub fn run_shoot(grid: &Grid, tol: f64, opts: &ShootOptions) -> Vec<Comparison> {
    grid.cases().iter().map(|c| check_shoot(c, tol, opts)).collect()
}

/// Identity on the (state, Z, η) points of a grid; the branch list is ignored.
pub fn run_identity(grid: &Grid, tol: f64) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for &kind in &grid.equations {
        for &eta in &grid.etas {
            for &z in &grid.charges {
                for s in State::all_up_to(kind, grid.max_principal) {
                    out.push(check_identity(s, z, eta, tol));
                }
            }
        }
    }
    out
}

pub fn run_slopes(step: f64, tol: f64) -> Vec<SlopeCheck> {
    slope_sample()
        .into_iter()
        .map(|(s, z)| check_slope(s, z, step, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_large_enough() {
        assert!(Grid::rootfind_default().cases().len() >= 400);
        assert!(Grid::shoot_default().cases().len() >= 12);
        assert_eq!(slope_sample().len(), 20);
    }

    #[test]
    fn rootfind_agrees_on_a_subgrid() {
        let grid = Grid {
            charges: vec![5],
            etas: vec![1e-4],
            max_principal: 3,
            ..Grid::rootfind_default()
        };
        let t = Tally::new(run_rootfind(&grid, 1e-9).iter().map(|c| (c.pass, c.rel_error)));
        assert!(t.passed(), "{t:?}");
    }

    #[test]
    fn identity_holds() {
        let t = Tally::new(
            run_identity(&Grid::rootfind_default(), 1e-12)
                .iter()
                .map(|c| (c.pass, c.rel_error)),
        );
        assert!(t.passed(), "{t:?}");
    }

    #[test]
    fn slopes_match() {
        let checks = run_slopes(1e-8, 1e-6);
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn failed_evaluation_is_reported_not_panicking() {
        let case = Case {
            state: State::Kg(KgState::new(1, 0).unwrap()),
            z: 80,
            eta: 1e-4,
            space: SpaceKind::DeSitter,
        };
        let c = check_rootfind(&case, 1e-9);
        assert!(!c.pass);
        assert!(c.note.is_some());
    }
}
