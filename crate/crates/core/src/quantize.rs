//! Direct solution of the transcendental quantization conditions.
//!
//! Both conditions share one shape. With `x = E/mc²`, `β = Zμx/√η` and
//!
//! ```text
//! R∓(x) = base + (1 − x²)/η ∓ 2β
//! ```
//!
//! the de Sitter condition is `offset + n + σ·½√R₋ − ½√R₊ = 0`, where
//! `base = δ² + 3/4`, `offset = 1/2 + δ` (spin-0) or `base = γ²`,
//! `offset = γ` (spin-1/2). The sign σ selects which root of the indicial
//! equation at `y = 0` is kept: σ = +1 when `β > ν²`, σ = −1 otherwise,
//! with `ν = offset + n`.
//!
//! In anti-de Sitter the two radicands become complex conjugates and the
//! condition reads `offset + n − Re√(base − (1 − x²)/η + 2iβ) = 0`.

use serde::{Deserialize, Serialize};

use crate::dirac;
use crate::error::{Error, Result};
use crate::kg;
use crate::model::{DeformationParams, DiracState, KgState, SpaceKind};
use crate::numerics::{brent, RootOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquationKind {
    KleinGordon,
    Dirac,
}

impl EquationKind {
    pub fn label(self) -> &'static str {
        match self {
            EquationKind::KleinGordon => "kg",
            EquationKind::Dirac => "dirac",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationProblem {
    pub kind: EquationKind,
    /// δ² (spin-0) or γ² (spin-1/2).
    pub exponent_sq: f64,
    pub z_mu: f64,
    pub eta: f64,
    /// Radial index (polynomial degree).
    pub n: u32,
    pub space: SpaceKind,
}

/// Which square-root combination the residual was evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadicalBranch {
    /// σ = +1 (de Sitter).
    Plus,
    /// σ = −1 (de Sitter).
    Minus,
    /// Conjugate radicals (anti-de Sitter).
    Conjugate,
}

impl RadicalBranch {
    fn sigma(self) -> f64 {
        match self {
            RadicalBranch::Plus => 1.0,
            _ => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizedLevel {
    /// E/mc².
    pub x: f64,
    pub residual: f64,
    pub branch: RadicalBranch,
    pub evaluations: usize,
}

impl QuantizationProblem {
    pub fn new(kind: EquationKind, exponent_sq: f64, z_mu: f64, eta: f64, n: u32, space: SpaceKind) -> Result<Self> {
        if !(exponent_sq > 0.0) {
            return Err(Error::ComplexExponent(format!(
                "positive exponent² (got {exponent_sq:e})"
            )));
        }
        if eta == 0.0 {
            return Err(Error::ZeroDeformation(
                "the quantization condition contains 1/η; use the closed form",
            ));
        }
        if !(eta > 0.0) {
            return Err(Error::NegativeLambda(eta));
        }
        Ok(Self {
            kind,
            exponent_sq,
            z_mu,
            eta,
            n,
            space,
        })
    }

    pub fn kg(state: &KgState, z_mu: f64, deformation: &DeformationParams) -> Result<Self> {
        Self::new(
            EquationKind::KleinGordon,
            kg::delta_squared(state.l(), z_mu),
            z_mu,
            deformation.eta(),
            state.radial(),
            deformation.space(),
        )
    }

    pub fn dirac(state: &DiracState, z_mu: f64, deformation: &DeformationParams) -> Result<Self> {
        let g = dirac::gamma(state.kappa(), z_mu)?;
        Self::new(
            EquationKind::Dirac,
            g * g,
            z_mu,
            deformation.eta(),
            state.radial(),
            deformation.space(),
        )
    }

    fn exponent(&self) -> f64 {
        self.exponent_sq.sqrt()
    }

    fn base(&self) -> f64 {
        match self.kind {
            EquationKind::KleinGordon => self.exponent_sq + 0.75,
            EquationKind::Dirac => self.exponent_sq,
        }
    }

    fn offset(&self) -> f64 {
        match self.kind {
            EquationKind::KleinGordon => 0.5 + self.exponent(),
            EquationKind::Dirac => self.exponent(),
        }
    }

    /// ν = offset + n, the effective principal number.
    pub fn nu(&self) -> f64 {
        self.offset() + self.n as f64
    }

    fn beta(&self, x: f64) -> f64 {
        self.z_mu * x / self.eta.sqrt()
    }

    /// Energy-dependent part of both radicands, `base + s(1 − x²)/η`.
    fn core(&self, x: f64) -> f64 {
        self.base() + self.space.sign() * (1.0 - x) * (1.0 + x) / self.eta
    }

    /// Admissible `x` range. In de Sitter this is where `R₋ ≥ 0`; in
    /// anti-de Sitter only `x ≥ 0` is required and the upper end is open.
    pub fn admissible_interval(&self) -> (f64, f64) {
        match self.space {
            SpaceKind::DeSitter => {
                let se = self.eta.sqrt();
                let hi = (1.0 + self.eta * (self.z_mu * self.z_mu + self.base())).sqrt() - self.z_mu * se;
                (0.0, hi)
            }
            SpaceKind::AntiDeSitter => (0.0, f64::INFINITY),
        }
    }

    /// Residual on an explicitly chosen branch.
    pub fn residual_on_branch(&self, x: f64, branch: RadicalBranch) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::OutOfDomain(format!("E/mc² = {x} is negative")));
        }
        let core = self.core(x);
        let beta = self.beta(x);
        match (self.space, branch) {
            (SpaceKind::DeSitter, RadicalBranch::Plus | RadicalBranch::Minus) => {
                let r_minus = core - 2.0 * beta;
                let r_plus = core + 2.0 * beta;
                if r_minus < 0.0 {
                    // Tolerate rounding at the interval end.
                    if r_minus > -1e-12 * core.abs().max(1.0) {
                        return Ok(self.nu() - 0.5 * r_plus.sqrt());
                    }
                    return Err(Error::OutOfDomain(format!("radicand {r_minus:e} < 0 at E/mc² = {x}")));
                }
                Ok(self.nu() + 0.5 * branch.sigma() * r_minus.sqrt() - 0.5 * r_plus.sqrt())
            }
            (SpaceKind::AntiDeSitter, RadicalBranch::Conjugate) => Ok(self.nu() - sqrt_re(core, 2.0 * beta)),
            _ => Err(Error::OutOfDomain(format!(
                "branch {branch:?} does not exist in {}",
                self.space
            ))),
        }
    }

    /// The branch the condition uses at `x`.
    pub fn branch_at(&self, x: f64) -> RadicalBranch {
        match self.space {
            SpaceKind::AntiDeSitter => RadicalBranch::Conjugate,
            SpaceKind::DeSitter => {
                let nu = self.nu();
                if self.beta(x) > nu * nu {
                    RadicalBranch::Plus
                } else {
                    RadicalBranch::Minus
                }
            }
        }
    }

    /// Residual of the quantization condition at `x = E/mc²`.
    pub fn residual(&self, x: f64) -> Result<f64> {
        self.residual_on_branch(x, self.branch_at(x))
    }

    /// The de Sitter condition traced as one continuous curve: `t ∈ [0, 1]`
    /// walks `x` up the admissible interval on σ = +1, `t ∈ [1, 2]` walks
    /// back down on σ = −1. The two halves meet where `R₋ = 0`.
    pub fn loop_residual(&self, t: f64) -> Result<f64> {
        let (_, hi) = self.admissible_interval();
        let (x, branch) = loop_point(t, hi);
        self.residual_on_branch(x, branch)
    }

    /// Finds the bound-state energy. Fails with `NoRoot` when the condition
    /// has no solution (de Sitter levels beyond the truncation).
    pub fn solve(&self) -> Result<QuantizedLevel> {
        let opts = RootOptions {
            xtol: 1e-16,
            rtol: 2.0 * f64::EPSILON,
            max_iter: 200,
        };
        let mut evaluations = 0;
        match self.space {
            SpaceKind::DeSitter => {
                let (_, hi) = self.admissible_interval();
                let t = brent(
                    |t| {
                        evaluations += 1;
                        self.loop_residual(t).unwrap_or(f64::NAN)
                    },
                    0.0,
                    2.0,
                    opts,
                )?;
                let (x, branch) = loop_point(t, hi);
                Ok(QuantizedLevel {
                    x,
                    residual: self.residual_on_branch(x, branch)?,
                    branch,
                    evaluations,
                })
            }
            SpaceKind::AntiDeSitter => {
                let mut hi = 2.0;
                while self.residual_on_branch(hi, RadicalBranch::Conjugate)? > 0.0 {
                    hi *= 2.0;
                    if hi > 1e300 {
                        return Err(Error::NoRoot);
                    }
                }
                let x = brent(
                    |x| {
                        evaluations += 1;
                        self.residual_on_branch(x, RadicalBranch::Conjugate).unwrap_or(f64::NAN)
                    },
                    0.0,
                    hi,
                    opts,
                )?;
                Ok(QuantizedLevel {
                    x,
                    residual: self.residual_on_branch(x, RadicalBranch::Conjugate)?,
                    branch: RadicalBranch::Conjugate,
                    evaluations,
                })
            }
        }
    }
}

fn loop_point(t: f64, hi: f64) -> (f64, RadicalBranch) {
    if t <= 1.0 {
        (t * hi, RadicalBranch::Plus)
    } else {
        ((2.0 - t) * hi, RadicalBranch::Minus)
    }
}

/// Re√(a + ib) without cancellation.
fn sqrt_re(a: f64, b: f64) -> f64 {
    let m = a.hypot(b);
    if a >= 0.0 {
        (0.5 * (m + a)).sqrt()
    } else {
        let d = (0.5 * (m - a)).sqrt();
        if d == 0.0 {
            0.0
        } else {
            0.5 * b.abs() / d
        }
    }
}
