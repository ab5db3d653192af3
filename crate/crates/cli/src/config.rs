//! Run configuration: flags merged over an optional JSON file.

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use eup_coulomb::{
    DeformationParams, DiracState, EquationKind, Family, KgState, SpaceKind, State, UnitMode, UnitSystem,
};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Eq {
    Kg,
    Dirac,
}

impl Eq {
    pub fn kind(self) -> EquationKind {
        match self {
            Eq::Kg => EquationKind::KleinGordon,
            Eq::Dirac => EquationKind::Dirac,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Ds,
    Ads,
    Both,
}

impl Space {
    pub fn kinds(self) -> Vec<SpaceKind> {
        match self {
            Space::Ds => vec![SpaceKind::DeSitter],
            Space::Ads => vec![SpaceKind::AntiDeSitter],
            Space::Both => SpaceKind::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Natural,
    Physical,
}

impl Units {
    pub fn system(self) -> UnitSystem {
        match self {
            Units::Natural => UnitSystem::new(UnitMode::Natural),
            Units::Physical => UnitSystem::new(UnitMode::Physical),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rootfind,
    Shoot,
    Identity,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Vary {
    #[value(name = "N")]
    #[serde(rename = "N")]
    N,
    #[value(name = "Z")]
    #[serde(rename = "Z")]
    Z,
}

/// Every option any subcommand reads. Unset fields fall back to the config
/// file, then to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Wave equation.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eq: Option<Eq>,

    /// Deformation branch.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<Space>,

    /// Nuclear charge.
    #[arg(long = "Z")]
    #[serde(rename = "Z", skip_serializing_if = "Option::is_none")]
    pub z: Option<u32>,

    /// Principal quantum number.
    #[arg(long = "N")]
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,

    /// Orbital quantum number.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,

    /// Total angular momentum (half-integer).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,

    /// Deformation λ in inverse length squared of the chosen units.
    #[arg(long, conflicts_with_all = ["sqrt_lambda_per_m", "eta", "etas"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,

    /// √λ in m⁻¹.
    #[arg(long, conflicts_with_all = ["eta", "etas"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt_lambda_per_m: Option<f64>,

    /// Dimensionless deformation η = (ħ/mc)²λ.
    #[arg(long, conflicts_with = "etas")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,

    /// Comma-separated η list (scan).
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub etas: Option<Vec<f64>>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    /// Output file; stdout when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// JSON file with any of these options; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Verification route.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,

    /// Scan variable.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vary: Option<Vary>,

    /// First value of the scan variable.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<u32>,

    /// Last value of the scan variable (inclusive).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<u32>,

    /// Sample intervals for the wavefunction dump.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    /// Flags over the file named by `--config`, if any.
    pub fn merged(self) -> Result<Self> {
        let Some(path) = &self.config else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut base: RunConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        overlay!(
            base,
            self,
            eq,
            space,
            z,
            n,
            l,
            j,
            lambda,
            sqrt_lambda_per_m,
            eta,
            etas,
            units,
            format,
            out,
            method,
            vary,
            from,
            to,
            points
        );
        // One deformation source: a flag replaces every source in the file.
        if self.lambda.is_some() || self.sqrt_lambda_per_m.is_some() || self.eta.is_some() || self.etas.is_some() {
            base.lambda = self.lambda;
            base.sqrt_lambda_per_m = self.sqrt_lambda_per_m;
            base.eta = self.eta;
            base.etas = self.etas.clone();
        }
        base.config = self.config;
        Ok(base)
    }

    pub fn units_or(&self, default: Units) -> Units {
        self.units.unwrap_or(default)
    }

    pub fn equation(&self) -> Result<Eq> {
        self.eq.context("--eq {kg,dirac} is required")
    }

    pub fn charge(&self) -> Result<u32> {
        let z = self.z.context("--Z is required")?;
        if z == 0 {
            bail!("--Z must be positive");
        }
        Ok(z)
    }

    /// η from whichever deformation source is set; 0 when none is.
    pub fn single_eta(&self, units: &UnitSystem) -> Result<f64> {
        let sources = [
            self.lambda.is_some(),
            self.sqrt_lambda_per_m.is_some(),
            self.eta.is_some(),
        ];
        if sources.iter().filter(|&&s| s).count() > 1 {
            bail!("give only one of --lambda, --sqrt-lambda-per-m, --eta");
        }
        let eta = if let Some(l) = self.lambda {
            units.eta_from_lambda(l)
        } else if let Some(s) = self.sqrt_lambda_per_m {
            UnitSystem::physical().eta_from_lambda(s * s)
        } else {
            self.eta.unwrap_or(0.0)
        };
        if !(eta >= 0.0) || !eta.is_finite() {
            bail!("the deformation must be a non-negative magnitude, got η = {eta}");
        }
        Ok(eta)
    }

    pub fn deformation(&self, space: SpaceKind, units: &UnitSystem) -> Result<DeformationParams> {
        Ok(DeformationParams::from_eta(space, self.single_eta(units)?, units)?)
    }

    /// 2j from `--j`, which must be a positive half-odd-integer.
    pub fn two_j(&self) -> Result<Option<u32>> {
        let Some(j) = self.j else { return Ok(None) };
        let t = (2.0 * j).round();
        if (2.0 * j - t).abs() > 1e-9 || t < 1.0 || (t as u32).is_multiple_of(2) {
            bail!("--j must be a positive half-odd-integer, got {j}");
        }
        Ok(Some(t as u32))
    }

    /// States selected by `--N`, `--l`, `--j`; missing angular numbers
    /// enumerate every allowed value.
    pub fn states(&self, eq: Eq) -> Result<Vec<State>> {
        let n = self.n.context("--N is required")?;
        match eq {
            Eq::Kg => {
                if self.j.is_some() {
                    bail!("--j does not apply to --eq kg");
                }
                let ls: Vec<u32> = match self.l {
                    Some(l) => vec![l],
                    None => (0..n).collect(),
                };
                ls.into_iter().map(|l| Ok(State::Kg(KgState::new(n, l)?))).collect()
            }
            Eq::Dirac => {
                let pairs: Vec<(u32, u32)> = match (self.l, self.two_j()?) {
                    (Some(l), Some(tj)) => vec![(l, tj)],
                    (None, Some(tj)) => vec![((tj - 1) / 2, tj)],
                    (Some(l), None) => {
                        let mut v = Vec::new();
                        if l > 0 {
                            v.push((l, 2 * l - 1));
                        }
                        v.push((l, 2 * l + 1));
                        v
                    }
                    (None, None) => {
                        return Ok(DiracState::all_up_to(n)
                            .into_iter()
                            .filter(|s| s.principal() == n)
                            .map(State::Dirac)
                            .collect())
                    }
                };
                pairs
                    .into_iter()
                    .map(|(l, tj)| Ok(State::Dirac(DiracState::from_l_j(n, l, tj)?)))
                    .collect()
            }
        }
    }

    /// Angular family for scans.
    pub fn family(&self, eq: Eq) -> Result<Family> {
        Ok(match eq {
            Eq::Kg => Family::Kg { l: self.l.unwrap_or(0) },
            Eq::Dirac => Family::Dirac {
                two_j: self.two_j()?.unwrap_or(1),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_j() {
        let mut c = RunConfig {
            j: Some(1.5),
            ..Default::default()
        };
        assert_eq!(c.two_j().unwrap(), Some(3));
        c.j = Some(1.0);
        assert!(c.two_j().is_err());
    }

    #[test]
    fn sqrt_lambda_is_physical() {
        let c = RunConfig {
            sqrt_lambda_per_m: Some(0.252e6),
            ..Default::default()
        };
        let a = c.single_eta(&UnitSystem::natural()).unwrap();
        let b = c.single_eta(&UnitSystem::physical()).unwrap();
        assert_eq!(a, b);
        assert!((a - 9.469e-15).abs() < 1e-17, "{a}");
    }
}
