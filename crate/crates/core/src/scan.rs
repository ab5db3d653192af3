//! Energy series in N or Z with validity flags, for plotting.

use crate::error::{Error, Result};
use crate::model::{sommerfeld_mu, DiracState, KgState, SpaceKind, Validity};
use crate::quantize::EquationKind;
use crate::verify::State;
use serde::{Deserialize, Serialize};

/// The angular quantum numbers held fixed along a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Spin-0 with orbital ℓ.
    Kg { l: u32 },
    /// Spin-1/2 with total `j = two_j/2`; the energy does not depend on ℓ.
    Dirac { two_j: u32 },
}

impl Family {
    pub fn kind(&self) -> EquationKind {
        match self {
            Family::Kg { .. } => EquationKind::KleinGordon,
            Family::Dirac { .. } => EquationKind::Dirac,
        }
    }

    /// Smallest principal number carrying these angular numbers.
    pub fn lowest_principal(&self) -> u32 {
        match *self {
            Family::Kg { l } => l + 1,
            Family::Dirac { two_j } => two_j.div_ceil(2),
        }
    }

    pub fn state(&self, principal: u32) -> Result<State> {
        match *self {
            Family::Kg { l } => KgState::new(principal, l).map(State::Kg),
            Family::Dirac { two_j } => DiracState::from_j(principal, two_j).map(State::Dirac),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub principal: u32,
    pub z: u32,
    pub eta: f64,
    pub space: SpaceKind,
    /// E/mc².
    pub energy: Option<f64>,
    /// Undeformed ε/mc².
    pub epsilon: Option<f64>,
    /// E/ε.
    pub ratio: Option<f64>,
    pub validity: Validity,
}

/// Evaluates one point. Gate violations become flags, not errors; only
/// malformed quantum numbers are errors.
pub fn point(family: Family, principal: u32, z: u32, eta: f64, space: SpaceKind) -> Result<ScanPoint> {
    let state = family.state(principal)?;
    let v = z as f64 * sommerfeld_mu();
    let classify = |r: Result<f64>| match r {
        Ok(x) => Ok((Some(x), Validity::Ok)),
        Err(Error::ComplexExponent(_)) => Ok((None, Validity::ComplexExponent)),
        Err(Error::UnphysicalRadicand(_)) => Ok((None, Validity::UnphysicalRadicand)),
        Err(e) => Err(e),
    };
    let (epsilon, flat_validity) = classify(state.energy_ratio(v, 0.0))?;
    let (energy, validity) = classify(state.energy_ratio(v, space.sign() * eta))?;
    let validity = if flat_validity == Validity::Ok {
        validity
    } else {
        flat_validity
    };
    let ratio = match (energy, epsilon) {
        (Some(e), Some(f)) if f != 0.0 => Some(e / f),
        _ => None,
    };
    Ok(ScanPoint {
        principal,
        z,
        eta,
        space,
        energy,
        epsilon,
        ratio,
        validity,
    })
}

/// Series in N at fixed Z, one block per (η, branch), in input order.
pub fn scan_principal(
    family: Family,
    principals: impl IntoIterator<Item = u32> + Clone,
    z: u32,
    etas: &[f64],
    spaces: &[SpaceKind],
) -> Result<Vec<ScanPoint>> {
    let mut out = Vec::new();
    for &space in spaces {
        for &eta in etas {
            for n in principals.clone() {
                out.push(point(family, n, z, eta, space)?);
            }
        }
    }
    Ok(out)
}

/// Series in Z at fixed N.
pub fn scan_charge(
    family: Family,
    principal: u32,
    charges: impl IntoIterator<Item = u32> + Clone,
    etas: &[f64],
    spaces: &[SpaceKind],
) -> Result<Vec<ScanPoint>> {
    let mut out = Vec::new();
    for &space in spaces {
        for &eta in etas {
            for z in charges.clone() {
                out.push(point(family, principal, z, eta, space)?);
            }
        }
    }
    Ok(out)
}

/// Last Z in `1..=limit` with a valid undeformed level, scanning upward.
pub fn last_valid_charge(family: Family, principal: u32, limit: u32) -> Result<Option<u32>> {
    let mut last = None;
    for z in 1..=limit {
        match point(family, principal, z, 0.0, SpaceKind::DeSitter)?.validity {
            Validity::Ok => last = Some(z),
            _ => break,
        }
    }
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undeformed_series_is_identically_one() {
        let pts = scan_principal(Family::Kg { l: 0 }, 1..=8, 50, &[0.0], &SpaceKind::BOTH).unwrap();
        assert!(pts.iter().all(|p| p.ratio == Some(1.0)));
    }

    #[test]
    fn gates() {
        assert_eq!(last_valid_charge(Family::Kg { l: 0 }, 1, 300).unwrap(), Some(68));
        assert_eq!(last_valid_charge(Family::Kg { l: 1 }, 3, 300).unwrap(), Some(205));
        assert_eq!(
            last_valid_charge(Family::Dirac { two_j: 1 }, 2, 300).unwrap(),
            Some(137)
        );
        assert_eq!(
            last_valid_charge(Family::Dirac { two_j: 3 }, 4, 300).unwrap(),
            Some(274)
        );
    }

    #[test]
    fn points_beyond_the_gate_are_flagged() {
        let p = point(Family::Kg { l: 0 }, 1, 69, 1e-4, SpaceKind::AntiDeSitter).unwrap();
        assert_eq!(p.validity, Validity::ComplexExponent);
        assert!(p.energy.is_none() && p.ratio.is_none());
        assert!(point(Family::Kg { l: 3 }, 2, 1, 0.0, SpaceKind::DeSitter).is_err());
    }
}
