//! Relativistic Coulomb bound states for spin-0 and spin-1/2 particles under the
//! extended uncertainty principle, in de Sitter and anti-de Sitter deformations.
//!
//! The crate is organised by physics, not by numerical method:
//!
//! * [`model`]: unit systems, deformation parameters, quantum-number records.
//! * [`kg`] and [`dirac`]: closed-form spectra, their small-deformation
//!   expansions and the validity gates.
//! * [`quantize`]: direct root-finding on the transcendental quantization
//!   conditions, as an algebra-independent check of the closed forms.
//! * [`wavefn`]: terminating hypergeometric radial functions and their
//!   normalization under the deformed measure.
//! * [`oracle`]: an ODE shooting solver for the anti-de Sitter radial equations.
//! * [`verify`]: grid drivers that compare the three routes.
//! * [`scan`]: energy series in N or Z with validity flags.
//!
//! All spectrum formulas work with the dimensionless pair `(Zμ, η)` and the
//! energy ratio `E/mc²`; units are applied only at the API boundary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirac;
pub mod error;
pub mod kg;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod quantize;
pub mod scan;
pub mod verify;
pub mod wavefn;

mod level;

pub use error::{Error, Result};
pub use model::{
    make_deformation, sommerfeld_mu, DeformationParams, DiracState, EnergyResult, KgState, SpaceKind, UnitMode,
    UnitSystem, Validity,
};
pub use quantize::EquationKind;
pub use scan::Family;
pub use verify::State;
