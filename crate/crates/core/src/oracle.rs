//! Shooting solver for the deformed radial equations.
//!
//! Works directly on the second-order radial equations, without the
//! hypergeometric reduction. In anti-de Sitter space the equation is
//! integrated in θ (r = sin θ/√η) over (0, π): both ends are regular
//! singular points with exponents ±e, and the bound states are the energies
//! at which the solutions regular at the two ends are proportional.

use crate::dirac;
use crate::error::{Error, Result};
use crate::kg;
use crate::model::{DeformationParams, DiracState, KgState, SpaceKind};
use crate::numerics::{brent, Dopri5, OdeOptions, RootOptions, Step};
use crate::quantize::EquationKind;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Radial equation for `𝔽 = √r ψ` (spin-0) or `Ξ = √r g₂` (spin-1/2) at a
/// trial energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialOde {
    pub kind: EquationKind,
    /// δ² (spin-0) or γ (spin-1/2).
    pub parameter: f64,
    pub z_mu: f64,
    pub eta: f64,
    pub space: SpaceKind,
    /// Trial E/mc².
    pub x: f64,
}

/// `second·F'' + first·F' + (centrifugal + coulomb + constant)·F = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub second: f64,
    pub first: f64,
    pub centrifugal: f64,
    pub coulomb: f64,
    pub constant: f64,
}

impl Coefficients {
    pub fn zeroth(&self) -> f64 {
        self.centrifugal + self.coulomb + self.constant
    }
}

impl RadialOde {
    pub fn kg(state: &KgState, z_mu: f64, deformation: &DeformationParams, x: f64) -> Result<Self> {
        let d2 = kg::delta_squared(state.l(), z_mu);
        if !(d2 > 0.0) {
            return Err(Error::ComplexExponent(format!("ℓ+1/2 > Zμ (ℓ = {})", state.l())));
        }
        Ok(Self {
            kind: EquationKind::KleinGordon,
            parameter: d2,
            z_mu,
            eta: deformation.eta(),
            space: deformation.space(),
            x,
        })
    }

    pub fn dirac(state: &DiracState, z_mu: f64, deformation: &DeformationParams, x: f64) -> Result<Self> {
        Ok(Self {
            kind: EquationKind::Dirac,
            parameter: dirac::gamma(state.kappa(), z_mu)?,
            z_mu,
            eta: deformation.eta(),
            space: deformation.space(),
            x,
        })
    }

    pub fn with_energy(self, x: f64) -> Self {
        Self { x, ..self }
    }

    fn signed_eta(&self) -> f64 {
        self.space.sign() * self.eta
    }

    /// Exponent of the regular solution at r = 0: δ or γ − 1/2.
    pub fn indicial_exponent(&self) -> f64 {
        match self.kind {
            EquationKind::KleinGordon => self.parameter.sqrt(),
            EquationKind::Dirac => self.parameter - 0.5,
        }
    }

    /// `(r_min, r_max)`: the launch radius and the end of the radial domain.
    pub fn domain(&self) -> (f64, f64) {
        if self.eta == 0.0 {
            return (1e-6, f64::INFINITY);
        }
        let scale = 1.0 / self.eta.sqrt();
        let r_max = match self.space {
            SpaceKind::DeSitter => f64::INFINITY,
            SpaceKind::AntiDeSitter => scale,
        };
        (1e-6 * scale, r_max)
    }

    /// Coefficients of the radial equation at `r`.
    pub fn coefficients(&self, r: f64) -> Result<Coefficients> {
        let se = self.signed_eta();
        let s2 = 1.0 + se * r * r;
        if !(r > 0.0) || s2 <= 0.0 {
            return Err(Error::Domain(format!(
                "r = {r} is a singular point or outside the domain"
            )));
        }
        let (centrifugal, constant) = match self.kind {
            EquationKind::KleinGordon => (-s2 * self.parameter / (r * r), -0.5 * se),
            EquationKind::Dirac => {
                let e = self.parameter - 0.5;
                (-e * e / (r * r), -se * (self.parameter * self.parameter - 0.25))
            }
        };
        Ok(Coefficients {
            second: s2,
            first: s2 / r + se * r,
            centrifugal,
            coulomb: 2.0 * self.z_mu * self.x * s2.sqrt() / r,
            constant: constant + self.x * self.x - 1.0,
        })
    }

    /// `d/dr [F, F']`.
    pub fn rhs(&self, r: f64, state: [f64; 2]) -> Result<[f64; 2]> {
        let c = self.coefficients(r)?;
        Ok([state[1], -(c.first * state[1] + c.zeroth() * state[0]) / c.second])
    }

    /// θ-form of the equation divided by η, written as
    /// `F'' + c(θ) F' + Q(θ) F = 0`; returns Q.
    pub fn q_angle(&self, theta: f64) -> f64 {
        let (s, c) = match self.space {
            SpaceKind::DeSitter => (theta.sinh(), 1.0 / theta.tanh()),
            SpaceKind::AntiDeSitter => (theta.sin(), 1.0 / theta.tan()),
        };
        let e = self.indicial_exponent();
        let base = match self.kind {
            EquationKind::KleinGordon => self.parameter + 0.75,
            EquationKind::Dirac => self.parameter * self.parameter,
        };
        let beta = self.z_mu * self.x / self.eta.sqrt();
        -e * e / (s * s) + 2.0 * beta * c + (self.x * self.x - 1.0) / self.eta - self.space.sign() * (base - 0.25)
    }

    /// `d/dθ [F, P]` with `P = s(θ) dF/dθ`, s = sinh θ (dS) or sin θ (AdS).
    pub fn rhs_angle(&self, theta: f64, state: [f64; 2]) -> [f64; 2] {
        let s = match self.space {
            SpaceKind::DeSitter => theta.sinh(),
            SpaceKind::AntiDeSitter => theta.sin(),
        };
        [state[1] / s, -s * self.q_angle(theta) * state[0]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootOptions {
    pub rtol: f64,
    /// Launch angle at both ends; r_min = θ₀/√η to first order.
    pub theta_start: f64,
    /// Trial energies scanned across the bracket before refining.
    pub scan_points: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            theta_start: 1e-6,
            scan_points: 24,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootResult {
    /// E/mc².
    pub x: f64,
    /// Normalized Wronskian at the converged energy.
    pub matching_residual: f64,
    /// Change of the energy between tolerance `rtol` and `rtol/16`.
    pub error_estimate: f64,
    pub nodes: usize,
    pub evaluations: usize,
}

struct Shot {
    wronskian: f64,
    nodes: usize,
}

fn launch(e: f64, beta: f64, theta0: f64, sign: f64) -> [f64; 2] {
    // F = φ^e (1 + c₁φ), φ the distance from the end; normalized to F = 1.
    let c1 = -sign * 2.0 * beta / (2.0 * e + 1.0);
    let dlog = e / theta0 + c1 / (1.0 + c1 * theta0);
    // P = sin θ dF/dθ, and dF/dθ = −dF/dφ at the θ = π end.
    [1.0, sign * theta0.sin() * dlog]
}

fn integrate_side(ode: &RadialOde, from: f64, to: f64, y0: [f64; 2], rtol: f64) -> Result<([f64; 2], usize)> {
    let mut solver = Dopri5::<2>::new(OdeOptions {
        rtol,
        atol: rtol * 1e-3,
        h0: 1e-2 * ode_start_scale(from, to),
        ..OdeOptions::default()
    });
    let mut nodes = 0;
    let mut last = y0[0].signum();
    let (_, y) = solver.solve(
        |t, y| ode.rhs_angle(t, *y),
        from,
        y0,
        to,
        |_, y| {
            if y[0] != 0.0 && y[0].signum() != last {
                nodes += 1;
                last = y[0].signum();
            }
            let m = y[0].abs().max(y[1].abs());
            if !(1e-3..=1e3).contains(&m) {
                y[0] /= m;
                y[1] /= m;
                Step::Modified
            } else {
                Step::Continue
            }
        },
    )?;
    Ok((y, nodes))
}

fn ode_start_scale(from: f64, to: f64) -> f64 {
    let d = from.min(PI - from);
    d.max(1e-12).min((to - from).abs())
}

/// Matching angle: the inner classical turning point of the normal form
/// `u = √(sin θ) F`, `u'' + (Q + 1/4 + 1/(4 sin²θ)) u = 0`, but no closer to
/// the origin than the geometric mean of θ₀ and π/2 (the angles of r_min
/// and of r = 1/√η). Inside the centrifugal barrier the irregular solution
/// swamps the regular one and a slightly wrong energy shows up as a node.
fn matching_angle(ode: &RadialOde, theta0: f64) -> f64 {
    let floor = (theta0 * FRAC_PI_2).sqrt();
    let qn = |t: f64| {
        let s = t.sin();
        ode.q_angle(t) + 0.25 + 0.25 / (s * s)
    };
    let steps = 400;
    let ratio = (FRAC_PI_2 / floor).powf(1.0 / steps as f64);
    let mut t = floor;
    for _ in 0..=steps {
        if qn(t) > 0.0 {
            return t;
        }
        t *= ratio;
    }
    FRAC_PI_2
}

fn shoot_once(ode: &RadialOde, opts: &ShootOptions, tm: f64) -> Result<Shot> {
    let e = ode.indicial_exponent();
    let beta = ode.z_mu * ode.x / ode.eta.sqrt();
    let t0 = opts.theta_start;
    let (l, nl) = integrate_side(ode, t0, tm, launch(e, beta, t0, 1.0), opts.rtol)?;
    let (r, nr) = integrate_side(ode, PI - t0, tm, launch(e, beta, t0, -1.0), opts.rtol)?;
    let w = l[0] * r[1] - r[0] * l[1];
    let scale = (l[0].hypot(l[1])) * (r[0].hypot(r[1]));
    Ok(Shot {
        wronskian: w / scale,
        nodes: nl + nr,
    })
}

fn shoot_at_tolerance(ode: &RadialOde, n_target: u32, bracket: (f64, f64), opts: &ShootOptions) -> Result<ShootResult> {
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::NoEigenvalue(format!("empty bracket [{lo}, {hi}]")));
    }
    // Fixed for the whole search so that the Wronskian is continuous in x.
    let tm = matching_angle(&ode.with_energy(0.5 * (lo + hi)), opts.theta_start);
    let mut evaluations = 0;
    let mut eval = |x: f64| -> Result<Shot> {
        evaluations += 1;
        shoot_once(&ode.with_energy(x), opts, tm)
    };
    let pts = opts.scan_points.max(2);
    let xs: Vec<f64> = (0..=pts).map(|i| lo + (hi - lo) * i as f64 / pts as f64).collect();
    let mut ws = Vec::with_capacity(xs.len());
    for &x in &xs {
        ws.push(eval(x)?.wronskian);
    }
    let mut failure = None;
    for i in 0..pts {
        if ws[i].signum() == ws[i + 1].signum() && ws[i] != 0.0 {
            continue;
        }
        let mut inner_err = None;
        let root = brent(
            |x| match eval(x) {
                Ok(s) => s.wronskian,
                Err(e) => {
                    inner_err.get_or_insert(e);
                    f64::NAN
                }
            },
            xs[i],
            xs[i + 1],
            RootOptions {
                xtol: 1e-15,
                rtol: 4.0 * f64::EPSILON,
                max_iter: 200,
            },
        );
        if let Some(e) = inner_err {
            return Err(e);
        }
        let x = match root {
            Ok(x) => x,
            Err(e) => {
                failure = Some(e);
                continue;
            }
        };
        let shot = eval(x)?;
        if shot.nodes == n_target as usize {
            return Ok(ShootResult {
                x,
                matching_residual: shot.wronskian,
                error_estimate: 0.0,
                nodes: shot.nodes,
                evaluations,
            });
        }
    }
    Err(Error::NoEigenvalue(match failure {
        Some(e) => format!("no root with {n_target} nodes in [{lo}, {hi}] ({e})"),
        None => format!("no root with {n_target} nodes in [{lo}, {hi}]"),
    }))
}

/// Finds the eigenvalue with `n_target` nodes inside `bracket` (in E/mc²).
///
/// Only anti-de Sitter space is supported; spin-1/2 needs γ > 1/2.
pub fn shoot_eigenvalue(
    template: &RadialOde,
    n_target: u32,
    bracket: (f64, f64),
    opts: &ShootOptions,
) -> Result<ShootResult> {
    if template.space != SpaceKind::AntiDeSitter {
        return Err(Error::InvalidParameter(
            "shooting is implemented for anti-de Sitter space only".into(),
        ));
    }
    if template.eta == 0.0 {
        return Err(Error::ZeroDeformation("the angular coordinate needs η > 0"));
    }
    if !(template.indicial_exponent() > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "indicial exponent {} ≤ 0 (γ ≤ 1/2)",
            template.indicial_exponent()
        )));
    }
    let coarse = shoot_at_tolerance(template, n_target, bracket, opts)?;
    let fine_opts = ShootOptions {
        rtol: opts.rtol / 16.0,
        ..*opts
    };
    let fine = shoot_at_tolerance(template, n_target, bracket, &fine_opts)?;
    Ok(ShootResult {
        error_estimate: (fine.x - coarse.x).abs().max(4.0 * f64::EPSILON * fine.x.abs()),
        evaluations: coarse.evaluations + fine.evaluations,
        ..fine
    })
}

/// Search window around level `n` made from the midpoints to its neighbours
/// with the same angular quantum numbers; `lowest` is the smallest allowed n.
fn bracket_from_levels(level: impl Fn(u32) -> Result<f64>, n: u32, lowest: u32) -> Result<(f64, f64)> {
    let here = level(n)?;
    let above = level(n + 1)?;
    let below = if n <= lowest { 2.0 * here - above } else { level(n - 1)? };
    Ok((0.5 * (below + here), 0.5 * (here + above)))
}

/// Shoots a spin-0 level, bracketing it with the closed-form neighbours.
pub fn shoot_kg(
    state: &KgState,
    z_mu: f64,
    deformation: &DeformationParams,
    opts: &ShootOptions,
) -> Result<ShootResult> {
    let se = deformation.signed_eta();
    let level = |n: u32| kg::energy_ratio(&KgState::new(n + state.l() + 1, state.l())?, z_mu, se);
    let bracket = bracket_from_levels(level, state.radial(), 0)?;
    let ode = RadialOde::kg(state, z_mu, deformation, bracket.0)?;
    shoot_eigenvalue(&ode, state.radial(), bracket, opts)
}

/// Shoots a spin-1/2 level (g₂ equation).
pub fn shoot_dirac(
    state: &DiracState,
    z_mu: f64,
    deformation: &DeformationParams,
    opts: &ShootOptions,
) -> Result<ShootResult> {
    let se = deformation.signed_eta();
    let k = state.kappa();
    let level = |n: u32| {
        let principal = n + state.j_plus_half();
        dirac::energy_ratio(&DiracState::new(principal, k)?, z_mu, se)
    };
    let lowest = u32::from(k > 0);
    let bracket = bracket_from_levels(level, state.radial(), lowest)?;
    let ode = RadialOde::dirac(state, z_mu, deformation, bracket.0)?;
    shoot_eigenvalue(&ode, state.radial(), bracket, opts)
}
