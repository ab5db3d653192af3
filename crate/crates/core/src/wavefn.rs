//! Bound-state radial functions built from terminating hypergeometric series.
//!
//! Everything is evaluated in the angle coordinate θ with
//! `r = sinh θ/√η` (de Sitter) or `r = sin θ/√η` (anti-de Sitter), so that
//! `√(1 + sηr²) d/dr = √η d/dθ` and the deformed measure `dr/√(1 + sηr²)`
//! is `dθ/√η`. In these coordinates
//!
//! ```text
//! dS:   y = −1/(e^{2θ} − 1)            (r ∈ (0, ∞) ↔ θ ∈ (0, ∞))
//! AdS:  y = 1/2 + (i/2) cot θ          (r < 1/√η  ↔ θ ∈ (0, π/2))
//! ```
//!
//! and `ln y`, `ln(1 − y)` have closed forms that never overflow. Lengths are
//! in units of ħ/mc throughout; η plays the role of λ.
//!
//! The solution is `Ξ = y^a (1−y)^b F(−n, B; 1/2 + 2a; y)` with `ψ = Ξ/√r`
//! (spin-0) or `g₂ = Ξ/√r` (spin-1/2). The closed-form exponent formulas give
//! `a_p` and `b_p`; the series terminates for `b = 1/2 − b_p` and
//! `a ∈ {a_p, 1/2 − a_p}`, whichever makes `a + b + e = −n` with
//! `e = δ` or `γ − 1/2`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dirac;
use crate::error::{Error, Result};
use crate::kg;
use crate::model::{DeformationParams, DiracState, KgState, SpaceKind};
use crate::numerics::{integrate, QuadOptions};

/// θ for a radius.
pub fn theta_of_r(r: f64, eta: f64, space: SpaceKind) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r = {r} must be positive")));
    }
    if !(eta > 0.0) {
        return Err(Error::ZeroDeformation("the angle coordinate needs η > 0"));
    }
    let u = eta.sqrt() * r;
    match space {
        SpaceKind::DeSitter => Ok(u.asinh()),
        SpaceKind::AntiDeSitter => {
            if u >= 1.0 {
                Err(Error::Domain(format!(
                    "r = {r} is outside r < 1/√η = {}",
                    1.0 / eta.sqrt()
                )))
            } else {
                Ok(u.asin())
            }
        }
    }
}

/// Radius for an angle; AdS angles in (π/2, π) map back onto the same radii.
pub fn r_of_theta(theta: f64, eta: f64, space: SpaceKind) -> f64 {
    match space {
        SpaceKind::DeSitter => theta.sinh() / eta.sqrt(),
        SpaceKind::AntiDeSitter => theta.sin() / eta.sqrt(),
    }
}

/// ϰ = √(1 + sηr²)/(√(sη) r); complex in anti-de Sitter.
pub fn x_of_r(r: f64, eta: f64, space: SpaceKind) -> Result<C64> {
    let theta = theta_of_r(r, eta, space)?;
    Ok(match space {
        SpaceKind::DeSitter => C64::new(1.0 / theta.tanh(), 0.0),
        SpaceKind::AntiDeSitter => C64::new(0.0, -1.0 / theta.tan()),
    })
}

/// y = (1 − ϰ)/2.
pub fn y_of_r(r: f64, eta: f64, space: SpaceKind) -> Result<C64> {
    Ok(y_of_theta(theta_of_r(r, eta, space)?, space))
}

/// y at an angle; real in dS, complex in AdS.
pub fn y_of_theta(theta: f64, space: SpaceKind) -> C64 {
    match space {
        SpaceKind::DeSitter => {
            let w = (-2.0 * theta).exp();
            C64::new(-w / -(-2.0 * theta).exp_m1(), 0.0)
        }
        SpaceKind::AntiDeSitter => C64::new(0.5, 0.5 / theta.tan()),
    }
}

fn raw_exponents(base: f64, z_mu: f64, signed_eta: f64, x: f64, om: f64) -> Result<(C64, C64)> {
    if signed_eta == 0.0 {
        return Err(Error::ZeroDeformation("the exponents contain 1/√η"));
    }
    let eta = signed_eta.abs();
    let beta = z_mu * x / eta.sqrt();
    let (ra, rb) = if signed_eta > 0.0 {
        let core = base + om / eta;
        let (ra, rb) = (core - 2.0 * beta, core + 2.0 * beta);
        if ra < 0.0 || rb < 0.0 {
            return Err(Error::OutOfDomain(format!(
                "exponent radicand {:e} < 0 at E/mc² = {x}",
                ra.min(rb)
            )));
        }
        (C64::new(ra, 0.0), C64::new(rb, 0.0))
    } else {
        let core = base - om / eta;
        (C64::new(core, 2.0 * beta), C64::new(core, 0.0 - 2.0 * beta))
    };
    Ok((0.25 + 0.5 * ra.sqrt(), 0.25 + 0.5 * rb.sqrt()))
}

/// The exponent pair `(a, b)` with principal roots, before branch selection.
/// `b` carries the `+2ZμE` term. `signed_eta` is negative for anti-de Sitter.
pub fn kg_exponents(delta_sq: f64, z_mu: f64, signed_eta: f64, x: f64) -> Result<(C64, C64)> {
    raw_exponents(delta_sq + 0.75, z_mu, signed_eta, x, (1.0 - x) * (1.0 + x))
}

/// Spin-1/2 analogue of [`kg_exponents`] (no 3/4 term).
pub fn dirac_exponents(gamma: f64, z_mu: f64, signed_eta: f64, x: f64) -> Result<(C64, C64)> {
    raw_exponents(gamma * gamma, z_mu, signed_eta, x, (1.0 - x) * (1.0 + x))
}

/// Picks the terminating pair from the raw exponents.
fn physical_exponents(raw: (C64, C64), e: f64, n: u32, space: SpaceKind) -> (C64, C64) {
    let (ap, bp) = raw;
    let b = 0.5 - bp;
    let miss = |a: C64| (a + b + e + n as f64).norm();
    let a = if miss(ap) <= miss(0.5 - ap) { ap } else { 0.5 - ap };
    match space {
        // Keep the pair exactly conjugate so that y^a (1−y)^b is real.
        SpaceKind::AntiDeSitter => (a, a.conj()),
        SpaceKind::DeSitter => (C64::new(a.re, 0.0), C64::new(b.re, 0.0)),
    }
}

/// Series coefficients `(−n)_k (B)_k / ((C)_k k!)`, `k = 0..=n`.
pub fn hyp_coefficients(n: u32, b: C64, c: C64) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(C64::new(1.0, 0.0));
    for j in 0..n {
        let cj = c + j as f64;
        if cj.norm() < 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "C = {c} makes the series denominator vanish at k = {}",
                j + 1
            )));
        }
        let jf = j as f64;
        let next = out[j as usize] * (jf - n as f64) * (b + jf) / (cj * (jf + 1.0));
        out.push(next);
    }
    Ok(out)
}

/// `F(−n, B; C; y)`.
pub fn hyp_polynomial(n: u32, b: C64, c: C64, y: C64) -> Result<C64> {
    Ok(horner(&hyp_coefficients(n, b, c)?, y).0)
}

/// Value, first and second derivative.
fn horner(coeffs: &[C64], y: C64) -> (C64, C64, C64) {
    let zero = C64::new(0.0, 0.0);
    let (mut p, mut d1, mut d2) = (zero, zero, zero);
    for &c in coeffs.iter().rev() {
        d2 = d2 * y + 2.0 * d1;
        d1 = d1 * y + p;
        p = p * y + c;
    }
    (p, d1, d2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadialKind {
    KleinGordon,
    DiracG2,
}

/// `Ξ` and its θ-derivatives divided by the real factor `e^L`, where
/// `L = ln(y^a (1−y)^b)`, together with `L − ln r / 2`.
#[derive(Debug, Clone, Copy)]
struct Jet {
    log_pref: f64,
    ln_r: f64,
    xi: C64,
    xi1: C64,
    xi2: C64,
}

/// A terminating hypergeometric radial function.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub kind: RadialKind,
    pub a: C64,
    pub b: C64,
    /// Polynomial degree.
    pub n: u32,
    /// Second upper parameter, `a + b − e`.
    pub hyp_b: C64,
    /// Lower parameter, `1/2 + 2a`.
    pub hyp_c: C64,
    pub coeffs: Vec<C64>,
    /// `ln` of the normalization constant, once computed.
    pub log_norm: Option<f64>,
    pub space: SpaceKind,
    pub eta: f64,
    pub z_mu: f64,
    /// E/mc².
    pub x: f64,
    /// δ (spin-0) or γ − 1/2 (spin-1/2).
    pub exponent: f64,
    /// Unit factor that makes the function real.
    phase: C64,
}

impl RadialSolution {
    fn build(
        kind: RadialKind,
        raw: (C64, C64),
        exponent: f64,
        n: u32,
        z_mu: f64,
        deformation: &DeformationParams,
        x: f64,
    ) -> Result<Self> {
        let space = deformation.space();
        let (a, b) = physical_exponents(raw, exponent, n, space);
        let hyp_b = a + b - exponent;
        let hyp_c = 0.5 + 2.0 * a;
        let coeffs = hyp_coefficients(n, hyp_b, hyp_c)?;
        let mut sol = Self {
            kind,
            a,
            b,
            n,
            hyp_b,
            hyp_c,
            coeffs,
            log_norm: None,
            space,
            eta: deformation.eta(),
            z_mu,
            x,
            exponent,
            phase: C64::new(1.0, 0.0),
        };
        sol.phase = sol.fix_phase();
        Ok(sol)
    }

    /// Spin-0 solution at `x = E/mc²` (normally the closed-form level).
    pub fn kg(state: &KgState, z_mu: f64, deformation: &DeformationParams, x: f64) -> Result<Self> {
        Self::kg_at(state, z_mu, deformation, x, (1.0 - x) * (1.0 + x))
    }

    /// As [`RadialSolution::kg`] with `1 − x²` supplied separately.
    pub fn kg_at(
        state: &KgState,
        z_mu: f64,
        deformation: &DeformationParams,
        x: f64,
        one_minus_x_sq: f64,
    ) -> Result<Self> {
        let d2 = kg::delta_squared(state.l(), z_mu);
        if !(d2 > 0.0) {
            return Err(Error::ComplexExponent(format!("ℓ+1/2 > Zμ (ℓ = {})", state.l())));
        }
        let raw = raw_exponents(d2 + 0.75, z_mu, deformation.signed_eta(), x, one_minus_x_sq)?;
        Self::build(
            RadialKind::KleinGordon,
            raw,
            d2.sqrt(),
            state.radial(),
            z_mu,
            deformation,
            x,
        )
    }

    /// Spin-1/2 `g₂` component.
    pub fn dirac_g2(state: &DiracState, z_mu: f64, deformation: &DeformationParams, x: f64) -> Result<Self> {
        Self::dirac_g2_at(state, z_mu, deformation, x, (1.0 - x) * (1.0 + x))
    }

    pub fn dirac_g2_at(
        state: &DiracState,
        z_mu: f64,
        deformation: &DeformationParams,
        x: f64,
        one_minus_x_sq: f64,
    ) -> Result<Self> {
        let g = dirac::gamma(state.kappa(), z_mu)?;
        let raw = raw_exponents(g * g, z_mu, deformation.signed_eta(), x, one_minus_x_sq)?;
        Self::build(RadialKind::DiracG2, raw, g - 0.5, state.radial(), z_mu, deformation, x)
    }

    /// `a + b + e`, which equals `−n` when the series terminates.
    pub fn termination(&self) -> C64 {
        self.a + self.b + self.exponent
    }

    /// The parameter `A = a + b − e` written with the physical exponents;
    /// this is the non-terminating parameter.
    pub fn other_parameter(&self) -> C64 {
        self.hyp_b
    }

    /// Upper end of the θ range on which the function is studied: ∞ in dS,
    /// π in AdS (the second sheet θ > π/2 is where regularity is imposed).
    pub fn theta_max(&self) -> f64 {
        match self.space {
            SpaceKind::DeSitter => f64::INFINITY,
            SpaceKind::AntiDeSitter => std::f64::consts::PI,
        }
    }

    fn beta(&self) -> f64 {
        self.z_mu * self.x / self.eta.sqrt()
    }

    fn jet(&self, theta: f64) -> Jet {
        let (ab, im2) = ((self.a + self.b).re, 2.0 * self.a.im);
        let (l, l1, l2, ln_r, y, y1, y2);
        match self.space {
            SpaceKind::DeSitter => {
                let w = (-2.0 * theta).exp();
                let q = -(-2.0 * theta).exp_m1();
                let a = self.a.re;
                l = -2.0 * a * theta - ab * q.ln();
                l1 = -2.0 * a - 2.0 * ab * w / q;
                l2 = 4.0 * ab * w / (q * q);
                ln_r = theta + (0.5 * q).ln() - 0.5 * self.eta.ln();
                y = C64::new(-w / q, 0.0);
                y1 = C64::new(2.0 * w / (q * q), 0.0);
                y2 = C64::new(-4.0 * w * (1.0 + w) / (q * q * q), 0.0);
            }
            SpaceKind::AntiDeSitter => {
                let (s, c) = theta.sin_cos();
                l = -ab * (2.0 * s).ln() - im2 * (FRAC_PI_2 - theta);
                l1 = -ab * c / s + im2;
                l2 = ab / (s * s);
                ln_r = s.ln() - 0.5 * self.eta.ln();
                y = C64::new(0.5, 0.5 * c / s);
                y1 = C64::new(0.0, -0.5 / (s * s));
                y2 = C64::new(0.0, c / (s * s * s));
            }
        }
        let (f, fy, fyy) = horner(&self.coeffs, y);
        let xi = f;
        let xi1 = l1 * f + fy * y1;
        let xi2 = (l2 + l1 * l1) * f + 2.0 * l1 * fy * y1 + fyy * y1 * y1 + fy * y2;
        Jet {
            log_pref: l - 0.5 * ln_r,
            ln_r,
            xi: xi * self.phase,
            xi1: xi1 * self.phase,
            xi2: xi2 * self.phase,
        }
    }

    /// S/(√η r): coth θ or cot θ, and its θ-derivative.
    fn c_and_dc(&self, theta: f64) -> (f64, f64) {
        match self.space {
            SpaceKind::DeSitter => {
                let s = theta.sinh();
                (1.0 / theta.tanh(), -1.0 / (s * s))
            }
            SpaceKind::AntiDeSitter => {
                let s = theta.sin();
                (theta.cos() / s, -1.0 / (s * s))
            }
        }
    }

    fn reference_thetas(&self) -> Vec<f64> {
        let m = self.n as usize + 3;
        (1..=m)
            .map(|k| match self.space {
                SpaceKind::DeSitter => 0.37 * k as f64,
                SpaceKind::AntiDeSitter => 0.97 * FRAC_PI_2 * k as f64 / m as f64,
            })
            .collect()
    }

    /// The polynomial is real up to one constant phase; rotate it away using
    /// the largest of a few fixed reference samples.
    fn fix_phase(&self) -> C64 {
        let best = self
            .reference_thetas()
            .into_iter()
            .map(|t| horner(&self.coeffs, y_of_theta(t, self.space)).0)
            .max_by(|p, q| p.norm().total_cmp(&q.norm()))
            .unwrap_or(C64::new(1.0, 0.0));
        if best.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            best.conj() / best.norm()
        }
    }

    /// Largest imaginary part left after the phase rotation, relative to the
    /// modulus, over the reference samples.
    pub fn phase_defect(&self) -> f64 {
        self.reference_thetas()
            .into_iter()
            .map(|t| {
                let j = self.jet(t);
                j.xi.im.abs() / j.xi.norm().max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }

    fn norm_factor(&self) -> f64 {
        self.log_norm.unwrap_or(0.0)
    }

    /// ψ (spin-0) or g₂ (spin-1/2) at angle θ.
    pub fn value_at_theta(&self, theta: f64) -> f64 {
        let j = self.jet(theta);
        (j.log_pref + self.norm_factor()).exp() * j.xi.re
    }

    /// ψ (spin-0) or g₂ (spin-1/2) at radius `r` (units of ħ/mc).
    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.value_at_theta(theta_of_r(r, self.eta, self.space)?))
    }

    pub fn sample(&self, radii: &[f64]) -> Result<Vec<f64>> {
        radii.iter().map(|&r| self.value(r)).collect()
    }

    /// Sign changes of the polynomial factor over the open θ range.
    pub fn count_nodes(&self) -> usize {
        let (lo, hi) = match self.space {
            SpaceKind::DeSitter => (1e-9, 40.0),
            SpaceKind::AntiDeSitter => (1e-9, std::f64::consts::PI - 1e-9),
        };
        count_sign_changes(|t| self.jet(t).xi.re, lo, hi, 20_000)
    }

    /// `|ψ|² r² dr/S` in θ, as `(log weight, factor)`.
    fn density(&self, theta: f64) -> (f64, f64) {
        let j = self.jet(theta);
        (2.0 * (j.log_pref + j.ln_r) - 0.5 * self.eta.ln(), j.xi.norm_sqr())
    }

    /// False for de Sitter solutions that grow as r → ∞ (`a ≤ 1/4`).
    pub fn is_normalizable(&self) -> bool {
        match self.space {
            SpaceKind::AntiDeSitter => true,
            SpaceKind::DeSitter => self.a.re > 0.25,
        }
    }

    /// Upper θ limit of the normalization integral.
    fn physical_theta_end(&self, density: &dyn Fn(f64) -> (f64, f64)) -> Result<f64> {
        match self.space {
            SpaceKind::AntiDeSitter => Ok(FRAC_PI_2),
            SpaceKind::DeSitter => {
                let rate = 4.0 * self.a.re - 1.0;
                if !(rate > 0.0) {
                    return Err(Error::NonIntegrable(format!(
                        "a = {:.6} ≤ 1/4: the solution grows as r → ∞",
                        self.a.re
                    )));
                }
                theta_tail(
                    density,
                    (2.0 * (self.n as f64 + self.exponent.abs() + 2.0) + 100.0) / rate,
                )
            }
        }
    }

    /// Normalizes under the deformed measure and returns the constant
    /// (as its logarithm, since it can exceed the f64 range).
    pub fn normalize(&mut self) -> Result<f64> {
        self.log_norm = None;
        let dens = |t: f64| self.density(t);
        let end = self.physical_theta_end(&dens)?;
        let (log_i, _) = log_integral(&dens, 0.0, end)?;
        let ln_c = -0.5 * log_i;
        self.log_norm = Some(ln_c);
        Ok(ln_c)
    }

    /// Norm integral with the current constant (1 after `normalize`).
    pub fn norm_integral(&self) -> Result<f64> {
        let c = self.norm_factor();
        let dens = |t: f64| {
            let (l, f) = self.density(t);
            (l + 2.0 * c, f)
        };
        let end = self.physical_theta_end(&dens)?;
        let (log_i, _) = log_integral(&dens, 0.0, end)?;
        Ok(log_i.exp())
    }

    /// Normalization profile over the physical range; the last cumulative
    /// entry is the norm integral.
    pub fn norm_profile(&self, intervals: usize) -> Result<Vec<NormSample>> {
        let c = self.norm_factor();
        let dens = |t: f64| {
            let (l, f) = self.density(t);
            (l + 2.0 * c, f)
        };
        let end = self.physical_theta_end(&dens)?;
        profile(&dens, end, intervals, self.eta, self.space)
    }
}

fn count_sign_changes(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for i in 0..=points {
        let t = lo + (hi - lo) * i as f64 / points as f64;
        let v = f(t);
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

fn log_density(d: &dyn Fn(f64) -> (f64, f64), t: f64) -> f64 {
    let (l, f) = d(t);
    l + f.ln()
}

/// Extends the de Sitter θ range until the density is 1e-35 of its peak.
fn theta_tail(d: &dyn Fn(f64) -> (f64, f64), guess: f64) -> Result<f64> {
    let mut end = guess;
    for _ in 0..60 {
        let grid = clustered_grid(0.0, end, 400);
        let peak = grid[1..]
            .iter()
            .map(|&t| log_density(d, t))
            .filter(|v| v.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        let tail = log_density(d, end);
        if peak.is_finite() && (tail < peak - 80.0 || tail == f64::NEG_INFINITY) {
            return Ok(end);
        }
        end *= 2.0;
    }
    Err(Error::NonIntegrable("the density does not decay".into()))
}

/// Breakpoints on `[lo, hi]` clustered towards `lo`.
fn clustered_grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let s: f64 = 12.0;
    (0..=m)
        .map(|i| lo + (hi - lo) * (s * i as f64 / m as f64).exp_m1() / s.exp_m1())
        .collect()
}

/// `ln ∫ exp(l(θ)) f(θ) dθ` for a density given in log form; returns the
/// value and the quadrature's relative error estimate.
fn log_integral(d: &dyn Fn(f64) -> (f64, f64), lo: f64, hi: f64) -> Result<(f64, f64)> {
    let grid = clustered_grid(lo, hi, 400);
    let offset = grid[1..grid.len() - 1]
        .iter()
        .map(|&t| log_density(d, t))
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if !offset.is_finite() {
        return Err(Error::NonIntegrable("density vanishes on the sample grid".into()));
    }
    let opts = QuadOptions {
        abs_tol: 1e-18 * (hi - lo),
        rel_tol: 1e-13,
        max_intervals: 400,
    };
    let mut total = 0.0;
    let mut err = 0.0;
    for w in grid.windows(2) {
        let r = integrate(
            |t| {
                let (l, f) = d(t);
                if f == 0.0 {
                    0.0
                } else {
                    (l - offset).exp() * f
                }
            },
            w[0],
            w[1],
            opts,
        )?;
        total += r.value;
        err += r.error;
    }
    if !(total > 0.0) {
        return Err(Error::NonIntegrable(format!("integral {total:e} is not positive")));
    }
    Ok((total.ln() + offset, err / total))
}

/// One point of a normalization profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub theta: f64,
    pub r: f64,
    /// Probability density per unit θ.
    pub density: f64,
    /// ∫ density dθ from 0 to θ.
    pub cumulative: f64,
}

/// Density and running integral at `intervals + 1` clustered angles on
/// `[0, hi]`. The density must already carry the normalization constant.
fn profile(
    d: &dyn Fn(f64) -> (f64, f64),
    hi: f64,
    intervals: usize,
    eta: f64,
    space: SpaceKind,
) -> Result<Vec<NormSample>> {
    let grid = clustered_grid(0.0, hi, intervals.max(1));
    let value = |t: f64| {
        let (l, f) = d(t);
        if f == 0.0 {
            0.0
        } else {
            l.exp() * f
        }
    };
    let opts = QuadOptions {
        abs_tol: 1e-18 * hi,
        rel_tol: 1e-13,
        max_intervals: 400,
    };
    let mut out = Vec::with_capacity(grid.len());
    let mut cumulative = 0.0;
    for (i, &t) in grid.iter().enumerate() {
        if i > 0 {
            cumulative += integrate(value, grid[i - 1], t, opts)?.value;
        }
        out.push(NormSample {
            theta: t,
            r: r_of_theta(t, eta, space),
            density: if t > 0.0 { value(t) } else { 0.0 },
            cumulative,
        });
    }
    Ok(out)
}

/// Both spin-1/2 components with the mixing to `(f₁, f₂)`.
#[derive(Debug, Clone)]
pub struct DiracRadialPair {
    pub g2: RadialSolution,
    pub kappa: i32,
    pub gamma: f64,
    /// X = (γ − κ)/(Zμ).
    pub mixing_x: f64,
    /// `1 − κx/γ`, the factor in front of g₁.
    pub prefactor: f64,
}

/// Radial components at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracComponents {
    pub r: f64,
    pub g1: f64,
    pub g2: f64,
    pub f1: f64,
    pub f2: f64,
}

/// Reduced components and θ-derivatives sharing the factor `e^L r^{-1/2}`.
struct DiracJet {
    log_pref: f64,
    ln_r: f64,
    g: [C64; 2],
    dg: [C64; 2],
    c: f64,
}

/// f = P⁻¹ g for P = [[1, X], [X, 1]].
pub fn unmix(x: f64, g1: f64, g2: f64) -> (f64, f64) {
    let det = 1.0 - x * x;
    ((g1 - x * g2) / det, (g2 - x * g1) / det)
}

/// g = P f.
pub fn mix(x: f64, f1: f64, f2: f64) -> (f64, f64) {
    (f1 + x * f2, x * f1 + f2)
}

/// X = (γ − κ)/(Zμ).
pub fn mixing_x(kappa: i32, z_mu: f64) -> Result<f64> {
    if z_mu <= 0.0 {
        return Err(Error::InvalidParameter("the mixing needs Zμ > 0".into()));
    }
    let g = dirac::gamma(kappa, z_mu)?;
    Ok((g - kappa as f64) / z_mu)
}

impl DiracRadialPair {
    pub fn new(state: &DiracState, z_mu: f64, deformation: &DeformationParams, x: f64) -> Result<Self> {
        Self::new_at(state, z_mu, deformation, x, (1.0 - x) * (1.0 + x))
    }

    pub fn new_at(
        state: &DiracState,
        z_mu: f64,
        deformation: &DeformationParams,
        x: f64,
        one_minus_x_sq: f64,
    ) -> Result<Self> {
        let gamma = dirac::gamma(state.kappa(), z_mu)?;
        if gamma <= 0.0 {
            return Err(Error::InvalidParameter("γ must be positive".into()));
        }
        let mixing_x = mixing_x(state.kappa(), z_mu)?;
        let prefactor = 1.0 - state.kappa() as f64 * x / gamma;
        if prefactor.abs() < 1e-12 {
            return Err(Error::SingularMixing);
        }
        Ok(Self {
            g2: RadialSolution::dirac_g2_at(state, z_mu, deformation, x, one_minus_x_sq)?,
            kappa: state.kappa(),
            gamma,
            mixing_x,
            prefactor,
        })
    }

    fn jet(&self, theta: f64) -> DiracJet {
        let s = &self.g2;
        let j = s.jet(theta);
        let (c, dc) = s.c_and_dc(theta);
        let se = s.eta.sqrt();
        let k = 0.5 - self.gamma;
        let bg = s.beta() / self.gamma;
        let phi = j.xi1 + k * c * j.xi + bg * j.xi;
        let dphi = j.xi2 + k * (dc * j.xi + c * j.xi1) + bg * j.xi1;
        let g1 = se / self.prefactor * phi;
        let dg1 = se / self.prefactor * (dphi - 0.5 * c * phi);
        let g2 = j.xi;
        let dg2 = j.xi1 - 0.5 * c * j.xi;
        DiracJet {
            log_pref: j.log_pref,
            ln_r: j.ln_r,
            g: [g1, g2],
            dg: [dg1, dg2],
            c,
        }
    }

    fn f_of(&self, g: [C64; 2]) -> [C64; 2] {
        let x = self.mixing_x;
        let det = 1.0 - x * x;
        [(g[0] - x * g[1]) / det, (g[1] - x * g[0]) / det]
    }

    pub fn components_at_theta(&self, theta: f64) -> DiracComponents {
        let j = self.jet(theta);
        let scale = (j.log_pref + self.g2.norm_factor()).exp();
        let f = self.f_of(j.g);
        DiracComponents {
            r: j.ln_r.exp(),
            g1: scale * j.g[0].re,
            g2: scale * j.g[1].re,
            f1: scale * f[0].re,
            f2: scale * f[1].re,
        }
    }

    pub fn components(&self, r: f64) -> Result<DiracComponents> {
        let t = theta_of_r(r, self.g2.eta, self.g2.space)?;
        let mut c = self.components_at_theta(t);
        c.r = r;
        Ok(c)
    }

    pub fn sample(&self, radii: &[f64]) -> Result<Vec<DiracComponents>> {
        radii.iter().map(|&r| self.components(r)).collect()
    }

    /// `(f₁² + f₂²) r² dr/S` in θ.
    fn density(&self, theta: f64) -> (f64, f64) {
        let j = self.jet(theta);
        let f = self.f_of(j.g);
        (
            2.0 * (j.log_pref + j.ln_r) - 0.5 * self.g2.eta.ln(),
            f[0].norm_sqr() + f[1].norm_sqr(),
        )
    }

    pub fn normalize(&mut self) -> Result<f64> {
        self.g2.log_norm = None;
        let dens = |t: f64| self.density(t);
        let end = self.g2.physical_theta_end(&dens)?;
        let (log_i, _) = log_integral(&dens, 0.0, end)?;
        let ln_c = -0.5 * log_i;
        self.g2.log_norm = Some(ln_c);
        Ok(ln_c)
    }

    pub fn norm_integral(&self) -> Result<f64> {
        let c = self.g2.norm_factor();
        let dens = |t: f64| {
            let (l, f) = self.density(t);
            (l + 2.0 * c, f)
        };
        let end = self.g2.physical_theta_end(&dens)?;
        Ok(log_integral(&dens, 0.0, end)?.0.exp())
    }

    pub fn norm_profile(&self, intervals: usize) -> Result<Vec<NormSample>> {
        let c = self.g2.norm_factor();
        let dens = |t: f64| {
            let (l, f) = self.density(t);
            (l + 2.0 * c, f)
        };
        let end = self.g2.physical_theta_end(&dens)?;
        profile(&dens, end, intervals, self.g2.eta, self.g2.space)
    }

    /// Relative residuals of the two first-order equations for `(f₁, f₂)`
    /// at angle θ: each residual divided by the sum of its term magnitudes.
    pub fn coupled_residual(&self, theta: f64) -> (f64, f64) {
        let j = self.jet(theta);
        let s = &self.g2;
        let se = s.eta.sqrt();
        let k = self.kappa as f64;
        let f = self.f_of(j.g);
        let df = self.f_of(j.dg);
        let coul = s.z_mu * se * j.c;
        let t40 = [(s.x - 1.0 + coul) * f[0], -se * (k - 1.0) * j.c * f[1], se * df[1]];
        let t41 = [(s.x + 1.0 + coul) * f[1], -se * (k + 1.0) * j.c * f[0], -se * df[0]];
        let rel = |t: [C64; 3]| {
            let sum: C64 = t.iter().sum();
            let mag: f64 = t.iter().map(|v| v.norm()).sum();
            if mag == 0.0 {
                0.0
            } else {
                sum.norm() / mag
            }
        };
        (rel(t40), rel(t41))
    }
}

/// Normalized spin-0 radial function at the closed-form level.
pub fn radial_kg(state: &KgState, z: u32, deformation: &DeformationParams, mu: f64) -> Result<RadialSolution> {
    let z_mu = z as f64 * mu;
    let (x, om) = kg::energy_ratio_with_complement(state, z_mu, deformation.signed_eta())?;
    let mut s = RadialSolution::kg_at(state, z_mu, deformation, x, om)?;
    s.normalize()?;
    Ok(s)
}

/// Normalized spin-1/2 radial pair at the closed-form level.
pub fn radial_dirac(state: &DiracState, z: u32, deformation: &DeformationParams, mu: f64) -> Result<DiracRadialPair> {
    let z_mu = z as f64 * mu;
    let (x, om) = dirac::energy_ratio_with_complement(state, z_mu, deformation.signed_eta())?;
    let mut p = DiracRadialPair::new_at(state, z_mu, deformation, x, om)?;
    p.normalize()?;
    Ok(p)
}

/// Overlap weight for spin-0 states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverlapWeight {
    /// The bare deformed measure.
    Plain,
    /// The conserved Klein-Gordon charge density, `E₁ + E₂ + 2Zμ S/r`.
    Charge,
}

/// Integration range for overlaps in anti-de Sitter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverlapDomain {
    /// `r < 1/√η`, i.e. θ ∈ (0, π/2).
    Physical,
    /// θ ∈ (0, π), the interval on which regularity fixes the spectrum.
    Full,
}

/// Normalized overlap `⟨1|2⟩ / √(⟨1|1⟩⟨2|2⟩)` of two spin-0 solutions
/// that share the space and deformation. The domain only matters in AdS.
pub fn kg_overlap(
    s1: &RadialSolution,
    s2: &RadialSolution,
    weight: OverlapWeight,
    domain: OverlapDomain,
) -> Result<f64> {
    if s1.space != s2.space || s1.eta != s2.eta || s1.z_mu != s2.z_mu {
        return Err(Error::InvalidParameter("overlap needs a common space, η and Zμ".into()));
    }
    let se = s1.eta.sqrt();
    let w = |theta: f64, x1: f64, x2: f64| match weight {
        OverlapWeight::Plain => 1.0,
        OverlapWeight::Charge => x1 + x2 + 2.0 * s1.z_mu * se * s1.c_and_dc(theta).0,
    };
    // ∫ = value · e^{log scale}; the density can change sign, so the scale
    // comes from the integral of its modulus.
    let signed = |p: &RadialSolution, q: &RadialSolution| -> Result<(f64, f64)> {
        let d = |t: f64| {
            let (jp, jq) = (p.jet(t), q.jet(t));
            (
                jp.log_pref + jq.log_pref + 2.0 * jp.ln_r - 0.5 * p.eta.ln(),
                jp.xi.re * jq.xi.re * w(t, p.x, q.x),
            )
        };
        let end = match (p.space, domain) {
            (SpaceKind::AntiDeSitter, OverlapDomain::Physical) => FRAC_PI_2,
            (SpaceKind::AntiDeSitter, OverlapDomain::Full) => std::f64::consts::PI,
            (SpaceKind::DeSitter, _) => {
                let e1 = p.physical_theta_end(&|t| p.density(t))?;
                let e2 = q.physical_theta_end(&|t| q.density(t))?;
                e1.max(e2)
            }
        };
        let abs = |t: f64| {
            let (l, f) = d(t);
            (l, f.abs())
        };
        let (log_abs, _) = log_integral(&abs, 0.0, end)?;
        let grid = clustered_grid(0.0, end, 400);
        let opts = QuadOptions {
            abs_tol: 1e-18,
            rel_tol: 1e-13,
            max_intervals: 400,
        };
        let mut total = 0.0;
        for g in grid.windows(2) {
            total += integrate(
                |t| {
                    let (l, f) = d(t);
                    if f == 0.0 {
                        0.0
                    } else {
                        (l - log_abs).exp() * f
                    }
                },
                g[0],
                g[1],
                opts,
            )?
            .value;
        }
        Ok((total, log_abs))
    };
    let (v12, l12) = signed(s1, s2)?;
    let (v11, l11) = signed(s1, s1)?;
    let (v22, l22) = signed(s2, s2)?;
    if !(v11 > 0.0 && v22 > 0.0) {
        return Err(Error::NonIntegrable("self-overlap is not positive".into()));
    }
    Ok(v12 / (v11 * v22).sqrt() * (l12 - 0.5 * (l11 + l22)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sommerfeld_mu, UnitSystem};
    use approx::assert_relative_eq;

    fn def(space: SpaceKind, eta: f64) -> DeformationParams {
        DeformationParams::from_eta(space, eta, &UnitSystem::natural()).unwrap()
    }

    const GRID_Z: [u32; 3] = [1, 5, 20];
    const GRID_ETA: [f64; 3] = [1e-8, 1e-4, 1e-2];

    #[test]
    fn transforms_at_reference_points() {
        let eta: f64 = 1e-4;
        let r = 1.0 / eta.sqrt();
        let k = (1.0 + eta * r * r).sqrt() / (eta.sqrt() * r);
        assert_relative_eq!(k, 2f64.sqrt(), epsilon = 1e-14);
        let y = y_of_r(r, eta, SpaceKind::DeSitter).unwrap();
        assert_relative_eq!(y.re, (1.0 - 2f64.sqrt()) / 2.0, epsilon = 1e-14);
        assert_eq!(y.im, 0.0);
        assert!(y_of_r(1e9, eta, SpaceKind::DeSitter).unwrap().re.abs() < 1e-8);
        assert!(y_of_r(1e-9, eta, SpaceKind::DeSitter).unwrap().re < -1e6);
        assert!(y_of_r(1.1 * r, eta, SpaceKind::AntiDeSitter).is_err());
        assert!(y_of_r(-1.0, eta, SpaceKind::DeSitter).is_err());
    }

    #[test]
    fn exponents_trivial_cases() {
        for eta in [1e-4, -1e-4] {
            let (a, b) = kg_exponents(0.3, 0.0, eta, 0.9).unwrap();
            assert_relative_eq!(a.re, b.re, epsilon = 1e-15);
            assert_relative_eq!(a.im, b.im, epsilon = 1e-15);
            let (a, b) = dirac_exponents(0.8, 0.0, eta, 0.9).unwrap();
            assert_relative_eq!(a.re, b.re, epsilon = 1e-15);
        }
        let (a, _) = kg_exponents(0.3, 0.0, 1e-4, 1.0).unwrap();
        assert_relative_eq!(a.re, 0.25 + (0.3f64 + 0.75).sqrt() / 2.0, epsilon = 1e-15);
        let (a, _) = dirac_exponents(0.8, 0.0, 1e-4, 1.0).unwrap();
        assert_relative_eq!(a.re, 0.25 + 0.4, epsilon = 1e-15);
        assert!(matches!(
            kg_exponents(0.3, 0.1, 0.0, 0.9),
            Err(Error::ZeroDeformation(_))
        ));
    }

    #[test]
    fn hypergeometric_polynomial_trivial_cases() {
        let b = C64::new(-0.7, 0.2);
        let c = C64::new(2.3, -0.1);
        for y in [-3.0, 0.4, 7.0] {
            assert_eq!(hyp_polynomial(0, b, c, C64::new(y, 0.0)).unwrap(), C64::new(1.0, 0.0));
            let p1 = hyp_polynomial(1, b, c, C64::new(y, 0.0)).unwrap();
            let expect = 1.0 - b / c * y;
            assert!((p1 - expect).norm() < 1e-15);
        }
        for n in 0..8 {
            assert_eq!(hyp_polynomial(n, b, c, C64::new(0.0, 0.0)).unwrap(), C64::new(1.0, 0.0));
        }
        assert!(hyp_polynomial(3, b, C64::new(-1.0, 0.0), C64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn termination_at_closed_form_levels() {
        let mu = sommerfeld_mu();
        for space in SpaceKind::BOTH {
            for eta in GRID_ETA {
                let d = def(space, eta);
                for z in GRID_Z {
                    let z_mu = z as f64 * mu;
                    for s in KgState::all_up_to(6) {
                        let (x, om) = kg::energy_ratio_with_complement(&s, z_mu, d.signed_eta()).unwrap();
                        let sol = RadialSolution::kg_at(&s, z_mu, &d, x, om).unwrap();
                        assert!(
                            (sol.termination() + sol.n as f64).norm() < 1e-10,
                            "{space} {eta} {z} {s:?}"
                        );
                        assert_eq!(sol.coeffs[0], C64::new(1.0, 0.0));
                    }
                    for s in DiracState::all_up_to(6) {
                        let (x, om) = dirac::energy_ratio_with_complement(&s, z_mu, d.signed_eta()).unwrap();
                        let sol = RadialSolution::dirac_g2_at(&s, z_mu, &d, x, om).unwrap();
                        assert!(
                            (sol.termination() + sol.n as f64).norm() < 1e-10,
                            "{space} {eta} {z} {s:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn node_count_and_normalization() {
        let mu = sommerfeld_mu();
        let mut checked = 0;
        for space in SpaceKind::BOTH {
            for eta in GRID_ETA {
                let d = def(space, eta);
                for z in GRID_Z {
                    for s in KgState::all_up_to(6) {
                        let x = kg::energy_ratio(&s, z as f64 * mu, d.signed_eta()).unwrap();
                        if !RadialSolution::kg(&s, z as f64 * mu, &d, x).unwrap().is_normalizable() {
                            continue;
                        }
                        let sol = radial_kg(&s, z, &d, mu).unwrap();
                        assert_eq!(sol.count_nodes(), s.radial() as usize, "{space} {eta} {z} {s:?}");
                        assert!((sol.norm_integral().unwrap() - 1.0).abs() < 1e-8);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn ground_state_has_no_interior_zero() {
        let d = def(SpaceKind::AntiDeSitter, 1e-2);
        let s = radial_kg(&KgState::new(1, 0).unwrap(), 5, &d, sommerfeld_mu()).unwrap();
        let radii: Vec<f64> = (1..400).map(|i| i as f64 * 0.0249).collect();
        let v = s.sample(&radii).unwrap();
        assert!(v.iter().all(|&p| p > 0.0) || v.iter().all(|&p| p < 0.0));
    }

    #[test]
    fn growing_de_sitter_solution_is_rejected() {
        let d = def(SpaceKind::DeSitter, 1e-2);
        let err = radial_kg(&KgState::new(2, 0).unwrap(), 1, &d, sommerfeld_mu()).unwrap_err();
        assert!(matches!(err, Error::NonIntegrable(_)));
    }

    #[test]
    fn scaling_is_quadratic() {
        let d = def(SpaceKind::AntiDeSitter, 1e-4);
        let mut s = radial_kg(&KgState::new(2, 1).unwrap(), 5, &d, sommerfeld_mu()).unwrap();
        s.log_norm = s.log_norm.map(|c| c + 2f64.ln());
        assert_relative_eq!(s.norm_integral().unwrap(), 4.0, max_relative = 1e-10);
    }

    #[test]
    fn same_l_states_orthogonal_under_charge_weight() {
        let mu = sommerfeld_mu();
        for space in SpaceKind::BOTH {
            for eta in GRID_ETA {
                let d = def(space, eta);
                for z in GRID_Z {
                    for l in 0..2 {
                        let sols: Vec<_> = (l + 1..=4)
                            .filter_map(|n| radial_kg(&KgState::new(n, l).unwrap(), z, &d, mu).ok())
                            .collect();
                        for i in 0..sols.len() {
                            for j in i + 1..sols.len() {
                                let o =
                                    kg_overlap(&sols[i], &sols[j], OverlapWeight::Charge, OverlapDomain::Full).unwrap();
                                assert!(o.abs() < 1e-6, "{space} {eta} {z} {l}: {o}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn flat_limit_matches_coulomb_ground_state() {
        let mu = sommerfeld_mu();
        let z = 20u32;
        let st = KgState::new(1, 0).unwrap();
        let v = z as f64 * mu;
        let delta = kg::delta_squared(0, v).sqrt();
        let x0 = crate::level::undeformed_ratio(0.5 + delta, v);
        let k = (1.0 - x0 * x0).sqrt();
        let s = delta - 0.5;
        // ∫ C² r^{2s+2} e^{-2kr} dr = 1
        let ln_c = -0.5 * (libm::lgamma(2.0 * s + 3.0) - (2.0 * s + 3.0) * (2.0 * k).ln());
        for space in SpaceKind::BOTH {
            let sol = radial_kg(&st, z, &def(space, 1e-10), mu).unwrap();
            for r in [0.5 / k, 1.0 / k, 3.0 / k] {
                let flat = (ln_c + s * r.ln() - k * r).exp();
                assert_relative_eq!(sol.value(r).unwrap().abs(), flat, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn sample_ratio_matches_extended_precision() {
        let d = def(SpaceKind::DeSitter, 1e-4);
        let s = radial_kg(&KgState::new(2, 0).unwrap(), 20, &d, sommerfeld_mu()).unwrap();
        let ratio = s.value(0.05).unwrap() / s.value(0.3).unwrap();
        assert_relative_eq!(ratio, 1.079_452_689_704_622_6, max_relative = 1e-10);
    }

    #[test]
    fn mixing_round_trip_and_invariant() {
        let mu = sommerfeld_mu();
        for kappa in [-3, -2, -1, 1, 2, 3] {
            for z in [1u32, 20, 80] {
                let v = z as f64 * mu;
                let x = mixing_x(kappa, v).unwrap();
                let k = kappa as f64;
                assert!((x * x + 2.0 * k * x / v + 1.0).abs() < 1e-9 * (1.0 + (2.0 * k * x / v).abs()));
                let (g1, g2) = mix(x, 0.3, -1.7);
                let (f1, f2) = unmix(x, g1, g2);
                assert_relative_eq!(f1, 0.3, epsilon = 1e-12);
                assert_relative_eq!(f2, -1.7, epsilon = 1e-12);
            }
        }
        assert!(mixing_x(-1, 0.0).is_err());
    }

    #[test]
    fn dirac_pairs_solve_coupled_equations() {
        let mu = sommerfeld_mu();
        for space in SpaceKind::BOTH {
            for eta in GRID_ETA {
                let d = def(space, eta);
                for z in GRID_Z {
                    for s in DiracState::all_up_to(4) {
                        let p = match radial_dirac(&s, z, &d, mu) {
                            Ok(p) => p,
                            Err(Error::NonIntegrable(_)) => continue,
                            Err(e) => panic!("{e}"),
                        };
                        assert!((p.norm_integral().unwrap() - 1.0).abs() < 1e-8);
                        let tmax = match space {
                            SpaceKind::DeSitter => 10.0,
                            SpaceKind::AntiDeSitter => 1.5,
                        };
                        for k in 1..40 {
                            let (r40, r41) = p.coupled_residual(tmax * k as f64 / 40.0);
                            assert!(r40 < 1e-8 && r41 < 1e-8, "{space} {eta} {z} {s:?}: {r40} {r41}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn norm_profile_ends_at_one() {
        let mu = sommerfeld_mu();
        for space in SpaceKind::BOTH {
            let d = def(space, 1e-4);
            let s = radial_kg(&KgState::new(3, 1).unwrap(), 20, &d, mu).unwrap();
            let p = s.norm_profile(300).unwrap();
            assert!(p.windows(2).all(|w| w[1].cumulative >= w[0].cumulative));
            assert!((p.last().unwrap().cumulative - 1.0).abs() < 1e-8);
            let q = radial_dirac(&DiracState::new(2, -1).unwrap(), 20, &d, mu).unwrap();
            assert!((q.norm_profile(300).unwrap().last().unwrap().cumulative - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn plain_weight_and_half_domain_break_orthogonality() {
        let mu = sommerfeld_mu();
        let d = def(SpaceKind::AntiDeSitter, 1e-4);
        let s1 = radial_kg(&KgState::new(1, 0).unwrap(), 1, &d, mu).unwrap();
        let s2 = radial_kg(&KgState::new(2, 0).unwrap(), 1, &d, mu).unwrap();
        let plain = kg_overlap(&s1, &s2, OverlapWeight::Plain, OverlapDomain::Full).unwrap();
        let half = kg_overlap(&s1, &s2, OverlapWeight::Charge, OverlapDomain::Physical).unwrap();
        assert!(plain.abs() > 1e-5 && half.abs() > 1e-2, "{plain} {half}");
    }
}
